"""The four background-activity filters.

All filters share the same contract: given a time-sorted stream they return
one boolean per event (True = pass), judging each event against memory state
as left by all earlier events, then updating memory unconditionally. A cell
that was never written fails the check, so the first event at any cell is
discarded. Comparisons are inclusive: a gap exactly equal to the threshold
passes, so simultaneous events in one cell support each other.

``gf`` is the self-adjusting filter: it uses one timestamp cell per s*s
pixel group and recomputes its pass threshold every frame from the previous
frame's statistics,

    threshold = span * width * height / (s^2 * count * sf)

with an extra factor ``width`` on row-timestamp (celex) sensors, where up to
a full row of events shares one timestamp and should be counted as one.
``bs1`` keeps a cell per pixel and writes each event into its whole 3x3
neighborhood; ``bs2`` is the fixed-threshold subsampled variant; ``bs3``
keeps one cell per row and per column.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from . import _kernels
from .events import (
    MODE_CELEX,
    ConfigError,
    Events,
    GeometryError,
    SensorGeometry,
)
from .framing import Frame, FrameStats, frame_stats

FILTER_NAMES = ("gf", "bs1", "bs2", "bs3")

DEFAULT_FRAME_SIZE = 5000
DEFAULT_TGF_INIT_US = 1000
BASE_DT_US = 500
SF_STANDARD = Fraction(10)
SF_CELEX = Fraction(1, 5)

# Thresholds are capped so they stay addable to 32-bit timestamps in int64
# kernels; anything this large passes every event unconditionally anyway.
MAX_THRESHOLD_US = 2**62


def _as_fraction(value) -> Fraction:
    # Floats go through str() so 0.2 means exactly 1/5, not the nearest
    # binary double; thresholds are defined in exact integer arithmetic.
    if isinstance(value, float):
        return Fraction(str(value))
    return Fraction(value)


@dataclass(frozen=True)
class FilterConfig:
    """Shared filter parameters.

    ``sf`` defaults by sensor mode (10 standard, 0.2 celex). ``dt_fixed_us``
    is the fixed threshold of the baseline filters; when None each filter
    uses its own default: 500 us for bs1, 500*s^2 us for bs2, and
    max(1, 500 // width) us for bs3.
    """

    geometry: SensorGeometry
    s: int = 1
    sf: Fraction | None = None
    dt_fixed_us: int | None = None
    tgf_init_us: int = DEFAULT_TGF_INIT_US

    def __post_init__(self):
        if self.s < 1:
            raise ConfigError(f"subsampling factor must be at least 1, got {self.s}")
        if self.sf is None:
            sf = SF_CELEX if self.geometry.mode == MODE_CELEX else SF_STANDARD
        else:
            sf = _as_fraction(self.sf)
        if sf <= 0:
            raise ConfigError(f"scale factor must be positive, got {sf}")
        object.__setattr__(self, "sf", sf)
        if self.dt_fixed_us is not None and self.dt_fixed_us < 1:
            raise ConfigError(f"fixed threshold must be at least 1 us, got {self.dt_fixed_us}")
        if self.tgf_init_us < 1:
            raise ConfigError(f"initial threshold must be at least 1 us, got {self.tgf_init_us}")

    @property
    def grid_width(self) -> int:
        return -(-self.geometry.width // self.s)

    @property
    def grid_height(self) -> int:
        return -(-self.geometry.height // self.s)

    def bs1_dt_us(self) -> int:
        return self.dt_fixed_us if self.dt_fixed_us is not None else BASE_DT_US

    def bs2_dt_us(self) -> int:
        if self.dt_fixed_us is not None:
            return self.dt_fixed_us
        return BASE_DT_US * self.s * self.s

    def bs3_dt_us(self) -> int:
        if self.dt_fixed_us is not None:
            return self.dt_fixed_us
        return max(1, BASE_DT_US // self.geometry.width)


@dataclass(frozen=True)
class GfThreshold:
    """Adaptive threshold value and the frame it was derived from (-1 for
    the configured initial value)."""

    value: int
    frame_index: int


def _check_stats(stats: FrameStats) -> None:
    if stats.fn < 1:
        raise ConfigError(f"frame event count must be at least 1, got {stats.fn}")
    if stats.td < 0:
        raise ConfigError(f"frame time span must be non-negative, got {stats.td}")


def gf_threshold_exact(stats: FrameStats, config: FilterConfig) -> Fraction:
    """Adaptive threshold before flooring, as an exact rational.

    Standard mode: span * width * height / (s^2 * count * sf). Row-timestamp
    mode multiplies by another factor of width; note that with default
    settings this usually exceeds the frame span by orders of magnitude
    (shared-timestamp rows are rarely anywhere near full width), so most
    events pass. Tune ``sf`` upward to make it bite.
    """
    _check_stats(stats)
    geometry = config.geometry
    numerator = Fraction(stats.td * geometry.width * geometry.height)
    if geometry.mode == MODE_CELEX:
        numerator *= geometry.width
    return numerator / (config.s * config.s * stats.fn * config.sf)


def gf_threshold(stats: FrameStats, config: FilterConfig, frame_index: int = 0) -> GfThreshold:
    """Adaptive threshold in whole microseconds: floored, clamped to >= 1.

    Pure integer arithmetic, so the result is exact for any magnitude.
    """
    _check_stats(stats)
    geometry = config.geometry
    numerator = stats.td * geometry.width * geometry.height * config.sf.denominator
    if geometry.mode == MODE_CELEX:
        numerator *= geometry.width
    value = numerator // (config.s * config.s * stats.fn * config.sf.numerator)
    return GfThreshold(value=max(1, min(value, MAX_THRESHOLD_US)), frame_index=frame_index)


def gf_frame_thresholds(frames: Sequence[Frame], config: FilterConfig) -> list[GfThreshold]:
    """Threshold applied to each frame: the initial value for frame 0, then
    the value derived from the preceding frame's statistics."""
    thresholds = [GfThreshold(value=config.tgf_init_us, frame_index=-1)]
    for frame in frames[:-1] if frames else []:
        thresholds.append(gf_threshold(frame_stats(frame), config, frame_index=frame.index))
    return thresholds[: len(frames)]


def _columns(events: Events) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    return (
        np.ascontiguousarray(events.t),
        np.ascontiguousarray(events.x),
        np.ascontiguousarray(events.y),
    )


def _raise_out_of_bounds(events: Events, index: int, geometry: SensorGeometry) -> None:
    raise GeometryError(
        f"event {index} at ({int(events.x[index])}, {int(events.y[index])}) outside "
        f"{geometry.width}x{geometry.height} sensor"
    )


def _fresh_group_memory(config: FilterConfig) -> np.ndarray:
    return np.full(config.grid_width * config.grid_height, -1, dtype=np.int64)


def _run_subsampled(
    events: Events,
    config: FilterConfig,
    frame_ends: np.ndarray,
    thresholds: np.ndarray,
) -> np.ndarray:
    t, x, y = _columns(events)
    geometry = config.geometry
    out = np.zeros(len(events), dtype=np.bool_)
    s = config.s
    if s & (s - 1) == 0:
        bad = _kernels.subsampled_filter_pow2(
            t, x, y, frame_ends, thresholds, s.bit_length() - 1, config.grid_width,
            geometry.width, geometry.height, _fresh_group_memory(config), out,
        )
    else:
        bad = _kernels.subsampled_filter(
            t, x, y, frame_ends, thresholds, s, config.grid_width,
            geometry.width, geometry.height, _fresh_group_memory(config), out,
        )
    if bad >= 0:
        _raise_out_of_bounds(events, int(bad), geometry)
    return out


def gf_process(frames: Sequence[Frame], config: FilterConfig) -> np.ndarray:
    """Run the self-adjusting filter over framed events.

    Returns one pass flag per event, in stream order. Memory cells persist
    across frame boundaries; only the threshold changes per frame.
    """
    if not frames:
        return np.zeros(0, dtype=np.bool_)
    events = Events.concatenate([f.events for f in frames])
    schedule = gf_frame_thresholds(frames, config)
    frame_ends = np.cumsum([len(f.events) for f in frames]).astype(np.int64)
    thresholds = np.asarray([th.value for th in schedule], dtype=np.int64)
    return _run_subsampled(events, config, frame_ends, thresholds)


def gf_stream(
    events: Events, config: FilterConfig, frame_size: int = DEFAULT_FRAME_SIZE
) -> np.ndarray:
    """Frame a stream and run the self-adjusting filter in one pass.

    Decision-identical to ``gf_process(accumulate(events, frame_size), ...)``
    but avoids building frame objects, so it is the path the benchmark and
    the CLI use.
    """
    if frame_size < 1:
        raise ConfigError(f"frame size must be at least 1, got {frame_size}")
    n = len(events)
    if n == 0:
        return np.zeros(0, dtype=np.bool_)
    starts = np.arange(0, n, frame_size)
    frame_ends = np.minimum(starts + frame_size, n).astype(np.int64)
    thresholds = np.empty(len(starts), dtype=np.int64)
    thresholds[0] = config.tgf_init_us
    if len(starts) > 1:
        mins = np.minimum.reduceat(events.t, starts)
        maxs = np.maximum.reduceat(events.t, starts)
        sizes = frame_ends - starts
        for k in range(1, len(starts)):
            stats = FrameStats(fn=int(sizes[k - 1]), td=int(maxs[k - 1] - mins[k - 1]))
            thresholds[k] = gf_threshold(stats, config, frame_index=k - 1).value
    return _run_subsampled(events, config, frame_ends, thresholds)


def bs1_process(events: Events, config: FilterConfig) -> np.ndarray:
    """Per-pixel filter with 3x3 neighborhood writes, fixed threshold."""
    t, x, y = _columns(events)
    geometry = config.geometry
    memory = np.full(geometry.width * geometry.height, -1, dtype=np.int64)
    out = np.zeros(len(events), dtype=np.bool_)
    bad = _kernels.neighborhood_filter(
        t, x, y, config.bs1_dt_us(), geometry.width, geometry.height, memory, out
    )
    if bad >= 0:
        _raise_out_of_bounds(events, int(bad), geometry)
    return out


def bs2_process(events: Events, config: FilterConfig) -> np.ndarray:
    """Subsampled-group filter with a fixed threshold (one write per event)."""
    frame_ends = np.asarray([len(events)], dtype=np.int64)
    thresholds = np.asarray([config.bs2_dt_us()], dtype=np.int64)
    return _run_subsampled(events, config, frame_ends, thresholds)


def bs3_process(events: Events, config: FilterConfig) -> np.ndarray:
    """Row/column-cell filter, fixed threshold of max(1, 500 // width) us."""
    t, x, y = _columns(events)
    p = np.ascontiguousarray(events.p)
    geometry = config.geometry
    row_t = np.full(geometry.height, -1, dtype=np.int64)
    row_x = np.zeros(geometry.height, dtype=np.int64)
    row_p = np.zeros(geometry.height, dtype=np.int64)
    col_t = np.full(geometry.width, -1, dtype=np.int64)
    col_y = np.zeros(geometry.width, dtype=np.int64)
    col_p = np.zeros(geometry.width, dtype=np.int64)
    out = np.zeros(len(events), dtype=np.bool_)
    bad = _kernels.row_column_filter(
        t, x, y, p, config.bs3_dt_us(), geometry.width, geometry.height,
        row_t, row_x, row_p, col_t, col_y, col_p, out,
    )
    if bad >= 0:
        _raise_out_of_bounds(events, int(bad), geometry)
    return out


def classify(events: Events, decisions: np.ndarray) -> tuple[Events, Events]:
    """Partition a stream into (passed, discarded) by its decision vector."""
    if len(decisions) != len(events):
        raise ValueError(f"{len(decisions)} decisions for {len(events)} events")
    decisions = np.asarray(decisions, dtype=bool)
    return events[decisions], events[~decisions]


def run_filter(
    name: str,
    events: Events,
    config: FilterConfig,
    frame_size: int = DEFAULT_FRAME_SIZE,
) -> np.ndarray:
    """Run a filter by name; ``frame_size`` only matters for ``gf``."""
    if name == "gf":
        return gf_stream(events, config, frame_size)
    if name == "bs1":
        return bs1_process(events, config)
    if name == "bs2":
        return bs2_process(events, config)
    if name == "bs3":
        return bs3_process(events, config)
    raise ConfigError(f"unknown filter {name!r}, expected one of {FILTER_NAMES}")
