"""Synthetic labeled event streams: a moving object plus uniform noise.

Real events come from a rectangle or disc translating across the sensor;
whenever the object boundary crosses a pixel center, that pixel emits one
event (ON when covered, OFF when uncovered). Neighboring pixels therefore
fire within a short window, which is exactly the correlation the filters
look for. Background-activity events are drawn uniformly over the pixel
array as a Poisson process and carry no correlation.

In celex mode the merged stream is passed through a row-readout emulation:
the sensor clock ticks at a fixed period, each tick drains one randomly
chosen row with pending events, and every event of that drain shares the
tick timestamp.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass

import numpy as np

from .events import (
    MODE_CELEX,
    PAYLOAD_INTENSITY,
    ConfigError,
    Events,
    SensorGeometry,
)
from .io import default_payload

#: Intensity byte used for every generated event on intensity-payload sensors.
CELEX_INTENSITY = 128

DEFAULT_TIME_STEP_US = 500
DEFAULT_ROW_TIME_US = 50


@dataclass(frozen=True)
class MovingDisc:
    """Disc of given radius, center starting at (cx, cy), velocity in px/ms."""

    cx: float
    cy: float
    radius: float
    vx: float = 0.0
    vy: float = 0.0

    @property
    def half_extent(self) -> tuple[float, float]:
        return (self.radius, self.radius)

    def contains(self, px: np.ndarray, py: np.ndarray, cx: float, cy: float) -> np.ndarray:
        return (px - cx) ** 2 + (py - cy) ** 2 <= self.radius**2

    def validate(self) -> None:
        if self.radius <= 0:
            raise ConfigError(f"disc radius must be positive, got {self.radius}")


@dataclass(frozen=True)
class MovingRect:
    """Axis-aligned rectangle, center starting at (cx, cy), velocity in px/ms."""

    cx: float
    cy: float
    width: float
    height: float
    vx: float = 0.0
    vy: float = 0.0

    @property
    def half_extent(self) -> tuple[float, float]:
        return (self.width / 2.0, self.height / 2.0)

    def contains(self, px: np.ndarray, py: np.ndarray, cx: float, cy: float) -> np.ndarray:
        hx, hy = self.half_extent
        return (np.abs(px - cx) <= hx) & (np.abs(py - cy) <= hy)

    def validate(self) -> None:
        if self.width <= 0 or self.height <= 0:
            raise ConfigError(
                f"rectangle sides must be positive, got {self.width}x{self.height}"
            )


@dataclass(frozen=True)
class LabeledStream:
    """Generated events with their ground-truth origin (True = real)."""

    events: Events
    real: np.ndarray

    def __post_init__(self):
        if len(self.real) != len(self.events):
            raise ValueError("label array length must match event count")

    def __len__(self) -> int:
        return len(self.events)


def _bounce(start: float, velocity_per_us: float, t_us: float, lo: float, hi: float) -> float:
    """Position at time t for motion reflecting off [lo, hi]."""
    if hi <= lo:
        return lo
    span = hi - lo
    u = (start - lo) + velocity_per_us * t_us
    m = math.fmod(u, 2.0 * span)
    if m < 0:
        m += 2.0 * span
    return lo + (m if m <= span else 2.0 * span - m)


def _center_at(shape, t_us: float, geometry: SensorGeometry) -> tuple[float, float]:
    hx, hy = shape.half_extent
    lo_x, hi_x = hx, geometry.width - 1 - hx
    lo_y, hi_y = hy, geometry.height - 1 - hy
    if hi_x < lo_x or hi_y < lo_y:
        raise ConfigError(
            f"object of half extent ({hx}, {hy}) does not fit a "
            f"{geometry.width}x{geometry.height} sensor"
        )
    cx = _bounce(float(shape.cx), shape.vx / 1000.0, t_us, lo_x, hi_x)
    cy = _bounce(float(shape.cy), shape.vy / 1000.0, t_us, lo_y, hi_y)
    return cx, cy


def _object_events(
    geometry: SensorGeometry, duration_us: int, shape, time_step_us: int
) -> Events:
    """Boundary-crossing events of the moving object on a fixed time grid.

    At each step, pixels whose coverage flipped since the previous step emit
    one event stamped with the step time. A static object emits nothing.
    """
    hx, hy = shape.half_extent
    margin_x = int(math.ceil(hx)) + 1
    margin_y = int(math.ceil(hy)) + 1

    ts: list[np.ndarray] = []
    xs: list[np.ndarray] = []
    ys: list[np.ndarray] = []
    ps: list[np.ndarray] = []

    prev_cx, prev_cy = _center_at(shape, 0.0, geometry)
    for t in range(time_step_us, duration_us + 1, time_step_us):
        cx, cy = _center_at(shape, float(t), geometry)
        x0 = max(0, int(math.floor(min(prev_cx, cx))) - margin_x)
        x1 = min(geometry.width - 1, int(math.ceil(max(prev_cx, cx))) + margin_x)
        y0 = max(0, int(math.floor(min(prev_cy, cy))) - margin_y)
        y1 = min(geometry.height - 1, int(math.ceil(max(prev_cy, cy))) + margin_y)
        gx = np.arange(x0, x1 + 1, dtype=np.int64)[np.newaxis, :]
        gy = np.arange(y0, y1 + 1, dtype=np.int64)[:, np.newaxis]
        before = shape.contains(gx, gy, prev_cx, prev_cy)
        after = shape.contains(gx, gy, cx, cy)
        entered = after & ~before
        exited = before & ~after
        for mask, polarity in ((entered, 1), (exited, 0)):
            iy, ix = np.nonzero(mask)
            if iy.size:
                ts.append(np.full(iy.size, t, dtype=np.int64))
                xs.append(ix + x0)
                ys.append(iy + y0)
                ps.append(np.full(iy.size, polarity, dtype=np.int64))
        prev_cx, prev_cy = cx, cy

    if not ts:
        return Events.empty()
    return Events(
        np.concatenate(ts), np.concatenate(xs), np.concatenate(ys), np.concatenate(ps)
    )


def _noise_events(
    geometry: SensorGeometry, duration_us: int, ba_rate_hz: float, rng: np.random.Generator
) -> Events:
    """Uniform background activity: exponential inter-arrivals at the
    aggregate rate, each arrival assigned a uniformly random pixel."""
    if ba_rate_hz == 0:
        return Events.empty()
    rate_per_us = ba_rate_hz * geometry.pixel_count / 1e6
    mean_gap = 1.0 / rate_per_us

    times: list[np.ndarray] = []
    last = 0.0
    expected = duration_us * rate_per_us
    chunk = max(1024, int(expected + 6 * math.sqrt(expected + 1)))
    while last <= duration_us:
        gaps = rng.exponential(mean_gap, size=chunk)
        arrivals = last + np.cumsum(gaps)
        times.append(arrivals)
        last = float(arrivals[-1])
    t = np.concatenate(times)
    t = t[t <= duration_us]
    t = np.floor(t).astype(np.int64)

    n = len(t)
    x = rng.integers(0, geometry.width, size=n, dtype=np.int64)
    y = rng.integers(0, geometry.height, size=n, dtype=np.int64)
    p = rng.integers(0, 2, size=n, dtype=np.int64)
    return Events(t, x, y, p)


def _row_readout(
    events: Events,
    real: np.ndarray,
    geometry: SensorGeometry,
    rng: np.random.Generator,
    row_time_us: int,
) -> tuple[Events, np.ndarray]:
    """Re-stamp a stream through a celex-style row readout.

    The readout clock ticks every ``row_time_us``; events whose true time has
    arrived queue up per row, each tick picks one random pending row and
    emits its whole queue (left to right) under the tick timestamp.
    """
    n = len(events)
    if n == 0:
        return events, real
    queues: list[deque] = [deque() for _ in range(geometry.height)]
    active: list[int] = []  # rows with pending events, swap-removed
    active_pos = {}

    def activate(row: int) -> None:
        if row not in active_pos:
            active_pos[row] = len(active)
            active.append(row)

    def deactivate(row: int) -> None:
        pos = active_pos.pop(row)
        last = active.pop()
        if pos < len(active):
            active[pos] = last
            active_pos[last] = pos

    out_idx: list[int] = []
    out_t: list[int] = []
    i = 0
    clock = 0
    src_t, src_y, src_x = events.t, events.y, events.x
    while i < n or active:
        if not active:
            # fast-forward over idle ticks to the first tick covering the
            # next arrival (events with t <= clock are drainable)
            clock = -(-int(src_t[i]) // row_time_us) * row_time_us
        else:
            clock += row_time_us
        while i < n and src_t[i] <= clock:
            row = int(src_y[i])
            queues[row].append(i)
            activate(row)
            i += 1
        if not active:
            continue
        row = active[int(rng.integers(0, len(active)))]
        batch = list(queues[row])
        queues[row].clear()
        deactivate(row)
        batch.sort(key=lambda j: int(src_x[j]))  # stable: ties keep arrival order
        out_idx.extend(batch)
        out_t.extend([clock] * len(batch))

    order = np.asarray(out_idx, dtype=np.int64)
    t = np.asarray(out_t, dtype=np.int64)
    remapped = Events(t, events.x[order], events.y[order], events.p[order])
    return remapped, real[order]


def generate_synthetic(
    geometry: SensorGeometry,
    duration_us: int,
    shape,
    ba_rate_hz: float,
    seed: int,
    time_step_us: int = DEFAULT_TIME_STEP_US,
    row_time_us: int = DEFAULT_ROW_TIME_US,
) -> LabeledStream:
    """Generate a labeled stream: object events plus uniform noise.

    Deterministic for fixed arguments. Output is sorted by timestamp with
    real events ordered before noise at equal times. ``ba_rate_hz`` is the
    per-pixel noise rate.
    """
    if duration_us < 0:
        raise ConfigError(f"duration must be non-negative, got {duration_us}")
    if ba_rate_hz < 0:
        raise ConfigError(f"noise rate must be non-negative, got {ba_rate_hz}")
    if time_step_us < 1:
        raise ConfigError(f"time step must be at least 1 us, got {time_step_us}")
    if row_time_us < 1:
        raise ConfigError(f"row readout period must be at least 1 us, got {row_time_us}")
    shape.validate()
    _center_at(shape, 0.0, geometry)  # fit check up front

    rng = np.random.default_rng(seed)
    obj = _object_events(geometry, duration_us, shape, time_step_us)
    noise = _noise_events(geometry, duration_us, ba_rate_hz, rng)

    merged = Events.concatenate([obj, noise])
    real = np.zeros(len(merged), dtype=bool)
    real[: len(obj)] = True
    # sort by time, real before noise on ties; lexsort is stable
    order = np.lexsort((~real, merged.t))
    merged = merged[order]
    real = real[order]

    if default_payload(geometry) == PAYLOAD_INTENSITY:
        merged = Events(
            merged.t, merged.x, merged.y, np.full(len(merged), CELEX_INTENSITY, np.int64)
        )
    if geometry.mode == MODE_CELEX:
        merged, real = _row_readout(merged, real, geometry, rng, row_time_us)
    return LabeledStream(events=merged, real=real)
