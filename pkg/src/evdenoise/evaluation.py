"""Per-frame TPR/FPR evaluation and filter throughput benchmarks.

Labels come either from a synthetic stream's ground truth or from a
reference filter (conventionally the adaptive filter with s=2, which is the
cleanest denoiser of the set): whatever the reference passes counts as a
real event. A candidate's decisions are then scored per fixed-count frame.

The benchmark times the decision loop only: the stream is already in memory
and nothing is written to disk. The minimum wall time over repetitions is
reported, which suppresses scheduler noise.
"""

from __future__ import annotations

import csv
import io as _io
import time
from dataclasses import dataclass

import numpy as np

from .events import ConfigError, Events
from .filters import DEFAULT_FRAME_SIZE, FilterConfig, run_filter

CONFUSION_CSV_HEADER = ("frame", "tp", "fp", "tn", "fn", "tpr", "fpr")
BENCH_CSV_HEADER = ("filter", "frame_size", "events", "wall_us", "events_per_s")


class AlignmentError(ValueError):
    """Labels and decisions do not describe the same event sequence."""


@dataclass(frozen=True)
class FrameConfusion:
    """Confusion counts of one frame; ratios are None when a frame has no
    events of the corresponding class."""

    frame_index: int
    tp: int
    fp: int
    tn: int
    fn: int

    @property
    def tpr(self) -> float | None:
        positives = self.tp + self.fn
        return self.tp / positives if positives else None

    @property
    def fpr(self) -> float | None:
        negatives = self.fp + self.tn
        return self.fp / negatives if negatives else None


@dataclass(frozen=True)
class BenchReport:
    filter_name: str
    frame_size: int
    events: int
    wall_us: float

    @property
    def events_per_s(self) -> float:
        return self.events / (self.wall_us / 1e6)


def label_with_reference(
    events: Events,
    config: FilterConfig,
    name: str = "gf",
    frame_size: int = DEFAULT_FRAME_SIZE,
) -> np.ndarray:
    """Label events by running a reference filter: pass = real, discard = noise."""
    return run_filter(name, events, config, frame_size=frame_size)


def confusion(
    labels: np.ndarray, decisions: np.ndarray, frame_size: int
) -> list[FrameConfusion]:
    """Score decisions against labels, one confusion per fixed-count frame.

    ``labels`` and ``decisions`` must be aligned one-to-one on the same
    event order.
    """
    if frame_size < 1:
        raise ConfigError(f"frame size must be at least 1, got {frame_size}")
    labels = np.asarray(labels, dtype=bool)
    decisions = np.asarray(decisions, dtype=bool)
    if len(labels) != len(decisions):
        raise AlignmentError(f"{len(labels)} labels but {len(decisions)} decisions")
    out = []
    for index, start in enumerate(range(0, len(labels), frame_size)):
        lab = labels[start : start + frame_size]
        dec = decisions[start : start + frame_size]
        tp = int(np.sum(lab & dec))
        fn = int(np.sum(lab & ~dec))
        fp = int(np.sum(~lab & dec))
        tn = int(np.sum(~lab & ~dec))
        out.append(FrameConfusion(frame_index=index, tp=tp, fp=fp, tn=tn, fn=fn))
    return out


def bench(
    name: str,
    events: Events,
    config: FilterConfig,
    frame_size: int = DEFAULT_FRAME_SIZE,
    repetitions: int = 3,
) -> BenchReport:
    """Time a filter over an in-memory stream; min wall time of all runs.

    A warmup run is performed first so one-time compilation cost is not
    measured.
    """
    if len(events) == 0:
        raise ConfigError("cannot benchmark an empty stream")
    if repetitions < 1:
        raise ConfigError(f"repetitions must be at least 1, got {repetitions}")
    run_filter(name, events, config, frame_size=frame_size)  # warmup
    best = None
    for _ in range(repetitions):
        start = time.perf_counter()
        run_filter(name, events, config, frame_size=frame_size)
        wall = time.perf_counter() - start
        best = wall if best is None else min(best, wall)
    return BenchReport(
        filter_name=name,
        frame_size=frame_size,
        events=len(events),
        wall_us=best * 1e6,
    )


def _ratio_field(value: float | None) -> str:
    return "" if value is None else f"{value:.6f}"


def confusion_csv(confusions) -> str:
    """Render frame confusions as CSV text (ratios to 6 decimal places,
    empty when undefined)."""
    buf = _io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CONFUSION_CSV_HEADER)
    for c in confusions:
        writer.writerow(
            [c.frame_index, c.tp, c.fp, c.tn, c.fn, _ratio_field(c.tpr), _ratio_field(c.fpr)]
        )
    return buf.getvalue()


def bench_csv(reports) -> str:
    """Render benchmark reports as CSV text."""
    buf = _io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(BENCH_CSV_HEADER)
    for r in reports:
        writer.writerow(
            [r.filter_name, r.frame_size, r.events, f"{r.wall_us:.0f}", f"{r.events_per_s:.2f}"]
        )
    return buf.getvalue()


def parse_confusion_csv(text: str) -> list[FrameConfusion]:
    """Parse confusion CSV back into objects (counts only; ratios are
    recomputed properties)."""
    rows = list(csv.reader(_io.StringIO(text)))
    if not rows or tuple(rows[0]) != CONFUSION_CSV_HEADER:
        raise ValueError("not a confusion CSV")
    return [
        FrameConfusion(
            frame_index=int(r[0]), tp=int(r[1]), fp=int(r[2]), tn=int(r[3]), fn=int(r[4])
        )
        for r in rows[1:]
    ]
