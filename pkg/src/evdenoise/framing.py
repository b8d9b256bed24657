"""Fixed-event-count framing, per-frame statistics, and frame rendering.

Frames always come from the unfiltered stream; the adaptive filter derives
its per-frame threshold from these statistics and then judges events one by
one. Rendering marks any pixel that saw at least one event, written out as
binary PGM (P5).
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .events import ConfigError, EmptyFrameError, Events, SensorGeometry


@dataclass(frozen=True)
class Frame:
    """A consecutive chunk of a stream. Only the last frame may be partial."""

    index: int
    events: Events
    t_first: int
    t_last: int
    is_partial: bool = False


@dataclass(frozen=True)
class FrameStats:
    """Event count and time span (last minus first timestamp) of a frame."""

    fn: int
    td: int


def accumulate(events: Events, frame_size: int) -> list[Frame]:
    """Split a stream into consecutive frames of ``frame_size`` events.

    The final frame is emitted even when short and flagged as partial.
    Concatenating the frames reproduces the input exactly.
    """
    if frame_size < 1:
        raise ConfigError(f"frame size must be at least 1, got {frame_size}")
    frames = []
    n = len(events)
    for index, start in enumerate(range(0, n, frame_size)):
        chunk = events[start : start + frame_size]
        frames.append(
            Frame(
                index=index,
                events=chunk,
                t_first=int(chunk.t.min()),
                t_last=int(chunk.t.max()),
                is_partial=len(chunk) < frame_size,
            )
        )
    return frames


def frame_stats(frame: Frame) -> FrameStats:
    if len(frame.events) == 0:
        raise EmptyFrameError("cannot compute statistics of an empty frame")
    return FrameStats(fn=len(frame.events), td=frame.t_last - frame.t_first)


def render(frame: Frame, geometry: SensorGeometry) -> np.ndarray:
    """Rasterize a frame: 255 where at least one event landed, 0 elsewhere."""
    image = np.zeros((geometry.height, geometry.width), dtype=np.uint8)
    image[frame.events.y, frame.events.x] = 255
    return image


def write_pgm(image: np.ndarray, sink) -> None:
    """Write a grayscale image as binary PGM (P5, maxval 255)."""
    if image.dtype != np.uint8 or image.ndim != 2:
        raise ValueError("expected a 2-D uint8 image")
    height, width = image.shape
    header = f"P5\n{width} {height}\n255\n".encode("ascii")
    if isinstance(sink, (str, Path)):
        with open(sink, "wb") as fh:
            fh.write(header)
            fh.write(image.tobytes())
    else:
        sink.write(header)
        sink.write(image.tobytes())


def render_frames(
    events: Events, geometry: SensorGeometry, frame_size: int, stem: str | Path
) -> list[Path]:
    """Render every frame of a stream to ``<stem>_<index>.pgm`` files."""
    stem = Path(stem)
    paths = []
    for frame in accumulate(events, frame_size):
        path = stem.parent / f"{stem.name}_{frame.index}.pgm"
        write_pgm(render(frame, geometry), path)
        paths.append(path)
    return paths
