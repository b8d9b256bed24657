"""Event data model shared by every other module.

An event stream is held column-wise (``Events``): four aligned int64 arrays
for timestamp (microseconds), x, y, and payload. The payload is a polarity
bit (1 = ON, 0 = OFF) on standard sensors or an intensity byte on
row-timestamp (celex-style) sensors; the filters never look at it.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

US_PER_MS = 1_000
US_PER_S = 1_000_000

#: Timestamps must fit the 32-bit counter found on real sensor front ends.
MAX_TIMESTAMP_US = 2**32 - 1

MODE_STANDARD = "standard"
MODE_CELEX = "celex"
MODES = (MODE_STANDARD, MODE_CELEX)

PAYLOAD_POLARITY = "polarity"
PAYLOAD_INTENSITY = "intensity"
PAYLOADS = (PAYLOAD_POLARITY, PAYLOAD_INTENSITY)


class StreamError(ValueError):
    """Base class for malformed or inconsistent event streams."""


class StreamParseError(StreamError):
    """A line of a stream file could not be parsed."""

    def __init__(self, message: str, line_no: int | None = None):
        if line_no is not None:
            message = f"line {line_no}: {message}"
        super().__init__(message)
        self.line_no = line_no


class GeometryError(StreamError):
    """An event lies outside the declared sensor rectangle."""


class OrderingError(StreamError):
    """Timestamps decrease within a stream."""


class ConfigError(ValueError):
    """Invalid configuration value (frame size, object shape, ...)."""


class EmptyFrameError(ValueError):
    """An operation that needs events was given an empty frame."""


@dataclass(frozen=True)
class SensorGeometry:
    """Sensor pixel-array size and timestamp-assignment mode.

    ``standard`` sensors stamp each event individually; ``celex`` sensors
    read out one row at a time so every event of a row readout shares a
    single timestamp.
    """

    width: int
    height: int
    mode: str = MODE_STANDARD

    def __post_init__(self):
        if self.width < 1 or self.height < 1:
            raise ConfigError(
                f"sensor geometry must be at least 1x1, got {self.width}x{self.height}"
            )
        if self.mode not in MODES:
            raise ConfigError(f"unknown sensor mode {self.mode!r}, expected one of {MODES}")

    @property
    def pixel_count(self) -> int:
        return self.width * self.height


# Common sensor sizes.
DVS128 = SensorGeometry(128, 128)
DAVIS240 = SensorGeometry(240, 180)
CELEX = SensorGeometry(768, 640, mode=MODE_CELEX)


def _as_column(values, name: str) -> np.ndarray:
    arr = np.asarray(values, dtype=np.int64)
    if arr.ndim != 1:
        raise ValueError(f"{name} must be one-dimensional, got shape {arr.shape}")
    return arr


class Events:
    """Column-oriented event stream: aligned int64 arrays t, x, y, p.

    Slicing returns views, boolean indexing returns copies; both yield a new
    ``Events``. Instances are treated as immutable by every operation in this
    package.
    """

    __slots__ = ("t", "x", "y", "p")

    def __init__(self, t, x, y, p):
        self.t = _as_column(t, "t")
        self.x = _as_column(x, "x")
        self.y = _as_column(y, "y")
        self.p = _as_column(p, "p")
        n = len(self.t)
        if not (len(self.x) == len(self.y) == len(self.p) == n):
            raise ValueError("event columns must have equal length")

    @classmethod
    def empty(cls) -> "Events":
        z = np.empty(0, dtype=np.int64)
        return cls(z, z.copy(), z.copy(), z.copy())

    @classmethod
    def from_rows(cls, rows: Iterable[Sequence[int]]) -> "Events":
        """Build from an iterable of (t, x, y, p) tuples. Test/demo helper."""
        rows = list(rows)
        if not rows:
            return cls.empty()
        arr = np.asarray(rows, dtype=np.int64)
        return cls(arr[:, 0], arr[:, 1], arr[:, 2], arr[:, 3])

    @staticmethod
    def concatenate(parts: Sequence["Events"]) -> "Events":
        if not parts:
            return Events.empty()
        return Events(
            np.concatenate([e.t for e in parts]),
            np.concatenate([e.x for e in parts]),
            np.concatenate([e.y for e in parts]),
            np.concatenate([e.p for e in parts]),
        )

    def __len__(self) -> int:
        return len(self.t)

    def __getitem__(self, key) -> "Events":
        return Events(self.t[key], self.x[key], self.y[key], self.p[key])

    def __eq__(self, other) -> bool:
        if not isinstance(other, Events):
            return NotImplemented
        return (
            np.array_equal(self.t, other.t)
            and np.array_equal(self.x, other.x)
            and np.array_equal(self.y, other.y)
            and np.array_equal(self.p, other.p)
        )

    def __hash__(self):
        return id(self)

    def __repr__(self) -> str:
        if len(self) == 0:
            return "Events(<empty>)"
        return f"Events(n={len(self)}, t=[{self.t[0]}..{self.t[-1]}])"

    def rows(self) -> Iterable[tuple[int, int, int, int]]:
        """Iterate events as (t, x, y, p) tuples."""
        for i in range(len(self)):
            yield (int(self.t[i]), int(self.x[i]), int(self.y[i]), int(self.p[i]))


def validate_events(events: Events, geometry: SensorGeometry, check_order: bool = True) -> None:
    """Check coordinate bounds and timestamp monotonicity.

    Raises GeometryError or OrderingError with the index of the first
    offending event.
    """
    bad = np.flatnonzero(
        (events.x < 0)
        | (events.x >= geometry.width)
        | (events.y < 0)
        | (events.y >= geometry.height)
    )
    if bad.size:
        i = int(bad[0])
        raise GeometryError(
            f"event {i} at ({int(events.x[i])}, {int(events.y[i])}) outside "
            f"{geometry.width}x{geometry.height} sensor"
        )
    if check_order and len(events) > 1:
        drops = np.flatnonzero(np.diff(events.t) < 0)
        if drops.size:
            i = int(drops[0])
            raise OrderingError(
                f"timestamp decreases at event {i + 1} "
                f"({int(events.t[i + 1])} < {int(events.t[i])})"
            )
