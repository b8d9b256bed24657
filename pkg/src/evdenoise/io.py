"""Text stream format (``evd1``) reader and writer.

Files are UTF-8 text. The first line is a header::

    #evd1 X=128 Y=128 mode=standard payload=polarity

followed by one event per line, ``t,x,y,p``, with ``t`` in microseconds.
Labeled streams append a fifth field, ``real`` or ``ba``. Timestamps must be
non-decreasing and coordinates must fit the declared geometry.

A decisions sidecar (written by the CLI ``filter`` subcommand) is a companion
format: a ``#evdec1`` header followed by one ``0``/``1`` pass flag per event.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from typing import IO, Iterator

import numpy as np

from .events import (
    MAX_TIMESTAMP_US,
    MODE_CELEX,
    MODES,
    PAYLOAD_INTENSITY,
    PAYLOAD_POLARITY,
    PAYLOADS,
    Events,
    GeometryError,
    OrderingError,
    SensorGeometry,
    StreamParseError,
)

HEADER_MAGIC = "#evd1"
DECISIONS_MAGIC = "#evdec1"

LABEL_REAL = "real"
LABEL_BA = "ba"


@dataclass(frozen=True)
class StreamFile:
    """A parsed stream file: events plus the metadata the header declared."""

    events: Events
    geometry: SensorGeometry
    payload: str
    labels: np.ndarray | None = None  # bool per event, True = real

    @property
    def labeled(self) -> bool:
        return self.labels is not None


def default_payload(geometry: SensorGeometry) -> str:
    return PAYLOAD_INTENSITY if geometry.mode == MODE_CELEX else PAYLOAD_POLARITY


def _open_text(source, mode: str):
    """Return (file, should_close) for a path or an already-open file."""
    if isinstance(source, (str, os.PathLike)):
        return open(source, mode, encoding="utf-8"), True
    return source, False


def _parse_header(line: str) -> tuple[SensorGeometry, str]:
    tokens = line.strip().split()
    if not tokens or tokens[0] != HEADER_MAGIC:
        raise StreamParseError(f"expected {HEADER_MAGIC!r} header, got {line.strip()!r}", 1)
    fields = {}
    for tok in tokens[1:]:
        key, sep, value = tok.partition("=")
        if not sep:
            raise StreamParseError(f"malformed header token {tok!r}", 1)
        fields[key] = value
    try:
        width = int(fields["X"])
        height = int(fields["Y"])
        mode = fields["mode"]
        payload = fields["payload"]
    except KeyError as exc:
        raise StreamParseError(f"header missing field {exc.args[0]}", 1) from None
    except ValueError:
        raise StreamParseError("header X/Y must be integers", 1) from None
    if mode not in MODES:
        raise StreamParseError(f"unknown mode {mode!r}", 1)
    if payload not in PAYLOADS:
        raise StreamParseError(f"unknown payload kind {payload!r}", 1)
    return SensorGeometry(width, height, mode=mode), payload


def read_stream(source, geometry: SensorGeometry | None = None) -> StreamFile:
    """Parse an ``evd1`` file from a path or text file object.

    If ``geometry`` is given it must match the file header. Every event is
    validated as it is read: malformed lines raise StreamParseError with the
    line number, out-of-bounds coordinates raise GeometryError, decreasing
    timestamps raise OrderingError.
    """
    fh, close = _open_text(source, "r")
    try:
        return _read_stream(fh, geometry)
    finally:
        if close:
            fh.close()


def _read_stream(fh: IO[str], expected: SensorGeometry | None) -> StreamFile:
    header_line = fh.readline()
    if not header_line:
        raise StreamParseError("empty file, missing header", 1)
    geometry, payload = _parse_header(header_line)
    if expected is not None and (
        expected.width != geometry.width
        or expected.height != geometry.height
        or expected.mode != geometry.mode
    ):
        raise GeometryError(
            f"header declares {geometry.width}x{geometry.height} mode={geometry.mode}, "
            f"expected {expected.width}x{expected.height} mode={expected.mode}"
        )

    max_payload = 1 if payload == PAYLOAD_POLARITY else 255
    ts: list[int] = []
    xs: list[int] = []
    ys: list[int] = []
    ps: list[int] = []
    labels: list[bool] = []
    labeled: bool | None = None
    prev_t = -1

    for line_no, raw in enumerate(fh, start=2):
        line = raw.strip()
        if not line:
            continue
        parts = line.split(",")
        if labeled is None:
            labeled = len(parts) == 5
        if len(parts) != (5 if labeled else 4):
            raise StreamParseError(
                f"expected {5 if labeled else 4} fields, got {len(parts)}", line_no
            )
        try:
            t = int(parts[0])
            x = int(parts[1])
            y = int(parts[2])
            p = int(parts[3])
        except ValueError:
            raise StreamParseError(f"non-integer field in {line!r}", line_no) from None
        if not 0 <= t <= MAX_TIMESTAMP_US:
            raise StreamParseError(f"timestamp {t} outside 32-bit range", line_no)
        if not 0 <= p <= max_payload:
            raise StreamParseError(
                f"payload {p} invalid for payload={payload}", line_no
            )
        if not (0 <= x < geometry.width and 0 <= y < geometry.height):
            raise GeometryError(
                f"line {line_no}: event at ({x}, {y}) outside "
                f"{geometry.width}x{geometry.height} sensor"
            )
        if t < prev_t:
            raise OrderingError(f"line {line_no}: timestamp {t} decreases (previous {prev_t})")
        prev_t = t
        if labeled:
            label = parts[4]
            if label == LABEL_REAL:
                labels.append(True)
            elif label == LABEL_BA:
                labels.append(False)
            else:
                raise StreamParseError(f"unknown label {label!r}", line_no)
        ts.append(t)
        xs.append(x)
        ys.append(y)
        ps.append(p)

    events = Events(ts, xs, ys, ps) if ts else Events.empty()
    label_arr = np.asarray(labels, dtype=bool) if labeled else None
    return StreamFile(events=events, geometry=geometry, payload=payload, labels=label_arr)


def write_stream(
    events: Events,
    sink,
    geometry: SensorGeometry,
    payload: str | None = None,
    labels: np.ndarray | None = None,
) -> None:
    """Write an ``evd1`` file to a path or text file object.

    Round-trips exactly with read_stream.
    """
    if payload is None:
        payload = default_payload(geometry)
    if payload not in PAYLOADS:
        raise ValueError(f"unknown payload kind {payload!r}")
    if labels is not None and len(labels) != len(events):
        raise ValueError(f"{len(labels)} labels for {len(events)} events")

    fh, close = _open_text(sink, "w")
    try:
        fh.write(
            f"{HEADER_MAGIC} X={geometry.width} Y={geometry.height} "
            f"mode={geometry.mode} payload={payload}\n"
        )
        if labels is None:
            for t, x, y, p in events.rows():
                fh.write(f"{t},{x},{y},{p}\n")
        else:
            for i, (t, x, y, p) in enumerate(events.rows()):
                tag = LABEL_REAL if labels[i] else LABEL_BA
                fh.write(f"{t},{x},{y},{p},{tag}\n")
    finally:
        if close:
            fh.close()


def write_decisions(decisions: np.ndarray, sink, filter_name: str = "") -> None:
    """Write a per-event pass-flag sidecar (one 0/1 line per event)."""
    fh, close = _open_text(sink, "w")
    try:
        fh.write(f"{DECISIONS_MAGIC} n={len(decisions)} filter={filter_name}\n")
        for flag in decisions:
            fh.write("1\n" if flag else "0\n")
    finally:
        if close:
            fh.close()


def read_decisions(source) -> np.ndarray:
    """Read a decisions sidecar back into a bool array."""
    fh, close = _open_text(source, "r")
    try:
        header = fh.readline()
        if not header.startswith(DECISIONS_MAGIC):
            raise StreamParseError(f"expected {DECISIONS_MAGIC!r} header", 1)
        flags = []
        for line_no, raw in enumerate(fh, start=2):
            line = raw.strip()
            if not line:
                continue
            if line == "1":
                flags.append(True)
            elif line == "0":
                flags.append(False)
            else:
                raise StreamParseError(f"expected 0 or 1, got {line!r}", line_no)
        return np.asarray(flags, dtype=bool)
    finally:
        if close:
            fh.close()
