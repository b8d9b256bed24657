"""Compiled per-event decision loops.

Each kernel walks one stream sequentially; decisions must see memory state
exactly as left by all earlier events, so these loops cannot be vectorized.
All memory cells use -1 as the never-written sentinel; an event whose cell
is still the sentinel never passes.

Kernels bounds-check coordinates as they go and return the index of the
first out-of-bounds event, or -1 when the whole stream was processed.
"""

import numpy as np
from numba import njit


@njit(cache=True)
def subsampled_filter(t, x, y, frame_ends, thresholds, s, grid_w, width, height, memory, out):
    """One timestamp cell per s*s pixel group, one threshold per frame.

    ``frame_ends[k]`` is the end index (exclusive) of frame k and
    ``thresholds[k]`` its pass threshold; memory persists across frames.
    Pass iff the group's cell was written before and the gap is within the
    frame's threshold. The event's own timestamp is always written back.
    Fixed-threshold callers pass a single frame covering the whole stream.
    """
    start = 0
    for k in range(frame_ends.shape[0]):
        threshold = thresholds[k]
        end = frame_ends[k]
        for i in range(start, end):
            if x[i] < 0 or x[i] >= width or y[i] < 0 or y[i] >= height:
                return i
            cell = (y[i] // s) * grid_w + (x[i] // s)
            last = memory[cell]
            out[i] = last >= 0 and t[i] - last <= threshold
            memory[cell] = t[i]
        start = end
    return -1


@njit(cache=True)
def subsampled_filter_pow2(
    t, x, y, frame_ends, thresholds, shift, grid_w, width, height, memory, out
):
    """subsampled_filter for power-of-two s, using shifts instead of
    divisions (identical results for the non-negative coordinates the
    bounds check guarantees)."""
    start = 0
    for k in range(frame_ends.shape[0]):
        threshold = thresholds[k]
        end = frame_ends[k]
        for i in range(start, end):
            if x[i] < 0 or x[i] >= width or y[i] < 0 or y[i] >= height:
                return i
            cell = (y[i] >> shift) * grid_w + (x[i] >> shift)
            last = memory[cell]
            out[i] = last >= 0 and t[i] - last <= threshold
            memory[cell] = t[i]
        start = end
    return -1


@njit(cache=True)
def neighborhood_filter(t, x, y, threshold, width, height, memory, out):
    """One timestamp cell per pixel; each event writes its whole 3x3 block.

    Pass iff the event's own cell holds a recent enough timestamp, which a
    neighbor's earlier write may have provided. Writes happen whether or not
    the event passes, clamped at the sensor border.
    """
    for i in range(t.shape[0]):
        if x[i] < 0 or x[i] >= width or y[i] < 0 or y[i] >= height:
            return i
        last = memory[y[i] * width + x[i]]
        out[i] = last >= 0 and t[i] - last <= threshold
        x0 = x[i] - 1 if x[i] > 0 else 0
        x1 = x[i] + 1 if x[i] < width - 1 else width - 1
        y0 = y[i] - 1 if y[i] > 0 else 0
        y1 = y[i] + 1 if y[i] < height - 1 else height - 1
        for yy in range(y0, y1 + 1):
            base = yy * width
            for xx in range(x0, x1 + 1):
                memory[base + xx] = t[i]
    return -1


@njit(cache=True)
def row_column_filter(
    t, x, y, p, threshold, width, height, row_t, row_x, row_p, col_t, col_y, col_p, out
):
    """One (timestamp, cross-position, payload) cell per row and per column.

    Pass iff the row cell or the column cell holds an event at most one
    pixel away on the cross axis and within the time threshold. Both cells
    are then overwritten with the current event.
    """
    for i in range(t.shape[0]):
        if x[i] < 0 or x[i] >= width or y[i] < 0 or y[i] >= height:
            return i
        ok = False
        rt = row_t[y[i]]
        if rt >= 0 and t[i] - rt <= threshold:
            dx = row_x[y[i]] - x[i]
            if -1 <= dx <= 1:
                ok = True
        if not ok:
            ct = col_t[x[i]]
            if ct >= 0 and t[i] - ct <= threshold:
                dy = col_y[x[i]] - y[i]
                if -1 <= dy <= 1:
                    ok = True
        out[i] = ok
        row_t[y[i]] = t[i]
        row_x[y[i]] = x[i]
        row_p[y[i]] = p[i]
        col_t[x[i]] = t[i]
        col_y[x[i]] = y[i]
        col_p[x[i]] = p[i]
    return -1
