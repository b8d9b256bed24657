"""Acceptance suite: one test per release criterion, each printing a
pass/fail line. Run with ``pytest tests/test_acceptance.py -s`` to see the
lines as they go.

Expected values are either hand-derived integers frozen below or recomputed
here by independent naive references (tests/reference_filters.py); nothing
is read back from the implementation under test.
"""

import io
from fractions import Fraction

import numpy as np
import pytest

from evdenoise import (
    DVS128,
    Events,
    FilterConfig,
    FrameStats,
    MovingDisc,
    SensorGeometry,
    accumulate,
    bench,
    bs3_process,
    classify,
    confusion,
    generate_synthetic,
    gf_threshold,
    gf_threshold_exact,
    label_with_reference,
    read_stream,
    run_filter,
    write_stream,
)
from reference_filters import (
    naive_adaptive_threshold,
    naive_bs1,
    naive_bs2,
    naive_bs3,
    naive_gf,
)


def report(number: int, title: str, ok: bool, detail: str = "") -> None:
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {number}: {title}"
    if detail:
        line += f" ({detail})"
    print(line)
    assert ok, line


# --------------------------------------------------------------------------
# 1. threshold formula correctness
# --------------------------------------------------------------------------

def test_criterion_1_threshold_formula():
    cases = []
    for s in (1, 2, 4):
        for width, height, mode in ((128, 128, "standard"), (240, 180, "standard"),
                                    (768, 640, "celex")):
            for fn, td in ((5000, 50000), (1, 0), (50000, 1000), (123, 456789),
                           (999983, 2**31), (7, 7)):
                sf = "0.2" if mode == "celex" else 10
                cases.append((width, height, mode, s, sf, fn, td))
    # the two hand-worked anchors, frozen:
    #   50000 * 128 * 128 / (2^2 * 5000 * 10) = 4096
    #   1000 * 768 * (768*640) / (1 * 50000 * 0.2) = 37_748_736
    anchor_std = gf_threshold(
        FrameStats(fn=5000, td=50000), FilterConfig(geometry=DVS128, s=2)
    ).value
    anchor_cx = gf_threshold(
        FrameStats(fn=50000, td=1000),
        FilterConfig(geometry=SensorGeometry(768, 640, mode="celex"), s=1),
    ).value

    mismatches = []
    for width, height, mode, s, sf, fn, td in cases:
        cfg = FilterConfig(geometry=SensorGeometry(width, height, mode=mode), s=s, sf=sf)
        got = gf_threshold(FrameStats(fn=fn, td=td), cfg).value
        want = naive_adaptive_threshold(td, fn, width, height, s, Fraction(str(sf)),
                                        celex=(mode == "celex"))
        if got != want:
            mismatches.append((width, height, mode, s, sf, fn, td, got, want))
    ok = not mismatches and anchor_std == 4096 and anchor_cx == 37_748_736
    report(
        1, "threshold formula matches hand evaluation", ok,
        f"{len(cases)} tuples, anchors {anchor_std} and {anchor_cx}; "
        f"mismatches: {mismatches[:3]}",
    )


# --------------------------------------------------------------------------
# 2 + 3. oracle equivalence, conservation, subset
# --------------------------------------------------------------------------

GEOM32 = SensorGeometry(32, 32)


def _mixed_stream(seed: int) -> Events:
    stream = generate_synthetic(
        GEOM32, 1_200_000,
        MovingDisc(cx=15.5, cy=15.5, radius=5, vx=1.1, vy=0.4),
        ba_rate_hz=6.0, seed=seed,
    )
    assert len(stream) >= 10_000, "stream parameters must yield at least 10k events"
    return stream.events[:10_000]


def test_criterion_2_and_3_oracle_equivalence_conservation():
    n_streams = 100
    s_cycle = (1, 2, 4, 3)
    frame_size = 1000
    mismatched = []
    conserved = True
    subsequence_ok = True

    for k in range(n_streams):
        events = _mixed_stream(seed=1000 + k)
        rows = list(events.rows())
        s = s_cycle[k % len(s_cycle)]
        cfg = FilterConfig(geometry=GEOM32, s=s)

        expected = {
            "gf": naive_gf(rows, 32, 32, s=s, sf=10, tgf_init=1000, frame_size=frame_size),
            "bs1": naive_bs1(rows, 500, 32, 32),
            "bs2": naive_bs2(rows, 500 * s * s, s),
            "bs3": naive_bs3(rows, max(1, 500 // 32)),
        }
        for name, want in expected.items():
            got = run_filter(name, events, cfg, frame_size=frame_size)
            if list(got) != want:
                mismatched.append((k, name))
                continue
            passed, discarded = classify(events, got)
            if len(passed) + len(discarded) != len(events):
                conserved = False
            if not (passed == events[got] and discarded == events[~got]):
                conserved = False
            if k < 5:
                # independent order-preserving subsequence walk
                it = iter(rows)
                for row in passed.rows():
                    for candidate in it:
                        if candidate == row:
                            break
                    else:
                        subsequence_ok = False
                        break

    report(
        2, "filter decisions equal naive per-event references", not mismatched,
        f"{n_streams} streams x 10k events x 4 filters; mismatches: {mismatched[:5]}",
    )
    report(3, "conservation and order-preserving subset", conserved and subsequence_ok)


# --------------------------------------------------------------------------
# 4. self-agreement of the evaluation harness
# --------------------------------------------------------------------------

def test_criterion_4_self_agreement():
    stream = generate_synthetic(
        DVS128, 2_000_000, MovingDisc(cx=63.5, cy=63.5, radius=10, vx=1.0),
        ba_rate_hz=5.0, seed=21,
    )
    cfg = FilterConfig(geometry=DVS128, s=2)
    labels = label_with_reference(stream.events, cfg, name="gf", frame_size=5000)
    decisions = run_filter("gf", stream.events, cfg, frame_size=5000)
    frames = confusion(labels, decisions, 5000)
    both = [f for f in frames if f.tpr is not None and f.fpr is not None]
    ok = bool(both) and all(f.tpr == 1.0 and f.fpr == 0.0 for f in both)
    report(4, "reference evaluated against itself scores TPR=1 FPR=0", ok,
           f"{len(both)} frames with both classes")


# --------------------------------------------------------------------------
# 5. synthetic denoising quality
# --------------------------------------------------------------------------

def test_criterion_5_synthetic_denoising():
    stream = generate_synthetic(
        DVS128, 10_000_000, MovingDisc(cx=63.5, cy=63.5, radius=10, vx=1.0),
        ba_rate_hz=5.0, seed=42,
    )
    cfg = FilterConfig(geometry=DVS128, s=2)  # sf defaults to 10
    decisions = run_filter("gf", stream.events, cfg, frame_size=5000)
    frames = confusion(stream.real, decisions, 5000)
    full = [f for f in frames if f.tp + f.fp + f.tn + f.fn == 5000]
    tprs = [f.tpr for f in full if f.tpr is not None]
    fprs = [f.fpr for f in full if f.fpr is not None]
    mean_tpr = float(np.mean(tprs))
    mean_fpr = float(np.mean(fprs))
    ok = mean_tpr >= 0.7 and mean_fpr <= 0.3
    report(5, "ground-truth TPR >= 0.7 and FPR <= 0.3", ok,
           f"mean TPR {mean_tpr:.3f}, mean FPR {mean_fpr:.3f} over {len(full)} full frames")


# --------------------------------------------------------------------------
# 6. throughput ordering
# --------------------------------------------------------------------------

def test_criterion_6_throughput_ordering():
    stream = generate_synthetic(
        DVS128, 9_000_000, MovingDisc(cx=63.5, cy=63.5, radius=10, vx=1.0),
        ba_rate_hz=20.0, seed=7,
    )
    assert len(stream) >= 3_000_000
    events = stream.events[:3_000_000]
    cfg1 = FilterConfig(geometry=DVS128, s=1)
    cfg2 = FilterConfig(geometry=DVS128, s=2)
    gf1 = bench("gf", events, cfg1, frame_size=5000, repetitions=3)
    gf2 = bench("gf", events, cfg2, frame_size=5000, repetitions=3)
    bs1 = bench("bs1", events, cfg1, frame_size=5000, repetitions=3)
    ratio = bs1.wall_us / gf1.wall_us
    closeness = abs(gf2.wall_us - gf1.wall_us) / gf1.wall_us
    ok = ratio >= 1.5 and closeness <= 0.3
    report(6, "9-write baseline at least 1.5x slower; s=1 and s=2 within 30%", ok,
           f"3M events: gf1 {gf1.wall_us / 1e3:.1f} ms, gf2 {gf2.wall_us / 1e3:.1f} ms, "
           f"bs1 {bs1.wall_us / 1e3:.1f} ms, ratio {ratio:.2f}, closeness {closeness:.2f}")


# --------------------------------------------------------------------------
# 7. shared-timestamp row pathology of the row/column filter
# --------------------------------------------------------------------------

def test_criterion_7_row_timestamp_pathology():
    width, height = 64, 64
    geometry = SensorGeometry(width, height, mode="celex")
    rng = np.random.default_rng(9)
    rows = []
    tick = 0
    run_bounds = []
    for _ in range(200):
        tick += 50
        y = int(rng.integers(0, height))
        start = len(rows)
        for x in range(width):  # full-row readout, left to right, one timestamp
            rows.append((tick, x, y, 128))
        run_bounds.append((start, len(rows)))
    events = Events.from_rows(rows)
    cfg = FilterConfig(geometry=geometry)
    dt = cfg.bs3_dt_us()
    decisions = bs3_process(events, cfg)

    non_first_all_pass = all(
        bool(decisions[i]) for a, b in run_bounds for i in range(a + 1, b)
    )
    # first event of each run may only pass via column support, which we
    # re-derive from the event history independently
    col_state: dict[int, tuple[int, int]] = {}
    firsts_consistent = True
    for a, b in run_bounds:
        t0, x0, y0, _ = rows[a]
        col_ok = False
        if x0 in col_state:
            ct, cy = col_state[x0]
            col_ok = t0 - ct <= dt and abs(cy - y0) <= 1
        if bool(decisions[a]) and not col_ok:
            firsts_consistent = False
        for i in range(a, b):
            t, x, y, _ = rows[i]
            col_state[x] = (t, y)
    passed_count = int(decisions.sum())
    ok = non_first_all_pass and firsts_consistent
    report(7, "row/column filter passes every later event of a shared-timestamp row",
           ok, f"{passed_count} of {len(rows)} passed; first-of-run consistent")


# --------------------------------------------------------------------------
# 8. scale-factor and subsampling scaling laws
# --------------------------------------------------------------------------

def test_criterion_8_scaling_properties():
    rng = np.random.default_rng(3)
    ok = True
    for _ in range(300):
        fn = int(rng.integers(1, 10**6))
        td = int(rng.integers(0, 10**7))
        stats = FrameStats(fn=fn, td=td)
        base = gf_threshold_exact(stats, FilterConfig(geometry=DVS128, s=1, sf=1))
        for sf in (1, 2, 10, Fraction(1, 5), Fraction(3, 7)):
            exact = gf_threshold_exact(stats, FilterConfig(geometry=DVS128, s=1, sf=sf))
            ok &= exact * Fraction(sf) == base
        for s in (1, 2, 4, 8):
            exact = gf_threshold_exact(stats, FilterConfig(geometry=DVS128, s=s, sf=1))
            ok &= exact * s * s == base
        # floored value agrees with the exact route
        cfg = FilterConfig(geometry=DVS128, s=2, sf="0.2")
        floored = gf_threshold(stats, cfg).value
        exact = gf_threshold_exact(stats, cfg)
        ok &= floored == max(1, exact.numerator // exact.denominator)
    report(8, "threshold scales exactly as 1/sf and 1/s^2 before flooring", ok)


# --------------------------------------------------------------------------
# 9. stream file round trip
# --------------------------------------------------------------------------

def test_criterion_9_round_trip():
    rng = np.random.default_rng(12)
    failures = 0
    for k in range(1000):
        width = int(rng.integers(1, 65))
        height = int(rng.integers(1, 65))
        mode = "celex" if k % 3 == 0 else "standard"
        geometry = SensorGeometry(width, height, mode=mode)
        payload = "intensity" if k % 3 == 0 else "polarity"
        n = int(rng.integers(0, 120))
        if mode == "celex" and n:
            # tie runs: chunks of one row sharing one timestamp
            ts, xs, ys = [], [], []
            t = 0
            while len(ts) < n:
                t += int(rng.integers(1, 1000))
                y = int(rng.integers(0, height))
                run = min(int(rng.integers(1, 8)), n - len(ts))
                for _ in range(run):
                    ts.append(t)
                    xs.append(int(rng.integers(0, width)))
                    ys.append(y)
            events = Events(ts, xs, ys, np.full(n, 128))
        elif n:
            gaps = rng.integers(0, 500, size=n)
            events = Events(
                np.cumsum(gaps),
                rng.integers(0, width, size=n),
                rng.integers(0, height, size=n),
                rng.integers(0, 256 if payload == "intensity" else 2, size=n),
            )
        else:
            events = Events.empty()
        # labeled-ness of an empty stream is not representable (no data lines)
        labels = rng.random(n) < 0.5 if (k % 2 and n) else None

        buf = io.StringIO()
        write_stream(events, buf, geometry, payload=payload, labels=labels)
        parsed = read_stream(io.StringIO(buf.getvalue()))
        same = (
            parsed.events == events
            and parsed.geometry == geometry
            and parsed.payload == payload
            and (
                (labels is None and parsed.labels is None)
                or (labels is not None and np.array_equal(parsed.labels, labels))
            )
        )
        failures += 0 if same else 1
    report(9, "1000-stream read(write(E)) round trip is exact", failures == 0,
           f"{failures} failures")
