"""Command-line front end: generate, filter, render, evaluate, bench.

Streams travel as ``evd1`` text files (see the io module). Geometry is taken
from the input file header; ``--width``/``--height``/``--mode`` override it.
Filter defaults follow the standard configuration: fixed thresholds of
0.5 ms (bs1), 0.5*s^2 ms (bs2) and 0.5/width ms (bs3), scale factor 10 on
standard sensors and 0.2 on celex sensors, initial adaptive threshold 1 ms.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import replace
from pathlib import Path

from .events import (
    MODES,
    ConfigError,
    Events,
    SensorGeometry,
    StreamError,
    validate_events,
)
from .evaluation import (
    bench,
    bench_csv,
    confusion,
    confusion_csv,
    label_with_reference,
)
from .filters import (
    DEFAULT_FRAME_SIZE,
    DEFAULT_TGF_INIT_US,
    FILTER_NAMES,
    FilterConfig,
    classify,
    run_filter,
)
from .framing import render_frames
from .io import read_stream, write_decisions, write_stream
from .synthetic import (
    DEFAULT_TIME_STEP_US,
    MovingDisc,
    MovingRect,
    generate_synthetic,
)


def _add_geometry_flags(parser, with_defaults: bool) -> None:
    parser.add_argument("--width", type=int, default=128 if with_defaults else None)
    parser.add_argument("--height", type=int, default=128 if with_defaults else None)
    parser.add_argument("--mode", choices=MODES, default="standard" if with_defaults else None)


def _add_filter_flags(parser) -> None:
    parser.add_argument("--filter", choices=FILTER_NAMES, default="gf")
    parser.add_argument("--s", type=int, default=1, help="subsampling factor")
    parser.add_argument("--sf", type=float, default=None, help="scale factor (default by mode)")
    parser.add_argument("--dt-us", type=int, default=None, help="fixed threshold override")
    parser.add_argument("--tgf-init-us", type=int, default=DEFAULT_TGF_INIT_US)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="evdenoise", description="Event-stream denoising toolkit"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("generate", help="write a synthetic labeled stream")
    gen.add_argument("--output", required=True)
    _add_geometry_flags(gen, with_defaults=True)
    gen.add_argument("--duration-us", type=int, default=1_000_000)
    gen.add_argument("--ba-rate", type=float, default=5.0, help="noise rate, Hz per pixel")
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--object", choices=("disc", "rect"), default="disc")
    gen.add_argument("--radius", type=float, default=10.0)
    gen.add_argument("--rect-width", type=float, default=20.0)
    gen.add_argument("--rect-height", type=float, default=20.0)
    gen.add_argument("--cx", type=float, default=None, help="start center x (default: middle)")
    gen.add_argument("--cy", type=float, default=None)
    gen.add_argument("--vx", type=float, default=1.0, help="velocity, px per ms")
    gen.add_argument("--vy", type=float, default=0.0)
    gen.add_argument("--time-step-us", type=int, default=DEFAULT_TIME_STEP_US)

    flt = sub.add_parser("filter", help="run a filter, write passed events")
    flt.add_argument("--input", required=True)
    flt.add_argument("--output", required=True)
    _add_geometry_flags(flt, with_defaults=False)
    _add_filter_flags(flt)
    flt.add_argument("--frame-size", type=int, default=DEFAULT_FRAME_SIZE)
    flt.add_argument("--discarded", default=None, help="also write discarded events here")
    flt.add_argument("--decisions", default=None, help="write per-event pass flags here")

    ren = sub.add_parser("render", help="write one PGM image per frame")
    ren.add_argument("--input", required=True)
    ren.add_argument("--output", required=True, help="output stem: <stem>_<index>.pgm")
    _add_geometry_flags(ren, with_defaults=False)
    ren.add_argument("--frame-size", type=int, default=DEFAULT_FRAME_SIZE)

    ev = sub.add_parser("evaluate", help="per-frame TPR/FPR of a candidate filter")
    ev.add_argument("--input", required=True)
    ev.add_argument("--output", default=None, help="confusion CSV (default: stdout)")
    _add_geometry_flags(ev, with_defaults=False)
    _add_filter_flags(ev)
    ev.add_argument("--frame-size", type=int, default=DEFAULT_FRAME_SIZE)
    ev.add_argument(
        "--reference",
        choices=FILTER_NAMES,
        default="gf",
        help="labeling filter when the stream has no embedded labels",
    )
    ev.add_argument("--reference-s", type=int, default=2)

    bn = sub.add_parser("bench", help="time filters over an in-memory stream")
    bn.add_argument("--input", required=True)
    bn.add_argument("--output", default=None, help="bench CSV (default: stdout)")
    _add_geometry_flags(bn, with_defaults=False)
    _add_filter_flags(bn)
    bn.add_argument("--all", action="store_true", help="bench every filter")
    bn.add_argument("--frame-size", type=int, default=DEFAULT_FRAME_SIZE)
    bn.add_argument("--repetitions", type=int, default=3)

    return parser


def _geometry_from_args(args) -> SensorGeometry:
    return SensorGeometry(args.width, args.height, mode=args.mode)


def _load(args) -> tuple[Events, SensorGeometry, "object"]:
    """Read the input stream and apply any geometry overrides."""
    data = read_stream(args.input)
    geometry = data.geometry
    if args.width is not None or args.height is not None or args.mode is not None:
        geometry = replace(
            geometry,
            width=args.width if args.width is not None else geometry.width,
            height=args.height if args.height is not None else geometry.height,
            mode=args.mode if args.mode is not None else geometry.mode,
        )
        validate_events(data.events, geometry, check_order=False)
    return data.events, geometry, data


def filter_config_from_args(args, geometry: SensorGeometry) -> FilterConfig:
    return FilterConfig(
        geometry=geometry,
        s=args.s,
        sf=args.sf,
        dt_fixed_us=args.dt_us,
        tgf_init_us=args.tgf_init_us,
    )


def _emit(text: str, path: str | None) -> None:
    if path is None:
        sys.stdout.write(text)
    else:
        Path(path).write_text(text, encoding="utf-8")


def _cmd_generate(args) -> int:
    geometry = _geometry_from_args(args)
    cx = args.cx if args.cx is not None else (geometry.width - 1) / 2
    cy = args.cy if args.cy is not None else (geometry.height - 1) / 2
    if args.object == "disc":
        shape = MovingDisc(cx=cx, cy=cy, radius=args.radius, vx=args.vx, vy=args.vy)
    else:
        shape = MovingRect(
            cx=cx, cy=cy, width=args.rect_width, height=args.rect_height,
            vx=args.vx, vy=args.vy,
        )
    stream = generate_synthetic(
        geometry,
        args.duration_us,
        shape,
        args.ba_rate,
        args.seed,
        time_step_us=args.time_step_us,
    )
    write_stream(stream.events, args.output, geometry, labels=stream.real)
    print(
        f"wrote {len(stream)} events ({int(stream.real.sum())} real, "
        f"{int((~stream.real).sum())} noise) to {args.output}"
    )
    return 0


def _cmd_filter(args) -> int:
    events, geometry, data = _load(args)
    config = filter_config_from_args(args, geometry)
    decisions = run_filter(args.filter, events, config, frame_size=args.frame_size)
    passed, discarded = classify(events, decisions)
    labels = data.labels
    write_stream(
        passed, args.output, geometry, payload=data.payload,
        labels=None if labels is None else labels[decisions],
    )
    if args.discarded:
        write_stream(
            discarded, args.discarded, geometry, payload=data.payload,
            labels=None if labels is None else labels[~decisions],
        )
    if args.decisions:
        write_decisions(decisions, args.decisions, filter_name=args.filter)
    print(f"{args.filter}: passed {len(passed)} of {len(events)} events")
    return 0


def _cmd_render(args) -> int:
    events, geometry, _ = _load(args)
    paths = render_frames(events, geometry, args.frame_size, args.output)
    print(f"wrote {len(paths)} frames to {args.output}_*.pgm")
    return 0


def _cmd_evaluate(args) -> int:
    events, geometry, data = _load(args)
    if data.labels is not None:
        labels = data.labels
    else:
        ref_config = FilterConfig(geometry=geometry, s=args.reference_s)
        labels = label_with_reference(
            events, ref_config, name=args.reference, frame_size=args.frame_size
        )
    config = filter_config_from_args(args, geometry)
    decisions = run_filter(args.filter, events, config, frame_size=args.frame_size)
    _emit(confusion_csv(confusion(labels, decisions, args.frame_size)), args.output)
    return 0


def _cmd_bench(args) -> int:
    events, geometry, _ = _load(args)
    config = filter_config_from_args(args, geometry)
    names = FILTER_NAMES if args.all else (args.filter,)
    reports = [
        bench(name, events, config, frame_size=args.frame_size, repetitions=args.repetitions)
        for name in names
    ]
    _emit(bench_csv(reports), args.output)
    return 0


_COMMANDS = {
    "generate": _cmd_generate,
    "filter": _cmd_filter,
    "render": _cmd_render,
    "evaluate": _cmd_evaluate,
    "bench": _cmd_bench,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except FileNotFoundError as exc:
        print(f"evdenoise {args.command}: no such file: {exc.filename}", file=sys.stderr)
        return 1
    except (StreamError, ConfigError, ValueError) as exc:
        source = getattr(args, "input", None) or getattr(args, "output", None)
        print(f"evdenoise {args.command}: {source}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
