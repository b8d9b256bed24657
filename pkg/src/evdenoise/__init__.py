"""evdenoise: background-activity denoising for event-camera streams.

A library and CLI for filtering dynamic-vision-sensor event streams with a
self-adjusting global threshold plus three classic spatiotemporal baselines,
with synthetic data generation, fixed-count framing, TPR/FPR evaluation and
throughput benchmarking.
"""

from .events import (
    CELEX,
    DAVIS240,
    DVS128,
    MODE_CELEX,
    MODE_STANDARD,
    ConfigError,
    EmptyFrameError,
    Events,
    GeometryError,
    OrderingError,
    SensorGeometry,
    StreamError,
    StreamParseError,
    validate_events,
)
from .evaluation import (
    AlignmentError,
    BenchReport,
    FrameConfusion,
    bench,
    bench_csv,
    confusion,
    confusion_csv,
    label_with_reference,
    parse_confusion_csv,
)
from .filters import (
    DEFAULT_FRAME_SIZE,
    FILTER_NAMES,
    FilterConfig,
    GfThreshold,
    bs1_process,
    bs2_process,
    bs3_process,
    classify,
    gf_frame_thresholds,
    gf_process,
    gf_stream,
    gf_threshold,
    gf_threshold_exact,
    run_filter,
)
from .framing import (
    Frame,
    FrameStats,
    accumulate,
    frame_stats,
    render,
    render_frames,
    write_pgm,
)
from .io import (
    StreamFile,
    read_decisions,
    read_stream,
    write_decisions,
    write_stream,
)
from .synthetic import (
    LabeledStream,
    MovingDisc,
    MovingRect,
    generate_synthetic,
)

__version__ = "0.1.0"

__all__ = [
    "AlignmentError",
    "BenchReport",
    "CELEX",
    "ConfigError",
    "DAVIS240",
    "DEFAULT_FRAME_SIZE",
    "DVS128",
    "EmptyFrameError",
    "Events",
    "FILTER_NAMES",
    "FilterConfig",
    "Frame",
    "FrameConfusion",
    "FrameStats",
    "GeometryError",
    "GfThreshold",
    "LabeledStream",
    "MODE_CELEX",
    "MODE_STANDARD",
    "MovingDisc",
    "MovingRect",
    "OrderingError",
    "SensorGeometry",
    "StreamError",
    "StreamFile",
    "StreamParseError",
    "accumulate",
    "bench",
    "bench_csv",
    "bs1_process",
    "bs2_process",
    "bs3_process",
    "classify",
    "confusion",
    "confusion_csv",
    "frame_stats",
    "generate_synthetic",
    "gf_frame_thresholds",
    "gf_process",
    "gf_stream",
    "gf_threshold",
    "gf_threshold_exact",
    "label_with_reference",
    "parse_confusion_csv",
    "read_decisions",
    "read_stream",
    "render",
    "render_frames",
    "run_filter",
    "validate_events",
    "write_decisions",
    "write_pgm",
    "write_stream",
]
