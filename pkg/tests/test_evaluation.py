import numpy as np
import pytest

from evdenoise import (
    AlignmentError,
    BenchReport,
    ConfigError,
    FilterConfig,
    FrameConfusion,
    MovingDisc,
    SensorGeometry,
    bench,
    bench_csv,
    confusion,
    confusion_csv,
    generate_synthetic,
    label_with_reference,
    parse_confusion_csv,
    run_filter,
)

GEOM = SensorGeometry(32, 32)


@pytest.fixture(scope="module")
def stream():
    return generate_synthetic(
        GEOM, 300_000, MovingDisc(cx=15, cy=15, radius=5, vx=1.0), 10.0, seed=2
    ).events


class TestLabeling:
    def test_labels_equal_reference_decisions(self, stream):
        cfg = FilterConfig(geometry=GEOM, s=2)
        labels = label_with_reference(stream, cfg, frame_size=500)
        decisions = run_filter("gf", stream, cfg, frame_size=500)
        assert np.array_equal(labels, decisions)

    def test_baseline_reference(self, stream):
        cfg = FilterConfig(geometry=GEOM)
        labels = label_with_reference(stream, cfg, name="bs1")
        assert np.array_equal(labels, run_filter("bs1", stream, cfg))


class TestConfusion:
    def test_self_agreement(self):
        labels = np.array([True, False, True, False, True, True])
        frames = confusion(labels, labels.copy(), 3)
        for f in frames:
            assert f.tpr == 1.0 and f.fpr == 0.0

    def test_pass_nothing(self):
        labels = np.array([True, False, True, False])
        frames = confusion(labels, np.zeros(4, dtype=bool), 4)
        assert frames[0].tpr == 0.0 and frames[0].fpr == 0.0

    def test_pass_everything(self):
        labels = np.array([True, False, True, False])
        frames = confusion(labels, np.ones(4, dtype=bool), 4)
        assert frames[0].tpr == 1.0 and frames[0].fpr == 1.0

    def test_counts_sum_to_frame_size(self):
        rng = np.random.default_rng(0)
        labels = rng.random(1000) < 0.6
        decisions = rng.random(1000) < 0.5
        frames = confusion(labels, decisions, 128)
        for f in frames[:-1]:
            assert f.tp + f.fp + f.tn + f.fn == 128
        assert sum(f.tp + f.fp + f.tn + f.fn for f in frames) == 1000

    def test_class_count_identities(self):
        rng = np.random.default_rng(1)
        labels = rng.random(500) < 0.3
        decisions = rng.random(500) < 0.5
        frames = confusion(labels, decisions, 100)
        for k, f in enumerate(frames):
            lab = labels[k * 100 : (k + 1) * 100]
            assert f.tp + f.fn == int(lab.sum())
            assert f.fp + f.tn == int((~lab).sum())

    def test_empty_class_is_none(self):
        frames = confusion(np.array([True, True]), np.array([True, False]), 2)
        assert frames[0].fpr is None and frames[0].tpr == 0.5
        frames = confusion(np.array([False, False]), np.array([True, False]), 2)
        assert frames[0].tpr is None and frames[0].fpr == 0.5

    def test_alignment_error(self):
        with pytest.raises(AlignmentError):
            confusion(np.array([True]), np.array([True, False]), 1)

    def test_bad_frame_size(self):
        with pytest.raises(ConfigError):
            confusion(np.array([True]), np.array([True]), 0)


class TestCsv:
    def test_empty_is_header_only(self):
        assert confusion_csv([]) == "frame,tp,fp,tn,fn,tpr,fpr\n"
        assert bench_csv([]) == "filter,frame_size,events,wall_us,events_per_s\n"

    def test_ratio_formatting(self):
        row = FrameConfusion(frame_index=0, tp=8, fp=1, tn=9, fn=2)
        text = confusion_csv([row])
        assert "0.800000" in text and "0.100000" in text

    def test_none_ratio_is_empty_field(self):
        row = FrameConfusion(frame_index=0, tp=0, fp=0, tn=5, fn=0)
        line = confusion_csv([row]).splitlines()[1]
        assert line == "0,0,0,5,0,,0.000000"

    def test_roundtrip(self):
        rows = [
            FrameConfusion(frame_index=0, tp=8, fp=1, tn=9, fn=2),
            FrameConfusion(frame_index=1, tp=0, fp=0, tn=5, fn=0),
        ]
        assert parse_confusion_csv(confusion_csv(rows)) == rows

    def test_parse_rejects_other_csv(self):
        with pytest.raises(ValueError):
            parse_confusion_csv("a,b\n1,2\n")

    def test_bench_row(self):
        r = BenchReport(filter_name="bs1", frame_size=5000, events=1_000_000, wall_us=250000.0)
        text = bench_csv([r])
        assert text.splitlines()[1] == "bs1,5000,1000000,250000,4000000.00"
        assert r.events_per_s == pytest.approx(4_000_000.0)


class TestBench:
    def test_report_fields(self, stream):
        cfg = FilterConfig(geometry=GEOM, s=2)
        report = bench("bs2", stream, cfg, frame_size=500, repetitions=2)
        assert report.filter_name == "bs2"
        assert report.events == len(stream)
        assert report.wall_us > 0
        assert report.events_per_s > 0

    def test_empty_stream_rejected(self):
        from evdenoise import Events

        cfg = FilterConfig(geometry=GEOM)
        with pytest.raises(ConfigError):
            bench("bs1", Events.empty(), cfg)

    def test_zero_repetitions_rejected(self, stream):
        cfg = FilterConfig(geometry=GEOM)
        with pytest.raises(ConfigError):
            bench("bs1", stream, cfg, repetitions=0)
