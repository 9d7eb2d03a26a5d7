"""Recording round trips, parse failures, pacing, and sink failure accounting."""

import io
import time

import pytest

from mindpull.errors import RecordingParseError, SinkFailure, TimestampRegression
from mindpull.ingest import (
    PiecewiseLinear,
    RawFrame,
    StreamKind,
    SyntheticProfile,
    ToneComponent,
    default_eeg_descriptor,
    default_gaze_descriptor,
    merge_streams,
    read_descriptors,
    record,
    replay,
    synth_generate,
)


def build_streams(duration=1.0):
    profile = SyntheticProfile(
        components=(ToneComponent(10.0, PiecewiseLinear.constant(1.0)),),
        noise_amplitude_uv=0.1,
        seed=3,
    )
    eeg = synth_generate(profile, default_eeg_descriptor(), duration)
    gaze = synth_generate(profile, default_gaze_descriptor(), duration)
    return merge_streams(eeg, gaze)


def test_empty_sequence_writes_zero_lines():
    sink = io.StringIO()
    assert record([], sink) == 0
    assert sink.getvalue() == ""


def test_record_replay_identity():
    frames = build_streams()
    sink = io.StringIO()
    assert record(frames, sink) == len(frames)
    back = list(replay(io.StringIO(sink.getvalue()), speed=0.0))
    assert back == frames


def test_interleaving_preserved_in_file_order():
    frames = build_streams()
    sink = io.StringIO()
    record(frames, sink)
    kinds = [f.stream_kind for f in replay(io.StringIO(sink.getvalue()), speed=0.0)]
    assert kinds == [f.stream_kind for f in frames]


def test_descriptor_lines_written_and_read_back():
    descs = (default_eeg_descriptor(), default_gaze_descriptor())
    sink = io.StringIO()
    record(build_streams(0.1), sink, descriptors=descs)
    text = sink.getvalue()
    assert text.splitlines()[0].startswith('{"k": "desc"')
    assert tuple(read_descriptors(io.StringIO(text))) == descs
    # replay skips descriptor lines transparently
    assert list(replay(io.StringIO(text), speed=0.0)) == build_streams(0.1)


def test_parse_error_carries_line_number():
    lines = [f'{{"k": "eeg", "t": {i}, "v": [0.0]}}' for i in range(1, 10)]
    lines[6] = "{not json"
    src = io.StringIO("\n".join(lines) + "\n")
    with pytest.raises(RecordingParseError) as err:
        list(replay(src, speed=0.0))
    assert err.value.line == 7


def test_timestamp_regression_detected_per_stream():
    src = io.StringIO(
        '{"k": "eeg", "t": 10, "v": [0.0]}\n'
        '{"k": "gaze", "t": 5, "v": [0.0, 0.0]}\n'  # other stream: fine
        '{"k": "eeg", "t": 10, "v": [0.0]}\n'  # equal: regression
    )
    with pytest.raises(TimestampRegression) as err:
        list(replay(src, speed=0.0))
    assert err.value.line == 3


def test_speed_zero_is_fast():
    frames = build_streams(10.0)
    sink = io.StringIO()
    record(frames, sink)
    started = time.perf_counter()
    out = list(replay(io.StringIO(sink.getvalue()), speed=0.0))
    assert time.perf_counter() - started < 2.0
    assert len(out) == len(frames)


def test_paced_replay_approximates_deltas():
    frames = [RawFrame(StreamKind.EEG, t, (0.0,)) for t in (0, 50_000, 100_000)]
    sink = io.StringIO()
    record(frames, sink)
    started = time.perf_counter()
    list(replay(io.StringIO(sink.getvalue()), speed=1.0))
    elapsed = time.perf_counter() - started
    assert 0.08 <= elapsed <= 0.5  # 100 ms of recording at speed 1


def test_sink_failure_reports_partial_count():
    class FlakySink(io.StringIO):
        def __init__(self, fail_after):
            super().__init__()
            self.remaining = fail_after

        def write(self, s):
            if self.remaining == 0:
                raise OSError("disk full")
            self.remaining -= 1
            return super().write(s)

    frames = build_streams(0.1)
    with pytest.raises(SinkFailure) as err:
        record(frames, FlakySink(fail_after=5))
    assert err.value.written == 5
