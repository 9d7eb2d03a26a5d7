"""JSON-Lines recording and paced replay of frame streams.

One object per frame: {"k": "eeg"|"gaze", "t": <int us>, "v": [numbers]}.
A full recording starts with one descriptor line per stream:
{"k": "desc", "stream": "eeg", "rate": 256.0, "channels": [...]}.
"""

from __future__ import annotations

import json
import time
from typing import IO, Iterable, Iterator, Sequence

from ..errors import RecordingParseError, SinkFailure, TimestampRegression
from .types import RawFrame, StreamDescriptor, StreamKind


def descriptor_line(desc: StreamDescriptor) -> str:
    return json.dumps(
        {
            "k": "desc",
            "stream": desc.stream_kind.value,
            "rate": desc.sample_rate_hz,
            "channels": list(desc.channel_labels),
        }
    )


def frame_line(frame: RawFrame) -> str:
    return json.dumps(
        {"k": frame.stream_kind.value, "t": frame.timestamp_us, "v": list(frame.values)}
    )


def record(
    frames: Iterable[RawFrame],
    sink: IO[str],
    descriptors: Sequence[StreamDescriptor] = (),
) -> int:
    """Write frames as JSONL in input order; returns frames written.

    Descriptor lines (when given) are written first and do not count.
    On a sink failure the partial count rides on the exception.
    """
    written = 0
    try:
        for desc in descriptors:
            sink.write(descriptor_line(desc) + "\n")
        for frame in frames:
            sink.write(frame_line(frame) + "\n")
            written += 1
    except OSError as exc:
        raise SinkFailure(str(exc), written) from exc
    return written


def replay(source: Iterable[str], speed: float = 0.0) -> Iterator[RawFrame]:
    """Yield frames in file order; speed=0 disables pacing entirely.

    At speed s > 0, sleeps so inter-frame delivery approximates the recorded
    timestamp deltas divided by s. Descriptor lines are skipped.
    """
    if speed < 0:
        raise ValueError("speed must be >= 0")
    last_seen: dict[StreamKind, int] = {}
    prev_t_us: int | None = None
    for lineno, line in enumerate(source, start=1):
        if not line.strip():
            continue
        try:
            obj = json.loads(line)
            kind_tag = obj["k"]
            if kind_tag == "desc":
                continue
            frame = RawFrame(StreamKind(kind_tag), int(obj["t"]), tuple(float(v) for v in obj["v"]))
        except (ValueError, KeyError, TypeError) as exc:
            raise RecordingParseError(str(exc), lineno) from exc
        last = last_seen.get(frame.stream_kind)
        if last is not None and frame.timestamp_us <= last:
            raise TimestampRegression(
                f"{frame.stream_kind.value} timestamp {frame.timestamp_us} after {last}",
                line=lineno,
            )
        last_seen[frame.stream_kind] = frame.timestamp_us
        if speed > 0 and prev_t_us is not None and frame.timestamp_us > prev_t_us:
            time.sleep((frame.timestamp_us - prev_t_us) / 1e6 / speed)
        prev_t_us = frame.timestamp_us
        yield frame


def read_descriptors(source: Iterable[str]) -> list[StreamDescriptor]:
    """Collect the leading descriptor lines of a recording."""
    descriptors = []
    for lineno, line in enumerate(source, start=1):
        if not line.strip():
            continue
        try:
            obj = json.loads(line)
        except ValueError as exc:
            raise RecordingParseError(str(exc), lineno) from exc
        if obj.get("k") != "desc":
            break
        descriptors.append(
            StreamDescriptor(
                StreamKind(obj["stream"]),
                float(obj["rate"]),
                len(obj["channels"]),
                tuple(obj["channels"]),
            )
        )
    return descriptors
