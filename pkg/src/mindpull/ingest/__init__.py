"""Sample-stream ingestion: wire codec, synthetic sources, record/replay."""

from .recording import read_descriptors, record, replay
from .synth import frame_timestamps_us, merge_streams, synth_generate
from .types import (
    DEFAULT_EEG_LABELS,
    DEFAULT_EEG_RATE_HZ,
    DEFAULT_GAZE_RATE_HZ,
    GazeScript,
    PiecewiseLinear,
    RawFrame,
    StreamDescriptor,
    StreamKind,
    SyntheticProfile,
    ToneComponent,
    default_eeg_descriptor,
    default_gaze_descriptor,
)
from .wire import (
    HEADER_LEN,
    MAGIC,
    PROTOCOL_VERSION,
    StreamDecoder,
    decode_frame,
    decode_handshake,
    encode_frame,
    encode_handshake,
)

__all__ = [
    "DEFAULT_EEG_LABELS",
    "DEFAULT_EEG_RATE_HZ",
    "DEFAULT_GAZE_RATE_HZ",
    "GazeScript",
    "HEADER_LEN",
    "MAGIC",
    "PROTOCOL_VERSION",
    "PiecewiseLinear",
    "RawFrame",
    "StreamDecoder",
    "StreamDescriptor",
    "StreamKind",
    "SyntheticProfile",
    "ToneComponent",
    "decode_frame",
    "decode_handshake",
    "default_eeg_descriptor",
    "default_gaze_descriptor",
    "encode_frame",
    "encode_handshake",
    "frame_timestamps_us",
    "merge_streams",
    "read_descriptors",
    "record",
    "replay",
    "synth_generate",
]
