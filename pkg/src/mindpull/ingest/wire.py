"""Binary sample-stream codec.

Frame layout (little-endian):

    magic     4 bytes  0x53 0x57 0x52 0x44 ("SWRD")
    version   u8       1
    kind      u8       0=eeg, 1=gaze; bit 7 set marks a handshake frame
    channels  u8
    reserved  u8       0
    t_us      u64
    payload   channels * f32        (data frame, uV / degrees)

A handshake frame is sent once per connection per stream. Its payload is
self-delimiting: sample_rate_hz f32, channel_count u8, then channel labels
each as u8 length + UTF-8 bytes.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass

from ..errors import (
    BadMagic,
    ChannelOverflow,
    LengthMismatch,
    UnknownStreamKind,
    UnsupportedVersion,
)
from .types import RawFrame, StreamDescriptor, StreamKind

MAGIC = b"SWRD"
PROTOCOL_VERSION = 1
HEADER_LEN = 16
HANDSHAKE_BIT = 0x80

_HEADER = struct.Struct("<4sBBBBQ")

_KIND_CODE = {StreamKind.EEG: 0, StreamKind.GAZE: 1}
_CODE_KIND = {0: StreamKind.EEG, 1: StreamKind.GAZE}


def encode_frame(frame: RawFrame) -> bytes:
    """Encode one data frame; total length is 16 + 4 * channel_count bytes."""
    count = len(frame.values)
    if count > 255:
        raise ChannelOverflow(f"{count} channels, wire maximum is 255")
    header = _HEADER.pack(
        MAGIC, PROTOCOL_VERSION, _KIND_CODE[frame.stream_kind], count, 0, frame.timestamp_us
    )
    return header + struct.pack(f"<{count}f", *frame.values)


def decode_frame(buf: bytes) -> RawFrame:
    """Decode exactly one complete data frame from `buf`.

    Values round-trip exactly only when f32-representable; the wire payload
    is f32 by design.
    """
    _check_header(buf)
    magic, version, kind_code, count, _reserved, t_us = _HEADER.unpack_from(buf)
    expected = HEADER_LEN + 4 * count
    if len(buf) != expected:
        raise LengthMismatch(f"frame declares {count} channels ({expected} bytes), got {len(buf)}")
    values = struct.unpack_from(f"<{count}f", buf, HEADER_LEN)
    return RawFrame(_CODE_KIND[kind_code & ~HANDSHAKE_BIT], t_us, tuple(float(v) for v in values))


def encode_handshake(desc: StreamDescriptor, timestamp_us: int = 0) -> bytes:
    payload = struct.pack("<fB", desc.sample_rate_hz, desc.channel_count)
    for label in desc.channel_labels:
        raw = label.encode("utf-8")
        if len(raw) > 255:
            raise ChannelOverflow(f"label {label!r} exceeds 255 bytes")
        payload += struct.pack("<B", len(raw)) + raw
    header = _HEADER.pack(
        MAGIC,
        PROTOCOL_VERSION,
        _KIND_CODE[desc.stream_kind] | HANDSHAKE_BIT,
        desc.channel_count,
        0,
        timestamp_us,
    )
    return header + payload


def decode_handshake(buf: bytes) -> StreamDescriptor:
    _check_header(buf)
    kind_code = buf[5]
    if not kind_code & HANDSHAKE_BIT:
        raise BadMagic("not a handshake frame")
    kind = _CODE_KIND[kind_code & ~HANDSHAKE_BIT]
    rate, count = struct.unpack_from("<fB", buf, HEADER_LEN)
    pos = HEADER_LEN + 5
    labels = []
    for _ in range(count):
        if pos >= len(buf):
            raise LengthMismatch("handshake truncated inside labels")
        n = buf[pos]
        pos += 1
        if pos + n > len(buf):
            raise LengthMismatch("handshake truncated inside labels")
        labels.append(buf[pos : pos + n].decode("utf-8"))
        pos += n
    if pos != len(buf):
        raise LengthMismatch(f"{len(buf) - pos} trailing bytes after handshake")
    return StreamDescriptor(kind, float(rate), int(count), tuple(labels))


def _check_header(buf: bytes) -> None:
    if len(buf) < HEADER_LEN:
        raise LengthMismatch(f"need {HEADER_LEN} header bytes, got {len(buf)}")
    if buf[:4] != MAGIC:
        raise BadMagic(f"expected {MAGIC!r}, got {buf[:4]!r}")
    if buf[4] != PROTOCOL_VERSION:
        raise UnsupportedVersion(f"version {buf[4]}, supported: {PROTOCOL_VERSION}")
    if buf[5] & ~HANDSHAKE_BIT not in _CODE_KIND:
        raise UnknownStreamKind(f"stream kind byte 0x{buf[5]:02x}")


@dataclass(frozen=True)
class DecodeFailure:
    offset: int
    error: Exception


class StreamDecoder:
    """Incremental decoder with byte-level resync.

    feed() returns decoded items (RawFrame or StreamDescriptor) in stream
    order. After a bad header the decoder advances one byte and scans for the
    next magic sequence, so a corrupted region never swallows the following
    valid frame. Failures are collected on `failures`.
    """

    def __init__(self):
        self._buf = bytearray()
        self._consumed = 0
        self.failures: list[DecodeFailure] = []

    def feed(self, data: bytes) -> list[RawFrame | StreamDescriptor]:
        self._buf.extend(data)
        out: list[RawFrame | StreamDescriptor] = []
        while True:
            start = self._buf.find(MAGIC)
            if start < 0:
                # No magic anywhere: keep a tail that could begin one.
                self._drop(max(0, len(self._buf) - (len(MAGIC) - 1)))
                return out
            if start > 0:
                self._drop(start)
            if len(self._buf) < HEADER_LEN:
                return out
            try:
                item, length = self._parse_at_head()
            except (BadMagic, UnsupportedVersion, UnknownStreamKind, LengthMismatch) as exc:
                self.failures.append(DecodeFailure(self._consumed, exc))
                self._drop(1)  # resync: scan forward for the next magic
                continue
            if item is None:
                return out  # incomplete; wait for more bytes
            out.append(item)
            self._drop(length)

    def _parse_at_head(self):
        buf = self._buf
        version, kind_code, count = buf[4], buf[5], buf[6]
        if version != PROTOCOL_VERSION:
            raise UnsupportedVersion(f"version {version}, supported: {PROTOCOL_VERSION}")
        if kind_code & ~HANDSHAKE_BIT not in _CODE_KIND:
            raise UnknownStreamKind(f"stream kind byte 0x{kind_code:02x}")
        if kind_code & HANDSHAKE_BIT:
            length = self._handshake_length(count)
            if length is None:
                return None, 0
            return decode_handshake(bytes(buf[:length])), length
        length = HEADER_LEN + 4 * count
        if len(buf) < length:
            return None, 0
        return decode_frame(bytes(buf[:length])), length

    def _handshake_length(self, count: int) -> int | None:
        pos = HEADER_LEN + 5
        if len(self._buf) < pos:
            return None
        for _ in range(count):
            if pos >= len(self._buf):
                return None
            pos += 1 + self._buf[pos]
        return pos if pos <= len(self._buf) else None

    def _drop(self, n: int) -> None:
        if n:
            del self._buf[:n]
            self._consumed += n
