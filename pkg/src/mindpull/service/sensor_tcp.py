"""TCP sensor ingestion: binary-protocol producers feeding bounded queues.

Each connected producer sends a handshake per stream followed by data
frames. Frames are never dropped here: when a stream's queue is full the
reader blocks, which backpressures the producer's socket.
"""

from __future__ import annotations

import queue
import socket
import threading

from ..errors import BindError
from ..ingest import RawFrame, StreamDecoder, StreamDescriptor, StreamKind


class SensorIngestServer:
    def __init__(self, host: str, port: int, queue_size: int = 4096):
        self.host = host
        self.port = port
        self.queues: dict[StreamKind, queue.Queue] = {
            kind: queue.Queue(maxsize=queue_size) for kind in StreamKind
        }
        self.descriptors: dict[StreamKind, StreamDescriptor] = {}
        self._stop = threading.Event()
        self._sock: socket.socket | None = None
        self._threads: list[threading.Thread] = []

    def start(self) -> None:
        sock = socket.socket(socket.AF_INET, socket.SOCK_STREAM)
        sock.setsockopt(socket.SOL_SOCKET, socket.SO_REUSEADDR, 1)
        try:
            sock.bind((self.host, self.port))
        except OSError as exc:
            sock.close()
            raise BindError(f"cannot bind sensor listener on {self.host}:{self.port}: {exc}") from exc
        sock.listen(4)
        sock.settimeout(0.2)
        self._sock = sock
        self.port = sock.getsockname()[1]
        acceptor = threading.Thread(target=self._accept_loop, daemon=True, name="sensor-accept")
        acceptor.start()
        self._threads.append(acceptor)

    def stop(self) -> None:
        self._stop.set()
        if self._sock is not None:
            self._sock.close()
        for t in self._threads:
            t.join(timeout=1.0)

    def drain(self) -> list[RawFrame]:
        """Non-blocking: all frames that have arrived, per-stream order kept."""
        frames: list[RawFrame] = []
        for q in self.queues.values():
            while True:
                try:
                    frames.append(q.get_nowait())
                except queue.Empty:
                    break
        frames.sort(key=lambda f: f.timestamp_us)
        return frames

    def _accept_loop(self) -> None:
        assert self._sock is not None
        while not self._stop.is_set():
            try:
                conn, _addr = self._sock.accept()
            except socket.timeout:
                continue
            except OSError:
                return
            reader = threading.Thread(
                target=self._read_loop, args=(conn,), daemon=True, name="sensor-read"
            )
            reader.start()
            self._threads.append(reader)

    def _read_loop(self, conn: socket.socket) -> None:
        decoder = StreamDecoder()
        conn.settimeout(0.2)
        try:
            while not self._stop.is_set():
                try:
                    data = conn.recv(65536)
                except socket.timeout:
                    continue
                except OSError:
                    return
                if not data:
                    return
                for item in decoder.feed(data):
                    if isinstance(item, StreamDescriptor):
                        self.descriptors[item.stream_kind] = item
                        continue
                    desc = self.descriptors.get(item.stream_kind)
                    if desc is not None and len(item.values) != desc.channel_count:
                        return  # producer out of contract: drop the connection
                    self.queues[item.stream_kind].put(item)  # blocks when full
        finally:
            conn.close()
