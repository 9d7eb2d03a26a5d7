"""Live telemetry service: WebSocket fan-out plus the operator command channel.

One session loop thread is the single writer of the session state. It ticks
at the score cadence against the wall clock, drains operator commands in
arrival order, and publishes one telemetry envelope per tick. Every client
gets its own bounded buffer: a slow client loses the oldest records (gaps
are visible in `seq`) and can never backpressure the loop.
"""

from __future__ import annotations

import json
import queue
import threading
import time
from collections import deque
from typing import IO, Callable, Sequence

from websockets.exceptions import ConnectionClosed
from websockets.sync.server import ServerConnection, serve as ws_serve

from ..errors import BindError, EngineError, IllegalTransition
from ..game import Command, advance_phase
from ..ingest import RawFrame, record
from .config import EngineConfig
from .engine import Engine, parse_operator_command, telemetry_envelope


class ClientBuffer:
    """Drop-oldest telemetry buffer for one client."""

    def __init__(self, maxlen: int):
        self._items: deque[str] = deque(maxlen=maxlen)
        self._cond = threading.Condition()
        self.closed = False

    def push(self, text: str) -> None:
        with self._cond:
            self._items.append(text)  # deque(maxlen) discards the oldest
            self._cond.notify()

    def pop(self, timeout: float) -> str | None:
        with self._cond:
            if not self._items:
                self._cond.wait(timeout)
            return self._items.popleft() if self._items else None

    def close(self) -> None:
        with self._cond:
            self.closed = True
            self._cond.notify_all()


class TelemetryBroadcaster:
    def __init__(self, per_client: int):
        self.per_client = per_client
        self._clients: set[ClientBuffer] = set()
        self._lock = threading.Lock()
        self.latest: str | None = None

    def publish(self, envelope: str) -> None:
        with self._lock:
            self.latest = envelope
            for client in self._clients:
                client.push(envelope)

    def register(self) -> ClientBuffer:
        """Atomically seed a new client with the snapshot, then the live feed."""
        buf = ClientBuffer(self.per_client)
        with self._lock:
            if self.latest is not None:
                buf.push(self.latest)
            self._clients.add(buf)
        return buf

    def unregister(self, buf: ClientBuffer) -> None:
        with self._lock:
            self._clients.discard(buf)
        buf.close()


class FrameFeed:
    """Timestamp-ordered frame list consumed up to the session clock."""

    def __init__(self, frames: Sequence[RawFrame]):
        self._frames = frames
        self._idx = 0

    def due(self, t_us: int) -> list[RawFrame]:
        start = self._idx
        while self._idx < len(self._frames) and self._frames[self._idx].timestamp_us <= t_us:
            self._idx += 1
        return list(self._frames[start : self._idx])


class TelemetryServer:
    """Engine + WebSocket fan-out; start() returns once both are listening."""

    def __init__(
        self,
        config: EngineConfig,
        feed,
        force_fn: Callable[[float], float] | None = None,
        schedule: Sequence[tuple[float, Command]] = (),
        record_sink: IO[str] | None = None,
        host: str | None = None,
        port: int | None = None,
    ):
        self.config = config
        self.engine = Engine(config, force_fn=force_fn)
        self.feed = feed
        self.schedule = sorted(schedule, key=lambda item: item[0], reverse=True)
        self.record_sink = record_sink
        self.host = host if host is not None else config.service.listen_host
        self.port = port if port is not None else config.service.listen_port
        self.broadcaster = TelemetryBroadcaster(config.service.client_queue)
        self.commands: queue.Queue = queue.Queue()
        self._stop = threading.Event()
        self._threads: list[threading.Thread] = []
        self._server = None

    # -- lifecycle ---------------------------------------------------------

    def start(self) -> None:
        try:
            self._server = ws_serve(self._handle_client, self.host, self.port)
        except OSError as exc:
            raise BindError(f"cannot bind {self.host}:{self.port}: {exc}") from exc
        self.port = self._server.socket.getsockname()[1]
        if self.record_sink is not None:
            record([], self.record_sink, (self.engine.eeg_descriptor, self.engine.gaze_descriptor))
        ws_thread = threading.Thread(target=self._server.serve_forever, daemon=True, name="ws-accept")
        loop_thread = threading.Thread(target=self._session_loop, daemon=True, name="session-loop")
        ws_thread.start()
        loop_thread.start()
        self._threads = [ws_thread, loop_thread]

    def stop(self) -> None:
        self._stop.set()
        if self._server is not None:
            self._server.shutdown()
        for t in self._threads:
            t.join(timeout=2.0)

    @property
    def address(self) -> tuple[str, int]:
        return self.host, self.port

    # -- session loop ------------------------------------------------------

    def _session_loop(self) -> None:
        interval = self.engine.tick_interval_s
        next_wall = time.monotonic() + interval
        while not self._stop.is_set():
            self._apply_pending_commands()
            tick_start_us = self.engine.next_tick_us - round(interval * 1e6)
            while self.schedule and self.schedule[-1][0] * 1e6 <= tick_start_us:
                _, cmd = self.schedule.pop()
                self._advance_safely(cmd)
            for frame in self.feed.due(self.engine.next_tick_us):
                self.engine.ingest_frame(frame)
                if self.record_sink is not None:
                    record([frame], self.record_sink)
            result = self.engine.tick()
            self.broadcaster.publish(telemetry_envelope(self.engine.seq, result.record.to_obj()))
            delay = next_wall - time.monotonic()
            if delay > 0:
                self._stop.wait(delay)
            next_wall += interval

    def _apply_pending_commands(self) -> None:
        while True:
            try:
                command = self.commands.get_nowait()
            except queue.Empty:
                return
            try:
                self.engine.apply_command(command)
            except (IllegalTransition, EngineError) as exc:
                self.engine.state.log_event(f"command_rejected:{command.kind}:{exc}")

    def _advance_safely(self, cmd: Command) -> None:
        try:
            advance_phase(self.engine.state, cmd)
        except IllegalTransition as exc:
            self.engine.state.log_event(f"command_rejected:{cmd.value}:{exc}")

    # -- per-client handling ------------------------------------------------

    def _handle_client(self, conn: ServerConnection) -> None:
        buf = self.broadcaster.register()
        sender = threading.Thread(target=self._send_loop, args=(conn, buf), daemon=True)
        sender.start()
        try:
            for message in conn:
                try:
                    command = parse_operator_command(json.loads(message))
                except (ValueError, TypeError) as exc:
                    conn.send(json.dumps({"error": str(exc)}))
                    continue
                self.commands.put(command)
        except ConnectionClosed:
            pass
        finally:
            self.broadcaster.unregister(buf)
            sender.join(timeout=1.0)

    def _send_loop(self, conn: ServerConnection, buf: ClientBuffer) -> None:
        while not buf.closed and not self._stop.is_set():
            text = buf.pop(timeout=0.25)
            if text is None:
                continue
            try:
                conn.send(text)
            except (ConnectionClosed, OSError):
                return
