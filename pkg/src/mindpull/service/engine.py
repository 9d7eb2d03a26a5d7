"""Closed-loop composition: frames in, score ticks, commands and telemetry out.

The Engine is the single-threaded core shared by the headless runner and the
live server. It owns the per-channel spectral windows, the gaze tracker, and
the session state machine; callers feed it frames in timestamp order and it
fires score ticks at the configured cadence (default 10 Hz).
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass
from typing import IO, Callable, Iterable

from ..dsp import SampleWindow, relative_alpha, welch_psd
from ..errors import ConfigValidationError, IllegalTransition
from ..estimator import ScoreMode
from ..game import (
    Command,
    DistractionEvent,
    DistractionKind,
    Phase,
    TickInputs,
    TickResult,
    advance_phase,
    session_tick,
    start_session,
)
from ..gaze import GazeSample, GazeTracker
from ..ingest import (
    RawFrame,
    StreamDescriptor,
    StreamKind,
    default_eeg_descriptor,
    default_gaze_descriptor,
    record,
)
from .config import DspConfig, EngineConfig


class MetricPipeline:
    """Per-channel sliding windows feeding the aggregated alpha metric."""

    def __init__(self, dsp: DspConfig, descriptor: StreamDescriptor):
        self.dsp = dsp
        self.descriptor = descriptor
        channels = dsp.channels if dsp.channels is not None else tuple(range(descriptor.channel_count))
        for ch in channels:
            if not 0 <= ch < descriptor.channel_count:
                raise ConfigValidationError("dsp.channels", f"channel {ch} out of range")
        capacity = round(dsp.window_s * descriptor.sample_rate_hz)
        self.windows = {
            ch: SampleWindow(capacity, descriptor.sample_rate_hz) for ch in channels
        }
        self._warm_fft(capacity, descriptor.sample_rate_hz)

    def _warm_fft(self, capacity: int, rate: float) -> None:
        # First rfft of a given size pays one-time plan/cache cost; spend it
        # at construction so steady-state tick latency stays flat.
        scratch = SampleWindow(capacity, rate)
        for i in range(capacity):
            scratch.push(i + 1, 0.0)
        welch_psd(scratch, self.dsp.segment_len, self.dsp.overlap_fraction)

    def push_frame(self, frame: RawFrame) -> None:
        for ch, window in self.windows.items():
            window.push(frame.timestamp_us, frame.values[ch])

    @property
    def ready(self) -> bool:
        return all(w.is_full for w in self.windows.values())

    def compute_metric(self) -> float | None:
        """Mean relative alpha over the configured channels; None until full."""
        if not self.ready:
            return None
        total = 0.0
        for window in self.windows.values():
            spectrum = welch_psd(window, self.dsp.segment_len, self.dsp.overlap_fraction)
            total += relative_alpha(spectrum)
        return total / len(self.windows)


@dataclass(frozen=True)
class OperatorCommand:
    kind: str
    newtons: float = 0.0
    mode: ScoreMode | None = None
    distraction: DistractionKind = DistractionKind.MONSTER_SCREAM


COMMAND_KINDS = (
    "start_calibration",
    "finish_phase",
    "start_pull",
    "abort",
    "inject_distraction",
    "set_force",
    "set_mode",
)


def parse_operator_command(obj: dict) -> OperatorCommand:
    """Validate one command message; unknown kinds are rejected here."""
    if not isinstance(obj, dict) or "kind" not in obj:
        raise ValueError("command must be an object with a 'kind'")
    kind = obj["kind"]
    if kind not in COMMAND_KINDS:
        raise ValueError(f"unknown command kind {kind!r}")
    newtons = 0.0
    mode = None
    distraction = DistractionKind.MONSTER_SCREAM
    if kind == "set_force":
        try:
            newtons = float(obj["newtons"])
        except (KeyError, TypeError, ValueError):
            raise ValueError("set_force requires numeric 'newtons'") from None
        if newtons < 0:
            raise ValueError("newtons must be >= 0")
    elif kind == "set_mode":
        try:
            mode = ScoreMode(obj["mode"])
        except (KeyError, ValueError):
            raise ValueError("set_mode requires 'mode' of linear|time_avg") from None
    elif kind == "inject_distraction":
        try:
            distraction = DistractionKind(obj.get("distraction", "monster_scream"))
        except ValueError:
            raise ValueError("unknown distraction kind") from None
    return OperatorCommand(kind, newtons, mode, distraction)


@dataclass(frozen=True)
class RunStats:
    ticks: int
    data_s: float
    wall_s: float
    max_tick_latency_s: float
    mean_tick_latency_s: float


class Engine:
    """One session's processing loop; call ingest_frame / tick in time order."""

    def __init__(self, config: EngineConfig, force_fn: Callable[[float], float] | None = None):
        self.config = config
        self.eeg_descriptor = default_eeg_descriptor(
            config.ingest.eeg_rate_hz, tuple(config.ingest.eeg_channel_labels)
        )
        self.gaze_descriptor = default_gaze_descriptor(config.ingest.gaze_rate_hz)
        self.pipeline = MetricPipeline(config.dsp, self.eeg_descriptor)
        self.tracker = GazeTracker(config.gaze)
        self.state = start_session(config.game, config.estimator, config.feedback)
        self.force_fn = force_fn
        self.operator_force_n: float | None = None  # set_force overrides the script
        self.tick_interval_s = config.dsp.update_interval_s
        self.next_tick_us = round(self.tick_interval_s * 1e6)
        self.seq = 0
        self.tick_latencies_s: list[float] = []

    # -- inputs ----------------------------------------------------------

    def ingest_frame(self, frame: RawFrame) -> None:
        if frame.stream_kind is StreamKind.EEG:
            self.pipeline.push_frame(frame)
        else:
            self.tracker.push(GazeSample(frame.timestamp_us, frame.values[0], frame.values[1]))

    def apply_command(self, command: OperatorCommand) -> None:
        """Apply one operator command; raises IllegalTransition when misplaced."""
        kind = command.kind
        if kind == "start_calibration":
            advance_phase(self.state, Command.START)
        elif kind == "finish_phase":
            advance_phase(self.state, Command.FINISH)
        elif kind == "start_pull":
            if self.state.phase is not Phase.CALIB_CONCENTRATION:
                raise IllegalTransition(self.state.phase.value, kind)
            advance_phase(self.state, Command.FINISH)
        elif kind == "abort":
            advance_phase(self.state, Command.ABORT)
        elif kind == "set_force":
            self.operator_force_n = command.newtons
        elif kind == "set_mode":
            assert command.mode is not None
            self.state.estimator.set_mode(command.mode)
            self.state.log_event(f"mode:{command.mode.value}")
        elif kind == "inject_distraction":
            self.state.distractions.append(
                DistractionEvent(max(0.0, self.state.pull.elapsed_s), command.distraction)
            )
            self.state.log_event(f"distraction_scheduled:{command.distraction.value}")

    # -- ticking ---------------------------------------------------------

    def applied_force(self) -> float:
        if self.operator_force_n is not None:
            return self.operator_force_n
        if self.force_fn is not None and self.state.phase is Phase.PULL:
            return self.force_fn(self.state.pull.elapsed_s)
        return 0.0

    def tick(self) -> TickResult:
        """Fire one score tick at the current boundary and advance it."""
        started = time.perf_counter()
        inputs = TickInputs(
            relative_alpha=self.pipeline.compute_metric(),
            gate=self.tracker.state.effective_gate,
            applied_force_n=self.applied_force(),
        )
        result = session_tick(self.state, inputs, self.tick_interval_s)
        self.next_tick_us += round(self.tick_interval_s * 1e6)
        self.seq += 1
        self.tick_latencies_s.append(time.perf_counter() - started)
        return result

    # -- headless driving --------------------------------------------------

    def run_frames(
        self,
        frames: Iterable[RawFrame],
        schedule: Iterable[tuple[float, Command]] = (),
        sink: IO[str] | None = None,
        record_sink: IO[str] | None = None,
        stop_on_terminal: bool = True,
    ) -> RunStats:
        """Drive the loop over a frame stream as fast as possible.

        Scheduled operator commands fire before the first tick whose start
        time reaches them. Telemetry records go to `sink` as JSONL; consumed
        frames are optionally mirrored to `record_sink`.
        """
        pending = sorted(schedule, key=lambda item: item[0])
        pending.reverse()  # pop from the end
        if record_sink is not None:
            record([], record_sink, (self.eeg_descriptor, self.gaze_descriptor))
        wall_start = time.perf_counter()
        last_t_us = 0
        done = False
        for frame in frames:
            while self.next_tick_us <= frame.timestamp_us and not done:
                tick_start_us = self.next_tick_us - round(self.tick_interval_s * 1e6)
                while pending and pending[-1][0] * 1e6 <= tick_start_us:
                    _, cmd = pending.pop()
                    advance_phase(self.state, cmd)
                result = self.tick()
                if sink is not None:
                    sink.write(result.record.to_json() + "\n")
                if stop_on_terminal and self.state.is_terminal:
                    done = True
            if done:
                break
            self.ingest_frame(frame)
            if record_sink is not None:
                record([frame], record_sink)
            last_t_us = frame.timestamp_us
        wall = time.perf_counter() - wall_start
        lat = self.tick_latencies_s or [0.0]
        return RunStats(
            ticks=self.seq,
            data_s=last_t_us / 1e6,
            wall_s=wall,
            max_tick_latency_s=max(lat),
            mean_tick_latency_s=sum(lat) / len(lat),
        )


def telemetry_envelope(seq: int, record_obj: dict) -> str:
    """Wire envelope: per-client gaps in `seq` reveal drops."""
    return json.dumps({"seq": seq, "record": record_obj})
