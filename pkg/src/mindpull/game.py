"""Session state machine: calibration phases, the governed pull, outcomes.

Phase order is fixed: Idle -> CalibBaseline -> CalibConcentration -> Pull ->
Success | Failure, with abort allowed from any non-terminal phase. During
Pull the extraction velocity is v_max * score while the applied force stays
inside the force band; force outside the band never advances the handle, and
over-force (or over-speed) additionally engages a penalty hold that freezes
progress for penalty_hold_s even after the force returns to the band.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

from .errors import BadConfig, IllegalTransition, InvalidCalibration, InsufficientSamples, WrongPhase
from .estimator import (
    CalibrationStats,
    ConcentrationEstimator,
    EstimatorConfig,
    calibrate,
    normalize,
)
from .feedback import FeedbackCommand, FeedbackConfig, compose
from .telemetry import PullSnapshot, TelemetryRecord

DYNAMICS_DT_S = 0.01  # pull-dynamics substep (100 Hz) inside a score tick


class Phase(str, enum.Enum):
    IDLE = "idle"
    CALIB_BASELINE = "calib_baseline"
    CALIB_CONCENTRATION = "calib_concentration"
    PULL = "pull"
    SUCCESS = "success"
    FAILURE = "failure"


TERMINAL_PHASES = (Phase.SUCCESS, Phase.FAILURE)


class FailureReason(str, enum.Enum):
    TIMEOUT = "timeout"
    ABORTED = "aborted"
    CALIBRATION_INVALID = "calibration_invalid"


class Command(str, enum.Enum):
    START = "start"
    FINISH = "finish"
    ABORT = "abort"


class DistractionKind(str, enum.Enum):
    MONSTER_SCREAM = "monster_scream"
    OTHER = "other"


@dataclass(frozen=True)
class DistractionSpec:
    at_s: float  # relative to Pull start
    kind: DistractionKind = DistractionKind.MONSTER_SCREAM


@dataclass(frozen=True)
class SessionConfig:
    baseline_s: float = 30.0
    conc_calib_s: float = 30.0
    pull_limit_s: float = 60.0
    travel_m: float = 0.30
    force_lo_n: float = 10.0
    force_hi_n: float = 60.0
    v_max_mps: float = 0.05  # extraction speed at score 1
    v_cap_mps: float = 0.06  # governor cap
    penalty_hold_s: float = 0.5
    distractions: tuple[DistractionSpec, ...] = ()

    def __post_init__(self):
        if self.baseline_s <= 0 or self.conc_calib_s <= 0:
            raise BadConfig("calibration durations", "must be > 0")
        if self.pull_limit_s <= 0:
            raise BadConfig("pull_limit_s", "must be > 0")
        if self.travel_m <= 0:
            raise BadConfig("travel_m", "must be > 0")
        if not 0 < self.force_lo_n < self.force_hi_n:
            raise BadConfig("force band", f"need 0 < lo < hi, got [{self.force_lo_n}, {self.force_hi_n}]")
        if not 0 < self.v_max_mps <= self.v_cap_mps:
            raise BadConfig("velocity", f"need 0 < v_max <= v_cap, got {self.v_max_mps}, {self.v_cap_mps}")
        if self.penalty_hold_s < 0:
            raise BadConfig("penalty_hold_s", "must be >= 0")
        for d in self.distractions:
            if d.at_s < 0:
                raise BadConfig("distractions", f"at_s {d.at_s} < 0")


@dataclass
class DistractionEvent:
    at_s: float
    kind: DistractionKind
    fired: bool = False


@dataclass
class PullState:
    displacement_m: float = 0.0
    applied_force_n: float = 0.0
    last_velocity_mps: float = 0.0
    penalty_until_us: int = 0
    elapsed_s: float = 0.0

    @property
    def snapshot(self) -> PullSnapshot:
        return PullSnapshot(self.displacement_m, self.applied_force_n, self.last_velocity_mps)


@dataclass(frozen=True)
class TickInputs:
    relative_alpha: float | None  # None while the spectral windows fill
    gate: float
    applied_force_n: float


@dataclass(frozen=True)
class TickResult:
    feedback: FeedbackCommand
    record: TelemetryRecord


class SessionState:
    """Single-writer aggregate for one session; mutated only by the loop."""

    def __init__(
        self,
        config: SessionConfig,
        estimator_config: EstimatorConfig | None = None,
        feedback_config: FeedbackConfig | None = None,
    ):
        self.config = config
        self.feedback_config = feedback_config or FeedbackConfig()
        self.phase = Phase.IDLE
        self.failure_reason: FailureReason | None = None
        self.t_us = 0
        self.pull = PullState()
        self.baseline_metrics: list[float] = []
        self.concentration_metrics: list[float] = []
        self.calibration: CalibrationStats | None = None
        self.estimator = ConcentrationEstimator(estimator_config)
        self.distractions = [DistractionEvent(d.at_s, d.kind) for d in config.distractions]
        self.events: list[tuple[int, str]] = []
        self.last_metric = 0.0
        self._pending_events: list[str] = []

    @property
    def score_value(self) -> float:
        return self.estimator.score.value

    @property
    def is_terminal(self) -> bool:
        return self.phase in TERMINAL_PHASES

    def log_event(self, text: str) -> None:
        self.events.append((self.t_us, text))
        self._pending_events.append(text)

    def drain_pending_events(self) -> tuple[str, ...]:
        pending = tuple(self._pending_events)
        self._pending_events.clear()
        return pending

    def fail(self, reason: FailureReason) -> None:
        self.phase = Phase.FAILURE
        self.failure_reason = reason
        self.log_event(f"failure:{reason.value}")


def start_session(
    config: SessionConfig,
    estimator_config: EstimatorConfig | None = None,
    feedback_config: FeedbackConfig | None = None,
) -> SessionState:
    """Fresh Idle session at epoch t=0 with an empty event log."""
    return SessionState(config, estimator_config, feedback_config)


_TRANSITIONS = {
    (Phase.IDLE, Command.START): Phase.CALIB_BASELINE,
    (Phase.CALIB_BASELINE, Command.FINISH): Phase.CALIB_CONCENTRATION,
    (Phase.CALIB_CONCENTRATION, Command.FINISH): Phase.PULL,
}


def advance_phase(state: SessionState, command: Command) -> SessionState:
    """Apply an operator command; entering Pull runs the calibration fit."""
    if command is Command.ABORT and not state.is_terminal:
        state.fail(FailureReason.ABORTED)
        return state
    target = _TRANSITIONS.get((state.phase, command))
    if target is None:
        raise IllegalTransition(state.phase.value, command.value)
    if target is Phase.PULL:
        try:
            state.calibration = calibrate(
                state.baseline_metrics, state.concentration_metrics, state.estimator.config
            )
        except (InvalidCalibration, InsufficientSamples) as exc:
            state.log_event(f"calibration_invalid: {exc}")
            state.fail(FailureReason.CALIBRATION_INVALID)
            return state
        state.log_event(
            f"calibrated base={state.calibration.base_mean:.4f} "
            f"conc={state.calibration.conc_mean:.4f}"
        )
        state.pull = PullState()
    state.phase = target
    state.log_event(f"phase:{target.value}")
    return state


def step_pull(
    state: SessionState, score_value: float, applied_force_n: float, dt_s: float
) -> list[str]:
    """Advance pull dynamics over one tick; returns the events it emitted.

    Integration runs in substeps of at most DYNAMICS_DT_S so penalty holds,
    the travel stop, and the time limit resolve at dynamics granularity.
    """
    if state.phase is not Phase.PULL:
        raise WrongPhase(f"step_pull in phase {state.phase.value}")
    if dt_s <= 0:
        raise ValueError("dt_s must be > 0")
    cfg = state.config
    pull = state.pull
    pull.applied_force_n = applied_force_n

    emitted: list[str] = []

    def emit(text: str) -> None:
        emitted.append(text)
        state.log_event(text)

    in_band = cfg.force_lo_n <= applied_force_n <= cfg.force_hi_n
    v = cfg.v_max_mps * score_value if in_band else 0.0
    over_limit = applied_force_n > cfg.force_hi_n or v > cfg.v_cap_mps

    n_sub = max(1, round(dt_s / DYNAMICS_DT_S))
    sub_dt = dt_s / n_sub
    t_start_us = state.t_us
    was_in_penalty = t_start_us < pull.penalty_until_us
    moved = False

    for k in range(1, n_sub + 1):
        t_now_us = t_start_us + round(k * sub_dt * 1e6)
        pull.elapsed_s += sub_dt
        if over_limit:
            pull.penalty_until_us = max(
                pull.penalty_until_us, t_now_us + round(cfg.penalty_hold_s * 1e6)
            )
            if not was_in_penalty:
                emit("penalty_hold")
                was_in_penalty = True
        in_penalty = t_now_us < pull.penalty_until_us
        if in_band and not in_penalty and not over_limit and v > 0:
            pull.displacement_m = min(cfg.travel_m, pull.displacement_m + v * sub_dt)
            moved = True
        for d in state.distractions:
            if not d.fired and d.at_s <= pull.elapsed_s:
                d.fired = True
                emit(f"distraction:{d.kind.value}")
        if pull.displacement_m >= cfg.travel_m:
            state.phase = Phase.SUCCESS
            emit("phase:success")
            emit("wind_on")
            break
        if pull.elapsed_s > cfg.pull_limit_s:
            state.phase = Phase.FAILURE
            state.failure_reason = FailureReason.TIMEOUT
            emit("failure:timeout")
            break

    pull.last_velocity_mps = v if moved else 0.0
    return emitted


def session_tick(state: SessionState, inputs: TickInputs, dt_s: float) -> TickResult:
    """One loop tick: route inputs by phase, emit the command and telemetry."""
    if dt_s <= 0:
        raise ValueError("dt_s must be > 0")
    metric = inputs.relative_alpha
    if metric is not None:
        state.last_metric = metric

    if state.phase is Phase.CALIB_BASELINE and metric is not None:
        state.baseline_metrics.append(metric)
    elif state.phase is Phase.CALIB_CONCENTRATION and metric is not None:
        state.concentration_metrics.append(metric)
    elif state.phase is Phase.PULL:
        if metric is not None and state.calibration is not None:
            raw = normalize(metric, state.calibration)
            state.estimator.update_score(raw, inputs.gate, dt_s)
        step_pull(state, state.score_value, inputs.applied_force_n, dt_s)

    state.t_us += round(dt_s * 1e6)
    command = compose(state.score_value, state.phase is Phase.SUCCESS, state.feedback_config)
    events = state.drain_pending_events()
    record = TelemetryRecord(
        t_us=state.t_us,
        phase=state.phase.value,
        score=state.score_value,
        relative_alpha=state.last_metric,
        gate=inputs.gate,
        feedback=command,
        pull=state.pull.snapshot,
        events=events,
    )
    return TickResult(command, record)
