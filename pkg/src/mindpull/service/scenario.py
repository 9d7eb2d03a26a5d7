"""Script parsing for headless runs: alpha trace, force trace, phase schedule.

A script drives the synthetic player. The alpha tone amplitude follows the
calibration phases (low in baseline, high in concentration calibration) and
then one of two pull behaviors:

  ramp  amplitude climbs from the baseline level back to the concentration
        level over ramp_s seconds of Pull (the session should succeed)
  flat  amplitude stays at the baseline level (the session should time out)

A constant off-band tone provides the broadband power the relative-alpha
ratio needs to move between the two levels.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Callable

from ..game import Command
from ..ingest import GazeScript, PiecewiseLinear, SyntheticProfile, ToneComponent
from .config import EngineConfig

PHASE_STEP_S = 0.2  # amplitude transition width at phase boundaries
DIP_EDGE_S = 0.05  # distraction dip edge width


@dataclass(frozen=True)
class Scenario:
    profile: SyntheticProfile
    force_fn: Callable[[float], float]  # pull-relative seconds -> newtons
    schedule: tuple[tuple[float, Command], ...]
    duration_s: float


DEFAULTS = {
    "seed": 7,
    "scenario": "ramp",
    "ramp_s": 20.0,
    "alpha_hz": 10.0,
    "beta_hz": 20.0,
    "baseline_alpha_uv": 0.5,
    "concentration_alpha_uv": 2.0,
    "beta_uv": 1.0,
    "noise_uv": 0.05,
    "force_n": [[0.0, 30.0]],
    "gaze_deg": [[0.0, 0.0, 0.0]],
    "distraction_dip": False,
    "dip_factor": 0.5,
    "dip_duration_s": 2.0,
}


def load_script(path: str | Path) -> dict:
    return json.loads(Path(path).read_text())


def _piecewise_constant(points: list[list[float]]) -> Callable[[float], float]:
    pts = sorted((float(t), float(v)) for t, v in points)

    def value(t_s: float) -> float:
        out = 0.0
        for t, v in pts:
            if t <= t_s:
                out = v
            else:
                break
        return out

    return value


def _alpha_breakpoints(script: dict, config: EngineConfig) -> list[tuple[float, float]]:
    base = float(script["baseline_alpha_uv"])
    conc = float(script["concentration_alpha_uv"])
    b_end = config.game.baseline_s
    p_start = b_end + config.game.conc_calib_s
    points = [(0.0, base), (b_end, base), (b_end + PHASE_STEP_S, conc), (p_start, conc)]
    if script["scenario"] == "ramp":
        points.append((p_start + PHASE_STEP_S, base))
        points.append((p_start + PHASE_STEP_S + float(script["ramp_s"]), conc))
    elif script["scenario"] == "flat":
        points.append((p_start + PHASE_STEP_S, base))
    else:
        raise ValueError(f"unknown scenario {script['scenario']!r}")
    return points


def _apply_dips(
    points: list[tuple[float, float]], dips: list[tuple[float, float]], factor: float
) -> list[tuple[float, float]]:
    """Multiply the schedule by a dip mask (1 outside, `factor` inside)."""
    base = PiecewiseLinear(tuple(points))

    def mask(t: float) -> float:
        for start, end in dips:
            if start + DIP_EDGE_S <= t <= end - DIP_EDGE_S:
                return factor
            if start <= t < start + DIP_EDGE_S:
                return 1.0 + (factor - 1.0) * (t - start) / DIP_EDGE_S
            if end - DIP_EDGE_S < t <= end:
                return factor + (1.0 - factor) * (t - (end - DIP_EDGE_S)) / DIP_EDGE_S
        return 1.0

    times = {t for t, _ in points}
    for start, end in dips:
        times.update((start, start + DIP_EDGE_S, end - DIP_EDGE_S, end))
    ordered = sorted(t for t in times if t >= 0.0)
    return [(t, base(t) * mask(t)) for t in ordered]


def build_scenario(config: EngineConfig, script: dict | None = None) -> Scenario:
    """Expand a script (with defaults) into the synthetic player for a run."""
    merged = dict(DEFAULTS)
    merged.update(script or {})
    unknown = set(merged) - set(DEFAULTS)
    if unknown:
        raise ValueError(f"unknown script keys: {sorted(unknown)}")

    points = _alpha_breakpoints(merged, config)
    p_start = config.game.baseline_s + config.game.conc_calib_s
    if merged["distraction_dip"] and config.game.distractions:
        dur = float(merged["dip_duration_s"])
        dips = [(p_start + d.at_s, p_start + d.at_s + dur) for d in config.game.distractions]
        points = _apply_dips(points, dips, float(merged["dip_factor"]))

    components = (
        ToneComponent(float(merged["alpha_hz"]), PiecewiseLinear(tuple(points))),
        ToneComponent(float(merged["beta_hz"]), PiecewiseLinear.constant(float(merged["beta_uv"]))),
    )
    profile = SyntheticProfile(
        components=components,
        noise_amplitude_uv=float(merged["noise_uv"]),
        gaze_script=GazeScript(tuple((float(t), float(y), float(p)) for t, y, p in merged["gaze_deg"])),
        seed=int(merged["seed"]),
    )
    schedule = (
        (0.0, Command.START),
        (config.game.baseline_s, Command.FINISH),
        (p_start, Command.FINISH),
    )
    duration = p_start + config.game.pull_limit_s + 10.0
    return Scenario(profile, _piecewise_constant(merged["force_n"]), schedule, duration)
