"""Headless session runner: scripted traces in, telemetry JSONL + exit code out."""

from __future__ import annotations

from pathlib import Path

from ..game import Phase
from ..ingest import merge_streams, synth_generate
from .config import EngineConfig
from .engine import Engine, RunStats
from .scenario import Scenario, build_scenario

EXIT_SUCCESS = 0
EXIT_ERROR = 1
EXIT_GAME_FAILURE = 2


def run_scenario(
    config: EngineConfig,
    scenario: Scenario,
    out_path: str | Path | None = None,
    record_path: str | Path | None = None,
) -> tuple[Engine, RunStats]:
    """Run one scripted session with pacing disabled; returns the engine."""
    engine = Engine(config, force_fn=scenario.force_fn)
    eeg = synth_generate(scenario.profile, engine.eeg_descriptor, scenario.duration_s)
    gaze = synth_generate(scenario.profile, engine.gaze_descriptor, scenario.duration_s)
    frames = merge_streams(eeg, gaze)

    sink = open(out_path, "w") if out_path is not None else None
    record_sink = open(record_path, "w") if record_path is not None else None
    try:
        stats = engine.run_frames(frames, scenario.schedule, sink=sink, record_sink=record_sink)
    finally:
        if sink is not None:
            sink.close()
        if record_sink is not None:
            record_sink.close()
    return engine, stats


def run_headless(
    config: EngineConfig,
    script: dict | None,
    out_path: str | Path,
    record_path: str | Path | None = None,
) -> int:
    """Exit code 0 on Success, 2 on game Failure, 1 on error."""
    try:
        scenario = build_scenario(config, script)
        engine, _ = run_scenario(config, scenario, out_path, record_path)
    except Exception as exc:  # noqa: BLE001 - CLI boundary maps errors to codes
        print(f"error: {exc}")
        return EXIT_ERROR
    if engine.state.phase is Phase.SUCCESS:
        return EXIT_SUCCESS
    return EXIT_GAME_FAILURE
