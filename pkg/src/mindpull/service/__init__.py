"""Process-level surface: config, engine composition, headless runner, server."""

from .config import (
    DspConfig,
    EngineConfig,
    IngestConfig,
    ServiceConfig,
    config_from_obj,
    config_to_obj,
    dumps_config,
    load_config,
)
from .engine import Engine, MetricPipeline, OperatorCommand, RunStats, parse_operator_command
from .headless import EXIT_ERROR, EXIT_GAME_FAILURE, EXIT_SUCCESS, run_headless, run_scenario
from .scenario import Scenario, build_scenario, load_script

__all__ = [
    "DspConfig",
    "EXIT_ERROR",
    "EXIT_GAME_FAILURE",
    "EXIT_SUCCESS",
    "Engine",
    "EngineConfig",
    "IngestConfig",
    "MetricPipeline",
    "OperatorCommand",
    "RunStats",
    "Scenario",
    "ServiceConfig",
    "build_scenario",
    "config_from_obj",
    "config_to_obj",
    "dumps_config",
    "load_config",
    "load_script",
    "parse_operator_command",
    "run_headless",
    "run_scenario",
]
