"""Command-line entry point.

Headless reproduction run:
    mindpull --headless --script script.json --out run.jsonl

Live service with a synthetic player and auto-advanced phases:
    mindpull --source synth --script script.json --listen 127.0.0.1:8765
"""

from __future__ import annotations

import argparse
import dataclasses
import sys
import time

from ..errors import EngineError
from ..estimator import ScoreMode
from ..ingest import (
    default_eeg_descriptor,
    default_gaze_descriptor,
    merge_streams,
    replay,
    synth_generate,
)
from .config import EngineConfig, dumps_config, load_config
from .headless import EXIT_ERROR, run_headless
from .scenario import build_scenario, load_script
from .sensor_tcp import SensorIngestServer
from .server import FrameFeed, TelemetryServer


def _parse_addr(text: str) -> tuple[str, int]:
    host, _, port = text.rpartition(":")
    return host or "127.0.0.1", int(port)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="mindpull", description=__doc__)
    parser.add_argument("--config", help="engine configuration JSON")
    parser.add_argument("--source", choices=("synth", "replay", "tcp"), default="synth")
    parser.add_argument("--profile", help="synthetic profile/scenario JSON (synth source)")
    parser.add_argument("--replay", help="recording JSONL to replay (replay source)")
    parser.add_argument("--listen", help="dashboard HOST:PORT (default from config)")
    parser.add_argument("--sensor-listen", help="sensor ingestion HOST:PORT (tcp source)")
    parser.add_argument("--record", help="write ingested frames to this JSONL file")
    parser.add_argument("--headless", action="store_true", help="run a scripted session and exit")
    parser.add_argument("--script", help="scenario script JSON (headless or synth serve)")
    parser.add_argument("--out", help="telemetry JSONL output (headless)")
    parser.add_argument("--seed", type=int, help="override the script's seed")
    parser.add_argument("--mode", choices=("linear", "time_avg"), help="score smoothing mode")
    parser.add_argument("--print-config", action="store_true", help="dump the effective config")
    return parser


def _load(args) -> EngineConfig:
    config = load_config(args.config) if args.config else EngineConfig()
    if args.mode:
        config = dataclasses.replace(
            config, estimator=dataclasses.replace(config.estimator, mode=ScoreMode(args.mode))
        )
    return config


def _script(args) -> dict:
    script = {}
    path = args.script or args.profile
    if path:
        script = load_script(path)
    if args.seed is not None:
        script["seed"] = args.seed
    return script


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = _load(args)
    except EngineError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR

    if args.print_config:
        print(dumps_config(config))
        return 0

    if args.headless:
        if not args.out:
            print("error: --headless requires --out", file=sys.stderr)
            return EXIT_ERROR
        return run_headless(config, _script(args), args.out, record_path=args.record)

    return _serve(args, config)


def _serve(args, config: EngineConfig) -> int:
    host, port = _parse_addr(args.listen) if args.listen else (
        config.service.listen_host,
        config.service.listen_port,
    )
    sensor_server = None
    force_fn = None
    schedule = ()
    try:
        if args.source == "synth":
            scenario = build_scenario(config, _script(args))
            eeg_desc = default_eeg_descriptor(
                config.ingest.eeg_rate_hz, tuple(config.ingest.eeg_channel_labels)
            )
            gaze_desc = default_gaze_descriptor(config.ingest.gaze_rate_hz)
            frames = merge_streams(
                synth_generate(scenario.profile, eeg_desc, scenario.duration_s),
                synth_generate(scenario.profile, gaze_desc, scenario.duration_s),
            )
            feed = FrameFeed(frames)
            if args.script:
                force_fn, schedule = scenario.force_fn, scenario.schedule
        elif args.source == "replay":
            if not args.replay:
                print("error: --source replay requires --replay PATH", file=sys.stderr)
                return EXIT_ERROR
            with open(args.replay) as fh:
                feed = FrameFeed(list(replay(fh, speed=0.0)))
        else:
            s_host, s_port = (
                _parse_addr(args.sensor_listen)
                if args.sensor_listen
                else (config.service.sensor_host, config.service.sensor_port)
            )
            sensor_server = SensorIngestServer(s_host, s_port)
            sensor_server.start()
            feed = _SensorFeed(sensor_server)

        record_sink = open(args.record, "w") if args.record else None
        server = TelemetryServer(
            config, feed, force_fn=force_fn, schedule=schedule,
            record_sink=record_sink, host=host, port=port,
        )
        server.start()
        print(f"serving telemetry on ws://{server.address[0]}:{server.address[1]}", flush=True)
        if sensor_server is not None:
            print(f"sensor ingestion on tcp://{sensor_server.host}:{sensor_server.port}", flush=True)
        try:
            while True:
                time.sleep(0.5)
        except KeyboardInterrupt:
            pass
        finally:
            server.stop()
            if sensor_server is not None:
                sensor_server.stop()
            if record_sink is not None:
                record_sink.close()
        return 0
    except EngineError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


class _SensorFeed:
    def __init__(self, server: SensorIngestServer):
        self._server = server

    def due(self, t_us: int):
        return self._server.drain()


if __name__ == "__main__":
    sys.exit(main())
