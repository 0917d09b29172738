"""Command-line interface for the secrecy-rate Monte-Carlo sweeps.

Exit codes: 0 on success, 1 for an invalid configuration (including an
unreadable or malformed config file), 2 for an output I/O failure.
"""

from __future__ import annotations

import argparse
import json
import sys

from .harness import (
    ConfigError,
    ExperimentConfig,
    emit_results,
    run_qos_sweep,
    run_snr_sweep,
)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="secbeam",
        description="Monte-Carlo secrecy-rate experiments for hybrid mmWave beamforming.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    descriptions = {
        "snr-sweep": "secrecy rate versus SNR for the configured algorithms",
        "qos-sweep": "artificial-noise spectrum efficiency versus the QoS target",
        "validate-config": "check a configuration and report problems",
    }
    for name, help_text in descriptions.items():
        cmd = sub.add_parser(name, help=help_text)
        cmd.add_argument("--config", help="JSON config file with ExperimentConfig keys")
        cmd.add_argument("--seed", type=int, help="override the RNG seed")
        cmd.add_argument("--trials", type=int, help="override the trial count")
        cmd.add_argument("--out", help="output path (default: stdout)")
        cmd.add_argument("--format", choices=("csv", "json"), default="csv")
        cmd.add_argument("--threads", type=int, default=0, help="worker threads (0 = auto)")
        cmd.add_argument(
            "--override",
            action="append",
            default=[],
            metavar="KEY=VALUE",
            help="set a config field, e.g. --override antennas=64,64,64 (repeatable)",
        )
    return parser


def _load_config(args: argparse.Namespace) -> ExperimentConfig:
    mapping: dict = {}
    if args.config is not None:
        try:
            with open(args.config, "r", encoding="utf-8") as handle:
                loaded = json.load(handle)
        except OSError as err:
            raise ConfigError([f"config file: {err}"]) from err
        except json.JSONDecodeError as err:
            raise ConfigError([f"config file: invalid JSON ({err})"]) from err
        if not isinstance(loaded, dict):
            raise ConfigError(["config file: top level must be a JSON object"])
        mapping.update(loaded)

    for item in args.override:
        key, sep, value = item.partition("=")
        if not sep or not key:
            raise ConfigError([f"override {item!r}: expected KEY=VALUE"])
        mapping[key.strip()] = value.strip()

    # Dedicated flags win over the file and over --override.
    if args.seed is not None:
        mapping["seed"] = args.seed
    if args.trials is not None:
        mapping["num_trials"] = args.trials
    return ExperimentConfig.from_mapping(mapping)


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    kind = {"snr-sweep": "snr", "qos-sweep": "qos", "validate-config": None}[args.command]

    try:
        config = _load_config(args)
        config.ensure_valid(kind)
    except ConfigError as err:
        for problem in err.problems:
            print(f"config error: {problem}", file=sys.stderr)
        return 1

    if args.command == "validate-config":
        print("configuration valid")
        return 0

    runner = run_snr_sweep if args.command == "snr-sweep" else run_qos_sweep
    results = runner(config, threads=args.threads)

    try:
        if args.out is None:
            emit_results(results, format=args.format, destination=sys.stdout)
        else:
            emit_results(results, format=args.format, destination=args.out)
            print(f"wrote {len(results)} rows to {args.out}", file=sys.stderr)
    except OSError as err:
        print(f"output error: {err}", file=sys.stderr)
        return 2
    return 0
