"""Command-line front end: oracle, fit, simulate, sweep, spatial.

Every subcommand writes its result files atomically plus a run manifest
(`<command>_manifest.json`) recording the arguments, seed, tool version
and wall-clock runtime. Result files are byte-identical across reruns
with the same seed and inputs; the manifest is provenance, not a result.

Exit codes: 0 success, 2 configuration error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import time
from importlib import resources

import numpy as np

from . import __version__
from .errors import ConfigError, NumericalError
from .power_law import fit_power_law
from .runtime import (
    config_from_json,
    report_summary_json,
    run_memory_experiment,
    write_report_csv,
)
from .sampling import dataset_csv_lines, generate_fit_dataset, read_dataset_csv
from .spatial import crossover_csv_lines, crossover_report
from .sweeps import SWEEP_AXES, run_sweep, sweep_config_from_json


def _default_out() -> str:
    return os.environ.get("DRIFTQEC_OUT", ".")


def _write_atomic(path: str, text: str) -> None:
    tmp = path + ".tmp"
    with open(tmp, "w", encoding="utf-8") as fh:
        fh.write(text)
    os.replace(tmp, path)


def _write_manifest(out_dir: str, command: str, payload: dict, started: float) -> None:
    payload = dict(payload)
    payload["command"] = command
    payload["tool_version"] = __version__
    payload["runtime_seconds"] = round(time.monotonic() - started, 3)
    path = os.path.join(out_dir, f"{command}_manifest.json")
    _write_atomic(path, json.dumps(payload, sort_keys=True, indent=2) + "\n")


def _parse_p_grid(text: str) -> list[float]:
    """Grid syntax: 'lo:hi:n' (log-spaced) or an explicit comma list."""
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise ConfigError(f"grid must be lo:hi:n, got {text!r}")
        lo, hi, n = float(parts[0]), float(parts[1]), int(parts[2])
        if not 0 < lo < hi or n < 1:
            raise ConfigError(f"grid needs 0 < lo < hi and n >= 1, got {text!r}")
        return [float(p) for p in np.logspace(math.log10(lo), math.log10(hi), n)]
    values = [float(p) for p in text.split(",") if p.strip()]
    if not values:
        raise ConfigError(f"empty probability grid: {text!r}")
    return values


def _resolve_config_path(name: str) -> str:
    """Accept a filesystem path or the bare name of a shipped config."""
    if os.path.exists(name):
        return name
    base = name if name.endswith(".json") else f"{name}.json"
    candidate = resources.files("driftqec").joinpath("configs", base)
    if candidate.is_file():
        return str(candidate)
    raise ConfigError(f"config not found: {name!r} (no such file or shipped config)")


def _cmd_oracle(args) -> None:
    started = time.monotonic()
    grid = _parse_p_grid(args.p)
    dataset = generate_fit_dataset(args.d, grid, args.shots, args.seed)
    out = os.path.join(args.out, "dataset.csv")
    _write_atomic(out, "\n".join(dataset_csv_lines(dataset)) + "\n")
    if dataset.dropped:
        print(
            f"dropped {len(dataset.dropped)} grid point(s) with zero observed logical errors",
            file=sys.stderr,
        )
    _write_manifest(
        args.out,
        "oracle",
        {
            "d": args.d,
            "p_grid": grid,
            "shots": args.shots,
            "seed": args.seed,
            "outputs": ["dataset.csv"],
            "dropped_points": len(dataset.dropped),
        },
        started,
    )


def _cmd_fit(args) -> None:
    started = time.monotonic()
    with open(args.dataset, encoding="utf-8") as fh:
        samples = read_dataset_csv(fh.read())
    fit = fit_power_law(samples, args.d)
    out = os.path.join(args.out, "fit.json")
    _write_atomic(out, fit.to_json() + "\n")
    _write_manifest(
        args.out,
        "fit",
        {"dataset": args.dataset, "d": args.d, "seed": None, "outputs": ["fit.json"]},
        started,
    )


def _cmd_simulate(args) -> None:
    started = time.monotonic()
    path = _resolve_config_path(args.config)
    with open(path, encoding="utf-8") as fh:
        obj = json.load(fh)
    if args.total_cycles is not None:
        obj["total_cycles"] = args.total_cycles
    config = config_from_json(obj, base_dir=os.path.dirname(path))
    report = run_memory_experiment(config)
    _write_atomic(os.path.join(args.out, "report.json"), report_summary_json(report) + "\n")
    tmp = os.path.join(args.out, "cycles.csv.tmp")
    with open(tmp, "w", encoding="utf-8") as fh:
        write_report_csv(report, fh)
    os.replace(tmp, os.path.join(args.out, "cycles.csv"))
    _write_manifest(
        args.out,
        "simulate",
        {
            "config": path,
            "seed": config.seed,
            "total_cycles": config.total_cycles,
            "outputs": ["report.json", "cycles.csv"],
        },
        started,
    )


def _cmd_sweep(args) -> None:
    started = time.monotonic()
    path = _resolve_config_path(args.config)
    with open(path, encoding="utf-8") as fh:
        config = sweep_config_from_json(json.load(fh), base_dir=os.path.dirname(path))
    values = [float(v) for v in args.values.split(",") if v.strip()]
    result = run_sweep(config, args.axis, values)
    _write_atomic(os.path.join(args.out, "sweep.csv"), "\n".join(result.csv_lines()) + "\n")
    _write_manifest(
        args.out,
        "sweep",
        {
            "config": path,
            "axis": args.axis,
            "values": values,
            "seed": config.seed,
            "n_seeds": config.n_seeds,
            "outputs": ["sweep.csv"],
        },
        started,
    )


def _cmd_spatial(args) -> None:
    started = time.monotonic()
    d_list = [int(v) for v in args.d_list.split(",") if v.strip()]
    rows = crossover_report(args.delta, d_list, args.n_qubits)
    _write_atomic(os.path.join(args.out, "crossover.csv"), "\n".join(crossover_csv_lines(rows)) + "\n")
    _write_manifest(
        args.out,
        "spatial",
        {
            "delta": args.delta,
            "d_list": d_list,
            "n_qubits": args.n_qubits,
            "seed": None,
            "outputs": ["crossover.csv"],
        },
        started,
    )


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="driftqec",
        description="Drift-aware surface-code QEC runtime simulator",
    )
    parser.add_argument("--version", action="version", version=f"driftqec {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("oracle", help="sample (DFR, LER) pairs from the code-capacity oracle")
    p.add_argument("--d", type=int, required=True, help="code distance (odd, 3..7)")
    p.add_argument("--p", required=True, help="probability grid: lo:hi:n (log-spaced) or comma list")
    p.add_argument("--shots", type=int, default=100_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default=_default_out())
    p.set_defaults(func=_cmd_oracle)

    p = sub.add_parser("fit", help="fit the DFR->LER power law to a dataset CSV")
    p.add_argument("--dataset", required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--out", default=_default_out())
    p.set_defaults(func=_cmd_fit)

    p = sub.add_parser("simulate", help="run a tile-grid memory experiment")
    p.add_argument("--config", required=True, help="config path or shipped config name")
    p.add_argument("--total-cycles", type=int, default=None, help="override the config's cycle count")
    p.add_argument("--out", default=_default_out())
    p.set_defaults(func=_cmd_simulate)

    p = sub.add_parser("sweep", help="sweep a predictor parameter over seeded trials")
    p.add_argument("--config", required=True)
    p.add_argument("--axis", choices=SWEEP_AXES, required=True)
    p.add_argument("--values", required=True, help="comma-separated axis values")
    p.add_argument("--out", default=_default_out())
    p.set_defaults(func=_cmd_sweep)

    p = sub.add_parser("spatial", help="spare-tile crossover table")
    p.add_argument("--delta", type=int, required=True)
    p.add_argument("--d-list", required=True, help="comma-separated code distances")
    p.add_argument("--n-qubits", type=int, default=1000)
    p.add_argument("--out", default=_default_out())
    p.set_defaults(func=_cmd_spatial)
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        os.makedirs(args.out, exist_ok=True)
        args.func(args)
    except NumericalError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (ConfigError, ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
