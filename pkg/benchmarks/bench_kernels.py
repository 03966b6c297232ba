"""Benchmark the compiled cycle-loop kernel against the pure-Python fallback.

Runs the shipped 2x2 memory experiment on both backends, checks that the
outputs are bit-identical, and reports throughput.

Usage: python benchmarks/bench_kernels.py [--cycles N]
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time

import numpy as np

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

from driftqec import _kernels
from driftqec.runtime import build_plan, config_from_json, drive

CONFIG_DIR = os.path.join(os.path.dirname(__file__), "..", "src", "driftqec", "configs")


def main() -> int:
    parser = argparse.ArgumentParser()
    parser.add_argument("--cycles", type=int, default=1_000_000)
    args = parser.parse_args()

    with open(os.path.join(CONFIG_DIR, "paper_2x2.json"), encoding="utf-8") as fh:
        obj = json.load(fh)
    obj["total_cycles"] = args.cycles
    config = config_from_json(obj, base_dir=CONFIG_DIR)
    tile_cycles = args.cycles * config.n_tiles

    results = {}
    timings = {}
    backends = [("pure-python", _kernels._pure)]
    if _kernels.HAVE_COMPILED:
        backends.append(("compiled", _kernels._core))
    else:
        print("compiled kernel not built; benchmarking the fallback only")

    for name, backend in backends:
        plan = build_plan(config)
        start = time.perf_counter()
        records, events, deferrals = drive(plan, config.seed, backend=backend)
        elapsed = time.perf_counter() - start
        timings[name] = elapsed
        results[name] = (records, events, deferrals)
        print(f"{name:>12}: {elapsed:8.3f} s   {tile_cycles / elapsed / 1e6:8.2f} M tile-cycles/s")

    if len(results) == 2:
        rec_p, ev_p, def_p = results["pure-python"]
        rec_c, ev_c, def_c = results["compiled"]
        fields = ("true_ler", "obs_dfr", "used", "valid", "breach", "phase",
                  "qubit_true", "qubit_tile", "qubit_above")
        identical = all(
            np.array_equal(getattr(rec_p, f), getattr(rec_c, f), equal_nan=True) for f in fields
        ) and ev_p == ev_c and def_p == def_c
        print(f"bit-identical outputs: {identical}")
        print(f"speedup: x{timings['pure-python'] / timings['compiled']:.1f}")
        return 0 if identical else 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
