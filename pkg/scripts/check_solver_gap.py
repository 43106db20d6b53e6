#!/usr/bin/env python3
"""Compare the solver against exhaustive grid search on random instances.

Each instance is drawn from the built-in curve families with system
parameters spread over three decades. The script reports the largest gap
between the solver's mAP and the grid optimum.

Exit codes:
    0 - Every gap within the limit
    1 - Error occurred
    2 - Gap limit exceeded
"""

from __future__ import annotations

import argparse
import sys
import time

import numpy as np
from dotenv import load_dotenv

from edgesplit.config import parse_instance, validate_instance
from edgesplit.model import EdgeSplitError
from edgesplit.oracle import GridSpec, brute_force
from edgesplit.scenarios import random_instance
from edgesplit.solver import solve

DEFAULT_INSTANCES = 100
DEFAULT_GRID = "2000,2000"
DEFAULT_GAP = 3e-3


def check_instance(seed: int, grid: GridSpec) -> tuple[float, float]:
    """Return (solver mAP, grid mAP) for the instance drawn from ``seed``."""
    rng = np.random.default_rng(seed)
    instance = validate_instance(parse_instance(random_instance(rng)))
    result = solve(instance)
    oracle = brute_force(instance, grid)
    return result.map_opt, oracle.best.map_value


def main(argv: list[str] | None = None) -> int:
    """Main entry point."""
    load_dotenv()
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--instances", type=int, default=DEFAULT_INSTANCES)
    parser.add_argument("--grid", default=DEFAULT_GRID, help="nM,nRho")
    parser.add_argument("--max-gap", type=float, default=DEFAULT_GAP)
    parser.add_argument("--seed", type=int, default=0, help="First instance seed")
    args = parser.parse_args(argv)

    try:
        grid = GridSpec.parse(args.grid)
    except EdgeSplitError as err:
        print(f"ERROR: {err}")
        return 1

    print(f"Checking {args.instances} instance(s) on a {args.grid} grid...")
    started = time.perf_counter()
    worst_gap = 0.0
    worst_seed = None
    for seed in range(args.seed, args.seed + args.instances):
        try:
            solved, exhaustive = check_instance(seed, grid)
        except EdgeSplitError as err:
            print(f"ERROR: seed {seed}: {err}")
            return 1
        gap = abs(solved - exhaustive)
        if gap > worst_gap:
            worst_gap, worst_seed = gap, seed
        if gap > args.max_gap:
            print(f"  seed {seed}: solver {solved:.6f}, grid {exhaustive:.6f}")

    elapsed = time.perf_counter() - started
    print(f"Largest gap: {worst_gap:.3g} (seed {worst_seed}) in {elapsed:.1f} s")

    if worst_gap > args.max_gap:
        print(f"Gap limit {args.max_gap:g} exceeded")
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
