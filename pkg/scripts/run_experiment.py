#!/usr/bin/env python3
"""Run the four-configuration comparison on the synthetic world.

Builds a ~500-page loopback site with a known freshness layout plus a
recorded social stream, crawls it under TB, INT, FO and UN with a shared
specification, and prints median freshness and relevance trajectories for
each configuration. All artifacts (per-run stores, metrics CSVs, a summary
JSON) land under --out.

Usage:
    python scripts/run_experiment.py --out runs/comparison --seed 20250819
"""

import argparse
import json
import os
import sys
import time

from freshcrawl.experiment import (COMPARISON_MODES, comparison_table,
                                   run_comparison)
from freshcrawl.synthsite import FixtureServer, build_world


def trajectory(values, width=40):
    """Coarse text sparkline for a batch series; None renders as a gap."""
    cells = []
    for value in values[:width]:
        if value is None:
            cells.append(" ")
        else:
            cells.append("_.:-=+*#"[min(7, int(value * 8))])
    return "".join(cells)


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--out", default="runs/comparison",
                        help="output root for the four crawl directories")
    parser.add_argument("--seed", type=int, default=20250819)
    parser.add_argument("--batch-size", type=int, default=50)
    parser.add_argument("--max-batches", type=int, default=30)
    parser.add_argument("--modes", default=",".join(COMPARISON_MODES),
                        help="comma-separated subset of TB,INT,FO,UN")
    args = parser.parse_args(argv)

    modes = tuple(m.strip().upper() for m in args.modes.split(",") if m.strip())
    os.makedirs(args.out, exist_ok=True)

    server = FixtureServer()
    server.start()
    try:
        world = build_world(server, seed=args.seed)
        replay = os.path.join(args.out, "posts.ndjson")
        world.write_replay(replay)
        print(f"world ready: {len(world.all_urls())} pages, "
              f"{len(world.posts)} posts, seed {args.seed}")

        started = time.monotonic()
        results = run_comparison(world, args.out, batch_size=args.batch_size,
                                 max_batches=args.max_batches, modes=modes)
        wall = time.monotonic() - started
    finally:
        server.stop()

    print()
    print(comparison_table(results))
    print()
    print("relevance per batch (0 -> 1 maps to _.:-=+*#):")
    for mode, result in results.items():
        print(f"  {mode:<4} {trajectory(result.batch_relevance)}")
    print(f"\ntotal crawl time {wall:.1f}s")

    summary_path = os.path.join(args.out, "summary.json")
    with open(summary_path, "w", encoding="utf-8") as fp:
        json.dump({
            "seed": args.seed,
            "wall_seconds": round(wall, 2),
            "modes": {
                mode: {
                    "median_freshness_hours": result.median_freshness_hours,
                    "fetched": len(result.fetched_urls),
                    "injected": len(result.injected_urls),
                    "batches": result.summary["batches"],
                    "batch_relevance": result.batch_relevance,
                    "batch_freshness": result.batch_freshness,
                }
                for mode, result in results.items()
            },
        }, fp, indent=2, sort_keys=True)
    print(f"summary written to {summary_path}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
