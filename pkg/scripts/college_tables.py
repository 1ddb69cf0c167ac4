#!/usr/bin/env python3
"""Equilibrium-metric quartile tables for a directory of edge lists.

The college social-network collection this pairs with is not bundled
(licensing); point --edge-list-dir at your local copy.  Each file is
reduced to its largest component before the spectral solve.

Usage:
    python scripts/college_tables.py --edge-list-dir /path/to/networks [--out results/tables]
"""

import argparse
import subprocess
import sys


def main() -> None:
    ap = argparse.ArgumentParser()
    ap.add_argument("--edge-list-dir", required=True)
    ap.add_argument("--out", default="results/tables")
    args = ap.parse_args()
    res = subprocess.run(
        [
            "polarlab",
            "table_ensemble_stats",
            "--edge-list-dir", args.edge_list_dir,
            "--out", args.out,
        ]
    )
    if res.returncode != 0:
        sys.exit(res.returncode)
    print(f"per-network values: {args.out}/tables.csv")
    print(f"quartile summary:   {args.out}/tables_summary.csv")


if __name__ == "__main__":
    main()
