#!/usr/bin/env python3
"""Run all six scenarios and render their figures.

Default parameters match the synthetic setups the library documents
(five-community and proximity graphs on 1000 nodes, the k-sweep with
p=3/10 and q=2/100).  Pass --quick for a small smoke-scale run.

Usage:
    python scripts/reproduce_figures.py [--quick] [--out results]
"""

import argparse
import subprocess
import sys


def sh(*cmd: str) -> None:
    print("+", " ".join(cmd), flush=True)
    res = subprocess.run(cmd)
    if res.returncode != 0:
        sys.exit(res.returncode)


def main() -> None:
    ap = argparse.ArgumentParser()
    ap.add_argument("--out", default="results")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--quick", action="store_true", help="small graphs, fast")
    args = ap.parse_args()

    if args.quick:
        sbm = "sbm:k=5,n=300,p=0.1,q=0.01"
        geo = "geometric:n=300,r=0.15"
        ksweep = ["--ks", "2,5,10", "--graphs-per-k", "3", "--sbm-n", "300"]
        fig6_graphs = [
            "--graph", "sbm:k=2,n=200,p=0.5,q=0.05",
            "--graph", "sbm:k=2,n=200,p=0.5,q=0.15",
            "--graph", geo,
        ]
    else:
        sbm = "sbm:k=5,n=1000,p=0.1,q=0.01"
        geo = "geometric:n=1000,r=0.1"
        ksweep = ["--ks", "2,5,10,25,50", "--graphs-per-k", "20", "--sbm-n", "1000"]
        fig6_graphs = []
        for i in range(12):
            lam = 0.2 + i * (0.75 / 11)
            q = round(0.5 * (1 - lam) / (1 + lam), 4)
            fig6_graphs += ["--graph", f"sbm:k=2,n=400,p=0.5,q={q}"]
        fig6_graphs += ["--graph", geo, "--graph", "sbm:k=5,n=400,p=0.3,q=0.015"]

    seed = ["--seed", str(args.seed)]
    runs = [
        ("fig1_metrics_vs_time", "fig1", ["--graph", sbm, "--graph", geo]),
        ("fig2_profiles", "fig2", ["--graph", sbm, "--issues", "4"]),
        ("fig3_bimodality_runs", "fig3", ["--graph", sbm, "--inits", "5"]),
        ("fig4_bimodality_by_k", "fig4", [*ksweep, "--sbm-p", "0.3", "--sbm-q", "0.02"]),
        ("fig5_local_snapshots", "fig5", ["--graph", sbm, "--graph", geo]),
        ("fig6_agreement_vs_lambda2", "fig6", fig6_graphs),
    ]
    for scenario, fig, extra in runs:
        out_dir = f"{args.out}/{scenario}"
        sh("polarlab", scenario, *extra, *seed, "--out", out_dir)
        sh(
            "polarlab-figures",
            "--figure", fig,
            "--in", f"{out_dir}/{fig}.csv",
            "--out", f"{args.out}/{fig}.png",
        )
    print(f"done; images in {args.out}/")


if __name__ == "__main__":
    main()
