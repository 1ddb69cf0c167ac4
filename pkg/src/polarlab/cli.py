"""Command line entry point.

Usage:
    polarlab <scenario> [--graph SPEC]... [--inits N] [--issues M]
             [--steps T|auto] [--stride S] [--seed S] [--out DIR] ...

Graph specs: ``sbm:k=5,n=1000,p=0.1,q=0.01``, ``geometric:n=1000,r=0.1``,
``edgelist:PATH``.  Run ``polarlab --list`` for the scenario catalog.
"""

from __future__ import annotations

import argparse
import logging
import sys

from . import __version__
from .errors import PolarlabError
from .harness import (
    SCENARIOS,
    ConvergenceCriterion,
    ExperimentConfig,
    parse_graph_spec,
    run_scenario,
)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="polarlab",
        description="Seeded opinion-dynamics experiments with CSV output.",
    )
    parser.add_argument("--version", action="version", version=f"polarlab {__version__}")
    parser.add_argument(
        "--list", action="store_true", help="list scenarios and exit"
    )
    parser.add_argument("scenario", nargs="?", choices=sorted(SCENARIOS))
    parser.add_argument(
        "--graph",
        action="append",
        default=None,
        metavar="SPEC",
        help="graph spec; repeatable (default: one SBM and one geometric graph)",
    )
    parser.add_argument("--inits", type=int, default=5, help="independent random starts")
    parser.add_argument("--issues", type=int, default=4, help="issue count for profiles")
    parser.add_argument(
        "--steps",
        default="auto",
        help="update count, or 'auto' to stop at metric convergence",
    )
    parser.add_argument("--stride", type=int, default=1, help="output thinning stride")
    parser.add_argument("--seed", type=int, default=0, help="master seed")
    parser.add_argument("--out", default="results", help="output directory")
    parser.add_argument(
        "--metric",
        action="append",
        default=None,
        help="metric id; repeatable (default: bimodality and local_agreement)",
    )
    parser.add_argument("--epsilon", type=float, default=1e-4)
    parser.add_argument("--window", type=int, default=10)
    parser.add_argument("--max-steps", type=int, default=100_000)
    parser.add_argument(
        "--ks", default="2,5,10,25,50", help="comma-separated block counts (k sweep)"
    )
    parser.add_argument("--graphs-per-k", type=int, default=100)
    parser.add_argument("--sbm-n", type=int, default=1000)
    parser.add_argument("--sbm-p", type=float, default=3 / 10)
    parser.add_argument("--sbm-q", type=float, default=2 / 100)
    parser.add_argument(
        "--edge-list-dir",
        default=None,
        help="directory of edge-list files (table scenario)",
    )
    parser.add_argument("-v", "--verbose", action="store_true")
    return parser


def config_from_args(args: argparse.Namespace) -> ExperimentConfig:
    if args.steps == "auto":
        steps = None
    else:
        try:
            steps = int(args.steps)
        except ValueError:
            raise PolarlabError(f"--steps must be an integer or 'auto', got {args.steps!r}")
    kwargs = {}
    if args.graph:
        kwargs["graphs"] = tuple(parse_graph_spec(s) for s in args.graph)
    if args.metric:
        kwargs["metrics"] = tuple(args.metric)
    return ExperimentConfig(
        scenario=args.scenario,
        out_dir=args.out,
        inits=args.inits,
        issues=args.issues,
        steps=steps,
        stride=args.stride,
        seed=args.seed,
        convergence=ConvergenceCriterion(
            epsilon=args.epsilon, window=args.window, max_steps=args.max_steps
        ),
        ks=tuple(int(k) for k in args.ks.split(",") if k),
        graphs_per_k=args.graphs_per_k,
        sbm_n=args.sbm_n,
        sbm_p=args.sbm_p,
        sbm_q=args.sbm_q,
        edge_list_dir=args.edge_list_dir,
        **kwargs,
    )


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.list:
        for name in sorted(SCENARIOS):
            print(name)
        return 0
    if args.scenario is None:
        parser.print_usage(sys.stderr)
        print("polarlab: error: a scenario is required", file=sys.stderr)
        return 2
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        cfg = config_from_args(args)
        out = run_scenario(cfg)
    except PolarlabError as exc:
        print(f"polarlab: error: {exc}", file=sys.stderr)
        return 2
    print(out)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
