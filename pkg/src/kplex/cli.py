"""Command-line benchmark driver: ``kplex-bench --instance FILE --k 2``."""
from __future__ import annotations

import argparse
import logging
import sys
from dataclasses import replace

from .controller import ControllerConfig
from .harness import emit_report, run_experiment
from .instances import generate


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="kplex-bench", description="Maximum k-plex benchmark runs on DIMACS graphs.")
    p.add_argument("--instance", nargs="+", default=[], metavar="PATH", help="DIMACS ASCII files")
    p.add_argument("--generate", nargs="+", default=[], metavar="NAME",
                   help="rebuild deterministic DIMACS instances (c-fat, hamming, johnson, keller, MANN_a9) by name")
    p.add_argument("--k", nargs="+", type=int, default=[2], metavar="INT")
    p.add_argument("--runs", type=int, default=20, metavar="N")
    p.add_argument("--time-limit", type=float, default=180.0, metavar="SECS")
    p.add_argument("--iters", type=int, default=None, metavar="N",
                   help="main-loop iteration budget; replaces the time limit")
    p.add_argument("--algo", choices=("rle", "rnd"), default="rle")
    p.add_argument("--seed", type=int, default=0, metavar="N", help="first seed; run r uses seed+r")
    p.add_argument("--config", default=None, metavar="PATH", help="flat JSON controller config")
    p.add_argument("--report", choices=("csv", "json", "table"), default="table")
    p.add_argument("--save-solutions", default=None, metavar="DIR")
    p.add_argument("--prelearn-alpha", type=int, default=None, metavar="N",
                   help="prelearning rounds (overrides the config)")
    p.add_argument("--jobs", type=int, default=1, metavar="N")
    p.add_argument("--target", type=int, default=None, metavar="SIZE", help="stop a run once this size is reached")
    p.add_argument("--no-timings", action="store_true", help="blank wall-clock columns (reproducible output)")
    p.add_argument("-v", "--verbose", action="store_true")
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    if not args.instance and not args.generate:
        print("kplex-bench: give --instance and/or --generate", file=sys.stderr)
        return 2
    if any(k < 1 for k in args.k):
        print("kplex-bench: --k values must be positive", file=sys.stderr)
        return 2
    try:
        cfg = ControllerConfig.from_file(args.config) if args.config else ControllerConfig()
        if args.prelearn_alpha is not None:
            cfg = replace(cfg, alpha=args.prelearn_alpha)
    except (OSError, ValueError, TypeError) as exc:
        print(f"kplex-bench: bad config: {exc}", file=sys.stderr)
        return 2

    sources: list = list(args.instance)
    for name in args.generate:
        try:
            sources.append(generate(name))
        except KeyError as exc:
            print(f"kplex-bench: {exc.args[0]}", file=sys.stderr)
            return 2

    time_limit = None if args.iters is not None else args.time_limit
    reports = run_experiment(sources, args.k, runs=args.runs, time_limit=time_limit, max_iter=args.iters,
                             algo=args.algo, seed=args.seed, config=cfg, jobs=args.jobs,
                             save_solutions=args.save_solutions, target=args.target)
    sys.stdout.write(emit_report(reports, args.report, include_timings=not args.no_timings))
    return 1 if any(r.failed for r in reports) else 0


if __name__ == "__main__":
    sys.exit(main())
