"""Command line entry point: ``bettimc {inspect,bounds,run,bench}``."""
from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from pathlib import Path

from .algorithms import ALGORITHMS
from .harness import (
    DEFAULT_MAX_SAMPLES,
    ExperimentConfig,
    bench,
    bounds_csv,
    bounds_table,
    inspect,
    round6,
    run_experiment,
    write_experiment,
)

EXIT_CONFIG = 2
EXIT_IO = 3

log = logging.getLogger("bettimc")


def _default_seed() -> int:
    raw = os.environ.get("BNE_SEED", "0")
    try:
        return int(raw)
    except ValueError:
        raise SystemExit(f"BNE_SEED must be an integer, got {raw!r}")


def _max_samples(text: str):
    if text == "planned":
        return None
    return int(float(text))


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--graph", required=False, help="edge-list path or multipartite:<C>x<M>")
    common.add_argument("--k", type=int, default=1, help="simplex order")
    common.add_argument("--epsilon", type=float, default=0.1)
    common.add_argument("--eta", type=float, default=0.1)
    common.add_argument("--out", type=Path, default=None, help="output file (directory for bench)")

    runner = argparse.ArgumentParser(add_help=False)
    runner.add_argument("--delta", type=float, default=None, help="spectral gap (default: exact)")
    runner.add_argument("--one-norm", type=float, default=None, help="||H||_1 for the classical plans")
    runner.add_argument("--seed", type=int, default=None, help="base seed (default: $BNE_SEED or 0)")
    runner.add_argument("--runs", type=int, default=10)
    runner.add_argument("--max-samples", type=_max_samples, default=DEFAULT_MAX_SAMPLES,
                        help="total samples per run, or 'planned' for the theoretical budget")
    runner.add_argument("--workers", type=int, default=1)

    parser = argparse.ArgumentParser(prog="bettimc", description=__doc__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("inspect", parents=[common], help="exact complex profile as JSON")
    b = sub.add_parser("bounds", parents=[common], help="sample/step bounds for all four algorithms")
    b.add_argument("--format", choices=("json", "csv"), default="json")
    r = sub.add_parser("run", parents=[common, runner], help="convergence traces for one algorithm")
    r.add_argument("--algorithm", choices=ALGORITHMS, required=True)
    sub.add_parser("bench", parents=[common, runner], help="full benchmark grid")
    return parser


def _emit(text: str, out: Path | None):
    if out is None:
        sys.stdout.write(text)
    else:
        out.parent.mkdir(parents=True, exist_ok=True)
        out.write_text(text)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return _dispatch(args)
    except OSError as exc:
        print(f"bettimc: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except ValueError as exc:
        print(f"bettimc: {exc}", file=sys.stderr)
        return EXIT_CONFIG


def _require_graph(args):
    if not args.graph:
        raise ValueError("--graph is required")


def _dispatch(args) -> int:
    if args.command == "inspect":
        _require_graph(args)
        _emit(json.dumps(inspect(args.graph, args.k), indent=2) + "\n", args.out)
        return 0
    if args.command == "bounds":
        _require_graph(args)
        reports = bounds_table(args.graph, args.k, args.epsilon, args.eta)
        if args.format == "csv":
            text = bounds_csv(reports, args.graph)
        else:
            text = json.dumps([{k: round6(v) for k, v in r.as_dict().items()} for r in reports],
                              indent=2) + "\n"
        _emit(text, args.out)
        return 0

    seed = args.seed if args.seed is not None else _default_seed()
    if args.command == "run":
        _require_graph(args)
        config = ExperimentConfig(
            graph=args.graph, k=args.k, algorithm=args.algorithm, epsilon=args.epsilon,
            eta=args.eta, delta=args.delta, one_norm=args.one_norm, max_samples=args.max_samples,
            base_seed=seed, num_runs=args.runs, workers=args.workers,
        )
        result = run_experiment(config)
        if args.out is None:
            sys.stdout.write(result.csv_text())
            sys.stderr.write(json.dumps(result.summary()) + "\n")
        else:
            write_experiment(result, args.out)
        log.info("convergence sample count: %s", result.convergence_sample_count())
        return 0
    if args.command == "bench":
        base = ExperimentConfig(
            graph="", k=1, algorithm=ALGORITHMS[0], epsilon=args.epsilon, eta=args.eta,
            max_samples=args.max_samples, base_seed=seed, num_runs=args.runs, workers=args.workers,
        )
        out = args.out or Path("bench_out")
        summaries = bench(out, base)
        for s in summaries:
            print(f"{s['name']:8s} {s['algorithm']:15s} truth={s['ground_truth']} "
                  f"converged_at={s['convergence_sample_count']}")
        return 0
    raise ValueError(f"unknown command {args.command}")


if __name__ == "__main__":
    sys.exit(main())
