"""Experiment orchestration: profiles, bound tables and convergence traces.

A run draws every constituent trace estimation of a shot plan from its own
stream ``(base_seed, run_id, power)``. For multi-power algorithms the sample
axis is shared: at running count ``c`` power ``i`` has used
``max(1, floor(c * q_i / sum q))`` of its samples, which is a round-robin
interleaving proportional to the planned budgets.
"""
from __future__ import annotations

import csv
import io
import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from . import oracle
from .algorithms import ALGORITHMS, ShotPlan, make_plan, moment_sampler
from .bounds import BoundReport, all_bounds
from .graph import BENCHMARKS, Graph, parse_graph_spec

DEFAULT_MAX_SAMPLES = 10 ** 6
CSV_HEADER = ("run_id", "sample_count", "estimate")


class ConfigError(ValueError):
    pass


def fmt(x: float) -> str:
    return f"{x:.6g}"


def round6(x):
    if not isinstance(x, float) or isinstance(x, bool):
        return x
    return float(fmt(x))


def default_checkpoints(max_samples: int, count: int = 40, start: int = 100) -> tuple[int, ...]:
    """``count`` log-spaced sample counts from ``start`` up to ``max_samples``."""
    if max_samples <= start:
        return (max_samples,)
    pts = np.unique(np.round(np.logspace(math.log10(start), math.log10(max_samples), count)).astype(np.int64))
    return tuple(int(p) for p in pts)


@dataclass(frozen=True)
class ExperimentConfig:
    graph: str
    k: int
    algorithm: str
    epsilon: float = 0.1
    eta: float = 0.1
    delta: float | None = None
    one_norm: float | None = None
    max_samples: int | None = DEFAULT_MAX_SAMPLES
    checkpoints: tuple[int, ...] | None = None
    base_seed: int = 0
    num_runs: int = 10
    workers: int = 1

    def validate(self) -> None:
        if self.algorithm not in ALGORITHMS:
            raise ConfigError(f"unknown algorithm {self.algorithm!r}; choose from {', '.join(ALGORITHMS)}")
        if not 0 < self.epsilon < 1 or not 0 < self.eta < 1:
            raise ConfigError("epsilon and eta must lie in (0, 1)")
        if self.delta is not None and not 0 < self.delta <= 1:
            raise ConfigError("delta must lie in (0, 1]")
        if self.one_norm is not None and not 0 < self.one_norm <= 2:
            raise ConfigError("one_norm must lie in (0, 2]")
        if self.max_samples is not None and self.max_samples < 1:
            raise ConfigError("max_samples must be >= 1")
        if self.num_runs < 1 or self.workers < 1:
            raise ConfigError("runs and workers must be >= 1")
        if self.base_seed < 0:
            raise ConfigError("seed must be non-negative")
        if self.checkpoints is not None:
            cp = self.checkpoints
            if not cp or any(b <= a for a, b in zip(cp, cp[1:])) or cp[0] < 1:
                raise ConfigError("checkpoints must be positive and strictly increasing")
            if self.max_samples is not None and cp[-1] > self.max_samples:
                raise ConfigError("last checkpoint exceeds max_samples")


@dataclass
class ConvergenceTrace:
    run_id: int
    sample_counts: list[int]
    estimates: list[float]
    ground_truth: float | None = None

    @property
    def final_estimate(self) -> float:
        return self.estimates[-1]


@dataclass
class ExperimentResult:
    config: ExperimentConfig
    plan: ShotPlan
    delta: float
    one_norm: float | None
    ground_truth: float | None
    traces: list[ConvergenceTrace] = field(default_factory=list)

    def convergence_sample_count(self) -> int | None:
        return convergence_sample_count(self.traces, self.ground_truth, self.config.epsilon)

    def summary(self) -> dict:
        c = self.config
        return {
            "algorithm": c.algorithm,
            "graph": c.graph,
            "k": c.k,
            "epsilon": c.epsilon,
            "eta": c.eta,
            "delta": round6(self.delta),
            "one_norm": round6(self.one_norm),
            "ground_truth": round6(self.ground_truth),
            "convergence_sample_count": self.convergence_sample_count(),
            "num_runs": c.num_runs,
            "max_samples": self.traces[0].sample_counts[-1] if self.traces else None,
            "planned_samples": self.plan.total_samples,
            "final_estimates": [round6(t.final_estimate) for t in self.traces],
        }

    def csv_text(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CSV_HEADER)
        rows = sorted(
            (t.run_id, c, e) for t in self.traces for c, e in zip(t.sample_counts, t.estimates)
        )
        for run_id, count, est in rows:
            w.writerow((run_id, count, fmt(est)))
        return buf.getvalue()


def convergence_sample_count(traces: list[ConvergenceTrace], truth: float | None,
                             epsilon: float, fraction: float = 0.9) -> int | None:
    """First checkpoint after which at least ``ceil(fraction * runs)`` runs stay within epsilon."""
    if truth is None or not traces:
        return None
    err = np.array([[abs(e - truth) for e in t.estimates] for t in traces])
    within = err < epsilon
    # stays[r, t]: run r is within epsilon at every checkpoint from t on
    stays = np.flip(np.logical_and.accumulate(np.flip(within, axis=1), axis=1), axis=1)
    need = math.ceil(fraction * len(traces))
    hits = np.nonzero(stays.sum(axis=0) >= need)[0]
    return int(traces[0].sample_counts[hits[0]]) if hits.size else None


def load_graph(spec: str) -> Graph:
    return parse_graph_spec(spec)


def inspect(spec: str, k: int) -> dict:
    g = load_graph(spec)
    p = oracle.profile(g, k)
    out = {"graph": spec}
    out.update({key: round6(v) for key, v in p.as_dict().items()})
    return out


def bounds_table(spec: str, k: int, epsilon: float = 0.1, eta: float = 0.1) -> list[BoundReport]:
    g = load_graph(spec)
    p = oracle.profile(g, k)
    return all_bounds(epsilon, eta, p.delta, p.one_norm_H if p.one_norm_H > 0 else None)


def bounds_csv(reports: list[BoundReport], graph: str = "") -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(("graph", "algorithm", "d", "sample_count", "step_count", "delta", "one_norm", "poly_norm_sq"))
    for r in reports:
        w.writerow((graph, r.algorithm, r.d, r.sample_count, r.step_count, fmt(r.delta),
                    "" if r.one_norm is None else fmt(r.one_norm),
                    "" if r.poly_norm_sq is None else fmt(r.poly_norm_sq)))
    return buf.getvalue()


def _allocation(plan: ShotPlan, total: int) -> list[tuple[int, int, int]]:
    """(power, q_planned, n_drawn) for each active budget when ``total`` samples are spent."""
    planned = plan.total_samples
    return [(b.power, b.q, max(1, total * b.q // planned)) for b in plan.active]


def _resolve(config: ExperimentConfig, g: Graph):
    prof = None
    try:
        prof = oracle.profile(g, config.k)
    except ValueError:
        if config.delta is None:
            raise
    delta = config.delta if config.delta is not None else prof.delta
    one_norm = config.one_norm
    if one_norm is None and config.algorithm.startswith("cbne"):
        one_norm = prof.one_norm_H if prof is not None and prof.one_norm_H > 0 else 2.0
    truth = prof.betti_normalised if prof is not None else None
    return delta, one_norm, truth


def _run_one(args) -> tuple[int, list[int], list[float]]:
    config, plan, run_id, total, checkpoints = args
    g = load_graph(config.graph)
    draw = moment_sampler(plan.algorithm, g, config.k)
    planned = plan.total_samples
    cols = []
    for power, q, n in _allocation(plan, total):
        x = draw(power, n, config.base_seed, run_id, power)
        cols.append((plan.coefficient(power), q, n, np.cumsum(x)))
    estimates = []
    for c in checkpoints:
        est = plan.constant_term
        for coeff, q, n, cum in cols:
            used = min(n, max(1, c * q // planned))
            est += coeff * cum[used - 1] / used
        estimates.append(float(est))
    return run_id, list(checkpoints), estimates


def run_experiment(config: ExperimentConfig) -> ExperimentResult:
    config.validate()
    g = load_graph(config.graph)
    if not 0 <= config.k < g.n or not g.simplices(config.k):
        raise ConfigError(f"graph has no {config.k}-simplices")
    delta, one_norm, truth = _resolve(config, g)
    plan = make_plan(config.algorithm, config.epsilon, config.eta, delta, one_norm)
    total = config.max_samples if config.max_samples is not None else plan.total_samples
    checkpoints = config.checkpoints or default_checkpoints(total)
    if checkpoints[-1] > total:
        raise ConfigError("last checkpoint exceeds the sample budget")
    jobs = [(config, plan, r, total, checkpoints) for r in range(config.num_runs)]
    if config.workers > 1:
        with ProcessPoolExecutor(max_workers=config.workers) as pool:
            results = list(pool.map(_run_one, jobs))
    else:
        results = [_run_one(j) for j in jobs]
    traces = [ConvergenceTrace(r, counts, ests, truth) for r, counts, ests in sorted(results)]
    return ExperimentResult(config, plan, delta, one_norm, truth, traces)


def write_experiment(result: ExperimentResult, csv_path: Path, summary_path: Path | None = None) -> None:
    csv_path = Path(csv_path)
    csv_path.parent.mkdir(parents=True, exist_ok=True)
    csv_path.write_text(result.csv_text())
    if summary_path is None:
        summary_path = csv_path.with_suffix(".summary.json")
    Path(summary_path).write_text(json.dumps(result.summary(), indent=2) + "\n")


def bench(out_dir: Path, base: ExperimentConfig) -> list[dict]:
    """The 4 x 4 grid of benchmark graphs and algorithms, plus the profile and bound tables."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    profiles, bound_rows, summaries = [], [], []
    for name, (spec, k) in BENCHMARKS.items():
        profiles.append({"name": name, **inspect(spec, k)})
        bound_rows.append(bounds_csv(bounds_table(spec, k, base.epsilon, base.eta), name))
        for algorithm in ALGORITHMS:
            cfg = replace(base, graph=spec, k=k, algorithm=algorithm)
            result = run_experiment(cfg)
            write_experiment(result, out_dir / f"{name}_{algorithm}.csv")
            summaries.append({"name": name, **result.summary()})
    (out_dir / "profiles.json").write_text(json.dumps(profiles, indent=2) + "\n")
    header, *rest = bound_rows[0].splitlines(keepends=True)
    body = "".join(rest) + "".join("".join(b.splitlines(keepends=True)[1:]) for b in bound_rows[1:])
    (out_dir / "bounds.csv").write_text(header + body)
    (out_dir / "summary.json").write_text(json.dumps(summaries, indent=2) + "\n")
    return summaries
