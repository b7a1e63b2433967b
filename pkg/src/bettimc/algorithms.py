"""The four normalised-Betti-number estimators and their shot plans.

=================  ====================  =========================
algorithm          matrix / sampler      polynomial
=================  ====================  =========================
qbne-chebyshev     L/n, block encoding   T_d((1-x)/(1-delta)), all powers, one q
cbne-power         H, Markov chain       x^d
cbne-chebyshev     H, Markov chain       T_d(x/(1-delta)), per-monomial budgets
qbne-power         H, block encoding     x^d
=================  ====================  =========================
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .block import BlockMatrix, BlockVariant
from .chebyshev import Polynomial, cbne_poly, degree_for, qbne_poly, two_norm_sq
from .graph import Graph
from .markov import SparseWalk

ALGORITHMS = ("qbne-chebyshev", "cbne-power", "cbne-chebyshev", "qbne-power")

# 1/(1 - delta) must stay finite when the gap is the whole interval.
_MAX_CHEB_DELTA = 1 - 1e-6


@dataclass(frozen=True)
class PowerBudget:
    power: int
    epsilon: float
    q: int


@dataclass(frozen=True)
class ShotPlan:
    algorithm: str
    degree: int
    budgets: tuple[PowerBudget, ...]
    eta_prime: float
    constant_term: float = 0.0
    poly: Polynomial | None = None
    inputs: dict = field(default_factory=dict)

    def coefficient(self, power: int) -> float:
        if self.poly is None:
            return 1.0 if power == self.degree else 0.0
        return self.poly[power]

    @property
    def total_samples(self) -> int:
        return sum(b.q for b in self.budgets)

    @property
    def markov_steps(self) -> int:
        return sum(b.power * b.q for b in self.budgets)

    @property
    def active(self) -> tuple[PowerBudget, ...]:
        return tuple(b for b in self.budgets if b.q > 0)


@dataclass(frozen=True)
class BneResult:
    estimate: float
    plan: ShotPlan
    samples_used: int
    markov_steps_used: int
    seed: int
    moments: dict[int, float] = field(default_factory=dict)


def _check(epsilon: float, eta: float, delta: float):
    if not 0 < epsilon < 1 or not 0 < eta < 1:
        raise ValueError("epsilon and eta must lie in (0, 1)")
    if not 0 < delta <= 1:
        raise ValueError("delta must lie in (0, 1]")


def _ceil(x: float) -> int:
    # Exact-integer cases reached through floating point keep the integer.
    r = round(x)
    return int(r) if abs(x - r) <= 1e-9 * max(1.0, abs(x)) else math.ceil(x)


def hoeffding_samples(width: float, tolerance: float, eta: float) -> int:
    """Smallest q with 2 exp(-2 q tolerance^2 / width^2) <= eta."""
    return _ceil(width ** 2 * math.log(2 / eta) / (2 * tolerance ** 2))


def plan_qbne_chebyshev(epsilon: float, eta: float, delta: float) -> ShotPlan:
    _check(epsilon, eta, delta)
    d = degree_for(epsilon, delta, "chebyshev")
    p = qbne_poly(d, min(delta, _MAX_CHEB_DELTA))
    q = _ceil(2 * math.log(2 / eta) * two_norm_sq(p) / epsilon ** 2)
    budgets = tuple(PowerBudget(i, epsilon, q) for i in range(1, d + 1))
    return ShotPlan("qbne-chebyshev", d, budgets, eta, p[0], p,
                    {"epsilon": epsilon, "eta": eta, "delta": delta, "poly_norm_sq": two_norm_sq(p)})


def plan_cbne_power(epsilon: float, eta: float, delta: float, one_norm: float = 2.0) -> ShotPlan:
    _check(epsilon, eta, delta)
    d = degree_for(epsilon, delta, "power")
    q = hoeffding_samples(2 * one_norm ** d, epsilon / 2, eta)
    return ShotPlan("cbne-power", d, (PowerBudget(d, epsilon / 2, q),), eta,
                    inputs={"epsilon": epsilon, "eta": eta, "delta": delta, "one_norm": one_norm})


def plan_cbne_chebyshev(epsilon: float, eta: float, delta: float, one_norm: float = 2.0) -> ShotPlan:
    _check(epsilon, eta, delta)
    d = degree_for(epsilon, delta, "chebyshev")
    p = cbne_poly(d, min(delta, _MAX_CHEB_DELTA))
    half = math.ceil(d / 2)
    eta_prime = -math.expm1(math.log1p(-eta) / half)
    budgets = []
    for i in range(1, d + 1):
        a = abs(p[i])
        if a == 0.0:
            budgets.append(PowerBudget(i, math.inf, 0))
            continue
        eps_i = epsilon / (2 * half * a)
        budgets.append(PowerBudget(i, eps_i, hoeffding_samples(2 * one_norm ** i, eps_i, eta_prime)))
    return ShotPlan("cbne-chebyshev", d, tuple(budgets), eta_prime, p[0], p,
                    {"epsilon": epsilon, "eta": eta, "delta": delta, "one_norm": one_norm,
                     "poly_norm_sq": two_norm_sq(p)})


def plan_qbne_power(epsilon: float, eta: float, delta: float) -> ShotPlan:
    _check(epsilon, eta, delta)
    d = degree_for(epsilon, delta, "power")
    q = hoeffding_samples(1.0, epsilon / 2, eta)
    return ShotPlan("qbne-power", d, (PowerBudget(d, epsilon / 2, q),), eta,
                    inputs={"epsilon": epsilon, "eta": eta, "delta": delta})


def make_plan(algorithm: str, epsilon: float, eta: float, delta: float,
              one_norm: float | None = None) -> ShotPlan:
    if algorithm == "qbne-chebyshev":
        return plan_qbne_chebyshev(epsilon, eta, delta)
    if algorithm == "qbne-power":
        return plan_qbne_power(epsilon, eta, delta)
    if algorithm == "cbne-power":
        return plan_cbne_power(epsilon, eta, delta, 2.0 if one_norm is None else one_norm)
    if algorithm == "cbne-chebyshev":
        return plan_cbne_chebyshev(epsilon, eta, delta, 2.0 if one_norm is None else one_norm)
    raise ValueError(f"unknown algorithm {algorithm!r}; choose from {', '.join(ALGORITHMS)}")


def moment_sampler(algorithm: str, g: Graph, k: int):
    """Return ``f(power, q, seed, *key) -> samples`` for the algorithm's trace estimator."""
    if algorithm == "qbne-chebyshev":
        return BlockMatrix.for_variant(BlockVariant("laplacian", g, k)).samples
    if algorithm == "qbne-power":
        return BlockMatrix.for_variant(BlockVariant("reflected", g, k)).samples
    if algorithm in ("cbne-power", "cbne-chebyshev"):
        return SparseWalk.for_graph(g, k).samples
    raise ValueError(f"unknown algorithm {algorithm!r}")


def execute_plan(plan: ShotPlan, g: Graph, k: int, seed: int = 0, *key: int) -> BneResult:
    """Run every trace estimation in ``plan`` and combine the moments."""
    draw = moment_sampler(plan.algorithm, g, k)
    moments = {}
    estimate = plan.constant_term
    for b in plan.active:
        moments[b.power] = float(draw(b.power, b.q, seed, *key, b.power).mean())
        estimate += plan.coefficient(b.power) * moments[b.power]
    return BneResult(estimate, plan, plan.total_samples, plan.markov_steps, seed, moments)


def _warn_gap(g: Graph, k: int, delta: float, profile):
    if profile is not None and profile.delta < delta - 1e-12:
        warnings.warn(f"delta={delta} exceeds the true spectral gap {profile.delta:.6g}; "
                      "the accuracy guarantee does not apply", stacklevel=3)


def qbne_chebyshev(g: Graph, k: int, epsilon: float, eta: float, delta: float,
                   seed: int = 0, profile=None) -> BneResult:
    _warn_gap(g, k, delta, profile)
    return execute_plan(plan_qbne_chebyshev(epsilon, eta, delta), g, k, seed)


def cbne_power(g: Graph, k: int, epsilon: float, eta: float, delta: float,
               one_norm: float | None = None, seed: int = 0, profile=None) -> BneResult:
    _warn_gap(g, k, delta, profile)
    return execute_plan(make_plan("cbne-power", epsilon, eta, delta, one_norm), g, k, seed)


def cbne_chebyshev(g: Graph, k: int, epsilon: float, eta: float, delta: float,
                   one_norm: float | None = None, seed: int = 0, profile=None) -> BneResult:
    _warn_gap(g, k, delta, profile)
    return execute_plan(make_plan("cbne-chebyshev", epsilon, eta, delta, one_norm), g, k, seed)


def qbne_power(g: Graph, k: int, epsilon: float, eta: float, delta: float,
               seed: int = 0, profile=None) -> BneResult:
    _warn_gap(g, k, delta, profile)
    return execute_plan(plan_qbne_power(epsilon, eta, delta), g, k, seed)


def estimate_range(plan: ShotPlan) -> tuple[float, float]:
    """Interval that always contains the combined estimate."""
    if plan.poly is None:
        return (0.0, 1.0) if plan.algorithm == "qbne-power" else (-np.inf, np.inf)
    # Bernoulli moments lie in [0, 1]; Markov-chain moments in [-h^i, h^i].
    h = plan.inputs.get("one_norm", 1.0) if plan.algorithm == "cbne-chebyshev" else 1.0
    spread = sum(abs(a) * h ** i for i, a in enumerate(plan.poly.coeffs) if i >= 1)
    return plan.constant_term - spread, plan.constant_term + spread
