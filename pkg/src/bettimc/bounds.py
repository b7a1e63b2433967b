"""Closed-form sample and Markov-step counts for the four algorithms.

Step counts per algorithm, all evaluated from the shot plans:

* qbne-chebyshev: ``q * d(d+1)/2`` (power i costs i block applications)
* cbne-power, qbne-power: ``q * d``
* cbne-chebyshev: ``sum_i i * q_i`` over the non-zero monomials

For qbne-chebyshev the reported sample count is the per-power ``q``.
"""
from __future__ import annotations

from dataclasses import asdict, dataclass

from .algorithms import ALGORITHMS, make_plan


@dataclass(frozen=True)
class BoundReport:
    algorithm: str
    d: int
    sample_count: int
    step_count: int
    epsilon: float
    eta: float
    delta: float
    one_norm: float | None
    poly_norm_sq: float | None

    def as_dict(self) -> dict:
        return asdict(self)


def bound(algorithm: str, epsilon: float, eta: float, delta: float,
          one_norm: float | None = None) -> BoundReport:
    if one_norm is not None and not 0 < one_norm <= 2:
        raise ValueError("one_norm must lie in (0, 2]")
    plan = make_plan(algorithm, epsilon, eta, delta, one_norm)
    d = plan.degree
    if algorithm == "qbne-chebyshev":
        q = plan.budgets[0].q
        samples, steps = q, q * d * (d + 1) // 2
    else:
        samples, steps = plan.total_samples, plan.markov_steps
    uses_norm = algorithm.startswith("cbne")
    return BoundReport(
        algorithm=algorithm,
        d=d,
        sample_count=samples,
        step_count=steps,
        epsilon=epsilon,
        eta=eta,
        delta=delta,
        one_norm=(2.0 if one_norm is None else one_norm) if uses_norm else None,
        poly_norm_sq=plan.inputs.get("poly_norm_sq"),
    )


def all_bounds(epsilon: float, eta: float, delta: float, one_norm: float | None = None) -> list[BoundReport]:
    return [bound(a, epsilon, eta, delta, one_norm) for a in ALGORITHMS]
