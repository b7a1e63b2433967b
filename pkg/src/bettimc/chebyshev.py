"""Chebyshev polynomials in the monomial basis and the two scaled filters.

``qbne_poly`` is the filter in the Laplacian variable (p(0) = 1, small on
[delta, 1]); ``cbne_poly`` is its reflection in the variable of H = I - L/n
(p(1) = 1, small on [0, 1 - delta]).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal

import numpy as np


@dataclass(frozen=True)
class Polynomial:
    """Real polynomial ``a_0 + a_1 x + ... + a_d x^d`` (monomial coefficients)."""

    coeffs: tuple[float, ...]

    def __post_init__(self):
        c = list(self.coeffs)
        while len(c) > 1 and c[-1] == 0:
            c.pop()
        object.__setattr__(self, "coeffs", tuple(float(a) for a in (c or [0.0])))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        out = np.zeros_like(x)
        for a in reversed(self.coeffs):
            out = out * x + a
        return out if out.ndim else float(out)

    def __getitem__(self, i: int) -> float:
        return self.coeffs[i] if i < len(self.coeffs) else 0.0

    def nonzero_powers(self) -> list[int]:
        """Powers i >= 1 with a non-zero coefficient."""
        return [i for i, a in enumerate(self.coeffs) if i >= 1 and a != 0.0]


def chebyshev_coeffs(d: int) -> Polynomial:
    """Monomial coefficients of T_d from T_{j+1} = 2x T_j - T_{j-1}."""
    if d < 0:
        raise ValueError("degree must be non-negative")
    prev, cur = [1], [0, 1]
    if d == 0:
        return Polynomial((1.0,))
    for _ in range(d - 1):
        nxt = [0] + [2 * c for c in cur]
        for i, c in enumerate(prev):
            nxt[i] -= c
        prev, cur = cur, nxt
    # integer arithmetic keeps coefficients exact
    return Polynomial(tuple(float(c) for c in cur))


def chebyshev_value(d: int, x: float) -> float:
    """T_d(x) by the three-term recurrence."""
    if d == 0:
        return 1.0
    prev, cur = 1.0, x
    for _ in range(d - 1):
        prev, cur = cur, 2 * x * cur - prev
    return cur


def _compose_affine(p: Polynomial, offset: float, slope: float) -> np.ndarray:
    """Coefficients of p(offset + slope * x) via Horner's rule."""
    out = np.zeros(1)
    lin = np.array([offset, slope])
    for a in reversed(p.coeffs):
        out = np.convolve(out, lin)
        out[0] += a
    return out


def _check_gap(d: int, delta: float):
    if d < 1:
        raise ValueError("degree must be >= 1")
    if not 0 < delta < 1:
        raise ValueError("delta must lie in (0, 1)")


def qbne_poly(d: int, delta: float) -> Polynomial:
    """Coefficients of T_d((1 - x)/(1 - delta)) / T_d(1/(1 - delta))."""
    _check_gap(d, delta)
    s = 1.0 / (1.0 - delta)
    coeffs = _compose_affine(chebyshev_coeffs(d), s, -s) / chebyshev_value(d, s)
    return Polynomial(tuple(coeffs))


def cbne_poly(d: int, delta: float) -> Polynomial:
    """Coefficients of T_d(x/(1 - delta)) / T_d(1/(1 - delta)); parity of d is preserved."""
    _check_gap(d, delta)
    s = 1.0 / (1.0 - delta)
    t = chebyshev_coeffs(d).coeffs
    norm = chebyshev_value(d, s)
    return Polynomial(tuple(a * s ** i / norm for i, a in enumerate(t)))


def two_norm_sq(p: Polynomial) -> float:
    return float(sum(a * a for a in p.coeffs))


def _ceil(x: float) -> int:
    # Guard against ceil(6.000000000000001) for values that are integral in exact arithmetic.
    r = round(x)
    return int(r) if abs(x - r) < 1e-9 else math.ceil(x)


def degree_for(epsilon: float, delta: float, method: Literal["chebyshev", "power"]) -> int:
    """Polynomial degree giving trace error epsilon/2.

    ``chebyshev``: ceil(ln(4/eps)/sqrt(delta)); ``power``: ceil(ln(2/eps)/delta).
    """
    if not 0 < epsilon < 1 or not 0 < delta <= 1:
        raise ValueError("epsilon must lie in (0, 1) and delta in (0, 1]")
    if method == "chebyshev":
        return max(1, _ceil(math.log(4 / epsilon) / math.sqrt(delta)))
    if method == "power":
        return max(1, _ceil(math.log(2 / epsilon) / delta))
    raise ValueError(f"unknown method {method!r}")


def norm_sandwich(d: int, delta: float, epsilon: float) -> tuple[float, float]:
    """Lower and upper bounds on ||qbne_poly(d, delta)||_2^2."""
    lower = (9 / 4) ** d / (d + 1)
    upper = epsilon ** 2 * d ** 3 / 3 * (64 / (1 - delta)) ** (2 * d)
    return lower, upper
