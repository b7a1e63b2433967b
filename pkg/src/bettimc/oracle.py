"""Dense ground truth: Betti numbers, spectral gap, ||H||_1 and exact normalised traces."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Literal

import numpy as np

from .boundary import dense_laplacian
from .graph import Graph

Variant = Literal["laplacian", "reflected"]

DEFAULT_TOL = 1e-8
MAX_ORACLE_SIMPLICES = 5000


@dataclass(frozen=True)
class ComplexProfile:
    n: int
    k: int
    num_simplices: int
    betti: int
    delta: float
    one_norm_H: float
    spectrum: np.ndarray
    degenerate: bool = False

    @property
    def betti_normalised(self) -> float:
        return self.betti / self.num_simplices

    def as_dict(self) -> dict:
        return {
            "n": self.n,
            "k": self.k,
            "num_simplices": self.num_simplices,
            "betti": self.betti,
            "betti_normalised": self.betti_normalised,
            "delta": self.delta,
            "one_norm_H": self.one_norm_H,
            "degenerate_gap": self.degenerate,
        }


def _laplacian_checked(g: Graph, k: int) -> np.ndarray:
    lap = dense_laplacian(g, k)
    if lap.shape[0] > MAX_ORACLE_SIMPLICES:
        raise ValueError(
            f"|S_{k}| = {lap.shape[0]} exceeds the dense oracle limit of {MAX_ORACLE_SIMPLICES}"
        )
    return lap


def spectrum(g: Graph, k: int, variant: Variant = "laplacian") -> np.ndarray:
    """Sorted eigenvalues of L_k/n (``laplacian``) or of I - L_k/n (``reflected``)."""
    lam = np.linalg.eigvalsh(_laplacian_checked(g, k) / g.n)
    if variant == "laplacian":
        return lam
    if variant == "reflected":
        return np.sort(1.0 - lam)
    raise ValueError(f"unknown variant {variant!r}")


def profile(g: Graph, k: int, tol: float = DEFAULT_TOL) -> ComplexProfile:
    if not 0 < tol <= 1e-4:
        raise ValueError("tol must lie in (0, 1e-4]")
    lap = _laplacian_checked(g, k) / g.n
    lam = np.linalg.eigvalsh(lap)
    kernel = lam < tol
    positive = lam[~kernel]
    degenerate = positive.size == 0
    # Rounding keeps ceil(log(.)/delta) from tripping on eigensolver dust.
    delta = 1.0 if degenerate else float(np.round(positive.min(), 12))
    h = np.eye(lap.shape[0]) - lap
    one_norm = float(np.abs(h).sum(axis=0).max())
    return ComplexProfile(
        n=g.n,
        k=k,
        num_simplices=lap.shape[0],
        betti=int(kernel.sum()),
        delta=delta,
        one_norm_H=one_norm,
        spectrum=lam,
        degenerate=degenerate,
    )


def exact_power_trace(g: Graph, k: int, d: int, variant: Variant = "reflected") -> float:
    """(1/|S_k|) tr(M^d) with M = L_k/n or I - L_k/n."""
    if d < 0:
        raise ValueError("d must be non-negative")
    mu = spectrum(g, k, variant)
    if variant == "reflected":
        mu = np.clip(mu, 0.0, None)
    return float(np.mean(mu ** d))


def exact_poly_trace(g: Graph, k: int, p: Callable[[np.ndarray], np.ndarray],
                     variant: Variant = "laplacian") -> float:
    """(1/|S_k|) tr(p(M)) for any vectorised callable ``p`` (e.g. a Polynomial)."""
    mu = spectrum(g, k, variant)
    return float(np.mean(p(mu)))
