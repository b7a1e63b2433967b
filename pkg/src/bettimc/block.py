"""Block-encoded trace estimation, simulated on the simplex register only.

The block ``D`` acts directly on a sparse :class:`SimplexState`:

* ``laplacian``: ``D = P_G (B/sqrt n) P_G P_{k+1}``, so ``D^T D = L_k/n``;
* ``reflected``: ``D = (I - P_G) (B/sqrt n) P_G P_{k+1}``, so ``D^T D = I - L_k/n``.

Mid-circuit measurement of the ancillas is replaced by a Bernoulli draw with
success probability equal to the squared norm of the running (unnormalised)
state; a success renormalises and continues, a failure records a 0.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Literal

import numpy as np
import scipy.sparse as sps

from . import streams
from .boundary import (
    SimplexState,
    apply_full_boundary,
    bits_to_simplex,
    project_simplices,
    project_weight,
    simplex_to_bits,
)
from .graph import Graph, Simplex, sample_k_simplex, sample_k_simplex_indices

SimplexSampler = Callable[[np.random.Generator], Simplex]


class SupportError(AssertionError):
    """A state entering or leaving B/sqrt(n) had Hamming weight outside {k, k+1, k+2}."""


@dataclass(frozen=True)
class BlockVariant:
    kind: Literal["laplacian", "reflected"]
    graph: Graph
    k: int

    def __post_init__(self):
        if self.kind not in ("laplacian", "reflected"):
            raise ValueError(f"unknown block kind {self.kind!r}")


def _check_support(state: SimplexState, k: int):
    bad = state.weights() - {k, k + 1, k + 2}
    if bad:
        raise SupportError(f"state support reached Hamming weights {sorted(bad)}")


def apply_D(state: SimplexState, variant: BlockVariant, dagger: bool = False) -> SimplexState:
    g, k = variant.graph, variant.k
    outer_complement = variant.kind == "reflected"
    if not dagger:
        s = project_weight(state, k + 1)
        s = project_simplices(s, g)
        s = apply_full_boundary(s)
        _check_support(s, k)
        return project_simplices(s, g, complement=outer_complement)
    s = project_simplices(state, g, complement=outer_complement)
    _check_support(s, k)
    s = apply_full_boundary(s)
    s = project_simplices(s, g)
    return project_weight(s, k + 1)


def _alternate(state: SimplexState, variant: BlockVariant, j: int) -> SimplexState:
    # odd steps apply D, even steps D^dagger
    return apply_D(state, variant, dagger=(j % 2 == 0))


def quantum_sample(variant: BlockVariant, d: int, sampler: SimplexSampler,
                   rng: np.random.Generator) -> int:
    if d < 1:
        raise ValueError("d must be >= 1")
    g = variant.graph
    state = SimplexState.basis(g.n, sampler(rng))
    for j in range(1, d + 1):
        state = _alternate(state, variant, j)
        p = state.norm_sq()
        if not rng.random() < p:
            return 0
        state = state.scaled(1.0 / np.sqrt(p))
    return 1


def estimate_block_trace(variant: BlockVariant, d: int, q: int, sampler: SimplexSampler,
                         rng: np.random.Generator) -> float:
    if q < 1:
        raise ValueError("q must be >= 1")
    return float(np.mean([quantum_sample(variant, d, sampler, rng) for _ in range(q)]))


def default_sampler(g: Graph, k: int) -> SimplexSampler:
    return lambda rng: sample_k_simplex(g, k, rng)


def chained_success_probability(variant: BlockVariant, d: int, simplex: Simplex) -> tuple[float, float]:
    """Product of per-step success ratios, and ||D^(d) x||^2 computed without renormalising."""
    state = SimplexState.basis(variant.graph.n, simplex)
    raw = state
    product = 1.0
    for j in range(1, d + 1):
        state = _alternate(state, variant, j)
        raw = _alternate(raw, variant, j)
        p = state.norm_sq()
        product *= p
        if p == 0.0:
            break
        state = state.scaled(1.0 / np.sqrt(p))
    return product, raw.norm_sq()


class BlockMatrix:
    """``D`` as a sparse matrix from S_k to its image basis, built column by column with :func:`apply_D`."""

    def __init__(self, variant: BlockVariant):
        g, k = variant.graph, variant.k
        self.variant = variant
        simplices = g.simplices(k)
        image: dict[int, int] = {}
        rows, cols, vals = [], [], []
        for c, sigma in enumerate(simplices):
            out = apply_D(SimplexState.basis(g.n, sigma), variant)
            for bits, amp in out.amplitudes.items():
                r = image.setdefault(bits, len(image))
                rows.append(r)
                cols.append(c)
                vals.append(float(np.real(amp)))
        self.image_basis = [bits_to_simplex(b) for b in sorted(image, key=image.get)]
        self.D = sps.csr_matrix((vals, (rows, cols)), shape=(len(image), len(simplices)))
        self.Dt = self.D.T.tocsr()

    @classmethod
    def for_variant(cls, variant: BlockVariant) -> "BlockMatrix":
        key = ("block", variant.kind, variant.k)
        cache = variant.graph._cache
        if key not in cache:
            cache[key] = cls(variant)
        return cache[key]

    def gram(self) -> np.ndarray:
        return (self.Dt @ self.D).toarray()

    def run(self, starts: np.ndarray, uniforms: np.ndarray) -> np.ndarray:
        """Bernoulli outcomes for each start given a ``(len(starts), d)`` array of uniforms."""
        size, d = uniforms.shape
        alive = np.ones(size, dtype=bool)
        if self.D.shape[0] == 0:
            return np.zeros(size)
        # columns are states; only live columns are propagated
        idx = np.arange(size)
        x = self.D[:, starts].toarray()
        for j in range(1, d + 1):
            if j > 1:
                op = self.D if j % 2 == 1 else self.Dt
                x = op @ x
            p = np.einsum("ij,ij->j", x, x)
            ok = uniforms[idx, j - 1] < p
            alive[idx[~ok]] = False
            idx = idx[ok]
            if idx.size == 0:
                break
            x = x[:, ok] / np.sqrt(p[ok])
        return alive.astype(float)

    def samples(self, d: int, q: int, seed: int, *key: int) -> np.ndarray:
        out = np.empty(q)
        g, k = self.variant.graph, self.variant.k
        for start, size, rng in streams.blocks(q, seed, *key):
            starts, uniforms = streams.full_block(
                rng, size, d, lambda r, m: sample_k_simplex_indices(g, k, r, m))
            out[start:start + size] = self.run(starts, uniforms)
        return out


def state_from_vector(g: Graph, basis: list[Simplex], vec: np.ndarray) -> SimplexState:
    return SimplexState(g.n, {simplex_to_bits(s): a for s, a in zip(basis, vec) if abs(a) >= 1e-15})
