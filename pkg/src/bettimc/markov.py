"""Markov-chain trace estimation of powers of a sparse matrix.

A walk starts at a uniformly random row ``x_0`` and moves to ``x_{j+1}``
with probability ``|M[x_j, x_{j+1}]| / ||M[x_j, .]||_1``. The sample

    Y_d = [x_d == x_0] * prod_j sign(M[x_j, x_{j+1}]) * ||M[x_j, .]||_1

is unbiased for ``tr(M^d) / N``. The scalar functions below are the
reference implementation; :class:`SparseWalk` runs the same chain on whole
blocks of samples with numpy.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import streams
from .boundary import SparseRow, sparse_row_H
from .graph import Graph, sample_k_simplex, sample_k_simplex_indices

RowFn = Callable[[int], SparseRow]
RowSampler = Callable[[np.random.Generator], int]


@dataclass(frozen=True)
class WalkSample:
    value: float
    path_length: int


def h_row_fn(g: Graph, k: int) -> RowFn:
    """Row oracle for H = I - L_k/n, addressed by lexicographic rank (memoised)."""
    key = ("Hrows", k)
    if key not in g._cache:
        simplices = g.simplices(k)
        g._cache[key] = [sparse_row_H(g, k, s) for s in simplices]
    rows = g._cache[key]
    return rows.__getitem__


def simplex_sampler(g: Graph, k: int) -> RowSampler:
    index = g.simplex_index(k)
    return lambda rng: index[sample_k_simplex(g, k, rng)]


def _step(row: SparseRow, u: float) -> int:
    keys = list(row.entries)
    cum = np.cumsum([abs(row.entries[c]) for c in keys])
    pos = int(np.searchsorted(cum, u * cum[-1], side="right"))
    return keys[min(pos, len(keys) - 1)]


def sample_Yd(row_fn: RowFn, sampler: RowSampler, d: int, rng: np.random.Generator) -> WalkSample:
    if d < 1:
        raise ValueError("d must be >= 1")
    x0 = sampler(rng)
    x = x0
    value = 1.0
    for _ in range(d):
        row = row_fn(x)
        norm = row.one_norm
        if norm == 0.0:
            return WalkSample(0.0, d)
        nxt = _step(row, rng.random())
        value *= norm if row.entries[nxt] > 0 else -norm
        x = nxt
    return WalkSample(value if x == x0 else 0.0, d)


def estimate_sparse_trace(row_fn: RowFn, sampler: RowSampler, d: int, q: int,
                          rng: np.random.Generator) -> float:
    """Mean of ``q`` independent Y_d samples; ``d = 0`` returns 1."""
    if q < 1:
        raise ValueError("q must be >= 1")
    if d == 0:
        return 1.0
    return float(np.mean([sample_Yd(row_fn, sampler, d, rng).value for _ in range(q)]))


class SparseWalk:
    """Vectorised Markov chain over the rows of H for one (graph, k)."""

    def __init__(self, g: Graph, k: int):
        self.g, self.k = g, k
        rows = h_row_fn(g, k)
        nrows = len(g.simplices(k))
        indptr = [0]
        indices, data = [], []
        for r in range(nrows):
            row = rows(r)
            indices.extend(row.entries.keys())
            data.extend(row.entries.values())
            indptr.append(len(indices))
        self.indptr = np.asarray(indptr, dtype=np.int64)
        self.indices = np.asarray(indices, dtype=np.int64)
        data = np.asarray(data, dtype=float)
        self.negative = data < 0
        absdata = np.abs(data)
        self.norms = np.add.reduceat(absdata, self.indptr[:-1]) if data.size else np.zeros(nrows)
        self.norms[np.diff(self.indptr) == 0] = 0.0
        # Row r owns the interval (r, r+1] of the global cumulative table.
        cum = np.empty_like(absdata)
        for r in range(nrows):
            lo, hi = self.indptr[r], self.indptr[r + 1]
            if hi > lo:
                c = np.cumsum(absdata[lo:hi]) / self.norms[r]
                c[-1] = 1.0
                cum[lo:hi] = r + c
        self.cum = cum
        self.max_norm = float(self.norms.max()) if nrows else 0.0

    @classmethod
    def for_graph(cls, g: Graph, k: int) -> "SparseWalk":
        key = ("walk", k)
        if key not in g._cache:
            g._cache[key] = cls(g, k)
        return g._cache[key]

    def walk(self, starts: np.ndarray, uniforms: np.ndarray) -> np.ndarray:
        """Y_d for each start given a ``(len(starts), d)`` array of uniforms."""
        cur = starts.astype(np.int64)
        value = np.ones(cur.shape[0])
        for j in range(uniforms.shape[1]):
            norm = self.norms[cur]
            value *= norm
            alive = norm > 0
            if not alive.any():
                break
            pos = np.searchsorted(self.cum, cur + uniforms[:, j], side="right")
            pos = np.where(alive, np.minimum(pos, self.indptr[cur + 1] - 1), 0)
            value = np.where(alive & self.negative[pos], -value, value) if self.negative.size else value
            cur = np.where(alive, self.indices[pos] if self.indices.size else cur, cur)
        return np.where(cur == starts, value, 0.0)

    def samples(self, d: int, q: int, seed: int, *key: int) -> np.ndarray:
        """``q`` reproducible Y_d samples from stream ``(seed, *key)``."""
        out = np.empty(q)
        if d == 0:
            out[:] = 1.0
            return out
        for start, size, rng in streams.blocks(q, seed, *key):
            starts, uniforms = streams.full_block(
                rng, size, d, lambda r, m: sample_k_simplex_indices(self.g, self.k, r, m))
            out[start:start + size] = self.walk(starts, uniforms)
        return out
