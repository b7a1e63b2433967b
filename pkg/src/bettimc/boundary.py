"""Boundary operators, combinatorial Laplacians and sparse rows of H = I - L/n.

Two representations of the same operators live here:

* matrices over the lexicographic simplex index (``dense_laplacian``,
  ``boundary_matrix``, ``sparse_row_H``), and
* a sparse "statevector" over n-bit strings (:class:`SimplexState`), on
  which the full boundary ``B/sqrt(n)`` and the projectors act.

Bit ``i`` of a bitstring is set iff vertex ``i`` belongs to the simplex. The
empty string is not a simplex, so at ``k = 0`` the down-Laplacian vanishes.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .graph import Graph, Simplex

PRUNE = 1e-15


def simplex_to_bits(simplex: Simplex) -> int:
    bits = 0
    for v in simplex:
        bits |= 1 << v
    return bits


def bits_to_simplex(bits: int) -> Simplex:
    out = []
    v = 0
    while bits:
        if bits & 1:
            out.append(v)
        bits >>= 1
        v += 1
    return tuple(out)


def popcount(bits: int) -> int:
    return bin(bits).count("1")


def is_simplex_bits(g: Graph, bits: int) -> bool:
    """True iff ``bits`` is a non-empty clique of ``g``."""
    if bits == 0 or bits >> g.n:
        return False
    masks = g.adjacency_mask
    rest = bits
    while rest:
        low = rest & -rest
        v = low.bit_length() - 1
        if (bits ^ low) & ~masks[v]:
            return False
        rest ^= low
    return True


@dataclass
class SimplexState:
    """Sparse amplitude vector over n-bit strings."""

    n: int
    amplitudes: dict[int, complex] = field(default_factory=dict)

    @classmethod
    def basis(cls, n: int, simplex: Simplex) -> "SimplexState":
        return cls(n, {simplex_to_bits(simplex): 1.0})

    def prune(self) -> "SimplexState":
        self.amplitudes = {s: a for s, a in self.amplitudes.items() if abs(a) >= PRUNE}
        return self

    def norm_sq(self) -> float:
        return float(sum(abs(a) ** 2 for a in self.amplitudes.values()))

    def scaled(self, factor: float) -> "SimplexState":
        return SimplexState(self.n, {s: a * factor for s, a in self.amplitudes.items()})

    def weights(self) -> set[int]:
        return {popcount(s) for s in self.amplitudes}

    def __len__(self):
        return len(self.amplitudes)

    def __bool__(self):
        return bool(self.amplitudes)


def apply_full_boundary(state: SimplexState) -> SimplexState:
    """Apply ``(d + d^dagger)/sqrt(n)``: toggle each bit with sign (-1)^(set bits below it)."""
    n = state.n
    scale = 1.0 / math.sqrt(n)
    out: dict[int, complex] = {}
    for s, amp in state.amplitudes.items():
        below = 0
        for i in range(n):
            t = s ^ (1 << i)
            coeff = -amp if below & 1 else amp
            out[t] = out.get(t, 0.0) + coeff * scale
            if s >> i & 1:
                below += 1
    return SimplexState(n, out).prune()


def project_simplices(state: SimplexState, g: Graph, complement: bool = False) -> SimplexState:
    """Keep the strings that are simplices of ``g`` (or, with ``complement``, that are not)."""
    keep = {s: a for s, a in state.amplitudes.items() if is_simplex_bits(g, s) != complement}
    return SimplexState(state.n, keep)


def project_weight(state: SimplexState, w: int) -> SimplexState:
    if not 0 <= w <= state.n:
        raise ValueError(f"weight {w} out of range for n={state.n}")
    return SimplexState(state.n, {s: a for s, a in state.amplitudes.items() if popcount(s) == w})


def _require_simplices(g: Graph, k: int) -> list[Simplex]:
    if not 0 <= k < g.n:
        raise ValueError(f"k={k} out of range for a graph on {g.n} vertices")
    simplices = g.simplices(k)
    if not simplices:
        raise ValueError(f"graph has no {k}-simplices")
    return simplices


def boundary_matrix(g: Graph, k: int) -> np.ndarray:
    """Signed incidence matrix of d_k : C S_k -> C S_{k-1}, entry (-1)^(j+1) for the j-th face.

    ``d_0`` is the empty map (shape ``(0, |S_0|)``); at the top it is ``(|S_{k-1}|, 0)``.
    """
    cols = g.simplices(k) if 0 <= k < g.n else []
    if k == 0:
        return np.zeros((0, len(cols)), dtype=np.int64)
    rows = g.simplex_index(k - 1)
    mat = np.zeros((len(rows), len(cols)), dtype=np.int64)
    for c, sigma in enumerate(cols):
        for j in range(len(sigma)):
            face = sigma[:j] + sigma[j + 1:]
            mat[rows[face], c] = -1 if j % 2 == 0 else 1
    return mat


def dense_laplacian(g: Graph, k: int) -> np.ndarray:
    """Combinatorial Laplacian d_k^T d_k + d_{k+1} d_{k+1}^T over S_k (integer matrix)."""
    simplices = _require_simplices(g, k)
    down = boundary_matrix(g, k)
    lap = down.T @ down
    if k + 1 < g.n:
        up = boundary_matrix(g, k + 1)
        if up.shape[1]:
            lap = lap + up @ up.T
    assert lap.shape == (len(simplices), len(simplices))
    return lap


def normalised_laplacian(g: Graph, k: int) -> np.ndarray:
    return dense_laplacian(g, k) / g.n


def reflected_laplacian(g: Graph, k: int) -> np.ndarray:
    lap = normalised_laplacian(g, k)
    return np.eye(lap.shape[0]) - lap


@dataclass(frozen=True)
class SparseRow:
    """Non-zero entries of one row of H, keyed by lexicographic simplex rank."""

    entries: dict[int, float]

    @property
    def one_norm(self) -> float:
        return float(sum(abs(v) for v in self.entries.values()))


def _position(sorted_vertices: Simplex, v: int) -> int:
    return sum(1 for u in sorted_vertices if u < v)


def up_degree(g: Graph, simplex: Simplex) -> int:
    """Number of (k+1)-simplices containing ``simplex``."""
    common = set(range(g.n))
    for v in simplex:
        common &= g.neighbors[v]
    return len(common)


def sparse_row_H(g: Graph, k: int, row: Simplex) -> SparseRow:
    """Row ``row`` of H = I - L_k/n, computed from local clique tests only."""
    index = g.simplex_index(k) if 0 <= k < g.n else {}
    if row not in index:
        raise ValueError(f"{row} is not a {k}-simplex of the graph")
    n = g.n
    down = len(row) if k >= 1 else 0
    entries: dict[int, float] = {index[row]: 1.0 - (down + up_degree(g, row)) / n}
    row_set = set(row)
    for j, v in enumerate(row):
        face = row[:j] + row[j + 1:]
        # w must complete the face to a k-simplex tau = face + {w}
        candidates = set(range(n)) - row_set
        for u in face:
            candidates &= g.neighbors[u]
        for w in candidates:
            tau = tuple(sorted(face + (w,)))
            value = 0
            if k >= 1:
                # down part: eps(sigma, face) * eps(tau, face)
                value += (-1) ** (j + _position(tau, w))
            if g.adjacent(v, w):
                rho = tuple(sorted(row + (w,)))
                value += (-1) ** (_position(rho, w) + _position(rho, v))
            if value:
                entries[index[tau]] = entries.get(index[tau], 0.0) - value / n
    return SparseRow({key: val for key, val in sorted(entries.items()) if val != 0.0})
