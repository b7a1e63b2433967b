"""Graphs, clique-complex queries and the benchmark multipartite family.

A k-simplex of the clique complex is a (k+1)-clique, stored as a strictly
increasing tuple of vertex indices. Everywhere else in the package the
k-simplices are addressed by their rank in the lexicographic enumeration
returned by :func:`enumerate_k_simplices`.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

Simplex = tuple[int, ...]

_MULTIPARTITE_RE = re.compile(r"^multipartite:(\d+)x(\d+)$")


class GraphFormatError(ValueError):
    """Raised when a graph spec string or edge-list file cannot be parsed."""


@dataclass(frozen=True)
class MultipartiteSpec:
    clusters: int
    cluster_size: int

    def __post_init__(self):
        if self.clusters < 1 or self.cluster_size < 1:
            raise ValueError("clusters and cluster_size must be >= 1")

    def cluster_of(self, v: int) -> int:
        return v // self.cluster_size


@dataclass(frozen=True, eq=False)
class Graph:
    """Simple undirected graph on vertices ``0..n-1``.

    ``neighbors[v]`` is a frozenset of the vertices adjacent to ``v``. The
    optional ``multipartite`` tag records that the graph was produced by
    :func:`complete_multipartite`, which enables the closed-form sampler.
    """

    n: int
    neighbors: tuple[frozenset[int], ...]
    multipartite: MultipartiteSpec | None = None
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("a graph needs at least one vertex")
        if len(self.neighbors) != self.n:
            raise ValueError("neighbors must have one entry per vertex")
        for v, nb in enumerate(self.neighbors):
            if v in nb:
                raise ValueError(f"self-loop at vertex {v}")
            for w in nb:
                if not 0 <= w < self.n or v not in self.neighbors[w]:
                    raise ValueError(f"adjacency not symmetric at ({v}, {w})")

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]],
                   multipartite: MultipartiteSpec | None = None) -> "Graph":
        nb: list[set[int]] = [set() for _ in range(n)]
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u}, {v}) out of range for n={n}")
            if u == v:
                raise ValueError(f"self-loop at vertex {u}")
            nb[u].add(v)
            nb[v].add(u)
        return cls(n, tuple(frozenset(s) for s in nb), multipartite)

    def adjacent(self, u: int, v: int) -> bool:
        return v in self.neighbors[u]

    @cached_property
    def edges(self) -> list[tuple[int, int]]:
        return [(u, v) for u in range(self.n) for v in sorted(self.neighbors[u]) if u < v]

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    @cached_property
    def adjacency_mask(self) -> tuple[int, ...]:
        """Bitmask of the neighbourhood of each vertex (bit w set iff w ~ v)."""
        return tuple(sum(1 << w for w in nb) for nb in self.neighbors)

    def simplices(self, k: int) -> list[Simplex]:
        """Cached lexicographic list of k-simplices (see enumerate_k_simplices)."""
        key = ("S", k)
        if key not in self._cache:
            self._cache[key] = _enumerate_cliques(self, k + 1)
        return self._cache[key]

    def simplex_index(self, k: int) -> dict[Simplex, int]:
        key = ("idx", k)
        if key not in self._cache:
            self._cache[key] = {s: i for i, s in enumerate(self.simplices(k))}
        return self._cache[key]


def complete_multipartite(spec: MultipartiteSpec) -> Graph:
    """Complete multipartite graph; cluster ``c`` holds vertices ``c*m .. c*m+m-1``."""
    m = spec.cluster_size
    n = spec.clusters * m
    nb = tuple(
        frozenset(w for w in range(n) if w // m != v // m) for v in range(n)
    )
    return Graph(n, nb, multipartite=spec)


def is_clique(g: Graph, vertices: Sequence[int]) -> bool:
    for v in vertices:
        if not 0 <= v < g.n:
            raise IndexError(f"vertex {v} out of range for n={g.n}")
    return all(g.adjacent(u, v) for u, v in combinations(vertices, 2))


def _enumerate_cliques(g: Graph, size: int) -> list[Simplex]:
    # Extend cliques only by larger neighbours, so output is lexicographic.
    out: list[Simplex] = []

    def grow(clique: list[int], candidates: list[int]):
        if len(clique) == size:
            out.append(tuple(clique))
            return
        need = size - len(clique)
        for i, v in enumerate(candidates):
            if len(candidates) - i < need:
                break
            nb = g.neighbors[v]
            grow(clique + [v], [w for w in candidates[i + 1:] if w in nb])

    grow([], list(range(g.n)))
    return out


def enumerate_k_simplices(g: Graph, k: int) -> list[Simplex]:
    """All (k+1)-cliques of ``g`` in lexicographic order."""
    if not 0 <= k < g.n:
        raise ValueError(f"k={k} out of range for a graph on {g.n} vertices")
    return list(g.simplices(k))


def _closed_form_applies(g: Graph, k: int) -> bool:
    return g.multipartite is not None and g.multipartite.clusters == k + 1


def sample_k_simplex(g: Graph, k: int, rng: np.random.Generator) -> Simplex:
    """Draw a k-simplex uniformly at random.

    For a complete (k+1)-partite graph this picks one vertex per cluster;
    otherwise it draws from the enumerated list.
    """
    if _closed_form_applies(g, k):
        m = g.multipartite.cluster_size
        picks = rng.integers(0, m, size=k + 1)
        return tuple(int(c * m + p) for c, p in enumerate(picks))
    simplices = g.simplices(k) if 0 <= k < g.n else []
    if not simplices:
        raise ValueError(f"graph has no {k}-simplices")
    return simplices[int(rng.integers(0, len(simplices)))]


def sample_k_simplex_indices(g: Graph, k: int, rng: np.random.Generator, size: int) -> np.ndarray:
    """Vectorised sampler returning lexicographic ranks of ``size`` uniform k-simplices."""
    if _closed_form_applies(g, k):
        m = g.multipartite.cluster_size
        picks = rng.integers(0, m, size=(size, k + 1))
        # Cluster-major vertex labelling makes the lex rank a base-m number.
        weights = m ** np.arange(k, -1, -1)
        return picks @ weights
    count = len(g.simplices(k)) if 0 <= k < g.n else 0
    if count == 0:
        raise ValueError(f"graph has no {k}-simplices")
    return rng.integers(0, count, size=size)


def count_multipartite_simplices(spec: MultipartiteSpec, k: int) -> int:
    """|S_k| of a complete multipartite graph: choose k+1 clusters, one vertex each."""
    from math import comb
    return comb(spec.clusters, k + 1) * spec.cluster_size ** (k + 1)


def parse_graph_spec(spec: str) -> Graph:
    """Parse ``multipartite:CxM`` or a path to an edge-list file."""
    m = _MULTIPARTITE_RE.match(spec.strip())
    if m:
        clusters, size = int(m.group(1)), int(m.group(2))
        try:
            return complete_multipartite(MultipartiteSpec(clusters, size))
        except ValueError as exc:
            raise GraphFormatError(str(exc)) from exc
    if spec.startswith("multipartite:"):
        raise GraphFormatError(f"bad multipartite spec {spec!r}; expected multipartite:<C>x<M>")
    return read_edge_list(spec)


def read_edge_list(path: str | Path) -> Graph:
    """Read an ASCII edge list: one ``u v`` pair per line, ``#`` starts a comment.

    The vertex count is one more than the largest index seen. A line holding a
    single integer declares an isolated vertex.
    """
    text = Path(path).read_text()
    edges = []
    n = 0
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        try:
            ints = [int(p) for p in parts]
        except ValueError:
            raise GraphFormatError(f"{path}:{lineno}: expected integers, got {raw!r}") from None
        if len(ints) == 1 and ints[0] >= 0:
            n = max(n, ints[0] + 1)
            continue
        if len(ints) != 2 or min(ints) < 0:
            raise GraphFormatError(f"{path}:{lineno}: expected 'u v', got {raw!r}")
        u, v = ints
        if u == v:
            raise GraphFormatError(f"{path}:{lineno}: self-loop {u}")
        edges.append((u, v))
        n = max(n, u + 1, v + 1)
    if n == 0:
        raise GraphFormatError(f"{path}: no vertices")
    return Graph.from_edges(n, edges)


def write_edge_list(g: Graph, path: str | Path) -> None:
    lines = [f"{u} {v}" for u, v in g.edges]
    if not g.edges or max(max(e) for e in g.edges) < g.n - 1:
        lines.append(str(g.n - 1))
    Path(path).write_text("\n".join(lines) + "\n")


def random_graph(n: int, p: float, rng: np.random.Generator) -> Graph:
    """Erdos-Renyi G(n, p)."""
    edges = [(u, v) for u, v in combinations(range(n), 2) if rng.random() < p]
    return Graph.from_edges(n, edges)


BENCHMARKS: dict[str, tuple[str, int]] = {
    "graph-1": ("multipartite:2x3", 1),
    "graph-2": ("multipartite:2x4", 1),
    "graph-3": ("multipartite:3x3", 2),
    "graph-4": ("multipartite:3x4", 2),
}
