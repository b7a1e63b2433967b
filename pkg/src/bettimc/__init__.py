"""Monte Carlo estimation of normalised Betti numbers of clique complexes."""
from .algorithms import (
    ALGORITHMS,
    BneResult,
    ShotPlan,
    cbne_chebyshev,
    cbne_power,
    make_plan,
    qbne_chebyshev,
    qbne_power,
)
from .bounds import BoundReport, bound
from .graph import BENCHMARKS, Graph, MultipartiteSpec, complete_multipartite, parse_graph_spec
from .oracle import ComplexProfile, exact_power_trace, profile

__all__ = [
    "ALGORITHMS", "BENCHMARKS", "BneResult", "BoundReport", "ComplexProfile", "Graph",
    "MultipartiteSpec", "ShotPlan", "bound", "cbne_chebyshev", "cbne_power",
    "complete_multipartite", "exact_power_trace", "make_plan", "parse_graph_spec",
    "profile", "qbne_chebyshev", "qbne_power",
]
