import numpy as np
import pytest

from bettimc.graph import BENCHMARKS, Graph, parse_graph_spec, random_graph

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture(scope="session")
def benchmarks():
    """name -> (graph, k) for the four multipartite benchmarks."""
    return {name: (parse_graph_spec(spec), k) for name, (spec, k) in BENCHMARKS.items()}


@pytest.fixture(scope="session")
def k33():
    return parse_graph_spec("multipartite:2x3")


@pytest.fixture(scope="session")
def k2():
    return Graph.from_edges(2, [(0, 1)])


@pytest.fixture(scope="session")
def random_small_graphs():
    """20 random graphs on 6-8 vertices that have at least one edge."""
    rng = np.random.default_rng(20240611)
    out = []
    while len(out) < 20:
        n = int(rng.integers(6, 9))
        g = random_graph(n, 0.55, rng)
        if g.num_edges:
            out.append(g)
    return out


@pytest.fixture
def record():
    def _record(criterion: str, ok: bool, detail: str = ""):
        ACCEPTANCE_LINES.append(f"[{'PASS' if ok else 'FAIL'}] {criterion}" + (f" -- {detail}" if detail else ""))
        return ok
    return _record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
