from __future__ import annotations

import itertools
import math
import random
from fractions import Fraction

import pytest

from matchshap.graph import WeightedGraph
from matchshap.kernels import BACKENDS


def path(n: int) -> WeightedGraph:
    return WeightedGraph.from_edges(n, [(i, i + 1) for i in range(n - 1)])


def cycle(n: int) -> WeightedGraph:
    return WeightedGraph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def complete(n: int) -> WeightedGraph:
    return WeightedGraph.from_edges(n, itertools.combinations(range(n), 2))


def complete_multipartite(*sizes: int) -> WeightedGraph:
    parts, start = [], 0
    for s in sizes:
        parts.append(range(start, start + s))
        start += s
    edges = [
        (u, v)
        for a, b in itertools.combinations(range(len(parts)), 2)
        for u in parts[a]
        for v in parts[b]
    ]
    return WeightedGraph.from_edges(start, edges)


def disjoint_union(*graphs: WeightedGraph) -> WeightedGraph:
    edges, off = [], 0
    for g in graphs:
        edges += [(u + off, v + off, w) for u, v, w in g.edges]
        off += g.n
    return WeightedGraph.from_edges(off, edges)


def all_graphs(n: int):
    """Every labeled simple graph on ``n`` vertices."""
    pairs = list(itertools.combinations(range(n), 2))
    for mask in range(1 << len(pairs)):
        yield WeightedGraph.from_edges(n, [p for k, p in enumerate(pairs) if mask >> k & 1])


WEIGHTS = [Fraction(1, 2), Fraction(1), Fraction(3, 2), Fraction(2), Fraction(7, 3), Fraction(5)]


def random_graph(rng: random.Random, n: int, p: float = 0.5, weighted: bool = True) -> WeightedGraph:
    edges = [
        (u, v, rng.choice(WEIGHTS) if weighted else 1)
        for u, v in itertools.combinations(range(n), 2)
        if rng.random() < p
    ]
    return WeightedGraph.from_edges(n, edges)


# --- independent oracles: plain Python, no shared code with the library ---


def naive_matching_value(g: WeightedGraph, members) -> Fraction:
    """Max over all matchings, enumerated by branching on the lowest vertex."""
    adj = {u: {} for u in members}
    for u, v, w in g.edges:
        if u in adj and v in adj:
            adj[u][v] = w
            adj[v][u] = w

    def best(left: frozenset) -> Fraction:
        if not left:
            return Fraction(0)
        u = min(left)
        rest = left - {u}
        out = best(rest)
        for v, w in adj[u].items():
            if v in rest:
                out = max(out, w + best(rest - {v}))
        return out

    return best(frozenset(adj))


def naive_shapley(g: WeightedGraph) -> list[Fraction]:
    """Coalition-sum Shapley formula over recursively enumerated matching values."""
    n = g.n
    cache = {}

    def v(s):
        key = frozenset(s)
        if key not in cache:
            cache[key] = naive_matching_value(g, key)
        return cache[key]

    out = []
    for i in range(n):
        others = [j for j in range(n) if j != i]
        total = Fraction(0)
        for r in range(n):
            for s in itertools.combinations(others, r):
                gain = v(set(s) | {i}) - v(s)
                total += math.factorial(r) * math.factorial(n - r - 1) * gain
        out.append(total / math.factorial(n))
    return out


def symmetric_pairs(g: WeightedGraph):
    for i, j in itertools.combinations(range(g.n), 2):
        ni = {k: w for k, w in g.adjacency[i].items() if k != j}
        nj = {k: w for k, w in g.adjacency[j].items() if k != i}
        if ni == nj:
            yield i, j


@pytest.fixture(params=BACKENDS)
def backend(request):
    return request.param


# --- acceptance summary -------------------------------------------------

_CRITERIA: dict[int, list[str]] = {}


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.outcome != "passed"):
        return
    marker = report.user_properties and dict(report.user_properties).get("criterion")
    if marker:
        _CRITERIA.setdefault(marker[0], [marker[1], "PASS"])
        if report.outcome != "passed":
            _CRITERIA[marker[0]][1] = "FAIL"


@pytest.hookimpl(tryfirst=True)
def pytest_runtest_setup(item):
    m = item.get_closest_marker("criterion")
    if m:
        item.user_properties.append(("criterion", (m.args[0], m.args[1])))


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_CRITERIA):
        title, status = _CRITERIA[n]
        terminalreporter.write_line(f"criterion {n}: {status}  {title}")
