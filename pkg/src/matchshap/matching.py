"""Coalition values of the matching game.

``v(S)`` is the weight of a maximum-weight matching of the subgraph induced
by ``S``. Small graphs go through a subset dynamic program (one table for all
``2**n`` coalitions, see :mod:`matchshap.kernels`); larger ones through the
blossom algorithm in networkx on integer-scaled weights, so every value is exact.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import networkx as nx

from . import config
from .graph import Coalition, WeightedGraph
from .kernels import subset_value_table

__all__ = [
    "Matching",
    "augment",
    "coalition_value",
    "find_augmenting_path",
    "is_perfectly_matchable",
    "max_weight_matching",
]


@dataclass(frozen=True)
class Matching:
    edges: tuple[tuple[int, int], ...]
    total_weight: Fraction

    def __len__(self) -> int:
        return len(self.edges)

    def mate(self, n: int) -> list[int]:
        m = [-1] * n
        for u, v in self.edges:
            m[u], m[v] = v, u
        return m


def _blossom(g: WeightedGraph, maxcardinality: bool = False) -> set[tuple[int, int]]:
    _, int_edges = g.integer_weights
    h = nx.Graph()
    h.add_nodes_from(range(g.n))
    h.add_weighted_edges_from(int_edges)
    return {(min(u, v), max(u, v)) for u, v in nx.max_weight_matching(h, maxcardinality)}


def _lexmin_witness(g: WeightedGraph, v, mask: int) -> list[tuple[int, int]]:
    # lowest vertex matched to its smallest feasible partner gives the
    # lexicographically smallest optimal edge list
    scale, int_edges = g.integer_weights
    wt = {}
    for a, b, x in int_edges:
        wt[a, b] = x
        wt[b, a] = x
    out = []
    while mask:
        low = (mask & -mask).bit_length() - 1
        rest = mask ^ (1 << low)
        target = int(v[mask])
        for j in sorted(g.adjacency[low]):
            if rest >> j & 1 and wt[low, j] + int(v[rest ^ (1 << j)]) == target:
                out.append((low, j))
                mask = rest ^ (1 << j)
                break
        else:
            mask = rest
    return out


def max_weight_matching(g: WeightedGraph) -> Matching:
    """Exact maximum-weight matching.

    Ties are broken towards the lexicographically smallest sorted edge list
    when the subset DP is used (``n <= MATCHING_DP_N``).
    """
    if g.n <= config.MATCHING_DP_N:
        _, v = subset_value_table(g)
        edges = _lexmin_witness(g, v, (1 << g.n) - 1)
    else:
        edges = sorted(_blossom(g))
    total = sum((g.adjacency[u][w] for u, w in edges), Fraction(0))
    return Matching(tuple(edges), total)


def coalition_value(g: WeightedGraph, s: Coalition) -> Fraction:
    if s.universe_size != g.n:
        raise ValueError("coalition universe does not match graph")
    if not s.members:
        return Fraction(0)
    if g.n <= config.max_brute_n():
        scale, v = subset_value_table(g)
        return Fraction(int(v[s.members]), scale)
    sub = g.relabel(list(s))
    return max_weight_matching(sub).total_weight


@lru_cache(maxsize=16)
def as_unweighted(g: WeightedGraph) -> WeightedGraph:
    if g.is_unweighted:
        return g
    return WeightedGraph.from_edges(g.n, [(u, v) for u, v, _ in g.edges])


def is_perfectly_matchable(g: WeightedGraph, s: Coalition) -> bool:
    """Whether ``G(s)`` has a matching covering all of ``s`` (weights ignored).

    The empty coalition counts as perfectly matchable.
    """
    if s.universe_size != g.n:
        raise ValueError("coalition universe does not match graph")
    size = len(s)
    if size % 2:
        return False
    if size == 0:
        return True
    u = as_unweighted(g)
    if g.n <= config.max_brute_n():
        _, v = subset_value_table(u)
        return int(v[s.members]) * 2 == size
    return len(_blossom(u.relabel(list(s)), maxcardinality=True)) * 2 == size


def find_augmenting_path(g: WeightedGraph, m: Matching) -> list[int] | None:
    """Augmenting path for ``m`` as a vertex list between two exposed vertices.

    Edmonds' search with blossom shrinking, rooted at each exposed vertex in
    increasing order; weights are ignored. Returns ``None`` iff ``m`` has
    maximum cardinality.
    """
    n = g.n
    mate = m.mate(n)
    for u, v in m.edges:
        if g.weight(u, v) is None:
            raise ValueError(f"matched pair ({u}, {v}) is not an edge")
    adj = [sorted(nb) for nb in g.adjacency]
    for root in range(n):
        if mate[root] == -1:
            path = _search(adj, mate, root)
            if path is not None:
                return path
    return None


def _search(adj: list[list[int]], mate: list[int], root: int) -> list[int] | None:
    n = len(adj)
    parent = [-1] * n
    base = list(range(n))
    used = [False] * n
    used[root] = True
    queue = deque([root])

    def lca(a: int, b: int) -> int:
        seen = [False] * n
        while True:
            a = base[a]
            seen[a] = True
            if mate[a] == -1:
                break
            a = parent[mate[a]]
        while True:
            b = base[b]
            if seen[b]:
                return b
            b = parent[mate[b]]

    def mark(v: int, b: int, child: int, blossom: list[bool]) -> None:
        while base[v] != b:
            blossom[base[v]] = blossom[base[mate[v]]] = True
            parent[v] = child
            child = mate[v]
            v = parent[mate[v]]

    while queue:
        v = queue.popleft()
        for to in adj[v]:
            if base[v] == base[to] or mate[v] == to:
                continue
            if to == root or (mate[to] != -1 and parent[mate[to]] != -1):
                cur = lca(v, to)
                blossom = [False] * n
                mark(v, cur, to, blossom)
                mark(to, cur, v, blossom)
                for i in range(n):
                    if blossom[base[i]]:
                        base[i] = cur
                        if not used[i]:
                            used[i] = True
                            queue.append(i)
            elif parent[to] == -1:
                parent[to] = v
                if mate[to] == -1:
                    path = []
                    x = to
                    while x != -1:
                        px = parent[x]
                        path += [x, px]
                        x = mate[px]
                    path.reverse()
                    return path
                used[mate[to]] = True
                queue.append(mate[to])
    return None


def augment(m: Matching, path: list[int], g: WeightedGraph) -> Matching:
    """Flip matched/unmatched edges along ``path``."""
    edges = {tuple(e) for e in m.edges}
    for a, b in zip(path, path[1:]):
        e = (min(a, b), max(a, b))
        edges.symmetric_difference_update({e})
    new = tuple(sorted(edges))
    return Matching(new, sum((g.adjacency[u][v] for u, v in new), Fraction(0)))
