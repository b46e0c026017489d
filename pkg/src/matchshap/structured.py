"""Polynomial-time exact Shapley values for structured graphs.

Two families:

* maximum degree two: components are paths, cycles and isolated vertices.
  Path values come from counting pivotal coalitions by the lengths of the
  occupied runs directly left and right of the player.
* graphs with few clique or coclique modules: same-module players are
  interchangeable, so the Shapley sum runs over coalition *profiles*
  (how many members of each module are present) instead of coalitions.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Sequence

from . import config
from .exact import (
    MethodNotApplicable,
    ShapleyVector,
    factorials,
    shapley_from_pivotal_counts,
)
from .graph import Coalition, WeightedGraph, complement, connected_components
from .matching import coalition_value

__all__ = [
    "OracleInconsistency",
    "TypePartition",
    "eta_path",
    "find_modular_decomposition",
    "matching_type_oracle",
    "shapley_by_player_types",
    "shapley_cycle",
    "shapley_degree_two",
    "shapley_modular",
    "shapley_path",
]


class OracleInconsistency(RuntimeError):
    pass


# ---------------------------------------------------------------- paths


def _runs_count(n: int, i: int, s: int, left: int, right: int) -> int:
    """Size-``s`` coalitions (not containing ``i``) whose occupied run ending
    at ``i-1`` has exactly ``left`` vertices and the one starting at ``i+1``
    exactly ``right``; the vertex beyond each run, if it exists, is absent."""
    fixed = left + right
    blockers = (i - left - 1 >= 1) + (i + right + 1 <= n)
    free = n - 1 - fixed - blockers
    need = s - fixed
    if need < 0 or need > free:
        return 0
    return math.comb(free, need)


def _eta_left(n: int, i: int, s: int) -> int:
    # i prepends to the segment on its right; gains iff that segment has an odd vertex count
    return sum(_runs_count(n, i, s, 0, r) for r in range(1, n - i + 1, 2))


def _eta_right(n: int, i: int, s: int) -> int:
    return sum(_runs_count(n, i, s, l, 0) for l in range(1, i, 2))


def _eta_connect(n: int, i: int, s: int) -> int:
    # joining two segments fails only when both have an even vertex count
    total = 0
    for l in range(1, i):
        for r in range(1, n - i + 1):
            if l % 2 or r % 2:
                total += _runs_count(n, i, s, l, r)
    return total


def eta_path(n: int, i: int, s: int) -> int:
    """Number of size-``s`` coalitions for which vertex ``i`` of the path
    ``1 - 2 - ... - n`` is pivotal (1-indexed)."""
    if not 1 <= i <= n:
        raise ValueError(f"vertex {i} out of range 1..{n}")
    if not 1 <= s <= n - 1:
        raise ValueError(f"coalition size {s} out of range 1..{n - 1}")
    return _eta_left(n, i, s) + _eta_right(n, i, s) + _eta_connect(n, i, s)


@lru_cache(maxsize=256)
def _path_values(n: int) -> tuple[Fraction, ...]:
    out = []
    for i in range(1, n + 1):
        if i > (n + 1) // 2:
            out.append(out[n - i])
            continue
        eta = {s: eta_path(n, i, s) for s in range(1, n)}
        out.append(shapley_from_pivotal_counts(eta, n, i))
    return tuple(out)


def shapley_path(n: int, i: int) -> Fraction:
    """Shapley value of vertex ``i`` (1-indexed) on the unweighted path with ``n`` vertices."""
    if not 1 <= i <= n:
        raise ValueError(f"vertex {i} out of range 1..{n}")
    return _path_values(n)[i - 1]


def shapley_cycle(n: int) -> Fraction:
    if n < 3:
        raise ValueError("a cycle needs at least 3 vertices")
    return Fraction(n // 2, n)


def shapley_degree_two(g: WeightedGraph) -> ShapleyVector:
    if not g.is_unweighted:
        raise MethodNotApplicable("degree-two method requires an unweighted graph")
    if g.max_degree() > 2:
        bad = next(v for v in range(g.n) if g.degree(v) > 2)
        raise MethodNotApplicable(f"vertex {bad} has degree {g.degree(bad)} > 2")
    values = [Fraction(0)] * g.n
    methods = ["degree2"] * g.n
    for block in connected_components(g):
        size = len(block)
        if size == 1:
            methods[block[0]] = "zero"
            continue
        edge_count = sum(g.degree(v) for v in block) // 2
        if edge_count == size:
            for v in block:
                values[v] = shapley_cycle(size)
            continue
        start = min(v for v in block if g.degree(v) == 1)
        order, prev, cur = [start], -1, start
        while len(order) < size:
            nxt = next(u for u in g.adjacency[cur] if u != prev)
            order.append(nxt)
            prev, cur = cur, nxt
        vals = _path_values(size)
        for pos, v in enumerate(order):
            values[v] = vals[pos]
    return ShapleyVector(tuple(values), tuple(methods))


# ------------------------------------------------------- modules / types


@dataclass(frozen=True)
class TypePartition:
    modules: tuple[tuple[int, ...], ...]
    kind: str

    @property
    def sizes(self) -> tuple[int, ...]:
        return tuple(len(m) for m in self.modules)

    def validate(self, g: WeightedGraph) -> None:
        """Raise ``ValueError`` unless this is a clique/coclique modular decomposition of ``g``."""
        if self.kind not in ("clique", "coclique"):
            raise ValueError(f"unknown module kind {self.kind!r}")
        flat = sorted(v for m in self.modules for v in m)
        if flat != list(range(g.n)):
            raise ValueError("modules do not partition the vertex set")
        for mod in self.modules:
            inside = set(mod)
            profiles = {
                tuple(sorted((u, w) for u, w in g.adjacency[v].items() if u not in inside))
                for v in mod
            }
            if len(profiles) > 1:
                raise ValueError(f"{mod} is not a module")
            inner = {g.weight(a, b) for a, b in itertools.combinations(mod, 2)}
            if self.kind == "coclique" and inner - {None}:
                raise ValueError(f"{mod} is not a coclique")
            if self.kind == "clique" and (None in inner or len(inner) > 1):
                raise ValueError(f"{mod} is not a clique with uniform weight")


def find_modular_decomposition(g: WeightedGraph, kind: str) -> TypePartition:
    """Minimum-cardinality decomposition into modules that are all cocliques
    or all cliques.

    Coclique modules are exactly the classes of vertices with identical
    weighted neighborhoods; clique modules are the coclique modules of the
    complement (unweighted graphs only).
    """
    if kind == "clique":
        if not g.is_unweighted:
            raise MethodNotApplicable("clique decomposition requires an unweighted graph")
        return TypePartition(find_modular_decomposition(complement(g), "coclique").modules, "clique")
    if kind != "coclique":
        raise ValueError(f"unknown module kind {kind!r}")
    classes: dict[tuple, list[int]] = {}
    for v in range(g.n):
        classes.setdefault(tuple(sorted(g.adjacency[v].items())), []).append(v)
    modules = sorted(tuple(c) for c in classes.values())
    return TypePartition(tuple(modules), "coclique")


def shapley_by_player_types(
    value_oracle: Callable[[tuple[int, ...]], Fraction],
    partition: TypePartition,
) -> ShapleyVector:
    """Shapley values when every module is a class of interchangeable players.

    ``value_oracle(profile)`` must return ``v(S)`` for any coalition with
    ``profile[j]`` members from module ``j``. The sum runs over all
    ``prod(m_j + 1)`` profiles, weighting each by the number of coalitions
    realizing it.
    """
    sizes = partition.sizes
    k = len(sizes)
    n = sum(sizes)
    fact = factorials(n)
    profiles = list(itertools.product(*(range(m + 1) for m in sizes)))
    value = {p: Fraction(value_oracle(p)) for p in profiles}
    per_type = []
    for t in range(k):
        total = Fraction(0)
        for p in profiles:
            if p[t] == sizes[t]:
                continue
            bigger = p[:t] + (p[t] + 1,) + p[t + 1 :]
            gain = value[bigger] - value[p]
            if not gain:
                continue
            size = sum(p)
            ways = 1
            for j in range(k):
                ways *= math.comb(sizes[j] - (j == t), p[j])
            total += fact[size] * fact[n - size - 1] * ways * gain
        per_type.append(total / fact[n])
    values = [Fraction(0)] * n
    for t, mod in enumerate(partition.modules):
        for v in mod:
            values[v] = per_type[t]
    return ShapleyVector(tuple(values), (f"modular-{partition.kind}",) * n)


def matching_type_oracle(
    g: WeightedGraph, partition: TypePartition, check: bool = False
) -> Callable[[Sequence[int]], Fraction]:
    """Coalition value of a profile, evaluated on its lowest-indexed realization.

    With ``check=True`` the highest-indexed realization is evaluated too and
    a disagreement raises :class:`OracleInconsistency`.
    """
    mods = [sorted(m) for m in partition.modules]

    def oracle(profile: Sequence[int]) -> Fraction:
        low = Coalition.of(g.n, (v for m, c in zip(mods, profile) for v in m[:c]))
        val = coalition_value(g, low)
        if check:
            high = Coalition.of(
                g.n, (v for m, c in zip(mods, profile) for v in m[len(m) - c :])
            )
            if coalition_value(g, high) != val:
                raise OracleInconsistency(f"profile {tuple(profile)} has two values")
        return val

    return oracle


def shapley_modular(
    g: WeightedGraph, partition: TypePartition | None = None, check: bool = False
) -> ShapleyVector:
    """Player-type DP on the smaller of the coclique/clique decompositions."""
    if partition is None:
        partition = find_modular_decomposition(g, "coclique")
        if g.is_unweighted:
            clique = find_modular_decomposition(g, "clique")
            if len(clique.modules) < len(partition.modules):
                partition = clique
    profiles = math.prod(m + 1 for m in partition.sizes)
    if profiles > config.MAX_PROFILES:
        raise MethodNotApplicable(
            f"{len(partition.modules)} modules give {profiles} coalition profiles "
            f"(limit {config.MAX_PROFILES})"
        )
    return shapley_by_player_types(matching_type_oracle(g, partition, check), partition)
