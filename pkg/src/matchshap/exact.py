"""Exact Shapley values of matching games.

All results are :class:`fractions.Fraction`. The brute-force path builds the
full coalition-value table once and sums marginal contributions grouped by
coalition size, so each player costs ``O(2**n)`` table lookups and the
factorial weights are applied ``n`` times per player in big-integer arithmetic.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Mapping, Sequence

import numpy as np

from . import config, kernels
from .graph import Coalition, WeightedGraph, connected_components
from .matching import coalition_value

__all__ = [
    "InstanceTooLarge",
    "MethodNotApplicable",
    "RawShapleyVector",
    "ShapleyVector",
    "factorials",
    "is_pivotal",
    "is_zero_shapley",
    "raw_shapley",
    "shapley_auto",
    "shapley_brute_force",
    "shapley_by_components",
    "shapley_from_pivotal_counts",
    "shapley_permutation_oracle",
]


class InstanceTooLarge(ValueError):
    """No exact method applies at this size."""


class MethodNotApplicable(ValueError):
    """The requested exact method does not apply to this graph."""


@dataclass(frozen=True)
class ShapleyVector:
    values: tuple[Fraction, ...]
    methods: tuple[str, ...] = ()

    def __getitem__(self, i: int) -> Fraction:
        return self.values[i]

    def __len__(self) -> int:
        return len(self.values)

    def __iter__(self):
        return iter(self.values)

    def raw(self) -> RawShapleyVector:
        f = math.factorial(len(self.values))
        return RawShapleyVector(tuple(x * f for x in self.values))


@dataclass(frozen=True)
class RawShapleyVector:
    """``n!`` times the Shapley vector; integers for unweighted games."""

    values: tuple[Fraction, ...]

    def __getitem__(self, i: int) -> Fraction:
        return self.values[i]

    def __len__(self) -> int:
        return len(self.values)

    def normalized(self) -> ShapleyVector:
        f = math.factorial(len(self.values))
        return ShapleyVector(tuple(x / f for x in self.values))


@lru_cache(maxsize=None)
def factorials(n: int) -> tuple[int, ...]:
    out = [1]
    for k in range(1, n + 1):
        out.append(out[-1] * k)
    return tuple(out)


def _too_large(n: int, bound: int) -> InstanceTooLarge:
    return InstanceTooLarge(
        f"instance too large for exact computation: {n} vertices exceeds the "
        f"brute-force bound {bound} and no polynomial method applies; "
        f"use the FPRAS (`matchshap approx`) instead"
    )


def _raw_scaled(g: WeightedGraph, backend: str | None) -> tuple[int, list[int]]:
    n = g.n
    scale, v = kernels.subset_value_table(g, backend)
    d = kernels.marginal_sums(n, v, backend)
    fact = factorials(n)
    coef = [fact[s] * fact[n - s - 1] for s in range(n)]
    raws = [sum(coef[s] * int(d[i, s]) for s in range(n)) for i in range(n)]
    return scale, raws


def raw_shapley(g: WeightedGraph, backend: str | None = None) -> RawShapleyVector:
    """Raw Shapley values by direct summation over coalitions (brute force)."""
    bound = config.max_brute_n()
    if g.n > bound:
        raise _too_large(g.n, bound)
    if g.n == 0:
        return RawShapleyVector(())
    scale, raws = _raw_scaled(g, backend)
    return RawShapleyVector(tuple(Fraction(r, scale) for r in raws))


def shapley_brute_force(g: WeightedGraph, backend: str | None = None) -> ShapleyVector:
    bound = config.max_brute_n()
    if g.n > bound:
        raise _too_large(g.n, bound)
    if g.n == 0:
        return ShapleyVector((), ())
    scale, raws = _raw_scaled(g, backend)
    denom = scale * factorials(g.n)[g.n]
    return ShapleyVector(
        tuple(Fraction(r, denom) for r in raws), ("bruteforce",) * g.n
    )


@lru_cache(maxsize=None)
def _all_permutations(n: int) -> np.ndarray:
    arr = np.array(list(itertools.permutations(range(n))), dtype=np.int64)
    arr.flags.writeable = False
    return arr.reshape(-1, n)


def shapley_permutation_oracle(g: WeightedGraph, backend: str | None = None) -> ShapleyVector:
    """Average marginal contribution over all ``n!`` orderings. Test oracle."""
    if g.n > config.PERMUTATION_ORACLE_N:
        raise InstanceTooLarge(
            f"permutation oracle is limited to {config.PERMUTATION_ORACLE_N} vertices"
        )
    if g.n == 0:
        return ShapleyVector((), ())
    scale, v = kernels.subset_value_table(g, backend)
    sums = kernels.permutation_marginal_sums(g.n, _all_permutations(g.n), v, backend)
    denom = scale * factorials(g.n)[g.n]
    return ShapleyVector(
        tuple(Fraction(int(x), denom) for x in sums), ("permutation",) * g.n
    )


def shapley_from_pivotal_counts(eta: Mapping[int, int], n: int, i: int | None = None) -> Fraction:
    """Shapley value of a player from its pivotal-coalition counts per size.

    ``eta[s]`` is the number of size-``s`` coalitions the player is pivotal
    for; only meaningful for unweighted games.
    """
    fact = factorials(n)
    total = sum(fact[s] * fact[n - s - 1] * c for s, c in eta.items() if c)
    return Fraction(total, fact[n])


def _require_unweighted(g: WeightedGraph, what: str) -> None:
    if not g.is_unweighted:
        raise ValueError(f"{what} requires an unweighted graph")


def is_pivotal(g: WeightedGraph, i: int, s: Coalition) -> bool:
    _require_unweighted(g, "pivotality")
    if i in s:
        raise ValueError(f"player {i} is already in the coalition")
    return coalition_value(g, s.add(i)) == coalition_value(g, s) + 1


def is_zero_shapley(g: WeightedGraph, i: int) -> bool:
    return g.degree(i) == 0


def shapley_by_components(
    g: WeightedGraph, per_component_solver: Callable[[WeightedGraph], Sequence[Fraction]]
) -> ShapleyVector:
    """Solve each connected component separately and stitch the results."""
    values: list[Fraction] = [Fraction(0)] * g.n
    methods = ["components"] * g.n
    for block in connected_components(g):
        sub = g.relabel(block)
        res = per_component_solver(sub)
        sub_methods = getattr(res, "methods", ())
        for k, vtx in enumerate(block):
            values[vtx] = Fraction(res[k])
            if sub_methods:
                methods[vtx] = sub_methods[k]
    return ShapleyVector(tuple(values), tuple(methods))


def _auto_component(sub: WeightedGraph) -> ShapleyVector:
    from . import structured

    if sub.n == 1:
        return ShapleyVector((Fraction(0),), ("zero",))
    if sub.is_unweighted and sub.max_degree() <= 2:
        return structured.shapley_degree_two(sub)
    for kind in ("coclique", "clique"):
        if kind == "clique" and not sub.is_unweighted:
            continue
        part = structured.find_modular_decomposition(sub, kind)
        if len(part.modules) <= config.MAX_TYPES:
            return structured.shapley_modular(sub, part)
    bound = config.max_brute_n()
    if sub.n <= bound:
        return shapley_brute_force(sub)
    raise _too_large(sub.n, bound)


def shapley_auto(g: WeightedGraph) -> ShapleyVector:
    """Exact Shapley values using the cheapest applicable method per component.

    Order tried: isolated vertex, degree at most two, clique/coclique
    player types (at most ``MAX_TYPES`` modules), brute force. Never samples.
    """
    return shapley_by_components(g, _auto_component)
