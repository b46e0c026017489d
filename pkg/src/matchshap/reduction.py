"""Matchable-subset counts recovered from Shapley values.

A base graph ``G`` on ``n`` vertices gets a universal vertex ``y_0`` and a
pendant path ``y_1 .. y_i``. The raw Shapley value of the tail end ``y_i`` is
an affine function of the counts ``alpha_k`` (size-``k`` vertex sets of ``G``
with a perfect matching), with coefficients ``(k+i)! (n-k)!``. Doing this for
``i = 0..n`` gives a nonsingular square system, which is solved exactly here
and compared with direct enumeration.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from . import config, kernels
from ._kernels_py import popcounts
from .exact import factorials, raw_shapley
from .graph import WeightedGraph
from .linalg import determinant, solve
from .matching import as_unweighted

__all__ = [
    "AlphaVector",
    "AugmentedGraph",
    "InconsistentShapleyValues",
    "ReductionReport",
    "build_augmented_graph",
    "constant_C",
    "count_matchable_subsets",
    "matchable_counts",
    "pascal_matrix_determinant_check",
    "recover_alpha_from_shapley",
    "reduction_system",
    "verify_reduction",
]


class InconsistentShapleyValues(ValueError):
    """The recovered counts are not integers in ``[0, C(n, k)]``."""


@dataclass(frozen=True)
class AlphaVector:
    alpha: tuple[int, ...]

    @property
    def n(self) -> int:
        return len(self.alpha) - 1

    def complement(self) -> tuple[int, ...]:
        return tuple(math.comb(self.n, k) - a for k, a in enumerate(self.alpha))


@dataclass(frozen=True)
class AugmentedGraph:
    base: WeightedGraph
    tail_length: int
    graph: WeightedGraph

    def y(self, j: int) -> int:
        return self.base.n + j


def build_augmented_graph(g: WeightedGraph, i: int) -> AugmentedGraph:
    """Base vertices keep their ids; ``y_j`` is vertex ``n + j``."""
    if not g.is_unweighted:
        raise ValueError("augmented graphs are built from unweighted graphs")
    if i < 0:
        raise ValueError("tail length must be nonnegative")
    n = g.n
    edges = [(u, v) for u, v, _ in g.edges]
    edges += [(u, n) for u in range(n)]
    edges += [(n + j - 1, n + j) for j in range(1, i + 1)]
    return AugmentedGraph(g, i, WeightedGraph.from_edges(n + i + 1, edges))


def _check_count_size(g: WeightedGraph) -> None:
    if g.n > config.COUNT_MAX_N:
        raise ValueError(
            f"exhaustive counting is limited to {config.COUNT_MAX_N} vertices, got {g.n}"
        )


def matchable_counts(g: WeightedGraph) -> AlphaVector:
    """``alpha_k`` for every ``k = 0..n`` by enumerating all vertex subsets."""
    _check_count_size(g)
    _, v = kernels.subset_value_table(as_unweighted(g))
    pc = popcounts(g.n)
    perfect = 2 * v.astype(np.int64) == pc
    counts = np.bincount(pc[perfect], minlength=g.n + 1)
    return AlphaVector(tuple(int(c) for c in counts))


def count_matchable_subsets(g: WeightedGraph, k: int) -> int:
    if not 0 <= k <= g.n:
        raise ValueError(f"k must lie in 0..{g.n}")
    if k % 2:
        return 0
    return matchable_counts(g).alpha[k]


def constant_C(n: int, i: int) -> int:
    """Weighted count of tail-end pivotal coalitions that miss part of ``y_0..y_{i-1}``."""
    fact = factorials(n + i + 1)
    total = 0
    for k in range(1, i // 2 + 1):
        top = n + i - 2 * k
        for j in range(top + 1):
            total += fact[j + 2 * k - 1] * fact[n + i - j - 2 * k + 1] * math.comb(top, j)
    return total


def reduction_system(
    raw_values: Sequence, n: int
) -> tuple[list[list[int]], list[Fraction]]:
    """Rows ``i = 0..n`` of the system in the single unknown vector ``alpha``.

    Odd rows are already linear in ``alpha``. Even rows are linear in the
    complement counts; substituting ``C(n,k) - alpha_k`` negates them and moves
    a known sum to the right-hand side.
    """
    if len(raw_values) != n + 1:
        raise ValueError(f"expected {n + 1} raw values, got {len(raw_values)}")
    fact = factorials(2 * n)
    matrix, rhs = [], []
    for i in range(n + 1):
        row = [fact[k + i] * fact[n - k] for k in range(n + 1)]
        b = Fraction(raw_values[i]) - constant_C(n, i)
        if i % 2 == 0:
            b = b - sum(c * math.comb(n, k) for k, c in enumerate(row))
            row = [-c for c in row]
        matrix.append(row)
        rhs.append(b)
    return matrix, rhs


def recover_alpha_from_shapley(raw_values: Sequence, n: int) -> AlphaVector:
    """Solve for ``alpha_0..alpha_n`` given the raw tail-end values ``kappa_{y_i}(G_i)``."""
    matrix, rhs = reduction_system(raw_values, n)
    sol = solve(matrix, rhs)
    alpha = []
    for k, x in enumerate(sol):
        if x.denominator != 1 or not 0 <= x <= math.comb(n, k):
            raise InconsistentShapleyValues(f"alpha_{k} = {x} is not a valid count")
        alpha.append(int(x))
    return AlphaVector(tuple(alpha))


@dataclass(frozen=True)
class ReductionReport:
    n: int
    raw_values: tuple[Fraction, ...]
    recovered: tuple[int, ...]
    counted: tuple[int, ...]
    error: str | None = None

    @property
    def agreement(self) -> tuple[bool, ...]:
        if len(self.recovered) != len(self.counted):
            return tuple(False for _ in self.counted)
        return tuple(a == b for a, b in zip(self.recovered, self.counted))

    @property
    def ok(self) -> bool:
        return self.error is None and all(self.agreement)


def _tail_raw(g: WeightedGraph, i: int) -> Fraction:
    aug = build_augmented_graph(g, i)
    return raw_shapley(aug.graph)[aug.y(i)]


def verify_reduction(g: WeightedGraph, threads: int = 1) -> ReductionReport:
    """Recover ``alpha`` from Shapley values of ``G_0..G_n`` and compare with enumeration."""
    if not g.is_unweighted:
        raise ValueError("the reduction is defined for unweighted graphs")
    if g.n > config.REDUCTION_MAX_N:
        raise ValueError(
            f"reduction check is limited to {config.REDUCTION_MAX_N} vertices, got {g.n}"
        )
    n = g.n
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            raws = list(pool.map(lambda i: _tail_raw(g, i), range(n + 1)))
    else:
        raws = [_tail_raw(g, i) for i in range(n + 1)]
    counted = matchable_counts(g).alpha
    try:
        recovered = recover_alpha_from_shapley(raws, n).alpha
        error = None
    except (InconsistentShapleyValues, ArithmeticError) as exc:
        recovered, error = (), str(exc)
    return ReductionReport(n, tuple(raws), recovered, counted, error)


def pascal_matrix_determinant_check(n: int) -> int:
    """Determinant of ``B[i][j] = (i+j)!`` for ``0 <= i, j <= n``, checked
    against the product of squared factorials."""
    if n > 30:
        raise ValueError("n must be at most 30")
    fact = factorials(2 * n)
    det = determinant([[fact[i + j] for j in range(n + 1)] for i in range(n + 1)])
    expected = math.prod(fact[i] ** 2 for i in range(n + 1))
    if det != expected:
        raise ArithmeticError(f"det = {det}, expected {expected}")
    return det
