"""Fallback kernels in numpy. Same contracts as the compiled ``_kernels``.

Unlike the compiled versions these also accept ``dtype=object`` inputs, which
is how values that would overflow int64 are handled.
"""

from __future__ import annotations

import numpy as np


def popcounts(n: int) -> np.ndarray:
    pc = np.zeros(1 << n, dtype=np.int64)
    for b in range(n):
        pc[1 << b : 1 << (b + 1)] = pc[: 1 << b] + 1
    return pc


def subset_values(n: int, weights: np.ndarray) -> np.ndarray:
    """``v[S]`` = max-weight matching value of the subgraph induced by mask ``S``.

    Masks with highest bit ``k`` only reference masks below ``1 << k``, so each
    block of the table is filled with one vectorized pass per neighbor of ``k``.
    """
    v = np.zeros(1 << n, dtype=weights.dtype)
    for k in range(n):
        lower = np.arange(1 << k, dtype=np.int64)
        best = v[: 1 << k].copy()
        for j in range(k):
            w = weights[k, j]
            if w <= 0:
                continue
            has_j = (lower >> j) & 1 == 1
            cand = w + v[lower[has_j] ^ (1 << j)]
            best[has_j] = np.maximum(best[has_j], cand)
        v[1 << k : 1 << (k + 1)] = best
    return v


def marginal_sums(n: int, v: np.ndarray) -> np.ndarray:
    """``d[i, s]`` = sum over ``|S| = s``, ``i not in S`` of ``v[S + i] - v[S]``."""
    pc = popcounts(n)
    masks = np.arange(1 << n, dtype=np.int64)
    d = np.zeros((n, n), dtype=v.dtype)
    for i in range(n):
        without = masks[(masks >> i) & 1 == 0]
        diff = v[without | (1 << i)] - v[without]
        np.add.at(d[i], pc[without], diff)
    return d


def permutation_marginal_sums(n: int, perms: np.ndarray, v: np.ndarray) -> np.ndarray:
    """Per-player sum of marginal contributions over the rows of ``perms``."""
    out = np.zeros(n, dtype=v.dtype)
    if len(perms) == 0:
        return out
    prefix = np.bitwise_or.accumulate(np.left_shift(1, perms), axis=1)
    vals = v[prefix]
    marg = vals.copy()
    marg[:, 1:] -= vals[:, :-1]
    np.add.at(out, perms.ravel(), marg.ravel())
    return out
