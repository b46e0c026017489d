"""Backend selection for the hot loops.

The compiled Cython module is used when it imports and the numbers fit in
int64; otherwise the numpy fallback runs (with Python ints if needed). Set
``MATCHSHAP_PURE_PYTHON=1`` to force the fallback at import time.
"""

from __future__ import annotations

import os
from functools import lru_cache

import numpy as np

from . import _kernels_py
from .graph import WeightedGraph

try:
    if os.environ.get("MATCHSHAP_PURE_PYTHON", "") not in ("", "0"):
        raise ImportError("compiled kernels disabled by MATCHSHAP_PURE_PYTHON")
    from . import _kernels as _compiled
except ImportError:
    _compiled = None

BACKEND = "compiled" if _compiled is not None else "python"
BACKENDS = ("compiled", "python") if _compiled is not None else ("python",)

# 2**26 int64 entries is 512 MiB; larger tables are refused outright.
MAX_TABLE_N = 26
_SAFE = 1 << 62


def _module(backend: str | None, dtype):
    backend = backend or BACKEND
    if backend == "compiled":
        if _compiled is None:
            raise RuntimeError("compiled kernels are not available")
        if dtype == np.int64:
            return _compiled
    return _kernels_py


def weight_matrix(g: WeightedGraph) -> tuple[int, np.ndarray]:
    """``(scale, W)`` with ``W[u, v] = scale * w(u, v)`` as integers, 0 for non-edges.

    ``W`` is int64 when every sum the kernels form stays below 2**62,
    otherwise an object array of Python ints.
    """
    scale, edges = g.integer_weights
    total = sum(w for _, _, w in edges)
    dtype = np.int64 if total << g.n < _SAFE else object
    w = np.zeros((g.n, g.n), dtype=dtype)
    for u, v, x in edges:
        w[u, v] = x
        w[v, u] = x
    return scale, w


@lru_cache(maxsize=16)
def subset_value_table(g: WeightedGraph, backend: str | None = None) -> tuple[int, np.ndarray]:
    """``(scale, v)`` where ``v[mask] / scale`` is the matching value of coalition ``mask``."""
    if g.n > MAX_TABLE_N:
        raise ValueError(f"subset table for {g.n} vertices exceeds limit {MAX_TABLE_N}")
    scale, w = weight_matrix(g)
    v = _module(backend, w.dtype).subset_values(g.n, w)
    v.flags.writeable = False
    return scale, v


def marginal_sums(n: int, v: np.ndarray, backend: str | None = None) -> np.ndarray:
    return _module(backend, v.dtype).marginal_sums(n, v)


def permutation_marginal_sums(
    n: int, perms: np.ndarray, v: np.ndarray, backend: str | None = None
) -> np.ndarray:
    perms = np.ascontiguousarray(perms, dtype=np.int64)
    if v.dtype == np.int64 and len(perms) and int(np.abs(v).max()) * len(perms) >= _SAFE:
        v = v.astype(object)
    return _module(backend, v.dtype).permutation_marginal_sums(n, perms, v)
