"""Timing of the compiled kernels against the numpy fallback."""

from __future__ import annotations

import random
import time

import numpy as np

from . import _kernels_py, kernels
from .graph import WeightedGraph


def random_graph(n: int, p: float, seed: int, weighted: bool = False) -> WeightedGraph:
    rng = random.Random(seed)
    edges = [
        (u, v, rng.randint(1, 9) if weighted else 1)
        for u in range(n)
        for v in range(u + 1, n)
        if rng.random() < p
    ]
    return WeightedGraph.from_edges(n, edges)


def _best(fn, repeat: int) -> float:
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def run_benchmark(n: int = 16, repeat: int = 3, seed: int = 0) -> list[dict]:
    g = random_graph(n, 0.4, seed, weighted=True)
    _, w = kernels.weight_matrix(g)
    perms = np.argsort(np.random.default_rng(seed).random((20000, n)), axis=1).astype(np.int64)
    mods = {"python": _kernels_py}
    if kernels._compiled is not None:
        mods["compiled"] = kernels._compiled
    rows = []
    for backend, mod in mods.items():
        v = mod.subset_values(n, w)
        for name, fn in (
            ("subset_values", lambda: mod.subset_values(n, w)),
            ("marginal_sums", lambda: mod.marginal_sums(n, v)),
            ("permutation_marginal_sums", lambda: mod.permutation_marginal_sums(n, perms, v)),
        ):
            rows.append({"kernel": name, "backend": backend, "n": n, "seconds": _best(fn, repeat)})
    return rows
