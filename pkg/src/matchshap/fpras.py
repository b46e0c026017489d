"""Monte Carlo estimation of (raw) Shapley values by sampling orderings.

Each base run draws ``ceil(4 n^2 (n-1)^2 / eps^2)`` uniform permutations and
averages the player's marginal contribution; players without edges are
answered with 0 and no sampling. Confidence is boosted from 3/4 to ``1-delta``
by taking the median of an odd number of independent runs.

Randomness is keyed by ``(seed, run, block)``: permutations are generated in
fixed-size blocks, each from its own Philox stream, so the estimate does not
depend on how blocks are spread over threads.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from decimal import Decimal, localcontext
from fractions import Fraction
from statistics import median
from typing import Iterable, Sequence

import numpy as np

from . import config, kernels
from .exact import factorials
from .graph import Coalition, WeightedGraph
from .matching import coalition_value

__all__ = [
    "BLOCK_SIZE",
    "SampleEstimate",
    "amplification_runs",
    "approx_all",
    "approx_raw_shapley",
    "approx_shapley",
    "format_decimal",
    "make_rng",
    "marginal_contribution",
    "permutation_block",
    "sample_count",
    "sample_permutation",
]

BLOCK_SIZE = 4096


@dataclass(frozen=True)
class SampleEstimate:
    player: int
    estimate: Fraction
    samples_used: int
    epsilon: Fraction
    seed: int
    mode: str
    runs: int = 1

    def decimal(self, digits: int = 12) -> str:
        return format_decimal(self.estimate, digits)


def format_decimal(x: Fraction, digits: int = 12) -> str:
    if x == 0:
        return "0"
    with localcontext() as ctx:
        ctx.prec = digits
        d = Decimal(x.numerator) / Decimal(x.denominator)
    return format(d, f".{digits}g")


def _as_fraction(x, name: str) -> Fraction:
    try:
        return Fraction(x)
    except (ValueError, TypeError, ZeroDivisionError):
        raise ValueError(f"{name} must be a rational number, got {x!r}") from None


def sample_count(n: int, epsilon) -> int:
    eps = _as_fraction(epsilon, "epsilon")
    if n < 2:
        raise ValueError("sampling needs at least two players")
    if eps <= 0:
        raise ValueError("epsilon must be positive")
    return math.ceil(Fraction(4 * n * n * (n - 1) ** 2) / (eps * eps))


def amplification_runs(delta) -> int:
    """Number of base runs whose median fails with probability at most ``delta``."""
    d = _as_fraction(delta, "delta")
    if not 0 < d < 1:
        raise ValueError("delta must lie strictly between 0 and 1")
    if d >= Fraction(1, 4):
        return 1
    m = math.ceil(8 * math.log(1 / d))
    return m if m % 2 else m + 1


def make_rng(seed: int, *stream: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(np.random.SeedSequence([seed, *stream])))


def sample_permutation(n: int, rng: np.random.Generator) -> list[int]:
    return [int(x) for x in rng.permutation(n)]


def permutation_block(n: int, seed: int, run: int, block: int, rows: int) -> np.ndarray:
    """``rows`` independent uniform permutations of ``0..n-1`` for one block."""
    base = np.tile(np.arange(n, dtype=np.int64), (rows, 1))
    if n < 2:
        return base
    return make_rng(seed, run, block).permuted(base, axis=1)


def marginal_contribution(g: WeightedGraph, i: int, sigma: Sequence[int]) -> Fraction:
    pos = list(sigma).index(i)
    before = Coalition.of(g.n, sigma[:pos])
    return coalition_value(g, before.add(i)) - coalition_value(g, before)


def _block_sums_table(g: WeightedGraph, v: np.ndarray, seed: int, run: int, block: int, rows: int):
    perms = permutation_block(g.n, seed, run, block, rows)
    return [int(x) for x in kernels.permutation_marginal_sums(g.n, perms, v)]


def _block_sums_direct(g: WeightedGraph, scale: int, seed: int, run: int, block: int, rows: int):
    # one matching solve per prefix; scaled to integers like the table path
    perms = permutation_block(g.n, seed, run, block, rows)
    acc = [0] * g.n
    for row in perms:
        mask, prev = 0, 0
        for p in row:
            mask |= 1 << int(p)
            cur = int(coalition_value(g, Coalition(mask, g.n)) * scale)
            acc[p] += cur - prev
            prev = cur
    return acc


def _run_sums(g: WeightedGraph, samples: int, seed: int, run: int, threads: int) -> tuple[int, list[int]]:
    """Scaled per-player sums of marginal contributions over one run's samples."""
    blocks = [
        (b, min(BLOCK_SIZE, samples - b * BLOCK_SIZE))
        for b in range(-(-samples // BLOCK_SIZE))
    ]
    if g.n <= config.max_brute_n():
        scale, v = kernels.subset_value_table(g)

        def work(job):
            return _block_sums_table(g, v, seed, run, *job)
    else:
        scale = g.integer_weights[0]

        def work(job):
            return _block_sums_direct(g, scale, seed, run, *job)

    if threads > 1 and len(blocks) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(work, blocks))
    else:
        parts = [work(job) for job in blocks]
    totals = [sum(col) for col in zip(*parts)]
    return scale, totals


def approx_all(
    g: WeightedGraph,
    epsilon,
    delta=Fraction(1, 4),
    seed: int = 0,
    threads: int = 1,
    raw: bool = False,
    players: Iterable[int] | None = None,
) -> list[SampleEstimate]:
    """Estimates for several players, sharing each sampled ordering among them.

    Every player still sees i.i.d. uniform orderings, so the per-player
    guarantee is the same as running them one at a time.
    """
    eps = _as_fraction(epsilon, "epsilon")
    if eps <= 0:
        raise ValueError("epsilon must be positive")
    runs = amplification_runs(delta)
    n = g.n
    wanted = list(range(n)) if players is None else list(players)
    for i in wanted:
        if not 0 <= i < n:
            raise ValueError(f"player {i} out of range 0..{n - 1}")
    mode = "raw" if raw else "normalized"
    active = [i for i in wanted if g.degree(i) > 0]
    per_run: list[list[Fraction]] = []
    samples = 0
    if active:
        samples = sample_count(n, eps)
        fact_n = factorials(n)[n]
        for r in range(runs):
            scale, totals = _run_sums(g, samples, seed, r, threads)
            per_run.append([Fraction(t * fact_n, samples * scale) for t in totals])
    out = []
    for i in wanted:
        if g.degree(i) == 0:
            out.append(SampleEstimate(i, Fraction(0), 0, eps, seed, mode, runs))
            continue
        est = median(run[i] for run in per_run)
        if not raw:
            est = est / factorials(n)[n]
        out.append(SampleEstimate(i, est, samples * runs, eps, seed, mode, runs))
    return out


def approx_raw_shapley(
    g: WeightedGraph, i: int, epsilon, seed: int = 0, threads: int = 1
) -> SampleEstimate:
    """One base run: within a factor ``1 + eps`` of ``kappa_i`` with probability >= 3/4."""
    return approx_all(g, epsilon, Fraction(1, 4), seed, threads, raw=True, players=[i])[0]


def approx_shapley(
    g: WeightedGraph, i: int, epsilon, delta=Fraction(1, 4), seed: int = 0, threads: int = 1
) -> SampleEstimate:
    return approx_all(g, epsilon, delta, seed, threads, raw=False, players=[i])[0]
