"""Acceptance criteria, one group of tests per criterion.

Each test carries a ``criterion`` marker; the terminal summary prints one
PASS/FAIL line per criterion number.
"""

import itertools
import json
import math
import random
import subprocess
import sys
import time
from fractions import Fraction as F

import pytest

from conftest import (
    all_graphs,
    complete_multipartite,
    cycle,
    path,
    random_graph,
    symmetric_pairs,
)
from matchshap import kernels
from matchshap.exact import (
    is_pivotal,
    raw_shapley,
    shapley_auto,
    shapley_brute_force,
    shapley_permutation_oracle,
)
from matchshap.fpras import approx_all, marginal_contribution, sample_count
from matchshap.graph import Coalition, format_graph
from matchshap.matching import is_perfectly_matchable
from matchshap.reduction import build_augmented_graph, pascal_matrix_determinant_check, verify_reduction
from matchshap.structured import (
    eta_path,
    find_modular_decomposition,
    matching_type_oracle,
    shapley_by_player_types,
    shapley_degree_two,
)

criterion = pytest.mark.criterion


def _random_weighted(seed, count, max_n):
    rng = random.Random(seed)
    return [random_graph(rng, rng.randint(1, max_n), rng.random()) for _ in range(count)]


# --- 1 -------------------------------------------------------------------


def _check_axioms(g):
    phi = shapley_auto(g)
    scale, v = kernels.subset_value_table(g)
    n = g.n
    assert sum(phi.values, F(0)) == F(int(v[(1 << n) - 1]), scale)
    assert all(x >= 0 for x in phi.values)
    for i, j in symmetric_pairs(g):
        assert phi[i] == phi[j]
    for i in range(n):
        bit = 1 << i
        solo = int(v[bit])
        dummy = all(
            int(v[m | bit]) - int(v[m]) == solo for m in range(1 << n) if not m & bit
        )
        if dummy:
            assert phi[i] == F(solo, scale)


@criterion(1, "axiom suite (efficiency, symmetry, dummy, nonnegativity)")
def test_c1_axioms():
    start = time.perf_counter()
    for n in range(0, 6):
        for g in all_graphs(n):
            _check_axioms(g)
    for g in _random_weighted(101, 200, 7):
        _check_axioms(g)
    assert time.perf_counter() - start < 300


# --- 2 -------------------------------------------------------------------


@criterion(2, "brute force equals permutation oracle")
@pytest.mark.parametrize("n", range(0, 7))
def test_c2_oracle_equivalence_unweighted(n):
    for g in all_graphs(n):
        assert shapley_brute_force(g).values == shapley_permutation_oracle(g).values


@criterion(2, "brute force equals permutation oracle")
def test_c2_oracle_equivalence_weighted():
    for g in _random_weighted(202, 100, 7):
        assert shapley_brute_force(g).values == shapley_permutation_oracle(g).values


# --- 3 -------------------------------------------------------------------


@criterion(3, "degree-two formulas")
@pytest.mark.parametrize("n", range(2, 13))
def test_c3_eta_path_exhaustive(n):
    g = path(n)
    for i in range(n):
        counts = [0] * n
        for mask in range(1 << n):
            if mask >> i & 1:
                continue
            s = Coalition(mask, n)
            if len(s) and is_pivotal(g, i, s):
                counts[len(s)] += 1
        assert [eta_path(n, i + 1, s) for s in range(1, n)] == counts[1:]


@criterion(3, "degree-two formulas")
def test_c3_degree_two_equals_brute_force():
    for n in range(1, 11):
        assert shapley_degree_two(path(n)).values == shapley_brute_force(path(n)).values
    for n in range(3, 11):
        assert shapley_degree_two(cycle(n)).values == shapley_brute_force(cycle(n)).values
    assert shapley_degree_two(path(3)).values == (F(1, 6), F(2, 3), F(1, 6))
    assert shapley_degree_two(path(4)).values == (F(5, 12), F(7, 12), F(7, 12), F(5, 12))


# --- 4 -------------------------------------------------------------------


def _part_sizes(n, k):
    """Nondecreasing ``k``-tuples of positive integers summing to ``n``."""
    if k == 1:
        yield (n,)
        return
    for first in range(1, n // k + 1):
        for rest in _part_sizes(n - first, k - 1):
            if rest[0] >= first:
                yield (first,) + rest


@criterion(4, "player-type DP on complete multipartite graphs")
def test_c4_complete_multipartite():
    start = time.perf_counter()
    checked = 0
    for n in range(1, 10):
        for k in (1, 2, 3):
            for sizes in _part_sizes(n, k):
                g = complete_multipartite(*sizes)
                part = find_modular_decomposition(g, "coclique")
                assert len(part.modules) == k
                phi = shapley_by_player_types(matching_type_oracle(g, part), part)
                assert phi.values == shapley_brute_force(g).values
                checked += 1
    assert checked > 50
    k23 = complete_multipartite(2, 3)
    part = find_modular_decomposition(k23, "coclique")
    phi = shapley_by_player_types(matching_type_oracle(k23, part), part)
    assert phi.values == (F(13, 20),) * 2 + (F(7, 30),) * 3
    assert time.perf_counter() - start < 120


# --- 5 -------------------------------------------------------------------


@criterion(5, "reduction round trip and determinant identity")
def test_c5_round_trip():
    start = time.perf_counter()
    for n in range(0, 6):
        for g in all_graphs(n):
            report = verify_reduction(g)
            assert report.ok, (format_graph(g), report)
    rng = random.Random(505)
    for _ in range(20):
        g = random_graph(rng, rng.choice((6, 7)), rng.random(), weighted=False)
        report = verify_reduction(g)
        assert report.ok, (format_graph(g), report)
    assert time.perf_counter() - start < 600


@criterion(5, "reduction round trip and determinant identity")
def test_c5_determinant():
    for n in range(0, 21):
        assert pascal_matrix_determinant_check(n) == math.prod(
            math.factorial(i) ** 2 for i in range(n + 1)
        )


# --- 6 -------------------------------------------------------------------


@criterion(6, "pivotality of the tail end matches perfect matchability")
def test_c6_pivotality_characterisation():
    rng = random.Random(606)
    mismatches = 0
    for _ in range(1000):
        g = random_graph(rng, rng.randint(0, 6), rng.random(), weighted=False)
        i = rng.randint(0, 4)
        aug = build_augmented_graph(g, i)
        base = [v for v in range(g.n) if rng.random() < 0.5]
        s = Coalition.of(aug.graph.n, base + [aug.y(j) for j in range(i)])
        pivotal = is_pivotal(aug.graph, aug.y(i), s)
        matchable = is_perfectly_matchable(g, Coalition.of(g.n, base))
        mismatches += pivotal != (matchable if i % 2 else not matchable)
    assert mismatches == 0


# --- 7 -------------------------------------------------------------------

FPRAS_SUITE = {
    "K2": path(2),
    "P3": path(3),
    "P4": path(4),
    "C5": cycle(5),
    "K23": complete_multipartite(2, 3),
}


@criterion(7, "FPRAS coverage and sample counts")
def test_c7_coverage():
    start = time.perf_counter()
    eps = F(1, 2)
    for name, g in FPRAS_SUITE.items():
        exact = shapley_brute_force(g)
        hits = [0] * g.n
        for seed in range(200):
            for est in approx_all(g, eps, seed=seed):
                assert est.samples_used == math.ceil(F(4 * g.n**2 * (g.n - 1) ** 2) / eps**2)
                x = exact[est.player]
                hits[est.player] += x / (1 + eps) <= est.estimate <= x * (1 + eps)
        for player, h in enumerate(hits):
            assert h / 200 >= 0.70, (name, player, h)
    assert time.perf_counter() - start < 600


@criterion(7, "FPRAS coverage and sample counts")
def test_c7_sample_counts():
    assert sample_count(4, F(1, 2)) == 2304
    for n in range(2, 9):
        for eps in (F(1), F(1, 2), F(1, 3), F(3, 7)):
            assert sample_count(n, eps) == -(-(4 * n * n * (n - 1) ** 2 * eps.denominator**2) // eps.numerator**2)


# --- 8 -------------------------------------------------------------------


@criterion(8, "average marginal over all orderings equals the raw value")
@pytest.mark.parametrize("n", range(1, 7))
def test_c8_unbiasedness(n):
    rng = random.Random(800 + n)
    graphs = [random_graph(rng, n, rng.random(), weighted=k % 2 == 0) for k in range(6)]
    fact = math.factorial(n)
    for g in graphs:
        raw = raw_shapley(g)
        perms = list(itertools.permutations(range(n)))
        for i in range(n):
            mean = sum((marginal_contribution(g, i, p) for p in perms), F(0)) / fact
            assert mean * fact == raw[i]


# --- 9 -------------------------------------------------------------------

_K23 = format_graph(complete_multipartite(2, 3))
_WEIGHTED = "p 5 5 weighted\ne 0 1 2\ne 1 2 1/3\ne 2 3 1.5\ne 3 4 5\ne 0 4 1\n"
_COMMANDS = [
    ["exact", "{k23}"],
    ["exact", "{w}", "--method", "bruteforce"],
    ["approx", "{k23}", "--eps", "1/4", "--seed", "12345"],
    ["approx", "{w}", "--eps", "1/2", "--delta", "1/20", "--seed", "7", "--raw"],
    ["count-matchable", "{k23}", "--all"],
    ["count-matchable", "{k23}", "-k", "2"],
    ["verify-reduction", "{k23}"],
]


def _invoke(argv):
    proc = subprocess.run(
        [sys.executable, "-m", "matchshap", *argv], capture_output=True, check=False
    )
    out = proc.stdout
    if "--json" in argv:
        report = json.loads(out)
        report.pop("timing_ms")
        out = json.dumps(report, sort_keys=True).encode()
    return proc.returncode, out


@criterion(9, "CLI output independent of --threads")
@pytest.mark.parametrize("fmt", [[], ["--json"]], ids=["tsv", "json"])
def test_c9_determinism(tmp_path, fmt):
    files = {"k23": tmp_path / "k23.txt", "w": tmp_path / "w.txt"}
    files["k23"].write_text(_K23)
    files["w"].write_text(_WEIGHTED)
    for template in _COMMANDS:
        argv = [a.format(**{k: str(p) for k, p in files.items()}) for a in template] + fmt
        outputs = {_invoke(argv + ["--threads", str(t)]) for t in (1, 2, 4, 1)}
        assert len(outputs) == 1, template
        code, out = outputs.pop()
        assert code == 0 and out, template
