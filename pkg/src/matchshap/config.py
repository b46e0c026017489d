"""Tunable limits. Environment variables are read at call time."""

from __future__ import annotations

import os

DEFAULT_MAX_BRUTE_N = 20
# exact whole-graph matching uses the subset DP up to this size, blossom above
MATCHING_DP_N = 16
MAX_TYPES = 6
# explicit --method modular refuses decompositions with more profiles than this
MAX_PROFILES = 2_000_000
PERMUTATION_ORACLE_N = 8
REDUCTION_MAX_N = 8
COUNT_MAX_N = 20


def max_brute_n() -> int:
    raw = os.environ.get("MATCHSHAP_MAX_BRUTE_N")
    if not raw:
        return DEFAULT_MAX_BRUTE_N
    try:
        value = int(raw)
    except ValueError:
        raise ValueError(f"MATCHSHAP_MAX_BRUTE_N must be an integer, got {raw!r}") from None
    return max(0, min(value, 26))
