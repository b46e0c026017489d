# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled int64 kernels. Mirrors ``_kernels_py`` exactly; callers guarantee
no int64 overflow (see ``matchshap.kernels``)."""

import numpy as np
cimport numpy as cnp
from libc.stdint cimport int64_t, uint64_t

cnp.import_array()


cdef extern from *:
    int __builtin_ctzll(unsigned long long) nogil
    int __builtin_popcountll(unsigned long long) nogil


cdef inline int _ctz(uint64_t x) nogil:
    return __builtin_ctzll(x)


cdef inline int _popcount(uint64_t x) nogil:
    return __builtin_popcountll(x)


def subset_values(int n, const int64_t[:, ::1] weights):
    cdef Py_ssize_t size = (<Py_ssize_t>1) << n
    out = np.zeros(size, dtype=np.int64)
    cdef int64_t[::1] v = out
    cdef uint64_t[64] nbmask
    cdef int a, b, low, j
    cdef uint64_t s, rest, cand
    cdef int64_t best, c
    for a in range(n):
        nbmask[a] = 0
        for b in range(n):
            if weights[a, b] > 0:
                nbmask[a] |= (<uint64_t>1) << b
    with nogil:
        for s in range(1, <uint64_t>size):
            low = _ctz(s)
            rest = s ^ ((<uint64_t>1) << low)
            best = v[rest]
            cand = rest & nbmask[low]
            while cand:
                j = _ctz(cand)
                cand &= cand - 1
                c = weights[low, j] + v[rest ^ ((<uint64_t>1) << j)]
                if c > best:
                    best = c
            v[s] = best
    return out


def marginal_sums(int n, const int64_t[::1] v):
    out = np.zeros((n, n), dtype=np.int64)
    cdef int64_t[:, ::1] d = out
    cdef Py_ssize_t size = (<Py_ssize_t>1) << n
    cdef uint64_t s, bit
    cdef int i, k
    with nogil:
        for s in range(<uint64_t>size):
            k = _popcount(s)
            for i in range(n):
                bit = (<uint64_t>1) << i
                if not (s & bit):
                    d[i, k] += v[s | bit] - v[s]
    return out


def permutation_marginal_sums(int n, const int64_t[:, ::1] perms, const int64_t[::1] v):
    out = np.zeros(n, dtype=np.int64)
    cdef int64_t[::1] acc = out
    cdef Py_ssize_t rows = perms.shape[0], r
    cdef int k, p
    cdef uint64_t prefix
    cdef int64_t prev, cur
    with nogil:
        for r in range(rows):
            prefix = 0
            prev = 0
            for k in range(n):
                p = <int>perms[r, k]
                prefix |= (<uint64_t>1) << p
                cur = v[prefix]
                acc[p] += cur - prev
                prev = cur
    return out
