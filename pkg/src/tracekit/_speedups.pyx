# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels: subsequence counting and banded edit distance.

Mirrors ``tracekit._pure``.  The subsequence counter works in unsigned
64-bit and raises OverflowError when an addition would wrap, at which point
the caller falls back to the exact big-int path.
"""

import numpy as np

from libc.stdint cimport uint32_t, uint64_t

cdef uint64_t U64_MAX = <uint64_t>0xFFFFFFFFFFFFFFFF


def subsequence_count_u64(const uint32_t[::1] s, const uint32_t[::1] c):
    cdef Py_ssize_t ls = s.shape[0]
    cdef Py_ssize_t lc = c.shape[0]
    if lc > ls:
        return 0
    if lc == 0:
        return 1
    ways_arr = np.zeros(lc + 1, dtype=np.uint64)
    cdef uint64_t[::1] ways = ways_arr
    cdef Py_ssize_t i, j, lo
    cdef uint32_t ch
    ways[0] = 1
    for i in range(ls):
        ch = s[i]
        lo = lc - (ls - i)
        if lo < 0:
            lo = 0
        for j in range(lc, lo, -1):
            if c[j - 1] == ch:
                if ways[j] > U64_MAX - ways[j - 1]:
                    raise OverflowError("subsequence count exceeds 64 bits")
                ways[j] = ways[j] + ways[j - 1]
    return int(ways[lc])


def edit_distance(const uint32_t[::1] a, const uint32_t[::1] b, int limit=-1):
    cdef Py_ssize_t la = a.shape[0]
    cdef Py_ssize_t lb = b.shape[0]
    cdef const uint32_t[::1] x = a
    cdef const uint32_t[::1] y = b
    cdef Py_ssize_t tmp
    if la > lb:
        x, y = b, a
        tmp = la
        la = lb
        lb = tmp
    if limit >= 0 and lb - la > limit:
        return limit + 1
    if la == 0:
        if limit >= 0 and lb > limit:
            return limit + 1
        return lb
    cdef long big = la + lb + 1
    prev_arr = np.arange(lb + 1, dtype=np.int64)
    cur_arr = np.empty(lb + 1, dtype=np.int64)
    cdef long[::1] prev = prev_arr
    cdef long[::1] cur = cur_arr
    cdef long[::1] swp
    cdef Py_ssize_t i, j, lo, hi
    cdef long v, w, row_min
    cdef uint32_t xi
    for i in range(1, la + 1):
        if limit >= 0:
            lo = i - limit
            if lo < 1:
                lo = 1
            hi = i + limit
            if hi > lb:
                hi = lb
            for j in range(lb + 1):
                cur[j] = big
            cur[0] = i if i <= limit else big
        else:
            lo = 1
            hi = lb
            cur[0] = i
        xi = x[i - 1]
        row_min = big
        for j in range(lo, hi + 1):
            v = prev[j - 1] + (0 if xi == y[j - 1] else 1)
            w = prev[j] + 1
            if w < v:
                v = w
            w = cur[j - 1] + 1
            if w < v:
                v = w
            cur[j] = v
            if v < row_min:
                row_min = v
        if cur[0] < row_min:
            row_min = cur[0]
        swp = prev
        prev = cur
        cur = swp
        if limit >= 0 and row_min > limit:
            return limit + 1
    v = prev[lb]
    if limit >= 0 and v > limit:
        return limit + 1
    return v
