# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled kernels. Must stay arithmetically identical to ``_fallback``."""

import numpy as np

from libc.stdint cimport uint64_t, int64_t

cdef double TWO_PI = 6.283185307179586
cdef uint64_t GAMMA = 0x9E3779B97F4A7C15ULL
cdef double INV_2_53 = 1.0 / 9007199254740992.0


cdef inline uint64_t _mix(uint64_t z) nogil:
    z = z + GAMMA
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL
    return z ^ (z >> 31)


def covering_arc(const double[::1] phases, double merge_tol):
    cdef Py_ssize_t n = phases.shape[0]
    cdef Py_ssize_t i, m, best
    cdef double gap, best_gap, start, width
    if n == 0:
        raise ValueError("empty phase array")
    first_arr = np.empty(n, dtype=np.float64)
    last_arr = np.empty(n, dtype=np.float64)
    cdef double[::1] cf = first_arr
    cdef double[::1] cl = last_arr
    m = 0
    cf[0] = phases[0]
    cl[0] = phases[0]
    for i in range(1, n):
        if phases[i] - phases[i - 1] > merge_tol:
            m += 1
            cf[m] = phases[i]
        cl[m] = phases[i]
    m += 1
    if m > 1 and phases[0] + TWO_PI - phases[n - 1] <= merge_tol:
        cf[0] = cf[m - 1]
        m -= 1
    if m == 1:
        width = cl[0] - cf[0]
        if width < 0:
            width += TWO_PI
        return cf[0], width
    best = m - 1
    best_gap = cf[0] - cl[m - 1]
    if best_gap < 0:
        best_gap += TWO_PI
    for i in range(m - 1):
        gap = cf[i + 1] - cl[i]
        if gap < 0:
            gap += TWO_PI
        if gap > best_gap:
            best_gap = gap
            best = i
    start = cf[(best + 1) % m]
    width = TWO_PI - best_gap
    return start, width


def phase_sumset(const double[::1] a, const double[::1] b, double dedup_tol):
    cdef Py_ssize_t p = a.shape[0]
    cdef Py_ssize_t q = b.shape[0]
    cdef Py_ssize_t i, j, k, n
    cdef double s
    sums = np.empty(p * q, dtype=np.float64)
    cdef double[::1] sv = sums
    k = 0
    for i in range(p):
        for j in range(q):
            s = a[i] + b[j]
            if s >= TWO_PI:
                s -= TWO_PI
            sv[k] = s
            k += 1
    sums.sort()
    n = p * q
    out = np.empty(n, dtype=np.float64)
    cdef double[::1] ov = out
    if n == 0:
        return out
    ov[0] = sv[0]
    k = 1
    for i in range(1, n):
        if sv[i] - sv[i - 1] > dedup_tol:
            ov[k] = sv[i]
            k += 1
    return out[:k]


def counter_uniforms(uint64_t seed, uint64_t start, Py_ssize_t count):
    cdef uint64_t key = _mix(seed)
    cdef Py_ssize_t i
    out = np.empty(count, dtype=np.float64)
    cdef double[::1] ov = out
    for i in range(count):
        ov[i] = <double>(_mix(key + (start + <uint64_t>i) * GAMMA) >> 11) * INV_2_53
    return out


def sample_categorical(const double[::1] cdf, uint64_t seed, Py_ssize_t shots):
    cdef Py_ssize_t m = cdf.shape[0]
    cdef uint64_t key = _mix(seed)
    cdef Py_ssize_t i, j
    cdef double u
    counts = np.zeros(m, dtype=np.int64)
    cdef int64_t[::1] cv = counts
    for i in range(shots):
        u = <double>(_mix(key + (<uint64_t>i) * GAMMA) >> 11) * INV_2_53
        j = 0
        while j < m - 1 and u >= cdf[j]:
            j += 1
        cv[j] += 1
    return counts
