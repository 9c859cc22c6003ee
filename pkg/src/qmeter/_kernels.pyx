# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled sampling kernels. Must stay bit-identical to ``_fallback``."""

import numpy as np
cimport numpy as cnp
from libc.stdint cimport uint64_t, int64_t

cnp.import_array()

cdef uint64_t GOLDEN = 0x9E3779B97F4A7C15ULL
cdef double TWO_M53 = 1.0 / 9007199254740992.0


cdef inline uint64_t _mix(uint64_t z) nogil:
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL
    return z ^ (z >> 31)


cdef inline Py_ssize_t _pick(const double[::1] cdf, double u) nogil:
    cdef Py_ssize_t j = 0
    cdef Py_ssize_t last = cdf.shape[0] - 1
    while j < last and cdf[j] <= u:
        j += 1
    return j


def stream_key(uint64_t seed, uint64_t stream):
    return _mix(_mix(seed + GOLDEN) ^ (stream * GOLDEN + 0x632BE59BD9B4E019ULL))


def uniforms(uint64_t key, int64_t start, int64_t count):
    cdef cnp.ndarray[cnp.float64_t, ndim=1] out = np.empty(count, dtype=np.float64)
    cdef double[::1] ov = out
    cdef int64_t t
    with nogil:
        for t in range(count):
            ov[t] = (_mix(key + <uint64_t>(start + t + 1) * GOLDEN) >> 11) * TWO_M53
    return out


def sample_indices(const double[::1] cdf, uint64_t key, int64_t start, int64_t count):
    cdef cnp.ndarray[cnp.int64_t, ndim=1] out = np.empty(count, dtype=np.int64)
    cdef int64_t[::1] ov = out
    cdef int64_t t
    cdef double u
    with nogil:
        for t in range(count):
            u = (_mix(key + <uint64_t>(start + t + 1) * GOLDEN) >> 11) * TWO_M53
            ov[t] = _pick(cdf, u)
    return out


def sample_counts(const double[::1] cdf, uint64_t key, int64_t start, int64_t count):
    cdef Py_ssize_t m = cdf.shape[0]
    cdef cnp.ndarray[cnp.int64_t, ndim=1] out = np.zeros(m, dtype=np.int64)
    cdef int64_t[::1] ov = out
    cdef int64_t t
    cdef double u
    with nogil:
        for t in range(count):
            u = (_mix(key + <uint64_t>(start + t + 1) * GOLDEN) >> 11) * TWO_M53
            ov[_pick(cdf, u)] += 1
    return out
