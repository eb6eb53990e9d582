# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels; operation-for-operation mirror of ``_fallback``."""

from libc.math cimport INFINITY, ceil, exp, log, sqrt
from libc.stdint cimport int64_t, uint64_t

import numpy as np

cdef uint64_t GOLDEN = 0x9E3779B97F4A7C15ULL
cdef uint64_t MIX1 = 0xBF58476D1CE4E5B9ULL
cdef uint64_t MIX2 = 0x94D049BB133111EBULL
cdef double TWO_M53 = 1.0 / 9007199254740992.0
cdef double POISSON_CHUNK = 30.0
cdef double BESSEL_RTOL = 1e-16


cdef inline uint64_t _mix(uint64_t z) noexcept nogil:
    z = (z ^ (z >> 30)) * MIX1
    z = (z ^ (z >> 27)) * MIX2
    return z ^ (z >> 31)


cdef inline uint64_t _next(uint64_t* state) noexcept nogil:
    state[0] += GOLDEN
    return _mix(state[0])


cdef inline double _uniform(uint64_t* state) noexcept nogil:
    return <double>(_next(state) >> 11) * TWO_M53


cdef inline double _uniform_open0(uint64_t* state) noexcept nogil:
    return <double>((_next(state) >> 11) + 1) * TWO_M53


cdef int64_t _poisson(uint64_t* state, double lam) noexcept nogil:
    cdef int64_t total = 0, k, c, chunks
    cdef double mu, emu, u, p, cdf
    if lam <= 0.0:
        return 0
    chunks = <int64_t>ceil(lam / POISSON_CHUNK)
    if chunks < 1:
        chunks = 1
    mu = lam / chunks
    emu = exp(-mu)
    for c in range(chunks):
        u = _uniform(state)
        k = 0
        p = emu
        cdf = p
        while u > cdf and p > 0.0:
            k += 1
            p = p * mu / k
            cdf += p
        total += k
    return total


cdef double _bessel_i(int64_t order, double x) noexcept nogil:
    cdef double half, term, quarter, total
    cdef int64_t j, k
    if x == 0.0:
        return 1.0 if order == 0 else 0.0
    half = 0.5 * x
    term = 1.0
    for j in range(1, order + 1):
        term = term * half / j
    quarter = half * half
    total = term
    k = 0
    while True:
        k += 1
        term = term * quarter / (k * (order + k))
        total += term
        if term <= BESSEL_RTOL * total:
            break
    return total


def bessel_i(long long order, double x):
    if order < 0 or not x >= 0.0:
        raise ValueError(f"bessel_i needs order >= 0 and x >= 0, got ({order}, {x})")
    return _bessel_i(order, x)


cdef double _log_bessel_i(int64_t order, double x) noexcept nogil:
    cdef double half, log_lead, quarter, term, total
    cdef int64_t j, k
    if x == 0.0:
        return 0.0 if order == 0 else -INFINITY
    half = 0.5 * x
    log_lead = 0.0
    if order > 0:
        log_lead = order * log(half)
        for j in range(2, order + 1):
            log_lead -= log(<double>j)
    quarter = half * half
    term = 1.0
    total = 1.0
    k = 0
    while True:
        k += 1
        term = term * quarter / (k * (order + k))
        total += term
        if term <= BESSEL_RTOL * total:
            break
    return log_lead + log(total)


def log_bessel_i(long long order, double x):
    return _log_bessel_i(order, x)


def skellam_pmf_pos(long long x, double lambda_a, double lambda_b):
    cdef int64_t n = -x if x < 0 else x
    cdef double log_bess = _log_bessel_i(n, 2.0 * (sqrt(lambda_a) * sqrt(lambda_b)))
    cdef double log_scale
    if log_bess == -INFINITY:
        return 0.0
    log_scale = -(lambda_a + lambda_b) + 0.5 * x * (log(lambda_a) - log(lambda_b))
    return exp(log_scale + log_bess)


def derive_seed(master, index):
    cdef uint64_t m = <uint64_t>(int(master) & 0xFFFFFFFFFFFFFFFF)
    cdef uint64_t i = <uint64_t>(int(index) + 1)
    return _mix(m + i * GOLDEN)


cdef void _insertion_sort(double* a, int64_t n) noexcept nogil:
    cdef int64_t i, j
    cdef double v
    for i in range(1, n):
        v = a[i]
        j = i - 1
        while j >= 0 and a[j] > v:
            a[j + 1] = a[j]
            j -= 1
        a[j + 1] = v


def sample_path(double lambda_a, double lambda_b, double t0, seed):
    cdef uint64_t state = <uint64_t>(int(seed) & 0xFFFFFFFFFFFFFFFF)
    cdef int64_t n_a = _poisson(&state, lambda_a)
    cdef int64_t n_b = _poisson(&state, lambda_b)
    cdef double span = 1.0 - t0
    ta_arr = np.empty(n_a, dtype=np.float64)
    tb_arr = np.empty(n_b, dtype=np.float64)
    times_arr = np.empty(n_a + n_b, dtype=np.float64)
    signs_arr = np.empty(n_a + n_b, dtype=np.int8)
    cdef double[::1] ta = ta_arr
    cdef double[::1] tb = tb_arr
    cdef double[::1] times = times_arr
    cdef signed char[::1] signs = signs_arr
    cdef int64_t i, j, m
    with nogil:
        for i in range(n_a):
            ta[i] = t0 + span * _uniform_open0(&state)
        for i in range(n_b):
            tb[i] = t0 + span * _uniform_open0(&state)
        if n_a > 1:
            _insertion_sort(&ta[0], n_a)
        if n_b > 1:
            _insertion_sort(&tb[0], n_b)
        i = 0
        j = 0
        m = 0
        while i < n_a or j < n_b:
            if j >= n_b or (i < n_a and ta[i] <= tb[j]):
                times[m] = ta[i]
                signs[m] = 1
                i += 1
            else:
                times[m] = tb[j]
                signs[m] = -1
                j += 1
            m += 1
    return times_arr, signs_arr


def terminal_diffs(double lambda_a, double lambda_b, seed, long long n_paths):
    cdef uint64_t master = <uint64_t>(int(seed) & 0xFFFFFFFFFFFFFFFF)
    out_arr = np.empty(n_paths, dtype=np.int64)
    cdef int64_t[::1] out = out_arr
    cdef int64_t p
    cdef uint64_t state
    with nogil:
        for p in range(n_paths):
            state = _mix(master + <uint64_t>(p + 1) * GOLDEN)
            out[p] = _poisson(&state, lambda_a)
            out[p] -= _poisson(&state, lambda_b)
    return out_arr
