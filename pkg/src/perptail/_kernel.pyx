# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled perpetuity simulation kernel.

Same contract and bit stream as ``perptail._kernel_py``: per draw,
accumulate ``S += q * P`` then ``P *= M_t`` until ``P < eps`` or
``max_terms`` terms, with ``M_t`` from the counter-based uniform of term t.
"""

import numpy as np

from libc.math cimport cos, exp, expm1, log, pow
from libc.stdint cimport int64_t, uint64_t

cdef uint64_t GOLDEN = 0x9E3779B97F4A7C15ULL
cdef uint64_t ALT = 0xD1B54A32D192ED03ULL
cdef double TWO_M53 = 1.1102230246251565e-16
cdef double ONE_MINUS_ULP = 1.0 - 1.1102230246251565e-16
cdef double E = 2.718281828459045

# keep in sync with tail_models.KIND_*
cdef enum:
    KIND_DEGENERATE = 0
    KIND_POWER_UNIFORM = 1
    KIND_WEIBULL_AT_ONE = 2
    KIND_LOG_POWER = 3
    KIND_GAMMA_EXP = 4
    KIND_RAPID_NON_GAMMA = 5


cdef inline uint64_t mix64(uint64_t z) noexcept nogil:
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL
    return z ^ (z >> 31)


cdef inline double h_gamma(double d) noexcept nogil:
    return log(d) + 1.0 / d


cdef inline double h_rapid(double d) noexcept nogil:
    return log(d) + 2.0 / d - cos(1.0 / d)


cdef inline double bisect(int kind, double tau, int steps) noexcept nogil:
    cdef double lo = 0.0, hi = 1.0, mid, hv
    cdef int i
    for i in range(steps):
        mid = 0.5 * (lo + hi)
        hv = h_gamma(mid) if kind == KIND_GAMMA_EXP else h_rapid(mid)
        if hv <= tau:
            hi = mid
        else:
            lo = mid
    return hi


cdef inline double sample_m(int kind, double a, double b, double p_one,
                            double top, int steps, double u) noexcept nogil:
    cdef double v
    if p_one > 0.0:
        if u < p_one:
            return 1.0
        u = (u - p_one) / (1.0 - p_one)
        if u > ONE_MINUS_ULP:
            u = ONE_MINUS_ULP
        if u < 0.0:
            u = 0.0
    if kind == KIND_DEGENERATE:
        return a
    if kind == KIND_POWER_UNIFORM:
        if a == 1.0:
            return u
        return pow(u, 1.0 / a)
    v = 1.0 - u
    if v > top:
        return 0.0
    if kind == KIND_WEIBULL_AT_ONE:
        return 1.0 - pow(-log(v) / a, 1.0 / (1.0 - b))
    if kind == KIND_LOG_POWER:
        return -expm1(-pow(-log(v) / a, 1.0 / b))
    return 1.0 - bisect(kind, log(-log(v)), steps)


def simulate_block(int kind, double a, double b, double p_one, double q,
                   double eps, int64_t max_terms, uint64_t key,
                   int64_t first, int64_t n, int bisect_steps):
    """Simulate draws ``first .. first+n-1`` of substream ``key``.

    Returns ``(values, partial_products, terms)`` as numpy arrays.
    """
    values_arr = np.zeros(n, dtype=np.float64)
    prods_arr = np.ones(n, dtype=np.float64)
    terms_arr = np.zeros(n, dtype=np.int64)
    cdef double[::1] values = values_arr
    cdef double[::1] prods = prods_arr
    cdef int64_t[::1] terms = terms_arr
    cdef double top
    if kind == KIND_WEIBULL_AT_ONE or kind == KIND_LOG_POWER:
        top = exp(-a)
    elif kind == KIND_GAMMA_EXP:
        top = exp(-E)
    elif kind == KIND_RAPID_NON_GAMMA:
        top = exp(-exp(2.0 - cos(1.0)))
    else:
        top = 2.0
    cdef int64_t i, t
    cdef uint64_t dkey
    cdef double s, p, u
    with nogil:
        for i in range(n):
            dkey = mix64(key + <uint64_t>(first + i + 1) * ALT)
            s = 0.0
            p = 1.0
            t = 0
            while True:
                t += 1
                s += q * p
                u = <double>(mix64(dkey + <uint64_t>t * GOLDEN) >> 11) * TWO_M53
                p = p * sample_m(kind, a, b, p_one, top, bisect_steps, u)
                if p < eps or t >= max_terms:
                    break
            values[i] = s
            prods[i] = p
            terms[i] = t
    return values_arr, prods_arr, terms_arr
