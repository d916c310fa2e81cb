# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels for the per-period equilibrium map.

Twin of `_reference.py`: same operations in the same order, so both backends
produce bit-identical doubles. Keep the two files in sync.
"""

from libc.math cimport log, log1p, pow, fabs

HORIZON = 0
CAPITAL_DEATH = 1
PRICE_NEGATIVE = 2
CONVERGED = 3

cdef double _EPS = 2.220446049250313e-16


cdef inline double _fprime(double A, double alpha, double theta, double k) nogil:
    cdef double fp = A * alpha * pow(k, alpha - 1.0)
    cdef double lt
    if theta != 0.0:
        if k > 1.0:
            lt = log1p(1.0 / k)
        else:
            lt = log1p(k) - log(k)
        fp += theta * (lt - 1.0 / (1.0 + k))
    return fp


cdef inline double _wage(double A, double alpha, double theta, double k) nogil:
    cdef double w = A * (1.0 - alpha) * pow(k, alpha)
    if theta != 0.0:
        w += theta * k / (1.0 + k)
    return w


def simulate(double A, double alpha, double theta, double beta, double G,
             double k0, double p0, double[::1] d, int T,
             double tol_conv, double price_floor,
             double[::1] k_out, double[::1] p_out):
    """See _reference.simulate."""
    cdef double k = k0
    cdef double p = p0
    cdef double x, pn, dk, dp
    cdef int t
    k_out[0] = k0
    p_out[0] = p0
    for t in range(T):
        x = (beta * _wage(A, alpha, theta, k) - p) / G
        if x <= 0.0:
            return CAPITAL_DEATH, t + 1
        pn = (_fprime(A, alpha, theta, x) / G) * p - d[t + 1]
        if pn < price_floor:
            return PRICE_NEGATIVE, t + 1
        k_out[t + 1] = x
        p_out[t + 1] = pn
        dk = fabs(x - k)
        dp = fabs(pn - p)
        k = x
        p = pn
        if dk < tol_conv and dp < tol_conv and d[t + 1] < tol_conv:
            return CONVERGED, t + 2
    return HORIZON, T + 1


def shoot_scan(double A, double alpha, double theta, double beta, double G,
               double k0, double p0, double d0, double ratio, int T,
               double k_ref, double p_ref):
    """See _reference.shoot_scan."""
    cdef double k = k0
    cdef double p = p0
    cdef double dv = d0
    cdef double x, pn, rg, dist, tmp
    cdef double min_dist
    cdef int argmin = 0
    cdef int t
    dist = fabs(k - k_ref)
    tmp = fabs(p - p_ref)
    if tmp > dist:
        dist = tmp
    min_dist = dist
    for t in range(T):
        x = (beta * _wage(A, alpha, theta, k) - p) / G
        if x <= 0.0:
            return CAPITAL_DEATH, t + 1, min_dist, argmin, k, p
        dv = dv * ratio
        rg = _fprime(A, alpha, theta, x) / G
        pn = rg * p - dv
        if pn < -1e-12 or pn < -1000.0 * _EPS * (rg * fabs(p) + dv):
            return PRICE_NEGATIVE, t + 1, min_dist, argmin, x, pn
        k = x
        p = pn
        dist = fabs(k - k_ref)
        tmp = fabs(p - p_ref)
        if tmp > dist:
            dist = tmp
        if dist < min_dist:
            min_dist = dist
            argmin = t + 1
    return HORIZON, T, min_dist, argmin, k, p
