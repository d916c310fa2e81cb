"""Pure-Python kernels for the per-period equilibrium map.

Functional twin of the compiled module `_speedups`: same operations in the
same order on the same doubles, so results agree bit for bit. Keep the two
files in sync.

Status codes shared by both backends:
    0 HORIZON          ran to the requested horizon
    1 CAPITAL_DEATH    no positive next capital (price too high)
    2 PRICE_NEGATIVE   price fell below the negativity trigger
    3 CONVERGED        state stopped moving and dividends are negligible
"""

import math

HORIZON = 0
CAPITAL_DEATH = 1
PRICE_NEGATIVE = 2
CONVERGED = 3

_EPS = 2.220446049250313e-16


def _fprime(A, alpha, theta, k):
    fp = A * alpha * k ** (alpha - 1.0)
    if theta != 0.0:
        lt = math.log1p(1.0 / k) if k > 1.0 else math.log1p(k) - math.log(k)
        fp += theta * (lt - 1.0 / (1.0 + k))
    return fp


def _wage(A, alpha, theta, k):
    w = A * (1.0 - alpha) * k**alpha
    if theta != 0.0:
        w += theta * k / (1.0 + k)
    return w


def simulate(A, alpha, theta, beta, G, k0, p0, d, T, tol_conv, price_floor,
             k_out, p_out):
    """Iterate the log-utility equilibrium map, filling k_out/p_out.

    d[t] is the detrended dividend at period t (d[0] never enters the
    recursion). Returns (status, n) with n the number of valid records.
    """
    k_out[0] = k0
    p_out[0] = p0
    k = k0
    p = p0
    for t in range(T):
        x = (beta * _wage(A, alpha, theta, k) - p) / G
        if x <= 0.0:
            return CAPITAL_DEATH, t + 1
        pn = (_fprime(A, alpha, theta, x) / G) * p - d[t + 1]
        if pn < price_floor:
            return PRICE_NEGATIVE, t + 1
        k_out[t + 1] = x
        p_out[t + 1] = pn
        dk = abs(x - k)
        dp = abs(pn - p)
        k = x
        p = pn
        if dk < tol_conv and dp < tol_conv and d[t + 1] < tol_conv:
            return CONVERGED, t + 2
    return HORIZON, T + 1


def shoot_scan(A, alpha, theta, beta, G, k0, p0, d0, ratio, T, k_ref, p_ref):
    """Classification scan for the shooter: no records, geometric dividends.

    Tracks the closest sup-norm approach to (k_ref, p_ref). The negativity
    trigger adds a scale-aware guard: prices more negative than accumulated
    rounding could explain count as crossings even above the absolute floor.
    Returns (status, t_stop, min_dist, argmin_t, k_end, p_end).
    """
    k = k0
    p = p0
    dv = d0
    dist = abs(k - k_ref)
    tmp = abs(p - p_ref)
    if tmp > dist:
        dist = tmp
    min_dist = dist
    argmin = 0
    for t in range(T):
        x = (beta * _wage(A, alpha, theta, k) - p) / G
        if x <= 0.0:
            return CAPITAL_DEATH, t + 1, min_dist, argmin, k, p
        dv = dv * ratio
        rg = _fprime(A, alpha, theta, x) / G
        pn = rg * p - dv
        if pn < -1e-12 or pn < -1000.0 * _EPS * (rg * abs(p) + dv):
            return PRICE_NEGATIVE, t + 1, min_dist, argmin, x, pn
        k = x
        p = pn
        dist = abs(k - k_ref)
        tmp = abs(p - p_ref)
        if tmp > dist:
            dist = tmp
        if dist < min_dist:
            min_dist = dist
            argmin = t + 1
    return HORIZON, T, min_dist, argmin, k, p
