"""Bracketing root finder for monotone scalar equations.

Every root solved in this package (steady states, golden-rule capital) is a
zero of a strictly monotone map, so plain bisection with geometric bracket
expansion is exact enough and has no failure modes beyond "no sign change".
"""

import math


class NoRoot(ValueError):
    """No sign change found inside the admissible bracket."""


def find_root(fn, lo=1e-10, hi=1e6, *, lo_min=1e-300, hi_max=1e12,
              max_iter=200, residual_tol=1e-12):
    """Root of fn on [lo, hi], expanding the bracket outward if needed.

    fn(lo) and fn(hi) must end up with opposite signs (zero counts as
    either). Bisects up to max_iter times, stopping early once the midpoint
    residual is within residual_tol or the bracket has collapsed to a few
    ulp.
    """
    f_lo = fn(lo)
    f_hi = fn(hi)
    if f_lo == 0.0:
        return lo
    if f_hi == 0.0:
        return hi
    while f_lo * f_hi > 0.0 and lo > lo_min:
        lo = max(lo * 0.1, lo_min)
        f_lo = fn(lo)
    while f_lo * f_hi > 0.0 and hi < hi_max:
        hi = min(hi * 10.0, hi_max)
        f_hi = fn(hi)
    if f_lo * f_hi > 0.0:
        raise NoRoot(f"no sign change on [{lo:g}, {hi:g}]")
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        f_mid = fn(mid)
        if abs(f_mid) <= residual_tol:
            return mid
        if hi - lo <= 4.0 * math.ulp(max(abs(lo), abs(hi))):
            return mid
        if f_mid * f_lo < 0.0:
            hi = mid
        else:
            lo, f_lo = mid, f_mid
    return 0.5 * (lo + hi)


def scan_roots(fn, lo, hi, points=10_000, **kwargs):
    """All bisection roots of fn on a log-spaced grid of [lo, hi].

    Intended for maps that may cross zero several times (bubbleless steady
    states under custom savings rules).
    """
    roots = []
    log_lo, log_hi = math.log(lo), math.log(hi)
    xs = [math.exp(log_lo + (log_hi - log_lo) * i / (points - 1))
          for i in range(points)]
    prev_x, prev_f = xs[0], fn(xs[0])
    if prev_f == 0.0:
        roots.append(prev_x)
    for x in xs[1:]:
        f = fn(x)
        if f == 0.0:
            roots.append(x)
        elif prev_f * f < 0.0:
            roots.append(find_root(fn, prev_x, x, **kwargs))
        prev_x, prev_f = x, f
    return roots
