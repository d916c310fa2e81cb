"""Steady states of the economy and the saddle structure at the bubbly one.

The bubbleless set collects the fixed points k = g(k, 0); the bubbly steady
state (k*, p*) pins the gross interest rate to the growth rate, f'(k*) = G.
The local analysis linearizes the three-dimensional system in (k, p, d) and
splits its spectrum through the block-triangular structure: a quadratic for
the (k, p) block plus the dividend decay eigenvalue Gd/G.
"""

import math
from dataclasses import dataclass

import numpy as np

from . import roots
from .core import (EconomyConfig, GeometricDividends, eval_f, g_partials,
                   solve_g, wage)
from .roots import NoRoot

#: steady-state residual requirement (detrended units)
TOL_ROOT = 1e-10

SADDLE = "saddle"
OTHER = "other"


@dataclass(frozen=True)
class SteadyStateReport:
    bubbleless: list           # [(k, R)] fixed points of k = g(k, 0)
    bubbly: tuple | None       # (k*, p*) with f'(k*) = G, if p* > 0
    rho: float | None          # R/G at the Cobb-Douglas log steady state

    def to_text(self):
        lines = []
        if self.bubbleless:
            for i, (k, R) in enumerate(self.bubbleless):
                lines.append(f"bubbleless[{i}].k: {k!r}")
                lines.append(f"bubbleless[{i}].R: {R!r}")
        else:
            lines.append("bubbleless: none")
        if self.bubbly is not None:
            lines.append(f"bubbly.k: {self.bubbly[0]!r}")
            lines.append(f"bubbly.p: {self.bubbly[1]!r}")
        else:
            lines.append("bubbly: none")
        if self.rho is not None:
            lines.append(f"rho: {self.rho!r}")
        return "\n".join(lines) + "\n"


def log_rho(cfg: EconomyConfig):
    """R/G at the Cobb-Douglas log-utility steady state: alpha/(beta(1-alpha))."""
    if not cfg.savings.is_log:
        return None
    a = cfg.tech.alpha
    return a / (cfg.savings.beta * (1.0 - a))


def bubbleless_steady_states(cfg: EconomyConfig):
    """All k > 0 with k = g(k, 0), each paired with its interest rate f'(k).

    Closed form for Cobb-Douglas log utility; a monotone bisection for the
    perturbed log case (the stationarity condition is strictly decreasing in
    k); a grid scan plus per-sign-change bisection for custom rules, which
    may have several fixed points.
    """
    ks = []
    if cfg.savings.is_log:
        A, alpha, theta = cfg.tech.A, cfg.tech.alpha, cfg.tech.theta
        beta = cfg.savings.beta
        if theta == 0.0:
            ks = [(beta * A * (1.0 - alpha) / cfg.G) ** (1.0 / (1.0 - alpha))]
        else:
            def stationarity(k):
                return cfg.G - beta * (A * (1.0 - alpha) * k ** (alpha - 1.0)
                                       + theta / (1.0 + k))

            ks = [roots.find_root(stationarity)]
    else:
        def excess(k):
            x = solve_g(cfg, k, 0.0)
            return k - (x if x is not None else 0.0)

        ks = roots.scan_roots(excess, 1e-10, 1e6)

    out = []
    for k in ks:
        resid = abs(k - (solve_g(cfg, k, 0.0) or 0.0))
        if resid > TOL_ROOT:
            raise ArithmeticError(
                f"steady-state residual {resid} above {TOL_ROOT} at k={k}")
        _, fp, _ = eval_f(cfg.tech, k)
        out.append((k, fp))
    return out


def bubbly_steady_state(cfg: EconomyConfig):
    """(k*, p*) with f'(k*) = G and k* = g(k*, p*), or None when p* <= 0.

    k* is the unique root of f'(k) - G (f'' < 0); p* then follows in closed
    form from market clearing at R = G. Raises NoRoot when f' - G has no
    sign change on the admissible bracket.
    """
    def slope_gap(k):
        _, fp, _ = eval_f(cfg.tech, k)
        return fp - cfg.G

    k_star = roots.find_root(slope_gap)
    _, fp, _ = eval_f(cfg.tech, k_star)
    if abs(fp - cfg.G) > TOL_ROOT:
        raise ArithmeticError(f"golden-rule residual {abs(fp - cfg.G)} at k={k_star}")
    p_star = cfg.savings.savings(wage(cfg.tech, k_star), cfg.G) - cfg.G * k_star
    if p_star <= 0.0:
        return None
    resid = abs(k_star - solve_g(cfg, k_star, p_star))
    if resid > TOL_ROOT:
        raise ArithmeticError(
            f"bubbly steady-state residual {resid} at k={k_star}")
    return k_star, p_star


def steady_state_report(cfg: EconomyConfig) -> SteadyStateReport:
    try:
        bubbly = bubbly_steady_state(cfg)
    except NoRoot:
        bubbly = None
    return SteadyStateReport(bubbleless=bubbleless_steady_states(cfg),
                             bubbly=bubbly, rho=log_rho(cfg))


@dataclass(frozen=True)
class SpectralReport:
    """Linearization at the bubbly steady state (k*, p*, 0)."""

    J: np.ndarray
    lambda1: float
    lambda2: float
    lambda3: float
    q0: float                  # q(0) = g_k, positive at a saddle
    q1: float                  # q(1) = -(f''/G) g_p p*, negative at a saddle
    classification: str
    k_star: float
    p_star: float
    g_k: float
    g_p: float
    q1_sensitive: bool         # |q(1)| < 1e-8: eigenvalues near 1, FD-fragile

    def to_text(self):
        lines = [
            f"k_star: {self.k_star!r}",
            f"p_star: {self.p_star!r}",
            f"g_k: {self.g_k!r}",
            f"g_p: {self.g_p!r}",
            f"lambda1: {self.lambda1!r}",
            f"lambda2: {self.lambda2!r}",
            f"lambda3: {self.lambda3!r}",
            f"q0: {self.q0!r}",
            f"q1: {self.q1!r}",
            f"classification: {self.classification}",
            f"q1_sensitive: {self.q1_sensitive}",
        ]
        return "\n".join(lines) + "\n"

    CSV_HEADER = "k_star,p_star,g_k,g_p,lambda1,lambda2,lambda3,q0,q1,classification"

    def to_csv_row(self):
        vals = [self.k_star, self.p_star, self.g_k, self.g_p, self.lambda1,
                self.lambda2, self.lambda3, self.q0, self.q1]
        return ",".join(repr(v) for v in vals) + f",{self.classification}"


def spectral_analysis(cfg: EconomyConfig) -> SpectralReport:
    """Jacobian, eigenvalues and saddle classification at (k*, p*, 0).

    Needs geometric dividends (the third eigenvalue is their decay rate) and
    an existing bubbly steady state. Eigenvalues come from the explicit
    2x2-block quadratic, not a general solver.
    """
    if not isinstance(cfg.dividends, GeometricDividends):
        raise ValueError("spectral analysis requires geometric dividends")
    ss = bubbly_steady_state(cfg)
    if ss is None:
        raise ValueError("no bubbly steady state (p* <= 0) for this economy")
    k_star, p_star = ss
    _, _, fpp = eval_f(cfg.tech, k_star)
    g_k, g_p = g_partials(cfg, k_star, p_star)
    lam3 = cfg.dividends.Gd / cfg.G

    fg = fpp / cfg.G
    J = np.array([
        [g_k, g_p, 0.0],
        [fg * g_k * p_star, fg * g_p * p_star + 1.0, -lam3],
        [0.0, 0.0, lam3],
    ])
    # q(lambda) = lambda^2 - (g_k + fg*g_p*p* + 1) lambda + g_k
    trace = g_k + fg * g_p * p_star + 1.0
    q0 = g_k
    q1 = -(fg) * g_p * p_star
    disc = trace * trace - 4.0 * g_k
    if disc >= 0.0:
        lam1 = (trace - math.sqrt(disc)) / 2.0
        lam2 = (trace + math.sqrt(disc)) / 2.0
    else:
        lam1 = lam2 = math.nan
    saddle = (q0 > 0.0 and q1 < 0.0 and disc >= 0.0
              and 0.0 < lam1 < 1.0 < lam2 and 0.0 < lam3 < 1.0)
    return SpectralReport(
        J=J, lambda1=lam1, lambda2=lam2, lambda3=lam3, q0=q0, q1=q1,
        classification=SADDLE if saddle else OTHER,
        k_star=k_star, p_star=p_star, g_k=g_k, g_p=g_p,
        q1_sensitive=abs(q1) < 1e-8)
