"""Reverse-engineered equilibria in which dividends crowd out capital.

Under log utility and Cobb-Douglas production, prescribing the savings-split
sequence x_t = C*sigma^t (the ratio of capital income to next-period capital)
pins down a full equilibrium in closed form: capital, price and the dividend
sequence that supports them. With C >= 1+rho and sigma > 1 every quantity
decays geometrically and capital heads to zero.

Adding a bounded concave term to the production function then lifts the
bubbleless interest rate below the growth rate without disturbing the
capital path; the adjusted price p_theta and dividend d_theta keep the same
trajectory an equilibrium of the perturbed economy. The result is an economy
whose dividend growth sits strictly between the bubbleless interest rate and
the growth rate, yet whose unique equilibrium is bubbleless and collapsing:
early dividends are so large relative to capital that capital never
recovers.
"""

import math
from dataclasses import dataclass, replace

import numpy as np

from . import steady_state
from .core import (EconomyConfig, ExplicitDividends, LogUtility,
                   ProductionTech, ZeroDividends, eval_f, wage)


class InvalidSpec(ValueError):
    """x-sequence parameters violate the admissibility inequalities."""


class T0NotFound(ValueError):
    """No period after which all constructed dividends stay positive."""


class FitDomainError(ValueError):
    """Decay-rate fit window contains nonpositive values."""


@dataclass(frozen=True)
class XSequenceSpec:
    """Geometric savings-split sequence x_t = C*sigma^t.

    Admissibility requires x_t > rho and x_t + rho/x_{t+1} >= 1+rho for all
    t; with sigma > 1 both follow from C >= 1+rho, which is enforced here.
    rho = alpha/(beta(1-alpha)) is the interest/growth ratio at the
    bubbleless Cobb-Douglas steady state.
    """

    C: float
    sigma: float
    rho: float

    def __post_init__(self):
        if not self.rho > 0.0:
            raise InvalidSpec(f"rho must be positive, got {self.rho}")
        if not self.sigma > 1.0:
            raise InvalidSpec(f"sigma must exceed 1, got {self.sigma}")
        if not self.C >= 1.0 + self.rho:
            raise InvalidSpec(
                f"C must be at least 1+rho = {1.0 + self.rho}, got {self.C}")

    @classmethod
    def from_preferences(cls, C, sigma, alpha, beta):
        return cls(C=C, sigma=sigma, rho=alpha / (beta * (1.0 - alpha)))

    def value(self, t):
        return self.C * self.sigma**t

    def inequality_margins(self, T):
        """(x_t - rho, x_t + rho/x_{t+1} - (1+rho)) for t = 0..T; both must
        be nonnegative on an admissible sequence."""
        x = self.C * self.sigma ** np.arange(T + 2)
        lower = x[: T + 1] - self.rho
        carry = x[: T + 1] + self.rho / x[1: T + 2] - (1.0 + self.rho)
        return lower, carry


@dataclass
class CounterexamplePath:
    """Constructed equilibrium path.

    Arrays run t = 0..T. d (and d_theta once built) are defined by the
    construction only from t = 1; index 0 holds 0.0 by convention, it never
    enters any recursion. p_theta/d_theta are filled by build_perturbed,
    along with t0, the first period from which every later constructed
    dividend is positive.
    """

    spec: XSequenceSpec
    A: float
    alpha: float
    beta: float
    G: float
    k0: float
    k: np.ndarray
    p: np.ndarray
    d: np.ndarray
    theta: float = 0.0
    p_theta: np.ndarray | None = None
    d_theta: np.ndarray | None = None
    t0: int | None = None

    @property
    def horizon(self):
        return len(self.k) - 1


def build_x_path(spec: XSequenceSpec, k0, A, alpha, beta, G, T) -> CounterexamplePath:
    """Capital/price/dividend sequences generated by the x-sequence.

        k_{t+1} = A*alpha*k_t^alpha / (G*x_t)
        p_t     = (A*alpha/rho)*k_t^alpha - G*k_{t+1}
        d_{t+1} = (A*alpha/G)*k_{t+1}^(alpha-1)*p_t - p_{t+1}

    The result solves the Cobb-Douglas log-utility system exactly, with
    p_t > 0 and d_t >= 0 throughout.
    """
    if k0 <= 0.0:
        raise ValueError(f"k0 must be positive, got {k0}")
    implied_rho = alpha / (beta * (1.0 - alpha))
    if not math.isclose(spec.rho, implied_rho, rel_tol=1e-12):
        raise InvalidSpec(
            f"spec.rho = {spec.rho} but alpha/(beta(1-alpha)) = {implied_rho}")
    x = spec.C * spec.sigma ** np.arange(T + 1)
    k = np.empty(T + 2)
    k[0] = k0
    Aa = A * alpha
    for t in range(T + 1):
        k[t + 1] = Aa * k[t] ** alpha / (G * x[t])
    p = (Aa / spec.rho) * k[: T + 1] ** alpha - G * k[1: T + 2]
    d = np.empty(T + 1)
    d[0] = 0.0
    d[1:] = (Aa / G) * k[1: T + 1] ** (alpha - 1.0) * p[:-1] - p[1:]
    if not (p > 0.0).all():
        raise InvalidSpec("constructed prices are not all positive")
    if not (d[1:] >= 0.0).all():
        raise InvalidSpec("constructed dividends are not all nonnegative")
    return CounterexamplePath(spec=spec, A=A, alpha=alpha, beta=beta, G=G,
                              k0=k0, k=k[: T + 1], p=p, d=d)


def exponent_accumulators(alpha, t):
    """(mu_t, nu_t): exponents of C and sigma in the product x_t*x_{t-1}^alpha*...

    mu_t = (1 - alpha^{t+1})/(1 - alpha)
    nu_t = t/(1 - alpha) - alpha*(1 - alpha^t)/(1 - alpha)^2
    """
    mu = (1.0 - alpha ** (t + 1)) / (1.0 - alpha)
    nu = t / (1.0 - alpha) - alpha * (1.0 - alpha**t) / (1.0 - alpha) ** 2
    return mu, nu


def closed_form_k(spec: XSequenceSpec, k0, A, alpha, G, t):
    """k_{t+1} without recursion, evaluated in log space.

    log k_{t+1} = mu_t*log(A*alpha/G) + alpha^{t+1}*log k0
                  - mu_t*log C - nu_t*log sigma

    Log space keeps the power products alive at horizons where the direct
    product would underflow.
    """
    mu, nu = exponent_accumulators(alpha, t)
    log_k = (mu * math.log(A * alpha / G) + alpha ** (t + 1) * math.log(k0)
             - mu * math.log(spec.C) - nu * math.log(spec.sigma))
    return math.exp(log_k)


def level_constants(spec: XSequenceSpec, A, alpha, G):
    """(C_k, C_p): asymptotic levels of k_{t+1}*sigma^{(t+1)/(1-alpha)} and
    p_t*sigma^{alpha*t/(1-alpha)}."""
    C_k = ((A * alpha / G) ** (1.0 / (1.0 - alpha))
           * spec.C ** (-1.0 / (1.0 - alpha))
           * spec.sigma ** (1.0 / (1.0 - alpha) ** 2))
    C_p = (A * alpha / spec.rho) * C_k**alpha
    return C_k, C_p


def build_perturbed(path: CounterexamplePath, theta, *, residual_tol=1e-9) -> CounterexamplePath:
    """Price/dividend adjustment supporting the same capital path under the
    perturbed technology.

        p_theta_t = p_t + beta*theta*k_t/(1+k_t)
        d_theta_t = (f_theta'(k_t)/G)*p_theta_{t-1} - p_theta_t

    Verifies k_{t+1} = g_theta(k_t, p_theta_t) to residual_tol and scans for
    t0, the smallest t >= 1 with d_theta_s > 0 for every recorded s >= t.
    theta = 0 reduces to the unperturbed path.
    """
    if theta < 0.0:
        raise ValueError(f"theta must be >= 0, got {theta}")
    T = path.horizon
    k = path.k
    p_theta = path.p + path.beta * theta * k / (1.0 + k)
    tech = ProductionTech(A=path.A, alpha=path.alpha, theta=theta)
    fp = np.array([eval_f(tech, kk)[1] for kk in k])
    d_theta = np.empty(T + 1)
    d_theta[0] = 0.0
    d_theta[1:] = (fp[1:] / path.G) * p_theta[:-1] - p_theta[1:]

    resid = 0.0
    for t in range(T):
        g_val = (path.beta * wage(tech, k[t]) - p_theta[t]) / path.G
        resid = max(resid, abs(k[t + 1] - g_val))
    if resid > residual_tol:
        raise ArithmeticError(
            f"perturbed capital-map residual {resid} above {residual_tol}")

    positive = d_theta[1:] > 0.0
    if not positive.any() or not positive[-1]:
        raise T0NotFound(f"no positive-dividend tail within horizon {T}")
    last_bad = np.nonzero(~positive)[0]
    t0 = 1 if last_bad.size == 0 else int(last_bad[-1]) + 2
    return replace(path, theta=theta, p_theta=p_theta, d_theta=d_theta, t0=t0)


@dataclass(frozen=True)
class AsymptoticDiagnostics:
    """Fitted per-period decay factors over a trailing window, with the
    geometric-rate predictions implied by sigma."""

    window: tuple
    fitted: dict         # name -> exp(least-squares slope of log series)
    predicted: dict      # name -> sigma power from the order-of-magnitude limits
    mu: float            # exponent accumulators at the window end
    nu: float
    C_k: float
    C_p: float


def _fit_decay(series, lo, hi):
    ys = series[lo:hi]
    if not (ys > 0.0).all():
        raise FitDomainError("fit window contains nonpositive values")
    ts = np.arange(lo, hi, dtype=float)
    slope = np.polyfit(ts, np.log(ys), 1)[0]
    return math.exp(slope)


def asymptotic_rates(path: CounterexamplePath, window=None) -> AsymptoticDiagnostics:
    """Least-squares decay factors of k, p (and the perturbed series when
    present) over a trailing window; defaults to the last 25% of the
    horizon, at least 50 points."""
    T = path.horizon
    if window is None:
        n = max(50, (T + 1) // 4)
        window = (T + 1 - n, T + 1)
    lo, hi = window
    if hi - lo < 2 or hi > T + 1 or lo < 0:
        raise ValueError(f"bad fit window {window} for horizon {T}")
    if T + 1 < 2 * (hi - lo):
        raise ValueError("path shorter than twice the fit window")
    alpha, sigma = path.alpha, path.spec.sigma
    fitted = {"k": _fit_decay(path.k, lo, hi), "p": _fit_decay(path.p, lo, hi)}
    predicted = {
        "k": sigma ** (-1.0 / (1.0 - alpha)),
        "p": sigma ** (-alpha / (1.0 - alpha)),
    }
    if path.p_theta is not None:
        fitted["p_theta"] = _fit_decay(path.p_theta, lo, hi)
        fitted["d_theta"] = _fit_decay(path.d_theta, max(lo, 1), hi)
        predicted["p_theta"] = sigma ** (-alpha / (1.0 - alpha))
        predicted["d_theta"] = sigma ** ((1.0 - 2.0 * alpha) / (1.0 - alpha))
    mu, nu = exponent_accumulators(alpha, hi - 1)
    C_k, C_p = level_constants(path.spec, path.A, path.alpha, path.G)
    return AsymptoticDiagnostics(window=(lo, hi), fitted=fitted,
                                 predicted=predicted, mu=mu, nu=nu,
                                 C_k=C_k, C_p=C_p)


@dataclass(frozen=True)
class PremiseReport:
    ok: bool
    items: list                # (name, passed, detail)
    rho: float
    k_theta_star: float | None
    R_theta: float | None
    Gd: float | None           # long-run dividend growth G*sigma^((1-2a)/(1-a))

    def to_text(self):
        lines = [f"premises: {'pass' if self.ok else 'FAIL'}"]
        for name, passed, detail in self.items:
            lines.append(f"  {name}: {'pass' if passed else 'FAIL'} ({detail})")
        return "\n".join(lines) + "\n"


def verify_counterexample_premises(A, alpha, beta, G, theta, sigma) -> PremiseReport:
    """Checks that the perturbed economy really inverts the rate ordering.

    Requires alpha > 1/2 (so the constructed dividends decay), a bubbleless
    interest rate R_theta = f_theta'(k_theta*) below G, and the implied
    long-run dividend growth G*sigma^((1-2*alpha)/(1-alpha)) strictly inside
    (R_theta, G).
    """
    items = []
    rho = alpha / (beta * (1.0 - alpha))
    alpha_ok = alpha > 0.5
    items.append(("alpha > 1/2", alpha_ok, f"alpha = {alpha}"))
    if not alpha_ok:
        return PremiseReport(ok=False, items=items, rho=rho,
                             k_theta_star=None, R_theta=None, Gd=None)
    tech = ProductionTech(A=A, alpha=alpha, theta=theta)
    cfg = EconomyConfig(G=G, tech=tech, savings=LogUtility(beta=beta),
                        dividends=ZeroDividends(), k0=1.0)
    ((k_theta, R_theta),) = steady_state.bubbleless_steady_states(cfg)
    items.append(("R_theta < G", R_theta < G,
                  f"R_theta = {R_theta!r}, G = {G!r}"))
    decay = sigma ** ((1.0 - 2.0 * alpha) / (1.0 - alpha))
    in_interval = R_theta / G < decay < 1.0
    items.append(("sigma^((1-2a)/(1-a)) in (R_theta/G, 1)", in_interval,
                  f"value = {decay!r}"))
    Gd = G * decay
    gd_ok = R_theta < Gd < G
    items.append(("G_d in (R_theta, G)", gd_ok, f"G_d = {Gd!r}"))
    ok = all(passed for _, passed, _ in items)
    return PremiseReport(ok=ok, items=items, rho=rho, k_theta_star=k_theta,
                         R_theta=R_theta, Gd=Gd)


def as_economy(path: CounterexamplePath):
    """(cfg, p0) restarting the perturbed path at t0 as a dividend economy.

    The stored dividends from t0 onward become an explicit spec (re-based to
    period 0) with the geometric limit rate as declared tail decay; iterating
    cfg from p0 must reproduce the stored path.
    """
    if path.p_theta is None or path.t0 is None:
        raise ValueError("build_perturbed must run first")
    t0 = path.t0
    decay = path.spec.sigma ** ((1.0 - 2.0 * path.alpha) / (1.0 - path.alpha))
    tech = (ProductionTech(A=path.A, alpha=path.alpha, theta=path.theta)
            if path.theta else ProductionTech(A=path.A, alpha=path.alpha))
    cfg = EconomyConfig(
        G=path.G, tech=tech,
        savings=LogUtility(beta=path.beta),
        dividends=ExplicitDividends(values=tuple(path.d_theta[t0:]),
                                    start=0, decay=decay),
        k0=float(path.k[t0]))
    return cfg, float(path.p_theta[t0])
