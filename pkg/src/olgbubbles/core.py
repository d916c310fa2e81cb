"""Domain types and primitives of the detrended OLG capital/asset economy.

All quantities are per-capita ("detrended"): aggregate capital, asset price
and dividends divided by the population factor G^t. Everything here is an
immutable value object or a pure function, safe to share across threads.
"""

import math
import random
from dataclasses import dataclass, field
from typing import Callable

COBB_DOUGLAS = "cobb-douglas"
PERTURBED = "perturbed"

#: residual tolerance for the implicit next-capital solve (detrended units)
TOL_RES = 1e-10

#: capital level at which f'(k) < G is checked to rule out diverging paths
K_MAX_CHECK = 1e9


class DomainError(ValueError):
    """Input outside an operation's domain (nonpositive capital or wage)."""


def _log_term(k):
    # log(1 + 1/k), stable for k anywhere in (0, inf): log1p avoids
    # cancellation at large k, the split form avoids overflow of 1/k at
    # tiny k.
    if k > 1.0:
        return math.log1p(1.0 / k)
    return math.log1p(k) - math.log(k)


def perturbation_term(k):
    """The concave production perturbation k*log(1 + 1/k).

    Increases from 0 (as k -> 0+) to 1 (as k -> inf), with unbounded slope
    at the origin.
    """
    if k <= 0.0:
        raise DomainError(f"capital must be positive, got {k}")
    return k * _log_term(k)


@dataclass(frozen=True)
class ProductionTech:
    """Per-capita production function A*k^alpha + theta*k*log(1 + 1/k).

    theta = 0 is plain Cobb-Douglas (with full depreciation). theta > 0 adds
    a bounded concave term that props up the wage away from k = 0 without
    changing behavior near the origin.
    """

    A: float
    alpha: float
    theta: float = 0.0

    def __post_init__(self):
        if not self.A > 0.0:
            raise ValueError(f"A must be positive, got {self.A}")
        if not 0.0 < self.alpha < 1.0:
            raise ValueError(f"alpha must be in (0,1), got {self.alpha}")
        if self.theta < 0.0:
            raise ValueError(f"theta must be >= 0, got {self.theta}")

    @property
    def kind(self):
        return COBB_DOUGLAS if self.theta == 0.0 else PERTURBED

    @classmethod
    def cobb_douglas(cls, A, alpha):
        return cls(A=A, alpha=alpha)

    @classmethod
    def perturbed(cls, A, alpha, theta):
        if not theta > 0.0:
            raise ValueError(f"perturbed technology needs theta > 0, got {theta}")
        return cls(A=A, alpha=alpha, theta=theta)


def eval_f(tech: ProductionTech, k: float):
    """Evaluate (f, f', f'') at k > 0."""
    if k <= 0.0:
        raise DomainError(f"capital must be positive, got {k}")
    A, alpha, theta = tech.A, tech.alpha, tech.theta
    f = A * k**alpha
    fp = A * alpha * k ** (alpha - 1.0)
    fpp = A * alpha * (alpha - 1.0) * k ** (alpha - 2.0)
    if theta != 0.0:
        lt = _log_term(k)
        f += theta * (k * lt)
        fp += theta * (lt - 1.0 / (1.0 + k))
        fpp -= theta / (k * (1.0 + k) ** 2)
    return f, fp, fpp


def wage(tech: ProductionTech, k: float):
    """f(k) - k*f'(k), in the cancellation-free closed form."""
    if k <= 0.0:
        raise DomainError(f"capital must be positive, got {k}")
    w = tech.A * (1.0 - tech.alpha) * k**tech.alpha
    if tech.theta != 0.0:
        w += tech.theta * k / (1.0 + k)
    return w


@dataclass(frozen=True)
class LogUtility:
    """Savings rule from log preferences: s(w, R) = beta*w, independent of R."""

    beta: float

    def __post_init__(self):
        if not 0.0 < self.beta < 1.0:
            raise ValueError(f"beta must be in (0,1), got {self.beta}")

    is_log = True

    def savings(self, w, R):
        return self.beta * w

    def savings_w(self, w, R):
        return self.beta

    def savings_R(self, w, R):
        return 0.0


@dataclass(frozen=True)
class CustomSavings:
    """User-supplied savings rule s(w, R), with optional derivative evaluators.

    Missing derivatives fall back to central differences with step
    1e-6*max(1, |argument|). The rule must satisfy 0 <= s <= w, s_w > 0 and
    s_R >= 0; use validate_savings_rule to spot-check.
    """

    fn: Callable[[float, float], float]
    fn_w: Callable[[float, float], float] | None = None
    fn_R: Callable[[float, float], float] | None = None

    is_log = False

    def savings(self, w, R):
        return self.fn(w, R)

    def savings_w(self, w, R):
        if self.fn_w is not None:
            return self.fn_w(w, R)
        h = 1e-6 * max(1.0, abs(w))
        lo = max(w - h, 1e-300)
        return (self.fn(w + h, R) - self.fn(lo, R)) / (w + h - lo)

    def savings_R(self, w, R):
        if self.fn_R is not None:
            return self.fn_R(w, R)
        h = 1e-6 * max(1.0, abs(R))
        lo = max(R - h, 1e-300)
        return (self.fn(w, R + h) - self.fn(w, lo)) / (R + h - lo)


def eval_savings(rule, w, R):
    """Evaluate the savings rule at wage w > 0 and gross rate R > 0."""
    if w <= 0.0:
        raise DomainError(f"wage must be positive, got {w}")
    if R <= 0.0:
        raise DomainError(f"gross interest must be positive, got {R}")
    return rule.savings(w, R)


@dataclass(frozen=True)
class SavingsValidation:
    ok: bool
    samples: int
    violations: list = field(default_factory=list)


def validate_savings_rule(rule, samples=1000, seed=0,
                          w_range=(1e-3, 10.0), R_range=(1e-2, 10.0)):
    """Spot-check 0 <= s <= w, s_w > 0 and s_R >= 0 on random (w, R) pairs."""
    rng = random.Random(seed)
    violations = []
    for _ in range(samples):
        w = math.exp(rng.uniform(math.log(w_range[0]), math.log(w_range[1])))
        R = math.exp(rng.uniform(math.log(R_range[0]), math.log(R_range[1])))
        s = rule.savings(w, R)
        if not 0.0 <= s <= w:
            violations.append((w, R, "bounds", s))
            continue
        if not rule.savings_w(w, R) > 0.0:
            violations.append((w, R, "s_w", rule.savings_w(w, R)))
        if rule.savings_R(w, R) < 0.0:
            violations.append((w, R, "s_R", rule.savings_R(w, R)))
    return SavingsValidation(ok=not violations, samples=samples,
                             violations=violations)


@dataclass(frozen=True)
class ZeroDividends:
    """No dividends ever: a pure bubble asset."""

    def detrended(self, t, G):
        return 0.0

    def tail_ratio(self, G):
        return 0.0


@dataclass(frozen=True)
class GeometricDividends:
    """Aggregate dividends D0*Gd^t; detrended d_t = D0*(Gd/G)^t."""

    D0: float
    Gd: float

    def __post_init__(self):
        if self.D0 < 0.0:
            raise ValueError(f"D0 must be >= 0, got {self.D0}")
        if not self.Gd > 0.0:
            raise ValueError(f"Gd must be positive, got {self.Gd}")

    def detrended(self, t, G):
        return self.D0 * (self.Gd / G) ** t

    def tail_ratio(self, G):
        return self.Gd / G


@dataclass(frozen=True)
class ExplicitDividends:
    """Stored detrended dividend prefix plus a declared asymptotic decay.

    values[i] is the detrended dividend at period start + i; beyond the
    prefix, dividends extrapolate geometrically at the declared per-period
    ratio `decay`.
    """

    values: tuple
    start: int = 0
    decay: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(float(v) for v in self.values))
        if not self.values:
            raise ValueError("explicit dividends need at least one value")
        if any(v < 0.0 for v in self.values):
            raise ValueError("dividends must be >= 0")
        if not 0.0 <= self.decay < 1.0:
            raise ValueError(f"declared decay must be in [0,1), got {self.decay}")

    def detrended(self, t, G):
        i = t - self.start
        if i < 0:
            return 0.0
        if i < len(self.values):
            return self.values[i]
        return self.values[-1] * self.decay ** (i - len(self.values) + 1)

    def tail_ratio(self, G):
        return self.decay


@dataclass(frozen=True)
class EconomyConfig:
    """One economy: growth rate, technology, savings rule, dividends, k0."""

    G: float
    tech: ProductionTech
    savings: object
    dividends: object
    k0: float

    def __post_init__(self):
        if not self.G > 0.0:
            raise ValueError(f"G must be positive, got {self.G}")
        if not self.k0 > 0.0:
            raise ValueError(f"k0 must be positive, got {self.k0}")
        if isinstance(self.dividends, GeometricDividends):
            if not self.dividends.Gd < self.G:
                raise ValueError(
                    f"Gd must be below G, got Gd={self.dividends.Gd}, G={self.G}")
        # rules out diverging capital paths (finite-k proxy for the
        # asymptotic slope condition)
        _, fp_far, _ = eval_f(self.tech, K_MAX_CHECK)
        if not fp_far < self.G:
            raise ValueError(
                f"f'({K_MAX_CHECK:g}) = {fp_far} must be below G = {self.G}")


@dataclass(frozen=True)
class StateVector:
    """State of the three-dimensional equilibrium system (k, p, d)."""

    k: float
    p: float
    d: float


def solve_g(cfg: EconomyConfig, k: float, p: float):
    """Next-period capital x solving G*x + p = s(w(k), f'(x)).

    Returns x > 0, or None when no positive solution exists (savings cannot
    carry both the capital stock and the asset position). None is a normal
    outcome, not an error: the shooter classifies on it.
    """
    if k <= 0.0:
        raise DomainError(f"capital must be positive, got {k}")
    if p < 0.0:
        raise DomainError(f"price must be >= 0, got {p}")
    w = wage(cfg.tech, k)
    if cfg.savings.is_log:
        x = (cfg.savings.beta * w - p) / cfg.G
        return x if x > 0.0 else None

    # Custom rule: the residual G*x + p - s(w, f'(x)) is strictly increasing
    # in x, so bisect on [tiny, f(k)/G]; s <= w < f(k) makes the upper end
    # positive.
    def residual(x):
        _, fp, _ = eval_f(cfg.tech, x)
        return cfg.G * x + p - eval_savings(cfg.savings, w, fp)

    lo = 1e-12
    f_k, _, _ = eval_f(cfg.tech, k)
    hi = f_k / cfg.G
    if residual(lo) > 0.0:
        return None
    if residual(hi) < 0.0:
        return None
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        r = residual(mid)
        if abs(r) <= TOL_RES:
            return mid
        if r > 0.0:
            hi = mid
        else:
            lo = mid
    mid = 0.5 * (lo + hi)
    return mid if abs(residual(mid)) <= TOL_RES else None


def g_residual(cfg: EconomyConfig, x: float, k: float, p: float):
    """Market-clearing residual G*x + p - s(w(k), f'(x)) at candidate x."""
    _, fp, _ = eval_f(cfg.tech, x)
    return cfg.G * x + p - eval_savings(cfg.savings, wage(cfg.tech, k), fp)


def g_partials(cfg: EconomyConfig, k: float, p: float):
    """(dg/dk, dg/dp) at (k, p): closed form under log utility, else central
    finite differences with step 1e-7*max(1, scale)."""
    if cfg.savings.is_log:
        _, _, fpp = eval_f(cfg.tech, k)
        return cfg.savings.beta * (-k * fpp) / cfg.G, -1.0 / cfg.G
    hk = 1e-7 * max(1.0, abs(k))
    hp = 1e-7 * max(1.0, abs(p))
    gk = (solve_g(cfg, k + hk, p) - solve_g(cfg, k - hk, p)) / (2.0 * hk)
    p_lo = max(p - hp, 0.0)
    gp = (solve_g(cfg, k + 0.0, p + hp) - solve_g(cfg, k, p_lo)) / (p + hp - p_lo)
    return gk, gp
