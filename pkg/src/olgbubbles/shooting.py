"""Saddle-path shooting: find the unique equilibrium initial price.

Monotone comparative statics order trial paths by p0, which validates
bisection: too-high trials kill capital, too-low trials drive the price
negative or park at a bubbleless rest point. The knife-edge in between is
the equilibrium. Any double-representable p0 eventually falls off the
saddle path (the unstable root amplifies the bracket error), so convergence
to the bubbly steady state is witnessed by the closest recorded approach,
and the returned equilibrium trajectory ends at the last period still
within tolerance of (k*, p*).
"""

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import dynamics, kernel, steady_state
from .core import (EconomyConfig, GeometricDividends, ZeroDividends, eval_f,
                   solve_g, wage)

TOO_HIGH = "too-high"
TOO_LOW = "too-low"
CONVERGED_BUBBLY = "converged-bubbly"
CONVERGED_BUBBLELESS = "converged-bubbleless"
UNDECIDED = "undecided"

#: relative bisection target on p0; the unstable eigenvalue amplifies any
#: looser bracket past usable horizons
TOL_P0_REL = 1e-14

T_MAX = 20_000

_EPS = 2.220446049250313e-16


class BracketError(RuntimeError):
    """Both bisection endpoints classify on the same side."""

    def __init__(self, low_outcome, high_outcome):
        super().__init__(
            f"endpoints do not straddle the saddle path: "
            f"p0=0 -> {low_outcome.classification}, "
            f"p0=p_hi -> {high_outcome.classification}")
        self.low_outcome = low_outcome
        self.high_outcome = high_outcome


class InconclusiveShot(RuntimeError):
    """A trial stayed undecided at the maximum horizon."""


@dataclass(frozen=True)
class ShotOutcome:
    """Classification of one trial initial price."""

    p0: float
    classification: str
    t: int | None = None        # exit period / closest-approach period
    min_dist: float = math.inf  # closest sup-norm approach to (k*, p*)
    argmin_t: int = 0
    k_end: float = math.nan
    p_end: float = math.nan

    @property
    def side(self):
        if self.classification == TOO_HIGH:
            return "high"
        if self.classification in (TOO_LOW, CONVERGED_BUBBLELESS):
            return "low"
        return None


@dataclass
class ShootResult:
    p0_star: float
    trajectory: dynamics.Trajectory
    bracket: tuple
    outcome: ShotOutcome
    k_star: float
    p_star: float
    p_hi: float
    horizon: int
    trials: int

    @property
    def in_omega(self):
        return self.outcome.classification == CONVERGED_BUBBLY


def _scan(cfg, p0, d0, ratio, T, k_star, p_star):
    if cfg.savings.is_log:
        tech = cfg.tech
        return kernel.shoot_scan(tech.A, tech.alpha, tech.theta,
                                 cfg.savings.beta, cfg.G, cfg.k0, p0,
                                 d0, ratio, T, k_star, p_star)
    return _scan_generic(cfg, p0, d0, ratio, T, k_star, p_star)


def _scan_generic(cfg, p0, d0, ratio, T, k_star, p_star):
    k, p, dv = cfg.k0, p0, d0
    min_dist = max(abs(k - k_star), abs(p - p_star))
    argmin = 0
    for t in range(T):
        x = solve_g(cfg, k, max(p, 0.0))
        if x is None:
            return kernel.CAPITAL_DEATH, t + 1, min_dist, argmin, k, p
        dv *= ratio
        _, fp, _ = eval_f(cfg.tech, x)
        rg = fp / cfg.G
        pn = rg * p - dv
        if pn < -1e-12 or pn < -1000.0 * _EPS * (rg * abs(p) + dv):
            return kernel.PRICE_NEGATIVE, t + 1, min_dist, argmin, x, pn
        k, p = x, pn
        dist = max(abs(k - k_star), abs(p - p_star))
        if dist < min_dist:
            min_dist, argmin = dist, t + 1
    return kernel.HORIZON, T, min_dist, argmin, k, p


def _geometric_params(cfg):
    div = cfg.dividends
    if isinstance(div, GeometricDividends):
        return div.D0, div.Gd / cfg.G
    if isinstance(div, ZeroDividends):
        return 0.0, 0.0
    raise ValueError("shooting requires geometric (or zero) dividends")


def classify_trial(cfg, p0, T, k_star, p_star, tol_omega,
                   bubbleless=None, t_max=T_MAX):
    """Run one trial price and classify it, doubling the horizon while the
    evidence is inconclusive."""
    d0, ratio = _geometric_params(cfg)
    horizon = T
    while True:
        status, t_stop, min_dist, argmin, k_end, p_end = _scan(
            cfg, p0, d0, ratio, horizon, k_star, p_star)
        if status == kernel.CAPITAL_DEATH:
            return ShotOutcome(p0, TOO_HIGH, t=t_stop, min_dist=min_dist,
                               argmin_t=argmin, k_end=k_end, p_end=p_end)
        if status == kernel.PRICE_NEGATIVE:
            return ShotOutcome(p0, TOO_LOW, t=t_stop, min_dist=min_dist,
                               argmin_t=argmin, k_end=k_end, p_end=p_end)
        if p_end < 0.0 or _near_bubbleless(cfg, k_end, p_end, bubbleless):
            return ShotOutcome(p0, CONVERGED_BUBBLELESS, t=t_stop,
                               min_dist=min_dist, argmin_t=argmin,
                               k_end=k_end, p_end=p_end)
        if max(abs(k_end - k_star), abs(p_end - p_star)) < tol_omega:
            return ShotOutcome(p0, CONVERGED_BUBBLY, t=t_stop,
                               min_dist=min_dist, argmin_t=argmin,
                               k_end=k_end, p_end=p_end)
        if horizon >= t_max:
            return ShotOutcome(p0, UNDECIDED, t=horizon, min_dist=min_dist,
                               argmin_t=argmin, k_end=k_end, p_end=p_end)
        horizon = min(2 * horizon, t_max)


def _near_bubbleless(cfg, k_end, p_end, bubbleless, rel=1e-6):
    if abs(p_end) > rel * max(1.0, abs(k_end)):
        return False
    if bubbleless is None:
        bubbleless = steady_state.bubbleless_steady_states(cfg)
    return any(abs(k_end - kb) < rel * max(1.0, kb) for kb, _ in bubbleless)


def shoot(cfg: EconomyConfig, T=2000, tol_p0=TOL_P0_REL, *,
          tol_omega=None, t_max=T_MAX) -> ShootResult:
    """Bisect the initial price to the saddle path.

    The bracket starts at [0, p_hi] with p_hi the savings ceiling (no trial
    above it can finance any capital). Each midpoint is classified and the
    matching endpoint moves; the ordering that justifies this is asserted on
    the endpoints up front, not assumed. Returns the midpoint trial once the
    bracket is narrower than tol_p0 (relative to p_hi).

    The result's trajectory is the midpoint path truncated at its last
    period within tol_omega of (k*, p*) when it reaches the steady state;
    otherwise the full path. in_omega equates "bisection limit approaches
    (k*, p*)" with membership, which presumes equilibrium uniqueness.
    """
    ss = steady_state.bubbly_steady_state(cfg)
    if ss is None:
        raise ValueError("no bubbly steady state: shooting has no target")
    k_star, p_star = ss
    if tol_omega is None:
        tol_omega = 1e-6 * max(1.0, k_star, p_star)
    bubbleless = steady_state.bubbleless_steady_states(cfg)
    if cfg.savings.is_log:
        p_hi = cfg.savings.beta * wage(cfg.tech, cfg.k0)
    else:
        p_hi = eval_f(cfg.tech, cfg.k0)[0]
    tol_abs = tol_p0 * p_hi

    lo, hi = 0.0, p_hi
    low_out = classify_trial(cfg, lo, T, k_star, p_star, tol_omega,
                             bubbleless, t_max)
    high_out = classify_trial(cfg, hi, T, k_star, p_star, tol_omega,
                              bubbleless, t_max)
    if low_out.side == high_out.side or low_out.side == "high" \
            or high_out.side == "low":
        raise BracketError(low_out, high_out)
    trials = 2
    while hi - lo > tol_abs:
        mid = 0.5 * (lo + hi)
        out = classify_trial(cfg, mid, T, k_star, p_star, tol_omega,
                             bubbleless, t_max)
        trials += 1
        if out.side == "high":
            hi = mid
        elif out.side == "low":
            lo = mid
        elif out.classification == CONVERGED_BUBBLY:
            lo = hi = mid     # landed within resolution of the saddle path
        else:
            raise InconclusiveShot(
                f"trial p0={mid!r} undecided at horizon {t_max}: {out}")
    p0_star = 0.5 * (lo + hi)

    traj = dynamics.iterate(cfg, p0_star, T)
    ks = traj.column("k")
    ps = traj.column("p")
    dist = np.maximum(np.abs(ks - k_star), np.abs(ps - p_star))
    argmin = int(dist.argmin())
    min_dist = float(dist[argmin])
    if min_dist < tol_omega:
        t_last = int(np.nonzero(dist < tol_omega)[0][-1])
        traj = dynamics.Trajectory(
            records=traj.records[: t_last + 1],
            termination=dynamics.Termination(dynamics.CONVERGED, t=t_last,
                                             k=k_star, p=p_star),
            config=cfg)
        outcome = ShotOutcome(p0_star, CONVERGED_BUBBLY, t=t_last,
                              min_dist=min_dist, argmin_t=argmin,
                              k_end=float(ks[t_last]), p_end=float(ps[t_last]))
    else:
        outcome = classify_trial(cfg, p0_star, T, k_star, p_star, tol_omega,
                                 bubbleless, t_max)
    return ShootResult(p0_star=p0_star, trajectory=traj, bracket=(lo, hi),
                       outcome=outcome, k_star=k_star, p_star=p_star,
                       p_hi=p_hi, horizon=T, trials=trials)


BUBBLELESS = "bubbleless"
ASYMPTOTICALLY_BUBBLELESS = "asymptotically-bubbleless"
ASYMPTOTICALLY_BUBBLY = "asymptotically-bubbly"


def classify_longrun(traj: dynamics.Trajectory,
                     report: steady_state.SteadyStateReport, *, tol=1e-6):
    """Long-run label for a recorded path (finite-horizon evidence only).

    'asymptotically-bubbly': final state within tol of (k*, p*).
    'asymptotically-bubbleless': final state within tol of (k, 0) for a
    bubbleless k with R <= G.
    'bubbleless': price decayed to ~0 while R_t stayed above G on the tail
    (capital need not settle anywhere; it may collapse to zero).
    """
    if not traj.records:
        return UNDECIDED
    last = traj.records[-1]
    G = traj.config.G if traj.config is not None else 1.0
    if report.bubbly is not None:
        k_star, p_star = report.bubbly
        if max(abs(last.k - k_star), abs(last.p - p_star)) \
                < tol * max(1.0, k_star, p_star):
            return ASYMPTOTICALLY_BUBBLY
    if abs(last.p) < tol:
        for kb, Rb in report.bubbleless:
            if abs(last.k - kb) < tol * max(1.0, kb) and Rb <= G * (1.0 + 1e-9):
                return ASYMPTOTICALLY_BUBBLELESS
        tail = traj.records[max(0, len(traj.records) - max(1, len(traj.records) // 4)):]
        if all(r.R > G for r in tail):
            return BUBBLELESS
    return UNDECIDED


@dataclass(frozen=True)
class OmegaProbe:
    k0: float
    D0: float
    in_omega: bool
    p0_star: float | None
    final_dist: float
    horizon: int
    error: str | None = None


OMEGA_CSV_HEADER = "k0,D0,in_omega,p0_star,final_dist,horizon"


def _probe_one(args):
    (G, tech, savings, k0, D0, Gd, T) = args
    cfg = EconomyConfig(G=G, tech=tech, savings=savings,
                        dividends=(GeometricDividends(D0=D0, Gd=Gd) if D0 > 0.0
                                   else ZeroDividends()),
                        k0=k0)
    try:
        res = shoot(cfg, T=T)
    except (BracketError, InconclusiveShot, ValueError) as exc:
        return OmegaProbe(k0=k0, D0=D0, in_omega=False, p0_star=None,
                          final_dist=math.inf, horizon=T, error=str(exc))
    return OmegaProbe(k0=k0, D0=D0, in_omega=res.in_omega,
                      p0_star=res.p0_star, final_dist=res.outcome.min_dist,
                      horizon=res.horizon)


def probe_omega(cfg: EconomyConfig, k0_grid, D0_grid, T=2000, jobs=1):
    """Shoot every (k0, D0) grid point; per-point failures are recorded, not
    raised. Grid order is row-major in (k0, D0) and independent of jobs."""
    Gd = cfg.dividends.Gd if isinstance(cfg.dividends, GeometricDividends) \
        else 0.95 * cfg.G
    tasks = [(cfg.G, cfg.tech, cfg.savings, float(k0), float(D0), Gd, T)
             for k0 in k0_grid for D0 in D0_grid]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(_probe_one, tasks))
    return [_probe_one(t) for t in tasks]


def default_omega_grid(k_star, p_star, n_k0=20, n_D0=20):
    """k0 linear on [0.1, 2]*k*, D0 log on [1e-8, 1e-1]*p*."""
    k0s = np.linspace(0.1 * k_star, 2.0 * k_star, n_k0)
    D0s = np.logspace(math.log10(1e-8 * p_star), math.log10(1e-1 * p_star),
                      n_D0)
    return k0s, D0s


def write_omega_csv(probes, path):
    lines = [OMEGA_CSV_HEADER]
    for pr in probes:
        p0 = "nan" if pr.p0_star is None else dynamics.format_number(pr.p0_star)
        lines.append(",".join([
            dynamics.format_number(pr.k0), dynamics.format_number(pr.D0),
            "true" if pr.in_omega else "false", p0,
            dynamics.format_number(pr.final_dist), str(pr.horizon)]))
    text = "\n".join(lines) + "\n"
    with open(path, "w") as fh:
        fh.write(text)
    return text


def estimate_k0_boundary(cfg: EconomyConfig, D0, lo, hi, T=2000, tol=1e-4):
    """Smallest k0 whose shot converges to the bubbly steady state, by
    bisection on the in_omega indicator at fixed D0. lo must probe False and
    hi True."""
    def member(k0):
        return _probe_one((cfg.G, cfg.tech, cfg.savings, k0, D0,
                           cfg.dividends.Gd if isinstance(cfg.dividends, GeometricDividends)
                           else 0.95 * cfg.G, T)).in_omega

    if member(lo) or not member(hi):
        raise ValueError("bisection needs member(lo)=False, member(hi)=True")
    while hi - lo > tol * max(1.0, hi):
        mid = 0.5 * (lo + hi)
        if member(mid):
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)


@dataclass(frozen=True)
class MonotonicityReport:
    ok: bool
    degenerate: bool
    compared: int
    first_violation: tuple | None
    bubble_ordered: bool | None


def monotonicity_check(cfg: EconomyConfig, p0, p0_prime, T) -> MonotonicityReport:
    """Order two trial paths started from p0 < p0_prime.

    Asserts k_t > k_t', p_t < p_t', R_t < R_t', w_t > w_t' on every common
    recorded period t >= 1, and (when fundamental values are computable on
    both) that the bubble components order as b_t < b_t' within the
    truncation certificates. p0 == p0_prime reports a degenerate pair.
    """
    if p0 > p0_prime:
        raise ValueError("call with p0 <= p0_prime")
    ta = dynamics.iterate(cfg, p0, T)
    tb = dynamics.iterate(cfg, p0_prime, T)
    if p0 == p0_prime:
        return MonotonicityReport(ok=True, degenerate=True, compared=0,
                                  first_violation=None, bubble_ordered=None)
    n = min(len(ta), len(tb))
    first = None
    for t in range(1, n):
        ra, rb = ta.records[t], tb.records[t]
        checks = (("k", ra.k > rb.k), ("p", ra.p < rb.p),
                  ("R", ra.R < rb.R), ("w", ra.w > rb.w))
        for name, passed in checks:
            if not passed:
                first = (t, name)
                break
        if first:
            break
    bubble_ordered = None
    if first is None and n > 1:
        try:
            va, ba = dynamics.fundamental_value(ta)
            vb, bb = dynamics.fundamental_value(tb)
            slack = ba[:n] + bb[:n] + 1e-12
            pa = ta.column("p")[:n]
            pb = tb.column("p")[:n]
            bubble_ordered = bool(
                (((pa - va[:n]) - (pb - vb[:n]))[1:] < slack[1:]).all())
        except (dynamics.TailNotSummable, ValueError):
            bubble_ordered = None
    return MonotonicityReport(ok=first is None, degenerate=False,
                              compared=max(0, n - 1), first_violation=first,
                              bubble_ordered=bubble_ordered)
