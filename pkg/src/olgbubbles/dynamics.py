"""Forward iteration of the detrended equilibrium system and price decomposition.

Per period, next capital comes from asset-market clearing at the current
(k, p), then the price updates through the no-arbitrage return at the new
capital:

    k_{t+1} = g(k_t, p_t)
    p_{t+1} = (f'(k_{t+1})/G) * p_t - d_{t+1}

The price splits into fundamental value (discounted future dividends) plus a
bubble component, computed here with a certified truncation.
"""

import dataclasses
import math
from dataclasses import dataclass

import numpy as np

from . import kernel
from .core import EconomyConfig, eval_f, solve_g, wage

#: convergence threshold on state change and dividends (detrended units)
TOL_CONV = 1e-12

#: truncation certificate target for fundamental values
TOL_V = 1e-10

#: negativity trigger; slightly below zero to absorb rounding
PRICE_FLOOR = -1e-12

HORIZON = "horizon"
CAPITAL_NONPOSITIVE = "capital-nonpositive"
PRICE_NEGATIVE = "price-negative"
CONVERGED = "converged"

_STATUS = {
    kernel.HORIZON: HORIZON,
    kernel.CAPITAL_DEATH: CAPITAL_NONPOSITIVE,
    kernel.PRICE_NEGATIVE: PRICE_NEGATIVE,
    kernel.CONVERGED: CONVERGED,
}

CSV_HEADER = "t,k,p,d,R,w,v,b"


class TailNotSummable(ValueError):
    """Declared dividend decay outpaces the terminal discount rate."""


@dataclass(frozen=True)
class Termination:
    """Why iteration stopped. t is the period that failed to materialize
    (capital/price tags) and (k, p) the limit state for the converged tag."""

    kind: str
    t: int | None = None
    k: float | None = None
    p: float | None = None


@dataclass(frozen=True)
class TrajectoryRecord:
    t: int
    k: float
    p: float
    d: float
    R: float
    w: float
    v: float = math.nan
    b: float = math.nan


@dataclass
class Trajectory:
    records: list
    termination: Termination
    config: EconomyConfig | None = None

    def __len__(self):
        return len(self.records)

    def column(self, name):
        return np.array([getattr(r, name) for r in self.records])


def dividend_array(cfg: EconomyConfig, T: int):
    """Detrended dividends d[0..T] as one array.

    Geometric/explicit tails are built by cumulative multiplication so the
    values match a per-period `d *= ratio` loop bit for bit.
    """
    div = cfg.dividends
    kind = type(div).__name__
    if kind == "ZeroDividends":
        return np.zeros(T + 1)
    if kind == "GeometricDividends":
        seed = np.empty(T + 1)
        seed[0] = div.D0
        seed[1:] = div.Gd / cfg.G
        return np.cumprod(seed)
    if kind == "ExplicitDividends":
        head = np.asarray(div.values[: T + 1], dtype=float)
        n_tail = T + 1 - head.size
        if n_tail <= 0:
            return head.copy()
        seed = np.empty(n_tail + 1)
        seed[0] = div.values[-1]
        seed[1:] = div.decay
        return np.concatenate([head, np.cumprod(seed)[1:]])
    return np.array([div.detrended(t, cfg.G) for t in range(T + 1)])


def iterate(cfg: EconomyConfig, p0: float, T: int, *,
            tol_conv=TOL_CONV, price_floor=PRICE_FLOOR) -> Trajectory:
    """Run the system for up to T periods from (cfg.k0, p0).

    Stops early when no positive next capital exists, when the price crosses
    the negativity trigger, or when the state has stopped moving and
    dividends are negligible.
    """
    if T < 1:
        raise ValueError(f"horizon must be >= 1, got {T}")
    if p0 < 0.0:
        raise ValueError(f"p0 must be >= 0, got {p0}")
    d = dividend_array(cfg, T)
    if cfg.savings.is_log:
        ks = np.empty(T + 1)
        ps = np.empty(T + 1)
        tech = cfg.tech
        status, n = kernel.simulate(
            tech.A, tech.alpha, tech.theta, cfg.savings.beta, cfg.G,
            cfg.k0, p0, d, T, tol_conv, price_floor, ks, ps)
        ks, ps = ks[:n], ps[:n]
    else:
        status, ks, ps = _iterate_generic(cfg, p0, d, T, tol_conv, price_floor)
        n = len(ks)

    records = []
    for t in range(n):
        f, fp, _ = eval_f(cfg.tech, ks[t])
        records.append(TrajectoryRecord(
            t=t, k=float(ks[t]), p=float(ps[t]), d=float(d[t]),
            R=fp, w=f - ks[t] * fp))
    kind = _STATUS[status]
    if kind == HORIZON:
        term = Termination(HORIZON)
    elif kind == CONVERGED:
        term = Termination(CONVERGED, t=n - 1, k=records[-1].k, p=records[-1].p)
    else:
        term = Termination(kind, t=n)
    return Trajectory(records=records, termination=term, config=cfg)


def _iterate_generic(cfg, p0, d, T, tol_conv, price_floor):
    # slow path for custom savings rules: one implicit solve per period
    ks = [cfg.k0]
    ps = [p0]
    k, p = cfg.k0, p0
    for t in range(T):
        x = solve_g(cfg, k, p)
        if x is None:
            return kernel.CAPITAL_DEATH, np.array(ks), np.array(ps)
        _, fp, _ = eval_f(cfg.tech, x)
        pn = (fp / cfg.G) * p - d[t + 1]
        if pn < price_floor:
            return kernel.PRICE_NEGATIVE, np.array(ks), np.array(ps)
        ks.append(x)
        ps.append(pn)
        dk, dp = abs(x - k), abs(pn - p)
        k, p = x, pn
        if dk < tol_conv and dp < tol_conv and d[t + 1] < tol_conv:
            return kernel.CONVERGED, np.array(ks), np.array(ps)
    return kernel.HORIZON, np.array(ks), np.array(ps)


def discounted_dividend_value(R, d, G, tail_ratio):
    """Backward recursion v_t = (G/R_{t+1})(d_{t+1} + v_{t+1}) over recorded
    rates and dividends, seeded with a geometric continuation past the last
    record.

    Returns (v, bound): v[t] equals the full sum of recorded terms after t at
    realized rates plus the continuation; bound[t] is the continuation's
    contribution discounted back to t, certifying v against truncation under
    the declared per-period dividend decay tail_ratio.
    """
    R = np.asarray(R, dtype=float)
    d = np.asarray(d, dtype=float)
    if not 0.0 <= tail_ratio < 1.0:
        raise ValueError(f"tail_ratio must be in [0,1), got {tail_ratio}")
    if not (R > 0.0).all():
        raise ValueError("fundamental values need R > 0 at every record")
    n = len(d)
    q = tail_ratio * G / R[-1]
    if q >= 1.0:
        raise TailNotSummable(
            f"tail term ratio {q} >= 1 (declared decay {tail_ratio}, "
            f"terminal R {R[-1]})")
    v = np.empty(n)
    bound = np.empty(n)
    v[-1] = d[-1] * q / (1.0 - q)
    bound[-1] = v[-1]
    for t in range(n - 2, -1, -1):
        disc = G / R[t + 1]
        v[t] = disc * (d[t + 1] + v[t + 1])
        bound[t] = disc * bound[t + 1]
    return v, bound


def fundamental_value(traj: Trajectory, tail_ratio: float | None = None):
    """Discounted future dividends per recorded period of a trajectory.

    tail_ratio is the per-period detrended dividend decay past the horizon;
    it defaults to the declared decay of the config's dividend spec. See
    discounted_dividend_value for the returned (v, bound) pair.
    """
    if not traj.records:
        raise ValueError("empty trajectory")
    if tail_ratio is None:
        if traj.config is None:
            raise ValueError("tail_ratio required when trajectory has no config")
        tail_ratio = traj.config.dividends.tail_ratio(traj.config.G)
    G = traj.config.G if traj.config is not None else 1.0
    return discounted_dividend_value(traj.column("R"), traj.column("d"),
                                     G, tail_ratio)


def with_fundamental_values(traj: Trajectory, tail_ratio: float | None = None):
    """Copy of the trajectory with v and b = p - v filled in."""
    v, _ = fundamental_value(traj, tail_ratio)
    records = [dataclasses.replace(r, v=float(v[t]), b=float(r.p - v[t]))
               for t, r in enumerate(traj.records)]
    return Trajectory(records=records, termination=traj.termination,
                      config=traj.config)


@dataclass(frozen=True)
class FeasibilityReport:
    ok: bool
    violations: list


def check_feasibility_bound(traj: Trajectory) -> FeasibilityReport:
    """Check G*k_{t+1} <= f(k_t) and p_t <= f(k_t) on every recorded period."""
    cfg = traj.config
    G = cfg.G if cfg is not None else 1.0
    violations = []
    for t, r in enumerate(traj.records):
        f_t = r.w + r.k * r.R
        if r.p > f_t:
            violations.append((t, "price-exceeds-output", r.p, f_t))
        if t + 1 < len(traj.records):
            lhs = G * traj.records[t + 1].k
            if lhs > f_t:
                violations.append((t, "capital-exceeds-output", lhs, f_t))
    return FeasibilityReport(ok=not violations, violations=violations)


@dataclass(frozen=True)
class ResidualReport:
    ok: bool
    max_capital_residual: float
    max_price_residual: float
    max_noarbitrage_residual: float
    violations: list


def verify_records(cfg: EconomyConfig, ks, ps, ds, *, tol=1e-9):
    """Residuals of the equilibrium system on externally supplied columns.

    Checks the capital map, the price recursion and the rearranged
    no-arbitrage identity p_{t-1} = (G/R_t)(p_t + d_t) against tol.
    """
    ks = np.asarray(ks, dtype=float)
    ps = np.asarray(ps, dtype=float)
    ds = np.asarray(ds, dtype=float)
    violations = []
    max_k = max_p = max_na = 0.0
    for t in range(len(ks) - 1):
        x = solve_g(cfg, ks[t], max(ps[t], 0.0))
        rk = abs(x - ks[t + 1]) if x is not None else math.inf
        _, fp, _ = eval_f(cfg.tech, ks[t + 1])
        rp = abs(ps[t + 1] - ((fp / cfg.G) * ps[t] - ds[t + 1]))
        rna = abs(ps[t] - (cfg.G / fp) * (ps[t + 1] + ds[t + 1]))
        max_k = max(max_k, rk)
        max_p = max(max_p, rp)
        max_na = max(max_na, rna)
        if rk > tol:
            violations.append((t, "capital-map", rk))
        if rp > tol:
            violations.append((t, "price-recursion", rp))
        if rna > tol:
            violations.append((t, "no-arbitrage", rna))
    return ResidualReport(ok=not violations, max_capital_residual=float(max_k),
                          max_price_residual=float(max_p),
                          max_noarbitrage_residual=float(max_na),
                          violations=violations)


def format_number(x: float) -> str:
    """Shortest decimal that round-trips the double (<= 17 significant digits)."""
    return repr(float(x))


def write_csv(traj: Trajectory, path, extra_columns=None):
    """Write the trajectory as CSV; extra_columns maps name -> array."""
    extra_columns = extra_columns or {}
    header = CSV_HEADER
    if extra_columns:
        header = header + "," + ",".join(extra_columns)
    lines = [header]
    for i, r in enumerate(traj.records):
        row = [str(r.t)] + [format_number(x)
                            for x in (r.k, r.p, r.d, r.R, r.w, r.v, r.b)]
        row += [format_number(col[i]) for col in extra_columns.values()]
        lines.append(",".join(row))
    text = "\n".join(lines) + "\n"
    with open(path, "w") as fh:
        fh.write(text)
    return text


def read_csv_columns(path):
    """Parse a trajectory CSV back into a dict of numpy columns."""
    with open(path) as fh:
        lines = [ln.strip() for ln in fh if ln.strip()]
    names = lines[0].split(",")
    cols = {name: [] for name in names}
    for ln in lines[1:]:
        parts = ln.split(",")
        if len(parts) != len(names):
            raise ValueError(f"malformed row: {ln!r}")
        for name, part in zip(names, parts):
            cols[name].append(float(part))
    return {name: np.array(vals) for name, vals in cols.items()}
