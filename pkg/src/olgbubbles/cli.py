"""Command-line front end.

Subcommands: figure1, counterexample, shoot, steady, stability, verify-path.
Exit codes: 0 success, 2 configuration or premise failure, 3 numerical
failure, 4 I/O failure. All CSV output is deterministic: identical
configuration gives byte-identical files.
"""

import argparse
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from . import config as cfgmod
from . import counterexample as cx
from . import dynamics, shooting, steady_state, svg
from .core import GeometricDividends, eval_f
from .dynamics import format_number
from .roots import NoRoot

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3
EXIT_IO = 4


def _add_common(parser):
    parser.add_argument("--config", help="key = value configuration file")
    parser.add_argument("--out", help="output directory (default: "
                        "$OLG_OUT_DIR or the working directory)")
    parser.add_argument("--horizon", type=int, help="simulation horizon")
    parser.add_argument("--jobs", type=int, default=1,
                        help="parallel workers for grid points")
    for key in ("A", "alpha", "beta", "theta", "G", "Gd", "D0", "k0", "C",
                "sigma"):
        parser.add_argument(f"--{key}", type=float, dest=key)


def build_parser():
    parser = argparse.ArgumentParser(
        prog="olgbubbles",
        description="Detrended OLG capital/asset economy: steady states, "
                    "saddle-path shooting, engineered collapse equilibria.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, fn, extra in [
        ("figure1", cmd_figure1, "production function curve (CSV + SVG)"),
        ("counterexample", cmd_counterexample,
         "engineered collapse equilibrium path (CSV + report + SVG)"),
        ("shoot", cmd_shoot, "equilibrium initial price by bisection"),
        ("steady", cmd_steady, "steady states and interest rates"),
        ("stability", cmd_stability, "Jacobian spectrum at the bubbly state"),
        ("verify-path", cmd_verify_path,
         "residual and feasibility checks on a trajectory CSV"),
    ]:
        p = sub.add_parser(name, help=extra)
        _add_common(p)
        if name == "shoot":
            p.add_argument("--omega-grid", action="store_true",
                           help="probe the 20x20 (k0, D0) grid")
        if name == "verify-path":
            p.add_argument("csv", help="trajectory CSV to check")
        p.set_defaults(fn=fn)
    return parser


def _load_config(args):
    overrides = {key: getattr(args, key, None)
                 for key in ("A", "alpha", "beta", "theta", "G", "Gd", "D0",
                             "k0", "C", "sigma", "horizon")}
    return cfgmod.load(args.config, overrides)


def _out_dir(args):
    out = args.out or os.environ.get("OLG_OUT_DIR") or "."
    os.makedirs(out, exist_ok=True)
    probe = os.path.join(out, ".writable")
    with open(probe, "w"):
        pass
    os.remove(probe)
    return out


def _write(path, text):
    with open(path, "w") as fh:
        fh.write(text)


def cmd_figure1(run, args, out):
    tech = run.tech()
    ks = np.linspace(0.0, 2.0, 401)
    if args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            fs = list(pool.map(_f_at, [(tech, k) for k in ks]))
    else:
        fs = [_f_at((tech, k)) for k in ks]
    lines = ["k,f"] + [f"{format_number(k)},{format_number(f)}"
                       for k, f in zip(ks, fs)]
    _write(os.path.join(out, "figure1.csv"), "\n".join(lines) + "\n")
    chart = svg.line_chart([("f(k)", ks, fs)], title="Production function",
                           xlabel="k", ylabel="f(k)")
    _write(os.path.join(out, "figure1.svg"), chart)
    _write(os.path.join(out, "resolved.cfg"), run.resolved_text())
    print(f"figure1: wrote figure1.csv and figure1.svg to {out}")
    return EXIT_OK


def _f_at(task):
    tech, k = task
    if k == 0.0:
        return 0.0    # limit of A*k^alpha + theta*k*log(1+1/k)
    return eval_f(tech, k)[0]


def cmd_counterexample(run, args, out):
    if run.k0 is None:
        run.k0 = 0.01
    if run.horizon is None:
        run.horizon = 1000
    premises = cx.verify_counterexample_premises(
        A=run.A, alpha=run.alpha, beta=run.beta, G=run.G, theta=run.theta,
        sigma=run.sigma)
    if not premises.ok:
        sys.stderr.write(premises.to_text())
        return EXIT_CONFIG
    try:
        spec = cx.XSequenceSpec.from_preferences(run.C, run.sigma, run.alpha,
                                                 run.beta)
        path = cx.build_x_path(spec, run.k0, run.A, run.alpha, run.beta,
                               run.G, run.horizon)
        path = cx.build_perturbed(path, run.theta)
        rates = cx.asymptotic_rates(path)
    except (cx.InvalidSpec, ValueError) as exc:
        sys.stderr.write(f"invalid counterexample parameters: {exc}\n")
        return EXIT_CONFIG
    except (cx.T0NotFound, cx.FitDomainError, ArithmeticError) as exc:
        sys.stderr.write(f"construction failed: {exc}\n")
        return EXIT_NUMERICAL

    tech = run.tech()
    R = np.array([eval_f(tech, kk)[1] for kk in path.k])
    w = np.array([eval_f(tech, kk)[0] for kk in path.k]) - path.k * R
    decay = run.sigma ** ((1.0 - 2.0 * run.alpha) / (1.0 - run.alpha))
    v, bound = dynamics.discounted_dividend_value(R, path.d_theta, run.G,
                                                  decay)
    ts = np.arange(path.horizon + 1)
    header = "t,k,p,d,R,w,v,b,p_theta,d_theta"
    rows = [header]
    for t in range(path.horizon + 1):
        rows.append(",".join(
            [str(t)] + [format_number(x) for x in (
                path.k[t], path.p[t], path.d[t], R[t], w[t], v[t],
                path.p_theta[t] - v[t], path.p_theta[t], path.d_theta[t])]))
    _write(os.path.join(out, "counterexample_path.csv"),
           "\n".join(rows) + "\n")

    report = [premises.to_text().rstrip("\n"),
              f"t0: {path.t0}",
              f"rho: {premises.rho!r}",
              f"R_theta: {premises.R_theta!r}",
              f"G_d: {premises.Gd!r}",
              f"fit window: {rates.window}"]
    for name in sorted(rates.fitted):
        report.append(f"fitted decay {name}: {rates.fitted[name]!r} "
                      f"(predicted {rates.predicted[name]!r})")
    report.append(f"max |p_theta - v| on window: "
                  f"{float(np.abs(path.p_theta[rates.window[0]:] - v[rates.window[0]:]).max())!r}")
    report.append("")
    report.append("[resolved config]")
    report.append(run.resolved_text().rstrip("\n"))
    _write(os.path.join(out, "counterexample_report.txt"),
           "\n".join(report) + "\n")
    _write(os.path.join(out, "resolved.cfg"), run.resolved_text())

    chart = svg.line_chart(
        [("k", ts, path.k), ("p_theta", ts, path.p_theta),
         ("d_theta", ts[1:], path.d_theta[1:])],
        title="Collapse equilibrium (semi-log)", xlabel="t", ylabel="level",
        ylog=True)
    _write(os.path.join(out, "counterexample_semilog.svg"), chart)
    print(f"counterexample: t0={path.t0}, fitted d_theta decay "
          f"{rates.fitted['d_theta']:.6f}; wrote outputs to {out}")
    return EXIT_OK


def cmd_shoot(run, args, out):
    if run.horizon is None:
        run.horizon = 2000
    dividends = GeometricDividends(D0=run.D0, Gd=run.Gd)
    try:
        probe_cfg = run.economy(k0=1.0, dividends=dividends)
        ss = steady_state.bubbly_steady_state(probe_cfg)
        if ss is None:
            sys.stderr.write("no bubbly steady state for this economy\n")
            return EXIT_NUMERICAL
        k_star, p_star = ss
        if run.k0 is None:
            run.k0 = k_star
        economy = run.economy(k0=run.k0, dividends=dividends)
        spectral = steady_state.spectral_analysis(economy)
        result = shooting.shoot(economy, T=run.horizon, tol_p0=run.tol_p0)
    except (cfgmod.ConfigError,) as exc:
        sys.stderr.write(f"configuration error: {exc}\n")
        return EXIT_CONFIG
    except (NoRoot, shooting.BracketError, shooting.InconclusiveShot) as exc:
        sys.stderr.write(f"numerical failure: {exc}\n")
        return EXIT_NUMERICAL

    traj = dynamics.with_fundamental_values(result.trajectory)
    dynamics.write_csv(traj, os.path.join(out, "shoot_path.csv"))
    report = [
        f"p0_star: {result.p0_star!r}",
        f"bracket: ({result.bracket[0]!r}, {result.bracket[1]!r})",
        f"k_star: {result.k_star!r}",
        f"p_star: {result.p_star!r}",
        f"classification: {result.outcome.classification}",
        f"min_dist: {result.outcome.min_dist!r}",
        f"closest_t: {result.outcome.argmin_t}",
        f"trials: {result.trials}",
        "",
        "[spectral]",
        spectral.to_text().rstrip("\n"),
        "",
        "[resolved config]",
        run.resolved_text().rstrip("\n"),
    ]
    _write(os.path.join(out, "shoot_report.txt"), "\n".join(report) + "\n")
    _write(os.path.join(out, "resolved.cfg"), run.resolved_text())

    if args.omega_grid:
        k0s, D0s = shooting.default_omega_grid(k_star, p_star)
        probes = shooting.probe_omega(economy, k0s, D0s, T=run.horizon,
                                      jobs=args.jobs)
        shooting.write_omega_csv(probes, os.path.join(out, "omega_probe.csv"))

    print(f"shoot: p0_star={result.p0_star!r} "
          f"({result.outcome.classification}, min_dist="
          f"{result.outcome.min_dist:.3g}); wrote outputs to {out}")
    return EXIT_OK


def cmd_steady(run, args, out):
    if run.k0 is None:
        run.k0 = 1.0
    try:
        economy = run.economy(k0=run.k0)
        report = steady_state.steady_state_report(economy)
    except cfgmod.ConfigError as exc:
        sys.stderr.write(f"configuration error: {exc}\n")
        return EXIT_CONFIG
    text = report.to_text()
    if (math.isclose(run.alpha, 2.0 / 3.0) and math.isclose(run.beta, 0.5)
            and math.isclose(run.G, 1.0)):
        resid = abs(1.0 - (run.A / 6.0 + run.theta / 4.0))
        text += f"identity |1 - (A/6 + theta/4)|: {resid!r}\n"
    sys.stdout.write(text)
    return EXIT_OK


def cmd_stability(run, args, out):
    if run.k0 is None:
        run.k0 = 1.0
    try:
        economy = run.economy(
            k0=run.k0, dividends=GeometricDividends(D0=run.D0, Gd=run.Gd))
        report = steady_state.spectral_analysis(economy)
    except cfgmod.ConfigError as exc:
        sys.stderr.write(f"configuration error: {exc}\n")
        return EXIT_CONFIG
    except (NoRoot, ValueError) as exc:
        sys.stderr.write(f"numerical failure: {exc}\n")
        return EXIT_NUMERICAL
    sys.stdout.write(report.to_text())
    _write(os.path.join(out, "stability.csv"),
           report.CSV_HEADER + "\n" + report.to_csv_row() + "\n")
    return EXIT_OK


def cmd_verify_path(run, args, out):
    try:
        cols = dynamics.read_csv_columns(args.csv)
    except OSError as exc:
        sys.stderr.write(f"cannot read {args.csv}: {exc}\n")
        return EXIT_IO
    except ValueError as exc:
        sys.stderr.write(f"malformed CSV: {exc}\n")
        return EXIT_CONFIG
    for need in ("k", "p", "d"):
        if need not in cols:
            sys.stderr.write(f"missing column {need!r}\n")
            return EXIT_CONFIG
    ks, ps, ds = cols["k"], cols["p"], cols["d"]
    try:
        economy = run.economy(k0=float(ks[0]))
    except cfgmod.ConfigError as exc:
        sys.stderr.write(f"configuration error: {exc}\n")
        return EXIT_CONFIG
    report = dynamics.verify_records(economy, ks, ps, ds)
    feas_bad = []
    for t in range(len(ks)):
        f_t = eval_f(economy.tech, ks[t])[0]
        if ps[t] > f_t:
            feas_bad.append((t, "price-exceeds-output"))
        if t + 1 < len(ks) and economy.G * ks[t + 1] > f_t:
            feas_bad.append((t, "capital-exceeds-output"))
    print(f"rows: {len(ks)}")
    print(f"max capital-map residual: {report.max_capital_residual!r}")
    print(f"max price-recursion residual: {report.max_price_residual!r}")
    print(f"max no-arbitrage residual: {report.max_noarbitrage_residual!r}")
    print(f"residual violations: {len(report.violations)}")
    print(f"feasibility violations: {len(feas_bad)}")
    if report.violations or feas_bad:
        for t, kind, *rest in report.violations[:10]:
            print(f"  t={t}: {kind} {rest[0] if rest else ''}")
        for t, kind in feas_bad[:10]:
            print(f"  t={t}: {kind}")
        return EXIT_NUMERICAL
    return EXIT_OK


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        run = _load_config(args)
    except cfgmod.ConfigError as exc:
        sys.stderr.write(f"configuration error: {exc}\n")
        return EXIT_CONFIG
    except OSError as exc:
        sys.stderr.write(f"cannot read config: {exc}\n")
        return EXIT_IO
    try:
        out = _out_dir(args)
    except OSError as exc:
        sys.stderr.write(f"cannot use output directory: {exc}\n")
        return EXIT_IO
    return args.fn(run, args, out)


if __name__ == "__main__":
    sys.exit(main())
