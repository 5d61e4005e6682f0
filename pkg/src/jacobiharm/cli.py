"""Command-line interface.

Every subcommand writes ``summary.json`` (schema version 1) into
``--output-dir`` plus CSV and/or JSON reports selected by ``--format``.
Exit codes: 0 success, 2 usage or invalid parameters, 3 numerical failure,
4 admissibility or case violation.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .errors import AdmissibilityError, InvalidParameterError, JacobiHarmError, NumericalError
from .io import (
    read_csv_columns,
    read_radial_csv,
    read_spectral_csv,
    read_theta,
    write_csv,
    write_json,
)
from .specfun import JacobiParams, log_plancherel_density

SCHEMA_VERSION = 1
EXIT_OK, EXIT_USAGE, EXIT_NUMERICAL, EXIT_ADMISSIBILITY = 0, 2, 3, 4


# ---------------------------------------------------------------------------
# helpers
# ---------------------------------------------------------------------------

def _params(args) -> JacobiParams:
    return JacobiParams(args.alpha, args.beta)


def _quad(args, **defaults):
    from .transforms import QuadratureSpec

    fields = {
        "t_max": getattr(args, "t_max", None),
        "lambda_max": getattr(args, "lambda_max", None),
        "points_per_panel": getattr(args, "points", None),
        "tolerance": getattr(args, "tolerance", None),
    }
    merged = dict(defaults)
    merged.update({k: v for k, v in fields.items() if v is not None})
    return QuadratureSpec(**merged)


def _config_view(args) -> dict:
    skip = {"func", "config", "output_dir"}
    return {k: v for k, v in sorted(vars(args).items()) if k not in skip}


def _finish(args, command, verdicts, results, tables=None, report=None):
    """Write ``summary.json`` and the requested reports; return the exit code."""
    out = Path(args.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    summary = {
        "schema_version": SCHEMA_VERSION,
        "command": command,
        "package_version": __version__,
        "config": _config_view(args),
        "verdicts": verdicts,
        "results": results,
    }
    write_json(out / "summary.json", summary)
    if args.format in ("csv", "both"):
        for name, (header, rows) in (tables or {}).items():
            write_csv(out / f"{name}.csv", header, rows)
    if args.format in ("json", "both") and report is not None:
        write_json(out / "report.json", report)
    return EXIT_OK


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def cmd_phi(args):
    from .jacobi import ode_residual, phi_table

    params = _params(args)
    ts = list(args.t or [])
    if args.grid:
        (col,) = read_csv_columns(args.grid, ["t"])
        ts.extend(col.tolist())
    if not ts:
        raise InvalidParameterError("give radii with --t or --grid")
    t = np.asarray(ts, dtype=float)
    lams = np.asarray(args.lam, dtype=float)
    vals, ders = phi_table(params, lams, t)
    rows = []
    for i, lam in enumerate(lams):
        pos = t > 0
        res = np.full(t.size, math.nan)
        if pos.any():
            res[pos] = ode_residual(params, float(lam), t[pos])
        for j in range(t.size):
            rows.append((float(lam), float(t[j]), float(vals[i, j]), float(ders[i, j]), float(res[j])))
    header = ["lambda", "t", "value", "derivative", "residual"]
    print(",".join(header))
    for row in rows:
        print(",".join(f"{v:.16e}" for v in row))
    if args.output_dir:
        finite = [r[4] for r in rows if math.isfinite(r[4])]
        return _finish(
            args,
            "phi",
            {"residual_ok": bool(max(finite, default=0.0) <= 1e-8)},
            {"max_residual": max(finite, default=0.0), "count": len(rows)},
            tables={"phi": (header, rows)},
        )
    return EXIT_OK


def cmd_transform(args):
    from .transforms import jacobi_forward, jacobi_inverse, plancherel_sides, transform_metadata

    params = _params(args)
    quad = _quad(args)
    if args.inverse:
        fhat = read_spectral_csv(args.input, params)
        t = np.linspace(0.0, args.t_out, args.t_count)
        prof = jacobi_inverse(params, fhat, t, quad)
        rows = list(zip(prof.grid.tolist(), prof.values.tolist()))
        return _finish(
            args,
            "transform",
            {"direction": "inverse"},
            {"metadata": transform_metadata(params), "quadrature": quad.to_dict(), "points": len(rows)},
            tables={"inverse": (["t", "value"], rows)},
            report={"t": prof.grid, "value": prof.values},
        )
    f = read_radial_csv(args.input, support_radius=args.support)
    fhat = jacobi_forward(params, f, quad)
    radial, spectral = plancherel_sides(params, f, quad, fhat=fhat)
    gap = abs(radial - spectral) / max(abs(radial), 1e-300)
    rows = list(zip(fhat.lambdas.tolist(), fhat.values.real.tolist(), fhat.values.imag.tolist()))
    results = {"metadata": transform_metadata(params), "quadrature": quad.to_dict(), "nodes": len(rows)}
    if args.precision_report:
        results["plancherel"] = {"radial": radial, "spectral": spectral, "relative_gap": gap}
    return _finish(
        args,
        "transform",
        {"direction": "forward", "plancherel_ok": bool(gap <= 1e-6)},
        results,
        tables={"transform": (["lambda", "re", "im"], rows)},
        report={"lambda": fhat.lambdas, "re": fhat.values.real, "im": fhat.values.imag},
    )


def cmd_abel(args):
    from .transforms import abel_slice, support_leakage

    params = _params(args)
    quad = _quad(args)
    f = read_radial_csv(args.input, support_radius=args.support)
    s_max = args.s_max if args.s_max is not None else 2.0 * args.support
    s = np.linspace(0.0, s_max, args.s_count)
    prof = abel_slice(params, f, s, quad)
    leak = support_leakage(prof.values, s, args.support)
    rows = list(zip(s.tolist(), prof.values.tolist()))
    return _finish(
        args,
        "abel",
        {"support_ok": bool(leak <= 1e-6)},
        {"support_leakage": leak, "support_radius": args.support, "quadrature": quad.to_dict()},
        tables={"abel": (["s", "value"], rows)},
        report={"s": s, "value": prof.values},
    )


def cmd_heat(args):
    from .transforms import heat_profile

    params = _params(args)
    quad = _quad(args)
    t = np.linspace(0.0, args.t_out, args.t_count)
    prof = heat_profile(params, args.time, t, quad)
    positive = bool(np.all(prof.values > 0))
    monotone = bool(np.all(np.diff(prof.values) < 0))
    results = {"time": args.time, "quadrature": quad.to_dict(), "value_at_origin": float(prof.values[0])}
    if args.precision_report:
        results["min_value"] = float(np.min(prof.values))
        results["max_step_ratio"] = float(np.max(prof.values[1:] / prof.values[:-1]))
    return _finish(
        args,
        "heat",
        {"positive": positive, "decreasing": monotone},
        results,
        tables={"heat": (["t", "value"], list(zip(t.tolist(), prof.values.tolist())))},
        report={"t": t, "value": prof.values},
    )


def cmd_ingham_check(args):
    from .ingham import ingham_integral, theta_case_split

    theta = read_theta(args.theta, args.sidecar)
    verdict = ingham_integral(theta, args.d)
    split = theta_case_split(theta)
    print(verdict.classification)
    rows = [(int(k), float(v)) for k, v in zip(verdict.octaves, verdict.partial_integrals)]
    return _finish(
        args,
        "ingham-check",
        {"ingham": verdict.classification, "case": split.case},
        {"theta": theta.to_dict(), "integral": verdict.to_dict(), "case_split": split.to_dict()},
        tables={"partial_integrals": (["octave", "partial_integral"], rows)},
        report={"integral": verdict.to_dict(), "case_split": split.to_dict()},
    )


def cmd_ingham_bump(args):
    from .ingham import bump_construct, decay_verify, geometric_grid

    theta = read_theta(args.theta, args.sidecar)
    bump = bump_construct(theta, args.support, args.terms)
    rep = decay_verify(bump.spectrum, theta, args.xi_max, xi_min=args.xi_min)
    xi = geometric_grid(args.xi_min, args.xi_max)
    spec_rows = list(zip(xi.tolist(), bump.spectrum(xi).tolist()))
    bump_rows = list(zip(bump.profile.grid.tolist(), bump.profile.values.tolist()))
    return _finish(
        args,
        "ingham-bump",
        {"decay_constant_finite": rep.satisfied, "support_ok": bool(2.0 * bump.support <= args.support * (1 + 1e-12))},
        {"bump": bump.metadata, "radii": bump.radii, "decay": rep.to_dict()},
        tables={"bump": (["x", "value"], bump_rows), "spectrum": (["xi", "value"], spec_rows)},
        report={"radii": bump.radii, "decay": rep.to_dict()},
    )


def _chernoff_spectrum(args, params):
    from .chernoff import gaussian_spectrum
    from .transforms import SpectralProfile

    quad = _quad(args, lambda_max=64.0)
    if args.spectrum == "gaussian":
        return gaussian_spectrum(params, args.scale, 1.0, quad)
    if args.spectrum == "random":
        rng = np.random.default_rng(args.seed)
        scales = rng.uniform(0.3, 1.0, 3)
        coefs = rng.uniform(0.5, 1.5, 3)
        base = gaussian_spectrum(params, 1.0, 1.0, quad)
        lam = base.lambdas
        vals = sum(c * np.exp(-s * lam * lam) for c, s in zip(coefs, scales))
        return SpectralProfile(lam, vals, base.density, weights=base.weights, metadata={"scales": scales.tolist(), "coefs": coefs.tolist()})
    if not args.input:
        raise InvalidParameterError("--spectrum file needs --input")
    return read_spectral_csv(args.input, params)


def cmd_chernoff(args):
    from .chernoff import laplacian_power_norms, moment_norm_chain, moment_sequence

    params = _params(args)
    fhat = _chernoff_spectrum(args, params)
    rep = laplacian_power_norms(params, fhat, args.m_max)
    mu = type(fhat)(fhat.lambdas, fhat.values, np.exp(log_plancherel_density(params, fhat.lambdas)), weights=fhat.weights, log_abs=fhat.log_abs)
    mom = moment_sequence(mu, args.m_max)
    chain = moment_norm_chain(params, fhat, np.arange(1, args.m_max - args.r + 1), args.r) if args.m_max > args.r else None
    second = np.diff(rep.log_norms, 2)
    results = {
        "params": params.to_dict(),
        "log_norm_at_m_max": float(rep.log_norms[-1]),
        "min_second_difference": float(second.min()) if second.size else None,
        "trend_statistics": rep.trend_statistics,
        "moment_verdict": mom.verdict,
        "chain": {k: v for k, v in (chain or {}).items() if k in ("r", "log_A_r", "holds", "margin_min")},
    }
    return _finish(
        args,
        "chernoff",
        {"carleman": rep.verdict, "moments": mom.verdict, "chain_holds": bool(chain["holds"]) if chain else None},
        results,
        tables={"carleman": (["m", "log_norm", "term", "partial_sum"], rep.rows())},
        report={"carleman": rep.to_dict(), "moments": mom.to_dict()},
    )


def cmd_counterexample(args):
    from .counterexample import (
        build_bundle,
        divergence_report,
        gamma_asymptotic_check,
        gamma_majorant_check,
        hecke_bochner_check,
        shift_identity_check,
        vanishing_check,
    )

    bundle = build_bundle(args.n, args.l)
    m_list = sorted({0, 1, 2, 5, 10, 20, 50, args.max_m} & set(range(args.max_m + 1)))
    r_nodes = np.linspace(0.0, args.r_max, args.r_count)
    van = vanishing_check(bundle, r_nodes, m_list)
    rep = divergence_report(bundle, args.max_m)
    m = rep.m_values
    sel = m >= min(10, m[-1])
    c_fit = float(np.min(2.0 * m[sel] * rep.terms[sel]))
    incr = {}
    for M in (25, 50, 100):
        if 2 * M <= m[-1]:
            incr[str(M)] = float(rep.partial_sums[2 * M - 1] - rep.partial_sums[M - 1])
    target = 0.5 * math.log(2.0)
    major = gamma_majorant_check(bundle, rep)
    asym = gamma_asymptotic_check(0.5, [10, 100, 1000])
    rng = np.random.default_rng(args.seed)
    shift = shift_identity_check(bundle, 5, rng.uniform(0.0, 10.0, 10))
    results = {
        "bundle": bundle.to_dict(),
        "vanishing": van,
        "carleman_c": c_fit,
        "increments": incr,
        "increment_target": target,
        "trend_statistics": rep.trend_statistics,
        "gamma_majorant": major,
        "gamma_asymptotic": asym,
        "shift_identity_max_relative_gap": shift,
    }
    if args.precision_report:
        results["hecke_bochner"] = [hecke_bochner_check(bundle, k) for k in (1, 2)]
    verdicts = {
        "carleman": rep.verdict,
        "vanishing_ok": bool(van["max_abs"] <= 1e-12),
        "terms_bounded_below": bool(c_fit > 0),
        "increments_match": bool(incr) and all(abs(v - target) <= 0.15 * target for v in incr.values()),
        "gamma_majorant_holds": major["holds"],
        "gamma_ratio_ok": bool(asym["deviation"][-1] <= 1e-3),
    }
    return _finish(
        args,
        "counterexample",
        verdicts,
        results,
        tables={"carleman": (["m", "term", "partial_sum"], [(r[0], r[2], r[3]) for r in rep.rows()])},
        report={"carleman": rep.to_dict()},
    )


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

def _common(p, output_default="jacobiharm-out"):
    p.add_argument("--output-dir", default=output_default, help="directory for summary.json and reports")
    p.add_argument("--format", choices=("json", "csv", "both"), default="both")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--precision-report", action="store_true")
    p.add_argument("--config", help="JSON file of option defaults (flags win)")


def _params_args(p):
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--beta", type=float, required=True)


def _quad_args(p):
    p.add_argument("--t-max", type=float)
    p.add_argument("--lambda-max", type=float)
    p.add_argument("--points", type=int)
    p.add_argument("--tolerance", type=float)


def build_parser():
    parser = argparse.ArgumentParser(prog="jacobiharm", description="Jacobi analysis, Ingham profiles and Carleman diagnostics.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    subs = {}

    p = sub.add_parser("phi", help="Jacobi function values with ODE residuals")
    _params_args(p)
    p.add_argument("--lambda", dest="lam", type=float, action="append", required=True)
    p.add_argument("--t", type=float, action="append")
    p.add_argument("--grid", help="CSV with a single 't' column")
    _common(p, output_default=None)
    p.set_defaults(func=cmd_phi)
    subs["phi"] = p

    p = sub.add_parser("transform", help="forward or inverse Fourier-Jacobi transform")
    _params_args(p)
    p.add_argument("--input", required=True, help="t,value CSV (forward) or lambda,re,im CSV (inverse)")
    p.add_argument("--inverse", action="store_true")
    p.add_argument("--support", type=float)
    p.add_argument("--t-out", type=float, default=6.0)
    p.add_argument("--t-count", type=int, default=121)
    _quad_args(p)
    _common(p)
    p.set_defaults(func=cmd_transform)
    subs["transform"] = p

    p = sub.add_parser("abel", help="Abel transform of a compactly supported profile")
    _params_args(p)
    p.add_argument("--input", required=True)
    p.add_argument("--support", type=float, required=True)
    p.add_argument("--s-max", type=float)
    p.add_argument("--s-count", type=int, default=401)
    _quad_args(p)
    _common(p)
    p.set_defaults(func=cmd_abel)
    subs["abel"] = p

    p = sub.add_parser("heat", help="heat profile with spectrum exp(-time lam^2)")
    _params_args(p)
    p.add_argument("--time", type=float, default=1.0)
    p.add_argument("--t-out", type=float, default=6.0)
    p.add_argument("--t-count", type=int, default=121)
    _quad_args(p)
    _common(p)
    p.set_defaults(func=cmd_heat)
    subs["heat"] = p

    p = sub.add_parser("ingham", help="Ingham integral verdicts and bump construction")
    isub = p.add_subparsers(dest="action", required=True)
    q = isub.add_parser("check", help="classify the Ingham integral and the case split")
    q.add_argument("--theta", required=True, help="r,theta CSV with a JSON tail-law sidecar")
    q.add_argument("--sidecar")
    q.add_argument("--d", type=int, default=1)
    _common(q)
    q.set_defaults(func=cmd_ingham_check)
    subs["ingham check"] = q
    q = isub.add_parser("bump", help="boxcar-convolution bump with decay report")
    q.add_argument("--theta", required=True)
    q.add_argument("--sidecar")
    q.add_argument("--support", type=float, default=1.0)
    q.add_argument("--terms", type=int, default=24)
    q.add_argument("--xi-min", type=float, default=1.0)
    q.add_argument("--xi-max", type=float, default=1e3)
    _common(q)
    q.set_defaults(func=cmd_ingham_bump)
    subs["ingham bump"] = q

    p = sub.add_parser("chernoff", help="Carleman report for Laplacian power norms")
    _params_args(p)
    p.add_argument("--spectrum", choices=("gaussian", "random", "file"), default="gaussian")
    p.add_argument("--scale", type=float, default=1.0)
    p.add_argument("--input")
    p.add_argument("--m-max", type=int, default=100)
    p.add_argument("--r", type=int, default=2)
    _quad_args(p)
    _common(p)
    p.set_defaults(func=cmd_chernoff)
    subs["chernoff"] = p

    p = sub.add_parser("counterexample", help="vanishing-ray function on H^n")
    p.add_argument("--n", type=int, default=3)
    p.add_argument("--l", type=int, default=1)
    p.add_argument("--max-m", type=int, default=100)
    p.add_argument("--r-max", type=float, default=5.0)
    p.add_argument("--r-count", type=int, default=51)
    _common(p)
    p.set_defaults(func=cmd_counterexample)
    subs["counterexample"] = p
    return parser, subs


def _apply_config(argv, subs):
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("--config")
    known, _ = pre.parse_known_args(argv)
    if not known.config:
        return
    try:
        cfg = json.loads(Path(known.config).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise InvalidParameterError(f"cannot read config {known.config}: {exc}") from None
    if not isinstance(cfg, dict):
        raise InvalidParameterError("config file must hold a JSON object")
    for p in subs.values():
        dests = {a.dest for a in p._actions}
        p.set_defaults(**{k.replace("-", "_"): v for k, v in cfg.items() if k.replace("-", "_") in dests})
        for action in p._actions:
            if action.required and action.dest in cfg:
                action.required = False


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser, subs = build_parser()
    try:
        _apply_config(argv, subs)
        args = parser.parse_args(argv)
    except InvalidParameterError as exc:
        print(f"jacobiharm: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:
        return int(exc.code) if isinstance(exc.code, int) else EXIT_USAGE
    try:
        return args.func(args)
    except InvalidParameterError as exc:
        print(f"jacobiharm: invalid input: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except AdmissibilityError as exc:
        print(f"jacobiharm: admissibility: {exc}", file=sys.stderr)
        return EXIT_ADMISSIBILITY
    except (NumericalError, JacobiHarmError) as exc:
        print(f"jacobiharm: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
