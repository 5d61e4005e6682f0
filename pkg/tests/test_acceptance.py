"""Acceptance criteria 1-8, one test each, each printing a single PASS/FAIL line."""

import json
import math
import subprocess
import sys
import time

import numpy as np
import pytest

from jacobiharm.chernoff import (
    SequenceGenerator,
    andiv_diagnostic,
    gaussian_spectrum,
    laplacian_power_norms,
    moment_norm_chain,
)
from jacobiharm.counterexample import (
    build_bundle,
    divergence_report,
    gamma_asymptotic_check,
    gamma_majorant_check,
    vanishing_check,
)
from jacobiharm.fitting import fit_power_bound, loglog_slope
from jacobiharm.ingham import (
    bump_construct,
    decay_verify,
    ingham_integral,
    theta_case_split,
    theta_log,
    theta_loglog,
    theta_one,
    theta_power,
)
from jacobiharm.jacobi import cherednik_apply, g_factor, ode_residual, opdam_g, phi, phi_table
from jacobiharm.specfun import JacobiParams, harish_chandra_c, hyp2f1, log_plancherel_density, plancherel_density
from jacobiharm.transforms import (
    QuadratureSpec,
    RadialProfile,
    SpectralProfile,
    abel_slice,
    euclid_cosine_ft,
    jacobi_forward,
    jacobi_inverse,
    plancherel_sides,
    spectral_nodes,
    support_leakage,
)
from oracles import TRANSFORM_GRID, TRANSFORM_QUAD, h3_phi

PARAMS = [(-0.5, -0.5), (0.5, -0.5), (1.5, -0.5), (3.0, -0.5)]
LAMBDAS = [0.5, 1.0, 2.0, 5.0, 10.0]
RADII = np.array([0.1, 0.5, 1.0, 2.0, 5.0])


class Criterion:
    """Collects named checks and prints one summary line."""

    def __init__(self, number, title, budget):
        self.number = number
        self.title = title
        self.budget = budget
        self.checks = []
        self.start = time.perf_counter()

    def check(self, name, ok, detail=""):
        self.checks.append((name, bool(ok), detail))

    def finish(self, capsys):
        elapsed = time.perf_counter() - self.start
        if self.budget is not None:
            self.check("runtime", elapsed < self.budget, f"{elapsed:.1f}s < {self.budget:g}s")
        failed = [c for c in self.checks if not c[1]]
        status = "PASS" if not failed else "FAIL"
        parts = "; ".join(f"{n}={'ok' if ok else 'FAIL'}" + (f" ({d})" if d else "") for n, ok, d in self.checks)
        with capsys.disabled():
            print(f"\nCRITERION {self.number} [{self.title}]: {status} in {elapsed:.1f}s :: {parts}")
        assert not failed, "; ".join(f"{n}: {d}" for n, _, d in failed)


# ---------------------------------------------------------------------------
# 1. spherical functions
# ---------------------------------------------------------------------------

def test_criterion_1_spherical_functions(capsys):
    crit = Criterion(1, "spherical functions", 30.0)
    worst_res = worst_h3 = worst_cos = worst_f21 = 0.0
    bound_ok = True
    dense_t = np.linspace(0.0, 10.0, 501)
    dense_lam = np.linspace(0.0, 12.0, 61)
    for a, b in PARAMS:
        p = JacobiParams(a, b)
        vals, _ = phi_table(p, LAMBDAS, RADII)
        for i, lam in enumerate(LAMBDAS):
            worst_res = max(worst_res, float(np.max(ode_residual(p, lam, RADII))))
            for j, t in enumerate(RADII):
                z = -math.sinh(t) ** 2
                ref = hyp2f1((p.rho + 1j * lam) / 2, (p.rho - 1j * lam) / 2, a + 1, z).real
                worst_f21 = max(worst_f21, abs(vals[i, j] - ref))
            if (a, b) == (0.5, -0.5):
                worst_h3 = max(worst_h3, float(np.max(np.abs(vals[i] - h3_phi(lam, RADII)))))
            if (a, b) == (-0.5, -0.5):
                worst_cos = max(worst_cos, float(np.max(np.abs(vals[i] - np.cos(lam * RADII)))))
        table, _ = phi_table(p, dense_lam, dense_t)
        phi0 = phi(p, 0.0, dense_t)
        bound_ok &= bool(np.all(np.abs(table) <= phi0[None, :] + 1e-12) and np.all(phi0 <= 1.0 + 1e-14))
    crit.check("ode_residual", worst_res <= 1e-8, f"{worst_res:.1e}")
    crit.check("h3_closed_form", worst_h3 <= 1e-8, f"{worst_h3:.1e}")
    crit.check("cos_case", worst_cos <= 1e-10, f"{worst_cos:.1e}")
    crit.check("hyp2f1", worst_f21 <= 1e-9, f"{worst_f21:.1e}")
    crit.check("ground_state_bound", bound_ok)
    crit.finish(capsys)


# ---------------------------------------------------------------------------
# 2. Opdam functions and the Cherednik operator
# ---------------------------------------------------------------------------

def test_criterion_2_opdam_cherednik(capsys):
    crit = Criterion(2, "Opdam/Cherednik", 60.0)
    h = 1e-3
    grid = h * np.arange(-4500, 4501)
    origin_exact = True
    worst_even = worst_eig = 0.0
    exponents = []
    bound_ok = True
    for a, b in [(0.5, -0.5), (1.5, -0.5), (1.0, 0.0)]:
        p = JacobiParams(a, b)
        for lam in (1.0, 2.0, 5.0):
            origin_exact &= opdam_g(p, lam, 0.0) == 1.0
            t = np.linspace(0.0, 4.0, 81)
            g = opdam_g(p, lam, np.concatenate([t, -t]))
            even = 0.5 * (g[: t.size] + g[t.size:])
            worst_even = max(worst_even, float(np.max(np.abs(even - phi(p, lam, t)))))
            gg = opdam_g(p, lam, grid)
            pts = grid[(np.abs(grid) <= 4.0) & (np.abs(grid) >= 0.05)][::25]
            tg = cherednik_apply(p, grid, gg, pts)
            idx = np.rint((pts - grid[0]) / h).astype(int)
            worst_eig = max(worst_eig, float(np.max(np.abs(tg - 1j * lam * gg[idx]))))
        lam = np.geomspace(0.1, 1e3, 200)
        y = np.abs(g_factor(p, lam)) / np.abs(harish_chandra_c(p, lam))
        bound = fit_power_bound(lam, y)
        bound_ok &= bool(np.all(y <= bound(lam) * (1 + 1e-12)))
        exponents.append((bound.p, a + 0.5))
    crit.check("G(0)=1", origin_exact)
    crit.check("even_part_is_phi", worst_even <= 1e-7, f"{worst_even:.1e}")
    crit.check("TG=i lam G", worst_eig <= 1e-6, f"{worst_eig:.1e}")
    exp_ok = bound_ok and all(abs(p_fit - p_ref) < 0.05 for p_fit, p_ref in exponents)
    crit.check("|g||c|^-1 power bound", exp_ok, ", ".join(f"p={p_fit:.3f}" for p_fit, _ in exponents))
    crit.finish(capsys)


# ---------------------------------------------------------------------------
# 3. transforms
# ---------------------------------------------------------------------------

def test_criterion_3_transforms(capsys):
    crit = Criterion(3, "transforms", 120.0)
    p = JacobiParams(0.5, -0.5)
    rng = np.random.default_rng(12345)
    lam, w = spectral_nodes(TRANSFORM_QUAD, radius=TRANSFORM_QUAD.t_max)
    dens = plancherel_density(p, lam)
    worst_rt = worst_pl = 0.0
    for _ in range(10):
        coef = rng.uniform(0.5, 1.5, 3) * rng.choice([-1.0, 1.0], 3)
        coef[0] = abs(coef[0]) + 0.5
        scale = rng.uniform(0.3, 1.0, 3)
        vals = sum(c * np.exp(-s * lam * lam) for c, s in zip(coef, scale))
        fhat = SpectralProfile(lam, vals, dens, weights=w)
        f = jacobi_inverse(p, fhat, TRANSFORM_GRID, TRANSFORM_QUAD)
        back = jacobi_forward(p, f, TRANSFORM_QUAD, lambdas=lam)
        worst_rt = max(worst_rt, float(np.max(np.abs(back.values - vals)) / np.max(np.abs(vals))))
        radial, spectral = plancherel_sides(p, f, TRANSFORM_QUAD)
        worst_pl = max(worst_pl, abs(radial - spectral) / radial)
    crit.check("round_trip", worst_rt <= 1e-6, f"{worst_rt:.1e}")
    crit.check("plancherel", worst_pl <= 1e-6, f"{worst_pl:.1e}")

    flat = JacobiParams(-0.5, -0.5)
    grid = np.linspace(0.0, 12.0, 2401)
    f = RadialProfile(grid, np.exp(-grid ** 2) * (1.0 + 0.3 * grid ** 2))
    xl = np.linspace(0.0, 10.0, 41)
    jac = jacobi_forward(flat, f, TRANSFORM_QUAD, lambdas=xl).values.real
    euc = euclid_cosine_ft(f, xl / (2 * math.pi), TRANSFORM_QUAD).values.real
    gap = float(np.max(np.abs(jac - 0.5 * euc)))
    crit.check("flat_reduction", gap <= 1e-8, f"{gap:.1e}")

    bgrid = np.linspace(0.0, 2.0, 2001)
    bump = RadialProfile(bgrid, np.where(bgrid < 1.0, (1.0 - bgrid ** 2) ** 8, 0.0), support_radius=1.0)
    s = np.linspace(0.0, 3.0, 601)
    quad = QuadratureSpec(t_max=12.0, lambda_max=64.0)
    a = abel_slice(p, bump, s, quad)
    xi = np.linspace(0.0, 4.0, 17)
    lhs = euclid_cosine_ft(a, xi / (2 * math.pi), QuadratureSpec(tolerance=1e-6)).values.real
    rhs = jacobi_forward(p, bump, quad, lambdas=xi).values.real
    slice_gap = float(np.max(np.abs(lhs - rhs)) / np.max(np.abs(rhs)))
    crit.check("slice_projection", slice_gap <= 1e-6, f"{slice_gap:.1e}")
    crit.check("abel_support", support_leakage(a.values, s, 1.0) <= 1e-6, f"{support_leakage(a.values, s, 1.0):.1e}")
    crit.finish(capsys)


# ---------------------------------------------------------------------------
# 4. c-function growth
# ---------------------------------------------------------------------------

def test_criterion_4_c_function_growth(capsys):
    crit = Criterion(4, "c-function growth", None)
    lam = np.geomspace(1e2, 1e4, 200)
    for n in (2, 3, 4, 6):
        p = JacobiParams.hyperbolic(n)
        slope = float(np.polyfit(np.log(lam), log_plancherel_density(p, lam), 1)[0])
        crit.check(f"H^{n}", abs(slope - (n - 1)) <= 0.05, f"{slope:.4f}")
    crit.finish(capsys)


# ---------------------------------------------------------------------------
# 5. Ingham
# ---------------------------------------------------------------------------

def test_criterion_5_ingham(capsys):
    crit = Criterion(5, "Ingham", 60.0)
    catalog = [
        ("4/sqrt(r)", theta_power(4.0, 0.5), "finite"),
        ("8/sqrt(r+1)", theta_one(), "finite"),
        ("1/log(e+r)", theta_log(), "divergent"),
        ("loglog(r)/log(r)", theta_loglog(), "divergent"),
    ]
    for name, th, expected in catalog:
        v = ingham_integral(th)
        crit.check(f"I[{name}]", v.classification == expected, f"{v.classification}, {v.integral_estimate:.6g}")
    b = bump_construct(theta_one(), support=1.0, terms=24)
    crit.check("bump_support", 2.0 * b.support <= 1.0 + 1e-15, f"diameter {2 * b.support:.15g}")
    rep = decay_verify(b.spectrum, theta_one(), 1e3, xi_min=1.0)
    crit.check("decay_constant", rep.satisfied and math.isfinite(rep.constant), f"log C = {rep.log_constant:.2f}")
    split_cases = [
        (theta_power(4.0, 0.5), "case1"),
        (theta_power(5.0, 0.5), "case1"),
        (theta_one(), "case1"),
        (theta_power(3.99, 0.5), "case2"),
        (theta_log(), "case2"),
        (theta_loglog(), "case2"),
    ]
    split_ok = all(theta_case_split(th).case == case for th, case in split_cases)
    crit.check("case_split", split_ok)
    crit.finish(capsys)


# ---------------------------------------------------------------------------
# 6. Chernoff
# ---------------------------------------------------------------------------

def test_criterion_6_chernoff(capsys):
    crit = Criterion(6, "Chernoff", 120.0)
    wide = QuadratureSpec(lambda_max=64.0)
    finite = convex = scale_ok = True
    min_second = math.inf
    for a, b in [(0.5, -0.5), (1.5, -0.5), (3.0, -0.5), (1.0, 0.0)]:
        p = JacobiParams(a, b)
        rep = laplacian_power_norms(p, gaussian_spectrum(p, quad=wide), 100)
        finite &= bool(np.all(np.isfinite(rep.log_norms)))
        second = float(np.min(np.diff(rep.log_norms, 2)))
        min_second = min(min_second, second)
        convex &= second >= -1e-8
        for coef in (1e-3, 1e3):
            other = laplacian_power_norms(p, gaussian_spectrum(p, coef=coef, quad=wide), 100)
            scale_ok &= other.verdict == rep.verdict
    crit.check("norms_finite_m100", finite)
    crit.check("log_convex", convex, f"min second difference {min_second:.3g}")
    crit.check("scale_invariant_verdicts", scale_ok)
    andiv = andiv_diagnostic(SequenceGenerator.harmonic(), m=3, N=10 ** 6)
    rel = np.abs(andiv.increments / math.log(10.0) - 1.0)
    crit.check("andiv_decades", bool(np.all(rel <= 0.1)), "max rel dev " + f"{rel.max():.3f}")
    rng = np.random.default_rng(2024)
    chain_ok = True
    margins = []
    for a, b in [(0.5, -0.5), (1.5, -0.5), (1.0, 0.0)]:
        p = JacobiParams(a, b)
        base = gaussian_spectrum(p, quad=wide)
        lam = base.lambdas
        profiles = [base, gaussian_spectrum(p, scale=0.5, quad=wide)]
        for _ in range(3):
            c = rng.uniform(0.5, 1.5, 3)
            s = rng.uniform(0.3, 1.0, 3)
            vals = sum(ci * np.exp(-si * lam * lam) for ci, si in zip(c, s))
            profiles.append(SpectralProfile(lam, vals, base.density, weights=base.weights))
        for fhat in profiles:
            res = moment_norm_chain(p, fhat, np.arange(1, 99), r=2)
            chain_ok &= res["holds"]
            margins.append(res["margin_min"])
    crit.check("moment_norm_chain_r2", chain_ok, f"min log margin {min(margins):.3g}")
    crit.finish(capsys)


# ---------------------------------------------------------------------------
# 7. counterexample
# ---------------------------------------------------------------------------

def test_criterion_7_counterexample(capsys):
    crit = Criterion(7, "counterexample n=3 l=1", 180.0)
    bundle = build_bundle(3, 1)
    van = vanishing_check(bundle, np.linspace(0.0, 6.0, 61), [0, 1, 2, 5, 10, 20, 50, 100])
    crit.check("vanishing_on_ray", van["max_abs"] <= 1e-12, f"{van['max_abs']:.1e}")
    rep = divergence_report(bundle, m_max=200)
    m = rep.m_values
    sel = (m >= 10) & (m <= 100)
    c_fit = float(np.min(2.0 * m[sel] * rep.terms[sel]))
    crit.check("terms>=c/(2m)", c_fit > 0 and rep.verdict == "divergent-trend", f"c = {c_fit:.3g}, {rep.verdict}")
    target = 0.5 * math.log(2.0)
    incs = {M: float(rep.partial_sums[2 * M - 1] - rep.partial_sums[M - 1]) for M in (25, 50, 100)}
    inc_ok = all(abs(v - target) <= 0.15 * target for v in incs.values())
    crit.check("increments~ln2/2", inc_ok, ", ".join(f"M={M}: {v:.3f}" for M, v in incs.items()) + f" vs {target:.4f}")
    report100 = divergence_report(bundle, m_max=100)
    major = gamma_majorant_check(bundle, report100)
    crit.check("gamma_majorant", major["holds"], f"C0={major['C0']:.3g}, n0={major['n0']:.3f}, p0={major['p0']:.3f}")
    asym = gamma_asymptotic_check(0.5, [10, 100, 1000])
    dev = asym["deviation"][-1]
    crit.check("gamma_ratio_n1000", dev <= 1e-3 and asym["decreasing"], f"alpha=0.5: {dev:.2e}")
    crit.finish(capsys)


# ---------------------------------------------------------------------------
# 8. determinism
# ---------------------------------------------------------------------------

def test_criterion_8_determinism(tmp_path, capsys):
    crit = Criterion(8, "determinism", None)
    cfg = tmp_path / "config.json"
    cfg.write_text(json.dumps({"n": 3, "l": 1, "max_m": 100, "seed": 11}))
    outputs = []
    for name in ("first", "second"):
        out = tmp_path / name
        res = subprocess.run(
            [sys.executable, "-m", "jacobiharm.cli", "counterexample", "--config", str(cfg), "--output-dir", str(out)],
            capture_output=True, text=True, check=False,
        )
        crit.check(f"{name}_exit", res.returncode == 0, res.stderr.strip()[-200:])
        outputs.append((out / "summary.json").read_bytes() if res.returncode == 0 else b"")
    crit.check("byte_identical", outputs[0] == outputs[1] and len(outputs[0]) > 0, f"{len(outputs[0])} bytes")
    crit.finish(capsys)
