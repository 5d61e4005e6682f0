import math

import mpmath
import numpy as np
import pytest

from jacobiharm.counterexample import (
    build_bundle,
    divergence_report,
    gamma_asymptotic_check,
    gamma_majorant_check,
    growth_exponents,
    hecke_bochner_check,
    q_poly_coefficients,
    q_value,
    radial_laplacian,
    shift_identity_check,
    spectral_amplitude,
    vanishing_check,
)
from jacobiharm.errors import InvalidParameterError
from jacobiharm.specfun import JacobiParams
from oracles import h3_phi


@pytest.fixture(scope="module")
def bundle31():
    return build_bundle(3, 1)


@pytest.fixture(scope="module")
def report31(bundle31):
    return divergence_report(bundle31, m_max=100)


def h3_l1_log_norm(m):
    """``log ||Delta^m f||_2`` for ``n = 3, l = 1``.

    The squared norm is ``int (lam^2+1)^(2m+1) lam^2 e^{-2 lam^2} dlam``,
    expanded binomially into half-integer gamma values.
    """
    with mpmath.workdps(40):
        total = mpmath.mpf(0)
        for k in range(2 * m + 2):
            total += mpmath.binomial(2 * m + 1, k) * mpmath.gamma(k + 1.5) / (2 * mpmath.mpf(2) ** (k + 1.5))
        return float(mpmath.log(total) / 2)


def test_q_polynomial():
    assert np.array_equal(q_poly_coefficients(0), [1.0])
    assert np.array_equal(q_poly_coefficients(2), [1.0, -1.0, 0.0])
    w = np.array([0.5 + 2j, -1.0])
    assert np.allclose(q_value(3, w), w * (w - 1) * (w - 2))
    assert np.allclose(q_value(3, w), np.polyval(q_poly_coefficients(3), w))


@pytest.mark.parametrize("n,l,x0", [
    (3, 1, 0.0),
    (4, 2, 0.5),
    (3, 3, math.sqrt(3.0 / 5.0)),
    (2, 2, math.cos(math.pi / 4)),
])
def test_zonal_zero(n, l, x0):
    b = build_bundle(n, l)
    assert b.x0 == pytest.approx(x0, abs=1e-14)
    assert abs(b.harmonic_at_zero()) <= 1e-14


def test_bundle_parameters(bundle31):
    assert bundle31.shifted == JacobiParams(1.5, -0.5)
    assert bundle31.base == JacobiParams(0.5, -0.5)
    assert bundle31.harmonic_at_zero() == 0.0
    assert bundle31.to_dict()["rho_l"] == 2.0


def test_bundle_requires_positive_degree():
    with pytest.raises(InvalidParameterError):
        build_bundle(3, 0)


def test_spectral_amplitude_closed_form(bundle31):
    lam = np.array([0.0, 0.5, 3.0])
    m = 4
    expected = m * np.log(lam ** 2 + 1) + 0.5 * np.log(lam ** 2 + 1) - lam ** 2
    assert np.allclose(spectral_amplitude(bundle31, lam, m), expected, atol=1e-14)


def test_shift_identity(bundle31):
    assert shift_identity_check(bundle31, 7, np.linspace(0.0, 20.0, 101)) < 1e-13


def test_vanishing_along_ray(bundle31):
    res = vanishing_check(bundle31, np.linspace(0.0, 6.0, 61), [0, 1, 5, 20, 100])
    assert res["max_abs"] <= 1e-12
    # the radial factor itself is far from zero
    assert max(row["radial_max_abs"] for row in res["rows"]) > 1.0


def test_vanishing_with_higher_degree():
    b = build_bundle(3, 3)
    res = vanishing_check(b, np.linspace(0.0, 4.0, 21), [0, 3, 10])
    assert res["max_abs"] <= 1e-12 * max(1.0, max(row["radial_max_abs"] for row in res["rows"]))


@pytest.mark.parametrize("m", [1, 10, 50, 100])
def test_norms_match_binomial_oracle(report31, m):
    assert report31.log_norms[m - 1] == pytest.approx(h3_l1_log_norm(m), rel=1e-12)


def test_terms_bounded_below_by_harmonic_series(report31):
    m = report31.m_values
    sel = m >= 10
    c = float(np.min(report31.terms[sel] * 2 * m[sel]))
    assert c > 0
    assert report31.verdict == "divergent-trend"


@pytest.mark.parametrize("m_max", [50, 100, 200])
def test_divergent_verdict_for_each_window(bundle31, m_max):
    assert divergence_report(bundle31, m_max=m_max).verdict == "divergent-trend"


def test_divergence_report_range(bundle31):
    with pytest.raises(InvalidParameterError):
        divergence_report(bundle31, m_max=201)


def test_growth_exponents(bundle31):
    ex = growth_exponents(bundle31)
    assert ex["n0"] == pytest.approx(2.0, abs=1e-3)
    assert ex["p0"] == pytest.approx(1.0, abs=1e-3)


def test_gamma_majorant_holds(bundle31, report31):
    res = gamma_majorant_check(bundle31, report31)
    assert res["holds"]
    assert res["C0"] > 0


def test_gamma_asymptotic_trivial_cases():
    n = [2, 10, 1000]
    assert gamma_asymptotic_check(1.0, n)["deviation"] == [0.0, 0.0, 0.0]
    assert gamma_asymptotic_check(0.0, n)["deviation"] == [0.0, 0.0, 0.0]


def test_gamma_asymptotic_half():
    res = gamma_asymptotic_check(0.5, [10, 100, 1000])
    assert res["decreasing"]
    assert res["deviation"][-1] < 1e-3


@pytest.mark.parametrize("alpha", [0.5, 2.5, 3.5])
def test_gamma_asymptotic_matches_mpmath(alpha):
    n = 1000
    with mpmath.workdps(40):
        ref = float(abs(mpmath.gamma(n + alpha) / (mpmath.gamma(n) * mpmath.mpf(n) ** alpha) - 1))
    assert gamma_asymptotic_check(alpha, [n])["deviation"][0] == pytest.approx(ref, rel=1e-9)


def test_gamma_asymptotic_domain():
    with pytest.raises(InvalidParameterError):
        gamma_asymptotic_check(6.0, [10])
    with pytest.raises(InvalidParameterError):
        gamma_asymptotic_check(1.0, [1])


def test_radial_laplacian_on_eigenfunction():
    p = JacobiParams(0.5, -0.5)
    lam, h = 2.0, 0.01
    r = h * np.arange(401)
    u = np.empty_like(r)
    u[0] = 1.0
    u[1:] = h3_phi(lam, r[1:])
    lap = radial_laplacian(p, h, u)
    assert np.max(np.abs(lap + (lam ** 2 + 1.0) * u[: lap.size])) < 1e-9


@pytest.mark.parametrize("m", [1, 2])
def test_hecke_bochner_consistency(bundle31, m):
    assert hecke_bochner_check(bundle31, m)["relative_error"] < 1e-5
