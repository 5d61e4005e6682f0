import math

import mpmath
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from jacobiharm.errors import ConvergenceError, InvalidParameterError, PoleError
from jacobiharm.fitting import fit_power_bound, loglog_slope
from jacobiharm.specfun import (
    HyperbolicSpec,
    JacobiParams,
    gamma,
    gegenbauer,
    harish_chandra_c,
    hyp2f1,
    log_gamma,
    log_plancherel_density,
    plancherel_density,
)
from oracles import gegenbauer_explicit, stirling_log_gamma


def _rel(a, b):
    return abs(a - b) / max(1.0, abs(b))


# ---------------------------------------------------------------------------
# parameters
# ---------------------------------------------------------------------------

def test_params_rho_and_multiplicities():
    p = JacobiParams(1.5, -0.5)
    assert p.rho == 2.0
    assert p.multiplicities == (4.0, 0.0)


@pytest.mark.parametrize("alpha,beta", [(-1.0, -0.5), (0.0, 0.5), (0.5, -1.0), (float("nan"), 0.0)])
def test_params_rejects_outside_domain(alpha, beta):
    with pytest.raises(InvalidParameterError):
        JacobiParams(alpha, beta)


@pytest.mark.parametrize("n", [2, 3, 4, 6])
def test_hyperbolic_params(n):
    p = JacobiParams.hyperbolic(n)
    assert p.alpha == (n - 2) / 2 and p.beta == -0.5
    assert p.rho == (n - 1) / 2


def test_hyperbolic_spec_shifted_parameters():
    s = HyperbolicSpec(3, 1)
    assert s.rho == 1.0
    assert s.alpha_l == 1.5 and s.beta_l == -0.5
    assert s.rho_l == 2.0
    assert s.base_params == JacobiParams(0.5, -0.5)


# ---------------------------------------------------------------------------
# log-gamma
# ---------------------------------------------------------------------------

def test_log_gamma_special_values():
    assert log_gamma(1.0) == pytest.approx(0.0, abs=1e-15)
    assert log_gamma(2.0) == pytest.approx(0.0, abs=1e-15)
    assert log_gamma(0.5).real == pytest.approx(0.5 * math.log(math.pi), abs=1e-15)


def test_log_gamma_matches_stirling_oracle():
    z = 10 + 10j
    assert _rel(complex(log_gamma(z)), stirling_log_gamma(z)) < 1e-14


@pytest.mark.parametrize("z", [0.7 + 0.2j, 3.3 - 40j, 150 + 1j, -2.5 + 0.5j, -7.25 - 3j, 25j])
def test_log_gamma_principal_branch(z):
    ref = complex(mpmath.loggamma(z))
    assert _rel(complex(log_gamma(z)), ref) < 1e-12


def test_log_gamma_vectorised_matches_scalar():
    z = np.array([0.3 + 1j, 5.0, -1.5 + 2j])
    vec = log_gamma(z)
    assert np.allclose(vec, [log_gamma(v) for v in z], rtol=0, atol=0)


@pytest.mark.parametrize("z", [0.0, -1.0, -7.0])
def test_log_gamma_poles(z):
    with pytest.raises(PoleError):
        log_gamma(z)


@given(st.floats(0.5, 200.0), st.floats(-50.0, 50.0))
def test_log_gamma_recurrence(x, y):
    z = complex(x, y)
    lhs = complex(log_gamma(z + 1))
    rhs = complex(log_gamma(z)) + complex(np.log(z))
    assert abs(lhs - rhs) <= 1e-12 * max(1.0, abs(lhs))


@given(st.floats(0.5, 100.0))
def test_log_gamma_real_axis_against_math(a):
    assert _rel(float(log_gamma(a).real), math.lgamma(a)) < 1e-12


def test_gamma_real_input_returns_real():
    assert gamma(5.0) == pytest.approx(24.0, rel=1e-13)
    assert np.isrealobj(gamma(np.array([1.5, 2.5])))


# ---------------------------------------------------------------------------
# hypergeometric function
# ---------------------------------------------------------------------------

def test_hyp2f1_at_zero():
    assert hyp2f1(0.3, 1.7, 2.2, 0.0) == 1.0


def test_hyp2f1_log_identity():
    # 2F1(1,1;2;-x) = log(1+x)/x
    assert abs(hyp2f1(1, 1, 2, -1.0) - math.log(2.0)) < 1e-14
    assert abs(hyp2f1(1, 1, 2, -9.0) - math.log(10.0) / 9.0) < 1e-14


@pytest.mark.parametrize("a,b,c,x", [
    (0.75 + 2j, 0.75 - 2j, 2.0, -0.3),
    (0.75 + 2j, 0.75 - 2j, 2.0, -30.0),
    (1.25 + 5j, 0.25 - 5j, 2.5, -200.0),
    (0.5, 1.5, 3.0, -0.9),
    (2.0, 1.0, 1.5, -4.0),
])
def test_hyp2f1_against_mpmath(a, b, c, x):
    ref = complex(mpmath.hyp2f1(a, b, c, x))
    assert abs(hyp2f1(a, b, c, x) - ref) <= 1e-12 * max(1.0, abs(ref))


def test_hyp2f1_errors():
    with pytest.raises(PoleError):
        hyp2f1(1, 1, -2, -0.1)
    with pytest.raises(InvalidParameterError):
        hyp2f1(1, 1, 2, 0.5)
    with pytest.raises(ConvergenceError):
        hyp2f1(1, 1, 2, -0.4, max_terms=3)


# ---------------------------------------------------------------------------
# Gegenbauer polynomials
# ---------------------------------------------------------------------------

def test_gegenbauer_low_degree():
    assert gegenbauer(0, 1.5, 0.3) == 1.0
    assert gegenbauer(1, 0.5, 0.0) == 0.0
    assert gegenbauer(1, 0.5, 0.4) == pytest.approx(0.4)


def test_gegenbauer_degree_four():
    expected = gegenbauer_explicit(4, 1.5, 0.3)
    assert abs(gegenbauer(4, 1.5, 0.3) - expected) < 1e-14


@given(st.integers(0, 10), st.floats(0.25, 4.0), st.floats(-1.0, 1.0))
def test_gegenbauer_matches_explicit_sum(l, nu, x):
    assert abs(gegenbauer(l, nu, x) - gegenbauer_explicit(l, nu, x)) <= 1e-11 * max(1.0, abs(gegenbauer_explicit(l, nu, x)))


def test_gegenbauer_nu_zero_is_chebyshev():
    x = np.linspace(-1, 1, 11)
    assert np.allclose(gegenbauer(5, 0.0, x), np.cos(5 * np.arccos(x)), atol=1e-14)


def test_gegenbauer_rejects_bad_input():
    with pytest.raises(InvalidParameterError):
        gegenbauer(-1, 1.0, 0.0)
    with pytest.raises(InvalidParameterError):
        gegenbauer(2, 1.0, 1.5)


# ---------------------------------------------------------------------------
# c-function and Plancherel density
# ---------------------------------------------------------------------------

def test_h3_density_is_lambda_squared_multiple():
    p = JacobiParams(0.5, -0.5)
    lam = np.geomspace(1.0, 100.0, 50)
    ratio = plancherel_density(p, lam) / lam ** 2
    assert np.max(np.abs(ratio / ratio[0] - 1.0)) < 1e-8
    assert plancherel_density(p, 1.0) / plancherel_density(p, 2.0) == pytest.approx(0.25, rel=1e-12)


def test_flat_case_density_is_constant():
    p = JacobiParams(-0.5, -0.5)
    lam = np.array([0.0, 0.1, 3.0, 70.0])
    assert np.allclose(plancherel_density(p, lam), 4.0, rtol=1e-12)


def test_density_limit_at_zero():
    # c(lam) ~ 2^rho G(a+1) / (i lam G(rho/2) G((a-b+1)/2)) as lam -> 0
    p = JacobiParams(1.5, 0.0)
    k = (2 ** p.rho * math.gamma(p.alpha + 1) / (math.gamma(p.rho / 2) * math.gamma((p.alpha - p.beta + 1) / 2))) ** -2
    lam = 1e-5
    assert plancherel_density(p, lam) / lam ** 2 == pytest.approx(k, rel=1e-6)
    assert plancherel_density(p, 0.0) == 0.0
    assert log_plancherel_density(p, 0.0) == -math.inf


def test_c_function_matches_mpmath():
    p = JacobiParams(1.0, 0.25)
    lam = 3.7
    il = 1j * lam
    with mpmath.workdps(30):
        ref = (2 ** (p.rho - il) * mpmath.gamma(p.alpha + 1) * mpmath.gamma(il)
               / (mpmath.gamma((il + p.rho) / 2) * mpmath.gamma((il + p.alpha - p.beta + 1) / 2)))
    assert abs(harish_chandra_c(p, lam) - complex(ref)) < 1e-13 * abs(complex(ref))


def test_c_function_rejects_nonpositive():
    with pytest.raises(InvalidParameterError):
        harish_chandra_c(JacobiParams(0.5, -0.5), 0.0)


@pytest.mark.parametrize("n", [2, 3, 4, 5, 6])
def test_density_two_sided_power_bounds(n):
    p = JacobiParams.hyperbolic(n)
    lam = np.geomspace(1.0, 1e4, 400)
    ratio = plancherel_density(p, lam) / lam ** (n - 1)
    assert 0 < ratio.min() and ratio.max() / ratio.min() < 10.0


def test_density_growth_exponent_is_2alpha_plus_1():
    p = JacobiParams(2.0, 0.5)
    lam = np.geomspace(1e2, 1e4, 200)
    assert loglog_slope(lam, plancherel_density(p, lam)) == pytest.approx(2 * p.alpha + 1, abs=0.01)


def test_fit_power_bound_holds_everywhere():
    x = np.geomspace(0.1, 1e3, 300)
    y = 2.0 + 3.0 * x ** 1.5 + np.sin(x)
    bound = fit_power_bound(x, y)
    assert bound.p == pytest.approx(1.5, abs=0.01)
    assert np.all(y <= bound(x) * (1 + 1e-12))
