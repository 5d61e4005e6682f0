"""Hyperbolic-space function whose Laplacian iterates vanish along a ray.

On ``H^n`` take ``f = (sinh r)^l h_1(r) Y_l(k)`` with ``h_1`` the heat profile
for the shifted parameters ``(alpha_l, beta_l) = ((n+2l-2)/2, -1/2)`` and
``Y_l`` the zonal harmonic of degree ``l``. Its spectral amplitude is::

    (-(lam^2 + rho^2))^m d_nl Q_l(i lam - rho) exp(-lam^2),
    Q_l(w) = prod_{j<l} (w - j),

so every ``Delta^m f`` keeps the factor ``Y_l`` and vanishes on the ray
through a zero ``k_0`` of ``Y_l``. The constant ``d_nl`` is set to 1; every
verdict below is invariant under positive scaling.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq

from .chernoff import CarlemanReport, laplacian_power_norms
from .errors import InvalidParameterError
from .quadrature import gauss_legendre_panels, panels_for
from .specfun import HyperbolicSpec, JacobiParams, gegenbauer, log_gamma, log_plancherel_density
from .transforms import QuadratureSpec, SpectralProfile, heat_profile, jacobi_inverse_values

__all__ = [
    "CounterexampleBundle",
    "build_bundle",
    "q_poly_coefficients",
    "q_value",
    "spectral_amplitude",
    "vanishing_check",
    "shift_identity_check",
    "divergence_report",
    "growth_exponents",
    "gamma_majorant_check",
    "gamma_asymptotic_check",
    "hecke_bochner_check",
    "radial_laplacian",
]

D_NL = 1.0


def q_poly_coefficients(l: int):
    """Coefficients (highest degree first) of ``Q_l(w) = prod_{j=0}^{l-1} (w - j)``."""
    return np.poly(np.arange(int(l), dtype=float)) if l > 0 else np.array([1.0])


def q_value(l: int, w):
    """``Q_l(w)`` as the product of its factors."""
    w = np.asarray(w, dtype=complex)
    out = np.ones_like(w)
    for j in range(int(l)):
        out = out * (w - j)
    return out


def _largest_zero(l: int, nu: float):
    """Largest zero of ``C_l^nu`` on ``(-1, 1)``; degree one vanishes exactly at 0."""
    if l == 1:
        return 0.0
    theta = np.linspace(1e-9, 0.5 * math.pi, 64 * l + 1)
    vals = gegenbauer(l, nu, np.cos(theta))
    sign = np.nonzero(np.signbit(vals[:-1]) != np.signbit(vals[1:]))[0]
    if sign.size == 0:
        return 0.0
    i = int(sign[0])
    th = brentq(lambda s: float(gegenbauer(l, nu, math.cos(s))), theta[i], theta[i + 1], xtol=1e-15)
    return math.cos(th)


@dataclass
class CounterexampleBundle:
    """Parameters of the vanishing-ray function on ``H^n``."""

    space: HyperbolicSpec
    q_coeffs: np.ndarray
    nu: float
    x0: float
    k0_angle: float
    h1_spectral: SpectralProfile
    d_nl: float = D_NL
    metadata: dict = field(default_factory=dict)

    @property
    def rho(self) -> float:
        return self.space.rho

    @property
    def l(self) -> int:
        return self.space.l

    @property
    def base(self) -> JacobiParams:
        return self.space.base_params

    @property
    def shifted(self) -> JacobiParams:
        return self.space.shifted_params

    def harmonic_at_zero(self) -> float:
        """``Y_l(k_0)`` for the zonal harmonic."""
        return float(gegenbauer(self.l, self.nu, self.x0))

    def to_dict(self) -> dict:
        return {
            "n": self.space.n,
            "l": self.l,
            "alpha_l": self.space.alpha_l,
            "beta_l": self.space.beta_l,
            "rho": self.rho,
            "rho_l": self.space.rho_l,
            "nu": self.nu,
            "q_coefficients": [float(c) for c in self.q_coeffs],
            "k0_angle": self.k0_angle,
            "cos_k0": self.x0,
            "d_nl": self.d_nl,
        }


def build_bundle(n: int, l: int, quad: QuadratureSpec | None = None) -> CounterexampleBundle:
    """Assemble the function on ``H^n`` with harmonic degree ``l >= 1``."""
    if int(l) != l or l < 1:
        raise InvalidParameterError("the harmonic degree l must be >= 1")
    space = HyperbolicSpec(int(n), int(l))
    quad = quad or QuadratureSpec(lambda_max=32.0)
    nu = (space.n - 2) / 2.0
    x0 = _largest_zero(space.l, nu)
    panels = panels_for(quad.lambda_max, 1.0, quad.points_per_panel, quad.panels or 1)
    lam, w = gauss_legendre_panels(0.0, quad.lambda_max, panels, quad.points_per_panel)
    h1 = SpectralProfile(
        lam,
        np.exp(-lam * lam),
        np.exp(log_plancherel_density(space.shifted_params, lam)),
        weights=w,
        log_abs=-lam * lam,
    )
    return CounterexampleBundle(space, q_poly_coefficients(space.l), nu, x0, math.acos(x0), h1)


def spectral_amplitude(bundle: CounterexampleBundle, lam, m: int):
    """``log`` of ``(lam^2+rho^2)^m |Q_l(i lam - rho)| e^{-lam^2} d_nl``."""
    lam = np.asarray(lam, dtype=float)
    if np.any(lam < 0) or m < 0:
        raise InvalidParameterError("need lam >= 0 and m >= 0")
    rho = bundle.rho
    with np.errstate(divide="ignore"):
        q = np.log(np.abs(q_value(bundle.l, 1j * lam - rho)))
    out = m * np.log(lam * lam + rho * rho) + q - lam * lam + math.log(bundle.d_nl)
    return out if out.ndim else float(out)


def _radial_factor(bundle, r, m, quad):
    """``(sinh r)^l ((Delta_l + delta)^m h_1)(r)`` from the spectral side."""
    lam = bundle.h1_spectral.lambdas
    rho = bundle.rho
    vals = (-(lam * lam + rho * rho)) ** m * np.exp(-lam * lam)
    prof = SpectralProfile(lam, vals, bundle.h1_spectral.density, weights=bundle.h1_spectral.weights)
    inner = np.real(jacobi_inverse_values(bundle.shifted, prof, r, quad))
    return np.sinh(r) ** bundle.l * inner


def vanishing_check(bundle: CounterexampleBundle, r_nodes, m_list, quad: QuadratureSpec | None = None) -> dict:
    """Max over ``r_nodes`` of ``|Delta^m f|`` on the ray through ``k_0``.

    Each iterate factors as ``Y_l(k_0)`` times a radial factor; the report
    lists both and their product.
    """
    quad = quad or QuadratureSpec(lambda_max=float(bundle.h1_spectral.lambdas[-1]))
    r = np.asarray(r_nodes, dtype=float)
    y0 = bundle.harmonic_at_zero()
    rows = []
    for m in m_list:
        rad = _radial_factor(bundle, r, int(m), quad)
        top = float(np.max(np.abs(rad)))
        rows.append({
            "m": int(m),
            "radial_max_abs": top,
            "max_abs": abs(y0) * top,
        })
    return {
        "harmonic_at_k0": y0,
        "rows": rows,
        "max_abs": max(row["max_abs"] for row in rows),
    }


def shift_identity_check(bundle: CounterexampleBundle, m: int, lambdas) -> float:
    """Max relative gap between ``(-(lam^2+rho_l^2)+delta)^m`` and ``(-(lam^2+rho^2))^m``."""
    lam = np.asarray(lambdas, dtype=float)
    rho, rho_l = bundle.rho, bundle.space.rho_l
    delta = rho_l ** 2 - rho ** 2
    a = (-(lam * lam + rho_l ** 2) + delta) ** m
    b = (-(lam * lam + rho ** 2)) ** m
    return float(np.max(np.abs(a - b) / np.abs(b)))


def divergence_report(bundle: CounterexampleBundle, m_max: int = 100, quad: QuadratureSpec | None = None) -> CarlemanReport:
    """Carleman report for ``||Delta^m f||_2`` on ``H^n`` (harmonic norm factor omitted)."""
    if not 1 <= m_max <= 200:
        raise InvalidParameterError("m_max must lie in [1, 200]")
    quad = quad or QuadratureSpec()
    panels = panels_for(quad.lambda_max, 1.0, quad.points_per_panel, quad.panels or 1)
    lam, w = gauss_legendre_panels(0.0, quad.lambda_max, panels, quad.points_per_panel)
    log_amp = spectral_amplitude(bundle, lam, 0)
    fhat = SpectralProfile(lam, np.exp(log_amp), np.exp(log_plancherel_density(bundle.base, lam)), weights=w, log_abs=log_amp)
    rep = laplacian_power_norms(bundle.base, fhat, m_max)
    rep.metadata.update({"bundle": bundle.to_dict(), "norm_factor": "harmonic norm omitted", "d_nl": bundle.d_nl})
    return rep


def growth_exponents(bundle: CounterexampleBundle, lo: float = 10.0, hi: float = 1e3, points: int = 200) -> dict:
    """Fitted ``n_0`` (Plancherel density) and ``p_0`` (``|Q_l|^2``) exponents on ``[lo, hi]``."""
    lam = np.geomspace(lo, hi, points)
    rho = bundle.rho
    ld = log_plancherel_density(bundle.base, lam)
    n0 = float(np.polyfit(np.log(lam), ld, 1)[0])
    lq = 2.0 * np.log(np.abs(q_value(bundle.l, 1j * lam - rho)))
    lx = np.log(lam * lam + rho * rho)
    p0 = float(np.polyfit(lx, lq, 1)[0])
    c_q = float(np.max(lq - p0 * lx))
    c_d = float(np.max(ld - n0 * np.log1p(lam)))
    return {"n0": n0, "p0": p0, "log_C_q": c_q, "log_C_density": c_d, "range": [lo, hi]}


def gamma_majorant_check(bundle: CounterexampleBundle, report: CarlemanReport, fit_range=None) -> dict:
    """Check ``||Delta^m f||_2^2 <= C0^(2(m+p0)) Gamma(2m + 2p0 + (n0+1)/2)``.

    ``n0`` and ``p0`` come from :func:`growth_exponents`. ``C0`` is the
    smallest constant that works for ``m`` in ``fit_range`` (default: all
    computed orders); the inequality is then checked at every computed ``m``.
    The constant required at each order increases towards a finite limit,
    so the report also lists its change over the last octave.
    """
    ex = growth_exponents(bundle)
    n0, p0 = ex["n0"], ex["p0"]
    m = report.m_values.astype(float)
    lg = np.real(log_gamma(2 * m + 2 * p0 + (n0 + 1) / 2))
    lhs = 2.0 * report.log_norms
    need = (lhs - lg) / (2.0 * (m + p0))
    lo, hi = fit_range if fit_range is not None else (m[0], m[-1])
    sel = (m >= lo) & (m <= hi)
    log_c0 = float(np.max(need[sel]))
    rhs = 2.0 * (m + p0) * log_c0 + lg
    ok = lhs <= rhs + 1e-12 * np.abs(rhs)
    half = m >= m[-1] / 2
    return {
        "n0": n0,
        "p0": p0,
        "C0": math.exp(log_c0),
        "holds": bool(np.all(ok)),
        "min_margin": float(np.min(rhs - lhs)),
        "fit_range": [float(lo), float(hi)],
        "required_log_C0_last": float(need[-1]),
        "required_log_C0_last_octave_change": float(need[-1] - need[half][0]),
    }


def gamma_asymptotic_check(alpha: float, n_values) -> dict:
    """``|Gamma(n+alpha) / (Gamma(n) n^alpha) - 1|`` for each ``n``.

    Integer ``alpha`` uses the exact product ``prod_{k<alpha} (n+k)/n``.
    """
    if not 0 <= alpha <= 5:
        raise InvalidParameterError("alpha must lie in [0, 5]")
    n = np.asarray(n_values, dtype=float)
    if np.any(n < 2):
        raise InvalidParameterError("n must be >= 2")
    if float(alpha).is_integer():
        ratio = np.ones_like(n)
        for k in range(int(alpha)):
            ratio = ratio * ((n + k) / n)
        dev = np.abs(ratio - 1.0)
    else:
        lr = np.real(log_gamma(n + alpha)) - np.real(log_gamma(n)) - alpha * np.log(n)
        dev = np.abs(np.expm1(lr))
    return {
        "alpha": float(alpha),
        "n": n.tolist(),
        "deviation": dev.tolist(),
        "decreasing": bool(np.all(np.diff(dev) <= 1e-15)),
    }


# ---------------------------------------------------------------------------
# radial side of the Hecke-Bochner identity
# ---------------------------------------------------------------------------

_D1 = np.array([1 / 280, -4 / 105, 1 / 5, -4 / 5, 0.0, 4 / 5, -1 / 5, 4 / 105, -1 / 280])
_D2 = np.array([-1 / 560, 8 / 315, -1 / 5, 8 / 5, -205 / 72, 8 / 5, -1 / 5, 8 / 315, -1 / 560])


def radial_laplacian(params: JacobiParams, h: float, values):
    """``u'' + ((2a+1) coth r + (2b+1) tanh r) u'`` on ``r = 0, h, 2h, ...``.

    Eighth-order central differences with the even extension across 0; the
    last four samples are dropped. At ``r = 0`` the limit ``(2a+2) u''(0)``
    is used.
    """
    u = np.asarray(values, dtype=float)
    ext = np.concatenate([u[4:0:-1], u])
    n = u.size - 4
    d1 = np.zeros(n)
    d2 = np.zeros(n)
    for k in range(9):
        seg = ext[k:k + n]
        d1 += _D1[k] * seg
        d2 += _D2[k] * seg
    d1 /= h
    d2 /= h * h
    r = h * np.arange(n)
    out = np.empty(n)
    out[0] = (2 * params.alpha + 2) * d2[0]
    rr = r[1:]
    out[1:] = d2[1:] + ((2 * params.alpha + 1) / np.tanh(rr) + (2 * params.beta + 1) * np.tanh(rr)) * d1[1:]
    return out


def hecke_bochner_check(bundle: CounterexampleBundle, m: int, h: float = 0.02, r_max: float = 6.0, quad: QuadratureSpec | None = None) -> dict:
    """Compare ``(Delta_l + delta)^m h_1`` computed radially and spectrally.

    The radial route applies finite differences to samples of ``h_1``; the
    spectral route inverts ``(-(lam^2+rho^2))^m e^{-lam^2}``. The gap is
    reported relative to the sup of the spectral result on ``[0, r_max]``.
    """
    if m not in (1, 2):
        raise InvalidParameterError("the radial check supports m in {1, 2}")
    quad = quad or QuadratureSpec(lambda_max=float(bundle.h1_spectral.lambdas[-1]))
    shifted = bundle.shifted
    delta = bundle.space.rho_l ** 2 - bundle.rho ** 2
    n = int(round(r_max / h)) + 1 + 4 * m
    grid = h * np.arange(n)
    u = heat_profile(shifted, 1.0, grid, quad).values
    for _ in range(m):
        u = radial_laplacian(shifted, h, u) + delta * u[: u.size - 4]
    keep = grid[: u.size]
    lam = bundle.h1_spectral.lambdas
    target = SpectralProfile(lam, (-(lam * lam + bundle.rho ** 2)) ** m * np.exp(-lam * lam), bundle.h1_spectral.density, weights=bundle.h1_spectral.weights)
    spec = np.real(jacobi_inverse_values(shifted, target, keep, quad))
    scale = float(np.max(np.abs(spec)))
    return {
        "m": int(m),
        "h": h,
        "r_max": float(keep[-1]),
        "relative_error": float(np.max(np.abs(u - spec)) / scale),
    }
