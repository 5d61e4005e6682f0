"""Jacobi functions, the rank-one Cherednik operator and Opdam functions.

The Jacobi function solves::

    phi'' + ((2a+1) coth t + (2b+1) tanh t) phi' + (lam^2 + rho^2) phi = 0,
    phi(0) = 1, phi'(0) = 0.

It is evaluated by an eight-term Taylor series near the origin followed by
adaptive Gragg-Bulirsch-Stoer extrapolation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import IntegrationError, InvalidParameterError, PoleError, SingularPointError
from .specfun import JacobiParams

__all__ = [
    "SpectralPoint",
    "LAMBDA_MIN",
    "phi",
    "phi_derivative",
    "phi_and_derivative",
    "phi_table",
    "ode_residual",
    "cherednik_kernel",
    "cherednik_apply",
    "opdam_g",
    "g_factor",
]

LAMBDA_MIN = 1e-3
DEFAULT_RTOL = 1e-13
MAX_STEPS = 2_000_000


@dataclass(frozen=True)
class SpectralPoint:
    """Spectral parameter ``lam + i*imaginary_part``, real or purely imaginary."""

    lam: float
    imaginary_part: float = 0.0

    def __post_init__(self):
        lam, im = float(self.lam), float(self.imaginary_part)
        if not (math.isfinite(lam) and math.isfinite(im)):
            raise InvalidParameterError("spectral parameter must be finite")
        if im != 0.0 and lam != 0.0:
            raise InvalidParameterError("only real or purely imaginary spectral parameters are supported")
        object.__setattr__(self, "lam", lam)
        object.__setattr__(self, "imaginary_part", im)

    @property
    def lam_squared(self) -> float:
        """``lam^2`` as it enters the ODE (negative on the imaginary axis)."""
        return self.lam * self.lam - self.imaginary_part * self.imaginary_part


def _lam_squared(lam) -> float:
    if isinstance(lam, SpectralPoint):
        return lam.lam_squared
    if isinstance(lam, complex):
        return SpectralPoint(lam.real, lam.imag).lam_squared
    return float(lam) ** 2


def _check_status(status):
    if status == _kernels.MAX_STEPS:
        raise IntegrationError("ODE integration exceeded the step budget")
    if status == _kernels.STEP_UNDERFLOW:
        raise IntegrationError("ODE step size underflow")


def phi_table(params: JacobiParams, lambdas, t, *, lam_squared=False, rtol=DEFAULT_RTOL):
    """Values and derivatives of ``phi_lam(t)`` on a spectral x radial grid.

    Parameters
    ----------
    params : JacobiParams
    lambdas : array_like
        Real spectral nodes, or values of ``lam^2`` when ``lam_squared`` is set
        (negative entries then describe imaginary parameters).
    t : array_like
        Radii ``>= 0``, any order.

    Returns
    -------
    values, derivatives : ndarray, shape (len(lambdas), len(t))
    """
    lam = np.atleast_1d(np.asarray(lambdas, dtype=float))
    tt = np.atleast_1d(np.asarray(t, dtype=float))
    if np.any(tt < 0) or not np.all(np.isfinite(tt)):
        raise InvalidParameterError("radii must be finite and >= 0")
    mus = (lam if lam_squared else lam * lam) + params.rho ** 2
    order = np.argsort(tt, kind="stable")
    vals, ders, status = _kernels.phi_table(params.alpha, params.beta, mus, tt[order], rtol, MAX_STEPS)
    _check_status(status)
    out_v = np.empty_like(vals)
    out_d = np.empty_like(ders)
    out_v[:, order] = vals
    out_d[:, order] = ders
    return out_v, out_d


def phi_and_derivative(params: JacobiParams, lam, t, *, rtol=DEFAULT_RTOL):
    """``(phi_lam(t), phi_lam'(t))`` for scalar or array ``t``."""
    tarr = np.asarray(t, dtype=float)
    v, d = phi_table(params, [_lam_squared(lam)], tarr.ravel(), lam_squared=True, rtol=rtol)
    if tarr.ndim == 0:
        return float(v[0, 0]), float(d[0, 0])
    return v[0].reshape(tarr.shape), d[0].reshape(tarr.shape)


def phi(params: JacobiParams, lam, t, *, rtol=DEFAULT_RTOL):
    """Jacobi function ``phi_lam^(alpha, beta)(t)``.

    ``lam`` may be a real number or a :class:`SpectralPoint`.
    """
    return phi_and_derivative(params, lam, t, rtol=rtol)[0]


def phi_derivative(params: JacobiParams, lam, t, *, rtol=DEFAULT_RTOL):
    """Radial derivative ``d phi_lam / dt`` taken from the integration state."""
    return phi_and_derivative(params, lam, t, rtol=rtol)[1]


def _drift(params: JacobiParams, t):
    return (2 * params.alpha + 1) / np.tanh(t) + (2 * params.beta + 1) * np.tanh(t)


def ode_residual(params: JacobiParams, lam, t, *, rtol=DEFAULT_RTOL):
    """Absolute ODE residual at radii ``t > 0``.

    The second derivative is a sixth-order central difference of the
    integrated first derivative, so the check does not reuse the right-hand
    side that drives the integrator.
    """
    tarr = np.atleast_1d(np.asarray(t, dtype=float))
    if np.any(tarr <= 0):
        raise InvalidParameterError("residual is evaluated at t > 0")
    lam2 = _lam_squared(lam)
    mu = lam2 + params.rho ** 2
    h = np.minimum(np.minimum(2e-3, tarr / 4.0), 0.05 / math.sqrt(abs(mu) + 1.0))
    offsets = np.arange(-3, 4)
    pts = (tarr[:, None] + offsets[None, :] * h[:, None]).ravel()
    v, d = phi_table(params, [lam2], pts, lam_squared=True, rtol=rtol)
    v = v[0].reshape(tarr.size, 7)
    d = d[0].reshape(tarr.size, 7)
    coef = np.array([-1.0, 9.0, -45.0, 0.0, 45.0, -9.0, 1.0]) / 60.0
    second = (d @ coef) / h
    res = np.abs(second + _drift(params, tarr) * d[:, 3] + mu * v[:, 3])
    return res if np.ndim(t) else float(res[0])


# ---------------------------------------------------------------------------
# Cherednik operator and Opdam functions
# ---------------------------------------------------------------------------

def cherednik_kernel(params: JacobiParams, t):
    """Reflection coefficient ``m1/(1 - e^{-2t}) + 2 m2/(1 - e^{-4t})``.

    The roots are evaluated at ``2t`` so that the even part of an eigenfunction
    solves the Jacobi equation in the geodesic variable ``t``.
    """
    m1, m2 = params.multiplicities
    t = np.asarray(t, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        return m1 / (-np.expm1(-2.0 * t)) + 2.0 * m2 / (-np.expm1(-4.0 * t))


def cherednik_apply(params: JacobiParams, grid, values, t):
    """Apply the rank-one Cherednik operator to sampled data.

    ``T f(t) = f'(t) + k(t) (f(t) - f(-t)) - rho f(t)`` with ``f'`` from
    fourth-order central differences on a uniform grid symmetric about 0.

    Parameters
    ----------
    grid : array_like
        Uniform grid, symmetric about the origin.
    values : array_like
        Samples of ``f`` on ``grid`` (real or complex).
    t : float or array_like
        Grid points, nonzero, with two neighbours on each side.
    """
    grid = np.asarray(grid, dtype=float)
    vals = np.asarray(values)
    if grid.ndim != 1 or grid.size != vals.size or grid.size < 5:
        raise InvalidParameterError("grid and values must be 1-d arrays of equal length >= 5")
    h = grid[1] - grid[0]
    if not np.allclose(np.diff(grid), h, rtol=1e-9, atol=1e-12):
        raise InvalidParameterError("grid must be uniform")
    if not np.allclose(grid, -grid[::-1], atol=1e-12 * max(1.0, abs(grid[-1]))):
        raise InvalidParameterError("grid must be symmetric about 0")
    tarr = np.atleast_1d(np.asarray(t, dtype=float))
    if np.any(tarr == 0.0):
        raise SingularPointError("the Cherednik operator is applied at t != 0 only")
    idx = np.rint((tarr - grid[0]) / h).astype(int)
    if np.any(np.abs(grid[np.clip(idx, 0, grid.size - 1)] - tarr) > 1e-9 * max(1.0, abs(h))):
        raise InvalidParameterError("t must be a grid point")
    if np.any((idx < 2) | (idx > grid.size - 3)):
        raise InvalidParameterError("t needs two grid neighbours on each side")
    ridx = grid.size - 1 - idx
    deriv = (vals[idx - 2] - 8.0 * vals[idx - 1] + 8.0 * vals[idx + 1] - vals[idx + 2]) / (12.0 * h)
    out = deriv + cherednik_kernel(params, tarr) * (vals[idx] - vals[ridx]) - params.rho * vals[idx]
    return out if np.ndim(t) else out[0]


def opdam_g(params: JacobiParams, lam, t, *, rtol=DEFAULT_RTOL):
    """Opdam function ``G_lam(t)`` for real ``lam`` with ``|lam| >= LAMBDA_MIN``.

    Integrates the coupled system for ``(G(t), G(-t))`` implied by
    ``T G = i lam G`` from ``G(0) = 1``.
    """
    lam = float(lam.lam if isinstance(lam, SpectralPoint) else lam)
    if abs(lam) < LAMBDA_MIN:
        raise InvalidParameterError(f"opdam_g needs |lambda| >= {LAMBDA_MIN}")
    tarr = np.asarray(t, dtype=float)
    flat = tarr.ravel()
    r = np.abs(flat)
    order = np.argsort(r, kind="stable")
    u, v, status = _kernels.opdam_pair(params.alpha, params.beta, lam, np.ascontiguousarray(r[order]), rtol, MAX_STEPS)
    _check_status(status)
    pos = np.empty(flat.size, dtype=complex)
    neg = np.empty(flat.size, dtype=complex)
    pos[order] = u
    neg[order] = v
    out = np.where(flat >= 0, pos, neg)
    if tarr.ndim == 0:
        return complex(out[0])
    return out.reshape(tarr.shape)


def g_factor(params: JacobiParams, lam):
    """Rational factor ``g(lam) = 1 - rho/(i lam)``.

    With this normalization ``(g(lam) G_lam + g(-lam) G_-lam)/2 = phi_lam``.
    """
    lam_arr = np.asarray(lam.lam if isinstance(lam, SpectralPoint) else lam, dtype=float)
    if np.any(lam_arr == 0.0):
        raise PoleError("g has a pole at lambda = 0")
    out = 1.0 - params.rho / (1j * lam_arr)
    return complex(out) if out.ndim == 0 else out
