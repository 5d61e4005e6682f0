"""Fourier-Jacobi transform, inversion, Plancherel, Abel transform and heat profiles.

Conventions
-----------
Forward transform::

    F f(lam) = int_0^inf f(t) phi_lam(t) (2 sinh t)^(2a+1) (2 cosh t)^(2b+1) dt

Inversion::

    f(t) = kappa int_0^inf F f(lam) phi_lam(t) |c(lam)|^-2 dlam,   kappa = 1/(2 pi)

Euclidean transform of an even function of one variable::

    E g(xi) = int g(x) exp(-2 pi i x xi) dx = 2 int_0^inf g(x) cos(2 pi xi x) dx

The Abel transform is realised spectrally, ``A f(s) = (1/pi) int_0^inf F f(lam)
cos(lam s) dlam``, so that ``E(A f)(lam / 2 pi) = F f(lam)``.
"""

from __future__ import annotations

import math
import threading
from collections import OrderedDict
from dataclasses import dataclass, field

import numpy as np
from scipy.interpolate import CubicSpline

from . import _kernels
from .errors import InterpolationError, InvalidParameterError, TailMassError
from .jacobi import phi_table
from .quadrature import gauss_legendre_panels, panels_for
from .specfun import JacobiParams, log_plancherel_density

__all__ = [
    "KAPPA",
    "RadialProfile",
    "SpectralProfile",
    "QuadratureSpec",
    "log_weight",
    "spectral_nodes",
    "jacobi_forward",
    "jacobi_inverse",
    "jacobi_inverse_values",
    "plancherel_sides",
    "calibrate_kappa",
    "euclid_cosine_ft",
    "abel_slice",
    "support_leakage",
    "heat_profile",
    "transform_metadata",
]

KAPPA = 1.0 / (2.0 * math.pi)


@dataclass
class RadialProfile:
    """Samples of an even function of the radius on ``grid`` (``grid[0] = 0``)."""

    grid: np.ndarray
    values: np.ndarray
    support_radius: float | None = None

    def __post_init__(self):
        self.grid = np.asarray(self.grid, dtype=float)
        self.values = np.asarray(self.values, dtype=float)
        if self.grid.ndim != 1 or self.grid.shape != self.values.shape or self.grid.size < 4:
            raise InvalidParameterError("grid and values must be 1-d arrays of equal length >= 4")
        if self.grid[0] != 0.0 or np.any(np.diff(self.grid) <= 0):
            raise InvalidParameterError("grid must start at 0 and increase strictly")
        if not (np.all(np.isfinite(self.grid)) and np.all(np.isfinite(self.values))):
            raise InvalidParameterError("profile samples must be finite")
        if self.support_radius is not None:
            self.support_radius = float(self.support_radius)
            outside = self.grid > self.support_radius
            if np.any(np.abs(self.values[outside]) >= 1e-12):
                raise InvalidParameterError("values beyond the declared support radius must vanish")
        self._spline = None

    @property
    def extent(self) -> float:
        """Right end of the region where the profile may be nonzero."""
        if self.support_radius is not None:
            return min(self.support_radius, float(self.grid[-1]))
        return float(self.grid[-1])

    def _make_spline(self, grid, values):
        # clamped at the origin: the even extension has zero slope there
        return CubicSpline(grid, values, bc_type=((1, 0.0), "not-a-knot"))

    def __call__(self, t):
        if self._spline is None:
            self._spline = self._make_spline(self.grid, self.values)
        t = np.asarray(t, dtype=float)
        out = self._spline(np.abs(t))
        if self.support_radius is not None:
            out = np.where(np.abs(t) > self.support_radius, 0.0, out)
        elif np.any(np.abs(t) > self.grid[-1] * (1 + 1e-12)):
            raise InvalidParameterError("evaluation beyond the sampled grid")
        return out

    def interpolation_error(self, points) -> float:
        """Grid-halving estimate of the cubic interpolation error at ``points``."""
        idx = np.arange(0, self.grid.size, 2)
        if idx[-1] != self.grid.size - 1:
            idx = np.append(idx, self.grid.size - 1)
        if idx.size < 4:
            return float("inf")
        coarse = self._make_spline(self.grid[idx], self.values[idx])
        pts = np.asarray(points, dtype=float)
        pts = pts[pts <= self.grid[-1]]
        fine = self(pts)
        return float(np.max(np.abs(fine - coarse(pts)), initial=0.0)) / 15.0


@dataclass
class SpectralProfile:
    """Samples of a spectral function on ``lambdas`` with the Plancherel density.

    ``weights`` holds quadrature weights when the nodes come from a quadrature
    rule; ``log_abs`` optionally stores ``log|values|`` for data that would
    underflow in linear form.
    """

    lambdas: np.ndarray
    values: np.ndarray
    density: np.ndarray
    weights: np.ndarray | None = None
    log_abs: np.ndarray | None = None
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        self.lambdas = np.asarray(self.lambdas, dtype=float)
        self.values = np.asarray(self.values, dtype=complex)
        self.density = np.asarray(self.density, dtype=float)
        n = self.lambdas.size
        if self.lambdas.ndim != 1 or self.values.shape != (n,) or self.density.shape != (n,):
            raise InvalidParameterError("spectral arrays must be 1-d and of equal length")
        if np.any(self.lambdas < 0) or np.any(np.diff(self.lambdas) <= 0):
            raise InvalidParameterError("lambdas must be nonnegative and strictly increasing")
        if np.any(self.density < 0) or not np.all(np.isfinite(self.values)):
            raise InvalidParameterError("density must be >= 0 and values finite")
        if self.weights is not None:
            self.weights = np.asarray(self.weights, dtype=float)
        if self.log_abs is not None:
            self.log_abs = np.asarray(self.log_abs, dtype=float)

    def log_magnitude(self):
        if self.log_abs is not None:
            return self.log_abs
        with np.errstate(divide="ignore"):
            return np.log(np.abs(self.values))

    def quadrature_weights(self):
        """Quadrature weights, trapezoidal when none were recorded."""
        if self.weights is not None:
            return self.weights
        lam = self.lambdas
        w = np.zeros_like(lam)
        d = np.diff(lam)
        w[:-1] += 0.5 * d
        w[1:] += 0.5 * d
        return w


@dataclass(frozen=True)
class QuadratureSpec:
    """Truncation and Gauss-Legendre settings shared by the transforms."""

    t_max: float = 12.0
    lambda_max: float = 64.0
    panels: int | None = None
    points_per_panel: int = 32
    tolerance: float = 1e-8

    def __post_init__(self):
        if not (self.t_max > 0 and self.lambda_max > 0):
            raise InvalidParameterError("t_max and lambda_max must be positive")
        if self.points_per_panel < 1 or (self.panels is not None and self.panels < 1):
            raise InvalidParameterError("panels and points_per_panel must be positive")
        if self.panels is not None and self.panels * self.points_per_panel < 64:
            raise InvalidParameterError("panels * points_per_panel must be >= 64")
        if not self.tolerance > 0:
            raise InvalidParameterError("tolerance must be positive")

    def to_dict(self) -> dict:
        return {
            "t_max": self.t_max,
            "lambda_max": self.lambda_max,
            "panels": self.panels,
            "points_per_panel": self.points_per_panel,
            "tolerance": self.tolerance,
        }


def transform_metadata(params: JacobiParams | None = None) -> dict:
    meta = {"kappa": KAPPA, "kernel_backend": _kernels.HAS_NUMBA and "numba" or "numpy"}
    if params is not None:
        meta["params"] = params.to_dict()
    return meta


def log_weight(params: JacobiParams, t):
    """``log[(2 sinh t)^(2a+1) (2 cosh t)^(2b+1)]``, ``-inf`` where the weight vanishes."""
    t = np.asarray(t, dtype=float)
    p, q = 2 * params.alpha + 1, 2 * params.beta + 1
    with np.errstate(divide="ignore"):
        ls = np.log(2.0 * np.sinh(t))
    lc = np.log(2.0 * np.cosh(t))
    first = p * ls if p != 0 else np.zeros_like(t)
    return first + q * lc


def _weight(params, t):
    return np.exp(log_weight(params, t))


# ---------------------------------------------------------------------------
# cache of Jacobi tables shared between transforms on identical nodes
# ---------------------------------------------------------------------------

_TABLE_CACHE: "OrderedDict[tuple, np.ndarray]" = OrderedDict()
_TABLE_LOCK = threading.Lock()
_TABLE_CACHE_SIZE = 6


def _cached_phi(params: JacobiParams, lambdas, t):
    key = (params.alpha, params.beta, lambdas.tobytes(), t.tobytes())
    with _TABLE_LOCK:
        if key in _TABLE_CACHE:
            _TABLE_CACHE.move_to_end(key)
            return _TABLE_CACHE[key]
    table, _ = phi_table(params, lambdas, t)
    table.setflags(write=False)
    with _TABLE_LOCK:
        _TABLE_CACHE[key] = table
        while len(_TABLE_CACHE) > _TABLE_CACHE_SIZE:
            _TABLE_CACHE.popitem(last=False)
    return table


def clear_cache():
    with _TABLE_LOCK:
        _TABLE_CACHE.clear()


def spectral_nodes(quad: QuadratureSpec, radius: float | None = None):
    """Gauss-Legendre nodes on ``[0, lambda_max]`` resolving ``cos(lam * radius)``."""
    radius = quad.t_max if radius is None else radius
    panels = panels_for(quad.lambda_max, radius, quad.points_per_panel, quad.panels or 1)
    return gauss_legendre_panels(0.0, quad.lambda_max, panels, quad.points_per_panel)


def _radial_nodes(quad: QuadratureSpec, extent: float, frequency: float):
    panels = panels_for(extent, frequency, quad.points_per_panel, quad.panels or 1)
    return gauss_legendre_panels(0.0, extent, panels, quad.points_per_panel)


def _sample_profile(f: RadialProfile, nodes, tolerance):
    vals = f(nodes)
    scale = max(float(np.max(np.abs(f.values))), 1e-300)
    err = f.interpolation_error(nodes)
    if err > tolerance * scale:
        raise InterpolationError(
            f"profile grid too coarse: interpolation error estimate {err:.3e} exceeds {tolerance:.1e} (relative)"
        )
    return vals


# ---------------------------------------------------------------------------
# Jacobi transform pair
# ---------------------------------------------------------------------------

def jacobi_forward(params: JacobiParams, f: RadialProfile, quad: QuadratureSpec = QuadratureSpec(), lambdas=None):
    """Fourier-Jacobi transform of a radial profile.

    Parameters
    ----------
    params : JacobiParams
    f : RadialProfile
    quad : QuadratureSpec
    lambdas : array_like, optional
        Spectral nodes; by default the Gauss-Legendre nodes of
        :func:`spectral_nodes`, whose weights are then attached.

    Raises
    ------
    TailMassError
        If the weighted integrand at the truncation radius is not below
        ``1e-3 * tolerance`` relative to its peak.
    InterpolationError
        If the profile grid cannot support the requested accuracy.
    """
    extent = min(quad.t_max, f.extent)
    if lambdas is None:
        lam, lw = spectral_nodes(quad, radius=extent)
    else:
        lam = np.asarray(lambdas, dtype=float)
        lw = None
    lam_top = float(np.max(lam)) if lam.size else 0.0
    tn, tw = _radial_nodes(quad, extent, lam_top)
    fv = _sample_profile(f, tn, quad.tolerance)
    lw_t = log_weight(params, tn)
    phi0 = _cached_phi(params, np.zeros(1), np.append(tn, extent))[0]
    envelope = np.abs(fv) * np.exp(lw_t) * phi0[:-1]
    end_val = abs(float(f(np.array([extent]))[0])) * math.exp(float(log_weight(params, extent))) * phi0[-1]
    peak = float(np.max(envelope, initial=0.0))
    if peak > 0 and end_val > 1e-3 * quad.tolerance * peak:
        raise TailMassError(
            f"weighted integrand at t={extent:g} is {end_val / peak:.2e} of its peak; increase t_max or use a faster-decaying profile"
        )
    table = _cached_phi(params, lam, tn)
    vals = _kernels.row_sums(table, tw * fv * np.exp(lw_t))
    return SpectralProfile(
        lam,
        vals.astype(complex),
        np.exp(log_plancherel_density(params, lam)),
        weights=lw,
        metadata=transform_metadata(params),
    )


def _spectral_on_nodes(fhat: SpectralProfile, quad: QuadratureSpec, radius: float):
    if fhat.weights is not None:
        return fhat.lambdas, fhat.weights, fhat.values
    top = min(quad.lambda_max, float(fhat.lambdas[-1]))
    panels = panels_for(top, radius, quad.points_per_panel, quad.panels or 1)
    lam, w = gauss_legendre_panels(0.0, top, panels, quad.points_per_panel)
    re = CubicSpline(fhat.lambdas, fhat.values.real)(lam)
    im = CubicSpline(fhat.lambdas, fhat.values.imag)(lam)
    return lam, w, re + 1j * im


def _check_spectral_tail(params, lam, values, tolerance):
    dens = np.exp(log_plancherel_density(params, lam))
    mag = np.abs(values) * dens
    peak = float(np.max(mag, initial=0.0))
    if peak > 0 and mag[-1] > 1e-3 * tolerance * peak:
        raise TailMassError(
            f"spectral integrand at lambda={lam[-1]:g} is {mag[-1] / peak:.2e} of its peak; increase lambda_max"
        )
    return dens


def jacobi_inverse_values(params: JacobiParams, fhat: SpectralProfile, t, quad: QuadratureSpec = QuadratureSpec()):
    """``kappa * int fhat(lam) phi_lam(t) |c(lam)|^-2 dlam`` at arbitrary radii ``t >= 0``."""
    t = np.atleast_1d(np.asarray(t, dtype=float))
    lam, w, vals = _spectral_on_nodes(fhat, quad, float(np.max(t, initial=0.0)))
    dens = _check_spectral_tail(params, lam, vals, quad.tolerance)
    table = _cached_phi(params, lam, t)
    tt = np.ascontiguousarray(table.T)
    coef = KAPPA * w * dens
    out = _kernels.row_sums(tt, coef * vals.real)
    if np.any(vals.imag != 0):
        out = out + 1j * _kernels.row_sums(tt, coef * vals.imag)
    return out


def jacobi_inverse(params: JacobiParams, fhat: SpectralProfile, t_nodes, quad: QuadratureSpec = QuadratureSpec()):
    """Inverse Fourier-Jacobi transform sampled on ``t_nodes`` (starting at 0)."""
    vals = jacobi_inverse_values(params, fhat, t_nodes, quad)
    return RadialProfile(np.asarray(t_nodes, dtype=float), np.real(vals))


def plancherel_sides(params: JacobiParams, f: RadialProfile, quad: QuadratureSpec = QuadratureSpec(), fhat=None):
    """Both sides of the Plancherel identity.

    Returns ``(radial, spectral)`` where ``radial = int |f|^2 w dt`` and
    ``spectral = kappa int |F f|^2 |c|^-2 dlam``.
    """
    extent = min(quad.t_max, f.extent)
    tn, tw = _radial_nodes(quad, extent, 1.0)
    fv = _sample_profile(f, tn, quad.tolerance)
    radial = _kernels.pairwise_sum(np.ascontiguousarray(tw * fv * fv * _weight(params, tn)))
    if fhat is None:
        fhat = jacobi_forward(params, f, quad)
    lw = fhat.quadrature_weights()
    spectral = KAPPA * _kernels.pairwise_sum(np.ascontiguousarray(lw * np.abs(fhat.values) ** 2 * fhat.density))
    return float(radial), float(spectral)


def calibrate_kappa(params: JacobiParams, quad: QuadratureSpec | None = None, width: float = 1.0):
    """Normalisation fixed by Plancherel on the reference Gaussian ``exp(-(t/width)^2)``.

    Returns the ratio ``int |f|^2 w dt / int |F f|^2 |c|^-2 dlam``, which the
    inversion constant must equal.
    """
    quad = quad or QuadratureSpec(t_max=8.0, lambda_max=16.0, tolerance=1e-10)
    grid = np.linspace(0.0, quad.t_max, int(round(quad.t_max / 0.005)) + 1)
    f = RadialProfile(grid, np.exp(-((grid / width) ** 2)))
    radial, spectral = plancherel_sides(params, f, quad)
    return radial / (spectral / KAPPA)


# ---------------------------------------------------------------------------
# Euclidean cosine transform and Abel transform
# ---------------------------------------------------------------------------

def _cosine_sums(nodes, weights, values, freqs, chunk=256):
    out = np.empty(freqs.size)
    wv = np.ascontiguousarray(weights * values)
    for start in range(0, freqs.size, chunk):
        block = np.cos(np.outer(freqs[start:start + chunk], nodes))
        out[start:start + chunk] = _kernels.row_sums(block, wv)
    return out


def euclid_cosine_ft(f: RadialProfile, xi_nodes, quad: QuadratureSpec | None = None):
    """Euclidean Fourier transform ``2 int_0^inf f(t) cos(2 pi xi t) dt`` of an even profile."""
    quad = quad or QuadratureSpec()
    xi = np.atleast_1d(np.asarray(xi_nodes, dtype=float))
    extent = f.extent
    if f.support_radius is None:
        scale = float(np.max(np.abs(f.values)))
        if scale > 0 and abs(f.values[-1]) > 1e-3 * quad.tolerance * scale:
            raise TailMassError("profile does not decay at the end of its grid")
    tn, tw = _radial_nodes(quad, extent, 2 * math.pi * float(np.max(np.abs(xi), initial=0.0)))
    fv = _sample_profile(f, tn, quad.tolerance)
    vals = 2.0 * _cosine_sums(tn, tw, fv, 2 * math.pi * xi)
    return SpectralProfile(np.abs(xi) if np.all(xi >= 0) else xi, vals.astype(complex), np.ones_like(xi))


def abel_slice(params: JacobiParams, f: RadialProfile, s_nodes, quad: QuadratureSpec = QuadratureSpec()):
    """Abel transform ``A f(s) = (1/pi) int_0^inf F f(lam) cos(lam s) dlam``.

    ``f`` must declare a compact support radius.
    """
    if f.support_radius is None:
        raise InvalidParameterError("abel_slice needs a profile with declared compact support")
    s = np.atleast_1d(np.asarray(s_nodes, dtype=float))
    radius = max(float(np.max(np.abs(s), initial=0.0)), f.extent)
    lam, lw = spectral_nodes(quad, radius=radius)
    fhat = jacobi_forward(params, f, quad, lambdas=lam)
    vals = _cosine_sums(lam, lw, fhat.values.real, s) / math.pi
    if s[0] == 0.0 and np.all(np.diff(s) > 0):
        return RadialProfile(s, vals)
    return vals


def support_leakage(values, s_nodes, support_radius: float, margin: float = 0.05) -> float:
    """``max |A f(s)|`` over ``|s| > (1 + margin) L`` relative to ``max |A f|``."""
    vals = np.asarray(values, dtype=float)
    s = np.asarray(s_nodes, dtype=float)
    peak = float(np.max(np.abs(vals)))
    outside = np.abs(s) > (1.0 + margin) * support_radius
    if peak == 0:
        return 0.0
    return float(np.max(np.abs(vals[outside]), initial=0.0)) / peak


# ---------------------------------------------------------------------------
# heat profiles
# ---------------------------------------------------------------------------

def heat_profile(params: JacobiParams, time: float, t_nodes, quad: QuadratureSpec = QuadratureSpec()):
    """Radial profile whose Jacobi transform is ``exp(-time * lam^2)``."""
    if not time > 0:
        raise InvalidParameterError("heat time must be positive")
    t_nodes = np.asarray(t_nodes, dtype=float)
    lam, lw = spectral_nodes(quad, radius=float(np.max(t_nodes)))
    fhat = SpectralProfile(lam, np.exp(-time * lam * lam), np.exp(log_plancherel_density(params, lam)), weights=lw)
    return jacobi_inverse(params, fhat, t_nodes, quad)
