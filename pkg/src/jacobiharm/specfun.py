"""Special functions for Jacobi analysis.

Complex log-gamma (Lanczos), the Gauss hypergeometric series, Gegenbauer
polynomials, and the Harish-Chandra c-function with its Plancherel density.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConvergenceError, InvalidParameterError, PoleError

__all__ = [
    "JacobiParams",
    "HyperbolicSpec",
    "log_gamma",
    "gamma",
    "hyp2f1",
    "gegenbauer",
    "harish_chandra_c",
    "log_harish_chandra_c",
    "plancherel_density",
    "log_plancherel_density",
]


@dataclass(frozen=True)
class JacobiParams:
    """Jacobi parameters (alpha, beta) with ``rho = alpha + beta + 1``.

    Requires ``alpha >= beta >= -1/2``.
    """

    alpha: float
    beta: float

    def __post_init__(self):
        a, b = float(self.alpha), float(self.beta)
        if not (math.isfinite(a) and math.isfinite(b)):
            raise InvalidParameterError("alpha and beta must be finite")
        if b < -0.5 or a < b:
            raise InvalidParameterError(f"need alpha >= beta >= -1/2, got alpha={a}, beta={b}")
        if a < 0 and a == int(a):
            raise InvalidParameterError("alpha must not be a negative integer")
        object.__setattr__(self, "alpha", a)
        object.__setattr__(self, "beta", b)

    @property
    def rho(self) -> float:
        return self.alpha + self.beta + 1.0

    @property
    def multiplicities(self) -> tuple[float, float]:
        """Root multiplicities ``(m1, m2)`` with ``rho = m1/2 + m2``."""
        return 2.0 * (self.alpha - self.beta), 2.0 * self.beta + 1.0

    @property
    def growth_exponent(self) -> float:
        """Exponent ``2*alpha + 1`` of the large-lambda growth of the density."""
        return 2.0 * self.alpha + 1.0

    @classmethod
    def hyperbolic(cls, n: int) -> "JacobiParams":
        """Parameters of real hyperbolic n-space."""
        if int(n) != n or n < 2:
            raise InvalidParameterError("hyperbolic dimension must be an integer >= 2")
        return cls((n - 2) / 2.0, -0.5)

    def to_dict(self) -> dict:
        return {"alpha": self.alpha, "beta": self.beta, "rho": self.rho}


@dataclass(frozen=True)
class HyperbolicSpec:
    """Real hyperbolic space ``H^n`` together with a harmonic degree ``l``."""

    n: int
    l: int = 0

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 2:
            raise InvalidParameterError("n must be an integer >= 2")
        if int(self.l) != self.l or self.l < 0:
            raise InvalidParameterError("l must be an integer >= 0")
        object.__setattr__(self, "n", int(self.n))
        object.__setattr__(self, "l", int(self.l))

    @property
    def rho(self) -> float:
        return (self.n - 1) / 2.0

    @property
    def alpha_l(self) -> float:
        return (self.n + 2 * self.l - 2) / 2.0

    @property
    def beta_l(self) -> float:
        return -0.5

    @property
    def rho_l(self) -> float:
        return self.rho + self.l

    @property
    def multiplicities(self) -> tuple[int, int]:
        return self.n - 1, 0

    @property
    def base_params(self) -> JacobiParams:
        return JacobiParams.hyperbolic(self.n)

    @property
    def shifted_params(self) -> JacobiParams:
        return JacobiParams(self.alpha_l, self.beta_l)


# ---------------------------------------------------------------------------
# log-gamma
# ---------------------------------------------------------------------------

# Lanczos approximation, g = 7, nine terms.
_LANCZOS_G = 7.0
_LANCZOS_P = np.array(
    [
        0.99999999999980993,
        676.5203681218851,
        -1259.1392167224028,
        771.32342877765313,
        -176.61502916214059,
        12.507343278686905,
        -0.13857109526572012,
        9.9843695780195716e-6,
        1.5056327351493116e-7,
    ]
)
_HALF_LOG_2PI = 0.5 * math.log(2.0 * math.pi)


def _lanczos_log_gamma(z):
    # valid for Re z >= 0.5
    zm1 = z - 1.0
    acc = np.full_like(z, _LANCZOS_P[0])
    for k in range(1, _LANCZOS_P.size):
        acc = acc + _LANCZOS_P[k] / (zm1 + k)
    t = zm1 + _LANCZOS_G + 0.5
    return _HALF_LOG_2PI + (zm1 + 0.5) * np.log(t) - t + np.log(acc)


def log_gamma(z):
    """Principal branch of ``log Gamma(z)`` for complex ``z``.

    Uses the Lanczos series for ``Re z >= 0.5``. Points with smaller real part
    are shifted right with ``log G(z) = log G(z + N) - sum_k log(z + k)``,
    which preserves the principal branch.

    Parameters
    ----------
    z : complex or array_like

    Returns
    -------
    complex or ndarray of complex

    Raises
    ------
    PoleError
        If any input is a nonpositive integer.
    """
    zarr = np.asarray(z, dtype=complex)
    scalar = zarr.ndim == 0
    zarr = np.atleast_1d(zarr).astype(complex)
    re, im = zarr.real, zarr.imag
    if np.any((im == 0) & (re <= 0) & (re == np.round(re))):
        raise PoleError("log_gamma has poles at nonpositive integers")
    shift = np.where(re < 0.5, np.ceil(0.5 - re), 0.0).astype(np.int64)
    out = np.empty_like(zarr)
    plain = shift == 0
    if np.any(plain):
        out[plain] = _lanczos_log_gamma(zarr[plain])
    if np.any(~plain):
        zs = zarr[~plain]
        ns = shift[~plain]
        acc = _lanczos_log_gamma(zs + ns)
        for k in range(int(ns.max())):
            active = k < ns
            acc = acc - np.where(active, np.log(np.where(active, zs + k, 1.0)), 0.0)
        out[~plain] = acc
    return out[0] if scalar else out


def gamma(z):
    """``Gamma(z) = exp(log_gamma(z))``; real input gives a real result."""
    val = np.exp(log_gamma(z))
    if np.isrealobj(z):
        val = val.real
    return val


def _rgamma(z):
    """``1/Gamma(z)``, zero at the poles."""
    z = complex(z)
    if z.imag == 0 and z.real <= 0 and z.real == round(z.real):
        return 0.0
    return complex(np.exp(-log_gamma(z)))


# ---------------------------------------------------------------------------
# Gauss hypergeometric function
# ---------------------------------------------------------------------------

def _f21_series(a, b, c, x, tol, max_terms):
    term = 1.0 + 0.0j
    total = 1.0 + 0.0j
    small = 0
    for k in range(max_terms):
        term *= (a + k) * (b + k) / ((c + k) * (k + 1.0)) * x
        total += term
        if abs(term) <= tol * abs(total):
            small += 1
            if small >= 2:
                return total
        else:
            small = 0
    raise ConvergenceError(f"2F1 series did not converge in {max_terms} terms at x={x}")


def hyp2f1(a, b, c, x, *, tol=1e-16, max_terms=20000):
    """Gauss hypergeometric function for real ``x <= 0``.

    Direct series for ``-1/2 <= x <= 0``. For ``x < -1/2`` the argument is
    mapped to ``w = 1/(1 - x)`` in ``(0, 2/3)``::

        F(a,b;c;x) = G(c)G(b-a)/(G(b)G(c-a)) (1-x)^(-a) F(a, c-b; a-b+1; w)
                   + G(c)G(a-b)/(G(a)G(c-b)) (1-x)^(-b) F(b, c-a; b-a+1; w)

    When ``a - b`` is an integer that connection is singular and the Pfaff
    form ``(1-x)^(-a) F(a, c-b; c; x/(x-1))`` is summed instead.

    Raises
    ------
    PoleError
        If ``c`` is a nonpositive integer.
    ConvergenceError
        If the series does not meet ``tol`` within ``max_terms`` terms.
    """
    a, b, c = complex(a), complex(b), complex(c)
    x = float(x)
    if c.imag == 0 and c.real <= 0 and c.real == round(c.real):
        raise PoleError("hyp2f1 needs c not a nonpositive integer")
    if x > 0:
        raise InvalidParameterError("hyp2f1 is implemented for x <= 0 only")
    if x == 0:
        return 1.0 + 0.0j
    if x >= -0.5:
        return _f21_series(a, b, c, x, tol, max_terms)
    dab = a - b
    if abs(dab.imag) < 1e-14 and abs(dab.real - round(dab.real)) < 1e-14:
        z = x / (x - 1.0)
        return (1.0 - x) ** (-a) * _f21_series(a, c - b, c, z, tol, max_terms)
    w = 1.0 / (1.0 - x)
    lg_c = log_gamma(c)
    total = 0.0 + 0.0j
    for p, q in ((a, b), (b, a)):
        # G(c) G(q - p) / (G(q) G(c - p)) (1-x)^(-p) F(p, c-q; p-q+1; w)
        inv = _rgamma(q) * _rgamma(c - p)
        if inv == 0:
            continue
        coef = np.exp(lg_c + log_gamma(q - p)) * inv
        series = _f21_series(p, c - q, p - q + 1.0, w, tol, max_terms)
        total += coef * np.exp(-p * math.log1p(-x)) * series
    return complex(total)


# ---------------------------------------------------------------------------
# Gegenbauer polynomials
# ---------------------------------------------------------------------------

def gegenbauer(l, nu, x):
    """Gegenbauer polynomial ``C_l^nu(x)`` by the three-term recurrence.

    For ``nu = 0`` the Chebyshev polynomial ``T_l`` is returned, which is the
    zonal harmonic on the circle.

    Parameters
    ----------
    l : int
        Degree, ``l >= 0``.
    nu : float
    x : float or array_like
        Points in ``[-1, 1]``.
    """
    if int(l) != l or l < 0:
        raise InvalidParameterError("degree must be a nonnegative integer")
    l = int(l)
    xa = np.asarray(x, dtype=float)
    if np.any(np.abs(xa) > 1.0 + 1e-14):
        raise InvalidParameterError("gegenbauer needs |x| <= 1")
    if nu == 0.0:
        prev, cur = np.ones_like(xa), xa.copy()
        if l == 0:
            return prev if xa.ndim else float(prev)
        for k in range(1, l):
            prev, cur = cur, 2.0 * xa * cur - prev
        return cur if xa.ndim else float(cur)
    prev = np.ones_like(xa)
    if l == 0:
        return prev if xa.ndim else float(prev)
    cur = 2.0 * nu * xa
    for k in range(1, l):
        nxt = (2.0 * xa * (k + nu) * cur - (k + 2.0 * nu - 1.0) * prev) / (k + 1.0)
        prev, cur = cur, nxt
    return cur if xa.ndim else float(cur)


# ---------------------------------------------------------------------------
# Harish-Chandra c-function
# ---------------------------------------------------------------------------

_LOG2 = math.log(2.0)


def log_harish_chandra_c(params: JacobiParams, lam):
    """Complex logarithm of the c-function for ``lam > 0``.

    ``c(lam) = 2^(rho - i lam) G(alpha+1) G(i lam)
    / (G((i lam + rho)/2) G((i lam + alpha - beta + 1)/2))``
    """
    lam = np.asarray(lam, dtype=float)
    if np.any(lam <= 0) or not np.all(np.isfinite(lam)):
        raise InvalidParameterError("c-function needs finite lambda > 0")
    a, b, rho = params.alpha, params.beta, params.rho
    il = 1j * lam
    return (
        (rho - il) * _LOG2
        + log_gamma(a + 1.0)
        + log_gamma(il)
        - log_gamma((il + rho) / 2.0)
        - log_gamma((il + a - b + 1.0) / 2.0)
    )


def harish_chandra_c(params: JacobiParams, lam):
    """The c-function ``c(lam)`` for ``lam > 0`` (complex)."""
    return np.exp(log_harish_chandra_c(params, lam))


def log_plancherel_density(params: JacobiParams, lam):
    """``log |c(lam)|^-2`` for ``lam >= 0``.

    At ``lam = 0`` the analytic limit is used: ``-inf`` when ``rho > 0`` and
    ``log 4`` in the flat case ``alpha = beta = -1/2``.
    """
    lam = np.asarray(lam, dtype=float)
    if np.any(lam < 0) or not np.all(np.isfinite(lam)):
        raise InvalidParameterError("density needs finite lambda >= 0")
    out = np.empty(lam.shape, dtype=float)
    pos = lam > 0
    if np.any(pos):
        out[pos] = -2.0 * np.real(log_harish_chandra_c(params, lam[pos]))
    if np.any(~pos):
        out[~pos] = -np.inf if params.rho > 0 else 2.0 * _LOG2
    return out if out.ndim else float(out)


def plancherel_density(params: JacobiParams, lam):
    """Plancherel density ``|c(lam)|^-2`` for ``lam >= 0``."""
    return np.exp(log_plancherel_density(params, lam))
