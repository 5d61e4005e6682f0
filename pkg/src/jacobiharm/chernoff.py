"""Laplacian power norms, moment sequences and Carleman-type divergence diagnostics.

All norms are formed from the spectral side::

    ||Delta^m f||_2^2 = int_0^inf (lam^2 + rho^2)^(2m) |F f(lam)|^2 |c(lam)|^-2 dlam

in log form, so ``m`` in the hundreds never overflows. Divergence of a series
cannot be observed from finitely many terms; verdicts here describe the
trend of the partial sums and are labelled as such.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize_scalar

from . import _kernels
from .errors import CaseViolationError, DivergentMomentError, InvalidParameterError
from .ingham import ThetaProfile, geometric_grid, theta_case_split
from .quadrature import gauss_legendre_panels, panels_for
from .specfun import JacobiParams, log_plancherel_density
from .transforms import QuadratureSpec, SpectralProfile

__all__ = [
    "CarlemanReport",
    "MomentReport",
    "AndivReport",
    "Case1Bound",
    "trend_verdict",
    "carleman_report",
    "gaussian_spectrum",
    "laplacian_power_norms",
    "moment_sequence",
    "moment_norm_chain",
    "andiv_diagnostic",
    "SequenceGenerator",
    "case1_norm_bound",
    "quartic_sum",
]

TAIL_DROP = 40.0
DIVERGENT_SLOPE = 0.1
SHRINK_RATIO = 0.75


def _slope(x, y):
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.size < 2:
        return float("nan")
    xc = x - x.mean()
    den = float(np.dot(xc, xc))
    return float(np.dot(xc, y - y.mean()) / den) if den > 0 else float("nan")


def trend_verdict(m_values, partial_sums):
    """Classify partial-sum growth over the last two octaves of ``m``.

    The slope of ``S_m`` against ``log m`` is fitted on ``[m_max/4, m_max]``.
    A slope above 0.1 reads as divergent; otherwise a second-octave slope
    below 3/4 of the first-octave slope reads as convergent (terms
    ``m^-p`` shrink the slope by ``2^(1-p)`` per octave).

    Returns
    -------
    verdict : str
        ``"divergent-trend"``, ``"convergent-trend"`` or ``"inconclusive"``.
    stats : dict
        Slopes over both octaves and their union.
    """
    m = np.asarray(m_values, dtype=float)
    s = np.asarray(partial_sums, dtype=float)
    top = float(m[-1])
    lo = (m >= top / 4) & (m <= top / 2)
    hi = (m >= top / 2) & (m <= top)
    both = m >= top / 4
    lm = np.log(m)
    stats = {
        "slope": _slope(lm[both], s[both]),
        "slope_first_octave": _slope(lm[lo], s[lo]),
        "slope_second_octave": _slope(lm[hi], s[hi]),
        "window": [top / 4, top],
    }
    if not math.isfinite(stats["slope"]):
        return "inconclusive", stats
    if stats["slope"] > DIVERGENT_SLOPE:
        return "divergent-trend", stats
    s1, s2 = stats["slope_first_octave"], stats["slope_second_octave"]
    if math.isfinite(s1) and math.isfinite(s2) and abs(s2) < SHRINK_RATIO * abs(s1):
        return "convergent-trend", stats
    return "inconclusive", stats


@dataclass
class CarlemanReport:
    """Log-norms ``log ||Delta^m f||_2``, terms ``||Delta^m f||_2^(-1/2m)`` and partial sums."""

    m_values: np.ndarray
    log_norms: np.ndarray
    terms: np.ndarray
    partial_sums: np.ndarray
    verdict: str
    trend_statistics: dict
    metadata: dict = field(default_factory=dict)

    def rows(self):
        return [(int(m), float(ln), float(t), float(s)) for m, ln, t, s in zip(self.m_values, self.log_norms, self.terms, self.partial_sums)]

    def to_dict(self) -> dict:
        return {
            "verdict": self.verdict,
            "trend_statistics": self.trend_statistics,
            "table": [list(r) for r in self.rows()],
            "columns": ["m", "log_norm", "term", "partial_sum"],
            "metadata": self.metadata,
        }


def carleman_report(m_values, log_norms, metadata=None) -> CarlemanReport:
    """Assemble terms, partial sums and the trend verdict from log-norms."""
    m = np.asarray(m_values, dtype=int)
    ln = np.asarray(log_norms, dtype=float)
    if m.ndim != 1 or m.shape != ln.shape or m.size == 0 or np.any(m < 1) or np.any(np.diff(m) <= 0):
        raise InvalidParameterError("m_values must be increasing positive integers matching log_norms")
    terms = np.exp(-ln / (2.0 * m))
    sums = np.cumsum(terms)
    verdict, stats = trend_verdict(m, sums)
    return CarlemanReport(m, ln, terms, sums, verdict, stats, dict(metadata or {}))


def gaussian_spectrum(params: JacobiParams, scale: float = 1.0, coef: float = 1.0, quad: QuadratureSpec | None = None):
    """``coef * exp(-scale lam^2)`` on Gauss-Legendre nodes of ``[0, lambda_max]``."""
    quad = quad or QuadratureSpec()
    panels = panels_for(quad.lambda_max, 1.0, quad.points_per_panel, quad.panels or 1)
    lam, w = gauss_legendre_panels(0.0, quad.lambda_max, panels, quad.points_per_panel)
    log_abs = math.log(abs(coef)) - scale * lam * lam
    return SpectralProfile(
        lam,
        coef * np.exp(-scale * lam * lam),
        np.exp(log_plancherel_density(params, lam)),
        weights=w,
        log_abs=log_abs,
        metadata={"spectrum": "gaussian", "scale": scale, "coef": coef},
    )


def _log_nodes(fhat: SpectralProfile, log_density):
    w = fhat.quadrature_weights()
    with np.errstate(divide="ignore"):
        return np.log(w) + log_density


def _check_tail(logs, what):
    finite = logs[np.isfinite(logs)]
    if finite.size == 0:
        return
    if np.isfinite(logs[-1]) and logs[-1] > float(np.max(finite)) - TAIL_DROP:
        raise DivergentMomentError(
            f"{what}: integrand at the last spectral node is only {float(np.max(finite)) - logs[-1]:.1f} "
            f"below its peak in log scale; the spectrum does not decay fast enough for this order"
        )


def _log_power_norms(params, fhat, m, check=True):
    lam = fhat.lambdas
    base = 2.0 * fhat.log_magnitude() + _log_nodes(fhat, log_plancherel_density(params, lam))
    lq = np.log(lam * lam + params.rho ** 2)
    mat = 2.0 * np.asarray(m, dtype=float)[:, None] * lq[None, :] + base[None, :]
    if check:
        _check_tail(mat[-1] if mat.shape[0] else base, "Laplacian power norm")
    return 0.5 * _kernels.lse_rows(mat)


def laplacian_power_norms(params: JacobiParams, fhat: SpectralProfile, m_max: int = 100, m_values=None) -> CarlemanReport:
    """Carleman report for ``sum_m ||Delta^m f||_2^(-1/2m)``.

    Parameters
    ----------
    params : JacobiParams
    fhat : SpectralProfile
        Spectrum on quadrature nodes (weights attached) or on a grid
        (trapezoidal weights). ``log_abs`` is used when present.
    m_max : int
    m_values : array_like, optional
        Orders to report; default ``1..m_max``.

    Raises
    ------
    DivergentMomentError
        If at the largest order the integrand at the last node is not at least
        ``e^-40`` below its peak.
    """
    m = np.arange(1, int(m_max) + 1) if m_values is None else np.asarray(m_values, dtype=int)
    if m.size == 0 or np.any(m < 1):
        raise InvalidParameterError("orders must be positive")
    log_norms = _log_power_norms(params, fhat, m)
    meta = {"params": params.to_dict(), "nodes": int(fhat.lambdas.size), "lambda_max": float(fhat.lambdas[-1])}
    return carleman_report(m, log_norms, meta)


@dataclass
class MomentReport:
    """Moments ``M(2m) = int lam^(2m) dmu`` and the Carleman terms ``M(2m)^(-1/2m)``."""

    orders: np.ndarray
    log_moments: np.ndarray
    carleman_terms: np.ndarray
    partial_sums: np.ndarray
    verdict: str
    trend_statistics: dict

    def to_dict(self) -> dict:
        return {
            "verdict": self.verdict,
            "trend_statistics": self.trend_statistics,
            "table": [[int(o), float(l), float(t), float(s)] for o, l, t, s in zip(self.orders, self.log_moments, self.carleman_terms, self.partial_sums)],
            "columns": ["order", "log_moment", "term", "partial_sum"],
        }


def _log_moments(mu: SpectralProfile, m):
    lam = mu.lambdas
    with np.errstate(divide="ignore"):
        base = mu.log_magnitude() + _log_nodes(mu, np.log(mu.density))
        ll = np.log(lam)
    mat = 2.0 * np.asarray(m, dtype=float)[:, None] * ll[None, :] + base[None, :]
    _check_tail(mat[-1], "moment sequence")
    return _kernels.lse_rows(mat)


def moment_sequence(mu_density: SpectralProfile, m_max: int = 100) -> MomentReport:
    """Moments of ``dmu = |values| * density * dlam`` and their Carleman sum.

    For a spectrum ``fhat`` with the Plancherel density attached this is the
    measure ``|fhat(lam)| |c(lam)|^-2 dlam``.
    """
    m = np.arange(1, int(m_max) + 1)
    logm = _log_moments(mu_density, m)
    terms = np.exp(-logm / (2.0 * m))
    sums = np.cumsum(terms)
    verdict, stats = trend_verdict(m, sums)
    return MomentReport(2 * m, logm, terms, sums, verdict, stats)


def _log_chain_constant(params: JacobiParams, fhat: SpectralProfile, r: int, points: int = 64):
    # the density grows like lam^(2 alpha + 1)
    if params.growth_exponent - 4.0 * r >= -1.0:
        raise DivergentMomentError(f"(lam^2+rho^2)^(-{2 * r}) |c|^-2 is not integrable; increase r")
    lam = fhat.lambdas
    lq = np.log(lam * lam + params.rho ** 2)
    nodes = -2.0 * r * lq + _log_nodes(fhat, log_plancherel_density(params, lam))
    top = float(lam[-1])
    # tail int_top^inf via lam = top/u, u in (0, 1]
    u, w = gauss_legendre_panels(0.0, 1.0, 4, points)
    x = top / u
    tail = -2.0 * r * np.log(x * x + params.rho ** 2) + log_plancherel_density(params, x) + np.log(w * top / (u * u))
    both = np.concatenate([nodes, tail])
    return 0.5 * float(_kernels.lse_rows(both[None, :])[0])


def moment_norm_chain(params: JacobiParams, fhat: SpectralProfile, m_values, r: int = 2) -> dict:
    """Check ``M(2m) <= A_r ||Delta^(m+r) f||_2`` for the measure ``|fhat| |c|^-2 dlam``.

    ``A_r^2 = int (lam^2+rho^2)^(-2r) |c|^-2 dlam`` is evaluated on the same
    nodes as both sides plus a mapped tail beyond the last node, so the
    Cauchy-Schwarz step holds for the discrete sums as well.
    """
    m = np.asarray(m_values, dtype=int)
    mu = SpectralProfile(fhat.lambdas, fhat.values, np.exp(log_plancherel_density(params, fhat.lambdas)), weights=fhat.weights, log_abs=fhat.log_abs)
    logm = _log_moments(mu, m)
    log_a = _log_chain_constant(params, fhat, r)
    log_rhs = log_a + _log_power_norms(params, fhat, m + r)
    holds = logm <= log_rhs + 1e-12 * np.maximum(1.0, np.abs(log_rhs))
    return {
        "r": int(r),
        "log_A_r": log_a,
        "m": m.tolist(),
        "log_moment": logm.tolist(),
        "log_bound": log_rhs.tolist(),
        "holds": bool(np.all(holds)),
        "margin_min": float(np.min(log_rhs - logm)),
    }


# ---------------------------------------------------------------------------
# subsequence divergence of positive sequences
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SequenceGenerator:
    """Positive sequence ``a_n`` with its declared series behaviour."""

    func: object
    divergent: bool
    name: str = ""

    def __call__(self, n):
        return np.asarray(self.func(np.asarray(n, dtype=float)), dtype=float)

    @classmethod
    def harmonic(cls):
        return cls(lambda n: 1.0 / n, True, "1/n")

    @classmethod
    def constant(cls, c: float):
        return cls(lambda n: np.full_like(n, c), True, f"{c:g}")


@dataclass
class AndivReport:
    decades: np.ndarray
    partial_sums: np.ndarray
    increments: np.ndarray
    base_increments: np.ndarray
    set_b_fraction: float
    ratio_last: float
    ratio_min_last_decade: float
    total: float

    def to_dict(self) -> dict:
        return {
            "decades": self.decades.tolist(),
            "partial_sums": self.partial_sums.tolist(),
            "increments": self.increments.tolist(),
            "base_increments": self.base_increments.tolist(),
            "set_b_fraction": self.set_b_fraction,
            "ratio_last": self.ratio_last,
            "ratio_min_last_decade": self.ratio_min_last_decade,
            "total": self.total,
        }


def andiv_diagnostic(a: SequenceGenerator, m: float, N: int = 10 ** 6, first_decade: int = 2) -> AndivReport:
    """Partial sums of ``a_n^(1 + m/n)`` and the ratios ``a_n^(m/n)`` on ``B = {a_n > 1/n^2}``.

    Parameters
    ----------
    a : SequenceGenerator
        Must declare ``sum a_n`` divergent.
    m : float
        Exponent shift, ``>= 0``.
    N : int
        Number of terms.
    first_decade : int
        Decade increments ``S(10^(k+1)) - S(10^k)`` are reported for
        ``k >= first_decade``.
    """
    if not a.divergent:
        raise InvalidParameterError("the sequence must be declared to have a divergent sum")
    if m < 0 or N < 10:
        raise InvalidParameterError("need m >= 0 and N >= 10")
    n = np.arange(1, int(N) + 1, dtype=float)
    an = a(n)
    if np.any(an <= 0) or not np.all(np.isfinite(an)):
        raise InvalidParameterError("sequence must be positive and finite")
    la = np.log(an)
    terms = np.exp((1.0 + m / n) * la)
    sums = np.cumsum(terms)
    base = np.cumsum(an)
    top = int(math.floor(math.log10(N)))
    decades = np.array([10 ** k for k in range(first_decade, top + 1)], dtype=np.int64)
    at = sums[decades - 1]
    base_at = base[decades - 1]
    in_b = an > 1.0 / (n * n)
    ratio = np.exp((m / n) * la)
    last = n > N / 10
    sel = in_b & last
    return AndivReport(
        decades=decades,
        partial_sums=at,
        increments=np.diff(at),
        base_increments=np.diff(base_at),
        set_b_fraction=float(np.mean(in_b)),
        ratio_last=float(ratio[-1]),
        ratio_min_last_decade=float(np.min(ratio[sel])) if sel.any() else float("nan"),
        total=float(sums[-1]),
    )


# ---------------------------------------------------------------------------
# explicit norm bound under the square-root threshold
# ---------------------------------------------------------------------------

@dataclass
class Case1Bound:
    """Three-piece sup of ``(rho^2 + r^2)^m exp(-r theta(r)/2)`` and its majorants (log values)."""

    m: int
    log_pieces: tuple
    log_sup: float
    log_majorant: float
    log_far_majorant: float
    constant: float
    carleman_lower: float

    def to_dict(self) -> dict:
        return {
            "m": self.m,
            "log_pieces": list(self.log_pieces),
            "log_sup": self.log_sup,
            "log_majorant": self.log_majorant,
            "log_far_majorant": self.log_far_majorant,
            "constant": self.constant,
            "carleman_lower": self.carleman_lower,
        }


def _piece_sup(fun, lo, hi, per_decade=256):
    lo_g = max(lo, 1e-12)
    grid = np.concatenate([[lo], geometric_grid(lo_g, hi, per_decade)]) if lo == 0 else geometric_grid(lo, hi, per_decade)
    vals = fun(grid)
    i = int(np.argmax(vals))
    a = grid[max(i - 1, 0)]
    b = grid[min(i + 1, grid.size - 1)]
    best = float(vals[i])
    if b > a:
        res = minimize_scalar(lambda x: -float(fun(np.array([x]))[0]), bounds=(a, b), method="bounded", options={"xatol": 1e-12 * max(1.0, b)})
        best = max(best, -float(res.fun))
    return best


def case1_norm_bound(theta: ThetaProfile, params: JacobiParams, m: int) -> Case1Bound:
    """Bound ``(C m / theta(m^4))^(2m)`` with ``C = 4 sqrt(1+rho^2) 3^(1/2m)``.

    The sup of ``g_m(r) = (rho^2+r^2)^m e^{-r theta(r)/2}`` is computed
    numerically on ``[0, 1]``, ``[1, m^4]`` and ``(m^4, inf)``; the sum of the
    three sups never exceeds ``3 (1+rho^2)^m (4m/theta(m^4))^(2m)``.

    Raises
    ------
    CaseViolationError
        If ``theta(r) >= 4/sqrt(r)`` fails for some ``r >= 1``.
    """
    m = int(m)
    if m < 1:
        raise InvalidParameterError("m must be a positive integer")
    split = theta_case_split(theta)
    if split.case != "case1":
        raise CaseViolationError(f"theta violates theta(r) >= 4/sqrt(r) (first at r = {split.first_violation})")
    rho2 = params.rho ** 2

    def log_g(r):
        return m * np.log(rho2 + r * r) - 0.5 * r * theta(r)

    m4 = float(m) ** 4
    far_hi = max(m4 * 1e4, 1e8)
    pieces = (
        _piece_sup(log_g, 0.0, 1.0),
        _piece_sup(log_g, 1.0, max(m4, 1.0 + 1e-9)),
        _piece_sup(log_g, m4, far_hi),
    )
    top = max(pieces)
    log_sup = top + math.log(sum(math.exp(p - top) for p in pieces))
    th = float(theta(m4))
    log_major = math.log(3.0) + m * math.log(1.0 + rho2) + 2 * m * math.log(4.0 * m / th)
    far = m * math.log(2.0) + 8 * m * math.log(m) - 2.0 * m * m
    const = 4.0 * math.sqrt(1.0 + rho2) * 3.0 ** (1.0 / (2 * m))
    return Case1Bound(m, pieces, log_sup, log_major, far, const, th / (const * m))


def quartic_sum(theta: ThetaProfile, m_max: int = 1000):
    """Partial sums of ``theta(m^4)/m``; divergence matches that of the Ingham integral."""
    m = np.arange(1, int(m_max) + 1, dtype=float)
    return np.cumsum(theta(m ** 4) / m)
