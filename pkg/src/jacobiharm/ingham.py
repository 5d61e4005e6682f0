"""Decay profiles, the Ingham integral and compactly supported bumps with prescribed decay.

A :class:`ThetaProfile` is a tabulated decreasing function on ``[0, r_max]``
continued by a declared tail law. Divergence of ``int_1^inf theta(r)/r dr``
cannot be decided from samples, so the verdict of :func:`ingham_integral`
comes from the tail law while the table supplies the finite part.

Tail-law catalog (each term is evaluated at ``x = max(r + shift, floor)``)::

    power   c * x^(-a)                   a > 0, floor 1
    log     c / log x                    floor e
    loglog  c * log(log x) / log x       floor e^e
    zero    0

The floors keep every term finite and nonincreasing on ``[0, inf)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import AdmissibilityError, BudgetError, InvalidParameterError, UnsupportedTailError
from .quadrature import gauss_legendre_panels, panels_for
from .specfun import JacobiParams, hyp2f1, log_plancherel_density
from .transforms import RadialProfile, SpectralProfile

__all__ = [
    "TailTerm",
    "ThetaProfile",
    "InghamVerdict",
    "CaseSplit",
    "SincProduct",
    "BumpResult",
    "DecayReport",
    "theta_power",
    "theta_log",
    "theta_loglog",
    "theta_one",
    "ingham_integral",
    "theta_case_split",
    "bump_radii",
    "bump_construct",
    "decay_verify",
    "geometric_grid",
]

TAIL_KINDS = ("power", "log", "loglog", "zero")
_FLOORS = {"power": 1.0, "log": math.e, "loglog": math.e ** math.e, "zero": 1.0}
OCTAVES = 40
CASE1_COEF = 4.0


@dataclass(frozen=True)
class TailTerm:
    """One term of a tail law; see the module docstring for the catalog."""

    kind: str
    coef: float = 1.0
    exponent: float = 0.0
    shift: float = 0.0

    def __post_init__(self):
        if self.kind not in TAIL_KINDS:
            raise UnsupportedTailError(f"tail law {self.kind!r} is not in the catalog {TAIL_KINDS}")
        for name in ("coef", "exponent", "shift"):
            val = float(getattr(self, name))
            if not math.isfinite(val):
                raise InvalidParameterError(f"tail term {name} must be finite")
            object.__setattr__(self, name, val)
        if self.coef < 0:
            raise InvalidParameterError("tail coefficients must be >= 0")
        if self.shift < 0:
            raise InvalidParameterError("tail shifts must be >= 0")
        if self.kind == "power" and not self.exponent > 0:
            raise UnsupportedTailError("power tails need a positive exponent")

    def __call__(self, r):
        r = np.asarray(r, dtype=float)
        if self.kind == "zero" or self.coef == 0.0:
            return np.zeros_like(r)
        x = np.maximum(r + self.shift, _FLOORS[self.kind])
        if self.kind == "power":
            return self.coef * x ** (-self.exponent)
        lx = np.log(x)
        if self.kind == "log":
            return self.coef / lx
        return self.coef * np.log(lx) / lx

    @property
    def diverges(self) -> bool:
        """Whether ``int^inf term(r)/r dr`` diverges."""
        return self.kind in ("log", "loglog") and self.coef > 0

    def remainder(self, x: float) -> float:
        """``int_x^inf term(r)/r dr`` for ``x`` beyond the floor."""
        if self.kind == "zero" or self.coef == 0.0:
            return 0.0
        if self.diverges:
            return math.inf
        a, s = self.exponent, self.shift
        # substitute r = x/u: x^-a int_0^1 u^(a-1) (1 + s u / x)^-a du
        return self.coef * x ** (-a) / a * float(np.real(hyp2f1(a, a, a + 1.0, -s / x)))

    def to_dict(self) -> dict:
        return {"kind": self.kind, "coef": self.coef, "exponent": self.exponent, "shift": self.shift}


class ThetaProfile:
    """Decreasing decay profile: table on ``[0, r_max]`` plus a tail law.

    Between nodes ``log theta`` is interpolated linearly in ``log(1 + r)``.
    A table that agrees with its tail law at every node is evaluated from
    the law directly.

    Parameters
    ----------
    r, theta : array_like
        Table nodes (strictly increasing, starting at 0) and values.
    tail : sequence of TailTerm
        Tail law used for ``r > r_max``; must match the table at ``r_max``.
    name : str, optional
        Label carried into reports.
    """

    def __init__(self, r, theta, tail, name: str = "", continuity_rtol: float = 1e-6):
        r = np.asarray(r, dtype=float)
        th = np.asarray(theta, dtype=float)
        if r.ndim != 1 or r.shape != th.shape or r.size < 2:
            raise InvalidParameterError("theta table needs matching 1-d arrays with at least two nodes")
        if r[0] != 0.0 or np.any(np.diff(r) <= 0):
            raise InvalidParameterError("theta table must start at r = 0 and be strictly increasing")
        if not np.all(np.isfinite(th)) or np.any(th < 0):
            raise InvalidParameterError("theta values must be finite and >= 0")
        if np.any(np.diff(th) > 1e-12 * max(1.0, float(th[0]))):
            raise InvalidParameterError("theta must be decreasing")
        self.tail = tuple(t if isinstance(t, TailTerm) else TailTerm(**t) for t in tail)
        if not self.tail:
            raise UnsupportedTailError("a tail law must be declared")
        if r[-1] >= 2.0 ** OCTAVES:
            raise InvalidParameterError(f"table must end below 2^{OCTAVES}")
        at_end = self.tail_value(r[-1])
        if abs(at_end - th[-1]) > continuity_rtol * max(abs(at_end), abs(th[-1]), 1e-300):
            raise InvalidParameterError(
                f"table value {th[-1]:.6g} at r_max does not match the tail law value {at_end:.6g}"
            )
        if at_end > 0 and all(t.kind == "zero" or t.coef == 0 for t in self.tail):
            raise UnsupportedTailError("a constant tail is only allowed for theta = 0")
        self.r = r
        self.theta = th
        self.name = name
        self._u = np.log1p(r)
        # a table that reproduces its own tail law is evaluated from the law
        self.analytic = bool(np.allclose(self.tail_value(r), th, rtol=1e-12, atol=0.0))
        self._log_table = bool(np.all(th > 0))

    @classmethod
    def from_tail(cls, tail, r_max: float = 1e4, per_decade: int = 64, name: str = ""):
        """Tabulate a tail law on a geometric grid over ``[0, r_max]``."""
        tail = tuple(t if isinstance(t, TailTerm) else TailTerm(**t) for t in tail)
        decades = math.log10(1.0 + r_max)
        u = np.linspace(0.0, decades, max(2, int(math.ceil(decades * per_decade)) + 1))
        r = 10.0 ** u - 1.0
        r[0], r[-1] = 0.0, r_max
        vals = sum(t(r) for t in tail)
        return cls(r, vals, tail, name=name)

    @property
    def r_max(self) -> float:
        return float(self.r[-1])

    def tail_value(self, r):
        return sum(t(r) for t in self.tail) if np.ndim(r) else float(sum(t(r) for t in self.tail))

    def __call__(self, r):
        r = np.asarray(r, dtype=float)
        if np.any(r < 0):
            raise InvalidParameterError("theta is defined on r >= 0")
        if self.analytic:
            out = np.asarray(self.tail_value(r), dtype=float)
            return out if out.ndim else float(out)
        u = np.log1p(np.minimum(r, self.r_max))
        if self._log_table:
            inside = np.exp(np.interp(u, self._u, np.log(self.theta)))
        else:
            inside = np.interp(u, self._u, self.theta)
        out = np.where(r <= self.r_max, inside, self.tail_value(np.maximum(r, self.r_max)))
        return out if out.ndim else float(out)

    def __add__(self, other: "ThetaProfile") -> "ThetaProfile":
        r = np.union1d(self.r[self.r <= min(self.r_max, other.r_max)], other.r[other.r <= min(self.r_max, other.r_max)])
        r_max = max(self.r_max, other.r_max)
        if r[-1] < r_max:
            extra = np.union1d(self.r, other.r)
            r = np.union1d(r, extra[extra > r[-1]])
        vals = self(r) + other(r)
        tail = self.tail + other.tail
        name = f"{self.name}+{other.name}" if self.name and other.name else ""
        return ThetaProfile(r, vals, tail, name=name)

    @property
    def admissible(self) -> bool:
        """Finite Ingham integral, decided by the tail law."""
        return not any(t.diverges for t in self.tail)

    def to_dict(self) -> dict:
        return {"name": self.name, "r_max": self.r_max, "nodes": int(self.r.size), "tail": [t.to_dict() for t in self.tail]}


def theta_power(coef: float, exponent: float, shift: float = 0.0, r_max: float = 1e4) -> ThetaProfile:
    """``coef * max(r + shift, 1)^(-exponent)``."""
    return ThetaProfile.from_tail([TailTerm("power", coef, exponent, shift)], r_max, name=f"{coef:g}*(r+{shift:g})^-{exponent:g}")


def theta_log(coef: float = 1.0, shift: float = math.e, r_max: float = 1e4) -> ThetaProfile:
    """``coef / log(max(r + shift, e))``."""
    return ThetaProfile.from_tail([TailTerm("log", coef, 0.0, shift)], r_max, name=f"{coef:g}/log(r+{shift:g})")


def theta_loglog(coef: float = 1.0, shift: float = 0.0, r_max: float = 1e4) -> ThetaProfile:
    """``coef * log(log x)/log x`` with ``x = max(r + shift, e^e)``."""
    return ThetaProfile.from_tail([TailTerm("loglog", coef, 0.0, shift)], r_max, name=f"{coef:g}*loglog(r)/log(r)")


def theta_one(r_max: float = 1e4) -> ThetaProfile:
    """Augmentation profile ``8 / sqrt(r + 1)``."""
    return theta_power(8.0, 0.5, 1.0, r_max)


# ---------------------------------------------------------------------------
# Ingham integral
# ---------------------------------------------------------------------------

@dataclass
class InghamVerdict:
    """Partial integrals ``int_1^(2^k) theta(r)/r dr`` and the tail-law verdict."""

    integral_estimate: float
    classification: str
    octaves: np.ndarray
    partial_integrals: np.ndarray
    remainder: float
    dimension: int = 1

    @property
    def finite(self) -> bool:
        return self.classification == "finite"

    def to_dict(self) -> dict:
        return {
            "classification": self.classification,
            "integral_estimate": self.integral_estimate if math.isfinite(self.integral_estimate) else None,
            "integral_infinite": not math.isfinite(self.integral_estimate),
            "remainder": self.remainder if math.isfinite(self.remainder) else None,
            "dimension": self.dimension,
            "evidence": [[int(k), float(v)] for k, v in zip(self.octaves, self.partial_integrals)],
        }


def ingham_integral(theta: ThetaProfile, d: int = 1, octaves: int = OCTAVES, points: int = 16) -> InghamVerdict:
    """Ingham integral ``I = int_1^inf theta(r)/r dr`` of a decay profile.

    The integral over the cone in dimension ``d`` reduces to this radial
    integral up to a constant, so ``d`` is recorded but does not change the
    verdict.

    Parameters
    ----------
    theta : ThetaProfile
    d : int
        Dimension of the spectral variable, ``>= 1``.
    octaves : int
        Partial integrals are reported on ``[1, 2^k]`` for ``k <= octaves``.

    Returns
    -------
    InghamVerdict
        ``classification`` is ``"divergent"`` when any tail term is of
        logarithmic type and ``"finite"`` otherwise.
    """
    if int(d) != d or d < 1:
        raise InvalidParameterError("d must be a positive integer")
    if not 1 <= octaves <= OCTAVES:
        raise InvalidParameterError(f"octaves must lie in [1, {OCTAVES}]")
    ln2 = math.log(2.0)
    u, w = gauss_legendre_panels(0.0, octaves * ln2, octaves, points)
    # int theta(r)/r dr = int theta(e^u) du
    vals = theta(np.exp(u)) * w
    per_octave = vals.reshape(octaves, points).sum(axis=1)
    partial = np.cumsum(per_octave)
    x = 2.0 ** octaves
    remainder = float(sum(t.remainder(x) for t in theta.tail))
    divergent = any(t.diverges for t in theta.tail)
    estimate = math.inf if divergent else float(partial[-1] + remainder)
    return InghamVerdict(
        integral_estimate=estimate,
        classification="divergent" if divergent else "finite",
        octaves=np.arange(1, octaves + 1),
        partial_integrals=partial,
        remainder=remainder,
        dimension=int(d),
    )


# ---------------------------------------------------------------------------
# Case split
# ---------------------------------------------------------------------------

@dataclass
class CaseSplit:
    """Outcome of the ``theta(r) >= 4/sqrt(r)`` test."""

    case: str
    augmented: ThetaProfile | None
    first_violation: float | None
    recipe: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "case": self.case,
            "first_violation": self.first_violation,
            "augmented": self.augmented.to_dict() if self.augmented is not None else None,
            "recipe": self.recipe,
        }


def geometric_grid(lo: float, hi: float, per_decade: int = 64):
    """Geometric grid on ``[lo, hi]`` with ``per_decade`` points per decade."""
    if not (0 < lo < hi):
        raise InvalidParameterError("geometric grid needs 0 < lo < hi")
    n = max(2, int(math.ceil(math.log10(hi / lo) * per_decade)) + 1)
    return np.geomspace(lo, hi, n)


def _tail_dominates_sqrt(tail, coef: float) -> bool:
    """Asymptotic comparison of the tail law with ``coef / sqrt(r)``."""
    live = [t for t in tail if t.kind != "zero" and t.coef > 0]
    if any(t.kind in ("log", "loglog") for t in live):
        return True
    powers = [t for t in live if t.kind == "power"]
    if not powers:
        return False
    a_min = min(t.exponent for t in powers)
    if a_min < 0.5:
        return True
    if a_min > 0.5:
        return False
    lead = [t for t in powers if t.exponent == 0.5]
    total = sum(t.coef for t in lead)
    return total > coef or (total == coef and all(t.shift == 0 for t in lead))


def theta_case_split(theta: ThetaProfile, per_decade: int = 64) -> CaseSplit:
    """Decide whether ``theta(r) >= 4/sqrt(r)`` for all ``r >= 1``.

    The inequality is checked on the table nodes, on a geometric grid up to
    ``2^40`` and asymptotically from the tail law. When it fails the
    augmented profile ``theta + 8/sqrt(r+1)`` is returned together with the
    convolution recipe: the spectrum of the final function is the product of
    the two spectra.
    """
    grid = np.union1d(theta.r[theta.r >= 1.0], geometric_grid(1.0, 2.0 ** OCTAVES, per_decade))
    lhs = theta(grid)
    rhs = CASE1_COEF / np.sqrt(grid)
    bad = lhs < rhs * (1.0 - 1e-12)
    asymptotic = _tail_dominates_sqrt(theta.tail, CASE1_COEF)
    if not bad.any() and asymptotic:
        return CaseSplit("case1", None, None, {"threshold": "theta(r) >= 4/sqrt(r), r >= 1"})
    first = float(grid[np.argmax(bad)]) if bad.any() else math.inf
    aug = theta + theta_one(max(theta.r_max, 1e4))
    recipe = {
        "threshold": "theta(r) >= 4/sqrt(r), r >= 1",
        "augmentation": "8/sqrt(r+1)",
        "combine": "product of spectra of the two factors (convolution on the radial side)",
    }
    return CaseSplit("case2", aug, first if math.isfinite(first) else None, recipe)


# ---------------------------------------------------------------------------
# Bump construction
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SincProduct:
    """Exact spectrum ``prod_j sinc(2 a_j xi)`` of a normalised boxcar convolution."""

    radii: tuple

    def __call__(self, xi):
        xi = np.asarray(xi, dtype=float)
        out = np.ones_like(xi)
        for a in self.radii:
            out = out * np.sinc(2.0 * a * xi)
        return out

    def log_abs(self, xi):
        xi = np.asarray(xi, dtype=float)
        out = np.zeros_like(xi)
        with np.errstate(divide="ignore"):
            for a in self.radii:
                out = out + np.log(np.abs(np.sinc(2.0 * a * xi)))
        return out

    def log_envelope(self, xi):
        """Upper bound ``sum_j log min(1, 1/(2 pi a_j xi))`` of :meth:`log_abs`."""
        xi = np.asarray(xi, dtype=float)
        out = np.zeros_like(xi)
        with np.errstate(divide="ignore"):
            for a in self.radii:
                out = out + np.minimum(0.0, -np.log(2.0 * math.pi * a * xi))
        return out

    @property
    def support(self) -> float:
        return float(sum(self.radii))


@dataclass
class BumpResult:
    profile: RadialProfile
    spectrum: SincProduct
    radii: np.ndarray
    support: float
    xi_cutoff: float
    metadata: dict = field(default_factory=dict)


def bump_radii(theta: ThetaProfile, support: float, terms: int):
    """Radii ``a_j = (L/2) theta(2^j) / sum_k theta(2^k)``, ``j = 1..J``."""
    if not support > 0:
        raise InvalidParameterError("support must be positive")
    if int(terms) != terms or terms < 1:
        raise InvalidParameterError("terms must be a positive integer")
    weights = theta(2.0 ** np.arange(1, int(terms) + 1))
    total = float(np.sum(weights))
    if not total > 0:
        raise BudgetError("theta vanishes at every dyadic node; no radius budget can be assigned")
    radii = 0.5 * support * weights / total
    if 2.0 * float(np.sum(radii)) > support * (1.0 + 1e-12):
        raise BudgetError("radii do not fit inside the support budget")
    return radii


def _profile_cutoff(spec: SincProduct, rel: float = 1e-17, cap: float = 1e4):
    xi = geometric_grid(1.0, cap, 32)
    env = spec.log_envelope(xi)
    hit = np.nonzero(env < math.log(rel))[0]
    return float(xi[hit[0]]) if hit.size else cap


def bump_construct(theta: ThetaProfile, support: float = 1.0, terms: int = 24, nodes: int = 4001, points: int = 32) -> BumpResult:
    """Normalised convolution of ``terms`` boxcars with radii chosen from ``theta``.

    Parameters
    ----------
    theta : ThetaProfile
        Decay profile with a finite Ingham integral.
    support : float
        Diameter budget ``L``; the bump lives on ``[-L/2, L/2]``.
    terms : int
        Number of boxcar factors ``J``.
    nodes : int
        Radial sample count on ``[0, sum a_j]``.

    Returns
    -------
    BumpResult
        The sampled profile (inverse cosine transform of the exact spectrum;
        the closed-form boxcar when ``terms == 1``) and the exact spectrum.

    Raises
    ------
    AdmissibilityError
        If the Ingham integral of ``theta`` diverges.
    BudgetError
        If no radii fit in the support budget.
    """
    if not theta.admissible:
        raise AdmissibilityError("the Ingham integral of theta diverges; no bump with this decay exists")
    radii = bump_radii(theta, support, terms)
    spec = SincProduct(tuple(float(a) for a in radii))
    half = spec.support
    grid = np.linspace(0.0, half, int(nodes))
    if terms == 1:
        values = np.full_like(grid, 1.0 / (2.0 * half))
        profile = RadialProfile(grid, values, support_radius=half)
        cutoff = math.inf
    else:
        cutoff = _profile_cutoff(spec)
        panels = panels_for(cutoff, 2.0 * math.pi * half, points)
        xi, w = gauss_legendre_panels(0.0, cutoff, panels, points)
        wv = w * spec(xi)
        values = np.empty_like(grid)
        chunk = max(1, 2_000_000 // xi.size)
        for start in range(0, grid.size, chunk):
            block = np.cos(2.0 * math.pi * np.outer(grid[start:start + chunk], xi))
            values[start:start + chunk] = 2.0 * (block @ wv)
        values[-1] = 0.0
        profile = RadialProfile(grid, values, support_radius=half)
    meta = {
        "theta": theta.to_dict(),
        "terms": int(terms),
        "support_budget": float(support),
        "support_radius": half,
        "radii_rule": "a_j = (L/2) theta(2^j) / sum_k theta(2^k)",
        "xi_cutoff": cutoff if math.isfinite(cutoff) else None,
    }
    return BumpResult(profile, spec, radii, half, cutoff, meta)


# ---------------------------------------------------------------------------
# Decay verification
# ---------------------------------------------------------------------------

@dataclass
class DecayReport:
    """Smallest ``C`` with ``|fhat(xi)| <= C exp(-xi theta(xi))`` on the grid."""

    log_constant: float
    constant: float
    satisfied: bool
    argmax_xi: float
    tail_growing: bool
    grid_size: int
    xi_range: tuple
    log_weighted_integral: float | None = None
    weighted_tail_ratio: float | None = None

    def to_dict(self) -> dict:
        finite = math.isfinite(self.constant)
        out = {
            "log_constant": self.log_constant if math.isfinite(self.log_constant) else None,
            "constant": self.constant if finite else None,
            "constant_infinite": not finite,
            "satisfied": self.satisfied,
            "argmax_xi": self.argmax_xi,
            "tail_growing": self.tail_growing,
            "grid_size": self.grid_size,
            "xi_range": list(self.xi_range),
        }
        if self.log_weighted_integral is not None:
            out["log_weighted_integral"] = self.log_weighted_integral
            out["weighted_tail_ratio"] = self.weighted_tail_ratio
        return out


_LOG_MAX = math.log(np.finfo(float).max)


def _theta_values(theta, xi):
    if isinstance(theta, ThetaProfile) or callable(theta):
        return np.asarray(theta(xi), dtype=float)
    return np.full_like(xi, float(theta))


def _log_abs_spectrum(spectral, xi):
    if hasattr(spectral, "log_abs") and callable(spectral.log_abs):
        return np.asarray(spectral.log_abs(xi), dtype=float)
    if isinstance(spectral, SpectralProfile):
        raise TypeError("sampled spectra are evaluated on their own nodes")
    with np.errstate(divide="ignore"):
        return np.log(np.abs(np.asarray(spectral(xi))))


def decay_verify(spectral, theta, xi_max: float, xi_min: float = 1.0, per_decade: int = 64, params: JacobiParams | None = None) -> DecayReport:
    """Smallest constant in ``|fhat(xi)| <= C exp(-xi theta(xi))`` over a grid.

    Parameters
    ----------
    spectral : SincProduct, SpectralProfile or callable
        Exact spectra are evaluated on a geometric grid over
        ``[xi_min, xi_max]`` (plus 0 when ``xi_min == 0``); a sampled
        :class:`SpectralProfile` is used on its own nodes in that range.
    theta : ThetaProfile, callable or float
    xi_max, xi_min : float
    params : JacobiParams, optional
        Also report ``log int |fhat| e^{lam theta} |c|^-2 dlam`` over
        ``[0, xi_max]`` and the ratio of the weighted integrand at
        ``xi_max`` to its peak.

    Returns
    -------
    DecayReport
        ``constant`` is ``inf`` when ``log C`` exceeds the float range.
    """
    if not xi_max > xi_min >= 0:
        raise InvalidParameterError("need 0 <= xi_min < xi_max")
    if isinstance(spectral, SpectralProfile):
        keep = (spectral.lambdas >= xi_min) & (spectral.lambdas <= xi_max)
        xi = spectral.lambdas[keep]
        log_f = spectral.log_magnitude()[keep]
    else:
        lo = xi_min if xi_min > 0 else min(1e-3, xi_max / 10)
        xi = geometric_grid(lo, xi_max, per_decade)
        if xi_min == 0:
            xi = np.concatenate([[0.0], xi])
        log_f = _log_abs_spectrum(spectral, xi)
    if xi.size == 0:
        raise InvalidParameterError("no spectral nodes in the requested range")
    ratio = log_f + xi * _theta_values(theta, xi)
    i = int(np.argmax(ratio))
    log_c = float(ratio[i])
    constant = math.exp(log_c) if log_c < _LOG_MAX else math.inf
    tail = ratio[-max(2, ratio.size // 10):]
    finite_tail = tail[np.isfinite(tail)]
    growing = bool(finite_tail.size >= 2 and finite_tail[-1] > np.max(finite_tail[:-1]))
    report = DecayReport(
        log_constant=log_c,
        constant=constant,
        satisfied=math.isfinite(constant),
        argmax_xi=float(xi[i]),
        tail_growing=growing,
        grid_size=int(xi.size),
        xi_range=(float(xi[0]), float(xi[-1])),
    )
    if params is not None:
        lam, w = gauss_legendre_panels(0.0, xi_max, max(1, int(math.ceil(xi_max))), 16)
        if isinstance(spectral, SpectralProfile):
            log_fl = np.interp(lam, spectral.lambdas, spectral.log_magnitude())
        else:
            log_fl = _log_abs_spectrum(spectral, lam)
        log_int = log_fl + lam * _theta_values(theta, lam) + log_plancherel_density(params, lam)
        with np.errstate(divide="ignore"):
            terms = log_int + np.log(w)
        top = float(np.max(terms))
        report.log_weighted_integral = top + math.log(float(np.sum(np.exp(terms - top))))
        report.weighted_tail_ratio = float(math.exp(min(0.0, log_int[-1] - np.max(log_int))))
    return report
