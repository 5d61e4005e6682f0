"""Independent reference values shared by the tests."""

import mpmath
import numpy as np

from jacobiharm.transforms import QuadratureSpec


def h3_phi(lam, t):
    """Closed form ``sin(lam t) / (lam sinh t)`` on three-dimensional hyperbolic space."""
    return np.sin(lam * t) / (lam * np.sinh(t))


def bandlimited_mixture(rng, count=3):
    """Coefficients and widths of ``sum c_k exp(-s_k lam^2)``."""
    coef = rng.uniform(0.5, 1.5, count) * rng.choice([-1.0, 1.0], count)
    coef[0] = abs(coef[0]) + 0.5
    scale = rng.uniform(0.3, 1.0, count)
    return coef, scale


TRANSFORM_QUAD = QuadratureSpec(t_max=12.0, lambda_max=16.0)
TRANSFORM_GRID = np.linspace(0.0, 12.0, 2401)


def stirling_log_gamma(z, dps=50, terms=30):
    """``log Gamma(z)`` from the Stirling series at ``dps`` digits.

    The argument is shifted to ``Re z >= 30`` and brought back with the
    principal-branch recurrence. Bernoulli numbers come from mpmath; the
    gamma function itself is not called.
    """
    with mpmath.workdps(dps):
        z = mpmath.mpc(z)
        shift = 0
        acc = mpmath.mpc(0)
        while (z + shift).real < 30:
            acc += mpmath.log(z + shift)
            shift += 1
        w = z + shift
        s = (w - mpmath.mpf(1) / 2) * mpmath.log(w) - w + mpmath.log(2 * mpmath.pi) / 2
        for k in range(1, terms + 1):
            b = mpmath.bernoulli(2 * k)
            s += b / (2 * k * (2 * k - 1) * w ** (2 * k - 1))
        return complex(s - acc)


def gegenbauer_explicit(l, nu, x):
    """Explicit sum ``sum_k (-1)^k (nu)_{l-k} / (k! (l-2k)!) (2x)^(l-2k)``."""
    total = mpmath.mpf(0)
    for k in range(l // 2 + 1):
        total += (-1) ** k * mpmath.rf(nu, l - k) / (mpmath.factorial(k) * mpmath.factorial(l - 2 * k)) * (2 * mpmath.mpf(x)) ** (l - 2 * k)
    return float(total)
