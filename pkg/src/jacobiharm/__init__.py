"""Numerical harmonic analysis on rank-one symmetric spaces.

Jacobi functions and transforms, Ingham-type decay profiles, Carleman
divergence diagnostics and the hyperbolic-space counterexample to a
Chernoff-type uniqueness statement for vanishing along a ray.
"""

from ._accel import backend_name
from .errors import (
    AdmissibilityError,
    InvalidParameterError,
    JacobiHarmError,
    NumericalError,
)
from .specfun import HyperbolicSpec, JacobiParams
from .transforms import QuadratureSpec, RadialProfile, SpectralProfile

__version__ = "0.1.0"

__all__ = [
    "AdmissibilityError",
    "HyperbolicSpec",
    "InvalidParameterError",
    "JacobiHarmError",
    "JacobiParams",
    "NumericalError",
    "QuadratureSpec",
    "RadialProfile",
    "SpectralProfile",
    "backend_name",
    "__version__",
]
