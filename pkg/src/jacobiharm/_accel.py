"""Switch between numba-compiled kernels and the pure-numpy fallback.

Set ``JACOBIHARM_DISABLE_NUMBA=1`` before import to force the fallback path.
"""

import os

_DISABLED = os.environ.get("JACOBIHARM_DISABLE_NUMBA", "").strip().lower() in {"1", "true", "yes", "on"}

try:
    if _DISABLED:
        raise ImportError("numba disabled by environment")
    from numba import njit as _njit

    HAS_NUMBA = True
except ImportError:
    _njit = None
    HAS_NUMBA = False


def jit(func):
    """Compile ``func`` with numba when available, otherwise return it unchanged."""
    if HAS_NUMBA:
        return _njit(cache=True, fastmath=False)(func)
    return func


def backend_name():
    return "numba" if HAS_NUMBA else "numpy"
