"""Composite Gauss-Legendre rules."""

import math
from functools import lru_cache

import numpy as np
from scipy.special import roots_legendre


@lru_cache(maxsize=32)
def _reference_rule(points: int):
    x, w = roots_legendre(points)
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


def gauss_legendre_panels(a: float, b: float, panels: int, points: int):
    """Nodes and weights of a composite rule with equal panels on ``[a, b]``."""
    if panels < 1 or points < 1:
        raise ValueError("need at least one panel and one point")
    x, w = _reference_rule(int(points))
    edges = np.linspace(a, b, int(panels) + 1)
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[1:] + edges[:-1])
    nodes = (mid[:, None] + half[:, None] * x[None, :]).ravel()
    weights = (half[:, None] * w[None, :]).ravel()
    return nodes, weights


def panels_for(length: float, frequency: float, points: int, minimum: int = 1, max_width: float = 0.5):
    """Panel count so that ``frequency * width <= pi`` and ``width <= max_width``."""
    need = math.ceil(length * max(frequency, 0.0) / math.pi)
    need = max(need, math.ceil(length / max_width), int(minimum), math.ceil(64 / points))
    return max(need, 1)
