"""Fitted power-law majorants ``y <= C1 + C2 x^p`` on sampled data."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidParameterError

__all__ = ["PowerBound", "fit_power_bound", "loglog_slope"]


def loglog_slope(x, y) -> float:
    """Least-squares slope of ``log y`` against ``log x``."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if np.any(x <= 0) or np.any(y <= 0):
        raise InvalidParameterError("log-log fit needs positive data")
    return float(np.polyfit(np.log(x), np.log(y), 1)[0])


@dataclass(frozen=True)
class PowerBound:
    c1: float
    c2: float
    p: float

    def __call__(self, x):
        return self.c1 + self.c2 * np.asarray(x, dtype=float) ** self.p


def fit_power_bound(x, y, tail_fraction: float = 0.5) -> PowerBound:
    """Majorant ``C1 + C2 x^p`` holding at every sample.

    ``p`` is the log-log slope over the upper ``tail_fraction`` of the samples
    (in log ``x``), ``C2`` the largest ``y / x^p`` there, and ``C1`` the
    smallest offset making the bound hold everywhere.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    lx = np.log(x)
    tail = lx >= lx.max() - tail_fraction * (lx.max() - lx.min())
    p = loglog_slope(x[tail], y[tail])
    c2 = float(np.max(y[tail] / x[tail] ** p))
    c1 = float(max(0.0, np.max(y - c2 * x ** p)))
    return PowerBound(c1, c2, p)
