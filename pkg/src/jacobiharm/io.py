"""CSV and JSON input/output with lossless, deterministic float formatting."""

from __future__ import annotations

import csv
import json
import math
from pathlib import Path

import numpy as np

from .errors import InvalidParameterError
from .ingham import TailTerm, ThetaProfile
from .specfun import JacobiParams, log_plancherel_density
from .transforms import RadialProfile, SpectralProfile

__all__ = [
    "format_float",
    "to_json",
    "write_json",
    "write_csv",
    "read_csv_columns",
    "read_radial_csv",
    "write_radial_csv",
    "read_spectral_csv",
    "write_spectral_csv",
    "read_theta",
    "write_theta",
]


def format_float(x: float) -> str:
    """Seventeen significant digits in scientific notation."""
    return f"{float(x):.16e}"


def _plain(obj):
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_plain(v) for v in obj.tolist()]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return float(obj)
    if isinstance(obj, complex):
        return {"re": obj.real, "im": obj.imag}
    if obj is None or isinstance(obj, str):
        return obj
    if isinstance(obj, Path):
        return str(obj)
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def _emit(obj, indent, level):
    pad = " " * (indent * (level + 1))
    end = " " * (indent * level)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(k)}: {_emit(v, indent, level + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, list):
        if not obj:
            return "[]"
        if all(not isinstance(v, (dict, list)) for v in obj):
            return "[" + ", ".join(_emit(v, indent, level + 1) for v in obj) + "]"
        items = [pad + _emit(v, indent, level + 1) for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + end + "]"
    if isinstance(obj, bool) or obj is None:
        return json.dumps(obj)
    if isinstance(obj, float):
        if not math.isfinite(obj):
            return "null"
        return "%.17g" % obj
    return json.dumps(obj)


def to_json(obj, indent: int = 2) -> str:
    """JSON text with floats at 17 significant digits and non-finite floats as ``null``."""
    return _emit(_plain(obj), indent, 0) + "\n"


def write_json(path, obj):
    Path(path).write_text(to_json(obj), encoding="utf-8")


def write_csv(path, header, rows):
    """Write rows with a one-line header; floats in 17-digit scientific notation."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([format_float(v) if isinstance(v, (float, np.floating)) else v for v in row])


def read_csv_columns(path, expected):
    """Read a headed CSV and return the named columns as float arrays."""
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = [h.strip() for h in next(reader)]
        except StopIteration:
            raise InvalidParameterError(f"{path}: empty CSV file") from None
        if header != list(expected):
            raise InvalidParameterError(f"{path}: expected header {','.join(expected)}, found {','.join(header)}")
        rows = [r for r in reader if r and any(c.strip() for c in r)]
    try:
        data = np.array([[float(c) for c in r] for r in rows], dtype=float)
    except ValueError as exc:
        raise InvalidParameterError(f"{path}: non-numeric entry ({exc})") from None
    if data.ndim != 2 or data.shape[1] != len(expected):
        raise InvalidParameterError(f"{path}: every row needs {len(expected)} values")
    return [data[:, i] for i in range(len(expected))]


def read_radial_csv(path, support_radius=None) -> RadialProfile:
    t, v = read_csv_columns(path, ["t", "value"])
    return RadialProfile(t, v, support_radius=support_radius)


def write_radial_csv(path, t, values, name: str = "t"):
    write_csv(path, [name, "value"], zip(np.asarray(t, float), np.asarray(values, float)))


def read_spectral_csv(path, params: JacobiParams) -> SpectralProfile:
    lam, re, im = read_csv_columns(path, ["lambda", "re", "im"])
    return SpectralProfile(lam, re + 1j * im, np.exp(log_plancherel_density(params, lam)))


def write_spectral_csv(path, lambdas, values):
    vals = np.asarray(values, dtype=complex)
    write_csv(path, ["lambda", "re", "im"], zip(np.asarray(lambdas, float), vals.real, vals.imag))


def read_theta(path, sidecar=None) -> ThetaProfile:
    """Theta table from ``r,theta`` CSV plus a JSON sidecar declaring the tail law.

    The sidecar defaults to the CSV path with suffix ``.json`` and holds
    ``{"tail": [{"kind": ..., "coef": ..., "exponent": ..., "shift": ...}], "name": ...}``.
    """
    path = Path(path)
    side = Path(sidecar) if sidecar else path.with_suffix(".json")
    if not side.exists():
        raise InvalidParameterError(f"tail-law sidecar {side} not found")
    meta = json.loads(side.read_text(encoding="utf-8"))
    if "tail" not in meta:
        raise InvalidParameterError(f"{side}: missing 'tail' entry")
    r, th = read_csv_columns(path, ["r", "theta"])
    tail = [TailTerm(**t) for t in meta["tail"]]
    return ThetaProfile(r, th, tail, name=meta.get("name", path.stem))


def write_theta(path, theta: ThetaProfile):
    """Write ``r,theta`` CSV and its JSON sidecar."""
    path = Path(path)
    write_csv(path, ["r", "theta"], zip(theta.r, theta.theta))
    write_json(path.with_suffix(".json"), {"name": theta.name, "tail": [t.to_dict() for t in theta.tail]})
