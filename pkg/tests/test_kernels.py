import json
import os
import subprocess
import sys

import numpy as np
import pytest

from jacobiharm import _kernels, backend_name
from jacobiharm.specfun import JacobiParams
from oracles import h3_phi


def _table(backend):
    p = JacobiParams(1.5, 0.0)
    mus = np.linspace(0.0, 20.0, 15) ** 2 + p.rho ** 2
    t = np.linspace(0.0, 8.0, 97)
    v, d, status = _kernels.phi_table(p.alpha, p.beta, mus, t, backend=backend)
    assert status == _kernels.OK
    return v, d


@pytest.mark.skipif(not _kernels.HAS_NUMBA, reason="numba not importable")
def test_numba_and_numpy_tables_agree():
    v1, d1 = _table("numba")
    v2, d2 = _table("numpy")
    assert np.max(np.abs(v1 - v2)) < 1e-11
    assert np.max(np.abs(d1 - d2) / np.maximum(1.0, np.abs(d1))) < 1e-10


def test_numpy_backend_matches_closed_form():
    lam = np.array([0.5, 2.0, 10.0])
    t = np.linspace(0.0, 6.0, 61)
    v, _, status = _kernels.phi_table(0.5, -0.5, lam ** 2 + 1.0, t, backend="numpy")
    assert status == _kernels.OK
    ref = np.ones_like(v)
    ref[:, 1:] = h3_phi(lam[:, None], t[None, 1:])
    assert np.max(np.abs(v - ref)) < 1e-11


def test_logsumexp_rows_handles_minus_infinity():
    mat = np.array([[0.0, np.log(3.0), -np.inf], [-np.inf, -np.inf, -np.inf]])
    out = _kernels.lse_rows(mat)
    assert out[0] == pytest.approx(np.log(4.0), rel=1e-15)
    assert out[1] == -np.inf


def test_row_sums_match_matmul(rng):
    mat = rng.standard_normal((7, 300))
    w = rng.standard_normal(300)
    assert np.allclose(_kernels.row_sums(mat, w), mat @ w, rtol=1e-12, atol=1e-12)


def test_pairwise_sum_accuracy():
    x = np.full(10 ** 6, 0.1)
    assert abs(_kernels.pairwise_sum(x) - 1e5) < 1e-8


def test_environment_flag_selects_numpy_fallback():
    code = (
        "import json, numpy as np\n"
        "from jacobiharm import backend_name\n"
        "from jacobiharm.jacobi import phi\n"
        "print(json.dumps({'backend': backend_name(), 'value': float(phi(__import__('jacobiharm').JacobiParams(0.5, -0.5), 2.0, 1.0))}))\n"
    )
    env = dict(os.environ, JACOBIHARM_DISABLE_NUMBA="1")
    res = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    data = json.loads(res.stdout)
    assert data["backend"] == "numpy"
    assert data["value"] == pytest.approx(float(h3_phi(2.0, 1.0)), abs=1e-12)


def test_backend_name_reports_numba_when_available():
    assert backend_name() == ("numba" if _kernels.HAS_NUMBA else "numpy")
