"""Compare the numba kernels with the pure-numpy fallback.

Runs each workload in this process (numba, if importable) and again in a
child process with ``JACOBIHARM_DISABLE_NUMBA=1``; prints timings, speed-ups
and the largest difference between the two outputs.

Usage::

    python3 benchmarks/bench_kernels.py [--repeat 3] [--quick]
"""

from __future__ import annotations

import argparse
import json
import os
import subprocess
import sys
import time

import numpy as np


def _workloads(quick):
    from jacobiharm import _kernels
    from jacobiharm.chernoff import gaussian_spectrum, laplacian_power_norms
    from jacobiharm.specfun import JacobiParams
    from jacobiharm.transforms import QuadratureSpec, RadialProfile, clear_cache, jacobi_forward

    scale = 4 if quick else 1
    n_lam, n_t = 200 // scale, 1000 // scale
    params = JacobiParams(0.5, -0.5)
    mus = np.linspace(0.0, 32.0, n_lam) ** 2 + params.rho ** 2
    t = np.linspace(0.0, 10.0, n_t)
    grid = np.linspace(0.0, 10.0, 2001)
    prof = RadialProfile(grid, np.exp(-grid * grid))
    quad = QuadratureSpec(t_max=10.0, lambda_max=16.0 if quick else 32.0)
    spec = gaussian_spectrum(params, quad=QuadratureSpec(lambda_max=64.0))

    def phi():
        v, d, status = _kernels.phi_table(params.alpha, params.beta, mus, t)
        return v[:, -1]

    def forward():
        clear_cache()
        return jacobi_forward(params, prof, quad).values.real

    def norms():
        return laplacian_power_norms(params, spec, 200).log_norms

    return {
        f"phi_table {n_lam}x{n_t}": phi,
        "jacobi_forward gaussian": forward,
        "laplacian_power_norms m<=200": norms,
    }


def run(repeat, quick):
    from jacobiharm import backend_name

    out = {"backend": backend_name(), "results": {}}
    for name, fn in _workloads(quick).items():
        value = fn()  # warm-up and compilation
        best = float("inf")
        for _ in range(repeat):
            t0 = time.perf_counter()
            value = fn()
            best = min(best, time.perf_counter() - t0)
        out["results"][name] = {"seconds": best, "output": np.asarray(value, dtype=float).tolist()}
    return out


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--quick", action="store_true", help="smaller workloads")
    ap.add_argument("--child", action="store_true", help=argparse.SUPPRESS)
    args = ap.parse_args(argv)
    if args.child:
        json.dump(run(args.repeat, args.quick), sys.stdout)
        return 0
    fast = run(args.repeat, args.quick)
    env = dict(os.environ, JACOBIHARM_DISABLE_NUMBA="1")
    cmd = [sys.executable, __file__, "--child", "--repeat", str(args.repeat)] + (["--quick"] if args.quick else [])
    slow = json.loads(subprocess.run(cmd, env=env, check=True, capture_output=True, text=True).stdout)
    print(f"{'workload':34s} {fast['backend']:>10s} {slow['backend']:>10s} {'speed-up':>9s} {'max |diff|':>11s}")
    for name, res in fast["results"].items():
        other = slow["results"][name]
        a = np.asarray(res["output"])
        b = np.asarray(other["output"])
        diff = float(np.max(np.abs(a - b) / np.maximum(1.0, np.abs(a))))
        print(f"{name:34s} {res['seconds']:10.4f} {other['seconds']:10.4f} {other['seconds'] / res['seconds']:9.2f} {diff:11.2e}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
