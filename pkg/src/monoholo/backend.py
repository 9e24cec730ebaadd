"""Integration backend selection: compiled kernel with pure-python fallback.

The compiled extension handles the built-in field descriptors; anything
else (gauge-transformed fields, user fields) goes through the numpy
fallback.  Set MONO_BACKEND=python to force the fallback everywhere.
"""

from __future__ import annotations

import os
import time

import numpy as np

from . import _pyfallback

try:
    from . import _kernels

    HAVE_COMPILED = True
except ImportError:  # extension not built
    _kernels = None
    HAVE_COMPILED = False

_FORCED = os.environ.get("MONO_BACKEND", "").strip().lower()
ACTIVE = "compiled" if HAVE_COMPILED and _FORCED != "python" else "python"

_KERNEL_KINDS = ("abelian", "hedgehog")


def integrate_scattering(desc, u4, v4, y0, sign, t0, t1, sample_ts, rtol, atol):
    u4 = np.ascontiguousarray(u4, dtype=float)
    v4 = np.ascontiguousarray(v4, dtype=float)
    sample_ts = np.ascontiguousarray(sample_ts, dtype=float)
    if ACTIVE == "compiled" and desc[0] in _KERNEL_KINDS:
        return _kernels.integrate_scattering(
            desc, u4, v4, np.asarray(y0, complex), sign, t0, t1, sample_ts, rtol, atol
        )
    return _pyfallback.integrate_scattering(
        desc, u4, v4, y0, sign, t0, t1, sample_ts, rtol, atol
    )


def benchmark(field, n_geodesics: int = 10, T: float = 15.0, seed: int = 0):
    """Time both backends on the same batch of scattering solves.

    Returns a dict with per-solve times and the max pairing discrepancy;
    used by benchmarks/compare_backends.py and the backend tests.
    """
    from .geom import make_geodesic, random_boundary_points
    from .scatter import decaying_solution, pairing
    from .npoint import SolverConfig

    rng = np.random.default_rng(seed)
    pts = random_boundary_points(rng, 2 * n_geodesics)
    geos = [
        make_geodesic(pts[2 * i], pts[2 * i + 1], T) for i in range(n_geodesics)
    ]
    cfg = SolverConfig()

    global ACTIVE
    results = {}
    values = {}
    for mode in ("compiled", "python"):
        if mode == "compiled" and not HAVE_COMPILED:
            continue
        old = ACTIVE
        ACTIVE = mode
        try:
            t0 = time.perf_counter()
            vals = []
            for g in geos:
                s = decaying_solution(field, g, +1, cfg)
                r = decaying_solution(field, g, -1, cfg)
                vals.append(pairing(r, s)[0])
            dt = time.perf_counter() - t0
        finally:
            ACTIVE = old
        results[mode] = dt / (2 * n_geodesics)
        values[mode] = np.asarray(vals)

    out = {"per_solve_seconds": results}
    if len(values) == 2:
        out["max_pairing_diff"] = float(
            np.max(np.abs(values["compiled"] - values["python"]))
        )
    return out
