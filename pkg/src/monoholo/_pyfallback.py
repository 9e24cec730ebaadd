"""Pure numpy/scipy twin of the compiled scattering integrator.

Handles every descriptor the kernel handles, plus ("callable", f) where f
maps the geodesic parameter t to the 2x2 coefficient matrix of y' = M t y.
Used when the extension is absent, when MONO_BACKEND=python, or whenever a
field has no compiled descriptor (gauge-transformed and custom fields).
"""

from __future__ import annotations

import math

import numpy as np
from scipy.integrate import solve_ivp

_SIGMA = (
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, -1j], [1j, 0]], dtype=complex),
    np.array([[1, 0], [0, -1]], dtype=complex),
)


def _spline_eval(cflat: np.ndarray, drho: float, n: int, tail: float, rho: float) -> float:
    m = n - 1
    if rho >= m * drho:
        return tail
    if rho < 0.0:
        rho = 0.0
    idx = min(int(rho / drho), m - 1)
    u = rho - idx * drho
    return ((cflat[idx] * u + cflat[m + idx]) * u + cflat[2 * m + idx]) * u + cflat[3 * m + idx]


def matrix_of_t(desc, u4: np.ndarray, v4: np.ndarray, sign: int):
    """Return the map t -> M(t) for a kernel-style descriptor."""
    kind = desc[0]
    if kind == "callable":
        return desc[1]
    if kind == "abelian":
        mass = desc[1]
        mat = -sign * mass * _SIGMA[2]

        def m_abelian(t):
            return mat

        return m_abelian
    if kind == "hedgehog":
        _, mass, drho, n, c1, c2, h1_tail, h2_tail = desc

        def m_hedgehog(t):
            ch, sh = math.cosh(t), math.sinh(t)
            X = ch * u4 + sh * v4
            dX = sh * u4 + ch * v4
            den = 1.0 + X[0]
            x = X[1:] / den
            w = (dX[1:] * den - X[1:] * dX[0]) / den**2
            rho = math.acosh(max(X[0], 1.0))
            h1 = _spline_eval(c1, drho, n, h1_tail, rho)
            h2 = _spline_eval(c2, drho, n, h2_tail, rho)
            c = np.cross(w, x)
            m00 = 0.5j * h1 * c[2] + 0.5 * sign * h2 * x[2]
            m01 = 0.5j * h1 * (c[0] - 1j * c[1]) + 0.5 * sign * h2 * (x[0] - 1j * x[1])
            m10 = 0.5j * h1 * (c[0] + 1j * c[1]) + 0.5 * sign * h2 * (x[0] + 1j * x[1])
            return np.array([[m00, m01], [m10, -m00]], dtype=complex)

        return m_hedgehog
    raise ValueError(f"unknown descriptor kind {kind!r}")


def integrate_scattering(desc, u4, v4, y0, sign, t0, t1, sample_ts, rtol, atol):
    """Same contract as the compiled kernel, via scipy DOP853."""
    m_of_t = matrix_of_t(desc, np.asarray(u4, float), np.asarray(v4, float), sign)

    def rhs(t, y):
        return m_of_t(t) @ y

    sol = solve_ivp(
        rhs,
        (t0, t1),
        np.asarray(y0, dtype=complex),
        method="DOP853",
        t_eval=np.asarray(sample_ts, dtype=float),
        rtol=rtol,
        atol=atol,
    )
    if not sol.success:
        raise RuntimeError(f"scattering integration failed: {sol.message}")
    return np.ascontiguousarray(sol.y.T), int(sol.nfev // 12), 0
