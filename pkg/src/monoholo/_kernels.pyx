# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled Dormand-Prince(5,4) integrator for the geodesic scattering system.

State is a complex 2-vector y with y' = M(t) y, where M is assembled from
the geodesic (hyperboloid data u, v) and a field descriptor.  Supported
descriptors: the constant-Higgs field and the radial charge-1 profiles.
The numpy twin in _pyfallback.py must stay interchangeable.
"""

from libc.math cimport cosh, sinh, acosh, fabs, pow

ctypedef double complex cplx

import numpy as np

DEF SAFETY = 0.9
DEF MIN_FACTOR = 0.2
DEF MAX_FACTOR = 5.0

# Dormand-Prince tableau.
DEF C2 = 0.2
DEF C3 = 0.3
DEF C4 = 0.8
DEF C5 = 8.0 / 9.0

DEF A21 = 0.2
DEF A31 = 3.0 / 40.0
DEF A32 = 9.0 / 40.0
DEF A41 = 44.0 / 45.0
DEF A42 = -56.0 / 15.0
DEF A43 = 32.0 / 9.0
DEF A51 = 19372.0 / 6561.0
DEF A52 = -25360.0 / 2187.0
DEF A53 = 64448.0 / 6561.0
DEF A54 = -212.0 / 729.0
DEF A61 = 9017.0 / 3168.0
DEF A62 = -355.0 / 33.0
DEF A63 = 46732.0 / 5247.0
DEF A64 = 49.0 / 176.0
DEF A65 = -5103.0 / 18656.0

DEF B1 = 35.0 / 384.0
DEF B3 = 500.0 / 1113.0
DEF B4 = 125.0 / 192.0
DEF B5 = -2187.0 / 6784.0
DEF B6 = 11.0 / 84.0

DEF E1 = 71.0 / 57600.0
DEF E3 = -71.0 / 16695.0
DEF E4 = 71.0 / 1920.0
DEF E5 = -17253.0 / 339200.0
DEF E6 = 22.0 / 525.0
DEF E7 = -1.0 / 40.0


cdef struct FieldPars:
    int kind            # 0 abelian, 1 hedgehog
    double mass
    double drho
    int n
    const double* c1    # flattened (4, n-1) spline coefficients of H1
    const double* c2    # same for H2
    double h1_tail
    double h2_tail


cdef inline double spline_eval(const double* c, double drho, int n,
                               double tail, double rho) noexcept nogil:
    cdef int idx, m
    cdef double u
    m = n - 1
    if rho >= m * drho:
        return tail
    if rho < 0.0:
        rho = 0.0
    idx = <int>(rho / drho)
    if idx > m - 1:
        idx = m - 1
    u = rho - idx * drho
    return ((c[idx] * u + c[m + idx]) * u + c[2 * m + idx]) * u + c[3 * m + idx]


cdef inline void rhs(FieldPars* fp, const double* u4, const double* v4,
                     double t, double sgn, const cplx* y, cplx* dy) noexcept nogil:
    cdef double ch = cosh(t)
    cdef double sh = sinh(t)
    cdef double X0 = ch * u4[0] + sh * v4[0]
    cdef double X1 = ch * u4[1] + sh * v4[1]
    cdef double X2 = ch * u4[2] + sh * v4[2]
    cdef double X3 = ch * u4[3] + sh * v4[3]
    cdef double d0 = sh * u4[0] + ch * v4[0]
    cdef double d1 = sh * u4[1] + ch * v4[1]
    cdef double d2 = sh * u4[2] + ch * v4[2]
    cdef double d3 = sh * u4[3] + ch * v4[3]
    cdef double den = 1.0 + X0
    cdef double den2 = den * den
    cdef double x1 = X1 / den
    cdef double x2 = X2 / den
    cdef double x3 = X3 / den
    cdef double w1 = (d1 * den - X1 * d0) / den2
    cdef double w2 = (d2 * den - X2 * d0) / den2
    cdef double w3 = (d3 * den - X3 * d0) / den2
    cdef double rho, h1, h2, cx1, cx2, cx3
    cdef cplx m00, m01, m10

    if fp.kind == 0:
        # M = -sgn * mass * sigma_3
        dy[0] = (-sgn * fp.mass) * y[0]
        dy[1] = (sgn * fp.mass) * y[1]
        return

    rho = acosh(X0 if X0 > 1.0 else 1.0)
    h1 = spline_eval(fp.c1, fp.drho, fp.n, fp.h1_tail, rho)
    h2 = spline_eval(fp.c2, fp.drho, fp.n, fp.h2_tail, rho)
    # c = xdot x x pulls the connection back along the geodesic
    cx1 = w2 * x3 - w3 * x2
    cx2 = w3 * x1 - w1 * x3
    cx3 = w1 * x2 - w2 * x1
    # M = (i h1 / 2)(c . sigma) + (sgn h2 / 2)(x . sigma)
    m00 = 0.5j * h1 * cx3 + 0.5 * sgn * h2 * x3
    m01 = 0.5j * h1 * (cx1 - 1j * cx2) + 0.5 * sgn * h2 * (x1 - 1j * x2)
    m10 = 0.5j * h1 * (cx1 + 1j * cx2) + 0.5 * sgn * h2 * (x1 + 1j * x2)
    dy[0] = m00 * y[0] + m01 * y[1]
    dy[1] = m10 * y[0] - m00 * y[1]


cdef inline double cabs2(cplx z) noexcept nogil:
    return z.real * z.real + z.imag * z.imag


def integrate_scattering(desc, double[::1] u4, double[::1] v4,
                         y0, int sign, double t0, double t1,
                         double[::1] sample_ts, double rtol, double atol):
    """Integrate y' = M(t) y from t0 to t1, recording y at sample_ts.

    ``sign`` is +1 for the decaying-forward equation and -1 for its
    partner.  sample_ts must run monotonically from t0 to t1 inclusive.
    Returns (ys, nsteps, nrejected) with ys of shape (len(sample_ts), 2).
    """
    cdef FieldPars fp
    cdef double[::1] c1v, c2v
    kind = desc[0]
    if kind == "abelian":
        fp.kind = 0
        fp.mass = desc[1]
        fp.n = 0
        fp.drho = 1.0
        fp.c1 = NULL
        fp.c2 = NULL
        fp.h1_tail = 0.0
        fp.h2_tail = 0.0
    elif kind == "hedgehog":
        fp.kind = 1
        fp.mass = desc[1]
        fp.drho = desc[2]
        fp.n = desc[3]
        c1v = desc[4]
        c2v = desc[5]
        fp.c1 = &c1v[0]
        fp.c2 = &c2v[0]
        fp.h1_tail = desc[6]
        fp.h2_tail = desc[7]
    else:
        raise ValueError(f"descriptor kind {kind!r} not supported by the kernel")

    cdef int ns = sample_ts.shape[0]
    out = np.empty((ns, 2), dtype=complex)
    cdef cplx[:, ::1] ys = out
    cdef const double* up = &u4[0]
    cdef const double* vp = &v4[0]
    cdef const double* st = &sample_ts[0]

    cdef cplx y[2]
    cdef cplx ynew[2]
    cdef cplx yst[2]
    cdef cplx k1[2]
    cdef cplx k2[2]
    cdef cplx k3[2]
    cdef cplx k4[2]
    cdef cplx k5[2]
    cdef cplx k6[2]
    cdef cplx k7[2]
    cdef cplx e0, e1c
    y[0] = complex(y0[0])
    y[1] = complex(y0[1])

    cdef double sgn = <double>sign
    cdef double direction = 1.0 if t1 >= t0 else -1.0
    cdef double t = t0
    cdef double span = fabs(t1 - t0)
    cdef double h_opt = 1e-3
    cdef double h, hmin = span * 1e-14 + 1e-300
    cdef double target, sc0, sc1, enorm, factor
    cdef long nsteps = 0, nrej = 0
    cdef int isample = 0
    cdef bint fsal = False
    cdef bint clamped
    cdef int status = 0

    if ns > 0 and fabs(st[0] - t0) < 1e-14:
        ys[0, 0] = y[0]
        ys[0, 1] = y[1]
        isample = 1

    with nogil:
        while isample < ns:
            # clamp onto the next sample point
            target = st[isample]
            h = direction * h_opt
            clamped = False
            if direction * (t + h - target) >= 0.0:
                h = target - t
                clamped = True
            if fabs(h) < hmin:
                status = 1
                break

            if not fsal:
                rhs(&fp, up, vp, t, sgn, y, k1)
            yst[0] = y[0] + h * A21 * k1[0]
            yst[1] = y[1] + h * A21 * k1[1]
            rhs(&fp, up, vp, t + C2 * h, sgn, yst, k2)
            yst[0] = y[0] + h * (A31 * k1[0] + A32 * k2[0])
            yst[1] = y[1] + h * (A31 * k1[1] + A32 * k2[1])
            rhs(&fp, up, vp, t + C3 * h, sgn, yst, k3)
            yst[0] = y[0] + h * (A41 * k1[0] + A42 * k2[0] + A43 * k3[0])
            yst[1] = y[1] + h * (A41 * k1[1] + A42 * k2[1] + A43 * k3[1])
            rhs(&fp, up, vp, t + C4 * h, sgn, yst, k4)
            yst[0] = y[0] + h * (A51 * k1[0] + A52 * k2[0] + A53 * k3[0] + A54 * k4[0])
            yst[1] = y[1] + h * (A51 * k1[1] + A52 * k2[1] + A53 * k3[1] + A54 * k4[1])
            rhs(&fp, up, vp, t + C5 * h, sgn, yst, k5)
            yst[0] = y[0] + h * (A61 * k1[0] + A62 * k2[0] + A63 * k3[0] + A64 * k4[0] + A65 * k5[0])
            yst[1] = y[1] + h * (A61 * k1[1] + A62 * k2[1] + A63 * k3[1] + A64 * k4[1] + A65 * k5[1])
            rhs(&fp, up, vp, t + h, sgn, yst, k6)
            ynew[0] = y[0] + h * (B1 * k1[0] + B3 * k3[0] + B4 * k4[0] + B5 * k5[0] + B6 * k6[0])
            ynew[1] = y[1] + h * (B1 * k1[1] + B3 * k3[1] + B4 * k4[1] + B5 * k5[1] + B6 * k6[1])
            rhs(&fp, up, vp, t + h, sgn, ynew, k7)

            e0 = h * (E1 * k1[0] + E3 * k3[0] + E4 * k4[0] + E5 * k5[0] + E6 * k6[0] + E7 * k7[0])
            e1c = h * (E1 * k1[1] + E3 * k3[1] + E4 * k4[1] + E5 * k5[1] + E6 * k6[1] + E7 * k7[1])
            sc0 = atol + rtol * (cabs2(y[0]) if cabs2(y[0]) > cabs2(ynew[0]) else cabs2(ynew[0])) ** 0.5
            sc1 = atol + rtol * (cabs2(y[1]) if cabs2(y[1]) > cabs2(ynew[1]) else cabs2(ynew[1])) ** 0.5
            enorm = (0.5 * (cabs2(e0) / (sc0 * sc0) + cabs2(e1c) / (sc1 * sc1))) ** 0.5

            if enorm <= 1.0:
                if clamped:
                    t = target
                else:
                    t = t + h
                y[0] = ynew[0]
                y[1] = ynew[1]
                k1[0] = k7[0]
                k1[1] = k7[1]
                fsal = True
                nsteps += 1
                if fabs(t - st[isample]) < 1e-12:
                    ys[isample, 0] = y[0]
                    ys[isample, 1] = y[1]
                    isample += 1
                if enorm == 0.0:
                    factor = MAX_FACTOR
                else:
                    factor = SAFETY * pow(enorm, -0.2)
                    if factor > MAX_FACTOR:
                        factor = MAX_FACTOR
                if clamped:
                    # do not let a short landing step shrink the optimum
                    if fabs(h) * factor > h_opt:
                        h_opt = fabs(h) * factor
                else:
                    h_opt = fabs(h) * factor
            else:
                nrej += 1
                fsal = False
                factor = SAFETY * pow(enorm, -0.2)
                if factor < MIN_FACTOR:
                    factor = MIN_FACTOR
                h_opt = fabs(h) * factor

    if status != 0:
        raise RuntimeError("step size underflow in scattering integration")
    if isample != ns:
        raise RuntimeError("failed to hit all sample points")
    return out, int(nsteps), int(nrej)
