"""Boundary connection, curvature, and spectral-curve extraction.

Everything here is driven by log-derivatives of the 2-point function.
The connection coefficient is lambda(w, z) = (1/2) d/dzbar ln<P_w P_z>
(standard Wirtinger convention), its z-derivative is the curvature
coefficient, and the zero locus of z -> <P_{antipode(w)} P_z> traced over
a grid of w gives the spectral curve, fit as a bidegree-(k, k) polynomial.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize

from .errors import NearSingular, RankDeficient
from .field import MonopoleField
from .geom import BoundaryPoint, antipode
from .npoint import SolverConfig, two_point, _parallel_map


def _tp(f, w, z, cfg) -> tuple[float, float]:
    r = two_point(f, w, z, cfg)
    return max(r.value.real, 0.0), r.err


def _log_tp(f, w, z, cfg) -> float:
    v, _ = _tp(f, w, z, cfg)
    return math.log(max(v, 1e-300))


def lambda_fd(
    f: MonopoleField, w, z, h: float = 1e-3, cfg: SolverConfig | None = None,
    with_diag: bool = False,
):
    """Connection coefficient (1/2) d/dzbar ln<P_w P_z> by central differences.

    Richardson halving is applied; with_diag also returns the step-halving
    deviation.  Raises NearSingular when the 2-point value is within 10x
    of its error estimate.
    """
    cfg = cfg or SolverConfig()
    w = BoundaryPoint.of(w)
    z = BoundaryPoint.of(z)
    if z.is_infinity:
        raise NearSingular("derivative chart requires finite z")
    v0, err0 = _tp(f, w, z, cfg)
    if v0 <= 10.0 * max(err0, 1e-12):
        raise NearSingular(f"2-point value {v0:.3e} too close to zero")

    def lam_at(step):
        z0 = z.value
        lu = (_log_tp(f, w, BoundaryPoint(z0 + step), cfg)
              - _log_tp(f, w, BoundaryPoint(z0 - step), cfg)) / (2 * step)
        lv = (_log_tp(f, w, BoundaryPoint(z0 + 1j * step), cfg)
              - _log_tp(f, w, BoundaryPoint(z0 - 1j * step), cfg)) / (2 * step)
        return 0.25 * (lu + 1j * lv)

    coarse = lam_at(h)
    fine = lam_at(h / 2)
    dev = abs(fine - coarse)
    if with_diag:
        return fine, dev
    return fine


def curvature_fd(
    f: MonopoleField, z, w, h: float = 5e-3, cfg: SolverConfig | None = None,
    with_diag: bool = False,
):
    """Curvature coefficient d/dz d/dzbar ln<P_w P_z>; real, w-independent."""
    cfg = cfg or SolverConfig()
    w = BoundaryPoint.of(w)
    z = BoundaryPoint.of(z)
    if z.is_infinity:
        raise NearSingular("derivative chart requires finite z")
    v0, err0 = _tp(f, w, z, cfg)
    if v0 <= 10.0 * max(err0, 1e-12):
        raise NearSingular(f"2-point value {v0:.3e} too close to zero")

    def lap_at(step):
        z0 = z.value
        c = _log_tp(f, w, z, cfg)
        tot = (
            _log_tp(f, w, BoundaryPoint(z0 + step), cfg)
            + _log_tp(f, w, BoundaryPoint(z0 - step), cfg)
            + _log_tp(f, w, BoundaryPoint(z0 + 1j * step), cfg)
            + _log_tp(f, w, BoundaryPoint(z0 - 1j * step), cfg)
            - 4.0 * c
        )
        return 0.25 * tot / step**2

    coarse = lap_at(h)
    fine = lap_at(h / 2)
    dev = abs(fine - coarse)
    if with_diag:
        return float(fine), dev
    return float(fine)


@dataclass
class ScanHit:
    w: complex
    z: complex
    value: float


@dataclass
class ScanResult:
    """Refined locus points plus the raw grid evaluations."""

    locus: list
    grid: list  # rows (w, z, value)
    threshold: float

    def locus_rows(self):
        return [(h.w, h.z, h.value) for h in self.locus]


def spectral_scan(
    f: MonopoleField,
    w_grid,
    z_grid,
    threshold: float = 1e-3,
    cfg: SolverConfig | None = None,
) -> ScanResult:
    """Zero locus of <P_{antipode(w)} P_z> over the grid, with refinement.

    For each w the grid minima (all z within 1.5x of the per-w minimum,
    plus anything below 10x threshold) are polished by derivative-free
    minimization; refined points below the threshold enter the locus.
    The literal 10x-threshold gate alone would return an empty locus at
    practical grid densities, since grid values scale with the squared
    distance to the locus.
    """
    cfg = cfg or SolverConfig()
    ws = [BoundaryPoint.of(w) for w in w_grid]
    zs = [BoundaryPoint.of(z) for z in z_grid]

    def column(w):
        wa = antipode(w)
        vals = [(z, _tp(f, wa, z, cfg)[0]) for z in zs]
        return wa, vals

    columns = _parallel_map(column, ws, cfg.workers)

    grid_rows = []
    tasks = []
    for w, (wa, vals) in zip(ws, columns):
        wv = _chart_value(w)
        for z, v in vals:
            grid_rows.append((wv, _chart_value(z), v))
        vmin = min(v for _, v in vals)
        seeds = [
            z for z, v in vals
            if v <= max(10.0 * threshold, 1.5 * vmin)
        ]
        for z0 in _cluster_minima(seeds, vals):
            tasks.append((wv, wa, z0))

    def refine(task):
        wv, wa, z0 = task
        zr, vr = _polish(f, wa, z0, cfg)
        return ScanHit(w=wv, z=zr, value=vr)

    refined = _parallel_map(refine, tasks, cfg.workers)
    hits = [h for h in refined if h.value < threshold]
    hits = _dedupe_hits(hits)
    hits.sort(key=lambda h: (h.w.real, h.w.imag, h.z.real, h.z.imag))
    return ScanResult(locus=hits, grid=grid_rows, threshold=threshold)


def _chart_value(b: BoundaryPoint) -> complex:
    if b.is_infinity:
        raise ValueError("scan grids must avoid chart infinity")
    return b.value


def _cluster_minima(seeds, vals, radius: float = 0.3):
    """Keep the best seed of each spatial cluster, at most three."""
    lookup = {id(z): v for z, v in vals}
    seeds = sorted(seeds, key=lambda z: lookup[id(z)])
    kept = []
    for z in seeds:
        if all(abs(z.value - k.value) > radius for k in kept):
            kept.append(z)
        if len(kept) >= 3:
            break
    return kept


def _polish(f, wa, z0, cfg):
    def cost(xy):
        return _tp(f, wa, BoundaryPoint(complex(xy[0], xy[1])), cfg)[0]

    res = minimize(
        cost,
        [z0.value.real, z0.value.imag],
        method="Nelder-Mead",
        options={"xatol": 1e-5, "fatol": 1e-12, "maxiter": 120},
    )
    return complex(res.x[0], res.x[1]), float(res.fun)


def _dedupe_hits(hits, radius: float = 1e-3):
    out = []
    for h in hits:
        dup = False
        for k in out:
            if abs(h.w - k.w) < radius and abs(h.z - k.z) < radius:
                dup = True
                if h.value < k.value:
                    k.z, k.value = h.z, h.value
                break
        if not dup:
            out.append(h)
    return out


@dataclass
class SpectralCurveFit:
    """Bidegree-(k, k) polynomial psi(w, z) = sum c[a, b] w^a z^b."""

    k: int
    coeffs: np.ndarray
    fit_residual: float

    def psi(self, w: complex, z: complex) -> complex:
        wp = np.array([w**a for a in range(self.k + 1)])
        zp = np.array([z**b for b in range(self.k + 1)])
        return complex(wp @ self.coeffs @ zp)

    def gram_candidate(self) -> np.ndarray:
        """Matrix G with G[a, b] = (-1)^a c[k - a, b]; Hermitian for curves
        respecting the antipodal real structure."""
        k = self.k
        g = np.empty_like(self.coeffs)
        for a in range(k + 1):
            g[a, :] = (-1) ** a * self.coeffs[k - a, :]
        return g


def _gram_of(c: np.ndarray) -> np.ndarray:
    k = c.shape[0] - 1
    g = np.empty_like(c)
    for a in range(k + 1):
        g[a, :] = (-1) ** a * c[k - a, :]
    return g


def _canonical_phase(c: np.ndarray) -> np.ndarray:
    """Phase-normalize coefficients.

    Prefer the phase making the derived G matrix Hermitian with positive
    trace (the reality structure of genuine spectral curves); when no such
    phase exists, make the first nonzero coefficient real positive.
    Hermitianity of e^{i a} G requires G^dagger = e^{2 i a} G, solved in
    the least-squares sense by e^{2 i a} = conj(tr G^2)/|tr G^2|.
    """
    g = _gram_of(c)
    tr2 = complex(np.trace(g @ g))
    if abs(tr2) > 1e-8 * float(np.sum(np.abs(g) ** 2)):
        alpha = 0.5 * math.atan2(-tr2.imag, tr2.real)
        cand = c * complex(math.cos(alpha), math.sin(alpha))
        gc = _gram_of(cand)
        if np.trace(gc).real < 0:
            cand = -cand
        return cand
    flat = c.reshape(-1)
    idx = int(np.argmax(np.abs(flat)))
    if abs(flat[idx]) > 1e-12:
        return c * (flat[idx].conjugate() / abs(flat[idx]))
    return c


def fit_spectral_poly(locus, k: int) -> SpectralCurveFit:
    """Unit-norm bidegree-(k, k) coefficients minimizing sum |psi(w_i, z_i)|^2.

    ``locus`` holds (w, z) pairs (ScanHit or complex tuples).  Raises
    RankDeficient when there are fewer than 2 (k+1)^2 points or the design
    matrix cannot isolate a one-dimensional null direction.
    """
    pts = []
    for item in locus:
        if isinstance(item, ScanHit):
            pts.append((item.w, item.z))
        else:
            pts.append((complex(item[0]), complex(item[1])))
    dim = (k + 1) ** 2
    if len(pts) < 2 * dim:
        raise RankDeficient(
            f"need at least {2 * dim} locus points for k={k}, got {len(pts)}"
        )
    rows = []
    for w, z in pts:
        wp = np.array([w**a for a in range(k + 1)])
        zp = np.array([z**b for b in range(k + 1)])
        rows.append(np.outer(wp, zp).reshape(-1))
    design = np.array(rows)
    _, svals, vh = np.linalg.svd(design, full_matrices=True)
    if not np.isfinite(svals).all() or svals[0] == 0.0:
        raise RankDeficient("degenerate design matrix")
    c = vh[-1].conj().reshape(k + 1, k + 1)
    c = _canonical_phase(c / np.linalg.norm(c))
    residual = float(svals[-1]) / math.sqrt(len(pts))
    return SpectralCurveFit(k=k, coeffs=c, fit_residual=residual)


def estimate_charge(scan: ScanResult) -> int:
    """Locus intersections with a generic line w = w0 (mode over columns)."""
    counts = {}
    for h in scan.locus:
        key = (round(h.w.real, 9), round(h.w.imag, 9))
        counts[key] = counts.get(key, 0) + 1
    if not counts:
        return 0
    vals = sorted(counts.values())
    return vals[len(vals) // 2]
