"""The boundary n-point function: pairings chained around a geodesic cycle.

Each ordered tuple (z1, ..., zn) determines the cycle of geodesics
z1 -> z2 -> ... -> zn -> z1.  The value is the product of the pairings
along the cycle after the phase of each r-solution is aligned with the
boundary limit of the previous s-solution; the alignment realizes the
common-subspace condition at each shared endpoint, and all initialization
phases cancel around the closed cycle.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateProbe, PhaseChainError
from .geom import BoundaryPoint, chordal_distance, random_boundary_points
from .scatter import SolverConfig, boundary_limit, solve_pairing

MAX_CHAIN_ANGLE = 1e-2  # radians; larger misalignment signals integration error


@dataclass(frozen=True)
class PointTuple:
    """Ordered tuple of boundary points, n >= 2 before reduction."""

    points: tuple

    def __init__(self, points):
        pts = tuple(BoundaryPoint.of(p) for p in points)
        if len(pts) < 2:
            raise ValueError("a point tuple needs at least two points")
        object.__setattr__(self, "points", pts)

    def __len__(self):
        return len(self.points)

    def rotated(self, k: int = 1) -> "PointTuple":
        n = len(self.points)
        k %= n
        return PointTuple(self.points[k:] + self.points[:k])

    def reversed(self) -> "PointTuple":
        return PointTuple(tuple(reversed(self.points)))


@dataclass
class NPointValue:
    """Complex value with a conservative error estimate."""

    value: complex
    err: float
    reduced: bool = False
    n_geodesics: int = 0

    @property
    def real(self) -> float:
        return self.value.real


def _reduce_cyclic(points, tol: float):
    """Drop cyclically-consecutive coalescent points (idempotent rule)."""
    pts = list(points)
    reduced = False
    changed = True
    while changed and len(pts) > 1:
        changed = False
        out = [pts[0]]
        for p in pts[1:]:
            if chordal_distance(out[-1], p) < tol:
                reduced = True
                changed = True
            else:
                out.append(p)
        if len(out) > 1 and chordal_distance(out[-1], out[0]) < tol:
            out.pop()
            reduced = True
            changed = True
        pts = out
    return pts, reduced


def _parallel_map(fn, items, workers: int):
    if workers <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as ex:
        return list(ex.map(fn, items))


def n_point(f, tup: PointTuple, cfg: SolverConfig | None = None) -> NPointValue:
    """Cyclic n-point value for the ordered tuple.

    Coalescent consecutive points are reduced algebraically before any
    integration; a tuple that collapses to a single point has value 1.
    ``f`` is a monopole field (scattering route) or a holomorphic sphere
    model exposing eval_unit (trace route).
    """
    cfg = cfg or SolverConfig()
    pts, reduced = _reduce_cyclic(tup.points, cfg.coalesce_tol)
    if len(pts) == 1:
        return NPointValue(value=1.0 + 0j, err=0.0, reduced=True, n_geodesics=0)
    n = len(pts)

    if hasattr(f, "eval_unit"):
        vecs = [f.eval_unit(p) for p in pts]
        value = 1.0 + 0j
        for i in range(n):
            value *= complex(np.vdot(vecs[i], vecs[(i + 1) % n]))
        if n == 2:
            value = complex(value.real)
        return NPointValue(value=value, err=1e-13 * n, reduced=reduced, n_geodesics=n)

    if n == 2:
        pd = solve_pairing(f, pts[0], pts[1], cfg)
        # reversal gives the second pairing without another solve; the
        # chained phases collapse to the squared modulus
        val = complex(abs(pd.value) ** 2)
        return NPointValue(
            value=val, err=2.0 * (pd.constancy_dev + pd.drift),
            reduced=reduced, n_geodesics=2,
        )

    pairs = [(pts[i], pts[(i + 1) % n]) for i in range(n)]
    datas = _parallel_map(lambda ab: solve_pairing(f, ab[0], ab[1], cfg), pairs, cfg.workers)

    value = 1.0 + 0j
    err = 0.0
    for i in range(n):
        # phase of r on geodesic i is set by s on geodesic i-1 at the
        # shared point pts[i]
        s_prev = datas[(i - 1) % n].s
        r_here = datas[i].r
        lim_s = boundary_limit(s_prev, "end")
        lim_r = boundary_limit(r_here, "start")
        overlap = complex(np.vdot(lim_r, lim_s))
        angle = math.acos(min(1.0, abs(overlap)))
        if angle > MAX_CHAIN_ANGLE:
            raise PhaseChainError(
                f"limit vectors misaligned by {angle:.3e} rad at point {pts[i]!r}"
            )
        theta = math.atan2(overlap.imag, overlap.real)
        value *= complex(math.cos(theta), -math.sin(theta)) * datas[i].value
        err += datas[i].constancy_dev + datas[i].drift
    return NPointValue(value=value, err=err, reduced=reduced, n_geodesics=n)


def two_point(f, z1, z2, cfg: SolverConfig | None = None) -> NPointValue:
    """Real 2-point value in [0, 1]; symmetric in its arguments.

    Coalescent arguments return the limit value 1 with the reduced flag.
    """
    cfg = cfg or SolverConfig()
    z1 = BoundaryPoint.of(z1)
    z2 = BoundaryPoint.of(z2)
    if chordal_distance(z1, z2) < cfg.coalesce_tol:
        return NPointValue(value=1.0 + 0j, err=0.0, reduced=True, n_geodesics=0)
    return n_point(f, PointTuple((z1, z2)), cfg)


def gram_matrix(f, points, cfg: SolverConfig | None = None) -> np.ndarray:
    """Real symmetric matrix of pairwise 2-point values, unit diagonal."""
    pts = [BoundaryPoint.of(p) for p in points]
    npts = len(pts)
    if npts < 2:
        raise ValueError("gram matrix needs at least two points")
    cfg = cfg or SolverConfig()
    mat = np.eye(npts)
    tasks = [(i, j) for i in range(npts) for j in range(i + 1, npts)]

    def entry(ij):
        i, j = ij
        return two_point(f, pts[i], pts[j], cfg).value.real

    vals = _parallel_map(entry, tasks, cfg.workers)
    for (i, j), v in zip(tasks, vals):
        mat[i, j] = mat[j, i] = v
    return mat


def relation_constant(
    f,
    z0,
    z1,
    z2,
    a: PointTuple | tuple,
    b: PointTuple | tuple,
    cfg: SolverConfig | None = None,
    candidates=None,
    seed: int = 7,
):
    """Ratio c with num = <z0, z1, a..., z2> and den = <z0, z1, b..., z2>.

    ``z0`` may be None, in which case probe points are sampled until the
    denominator is usable; DegenerateProbe if none of them works.
    """
    cfg = cfg or SolverConfig()
    a_pts = a.points if isinstance(a, PointTuple) else tuple(BoundaryPoint.of(p) for p in a)
    b_pts = b.points if isinstance(b, PointTuple) else tuple(BoundaryPoint.of(p) for p in b)
    z1 = BoundaryPoint.of(z1)
    z2 = BoundaryPoint.of(z2)
    if a_pts == b_pts:
        return 1.0 + 0j, 0.0

    if z0 is not None:
        probes = [BoundaryPoint.of(z0)]
    elif candidates is not None:
        probes = [BoundaryPoint.of(p) for p in candidates]
    else:
        probes = random_boundary_points(np.random.default_rng(seed), 8)

    for probe in probes:
        den = n_point(f, PointTuple((probe, z1) + b_pts + (z2,)), cfg)
        if abs(den.value) > 10.0 * max(den.err, 1e-12):
            num = n_point(f, PointTuple((probe, z1) + a_pts + (z2,)), cfg)
            c = num.value / den.value
            c_err = (num.err + abs(c) * den.err) / abs(den.value)
            return c, c_err
    raise DegenerateProbe("no probe point gives a usable denominator")


def random_tuple(
    rng: np.random.Generator, n: int, min_sep: float = 0.15
) -> PointTuple:
    """Random tuple with consecutive (cyclic) separation at least min_sep."""
    while True:
        pts = random_boundary_points(rng, n)
        ok = all(
            chordal_distance(pts[i], pts[(i + 1) % n]) >= min_sep for i in range(n)
        )
        if ok:
            return PointTuple(tuple(pts))
