"""Holomorphic spheres into projective space and their trace expectations.

A degree-k sphere is stored as a (k+1) x (k+1) coefficient matrix U with
polynomial components q_i(z) = sum_b U[i, b] z^b.  Rank-one projections
onto q(z) represent the boundary idempotents, and cyclic products of the
normalized inner products reproduce the n-point values.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    BasePoint,
    DegenerateBasepoints,
    DegenerateMap,
    DegenerateRoots,
    NotPositive,
)
from .geom import BoundaryPoint
from .nahm import MonadData, beta_map_coefficients

_ROOT_TOL = 1e-7


@dataclass
class HoloSphere:
    k: int
    U: np.ndarray

    def __post_init__(self):
        self.U = np.asarray(self.U, dtype=complex)
        if self.U.shape != (self.k + 1, self.k + 1):
            raise ValueError("coefficient matrix must be (k+1) x (k+1)")

    def eval_raw(self, z) -> np.ndarray:
        z = BoundaryPoint.of(z)
        if z.is_infinity:
            return self.U[:, self.k].copy()
        powers = np.array([z.value**b for b in range(self.k + 1)])
        return self.U @ powers

    def eval_unit(self, z) -> np.ndarray:
        v = self.eval_raw(z)
        n = np.linalg.norm(v)
        if n < 1e-12 * max(1.0, float(np.abs(self.U).max())):
            raise BasePoint(f"sphere vanishes at {z!r}")
        return v / n

    def inner_unit(self, z1, z2) -> complex:
        """<q(z1)|q(z2)> with unit representatives."""
        return complex(np.vdot(self.eval_unit(z1), self.eval_unit(z2)))

    def pairing_poly(self, w0) -> np.ndarray:
        """Coefficients of z -> (q(w0), q(z)), raw representatives."""
        qw = self.eval_raw(w0)
        return np.conj(qw) @ self.U

    def flipped(self) -> "HoloSphere":
        """Chart flip z -> 1/z, components w^k q(1/w): reversed columns."""
        return HoloSphere(k=self.k, U=self.U[:, ::-1].copy())


def identity_sphere() -> HoloSphere:
    """The degree-1 sphere q(z) = (1, z)."""
    return HoloSphere(k=1, U=np.eye(2, dtype=complex))


def veronese_sphere() -> HoloSphere:
    u = np.zeros((3, 3), dtype=complex)
    u[0, 0] = 1.0
    u[1, 1] = math.sqrt(2.0)
    u[2, 2] = 1.0
    return HoloSphere(k=2, U=u)


def random_sphere(k: int, rng: np.random.Generator) -> HoloSphere:
    return HoloSphere(k=k, U=rng.normal(size=(k + 1, k + 1))
                      + 1j * rng.normal(size=(k + 1, k + 1)))


# ---------------------------------------------------------------------------
# Construction from monad data and from spectral fits.
# ---------------------------------------------------------------------------

def _poly_degree(row: np.ndarray, tol: float) -> int:
    nz = np.nonzero(np.abs(row) > tol)[0]
    return int(nz[-1]) if len(nz) else -1


def _common_root_count(U: np.ndarray, tol: float) -> int:
    """Roots shared by all nonzero components (multiplicity-free count)."""
    scale = float(np.abs(U).max())
    rows = [r for r in U if np.abs(r).max() > tol * scale]
    if not rows:
        return 0
    degs = [_poly_degree(r, tol * scale) for r in rows]
    base = rows[int(np.argmin(degs))]
    bd = _poly_degree(base, tol * scale)
    if bd <= 0:
        return 0
    roots = np.roots(base[: bd + 1][::-1])
    count = 0
    for root in roots:
        powers = np.array([root**b for b in range(U.shape[1])])
        vals = [abs(r @ powers) for r in rows]
        norm = max(1.0, abs(root)) ** max(degs)
        if max(vals) < math.sqrt(tol) * scale * norm:
            count += 1
    return count


def degree(q: HoloSphere, tol: float = _ROOT_TOL) -> int:
    """Map degree: max component degree after common factors are removed.

    Cross-checked by callers against the root count of the pairing
    polynomial for a generic reference point (see pairing_root_count).
    """
    scale = float(np.abs(q.U).max())
    maxdeg = max(_poly_degree(r, tol * scale) for r in q.U)
    if maxdeg < 0:
        raise DegenerateMap("zero coefficient matrix")
    # a common factor at infinity shows up as all degrees below k
    return maxdeg - _common_root_count(q.U, tol)


def pairing_root_count(q: HoloSphere, w0=None, tol: float = 1e-8) -> int:
    """Number of finite roots of z -> (q(w0), q(z)), generic w0."""
    if w0 is None:
        w0 = 0.537 + 0.291j
    coeffs = q.pairing_poly(w0)
    scale = float(np.abs(coeffs).max())
    deg = _poly_degree(coeffs, tol * scale)
    if deg <= 0:
        return 0
    return len(np.roots(coeffs[: deg + 1][::-1]))


def q_from_monad(md: MonadData) -> HoloSphere:
    """Coefficient matrix of the monad's rational map.

    Raises DegenerateMap when common factors reduce the degree below k,
    e.g. for v = 0 where only the determinant component survives.
    """
    coeffs = beta_map_coefficients(md)
    q = HoloSphere(k=md.k, U=coeffs)
    d = degree(q)
    if d < md.k:
        raise DegenerateMap(f"map degree {d} < k={md.k}")
    return q


def q_from_spectral(fit) -> HoloSphere:
    """Factor the fit's G matrix as U^dagger U and take q = sqrt-factor.

    G must be Hermitian PSD up to tolerance (the reality structure of a
    valid fit); negative eigenvalues are floored at zero, so noisy fits
    cannot fabricate dimensions.
    """
    g = fit.gram_candidate()
    scale = max(1.0, float(np.abs(g).max()))
    herm_dev = float(np.max(np.abs(g - g.conj().T)))
    if herm_dev > 1e-6 * scale:
        raise NotPositive(f"derived matrix not Hermitian (dev={herm_dev:.2e})")
    g = 0.5 * (g + g.conj().T)
    evals, evecs = np.linalg.eigh(g)
    if evals.min() < -1e-6 * scale:
        raise NotPositive(f"negative eigenvalue {evals.min():.2e}")
    evals = np.clip(evals, 0.0, None)
    u = np.diag(np.sqrt(evals)) @ evecs.conj().T
    return HoloSphere(k=fit.k, U=u)


def spectral_coeffs_from_sphere(q: HoloSphere) -> np.ndarray:
    """Bidegree coefficients c[a, b] of w^k (q(antipode(w)), q(z))."""
    k = q.k
    g = q.U.conj().T @ q.U
    c = np.empty_like(g)
    for a in range(k + 1):
        c[k - a, :] = (-1) ** a * g[a, :]
    return c


# ---------------------------------------------------------------------------
# Projections and traces.
# ---------------------------------------------------------------------------

@dataclass
class Projection:
    R: np.ndarray

    def __post_init__(self):
        self.R = np.asarray(self.R, dtype=complex)


def projection(q: HoloSphere, z) -> Projection:
    """Rank-one orthogonal projection onto the line q(z)."""
    v = q.eval_unit(z)
    return Projection(R=np.outer(v, v.conj()))


def trace_npoint(q: HoloSphere, points) -> complex:
    """tr R_{z1} ... R_{zn} as the cyclic product of unit inner products."""
    pts = [BoundaryPoint.of(p) for p in _point_list(points)]
    vecs = [q.eval_unit(p) for p in pts]
    out = 1.0 + 0j
    n = len(vecs)
    for i in range(n):
        out *= complex(np.vdot(vecs[i], vecs[(i + 1) % n]))
    return out


def _point_list(points):
    if hasattr(points, "points"):
        return points.points
    return list(points)


def fs_curvature(q: HoloSphere, z, h: float = 1e-3) -> float:
    """Chart density d/dz d/dzbar ln |q(z)|^2 >= 0, by a 5-point Laplacian."""
    z = BoundaryPoint.of(z)
    if z.is_infinity:
        raise BasePoint("curvature chart requires finite z")
    z0 = z.value

    def ln2(zz):
        v = q.eval_raw(BoundaryPoint(zz))
        n2 = float(np.vdot(v, v).real)
        if n2 < 1e-24:
            raise BasePoint(f"sphere vanishes near {zz}")
        return math.log(n2)

    lap = (
        ln2(z0 + h) + ln2(z0 - h) + ln2(z0 + 1j * h) + ln2(z0 - 1j * h) - 4.0 * ln2(z0)
    ) / h**2
    return 0.25 * lap


def fs_curvature_exact(q: HoloSphere, z: complex) -> float:
    """Closed-form pullback density (|q|^2 |q'|^2 - |<q, q'>|^2)/|q|^4."""
    u = q.U
    powers = np.array([z**b for b in range(q.k + 1)])
    dpowers = np.array([b * z ** (b - 1) if b else 0.0 for b in range(q.k + 1)])
    v = u @ powers
    dv = u @ dpowers
    n2 = float(np.vdot(v, v).real)
    if n2 < 1e-24:
        raise BasePoint(f"sphere vanishes at {z}")
    return (n2 * float(np.vdot(dv, dv).real) - abs(np.vdot(v, dv)) ** 2) / n2**2


def curvature_integral(q: HoloSphere, n_rad: int = 96, n_ang: int = 128) -> float:
    """(1/pi) integral of the pullback density over the whole sphere.

    Both unit-disk charts are integrated with Gauss-Legendre x trapezoid
    rules; the flip sends |z| > 1 to the unit disk of the second chart.
    """
    nodes, weights = np.polynomial.legendre.leggauss(n_rad)
    r = 0.5 * (nodes + 1.0)
    wr = 0.5 * weights
    th = 2.0 * np.pi * np.arange(n_ang) / n_ang
    wth = 2.0 * np.pi / n_ang

    def chart(qq):
        total = 0.0
        for ri, wi in zip(r, wr):
            for t in th:
                z = ri * math.cos(t) + 1j * ri * math.sin(t)
                total += fs_curvature_exact(qq, z) * ri * wi * wth
        return total

    return (chart(q) + chart(q.flipped())) / math.pi


# ---------------------------------------------------------------------------
# Four-point tensor and the k = 2 subalgebra.
# ---------------------------------------------------------------------------

@dataclass
class FourPointTensor:
    basepoints: list
    g: np.ndarray
    ginv: np.ndarray
    cond: float
    rank: int = 0

    def diagnostics(self) -> dict:
        return {"cond": self.cond, "rank": self.rank}


def four_point_tensor(q: HoloSphere, basepoints) -> FourPointTensor:
    """g[(ij),(kl)] = tr R_i R_j R_k R_l over the basepoint pairs.

    Hermitian under pair-index reversal, g[(ij),(kl)] = conj(g[(lk),(ji)]).
    Raises DegenerateBasepoints when the tensor is numerically singular.
    """
    pts = [BoundaryPoint.of(p) for p in basepoints]
    npts = len(pts)
    vecs = [q.eval_unit(p) for p in pts]
    inner = np.array([[np.vdot(a, b) for b in vecs] for a in vecs])

    def tr4(i, j, k, l):
        return inner[i, j] * inner[j, k] * inner[k, l] * inner[l, i]

    dim = npts * npts
    g = np.empty((dim, dim), dtype=complex)
    for i in range(npts):
        for j in range(npts):
            for k in range(npts):
                for l in range(npts):
                    g[i * npts + j, k * npts + l] = tr4(i, j, k, l)
    svals = np.linalg.svd(g, compute_uv=False)
    cond = float(svals[0] / svals[-1]) if svals[-1] > 0 else math.inf
    if cond >= 1e8:
        raise DegenerateBasepoints(f"four-point tensor condition {cond:.2e}")
    ginv = np.linalg.pinv(g, rcond=1e-10)
    rank = int(np.sum(svals > 1e-10 * svals[0]))
    return FourPointTensor(basepoints=pts, g=g, ginv=ginv, cond=cond, rank=rank)


def four_point_reconstruct(q: HoloSphere, basepoints, w, z,
                           tensor: FourPointTensor | None = None) -> complex:
    """Two-point value from three-point data through the inverted tensor."""
    t = tensor if tensor is not None else four_point_tensor(q, basepoints)
    pts = t.basepoints
    npts = len(pts)
    vecs = [q.eval_unit(p) for p in pts]
    qw = q.eval_unit(BoundaryPoint.of(w))
    qz = q.eval_unit(BoundaryPoint.of(z))

    def tr3(a, i, j):
        # tr R_a R_i R_j for a in {w, z}
        return (np.vdot(a, vecs[i]) * np.vdot(vecs[i], vecs[j]) * np.vdot(vecs[j], a))

    t_w = np.array([tr3(qw, k, l) for k in range(npts) for l in range(npts)])
    t_z = np.array([tr3(qz, i, j) for i in range(npts) for j in range(npts)])
    return complex(t_z @ t.ginv @ t_w)


@dataclass
class SubalgebraStructure:
    w: complex
    z1: complex | None
    z2: complex | None
    basis_labels: tuple
    products: dict
    closure_residual: float
    tau: complex


def subalgebra_structure(q: HoloSphere, w) -> SubalgebraStructure:
    """Structure constants of the algebra generated by the two projections
    orthogonal to q(w), for k = 2 spheres.

    Basis (P1, P2, P1 P2, P2 P1); every product expands in it with closure
    residual at numerical precision, and P1 P2 P1 = tau P1 with
    tau = tr(R1 R2).  Raises DegenerateRoots when the orthogonality roots
    coincide (e.g. for the Veronese sphere).
    """
    if q.k != 2:
        raise ValueError("subalgebra structure is defined for k = 2 spheres")
    w = BoundaryPoint.of(w)
    coeffs = q.pairing_poly(w)
    scale = float(np.abs(coeffs).max())
    deg = _poly_degree(coeffs, 1e-10 * scale)
    roots = list(np.roots(coeffs[: deg + 1][::-1])) if deg > 0 else []
    while len(roots) < 2:
        roots.append(None)  # root moved to infinity
    r0, r1 = roots[:2]
    z1 = BoundaryPoint.infinity() if r0 is None else BoundaryPoint(complex(r0))
    z2 = BoundaryPoint.infinity() if r1 is None else BoundaryPoint(complex(r1))
    if (z1.is_infinity and z2.is_infinity) or (
        not z1.is_infinity and not z2.is_infinity and abs(z1.value - z2.value) < 1e-4
    ):
        raise DegenerateRoots(f"orthogonality roots coincide near {z1!r}")

    p1 = projection(q, z1).R
    p2 = projection(q, z2).R
    basis = [p1, p2, p1 @ p2, p2 @ p1]
    labels = ("P1", "P2", "P12", "P21")
    flat = np.column_stack([b.reshape(-1) for b in basis])
    products = {}
    closure = 0.0
    for i, a in enumerate(basis):
        for j, b in enumerate(basis):
            prod = (a @ b).reshape(-1)
            coef, res, *_ = np.linalg.lstsq(flat, prod, rcond=None)
            recon = flat @ coef
            closure = max(closure, float(np.linalg.norm(prod - recon)))
            products[(labels[i], labels[j])] = coef
    tau = complex(np.trace(p1 @ p2))
    return SubalgebraStructure(
        w=None if w.is_infinity else w.value,
        z1=None if z1.is_infinity else z1.value,
        z2=None if z2.is_infinity else z2.value,
        basis_labels=labels,
        products=products,
        closure_residual=closure,
        tau=tau,
    )


def holo_sphere_to_json(q: HoloSphere) -> str:
    import json

    return json.dumps(
        {"k": q.k, "U": {"re": q.U.real.tolist(), "im": q.U.imag.tolist()}},
        sort_keys=True,
    )


def holo_sphere_from_json(text: str) -> HoloSphere:
    import json

    doc = json.loads(text)
    u = np.asarray(doc["U"]["re"], float) + 1j * np.asarray(doc["U"]["im"], float)
    return HoloSphere(k=int(doc["k"]), U=u)
