"""Ball model of hyperbolic 3-space and its boundary Riemann sphere.

The boundary two-sphere is charted stereographically,

    z = (x1 + i*x2) / (1 - x3),    (0, 0, -1) -> 0,   (0, 0, 1) -> inf,

so the antipodal map of the sphere is exactly z -> -1/conj(z).  Geodesics
are stored as rigid motions: a Lorentz matrix in SO+(3,1) carrying the
standard axis geodesic onto the requested one, acting on the hyperboloid
model.  This keeps points at or near chart infinity exact.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .errors import CoincidentEndpoints, OutOfRange

CHORDAL_MIN = 1e-9


class BoundaryPoint:
    """Extended complex number: a finite value or the infinity marker."""

    __slots__ = ("value", "is_infinity")

    def __init__(self, value: complex = 0j):
        self.value = complex(value)
        self.is_infinity = False

    @classmethod
    def infinity(cls) -> "BoundaryPoint":
        p = cls(0j)
        p.is_infinity = True
        return p

    @classmethod
    def of(cls, z) -> "BoundaryPoint":
        """Coerce a complex number, float, or BoundaryPoint."""
        if isinstance(z, BoundaryPoint):
            return z
        if z is None:
            raise TypeError("boundary point may not be None")
        if isinstance(z, str):
            if z.strip().lower() == "inf":
                return cls.infinity()
            return cls(complex(z.replace("i", "j")))
        if isinstance(z, (int, float, complex)):
            if isinstance(z, float) and math.isinf(z):
                return cls.infinity()
            return cls(complex(z))
        raise TypeError(f"cannot interpret {z!r} as a boundary point")

    @classmethod
    def from_sphere(cls, p) -> "BoundaryPoint":
        """Inverse chart: unit 3-vector on the sphere to extended complex."""
        p = np.asarray(p, dtype=float)
        p = p / np.linalg.norm(p)
        planar = p[0] ** 2 + p[1] ** 2
        if planar == 0.0 and p[2] > 0:
            return cls.infinity()
        if p[2] > 0:
            # 1 - p3 = planar / (1 + p3), which avoids cancellation
            return cls(complex(p[0], p[1]) * (1.0 + p[2]) / planar)
        return cls(complex(p[0], p[1]) / (1.0 - p[2]))

    def to_sphere(self) -> np.ndarray:
        """Chart inverse as a unit vector; stable for large |z|."""
        if self.is_infinity:
            return np.array([0.0, 0.0, 1.0])
        z = self.value
        if abs(z) <= 1.0:
            d = 1.0 + abs(z) ** 2
            return np.array([2 * z.real / d, 2 * z.imag / d, (abs(z) ** 2 - 1.0) / d])
        w = 1.0 / z
        d = 1.0 + abs(w) ** 2
        return np.array([2 * w.real / d, -2 * w.imag / d, (1.0 - abs(w) ** 2) / d])

    def null_vector(self) -> np.ndarray:
        """Future-pointing null direction (1, p) in Minkowski space."""
        return np.concatenate(([1.0], self.to_sphere()))

    def isclose(self, other: "BoundaryPoint", tol: float = 1e-12) -> bool:
        return chordal_distance(self, other) <= tol

    def __eq__(self, other):
        if not isinstance(other, BoundaryPoint):
            return NotImplemented
        if self.is_infinity or other.is_infinity:
            return self.is_infinity and other.is_infinity
        return self.value == other.value

    def __hash__(self):
        return hash(("inf" if self.is_infinity else self.value))

    def __repr__(self):
        if self.is_infinity:
            return "BoundaryPoint(inf)"
        return f"BoundaryPoint({self.value:.6g})"


def antipode(z: BoundaryPoint) -> BoundaryPoint:
    """Antipodal point -1/conj(z), with 0 <-> inf."""
    z = BoundaryPoint.of(z)
    if z.is_infinity:
        return BoundaryPoint(0j)
    if z.value == 0:
        return BoundaryPoint.infinity()
    return BoundaryPoint(-1.0 / z.value.conjugate())


def chordal_distance(a: BoundaryPoint, b: BoundaryPoint) -> float:
    """Euclidean distance between the sphere images; range [0, 2]."""
    a = BoundaryPoint.of(a)
    b = BoundaryPoint.of(b)
    return float(np.linalg.norm(a.to_sphere() - b.to_sphere()))


@dataclass(frozen=True)
class BulkPoint:
    """Point of the open unit ball."""

    x: np.ndarray

    def __post_init__(self):
        x = np.asarray(self.x, dtype=float)
        object.__setattr__(self, "x", x)
        if not np.linalg.norm(x) < 1.0:
            raise ValueError("bulk point must satisfy |x| < 1")

    @property
    def conformal_factor(self) -> float:
        """Metric factor 2/(1-|x|^2)."""
        return 2.0 / (1.0 - float(self.x @ self.x))

    def hyperbolic_radius(self) -> float:
        """Distance to the ball's origin."""
        r = float(np.linalg.norm(self.x))
        return math.log((1.0 + r) / (1.0 - r))


def conformal_factor(x: np.ndarray) -> float:
    return 2.0 / (1.0 - float(x @ x))


# ---------------------------------------------------------------------------
# Lorentz machinery.  Minkowski vectors (x0, x1, x2, x3) are identified with
# Hermitian matrices x0*I + x.sigma; g in SL(2,C) acts by X -> g X g^dagger.
# ---------------------------------------------------------------------------

def _sl2_for_endpoints(start: BoundaryPoint, end: BoundaryPoint) -> np.ndarray:
    """Mobius matrix sending 0 -> start and inf -> end, det = 1."""
    if start.is_infinity:
        g = np.array([[-end.value, 1.0], [-1.0, 0.0]], dtype=complex)
    elif end.is_infinity:
        g = np.array([[1.0, start.value], [0.0, 1.0]], dtype=complex)
    else:
        g = np.array([[end.value, start.value], [1.0, 1.0]], dtype=complex)
    det = g[0, 0] * g[1, 1] - g[0, 1] * g[1, 0]
    return g / cmath.sqrt(det)


def _herm_from_vec(x: np.ndarray) -> np.ndarray:
    return np.array(
        [
            [x[0] + x[3], x[1] - 1j * x[2]],
            [x[1] + 1j * x[2], x[0] - x[3]],
        ],
        dtype=complex,
    )


def _vec_from_herm(h: np.ndarray) -> np.ndarray:
    return np.array(
        [
            0.5 * (h[0, 0].real + h[1, 1].real),
            h[0, 1].real,
            -h[0, 1].imag,
            0.5 * (h[0, 0].real - h[1, 1].real),
        ]
    )


def _lorentz_from_sl2(g: np.ndarray) -> np.ndarray:
    gh = g.conj().T
    cols = []
    for mu in range(4):
        e = np.zeros(4)
        e[mu] = 1.0
        cols.append(_vec_from_herm(g @ _herm_from_vec(e) @ gh))
    return np.column_stack(cols)


@dataclass(frozen=True)
class Geodesic:
    """Oriented boundary-to-boundary geodesic, truncated to |t| <= T.

    ``u`` and ``v`` are the images of the time and axis basis vectors under
    the stored Lorentz motion; the hyperboloid point at parameter t is
    cosh(t) u + sinh(t) v.  Unit speed, with t = 0 at the point closest to
    the ball's origin (plus any requested origin shift).
    """

    start: BoundaryPoint
    end: BoundaryPoint
    T: float
    u: np.ndarray
    v: np.ndarray


def make_geodesic(
    start, end, T: float, origin_shift: float = 0.0
) -> Geodesic:
    """Unit-speed geodesic from ``start`` to ``end``.

    Raises CoincidentEndpoints when the chordal distance between the
    endpoints is below 1e-9.  ``origin_shift`` moves the parameter origin
    away from the closest-to-origin convention; it exists so that origin
    independence of downstream pairings can be tested.
    """
    start = BoundaryPoint.of(start)
    end = BoundaryPoint.of(end)
    if T <= 0:
        raise ValueError("truncation half-length T must be positive")
    if chordal_distance(start, end) < CHORDAL_MIN:
        raise CoincidentEndpoints(f"endpoints {start} and {end} coincide")
    # The Hermitian identification used in _lorentz_from_sl2 transports the
    # conjugate Mobius action, so conjugate the matrix to realize the stated
    # boundary map.
    lam = _lorentz_from_sl2(np.conj(_sl2_for_endpoints(start, end)))
    u, v = lam[:, 0], lam[:, 3]
    # centre the parameter at the point closest to the origin:
    # cosh(dist to origin) = X^0(t) = u0 cosh t + v0 sinh t.
    t0 = math.atanh(-v[0] / u[0])
    ch, sh = math.cosh(t0 + origin_shift), math.sinh(t0 + origin_shift)
    u2 = ch * u + sh * v
    v2 = sh * u + ch * v
    return Geodesic(start=start, end=end, T=float(T), u=u2, v=v2)


def reverse_geodesic(g: Geodesic) -> Geodesic:
    """Orientation reversal; shares the parameter origin with ``g``."""
    return make_geodesic(g.end, g.start, g.T)


def with_truncation(g: Geodesic, T: float) -> Geodesic:
    return Geodesic(start=g.start, end=g.end, T=float(T), u=g.u, v=g.v)


def geodesic_point(g: Geodesic, t: float):
    """Point and coordinate velocity at parameter t.

    The returned velocity has hyperbolic norm 1 automatically (unit-speed
    parametrization).  Raises OutOfRange for |t| > T.
    """
    if abs(t) > g.T * (1 + 1e-12) + 1e-12:
        raise OutOfRange(f"|t|={abs(t)} exceeds truncation T={g.T}")
    ch, sh = math.cosh(t), math.sinh(t)
    X = ch * g.u + sh * g.v
    dX = sh * g.u + ch * g.v
    den = 1.0 + X[0]
    x = X[1:] / den
    xdot = (dX[1:] * den - X[1:] * dX[0]) / den**2
    return BulkPoint(x), xdot


def geodesic_radius(g: Geodesic, t: float) -> float:
    """Hyperbolic distance from the origin to the geodesic point."""
    X0 = math.cosh(t) * g.u[0] + math.sinh(t) * g.v[0]
    return math.acosh(max(X0, 1.0))


def boundary_chart_of(x: np.ndarray) -> BoundaryPoint:
    """Chart value of the radial boundary projection of a bulk point."""
    return BoundaryPoint.from_sphere(np.asarray(x, dtype=float))


def disk_grid(n: int, radius: float) -> list[complex]:
    """n quasi-uniform points on the disk |z| <= radius (golden spiral)."""
    golden = math.pi * (3.0 - math.sqrt(5.0))
    pts = []
    for i in range(n):
        r = radius * math.sqrt((i + 0.5) / n)
        th = i * golden
        pts.append(complex(r * math.cos(th), r * math.sin(th)))
    return pts


def random_boundary_points(rng: np.random.Generator, n: int) -> list[BoundaryPoint]:
    """Uniform points on the sphere, as boundary chart values."""
    out = []
    while len(out) < n:
        p = rng.normal(size=3)
        nrm = np.linalg.norm(p)
        if nrm < 1e-8:
            continue
        out.append(BoundaryPoint.from_sphere(p / nrm))
    return out
