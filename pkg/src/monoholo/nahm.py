"""Discrete Nahm system for half-integer mass: residuals, gauge action,
least-squares solver, monad map, and the determinant identity.

Index conventions (m in Z + 1/2, all indices step by 2):
  beta_j,  j in [-2m+1, 2m-1]  with beta_j = beta_{-j}^T,
  gamma_j, j in [-2m+2, 2m-2]  with gamma_j = gamma_{-j}^T,
  v in C^k, and the equations

    beta_{j-1} gamma_j - gamma_j beta_{j+1} = 0,
    [beta_j^*, beta_j] + gamma_{j-1}^* gamma_{j-1}
        - gamma_{j+1} gamma_{j+1}^* = 0   for j in [-2m+3, 2m-3],
    [beta_{2m-1}, beta_{2m-1}^*] + v vbar^T
        - gamma_{2m-2}^* gamma_{2m-2} = 0.

For m = 1/2 every gamma index range is empty and the last equation forces
v = 0 (the trace of a commutator vanishes), a degenerate monad; the solver
reports this instead of inventing a convention.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field as dc_field
from fractions import Fraction

import numpy as np
from scipy.optimize import least_squares

from .errors import NonConvergence, ShapeMismatch
from .geom import BoundaryPoint


def beta_indices(m: float):
    top = int(round(2 * m)) - 1
    return list(range(-top, top + 1, 2))


def gamma_indices(m: float):
    top = int(round(2 * m)) - 2
    if top < 0:
        return []
    return list(range(-top, top + 1, 2))


def middle_indices(m: float):
    """Indices of the interior commutator equations, [-2m+3, 2m-3]."""
    top = int(round(2 * m)) - 3
    if top < 0:
        return []
    return list(range(-top, top + 1, 2))


def _check_half_integer(m: float):
    if abs(2 * m - round(2 * m)) > 1e-12 or round(2 * m) % 2 == 0 or m <= 0:
        raise ValueError(f"mass must be a positive half-integer, got {m}")


@dataclass
class NahmData:
    """Matrices beta_j, gamma_j and the vector v of the discrete system."""

    k: int
    m: float
    beta: dict
    gamma: dict
    v: np.ndarray
    degenerate: bool = False

    def __post_init__(self):
        _check_half_integer(self.m)
        for j in beta_indices(self.m):
            if j not in self.beta or self.beta[j].shape != (self.k, self.k):
                raise ShapeMismatch(f"beta[{j}] missing or misshaped")
        for j in gamma_indices(self.m):
            if j not in self.gamma or self.gamma[j].shape != (self.k, self.k):
                raise ShapeMismatch(f"gamma[{j}] missing or misshaped")
        self.v = np.asarray(self.v, dtype=complex).reshape(self.k)

    @property
    def top_index(self) -> int:
        return int(round(2 * self.m)) - 1

    def monad(self) -> "MonadData":
        return MonadData(beta0=self.beta[-self.top_index], v=self.v.copy())

    def to_json(self) -> str:
        def mat(a):
            a = np.asarray(a)
            return {"re": a.real.tolist(), "im": a.imag.tolist()}

        doc = {
            "k": self.k,
            "m": str(Fraction(self.m).limit_denominator(2)),
            "beta": {str(j): mat(self.beta[j]) for j in beta_indices(self.m)},
            "gamma": {str(j): mat(self.gamma[j]) for j in gamma_indices(self.m)},
            "v": mat(self.v),
            "degenerate": self.degenerate,
        }
        return json.dumps(doc, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "NahmData":
        doc = json.loads(text)

        def mat(d):
            return np.asarray(d["re"], dtype=float) + 1j * np.asarray(d["im"], dtype=float)

        m = float(Fraction(doc["m"]))
        return cls(
            k=int(doc["k"]),
            m=m,
            beta={int(j): mat(v) for j, v in doc["beta"].items()},
            gamma={int(j): mat(v) for j, v in doc["gamma"].items()},
            v=mat(doc["v"]).reshape(-1),
            degenerate=bool(doc.get("degenerate", False)),
        )


@dataclass
class GaugeTuple:
    """Unitaries g_j at the beta indices with g_j = conj(g_{-j}).

    Stored for j >= 0 only; negative indices derive by conjugation, and
    g_0 must be real orthogonal for the constraint to close.
    """

    k: int
    m: float
    g_nonneg: dict

    def __post_init__(self):
        _check_half_integer(self.m)
        for j in beta_indices(self.m):
            if j < 0:
                continue
            g = self.g_nonneg.get(j)
            if g is None or g.shape != (self.k, self.k):
                raise ShapeMismatch(f"gauge element at j={j} missing or misshaped")
            dev = np.max(np.abs(g.conj().T @ g - np.eye(self.k)))
            if dev > 1e-10:
                raise ValueError(f"gauge element at j={j} not unitary (dev={dev:.2e})")
            if j == 0 and np.max(np.abs(g.imag)) > 1e-12:
                raise ValueError("g_0 must be real orthogonal")

    def at(self, j: int) -> np.ndarray:
        if j >= 0:
            return self.g_nonneg[j]
        return np.conj(self.g_nonneg[-j])

    @classmethod
    def identity(cls, k: int, m: float) -> "GaugeTuple":
        return cls(k=k, m=m, g_nonneg={
            j: np.eye(k, dtype=complex) for j in beta_indices(m) if j >= 0
        })

    @classmethod
    def random(cls, k: int, m: float, rng: np.random.Generator) -> "GaugeTuple":
        g = {}
        for j in beta_indices(m):
            if j < 0:
                continue
            if j == 0:
                a = rng.normal(size=(k, k))
                q, r = np.linalg.qr(a)
                q = q @ np.diag(np.sign(np.diag(r)))
                g[0] = q.astype(complex)
            else:
                a = rng.normal(size=(k, k)) + 1j * rng.normal(size=(k, k))
                q, r = np.linalg.qr(a)
                q = q @ np.diag(np.exp(-1j * np.angle(np.diag(r))))
                g[j] = q
        return cls(k=k, m=m, g_nonneg=g)


@dataclass
class MonadData:
    """The determining pair (beta_{-2m+1}, v)."""

    beta0: np.ndarray
    v: np.ndarray

    def __post_init__(self):
        self.beta0 = np.asarray(self.beta0, dtype=complex)
        self.v = np.asarray(self.v, dtype=complex).reshape(-1)
        if self.beta0.shape != (len(self.v), len(self.v)):
            raise ShapeMismatch("beta0 must be k x k with v in C^k")

    @property
    def k(self) -> int:
        return len(self.v)


def _equation_blocks(d: NahmData):
    """All equation left-hand sides, as listed in the module docstring."""
    blocks = []
    top = d.top_index
    for j in gamma_indices(d.m):
        blocks.append(d.beta[j - 1] @ d.gamma[j] - d.gamma[j] @ d.beta[j + 1])
    for j in middle_indices(d.m):
        b = d.beta[j]
        t = b.conj().T @ b - b @ b.conj().T
        gm = d.gamma[j - 1]
        gp = d.gamma[j + 1]
        blocks.append(t + gm.conj().T @ gm - gp @ gp.conj().T)
    bt = d.beta[top]
    t = bt @ bt.conj().T - bt.conj().T @ bt
    last = t + np.outer(d.v, d.v.conj())
    if top - 1 in d.gamma:
        g = d.gamma[top - 1]
        last = last - g.conj().T @ g
    blocks.append(last)
    return blocks


def nahm_residual(d: NahmData) -> float:
    """Sum of squared Frobenius norms of all equations plus symmetry defects."""
    total = 0.0
    for blk in _equation_blocks(d):
        total += float(np.sum(np.abs(blk) ** 2))
    for j in beta_indices(d.m):
        total += float(np.sum(np.abs(d.beta[j] - d.beta[-j].T) ** 2)) / 2.0
    for j in gamma_indices(d.m):
        total += float(np.sum(np.abs(d.gamma[j] - d.gamma[-j].T) ** 2)) / 2.0
    return total


def gauge_act(d: NahmData, g: GaugeTuple) -> NahmData:
    """beta_j -> g_j beta_j g_j^-1, gamma_j -> g_{j-1} gamma_j g_{j+1}^-1,
    v -> g_{2m-1} v."""
    if g.k != d.k or abs(g.m - d.m) > 1e-12:
        raise ShapeMismatch("gauge tuple does not match the data")
    beta = {}
    for j in beta_indices(d.m):
        gj = g.at(j)
        beta[j] = gj @ d.beta[j] @ gj.conj().T
    gamma = {}
    for j in gamma_indices(d.m):
        gamma[j] = g.at(j - 1) @ d.gamma[j] @ g.at(j + 1).conj().T
    v = g.at(d.top_index) @ d.v
    return NahmData(k=d.k, m=d.m, beta=beta, gamma=gamma, v=v, degenerate=d.degenerate)


# ---------------------------------------------------------------------------
# Solver.
# ---------------------------------------------------------------------------

def _pack_shapes(k: int, m: float):
    """Free parameters: beta_j (j >= 0; beta_0 symmetric), gamma_j (j > 0), v."""
    shapes = []
    for j in beta_indices(m):
        if j == 0:
            shapes.append(("beta0", k * (k + 1) // 2))
        elif j > 0:
            shapes.append((f"beta{j}", k * k))
    for j in gamma_indices(m):
        if j > 0:
            shapes.append((f"gamma{j}", k * k))
    shapes.append(("v", k))
    return shapes


def _unpack(x: np.ndarray, k: int, m: float) -> NahmData:
    zc = x[::2] + 1j * x[1::2]
    pos = 0

    def take(n):
        nonlocal pos
        out = zc[pos:pos + n]
        pos += n
        return out

    beta = {}
    for j in beta_indices(m):
        if j < 0:
            continue
        if j == 0:
            tri = take(k * (k + 1) // 2)
            b = np.zeros((k, k), dtype=complex)
            idx = 0
            for r in range(k):
                for c in range(r, k):
                    b[r, c] = tri[idx]
                    b[c, r] = tri[idx]
                    idx += 1
            beta[0] = b
        else:
            beta[j] = take(k * k).reshape(k, k)
    gamma = {}
    for j in gamma_indices(m):
        if j > 0:
            gamma[j] = take(k * k).reshape(k, k)
    v = take(k)
    for j in beta_indices(m):
        if j < 0:
            beta[j] = beta[-j].T
    for j in gamma_indices(m):
        if j < 0:
            gamma[j] = gamma[-j].T
    return NahmData(k=k, m=m, beta=beta, gamma=gamma, v=v)


def _n_free(k: int, m: float) -> int:
    return 2 * sum(n for _, n in _pack_shapes(k, m))


def solve_nahm(k: int, m: float, seed: int = 0, restarts: int = 20) -> NahmData:
    """Damped least squares from random starts; residual certified < 1e-8.

    Nondegenerate solutions (v away from zero) win ties; when only the
    degenerate family exists, as for m = 1/2, the result carries
    degenerate=True.  Raises NonConvergence with diagnostics otherwise.
    """
    _check_half_integer(m)
    if k < 1:
        raise ValueError("charge k must be >= 1")
    nfree = _n_free(k, m)

    def resid_vec(x):
        d = _unpack(x, k, m)
        parts = [blk.reshape(-1) for blk in _equation_blocks(d)]
        z = np.concatenate(parts)
        return np.concatenate([z.real, z.imag])

    n_resid = len(resid_vec(np.zeros(nfree)))
    method = "lm" if n_resid >= nfree else "trf"

    best = None
    best_score = None
    attempts = []
    for r in range(restarts):
        rng = np.random.default_rng((seed, r))
        x0 = rng.normal(scale=1.0 / math.sqrt(k), size=nfree)
        res = least_squares(resid_vec, x0, method=method, xtol=1e-15, ftol=1e-15,
                            gtol=1e-15, max_nfev=4000)
        d = _unpack(res.x, k, m)
        rr = nahm_residual(d)
        degenerate = _monad_degenerate(d)
        attempts.append((rr, float(np.linalg.norm(d.v))))
        # prefer converged, then a nondegenerate monad, then small residual
        score = (rr >= 1e-8, degenerate, rr)
        if best_score is None or score < best_score:
            best, best_score = d, score
        if not best_score[0] and not best_score[1] and best_score[2] < 1e-12:
            break

    rr = nahm_residual(best)
    if rr >= 1e-8:
        raise NonConvergence(
            f"best residual {rr:.3e} after {restarts} restarts",
            diagnostics={"attempts": attempts},
        )
    best.degenerate = _monad_degenerate(best)
    return _gauge_fix(best)


def _monad_degenerate(d: NahmData, tol: float = 1e-5) -> bool:
    """True when the determining pair fails the injectivity condition.

    The pair is degenerate iff some eigenvector x of beta_{-2m+1}
    satisfies v^T x = 0 (then every map component shares the root), in
    particular whenever v = 0.
    """
    md = d.monad()
    vnorm = float(np.linalg.norm(md.v))
    if vnorm <= 1e-4:
        return True
    _, vecs = np.linalg.eig(md.beta0)
    for i in range(md.k):
        if abs(np.dot(md.v, vecs[:, i])) < tol * vnorm:
            return True
    return False


def _gauge_fix(d: NahmData) -> NahmData:
    """Canonical representative: v along e_1 real nonnegative, then
    beta_{-2m+1} upper Hessenberg.

    With g_top the only non-identity element, beta_{-2m+1} transforms by
    W = conj(g_top) and v by g_top = conj(W); requiring W conj(vhat) = e_1
    makes the rotated v real nonnegative, and a Hessenberg reduction
    fixing e_1 preserves that.
    """
    k, top = d.k, d.top_index
    if top == 0:
        # single index: the gauge element must be real orthogonal, which
        # cannot rotate a complex v; leave the (degenerate) data as is
        return d
    vnorm = float(np.linalg.norm(d.v))
    if vnorm < 1e-12:
        return d
    import scipy.linalg as sla

    w1 = _householder_to_e1(np.conj(d.v) / vnorm)
    a = w1 @ d.beta[-top] @ w1.conj().T
    _, q = sla.hessenberg(a, calc_q=True)
    w = q.conj().T @ w1
    g = GaugeTuple.identity(k, d.m)
    g.g_nonneg[top] = np.conj(w)
    return gauge_act(d, g)


def _householder_to_e1(v: np.ndarray) -> np.ndarray:
    """Unitary U with U v = e_1 for unit v (then conj(U) is the gauge)."""
    k = len(v)
    e1 = np.zeros(k, dtype=complex)
    e1[0] = 1.0
    phase = v[0] / abs(v[0]) if abs(v[0]) > 1e-14 else 1.0
    u = v - phase * e1
    nu = np.linalg.norm(u)
    if nu < 1e-14:
        return np.conj(phase) * np.eye(k, dtype=complex)
    u = u / nu
    h = np.eye(k, dtype=complex) - 2.0 * np.outer(u, u.conj())
    # h v = phase e_1; absorb the phase
    return np.conj(phase) * h


# ---------------------------------------------------------------------------
# Monad map and determinant identity.
# ---------------------------------------------------------------------------

def _adjugate(mat: np.ndarray) -> np.ndarray:
    n = mat.shape[0]
    if n == 1:
        return np.eye(1, dtype=complex)
    adj = np.empty_like(mat)
    rows = list(range(n))
    cols = list(range(n))
    for i in range(n):
        for j in range(n):
            minor = np.delete(np.delete(mat, i, axis=0), j, axis=1)
            adj[j, i] = (-1) ** (i + j) * np.linalg.det(minor)
    return adj


def beta_map(md: MonadData, z) -> np.ndarray:
    """Degree-k map (-det(b - z)(b^T - z)^{-1} v ; det(b - z)) in C^{k+1}.

    Computed in adjugate form, so values stay finite across eigenvalues of
    b.  At z = infinity the leading coefficient vector is returned.
    """
    z = BoundaryPoint.of(z)
    if z.is_infinity:
        coeffs = beta_map_coefficients(md)
        return np.ascontiguousarray(coeffs[:, -1])
    b = md.beta0
    zv = z.value
    k = md.k
    top = -(_adjugate(b.T - zv * np.eye(k)) @ md.v)
    bottom = np.linalg.det(b - zv * np.eye(k))
    return np.concatenate([top, [bottom]])


def beta_map_coefficients(md: MonadData) -> np.ndarray:
    """(k+1) x (k+1) coefficient matrix of beta_map in powers of z.

    Components are polynomials of degree <= k, so interpolation at k+1
    points is exact; sample points sit on a circle clear of eigenvalues.
    """
    k = md.k
    radius = 1.0 + float(np.max(np.abs(np.linalg.eigvals(md.beta0))))
    zs = radius * np.exp(2j * np.pi * np.arange(k + 1) / (k + 1)) + 0.1234
    vals = np.column_stack([beta_map(md, complex(z)) for z in zs])
    vand = np.vander(zs, k + 1, increasing=True)
    # vals = C @ vand.T  =>  C = solve(vand, vals.T).T
    return np.linalg.solve(vand, vals.T).T


def spectral_det(md: MonadData, w, z) -> complex:
    """det((b^T - z)(bbar + 1/w) + v vbar^T); equals the Hermitian pairing
    (beta_map(antipode(w)), beta_map(z)) identically.

    The transpose in the z factor is forced by the monad map, whose top
    component inverts b^T - z; for symmetric b (and always for k = 1) it
    can be dropped.
    """
    w = BoundaryPoint.of(w)
    z = BoundaryPoint.of(z)
    k = md.k
    b = md.beta0
    eye = np.eye(k)
    rank1 = np.outer(md.v, md.v.conj())
    if z.is_infinity or w.is_infinity:
        raise ValueError("use spectral_det_cleared for points at infinity")
    if w.value == 0:
        raise ValueError("w = 0 requires the cleared polynomial form")
    return complex(np.linalg.det(
        (b.T - z.value * eye) @ (b.conj() + eye / w.value) + rank1
    ))


def spectral_det_cleared(md: MonadData, w: complex, z: complex) -> complex:
    """w^k spectral_det, polynomial of bidegree (k, k); finite at w = 0."""
    k = md.k
    b = md.beta0
    eye = np.eye(k)
    rank1 = np.outer(md.v, md.v.conj())
    return complex(np.linalg.det(
        (b.T - z * eye) @ (w * b.conj() + eye) + w * rank1
    ))


def rank_one_det(u, v) -> tuple:
    """(det(I + u vbar^T), 1 + (v, u)); the two agree identically."""
    u = np.asarray(u, dtype=complex).reshape(-1)
    v = np.asarray(v, dtype=complex).reshape(-1)
    if u.shape != v.shape:
        raise ShapeMismatch("vectors must share a dimension")
    lhs = complex(np.linalg.det(np.eye(len(u)) + np.outer(u, v.conj())))
    rhs = complex(1.0 + np.vdot(v, u))
    return lhs, rhs


def hermitian_pairing(a: np.ndarray, b: np.ndarray) -> complex:
    """Conjugate-linear in the first slot, matching rank_one_det."""
    return complex(np.vdot(a, b))
