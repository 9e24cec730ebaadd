import numpy as np
import pytest

from monoholo import nahm, rep
from monoholo.boundary import SpectralCurveFit
from monoholo.errors import (
    BasePoint,
    DegenerateBasepoints,
    DegenerateMap,
    DegenerateRoots,
    NotPositive,
)
from monoholo.geom import BoundaryPoint, antipode, random_boundary_points
from monoholo.npoint import PointTuple


def test_identity_sphere_traces():
    q = rep.identity_sphere()
    assert rep.trace_npoint(q, [0, BoundaryPoint.infinity()]) == 0
    assert rep.trace_npoint(q, [1, 1j]) == pytest.approx(0.5)
    assert rep.trace_npoint(q, [1, 1j, 2j]) == pytest.approx((9 - 3j) / 20)


def test_projection_properties(rng):
    q = rep.random_sphere(2, rng)
    for _ in range(10):
        z = complex(rng.normal(), rng.normal())
        r = rep.projection(q, z).R
        assert np.max(np.abs(r @ r - r)) < 1e-14
        assert np.max(np.abs(r - r.conj().T)) < 1e-14
        assert np.trace(r).real == pytest.approx(1.0, abs=1e-14)


def test_projection_antipodal_orthogonal():
    q = rep.identity_sphere()
    r0 = rep.projection(q, 0).R
    rinf = rep.projection(q, BoundaryPoint.infinity()).R
    assert np.allclose(r0, np.diag([1.0, 0.0]))
    assert np.max(np.abs(r0 @ rinf)) == 0.0


def test_q_from_monad():
    md = nahm.MonadData(beta0=np.zeros((1, 1)), v=np.array([1.0]))
    q = rep.q_from_monad(md)
    assert np.allclose(q.U, -np.eye(2))
    with pytest.raises(DegenerateMap):
        rep.q_from_monad(nahm.MonadData(beta0=np.array([[0.4]]), v=np.array([0.0])))


def test_q_from_monad_generic_degree(rng):
    md = nahm.MonadData(
        beta0=rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2)),
        v=rng.normal(size=2) + 1j * rng.normal(size=2),
    )
    q = rep.q_from_monad(md)
    assert rep.degree(q) == 2
    assert rep.pairing_root_count(q) == 2


def test_q_from_spectral_identity():
    c = np.array([[0, -1], [1, 0]], complex) / np.sqrt(2)
    fit = SpectralCurveFit(k=1, coeffs=c, fit_residual=0.0)
    q = rep.q_from_spectral(fit)
    assert abs(rep.trace_npoint(q, [1, 1j])) == pytest.approx(0.5, abs=1e-12)
    assert abs(rep.trace_npoint(q, [0, BoundaryPoint.infinity()])) < 1e-12


def test_q_from_spectral_round_trip(rng):
    for k in (1, 2):
        u = rng.normal(size=(k + 1, k + 1)) + 1j * rng.normal(size=(k + 1, k + 1))
        q = rep.HoloSphere(k=k, U=u)
        c = rep.spectral_coeffs_from_sphere(q)
        q2 = rep.q_from_spectral(SpectralCurveFit(k=k, coeffs=c, fit_residual=0.0))
        c2 = rep.spectral_coeffs_from_sphere(q2)
        assert np.max(np.abs(c - c2)) < 1e-10 * np.max(np.abs(c))


def test_q_from_spectral_guards():
    bad = np.array([[0.3, 1.0], [0.2, 0.1]], complex)  # no reality structure
    with pytest.raises((NotPositive,)):
        rep.q_from_spectral(SpectralCurveFit(k=1, coeffs=bad, fit_residual=0.0))


def test_degree_examples():
    assert rep.degree(rep.identity_sphere()) == 1
    assert rep.degree(rep.veronese_sphere()) == 2


def test_degree_root_count_match(rng):
    md = nahm.MonadData(
        beta0=rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3)),
        v=rng.normal(size=3) + 1j * rng.normal(size=3),
    )
    q = rep.q_from_monad(md)
    assert rep.degree(q) == 3 == rep.pairing_root_count(q)


def test_base_point_detection():
    u = np.array([[0.0, 1.0], [0.0, 1.0]], complex)  # both components = z
    q = rep.HoloSphere(k=1, U=u)
    with pytest.raises(BasePoint):
        q.eval_unit(0.0)


def test_fs_curvature():
    q = rep.identity_sphere()
    assert rep.fs_curvature(q, 0.0) == pytest.approx(1.0, abs=1e-6)
    assert rep.fs_curvature_exact(q, 0.3 + 0.1j) == pytest.approx(
        1.0 / (1 + abs(0.3 + 0.1j) ** 2) ** 2, rel=1e-12
    )
    # branch point of (1, z^2): vanishing differential
    qz2 = rep.HoloSphere(k=2, U=np.array(
        [[1, 0, 0], [0, 0, 1], [0, 0, 0]], complex))
    assert abs(rep.fs_curvature(qz2, 0.0)) < 1e-5
    assert rep.fs_curvature(qz2, 0.0, h=1e-3) >= -1e-8


def test_curvature_integral_equals_degree(rng):
    assert rep.curvature_integral(rep.identity_sphere()) == pytest.approx(1.0, rel=0.02)
    assert rep.curvature_integral(rep.veronese_sphere()) == pytest.approx(2.0, rel=0.02)
    q = rep.random_sphere(3, rng)
    assert rep.curvature_integral(q) == pytest.approx(rep.degree(q), rel=0.02)


def test_singularity_matches_curvature_zero():
    qz2 = rep.HoloSphere(k=2, U=np.array(
        [[1, 0, 0], [0, 0, 1], [0, 0, 0]], complex))
    # projective differential vanishes exactly where the density does
    assert abs(rep.fs_curvature_exact(qz2, 0.0)) < 1e-14
    assert rep.fs_curvature_exact(qz2, 0.3) > 1e-3


def test_four_point_reconstruct_identity():
    q = rep.identity_sphere()
    val = rep.four_point_reconstruct(q, [0.0, 1.0], 1j, 2.0)
    assert val == pytest.approx(0.5, abs=1e-10)
    # consistency when w is a basepoint
    val2 = rep.four_point_reconstruct(q, [0.0, 1.0], 0.0, 2.0)
    assert val2 == pytest.approx(rep.trace_npoint(q, [0.0, 2.0]), abs=1e-10)


def test_four_point_random(rng):
    for k in (1, 2):
        q = rep.random_sphere(k, rng)
        base = random_boundary_points(rng, k + 1)
        tensor = rep.four_point_tensor(q, base)
        assert tensor.cond < 1e8
        assert np.max(np.abs(tensor.ginv @ tensor.g - np.eye((k + 1) ** 2))) < 1e-8
        # Hermitian under pair-index reversal
        npts = k + 1
        for i in range(npts):
            for j in range(npts):
                for kk in range(npts):
                    for ll in range(npts):
                        a = tensor.g[i * npts + j, kk * npts + ll]
                        b = tensor.g[ll * npts + kk, j * npts + i]
                        assert abs(a - b.conjugate()) < 1e-12
        for _ in range(20):
            w, z = random_boundary_points(rng, 2)
            direct = rep.trace_npoint(q, [w, z])
            recon = rep.four_point_reconstruct(q, base, w, z, tensor=tensor)
            assert abs(direct - recon) < 1e-8


def test_four_point_degenerate_basepoints():
    with pytest.raises(DegenerateBasepoints):
        rep.four_point_tensor(rep.veronese_sphere(), [0.3, 0.3, 0.7])


def test_subalgebra_structure(rng):
    q = rep.random_sphere(2, rng)
    sub = rep.subalgebra_structure(q, 0.4 + 0.2j)
    assert sub.closure_residual < 1e-8
    # P1 P2 P1 = tau P1 with tau = tr(R1 R2)
    coef = sub.products[("P12", "P1")]
    assert coef[0] == pytest.approx(sub.tau, abs=1e-10)
    assert np.max(np.abs(coef[1:])) < 1e-10
    p1 = rep.projection(q, BoundaryPoint(sub.z1)).R
    p2 = rep.projection(q, BoundaryPoint(sub.z2)).R
    assert sub.tau == pytest.approx(complex(np.trace(p1 @ p2)), abs=1e-12)


def test_subalgebra_veronese_degenerate():
    with pytest.raises(DegenerateRoots):
        rep.subalgebra_structure(rep.veronese_sphere(), 0.3 + 0.1j)


def test_trace_positivity(rng):
    q = rep.random_sphere(2, rng)
    pts = random_boundary_points(rng, 6)
    projs = [rep.projection(q, p).R for p in pts]
    coeffs = rng.normal(size=6) + 1j * rng.normal(size=6)
    a = sum(c * p for c, p in zip(coeffs, projs))
    val = np.trace(a.conj().T @ a).real
    assert val >= 0
    assert np.trace(np.zeros((3, 3))) == 0


def test_distinctness(rng):
    q = rep.random_sphere(2, rng)
    for _ in range(30):
        a, b = random_boundary_points(rng, 2)
        if a.isclose(b, 1e-3):
            continue
        assert abs(q.inner_unit(a, b)) ** 2 < 1.0 - 1e-6


def test_holomorphy_relation(rng):
    q = rep.random_sphere(2, rng)
    h = 1e-4
    for _ in range(10):
        z = complex(rng.uniform(-1, 1), rng.uniform(-1, 1))
        v0 = q.eval_unit(BoundaryPoint(z))
        proj = np.eye(3) - np.outer(v0, v0.conj())
        du = (q.eval_unit(BoundaryPoint(z + h)) - q.eval_unit(BoundaryPoint(z - h))) / (2 * h)
        dv = (q.eval_unit(BoundaryPoint(z + 1j * h)) - q.eval_unit(BoundaryPoint(z - 1j * h))) / (2 * h)
        dbar = 0.5 * (du + 1j * dv)
        assert np.linalg.norm(proj @ dbar) < 1e-3


def test_monad_orthogonality_matches_determinant(rng):
    for k in (1, 2):
        md = nahm.MonadData(
            beta0=rng.normal(size=(k, k)) + 1j * rng.normal(size=(k, k)),
            v=rng.normal(size=k) + 1j * rng.normal(size=k),
        )
        q = rep.q_from_monad(md)
        for _ in range(30):
            w = complex(rng.normal(), rng.normal())
            z = complex(rng.normal(), rng.normal())
            if abs(w) < 0.05:
                continue
            lhs = nahm.spectral_det_cleared(md, w, z)
            qw = q.eval_raw(antipode(BoundaryPoint(w)))
            qz = q.eval_raw(BoundaryPoint(z))
            rhs = (w ** k) * complex(np.vdot(qw, qz))
            assert abs(lhs - rhs) < 1e-9 * max(1.0, abs(lhs))


def test_sphere_json_round_trip(rng):
    q = rep.random_sphere(2, rng)
    q2 = rep.holo_sphere_from_json(rep.holo_sphere_to_json(q))
    assert q2.k == q.k
    assert np.allclose(q2.U, q.U)


def test_point_tuple_input():
    q = rep.identity_sphere()
    v1 = rep.trace_npoint(q, PointTuple((1, 1j, 2j)))
    v2 = rep.trace_npoint(q, [1, 1j, 2j])
    assert v1 == v2
