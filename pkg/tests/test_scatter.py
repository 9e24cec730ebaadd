import math

import numpy as np
import pytest

from monoholo.errors import MismatchedGeodesic, TruncationTooShort
from monoholo.field import abelian_field
from monoholo.geom import BoundaryPoint, chordal_distance, make_geodesic, random_boundary_points
from monoholo.scatter import (
    SolverConfig,
    boundary_limit,
    decaying_solution,
    pairing,
    solve_pairing,
)


def predicted_two_point(a: BoundaryPoint, b: BoundaryPoint) -> float:
    # centered charge-1 value from rotational symmetry: (1 + cos angle)/2
    return 0.5 * (1.0 + float(a.to_sphere() @ b.to_sphere()))


def test_abelian_closed_form(abelian, cfg):
    g = make_geodesic(BoundaryPoint(0.4 + 0.1j), BoundaryPoint(-1.2j), 12.0)
    s = decaying_solution(abelian, g, +1, cfg)
    r = decaying_solution(abelian, g, -1, cfg)
    # s = exp(-t) (1, 0) up to phase, in the eigenbasis of the Higgs field
    mid = len(s.ts) // 2
    assert np.linalg.norm(s.ys[mid]) == pytest.approx(1.0, abs=1e-8)
    assert abs(s.ys[mid][1]) < 1e-12
    val, cdev = pairing(r, s)
    assert val == pytest.approx(1.0, abs=1e-8)
    assert cdev < 1e-10


def test_pairing_guards(abelian, cfg):
    g = make_geodesic(BoundaryPoint(0), BoundaryPoint(1), 12.0)
    g2 = make_geodesic(BoundaryPoint(0), BoundaryPoint(1j), 12.0)
    s = decaying_solution(abelian, g, +1, cfg)
    r = decaying_solution(abelian, g, -1, cfg)
    s2 = decaying_solution(abelian, g2, +1, cfg)
    with pytest.raises(MismatchedGeodesic):
        pairing(s, s)  # wrong signs
    with pytest.raises(MismatchedGeodesic):
        pairing(r, s2)  # different geodesics


def test_truncation_too_short(hedgehog, cfg):
    g = make_geodesic(BoundaryPoint(0), BoundaryPoint.infinity(), 0.5)
    with pytest.raises(TruncationTooShort):
        decaying_solution(hedgehog, g, +1, cfg)


def test_hedgehog_diameter_on_locus(hedgehog, cfg):
    pd = solve_pairing(hedgehog, BoundaryPoint(0), BoundaryPoint.infinity(), cfg)
    assert abs(pd.value) < 1e-3
    assert pd.s.norm_residual < 1e-4


def test_hedgehog_pairing_values(hedgehog, cfg):
    pd = solve_pairing(hedgehog, BoundaryPoint(1), BoundaryPoint(1j), cfg)
    assert abs(pd.value) ** 2 == pytest.approx(0.5, abs=1e-2)
    for a, b in ((0.3 + 0.2j, -1.5j), (2 + 1j, 0.1)):
        pa, pb = BoundaryPoint(a), BoundaryPoint(b)
        pd = solve_pairing(hedgehog, pa, pb, cfg)
        assert abs(pd.value) ** 2 == pytest.approx(predicted_two_point(pa, pb), abs=1e-6)


def test_constancy_and_richardson(hedgehog, cfg, rng):
    for _ in range(5):
        while True:
            a, b = random_boundary_points(rng, 2)
            if 0.2 <= chordal_distance(a, b) <= 1.8:
                break
        pd = solve_pairing(hedgehog, a, b, cfg)
        assert pd.constancy_dev / max(abs(pd.value), 1e-3) < 1e-6
        hi = SolverConfig(refine=False, T=pd.geodesic.T * 1.25, workers=1)
        pd_hi = solve_pairing(hedgehog, a, b, hi)
        assert abs(pd_hi.value - pd.value) < 1e-6


def test_decay_diagnostics(hedgehog, cfg):
    g = make_geodesic(BoundaryPoint(0.8), BoundaryPoint(-0.5 + 0.9j),
                      cfg.initial_T(1.0))
    s = decaying_solution(hedgehog, g, +1, cfg)
    r = decaying_solution(hedgehog, g, -1, cfg)
    assert s.norm_residual < 1e-4
    assert r.norm_residual < 1e-4
    assert s.log_slope_dev < 0.01
    assert r.log_slope_dev < 0.01
    assert min(np.linalg.norm(s.ys, axis=1)) > 0.0


def test_boundary_limits_parallel(hedgehog, cfg):
    z1, z2, z3 = BoundaryPoint(1.0), BoundaryPoint(0.5j), BoundaryPoint(-0.7)
    T = cfg.initial_T(1.0)
    g12 = make_geodesic(z1, z2, T)
    g23 = make_geodesic(z2, z3, T)
    s12 = decaying_solution(hedgehog, g12, +1, cfg)
    r23 = decaying_solution(hedgehog, g23, -1, cfg)
    lim_s = boundary_limit(s12, "end")
    lim_r = boundary_limit(r23, "start")
    overlap = abs(np.vdot(lim_r, lim_s))
    assert math.acos(min(1.0, overlap)) < 1e-3


def test_origin_shift_invariance(hedgehog, cfg):
    a, b = BoundaryPoint(0.8 + 0.1j), BoundaryPoint(-0.4 + 0.9j)
    T = cfg.initial_T(1.0)
    vals = []
    for shift in (0.0, 0.9):
        g = make_geodesic(a, b, T, origin_shift=shift)
        s = decaying_solution(hedgehog, g, +1, cfg)
        r = decaying_solution(hedgehog, g, -1, cfg)
        vals.append(abs(pairing(r, s)[0]))
    assert abs(vals[0] - vals[1]) < 1e-8


def test_strict_bound_sample(hedgehog, cfg, rng):
    for _ in range(20):
        while True:
            a, b = random_boundary_points(rng, 2)
            if 0.15 <= chordal_distance(a, b) <= 1.85:
                break
        pd = solve_pairing(hedgehog, a, b, cfg)
        assert abs(pd.value) < 1.0 - 1e-3


def test_reversed_solution_identity(hedgehog, cfg):
    from monoholo.geom import reverse_geodesic
    from monoholo.scatter import reversed_solution

    a, b = BoundaryPoint(0.6 + 0.3j), BoundaryPoint(-1.1 + 0.2j)
    T = cfg.initial_T(1.0)
    g = make_geodesic(a, b, T)
    g_rev = reverse_geodesic(g)
    s = decaying_solution(hedgehog, g, +1, cfg)
    r = decaying_solution(hedgehog, g, -1, cfg)
    # time reversal turns r into the forward-decaying solution of the
    # reversed geodesic (up to phase) with the same normalization
    s_rev_direct = decaying_solution(hedgehog, g_rev, +1, cfg)
    s_rev_derived = reversed_solution(r, g_rev)
    assert s_rev_derived.sign == +1
    n1 = np.linalg.norm(s_rev_direct.ys, axis=1)
    n2 = np.linalg.norm(s_rev_derived.ys, axis=1)
    assert np.max(np.abs(n1 - n2) / n2) < 1e-7
    r_rev_derived = reversed_solution(s, g_rev)
    val_fwd = pairing(r, s)[0]
    val_rev = pairing(r_rev_derived, s_rev_derived)[0]
    assert abs(val_rev - np.conj(val_fwd)) < 1e-12
