import math

import numpy as np
import pytest

from monoholo.errors import CoincidentEndpoints, OutOfRange
from monoholo.geom import (
    BoundaryPoint,
    BulkPoint,
    antipode,
    boundary_chart_of,
    chordal_distance,
    conformal_factor,
    geodesic_point,
    make_geodesic,
    random_boundary_points,
)


def test_antipode_examples():
    assert antipode(BoundaryPoint(0)).is_infinity
    assert antipode(BoundaryPoint.infinity()).value == 0
    assert antipode(BoundaryPoint(1j)).value == -1j
    assert antipode(BoundaryPoint(1 + 1j)).value == pytest.approx(-(1 + 1j) / 2)


def test_antipode_involution_bulk():
    rng = np.random.default_rng(0)
    pts = random_boundary_points(rng, 10000)
    worst = max(chordal_distance(antipode(antipode(p)), p) for p in pts)
    assert worst <= 1e-12


def test_antipode_fixed_point_free():
    rng = np.random.default_rng(1)
    for p in random_boundary_points(rng, 200):
        assert chordal_distance(antipode(p), p) > 1.99  # antipodes are opposite


def test_chart_round_trip():
    for z in (0.3 + 0.2j, -5 + 3j, 100 - 7j, 0.001j, 12345.0 + 0j):
        b = BoundaryPoint(z)
        back = BoundaryPoint.from_sphere(b.to_sphere())
        assert abs(back.value - z) <= 1e-12 * max(1.0, abs(z))
    assert BoundaryPoint.from_sphere([0.0, 0.0, 1.0]).is_infinity


def test_bulk_point_validation():
    with pytest.raises(ValueError):
        BulkPoint(np.array([1.0, 0.0, 0.0]))
    p = BulkPoint(np.array([0.5, 0.0, 0.0]))
    assert p.conformal_factor == pytest.approx(2.0 / 0.75)


def test_diameter_geodesic():
    g = make_geodesic(BoundaryPoint(0), BoundaryPoint.infinity(), 10.0)
    p, _ = geodesic_point(g, 0.0)
    assert np.allclose(p.x, 0.0, atol=1e-14)
    for t in (0.5, -1.7, 3.0):
        p, xd = geodesic_point(g, t)
        assert p.x[2] == pytest.approx(math.tanh(t / 2), abs=1e-12)
        assert conformal_factor(p.x) * np.linalg.norm(xd) == pytest.approx(1.0, abs=1e-10)


def test_antipodal_pair_through_origin():
    g = make_geodesic(BoundaryPoint(1), BoundaryPoint(-1), 10.0)
    p, _ = geodesic_point(g, 0.0)
    assert np.linalg.norm(p.x) < 1e-12


def test_coincident_endpoints():
    with pytest.raises(CoincidentEndpoints):
        make_geodesic(BoundaryPoint(0), BoundaryPoint(0), 10.0)
    with pytest.raises(CoincidentEndpoints):
        make_geodesic(BoundaryPoint(1), BoundaryPoint(1 + 1e-12j), 10.0)


def test_out_of_range():
    g = make_geodesic(BoundaryPoint(0), BoundaryPoint(1), 5.0)
    with pytest.raises(OutOfRange):
        geodesic_point(g, 5.5)


def test_unit_speed_random():
    rng = np.random.default_rng(2)
    worst = 0.0
    for _ in range(100):
        pts = random_boundary_points(rng, 2)
        if chordal_distance(pts[0], pts[1]) < 0.05:
            continue
        g = make_geodesic(pts[0], pts[1], 9.0)
        for _ in range(10):
            t = float(rng.uniform(-8, 8))
            h = 1e-5
            p1, _ = geodesic_point(g, t - h)
            p2, _ = geodesic_point(g, t + h)
            mid, _ = geodesic_point(g, t)
            speed = conformal_factor(mid.x) * np.linalg.norm(p2.x - p1.x) / (2 * h)
            worst = max(worst, abs(speed - 1.0))
    assert worst < 1e-6


def test_parameter_origin_minimizes_distance():
    g = make_geodesic(BoundaryPoint(1 + 0.5j), BoundaryPoint(-2j), 8.0)
    n0 = np.linalg.norm(geodesic_point(g, 0.0)[0].x)
    for t in (-0.3, -0.05, 0.05, 0.3):
        assert np.linalg.norm(geodesic_point(g, t)[0].x) >= n0


def test_reversal_convention():
    rng = np.random.default_rng(3)
    for _ in range(25):
        pts = random_boundary_points(rng, 2)
        if chordal_distance(pts[0], pts[1]) < 0.05:
            continue
        g1 = make_geodesic(pts[0], pts[1], 9.0)
        g2 = make_geodesic(pts[1], pts[0], 9.0)
        for t in (-2.5, 0.8):
            p1, v1 = geodesic_point(g1, t)
            p2, v2 = geodesic_point(g2, -t)
            assert np.max(np.abs(p1.x - p2.x)) < 1e-10
            assert np.max(np.abs(v1 + v2)) < 1e-10


def test_endpoint_approach_rate():
    g = make_geodesic(BoundaryPoint(1 + 0.5j), BoundaryPoint(-2j), 16.0)
    for T in (8.0, 12.0, 16.0):
        p, _ = geodesic_point(g, -T)
        d = chordal_distance(boundary_chart_of(p.x), BoundaryPoint(1 + 0.5j))
        assert d < 2.0 * math.exp(-T)


def test_infinite_endpoint_exact():
    g = make_geodesic(BoundaryPoint.infinity(), BoundaryPoint(0.5), 12.0)
    p, _ = geodesic_point(g, -12.0)
    assert chordal_distance(
        boundary_chart_of(p.x), BoundaryPoint.infinity()
    ) < 2e-5
