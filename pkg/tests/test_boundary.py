import math

import numpy as np
import pytest

from monoholo.boundary import (
    estimate_charge,
    fit_spectral_poly,
    lambda_fd,
    curvature_fd,
    spectral_scan,
)
from monoholo.errors import NearSingular, RankDeficient
from monoholo.geom import BoundaryPoint, antipode, disk_grid


def closed_form_lambda(w: complex, z: complex) -> complex:
    # 0.5 (w/(1 + w zbar) - z/(1 + |z|^2)) for the centered charge-1 field
    return 0.5 * (w / (1 + w * z.conjugate()) - z / (1 + abs(z) ** 2))


def test_lambda_diagonal_zero(hedgehog, cfg):
    for z in (0.4 + 0.2j, -0.7j):
        assert abs(lambda_fd(hedgehog, z, z, cfg=cfg)) < 1e-3


def test_lambda_abelian_zero(abelian, cfg):
    assert abs(lambda_fd(abelian, 0.3, 1.2j, cfg=cfg)) < 1e-8


def test_lambda_closed_form(hedgehog, cfg):
    val = lambda_fd(hedgehog, 0.0, 1.0, cfg=cfg)
    assert val == pytest.approx(-0.25, abs=5e-3)
    for w, z in ((0.3 + 0.1j, 0.8 - 0.4j), (1.1, 0.2j)):
        got = lambda_fd(hedgehog, w, z, cfg=cfg)
        assert got == pytest.approx(closed_form_lambda(w, z), abs=5e-3)


def test_lambda_near_singular(hedgehog, cfg):
    w = 0.5 + 0.2j
    with pytest.raises(NearSingular):
        lambda_fd(hedgehog, w, antipode(BoundaryPoint(w)), cfg=cfg)


def test_curvature_values(abelian, hedgehog, cfg):
    assert abs(curvature_fd(abelian, 0.2, 1.0, cfg=cfg)) < 1e-8
    assert curvature_fd(hedgehog, 0.0, 2.0, cfg=cfg) == pytest.approx(-1.0, abs=2e-2)
    c1 = curvature_fd(hedgehog, 0.4, 2.0, cfg=cfg)
    c2 = curvature_fd(hedgehog, 0.4, 3 + 1j, cfg=cfg)
    assert abs(c1 - c2) < 1e-3


def test_pole_growth(hedgehog, cfg):
    w = 0.5 + 0.2j
    z_pole = antipode(BoundaryPoint(w)).value
    e = complex(math.cos(0.4), math.sin(0.4))
    ds = (0.4, 0.2, 0.1)
    lams = [abs(lambda_fd(hedgehog, w, z_pole + d * e, cfg=cfg)) for d in ds]
    expo = math.log(lams[2] / lams[0]) / math.log(ds[2] / ds[0])
    assert expo == pytest.approx(-1.0, abs=0.2)


def test_scan_abelian_empty(abelian, cfg):
    grid = disk_grid(10, 1.5)
    scan = spectral_scan(abelian, grid, grid, threshold=1e-3, cfg=cfg)
    assert scan.locus == []


def test_scan_hedgehog_diagonal(hedgehog, cfg):
    grid = disk_grid(14, 1.8)
    scan = spectral_scan(hedgehog, grid, grid, threshold=1e-3, cfg=cfg)
    assert len(scan.locus) >= 10
    assert max(abs(h.z - h.w) for h in scan.locus) < 0.05
    assert estimate_charge(scan) == 1
    fit = fit_spectral_poly(scan.locus, 1)
    e = np.zeros((2, 2), complex)
    e[1, 0], e[0, 1] = 1.0, -1.0
    e /= np.linalg.norm(e)
    assert abs(np.vdot(e, fit.coeffs)) ** 2 > 0.99
    # reality structure: derived G is Hermitian
    g = fit.gram_candidate()
    assert np.max(np.abs(g - g.conj().T)) < 1e-6


def test_fit_exact_diagonal():
    pts = [(w, w) for w in (0.1, 0.5j, -0.7 + 0.2j, 1.2, -1.1j, 0.9 + 0.9j,
                            0.3 - 0.8j, -0.4, 1.5j, 2.0 - 0.5j)]
    fit = fit_spectral_poly(pts, 1)
    assert fit.fit_residual < 1e-10
    target = np.zeros((2, 2), complex)
    target[1, 0], target[0, 1] = 1.0, -1.0
    target /= np.linalg.norm(target)
    assert min(np.linalg.norm(fit.coeffs - target),
               np.linalg.norm(fit.coeffs + target)) < 1e-10


def test_fit_noise_stability(rng):
    clean = [(complex(w), complex(w)) for w in np.linspace(-1.5, 1.5, 12)]
    clean += [(1j * w, 1j * w) for w in np.linspace(-1.2, 1.2, 8)]
    fit0 = fit_spectral_poly(clean, 1)
    noisy = [(w + rng.normal(scale=1e-2) + 1j * rng.normal(scale=1e-2), z)
             for (w, z) in clean]
    fit1 = fit_spectral_poly(noisy, 1)
    assert min(np.linalg.norm(fit1.coeffs - fit0.coeffs),
               np.linalg.norm(fit1.coeffs + fit0.coeffs)) < 2e-2


def test_fit_rank_deficient():
    with pytest.raises(RankDeficient):
        fit_spectral_poly([], 1)
    with pytest.raises(RankDeficient):
        fit_spectral_poly([(0.1, 0.1), (0.2, 0.2)], 1)


def test_quadratic_transverse_vanishing(hedgehog, cfg):
    from monoholo.npoint import two_point

    w = 0.4 + 0.3j
    e = 0.8 + 0.6j
    vals = []
    for s in (0.2, 0.1, 0.05):
        v = two_point(hedgehog, antipode(BoundaryPoint(w)), w + s * e, cfg)
        vals.append(max(v.value.real, 1e-14))
    for a, b in zip(vals, vals[1:]):
        expo = math.log(a / b) / math.log(2.0)
        assert expo == pytest.approx(2.0, abs=0.2)


def test_real_structure_symmetry(hedgehog, cfg):
    from monoholo.npoint import two_point

    for w, z in ((0.3 + 0.4j, -0.8j), (1.2, 0.5 + 0.5j)):
        v1 = two_point(hedgehog, antipode(BoundaryPoint(w)), z, cfg)
        v2 = two_point(hedgehog, antipode(BoundaryPoint(z)), w, cfg)
        assert abs(v1.value - v2.value) < 1e-6
