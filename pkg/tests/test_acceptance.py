"""Acceptance suite: one test per criterion, one printed line each.

Shares the scan and fitted sphere across criteria through a module-scoped
context; the full module matches `monoholo verify all` at default
configuration (grid 40, threshold 1e-3, mass 1).
"""

import pytest

from monoholo.config import RunConfig
from monoholo.verify import ACCEPTANCE, VerifyContext

_BY_ID = {cid: (title, fn) for cid, title, fn in ACCEPTANCE}


@pytest.fixture(scope="module")
def ctx():
    return VerifyContext(RunConfig(workers=4))


def _run(ctx, cid):
    title, fn = _BY_ID[cid]
    passed, measured, tolerance, _ = fn(ctx)
    line = "PASS" if passed else "FAIL"
    print(f"[{line}] {cid} {title}: {measured} (tolerance {tolerance})")
    assert passed, f"{cid} {title}: {measured} vs {tolerance}"


def test_a01_trivial_field_exactness(ctx):
    _run(ctx, "A1")


def test_a02_integration_soundness(ctx):
    _run(ctx, "A2")


def test_a03_builtin_solution_validity(ctx):
    _run(ctx, "A3")


def test_a04_strict_bound(ctx):
    _run(ctx, "A4")


def test_a05_coalescence(ctx):
    _run(ctx, "A5")


def test_a06_gauge_invariance(ctx):
    _run(ctx, "A6")


def test_a07_spectral_curve(ctx):
    _run(ctx, "A7")


def test_a08_holography_consistency(ctx):
    _run(ctx, "A8")


def test_a09_boundary_connection(ctx):
    _run(ctx, "A9")


def test_a10_linear_algebra_identities(ctx):
    _run(ctx, "A10")


def test_a11_discrete_nahm_solve(ctx):
    _run(ctx, "A11")


def test_a12_four_point_reconstruction(ctx):
    _run(ctx, "A12")


def test_a13_positivity_gram_rank(ctx):
    _run(ctx, "A13")
