import numpy as np
import pytest

from monoholo import backend
from monoholo.geom import BoundaryPoint, make_geodesic
from monoholo.scatter import SolverConfig, decaying_solution, pairing


@pytest.mark.skipif(not backend.HAVE_COMPILED, reason="extension not built")
def test_backends_agree(hedgehog):
    cfg = SolverConfig(workers=1)
    g = make_geodesic(BoundaryPoint(0.7 + 0.2j), BoundaryPoint(-0.9j), 16.0)
    vals = {}
    old = backend.ACTIVE
    try:
        for mode in ("compiled", "python"):
            backend.ACTIVE = mode
            s = decaying_solution(hedgehog, g, +1, cfg)
            r = decaying_solution(hedgehog, g, -1, cfg)
            vals[mode] = pairing(r, s)[0]
    finally:
        backend.ACTIVE = old
    assert abs(vals["compiled"] - vals["python"]) < 1e-8


@pytest.mark.skipif(not backend.HAVE_COMPILED, reason="extension not built")
def test_benchmark_harness(hedgehog):
    out = backend.benchmark(hedgehog, n_geodesics=2, T=12.0)
    assert "compiled" in out["per_solve_seconds"]
    assert "python" in out["per_solve_seconds"]
    assert out["max_pairing_diff"] < 1e-8


def test_callable_descriptor_path(abelian):
    # the generic path must match the closed form too
    cfg = SolverConfig(workers=1)
    g = make_geodesic(BoundaryPoint(0.0), BoundaryPoint(1.0), 12.0)

    class NoDescriptor:
        mass = abelian.mass
        charge = 0
        label = "wrapped"

        def eval(self, x):
            return abelian.eval(x)

        def kernel_descriptor(self):
            return None

    s = decaying_solution(NoDescriptor(), g, +1, cfg)
    r = decaying_solution(NoDescriptor(), g, -1, cfg)
    assert pairing(r, s)[0] == pytest.approx(1.0, abs=1e-8)
