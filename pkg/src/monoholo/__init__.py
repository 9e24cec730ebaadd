"""Boundary n-point functions of hyperbolic monopoles.

Scattering along geodesics of the ball model produces the boundary
n-point functions; from them the spectral curve, the boundary connection,
and a finite-dimensional trace representation by projections onto a
holomorphic sphere are extracted and cross-checked.  Half-integer-mass
boundary data also arrives through the discrete Nahm system and its monad.
"""

from .backend import ACTIVE as active_backend
from .field import abelian_field, bogomolny_residual, gauge_transform, hedgehog_field
from .geom import BoundaryPoint, BulkPoint, antipode, geodesic_point, make_geodesic
from .npoint import NPointValue, PointTuple, gram_matrix, n_point, two_point
from .scatter import ScatterSolution, SolverConfig, boundary_limit, decaying_solution, pairing

__version__ = "0.1.0"

__all__ = [
    "BoundaryPoint",
    "BulkPoint",
    "NPointValue",
    "PointTuple",
    "ScatterSolution",
    "SolverConfig",
    "abelian_field",
    "active_backend",
    "antipode",
    "bogomolny_residual",
    "boundary_limit",
    "decaying_solution",
    "gauge_transform",
    "geodesic_point",
    "gram_matrix",
    "hedgehog_field",
    "make_geodesic",
    "n_point",
    "pairing",
    "two_point",
]
