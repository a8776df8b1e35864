"""Boundary-integral solver for the 2D clamped-plate (biharmonic
Dirichlet) problem on simply and multiply connected domains.

The plate problem is recast as a Stokes velocity problem for
u = grad_perp w and solved with a completed double-layer representation:
single plus double Stokes layers on the boundary, one logarithmic charge
per obstacle, and an additive constant.  The resulting second-kind
system is dense, square, and uniformly well conditioned under panel
refinement.

Typical use: build a :class:`~biharm2d.geometry.Domain` from curves,
sample boundary data with :func:`~biharm2d.assembly.build_dirichlet_data`,
solve with :func:`~biharm2d.assembly.solve_dirichlet`, and evaluate the
solution with :func:`~biharm2d.field_eval.eval_field` or
:func:`~biharm2d.field_eval.eval_grid`.  The :mod:`~biharm2d.driver`
module wraps the standard convergence, conditioning and Green's function
experiments; the ``biharm2d`` command line exposes them.
"""

from .assembly import (DirichletData, Solution, assemble_block_system,
                       assemble_farkas, build_dirichlet_data, scale_system,
                       solve_dirichlet)
from .field_eval import (FieldGrid, eval_field, eval_gradient, eval_grid,
                         eval_laplacian, grid_targets)
from .geometry import (BoundaryComponent, CurveParam, Domain, make_circle,
                       make_rounded_rectangle, winding_number)
from .linalg import condition_number
from .rng import SplitMix64

__all__ = [
    "BoundaryComponent",
    "CurveParam",
    "DirichletData",
    "Domain",
    "FieldGrid",
    "Solution",
    "SplitMix64",
    "assemble_block_system",
    "assemble_farkas",
    "build_dirichlet_data",
    "condition_number",
    "eval_field",
    "eval_gradient",
    "eval_grid",
    "eval_laplacian",
    "grid_targets",
    "make_circle",
    "make_rounded_rectangle",
    "scale_system",
    "solve_dirichlet",
    "winding_number",
]

__version__ = "0.1.0"
