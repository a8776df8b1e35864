"""Read-only figure generation for biharm2d CSV artifacts.

The solver ships its experiment results as documented CSV files with
JSON sidecars; this package renders them into the four figure kinds
(convergence decay, condition-vs-h comparison, potential/error heatmap,
Green's function heatmap).  It never imports the solver and never
mutates its outputs.
"""

from .figures import plot_condition, plot_convergence, plot_heatmap
from .schemas import (SchemaError, load_condition, load_convergence,
                      load_grid)

__all__ = [
    "SchemaError",
    "load_condition",
    "load_convergence",
    "load_grid",
    "plot_condition",
    "plot_convergence",
    "plot_heatmap",
]

__version__ = "0.1.0"
