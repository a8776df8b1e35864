"""Solve one manufactured instance and tabulate the interior field.

The solver is fed only the boundary traces (w, dw/dn) of a known
superposition of exterior point sources; the grid CSV then carries the
computed field, the exact reference, and the pointwise error -- the raw
material for a potential / error heatmap.

Usage: python demos/potential_grid.py [out_dir]
"""

import sys

import numpy as np

from biharm2d.driver import (RunConfig, simply_connected_domain,
                             simply_connected_instance, solve_manufactured,
                             write_grid_csv)
from biharm2d.field_eval import eval_grid


def main():
    out = sys.argv[1] if len(sys.argv) > 1 else "."
    cfg = RunConfig()
    domain = simply_connected_domain(cfg, cfg.panels)
    instance = simply_connected_instance(cfg)
    solution = solve_manufactured(domain, instance)

    grid = eval_grid(solution, cfg.grid_nx, cfg.grid_ny,
                     reference=instance.w)
    err = grid.abs_err[grid.mask]
    print(f"{cfg.grid_nx} x {cfg.grid_ny} grid, "
          f"{int(grid.mask.sum())} interior points")
    print(f"max abs error {np.max(err):.3e}")

    path = f"{out}/grid.csv"
    write_grid_csv(grid, path, cfg)
    print(f"CSV artifact written to {path}")


if __name__ == "__main__":
    main()
