"""Command-line entry point.

Subcommands
    solve               manufactured simply connected solve, JSON summary
    convergence-simply  resolution ladder -> convergence.csv
    condition-study     conditioning comparison -> condition.csv
    convergence-multi   multiply connected ladder -> convergence.csv
    greens              multi-load domain Green's function -> greens.csv
    eval-grid           manufactured solve + volume grid -> grid.csv

Exit codes: 0 success, 2 bad configuration, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from . import driver
from .driver import ConfigError, RunConfig
from .field_eval import eval_field, eval_grid


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="biharm2d",
        description="Boundary-integral solver for the clamped-plate "
                    "(biharmonic Dirichlet) problem.")
    sub = p.add_subparsers(dest="command", required=True)
    for name in ("solve", "convergence-simply", "condition-study",
                 "convergence-multi", "greens", "eval-grid"):
        sp = sub.add_parser(name)
        sp.add_argument("--config", help="JSON config file")
        sp.add_argument("--out", default=".", help="output directory")
        sp.add_argument("--seed", type=int, help="RNG seed (u64)")
        sp.add_argument("--panels", type=int,
                        help="outer-boundary panel count")
        sp.add_argument("--grid", help="NX,NY grid resolution")
    return p


def _config(args) -> RunConfig:
    cfg = RunConfig.from_file(args.config) if args.config else RunConfig()
    cfg.experiment = args.command
    if args.seed is not None:
        cfg.seed = args.seed
    if args.panels is not None:
        cfg.panels = args.panels
    if args.grid is not None:
        try:
            nx, ny = (int(v) for v in args.grid.split(","))
        except ValueError as exc:
            raise ConfigError("--grid expects NX,NY") from exc
        cfg.grid_nx, cfg.grid_ny = nx, ny
    if args.out:
        cfg.out_dir = args.out
    cfg.validate()
    os.makedirs(cfg.out_dir, exist_ok=True)
    return cfg


def _run(cfg: RunConfig) -> dict:
    out = lambda name: os.path.join(cfg.out_dir, name)
    if cfg.experiment == "solve":
        instance = driver.simply_connected_instance(cfg)
        domain = driver.simply_connected_domain(cfg, cfg.panels)
        sol = driver.solve_manufactured(domain, instance)
        wc = eval_field(sol, instance.targets).w
        eps = driver.relative_l2(wc, instance.w(instance.targets))
        return {"command": cfg.experiment, "n_d": domain.n_nodes,
                "system_size": 2 * domain.n_nodes + 1, "eps": eps}
    if cfg.experiment == "convergence-simply":
        rows = driver.run_convergence_simply_connected(cfg)
        driver.write_convergence_csv(rows, out("convergence.csv"), cfg)
        return {"command": cfg.experiment, "rows": len(rows),
                "eps_final": rows[-1][3], "out": out("convergence.csv")}
    if cfg.experiment == "condition-study":
        rows = driver.run_condition_study(cfg)
        driver.write_condition_csv(rows, out("condition.csv"), cfg)
        return {"command": cfg.experiment, "rows": len(rows),
                "out": out("condition.csv")}
    if cfg.experiment == "convergence-multi":
        rows = driver.run_convergence_multiply_connected(cfg)
        driver.write_convergence_csv(rows, out("convergence.csv"), cfg)
        return {"command": cfg.experiment, "rows": len(rows),
                "eps_final": rows[-1][3], "out": out("convergence.csv")}
    if cfg.experiment == "greens":
        grid, loads = driver.run_greens_function(cfg)
        driver.write_grid_csv(grid, out("greens.csv"), cfg,
                              extra={"loads": loads.tolist()})
        return {"command": cfg.experiment,
                "inside_points": int(grid.mask.sum()),
                "out": out("greens.csv")}
    if cfg.experiment == "eval-grid":
        instance = driver.simply_connected_instance(cfg)
        domain = driver.simply_connected_domain(cfg, cfg.panels)
        sol = driver.solve_manufactured(domain, instance)
        grid = eval_grid(sol, cfg.grid_nx, cfg.grid_ny,
                         reference=instance.w)
        driver.write_grid_csv(grid, out("grid.csv"), cfg)
        return {"command": cfg.experiment,
                "inside_points": int(grid.mask.sum()),
                "max_abs_err": float(np.nanmax(grid.abs_err)),
                "out": out("grid.csv")}
    raise ConfigError(f"unknown command {cfg.experiment!r}")


def cli_main(argv=None) -> int:
    try:
        args = _parser().parse_args(argv)
        cfg = _config(args)
        summary = _run(cfg)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except (FloatingPointError, np.linalg.LinAlgError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3
    print(json.dumps(summary, sort_keys=True))
    return 0


def main() -> None:
    raise SystemExit(cli_main())


if __name__ == "__main__":
    main()
