"""Experiment orchestration: convergence studies, the condition-number
comparison, and the clamped-plate domain Green's function, with CSV/JSON
artifact output.

All experiment parameters default to the reference setups: a rounded
rectangular bar (a=1, b=0.5) for the simply connected studies and the
same bar with ten circular obstacles for the multiply connected ones.
Randomized offsets come from a seeded SplitMix64 stream in a documented
draw order, so identical configs produce identical artifacts.
"""

from __future__ import annotations

import csv
import json
from dataclasses import asdict, dataclass

import numpy as np

from . import kernels
from .assembly import (assemble_block_system, assemble_charge_columns,
                       assemble_farkas, assemble_velocity_block,
                       build_dirichlet_data, scale_system, solve_dirichlet)
from .field_eval import eval_field, eval_grid, eval_laplacian
from .geometry import (Domain, make_circle, make_rounded_rectangle,
                       winding_number)
from .linalg import condition_number
from .rng import SplitMix64

DEFAULT_SEED = 12345

#: panel ladders reproducing the published system sizes
SIMPLY_PANELS = (48, 72, 96, 144)
MULTI_PANELS = ((48, 4), (72, 6), (96, 8))
CONDITION_H = (0.2, 0.1, 0.05, 0.025)

_CIRCLE_RADIUS = 0.04
_CIRCLE_CENTERS = tuple((0.12 + i * 0.2, 0.15) for i in range(5)) + \
    tuple((0.08 + i * 0.2, 0.35) for i in range(5))


class ConfigError(ValueError):
    """Invalid or unreadable run configuration."""


@dataclass
class RunConfig:
    """Flat key-value configuration; defaults reproduce the reference
    experiments."""

    experiment: str = ""
    a: float = 1.0
    b: float = 0.5
    h: float = 0.05
    panels: int = 96
    circle_panels: int = 8
    seed: int = DEFAULT_SEED
    out_dir: str = "."
    grid_nx: int = 100
    grid_ny: int = 50

    @classmethod
    def from_file(cls, path: str) -> "RunConfig":
        try:
            with open(path, "r", encoding="utf-8") as fh:
                raw = json.load(fh)
        except OSError as exc:
            raise ConfigError(f"cannot read config: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config is not valid JSON: {exc}") from exc
        if not isinstance(raw, dict):
            raise ConfigError("config must be a JSON object")
        known = {f for f in cls.__dataclass_fields__}
        unknown = set(raw) - known
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        cfg = cls(**raw)
        cfg.validate()
        return cfg

    def validate(self) -> None:
        if self.a <= 0 or self.b <= 0:
            raise ConfigError("a and b must be positive")
        if not 0 < self.h < 0.5 * min(self.a, self.b):
            raise ConfigError("rounding parameter h out of range")
        if self.panels < 8:
            raise ConfigError("need at least 8 outer panels")
        if self.circle_panels < 1:
            raise ConfigError("need at least 1 panel per circle")
        if self.grid_nx < 2 or self.grid_ny < 2:
            raise ConfigError("grid must be at least 2x2")
        if not 0 <= int(self.seed) < 2 ** 64:
            raise ConfigError("seed must be a u64")


@dataclass
class ManufacturedSolution:
    """Superposition of biharmonic point sources w = sum q_j r_j^2 log r_j."""

    sources: np.ndarray
    strengths: np.ndarray
    targets: np.ndarray

    def w(self, pts: np.ndarray) -> np.ndarray:
        pts = np.atleast_2d(pts)
        return sum(q * kernels.charge_stream(pts, s)
                   for q, s in zip(self.strengths, self.sources))

    def grad(self, pts: np.ndarray) -> np.ndarray:
        pts = np.atleast_2d(pts)
        total = np.zeros_like(pts)
        for q, s in zip(self.strengths, self.sources):
            d = pts - s
            r2 = np.einsum("ni,ni->n", d, d)
            total += q * (np.log(r2) + 1.0)[:, None] * d
        return total


def simply_connected_domain(cfg: RunConfig, n_panels: int) -> Domain:
    return Domain(outer=make_rounded_rectangle(cfg.a, cfg.b, cfg.h, n_panels))


def multiply_connected_domain(n_outer: int, n_circle: int,
                              h: float = 0.05) -> Domain:
    outer = make_rounded_rectangle(1.0, 0.5, h, n_outer)
    holes = [make_circle(c, _CIRCLE_RADIUS, n_circle, orientation=-1)
             for c in _CIRCLE_CENTERS]
    return Domain(outer=outer, holes=holes,
                  charge_points=np.array(_CIRCLE_CENTERS))


def simply_connected_instance(cfg: RunConfig) -> ManufacturedSolution:
    """Four exterior sources and four interior targets.

    Draw order from the seeded stream: 8 source offsets d1..d8, then 4
    strengths q1..q4, then 8 target offsets d9..d16; offsets uniform in
    [-0.05, 0.05], strengths uniform in [0, 1].
    """
    rng = SplitMix64(cfg.seed)
    a, b = cfg.a, cfg.b
    ds = rng.uniforms(8, -0.05, 0.05)
    sources = np.array([
        (a + 0.2 + ds[0], b / 2 + ds[1]),
        (a / 2 + ds[2], b + 0.2 + ds[3]),
        (-0.2 + ds[4], b / 2 + ds[5]),
        (a / 2 + ds[6], -0.2 + ds[7]),
    ])
    q = np.array(rng.uniforms(4, 0.0, 1.0))
    dt = rng.uniforms(8, -0.05, 0.05)
    targets = np.array([
        (a / 4 + dt[0], b / 4 + dt[1]),
        (a / 4 + dt[2], 3 * b / 4 + dt[3]),
        (3 * a / 4 + dt[4], b / 4 + dt[5]),
        (3 * a / 4 + dt[6], 3 * b / 4 + dt[7]),
    ])
    return ManufacturedSolution(sources=sources, strengths=q, targets=targets)


def multiply_connected_instance(seed: int = DEFAULT_SEED):
    """Ten in-obstacle sources and twelve targets.

    Draw order: 20 source offsets (uniform in [-r0/2, r0/2]), then 10
    strengths (uniform in [0, 1]), then 24 target offsets.
    """
    rng = SplitMix64(seed)
    r0 = _CIRCLE_RADIUS
    ds = rng.uniforms(20, -0.5 * r0, 0.5 * r0)
    sources = np.array([(x + ds[2 * i], y + ds[2 * i + 1])
                        for i, (x, y) in enumerate(_CIRCLE_CENTERS)])
    q = np.array(rng.uniforms(10, 0.0, 1.0))
    dt = rng.uniforms(24, -0.5 * r0, 0.5 * r0)
    base = [(0.22 + i * 0.2, 0.05) for i in range(4)] + \
           [(0.22 + i * 0.2, 0.25) for i in range(4)] + \
           [(0.18 + i * 0.2, 0.45) for i in range(4)]
    targets = np.array([(x + dt[2 * i], y + dt[2 * i + 1])
                        for i, (x, y) in enumerate(base)])
    return ManufacturedSolution(sources=sources, strengths=q,
                                targets=targets)


def solve_manufactured(domain: Domain, instance: ManufacturedSolution):
    nrm = domain.all_normals()
    f = instance.w(domain.all_nodes())
    g = np.einsum("ni,ni->n", instance.grad(domain.all_nodes()), nrm)
    data = build_dirichlet_data(f, g, domain, grad_f=instance.grad)
    return solve_dirichlet(domain, data)


def relative_l2(computed: np.ndarray, reference: np.ndarray) -> float:
    return float(np.linalg.norm(computed - reference)
                 / np.linalg.norm(reference))


def run_convergence_simply_connected(cfg: RunConfig) -> list:
    """Rows (n_panels, n_d, system_size, eps) over the resolution ladder."""
    instance = simply_connected_instance(cfg)
    rows = []
    for n_panels in SIMPLY_PANELS:
        domain = simply_connected_domain(cfg, n_panels)
        _check_instance(domain, instance, hole_sources=False)
        sol = solve_manufactured(domain, instance)
        wc = eval_field(sol, instance.targets).w
        eps = relative_l2(wc, instance.w(instance.targets))
        rows.append((n_panels, domain.n_nodes, 2 * domain.n_nodes + 1, eps))
    return rows


def run_condition_study(cfg: RunConfig) -> list:
    """Rows (h, kappa_ours, kappa_farkas) with identical geometry and
    sqrt-w scaling for both formulations."""
    rows = []
    for h in CONDITION_H:
        outer = make_rounded_rectangle(cfg.a, cfg.b, h, cfg.panels)
        domain = Domain(outer=outer)
        ours = condition_number(
            scale_system(assemble_block_system(domain)).matrix)
        farkas = condition_number(
            scale_system(assemble_farkas(domain)).matrix)
        rows.append((h, ours, farkas))
    return rows


def run_convergence_multiply_connected(cfg: RunConfig) -> list:
    instance = multiply_connected_instance(cfg.seed)
    rows = []
    for n_outer, n_circle in MULTI_PANELS:
        domain = multiply_connected_domain(n_outer, n_circle, h=cfg.h)
        _check_instance(domain, instance, hole_sources=True)
        sol = solve_manufactured(domain, instance)
        wc = eval_field(sol, instance.targets).w
        eps = relative_l2(wc, instance.w(instance.targets))
        size = 2 * domain.n_nodes + domain.n_holes + 1
        rows.append((n_outer + 10 * n_circle, domain.n_nodes, size, eps))
    return rows


def greens_load_points(seed: int = DEFAULT_SEED) -> np.ndarray:
    """The twelve point loads: the convergence-study target locations."""
    return multiply_connected_instance(seed).targets


def solve_greens(domain: Domain, loads: np.ndarray):
    """Homogeneous correction for w = sum_j G^D(., t_j).

    Returns (solution for w_h, w_p evaluator).  The particular solution
    is w_p = sum_j G^B(., t_j) with G^B(x,y) = |x-y|^2 log|x-y| / (8 pi).
    """
    c8 = 1.0 / (8.0 * np.pi)

    def w_p(pts):
        pts = np.atleast_2d(pts)
        return c8 * sum(kernels.charge_stream(pts, t) for t in loads)

    def grad_p(pts):
        pts = np.atleast_2d(pts)
        total = np.zeros_like(pts)
        for t in loads:
            d = pts - t
            r2 = np.einsum("ni,ni->n", d, d)
            total += c8 * (np.log(r2) + 1.0)[:, None] * d
        return total

    nrm = domain.all_normals()
    f = -w_p(domain.all_nodes())
    g = -np.einsum("ni,ni->n", grad_p(domain.all_nodes()), nrm)
    data = build_dirichlet_data(f, g, domain,
                                grad_f=lambda p: -grad_p(p))
    return solve_dirichlet(domain, data), w_p


def hole_circulation(solution, k: int, radius: float = 2.0 * _CIRCLE_RADIUS,
                     n_theta: int = 64, fd_h: float = 1e-3) -> float:
    """Circulation of Delta u about obstacle k, as the outward flux of
    grad(Delta w) through a centered circle of the given radius.

    The contour is oriented so that a unit charge coefficient c_k gives
    +8 pi; charges at the other obstacles contribute zero.  The radial
    derivative of Delta w uses a fourth-order central difference.
    """
    zk = solution.domain.charge_points[k]
    theta = np.linspace(0.0, 2.0 * np.pi, n_theta, endpoint=False)
    dirs = np.column_stack([np.cos(theta), np.sin(theta)])
    radii = radius + fd_h * np.array([-2.0, -1.0, 1.0, 2.0])
    pts = (zk + radii[:, None, None] * dirs).reshape(-1, 2)
    lap = eval_laplacian(solution, pts).reshape(4, n_theta)
    dlap_dr = (lap[0] - 8.0 * lap[1] + 8.0 * lap[2] - lap[3]) / (12.0 * fd_h)
    return float(radius * (2.0 * np.pi / n_theta) * dlap_dr.sum())


def component_fluxes(solution) -> np.ndarray:
    """Net flux int_Gamma u.n dS of the represented velocity through each
    boundary component, from the interior-limit values at the nodes.

    All entries vanish for a single-valued stream function; entry 0 is
    the outer boundary and k+1 is obstacle k.
    """
    dom = solution.domain
    A = assemble_velocity_block(dom)
    B, _ = assemble_charge_columns(dom)
    u = (A @ solution.mu.ravel() + B @ solution.c).reshape(-1, 2)
    wts = dom.all_weights()
    un = wts * np.einsum("ni,ni->n", u, dom.all_normals())
    return np.array([un[sl].sum() for sl in dom.component_slices()])


def run_greens_function(cfg: RunConfig):
    """Grid of the multi-load domain Green's function; returns
    (FieldGrid, loads)."""
    domain = multiply_connected_domain(cfg.panels, cfg.circle_panels,
                                       h=cfg.h)
    loads = greens_load_points(cfg.seed)
    if not np.all(domain.contains(loads)):
        raise ConfigError("a load point is outside the fluid domain")
    sol, w_p = solve_greens(domain, loads)
    grid = eval_grid(sol, cfg.grid_nx, cfg.grid_ny)
    grid.w[grid.mask] += w_p(grid.targets[grid.mask])
    return grid, loads


def _check_instance(domain, instance, hole_sources: bool) -> None:
    if hole_sources:
        for k, s in enumerate(instance.sources):
            if winding_number(s, domain.holes[k]) == 0:
                raise ConfigError(f"source {k} lies outside its obstacle")
    elif np.any(domain.contains(instance.sources)):
        raise ConfigError("a manufactured source lies inside the domain")
    if not np.all(domain.contains(instance.targets)):
        raise ConfigError("a manufactured target is outside the domain")


# ---------------------------------------------------------------------------
# artifact output

def _sidecar(path: str, cfg: RunConfig, extra: dict | None = None) -> None:
    doc = {"config": asdict(cfg)}
    if extra:
        doc.update(extra)
    with open(path + ".json", "w", encoding="utf-8") as fh:
        json.dump(doc, fh, indent=2, sort_keys=True)
        fh.write("\n")


def write_convergence_csv(rows: list, path: str, cfg: RunConfig) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        out = csv.writer(fh)
        out.writerow(["n_panels", "n_d", "system_size", "eps"])
        for n_panels, n_d, size, eps in rows:
            out.writerow([n_panels, n_d, size, f"{eps:.16e}"])
    _sidecar(path, cfg)


def write_condition_csv(rows: list, path: str, cfg: RunConfig) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        out = csv.writer(fh)
        out.writerow(["h", "kappa_ours", "kappa_farkas"])
        for h, ours, farkas in rows:
            out.writerow([h, f"{ours:.16e}", f"{farkas:.16e}"])
    _sidecar(path, cfg)


def write_grid_csv(grid, path: str, cfg: RunConfig,
                   extra: dict | None = None) -> None:
    has_ref = grid.w_ref is not None
    with open(path, "w", encoding="utf-8", newline="") as fh:
        out = csv.writer(fh)
        header = ["x", "y", "inside", "w"]
        if has_ref:
            header += ["w_ref", "abs_err"]
        out.writerow(header)
        for i, (x, y) in enumerate(grid.targets):
            row = [f"{x:.16e}", f"{y:.16e}", int(grid.mask[i])]
            row.append("" if not grid.mask[i] else f"{grid.w[i]:.16e}")
            if has_ref:
                row.append("" if not grid.mask[i] else f"{grid.w_ref[i]:.16e}")
                row.append("" if not grid.mask[i]
                           else f"{grid.abs_err[i]:.16e}")
            out.writerow(row)
    meta = {"shape": list(grid.shape) if grid.shape else None,
            "extent": list(grid.extent) if grid.extent else None}
    if extra:
        meta.update(extra)
    _sidecar(path, cfg, meta)
