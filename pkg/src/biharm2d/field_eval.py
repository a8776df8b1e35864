"""Interior evaluation of solved potentials on targets and grids.

Far targets reuse the plain smooth rules of ``stream_eval``.  Targets
within a few panel lengths of the boundary are handled by adaptive
dyadic subdivision of the nearby source panels: the density is
interpolated from the panel's Gauss-Legendre nodes (it is smooth there)
and the panel contribution is re-integrated on successively bisected
sub-intervals until the value settles.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from .kernels import complexify, mu_to_rho, muskhelishvili_gradient
from .quadrature import NODES_PER_PANEL, gauss_legendre, interp_matrix
from .stream_eval import eval_w_total

NEAR_FACTOR = 2.5
_MAX_DEPTH = 42


@dataclass
class FieldGrid:
    """Field values at a set of targets (optionally a structured grid)."""

    targets: np.ndarray
    mask: np.ndarray
    w: np.ndarray
    w_ref: np.ndarray | None = None
    abs_err: np.ndarray | None = None
    shape: tuple | None = None
    extent: tuple | None = None


@dataclass
class _PanelSample:
    """Source nodes of one (possibly subdivided) panel piece."""

    pts: np.ndarray
    wts: np.ndarray
    tans: np.ndarray
    rho: np.ndarray
    sigma: np.ndarray


def _w_contrib(target: np.ndarray, s: _PanelSample) -> float:
    """w_S + w_D1 + v1 contribution of the given source nodes."""
    t = target[None, :]
    _, ws = kernels.goursat_slp(t, s.rho, s.pts, s.wts)
    _, wd1 = kernels.goursat_dlp(t, s.rho, s.pts, s.wts, s.tans)
    d = t[:, None, :] - s.pts[None, :, :]
    lg = 0.5 * np.log(np.einsum("ijk,ijk->ij", d, d))
    v1 = -(lg @ (s.sigma * s.wts)) / (2.0 * np.pi)
    return float(ws[0] + wd1[0] + v1[0])


def _grad_contrib(target: np.ndarray, s: _PanelSample) -> np.ndarray:
    """(w_x, w_y) contribution of the given source nodes.

    The Goursat pair of the double layer already carries the derivative
    of the log term, so no conjugate density is needed here.
    """
    t = target[None, :]
    gs, _ = kernels.goursat_slp(t, s.rho, s.pts, s.wts)
    gd, _ = kernels.goursat_dlp(t, s.rho, s.pts, s.wts, s.tans)
    return muskhelishvili_gradient(gs + gd, complexify(t))[0]


def _lap_contrib(target: np.ndarray, s: _PanelSample) -> float:
    """Laplacian contribution 4 Re phi' of the given source nodes."""
    t = target[None, :]
    gs, _ = kernels.goursat_slp(t, s.rho, s.pts, s.wts)
    gd, _ = kernels.goursat_dlp(t, s.rho, s.pts, s.wts, s.tans)
    return float(4.0 * (gs.dphi + gd.dphi).real[0])


class _PanelRefiner:
    """Adaptive re-integration of one panel against one target."""

    def __init__(self, comp, panel, rho_panel, sigma_panel, contrib, tol):
        self.curve = comp.curve
        self.t_lo = panel.t_lo
        self.t_hi = panel.t_hi
        self.rho = rho_panel
        self.sigma = sigma_panel
        self.contrib = contrib
        self.tol = tol
        self.rule = gauss_legendre(NODES_PER_PANEL)

    def sample(self, a: float, b: float) -> _PanelSample:
        jac = 0.5 * (b - a)
        t = 0.5 * (a + b) + jac * self.rule.nodes
        pos = self.curve.position(t)
        vel = self.curve.velocity(t)
        speed = np.hypot(vel[:, 0], vel[:, 1])
        # reference coordinate within the original panel
        u = (2.0 * t - (self.t_lo + self.t_hi)) / (self.t_hi - self.t_lo)
        P = interp_matrix(NODES_PER_PANEL, u)
        return _PanelSample(pts=pos, wts=self.rule.weights * speed * jac,
                           tans=vel / speed[:, None], rho=P @ self.rho,
                           sigma=P @ self.sigma)

    def refined(self, target: np.ndarray):
        a, b = self.t_lo, self.t_hi
        v0 = self.contrib(target, self.sample(a, b))
        return v0, self._recurse(target, a, b, v0, 0)

    @staticmethod
    def _near(target, s: _PanelSample) -> bool:
        d = s.pts - target
        return (np.min(np.hypot(d[:, 0], d[:, 1]))
                < NEAR_FACTOR * np.sum(s.wts))

    def _recurse(self, target, a, b, v0, depth):
        m = 0.5 * (a + b)
        sl, sr = self.sample(a, m), self.sample(m, b)
        vl, vr = self.contrib(target, sl), self.contrib(target, sr)
        if depth >= _MAX_DEPTH:
            return vl + vr
        if np.max(np.abs((vl + vr) - v0)) < self.tol:
            # the bisection difference can cancel accidentally (e.g. for
            # targets on a node's normal line), so halves the target is
            # still close to are refined regardless of the value test
            total = 0.0
            for lo, hi, v, s in ((a, m, vl, sl), (m, b, vr, sr)):
                total += (self._recurse(target, lo, hi, v, depth + 1)
                          if self._near(target, s) else v)
            return total
        return (self._recurse(target, a, m, vl, depth + 1)
                + self._recurse(target, m, b, vr, depth + 1))


def _near_pairs(domain, targets: np.ndarray):
    """(target index, component, panel, node slice) for close encounters."""
    pairs = []
    offset = 0
    for comp in domain.components:
        n = NODES_PER_PANEL
        for p, panel in enumerate(comp.panels):
            sl = slice(offset + p * n, offset + (p + 1) * n)
            pts = comp.nodes[sl.start - offset:sl.stop - offset]
            plen = np.sum(panel.arclength_weights)
            d = targets[:, None, :] - pts[None, :, :]
            dist = np.sqrt(np.einsum("ijk,ijk->ij", d, d)).min(axis=1)
            for i in np.nonzero(dist < NEAR_FACTOR * plen)[0]:
                pairs.append((int(i), comp, panel, sl))
        offset += comp.n_nodes
    return pairs


def _near_corrections(solution, targets, contrib, values, tol):
    rho = mu_to_rho(solution.mu)
    sigma = solution.sigma
    for i, comp, panel, sl in _near_pairs(solution.domain, targets):
        ref = _PanelRefiner(comp, panel, rho[sl], sigma[sl], contrib, tol)
        coarse, fine = ref.refined(targets[i])
        values[i] += fine - coarse
    return values


def eval_field(solution, targets, reference=None, tol: float = 1e-10,
               classify: bool = False) -> FieldGrid:
    """Evaluate w at interior targets with near-boundary refinement.

    ``reference`` (callable or samples) attaches w_ref and pointwise
    errors; ``classify`` computes the inside mask by winding numbers
    (otherwise all targets are assumed interior).
    """
    targets = np.atleast_2d(np.asarray(targets, dtype=float))
    mask = (solution.domain.contains(targets) if classify
            else np.ones(len(targets), dtype=bool))
    w = np.full(len(targets), np.nan)
    inside = targets[mask]
    vals = eval_w_total(solution.mu, solution.c, inside, solution.domain,
                        sigma=solution.sigma).w
    vals = _near_corrections(solution, inside, _w_contrib, vals, tol)
    w[mask] = vals
    w_ref = abs_err = None
    if reference is not None:
        w_ref = np.full(len(targets), np.nan)
        w_ref[mask] = (reference(inside) if callable(reference)
                       else np.asarray(reference, dtype=float)[mask])
        abs_err = np.abs(w - w_ref)
    return FieldGrid(targets=targets, mask=mask, w=w, w_ref=w_ref,
                     abs_err=abs_err)


def eval_gradient(solution, targets, tol: float = 1e-10) -> np.ndarray:
    """(w_x, w_y) at interior targets, from the Goursat pair plus the
    completion and charge terms."""
    targets = np.atleast_2d(np.asarray(targets, dtype=float))
    dom = solution.domain
    rho = mu_to_rho(solution.mu)
    wts = dom.all_weights()
    gs, _ = kernels.goursat_slp(targets, rho, dom.all_nodes(), wts)
    gd, _ = kernels.goursat_dlp(targets, rho, dom.all_nodes(), wts,
                                dom.all_tangents())
    grad = muskhelishvili_gradient(gs + gd, complexify(targets))
    beta = np.sum(rho * wts)
    grad = grad + np.array([beta.real, beta.imag])
    for k, zk in enumerate(dom.charge_points):
        d = targets - zk
        r2 = np.einsum("ni,ni->n", d, d)
        grad = grad + solution.c[k + 1] * (np.log(r2) + 1.0)[:, None] * d
    return _near_corrections(solution, targets, _grad_contrib, grad, tol)


def eval_laplacian(solution, targets, tol: float = 1e-10) -> np.ndarray:
    """Delta w at interior targets: 4 Re phi' plus the charge terms."""
    targets = np.atleast_2d(np.asarray(targets, dtype=float))
    dom = solution.domain
    rho = mu_to_rho(solution.mu)
    wts = dom.all_weights()
    gs, _ = kernels.goursat_slp(targets, rho, dom.all_nodes(), wts)
    gd, _ = kernels.goursat_dlp(targets, rho, dom.all_nodes(), wts,
                                dom.all_tangents())
    lap = 4.0 * (gs.dphi + gd.dphi).real
    for k, zk in enumerate(dom.charge_points):
        d = targets - zk
        r2 = np.einsum("ni,ni->n", d, d)
        lap = lap + solution.c[k + 1] * (2.0 * np.log(r2) + 4.0)
    return _near_corrections(solution, targets, _lap_contrib, lap, tol)


def grid_targets(domain, nx: int, ny: int, margin: float = 0.0):
    """Regular grid covering the outer boundary's bounding box.

    Returns (targets, shape, extent) with targets in row-major (y outer)
    order.
    """
    pts = domain.outer.nodes
    x0, y0 = pts.min(axis=0) - margin
    x1, y1 = pts.max(axis=0) + margin
    xs = np.linspace(x0, x1, nx)
    ys = np.linspace(y0, y1, ny)
    X, Y = np.meshgrid(xs, ys)
    return (np.column_stack([X.ravel(), Y.ravel()]), (ny, nx),
            (x0, x1, y0, y1))


def eval_grid(solution, nx: int, ny: int, reference=None,
              tol: float = 1e-10) -> FieldGrid:
    """w on an nx-by-ny bounding-box grid, masked to the fluid interior."""
    targets, shape, extent = grid_targets(solution.domain, nx, ny)
    grid = eval_field(solution, targets, reference=reference, tol=tol,
                      classify=True)
    grid.shape = shape
    grid.extent = extent
    return grid
