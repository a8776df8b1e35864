"""Panelized closed boundary curves: circles and Gaussian-rounded
rectangles, with per-node tangents, normals, curvature and arclength
weights.

Orientation convention: every component is traversed with the fluid
domain D on the left, so the outer boundary runs counterclockwise and
holes run clockwise.  The outward normal (out of D) is then always the
tangent rotated by -pi/2, n = (tau_2, -tau_1).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from scipy.special import erf, erfc

from .quadrature import _gl

SQRT2 = math.sqrt(2.0)
SQ2PI = math.sqrt(2.0 / math.pi)

NODES_PER_PANEL = 16


@dataclass(frozen=True)
class CurveParam:
    """Smooth closed parametric curve with analytic derivatives."""

    position: Callable[[np.ndarray], np.ndarray]
    velocity: Callable[[np.ndarray], np.ndarray]
    acceleration: Callable[[np.ndarray], np.ndarray]
    period: float


@dataclass(frozen=True)
class Panel:
    t_lo: float
    t_hi: float
    node_params: np.ndarray
    arclength_weights: np.ndarray

    @property
    def jac(self) -> float:
        return 0.5 * (self.t_hi - self.t_lo)


@dataclass(frozen=True)
class BoundaryComponent:
    curve: CurveParam
    orientation: int
    panels: list
    nodes: np.ndarray          # (n, 2)
    tangents: np.ndarray       # (n, 2) unit, direction of traversal
    normals: np.ndarray        # (n, 2) unit, out of the fluid domain
    curvature: np.ndarray      # (n,) signed
    weights: np.ndarray        # (n,) arclength weights
    speeds: np.ndarray         # (n,) |velocity| at nodes
    node_params: np.ndarray    # (n,)

    @property
    def n_nodes(self) -> int:
        return len(self.weights)

    @property
    def n_panels(self) -> int:
        return len(self.panels)

    @property
    def arclength(self) -> float:
        return float(np.sum(self.weights))


@dataclass(frozen=True)
class Domain:
    outer: BoundaryComponent
    holes: list = field(default_factory=list)
    charge_points: np.ndarray = None  # (N, 2), one per hole

    def __post_init__(self):
        cp = self.charge_points
        if cp is None:
            cp = np.zeros((len(self.holes), 2))
        cp = np.atleast_2d(np.asarray(cp, dtype=float)) if len(self.holes) else np.zeros((0, 2))
        object.__setattr__(self, "charge_points", cp)
        if len(self.holes) and len(cp) != len(self.holes):
            raise ValueError("one charge point per hole required")

    @property
    def components(self) -> list:
        return [self.outer] + list(self.holes)

    @property
    def n_holes(self) -> int:
        return len(self.holes)

    @property
    def n_nodes(self) -> int:
        return sum(c.n_nodes for c in self.components)

    def all_nodes(self) -> np.ndarray:
        return np.concatenate([c.nodes for c in self.components])

    def all_weights(self) -> np.ndarray:
        return np.concatenate([c.weights for c in self.components])

    def all_tangents(self) -> np.ndarray:
        return np.concatenate([c.tangents for c in self.components])

    def all_normals(self) -> np.ndarray:
        return np.concatenate([c.normals for c in self.components])

    def all_curvature(self) -> np.ndarray:
        return np.concatenate([c.curvature for c in self.components])

    def component_slices(self) -> list:
        out, start = [], 0
        for c in self.components:
            out.append(slice(start, start + c.n_nodes))
            start += c.n_nodes
        return out

    def contains(self, pts: np.ndarray) -> np.ndarray:
        """Inside-the-fluid mask via winding numbers.

        Points too close to a curve for a reliable winding number are
        treated as boundary points and excluded from the mask.
        """
        pts = np.atleast_2d(pts)
        mask = np.array([_inside(p, self.outer) is True for p in pts])
        for hole in self.holes:
            # hole traversed clockwise: winding -1 when p is in the hole
            mask &= np.array([_inside(p, hole) is False for p in pts])
        return mask


def _build_component(curve: CurveParam, breakpoints: np.ndarray,
                     orientation: int) -> BoundaryComponent:
    x16, w16 = _gl(NODES_PER_PANEL)
    panels = []
    t_all, w_all = [], []
    for lo, hi in zip(breakpoints[:-1], breakpoints[1:]):
        jac = 0.5 * (hi - lo)
        t = 0.5 * (hi + lo) + jac * x16
        sp = np.linalg.norm(curve.velocity(t), axis=-1)
        wts = w16 * jac * sp
        panels.append(Panel(t_lo=float(lo), t_hi=float(hi),
                            node_params=t, arclength_weights=wts))
        t_all.append(t)
        w_all.append(wts)
    t_all = np.concatenate(t_all)
    w_all = np.concatenate(w_all)
    pos = curve.position(t_all)
    vel = curve.velocity(t_all)
    acc = curve.acceleration(t_all)
    sp = np.linalg.norm(vel, axis=-1)
    tau = vel / sp[:, None]
    nrm = np.stack([tau[:, 1], -tau[:, 0]], axis=-1)
    kappa = (vel[:, 0] * acc[:, 1] - vel[:, 1] * acc[:, 0]) / sp**3
    return BoundaryComponent(curve=curve, orientation=orientation, panels=panels,
                             nodes=pos, tangents=tau, normals=nrm,
                             curvature=kappa, weights=w_all, speeds=sp,
                             node_params=t_all)


def make_circle(center, radius: float, n_panels: int,
                orientation: int = 1) -> BoundaryComponent:
    """Circle, counterclockwise for orientation=+1 (outer boundary) and
    clockwise for orientation=-1 (hole)."""
    if radius <= 0:
        raise ValueError("radius must be positive")
    if n_panels < 1:
        raise ValueError("need at least one panel")
    c = np.asarray(center, dtype=float)
    o = float(orientation)

    def pos(t):
        t = np.asarray(t, dtype=float)
        return c + radius * np.stack([np.cos(o * t), np.sin(o * t)], axis=-1)

    def vel(t):
        t = np.asarray(t, dtype=float)
        return radius * np.stack([-o * np.sin(o * t), o * np.cos(o * t)], axis=-1)

    def acc(t):
        t = np.asarray(t, dtype=float)
        return -radius * np.stack([np.cos(o * t), np.sin(o * t)], axis=-1)

    curve = CurveParam(position=pos, velocity=vel, acceleration=acc, period=2 * math.pi)
    brk = np.linspace(0.0, 2 * math.pi, n_panels + 1)
    return _build_component(curve, brk, orientation)


class _RoundedRectangle:
    """Counterclockwise rectangle with corners (0,0),(a,0),(a,b),(0,b),
    each right angle replaced by the profile obtained from Gaussian
    smoothing of the corner graph y = |t|:

        S(u) = u erf(u / (sqrt(2) h)) + h sqrt(2/pi) exp(-u^2 / (2 h^2)).

    The curve is the sharp rectangle (parametrized by its arclength) plus,
    for each corner, the deviation S(u)-|u| applied along the corner's
    inward bisector; the |u| kink cancels the polygon kink exactly, so the
    result is C^inf and closed for any h, including overlapping roundings.
    """

    def __init__(self, a, b, h):
        self.a, self.b, self.h = a, b, h
        self.L = 2.0 * (a + b)
        self.t_c = np.array([0.0, a, a + b, 2 * a + b])
        s = 1.0 / SQRT2
        self.v_hat = np.array([[s, s], [-s, s], [-s, -s], [s, -s]])
        self.corner_xy = np.array([[0, 0], [a, 0], [a, b], [0, b]], dtype=float)
        self.edge_dir = np.array([[1, 0], [0, 1], [-1, 0], [0, -1]], dtype=float)

    def _base(self, t):
        a, b = self.a, self.b
        t = np.mod(t, self.L)
        out = np.empty(t.shape + (2,))
        seg = np.searchsorted(self.t_c, t, side="right") - 1
        ds = t - self.t_c[seg]
        out = self.corner_xy[seg] + ds[..., None] * self.edge_dir[seg]
        return out, seg

    def _dev(self, t, order):
        """Sum over corners (and periodic images) of the smoothed-corner
        deviation and its derivatives, as (npts, 2) arrays."""
        h = self.h
        t = np.mod(np.asarray(t, dtype=float), self.L)
        val = np.zeros(t.shape + (2,))
        for ci in range(4):
            for m in (-1.0, 0.0, 1.0):
                u = (t - self.t_c[ci] + m * self.L) / SQRT2
                au = np.abs(u)
                g = np.exp(-u * u / (2 * h * h))
                if order == 0:
                    d = -au * erfc(au / (SQRT2 * h)) + h * SQ2PI * g
                elif order == 1:
                    d = -np.sign(u) * erfc(au / (SQRT2 * h)) / SQRT2
                else:
                    d = SQ2PI / h * g / 2.0
                val += d[..., None] * self.v_hat[ci]
        return val

    def position(self, t):
        t = np.asarray(t, dtype=float)
        base, _ = self._base(t)
        return base + self._dev(t, 0)

    def velocity(self, t):
        t = np.asarray(t, dtype=float)
        _, seg = self._base(t)
        return self.edge_dir[seg] + self._dev(t, 1)

    def acceleration(self, t):
        return self._dev(np.asarray(t, dtype=float), 2)


def _corner_refined_breakpoints(rect: _RoundedRectangle, n_panels: int,
                                strength: float = 3.0) -> np.ndarray:
    """Panel breakpoints as equal-mass quantiles of a mesh density that
    concentrates panels near the rounded corners."""
    h, L = rect.h, rect.L
    sig = 2.0 * h
    tf = np.linspace(0.0, L, 200 * n_panels + 1)
    dens = np.ones_like(tf)
    for tc in rect.t_c:
        for m in (-1.0, 0.0, 1.0):
            u = (tf - tc + m * L) / SQRT2
            dens += strength * np.exp(-u * u / (2 * sig * sig))
    cum = np.concatenate([[0.0], np.cumsum(0.5 * (dens[1:] + dens[:-1]) * np.diff(tf))])
    targets = np.linspace(0.0, cum[-1], n_panels + 1)
    brk = np.interp(targets, cum, tf)
    brk[0], brk[-1] = 0.0, L
    return brk


def make_rounded_rectangle(a: float, b: float, h: float,
                           n_panels: int) -> BoundaryComponent:
    """Rounded rectangle with vertices (0,0),(a,0),(a,b),(0,b), corners
    smoothed at scale h, counterclockwise, with panels refined toward the
    corners."""
    if a <= 0 or b <= 0:
        raise ValueError("side lengths must be positive")
    if h <= 0:
        raise ValueError("rounding parameter must be positive")
    if h * SQ2PI >= 0.5 * min(a, b):
        raise ValueError("rounding parameter too large: corners overlap")
    if n_panels < 8:
        raise ValueError("need at least 8 panels (two per corner region)")
    rect = _RoundedRectangle(a, b, h)
    curve = CurveParam(position=rect.position, velocity=rect.velocity,
                       acceleration=rect.acceleration, period=rect.L)
    brk = _corner_refined_breakpoints(rect, n_panels)
    return _build_component(curve, brk, +1)


def _inside(p, comp: BoundaryComponent):
    """Is p enclosed by the component?  Returns True/False, or None when
    p is within winding-number tolerance of the curve (treated as
    boundary, i.e. not a usable interior target)."""
    try:
        return winding_number(p, comp) != 0
    except ValueError:
        return None


def winding_number(p, comp: BoundaryComponent) -> int:
    """Winding number of the component about p, by quadrature of
    d(arg(xi - p)) over the discretized curve."""
    p = np.asarray(p, dtype=float)
    d = comp.nodes - p
    r2 = np.einsum("ij,ij->i", d, d)
    j = int(np.argmin(r2))
    dist = math.sqrt(r2[j])
    # unreliable once p is within about one node spacing of the curve
    if dist < 1.5 * comp.weights[j]:
        raise ValueError("point too close to the curve for winding number")
    tau = comp.tangents
    integrand = (d[:, 0] * tau[:, 1] - d[:, 1] * tau[:, 0]) / r2
    wn = np.sum(integrand * comp.weights) / (2 * math.pi)
    wn_round = int(round(wn))
    if abs(wn - wn_round) > 0.45:
        # quadrature too crude (point rather close): refine by brute force
        t_fine = np.linspace(0.0, comp.curve.period, 200 * comp.n_nodes, endpoint=False)
        pos = comp.curve.position(t_fine)
        ang = np.unwrap(np.arctan2(pos[:, 1] - p[1], pos[:, 0] - p[0]))
        total = ang[-1] - ang[0] + (ang[1] - ang[0])
        wn_round = int(round(total / (2 * math.pi)))
    return wn_round
