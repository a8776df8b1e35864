"""Panel quadrature rules: Gauss-Legendre, a moment-fitted rule for
kernels with logarithmic singularities, and spectral differentiation on
panel nodes.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from numpy.polynomial import legendre as npleg


@dataclass(frozen=True)
class QuadRule:
    """Nodes/weights on the reference interval (-1, 1)."""

    nodes: np.ndarray
    weights: np.ndarray
    order: int


@dataclass(frozen=True)
class SingularRule:
    """Replacement weights for integrating f(t)*log|t - t0| + g(t) against
    values sampled at the rule's nodes."""

    nodes: np.ndarray
    weights: np.ndarray
    target: float


def gauss_legendre(n: int) -> QuadRule:
    if not 1 <= n <= 64:
        raise ValueError(f"gauss_legendre: n={n} outside [1, 64]")
    x, w = npleg.leggauss(n)
    return QuadRule(nodes=x, weights=w, order=n)


@lru_cache(maxsize=16)
def _gl(n: int):
    x, w = npleg.leggauss(n)
    return x, w


def legendre_vandermonde(t: np.ndarray, deg: int) -> np.ndarray:
    return npleg.legvander(np.asarray(t, dtype=float), deg)


@lru_cache(maxsize=16)
def _coeff_matrix(n: int) -> np.ndarray:
    """Map values at the n Gauss-Legendre nodes to Legendre coefficients."""
    x, _ = _gl(n)
    return np.linalg.inv(npleg.legvander(x, n - 1))


def interp_matrix(n: int, t_new: np.ndarray) -> np.ndarray:
    """Interpolation matrix from the n GL nodes to arbitrary points t_new."""
    return npleg.legvander(np.asarray(t_new, dtype=float), n - 1) @ _coeff_matrix(n)


@lru_cache(maxsize=16)
def _diff_matrix(n: int) -> np.ndarray:
    """Spectral differentiation matrix on the n GL nodes (reference coords)."""
    x, _ = _gl(n)
    C = _coeff_matrix(n)
    # rows of the derivative Vandermonde
    Vd = np.zeros((n, n))
    for k in range(n):
        c = np.zeros(n)
        c[k] = 1.0
        Vd[:, k] = npleg.legval(x, npleg.legder(c))
    return Vd @ C


def panel_diff(values: np.ndarray, speeds: np.ndarray, jac: float) -> np.ndarray:
    """Differentiate node samples of a smooth function with respect to
    arclength on one panel.

    values, speeds sampled at the panel's n GL nodes; jac = (t_hi-t_lo)/2.
    """
    n = len(values)
    return (_diff_matrix(n) @ values) / (jac * speeds)


def legendre_q(t0: float, kmax: int) -> np.ndarray:
    """Legendre functions of the second kind Q_0..Q_kmax at t0.

    Inside (-1,1) these are the principal-value branch; outside, the
    standard decaying solution (computed by backward recurrence, which is
    the stable direction there).
    """
    if abs(t0) >= 1.0:
        raise ValueError("legendre_q: forward recurrence only stable inside (-1,1)")
    q = np.empty(kmax + 1)
    q[0] = 0.5 * np.log((1.0 + t0) / (1.0 - t0))
    if kmax >= 1:
        q[1] = t0 * q[0] - 1.0
    for k in range(1, kmax):
        q[k + 1] = ((2 * k + 1) * t0 * q[k] - k * q[k - 1]) / (k + 1)
    return q


def log_moments(t0: float, kmax: int) -> np.ndarray:
    """m_k = int_{-1}^1 P_k(t) log|t - t0| dt for k = 0..kmax.

    Valid for t0 inside the interval (integrable singularity, Legendre-Q
    recurrence) and outside (nearly singular, composite quadrature refined
    toward the close endpoint).
    """
    if abs(t0) >= 1.0:
        return _log_moments_outside(t0, kmax)
    q = legendre_q(t0, kmax + 1)
    m = np.empty(kmax + 1)
    om = 1.0 - t0
    op = 1.0 + t0
    m[0] = (om * np.log(abs(om)) if om != 0 else 0.0) + (
        op * np.log(abs(op)) if op != 0 else 0.0
    ) - 2.0
    for k in range(1, kmax + 1):
        m[k] = 2.0 * (q[k + 1] - q[k - 1]) / (2 * k + 1)
    return m


def _log_moments_outside(t0: float, kmax: int) -> np.ndarray:
    """Nearly singular moments, |t0| >= 1: the integrand is analytic on
    [-1,1], so a composite grid refined toward the close endpoint converges
    geometrically regardless of how small |t0| - 1 is."""
    delta = abs(t0) - 1.0
    if delta == 0.0:
        # int P_k(t) log(1 -+ t) dt = -2/(k(k+1)), k >= 1
        k = np.arange(1, kmax + 1)
        m = np.empty(kmax + 1)
        m[0] = 2.0 * np.log(2.0) - 2.0
        m[1:] = -2.0 / (k * (k + 1))
        if t0 < 0:
            m[1::2] *= -1.0
        return m
    levels = int(np.clip(np.ceil(-np.log2(delta)), 2, 48)) + 3
    t, w = dyadic_refined_nodes(24, levels, toward=1 if t0 > 0 else -1)
    V = npleg.legvander(t, kmax)
    return (w * np.log(np.abs(t - t0))) @ V


@lru_cache(maxsize=16)
def _self_log_weight_table(n: int) -> np.ndarray:
    """Row i: weights v such that sum_j v[j] f(x_j) = int_{-1}^1 f(t)
    log|t - x_i| dt exactly for polynomials f of degree <= n-1, where x_j
    are the n GL nodes."""
    x, _ = _gl(n)
    C = _coeff_matrix(n)
    W = np.empty((n, n))
    for i, t0 in enumerate(x):
        W[i] = log_moments(t0, n - 1) @ C
    return W


def log_weights(n: int, t0: float) -> np.ndarray:
    """Weights on the n GL nodes integrating f(t) log|t - t0| over [-1,1]
    exactly for f of degree <= n-1; t0 may lie inside or outside."""
    return log_moments(t0, n - 1) @ _coeff_matrix(n)


def log_singular_weights(n: int, target_node: int) -> SingularRule:
    """Self-panel rule for a target at GL node `target_node`: weights on the
    panel's own nodes exact for f(t) log|t-t0| with f of degree <= n-1."""
    x, _ = _gl(n)
    t0 = x[target_node]
    return SingularRule(nodes=x, weights=_self_log_weight_table(n)[target_node], target=t0)


def fit_log_rule(t0: float, degree: int, n_nodes: int) -> SingularRule:
    """Build a rule on n_nodes GL points exact (least-squares / min-norm)
    for {P_k, P_k log|t-t0|}, k <= degree.  Used where exactness beyond the
    panel order is wanted."""
    x, _ = _gl(n_nodes)
    nb = degree + 1
    A = np.empty((2 * nb, n_nodes))
    b = np.empty(2 * nb)
    V = npleg.legvander(x, degree)
    A[:nb] = V.T
    b[:nb] = 0.0
    b[0] = 2.0
    lg = np.log(np.abs(x - t0))
    A[nb:] = (V * lg[:, None]).T
    b[nb:] = log_moments(t0, degree)
    w, *_ = np.linalg.lstsq(A, b, rcond=None)
    return SingularRule(nodes=x, weights=w, target=t0)


NODES_PER_PANEL = 16
_ADJACENT_LEVELS = 14


@lru_cache(maxsize=8)
def _adjacent_grid(n: int, toward: int):
    """Fine composite grid on a source panel refined toward the edge it
    shares with the target's panel, plus the node->grid interpolation."""
    t, w = dyadic_refined_nodes(24, _ADJACENT_LEVELS, toward)
    return t, w, interp_matrix(n, t)


def log_potential_matrix(domain) -> np.ndarray:
    """Dense N x N matrix L with (L f)_i ≈ ∫_Γ log|x_i − y| f(y) dS(y) for
    smooth f sampled at the nodes, with targets at the nodes themselves.

    Far panels use the plain Gauss-Legendre rule; the target's own panel
    uses the moment-fitted log rule plus a smooth remainder; panels sharing
    an edge with the target's panel are integrated on a dyadically refined
    grid (the integrand is analytic there but nearly singular).
    """
    pts = domain.all_nodes()
    wts = domain.all_weights()
    d = pts[:, None, :] - pts[None, :, :]
    r2 = np.einsum("ijk,ijk->ij", d, d)
    np.fill_diagonal(r2, 1.0)
    L = 0.5 * np.log(r2) * wts[None, :]
    for comp, sl in zip(domain.components, domain.component_slices()):
        _component_log_corrections(comp, L, sl.start)
    return L


def _component_log_corrections(comp, L: np.ndarray, offset: int) -> None:
    npan = comp.n_panels
    n = comp.nodes.shape[0] // npan
    tref, glw = _gl(n)
    table = _self_log_weight_table(n)
    for p, panel in enumerate(comp.panels):
        rows = slice(offset + p * n, offset + (p + 1) * n)
        x = comp.nodes[p * n:(p + 1) * n]
        s = comp.speeds[p * n:(p + 1) * n]
        jac = panel.jac
        # self panel: log|x_i - y(t)| = log|t - t_i| + smooth remainder
        dist = np.linalg.norm(x[:, None, :] - x[None, :, :], axis=-1)
        dt = np.abs(tref[:, None] - tref[None, :])
        np.fill_diagonal(dist, 1.0)
        np.fill_diagonal(dt, 1.0)
        g = np.log(dist / dt)
        np.fill_diagonal(g, np.log(s * jac))
        L[rows, rows] = (table + glw[None, :] * g) * (s * jac)[None, :]
        # panels sharing an edge with panel p
        for q, toward in (((p - 1) % npan, 1), ((p + 1) % npan, -1)):
            pq = comp.panels[q]
            tq, wq, P = _adjacent_grid(n, toward)
            params = 0.5 * (pq.t_hi + pq.t_lo) + pq.jac * tq
            y = comp.curve.position(params)
            sf = np.linalg.norm(comp.curve.velocity(params), axis=-1)
            dist = np.linalg.norm(x[:, None, :] - y[None, :, :], axis=-1)
            cols = slice(offset + q * n, offset + (q + 1) * n)
            L[rows, cols] = ((wq * sf)[None, :] * np.log(dist)) @ P * pq.jac
    return


def dyadic_refined_nodes(n: int, levels: int, toward: int):
    """Composite GL grid on [-1,1], dyadically refined toward an endpoint
    (toward=+1 or -1).  Returns (nodes, weights)."""
    x, w = _gl(n)
    brk = [0.0] + [1.0 - 0.5**m for m in range(1, levels)] + [1.0]
    nodes, wts = [], []
    for lo, hi in zip(brk[:-1], brk[1:]):
        jac = 0.5 * (hi - lo)
        mid = 0.5 * (hi + lo)
        nodes.append(mid + jac * x)
        wts.append(jac * w)
    nodes = np.concatenate(nodes)
    wts = np.concatenate(wts)
    if toward == 1:
        return 2.0 * nodes - 1.0, 2.0 * wts
    return 1.0 - 2.0 * nodes, 2.0 * wts
