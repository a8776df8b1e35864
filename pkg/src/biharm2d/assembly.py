"""Dense block-system assembly for the completed-representation integral
equation, right-hand sides from Dirichlet data, the comparison system
built from Green's-function derivative kernels, and sqrt-weight scaling.

Unknown layout: per-node interleaved (mu1, mu2), then the charge/constant
coefficients c_0..c_N appended.  Constraint rows are appended after the
velocity rows.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from .kernels import complexify, mu_to_rho
from .linalg import factorize
from .quadrature import log_potential_matrix
from .stream_eval import (ConjugateSystem, boundary_tangential_derivative,
                          boundary_w_matrix, build_conjugate_system,
                          solve_conjugate)


@dataclass
class DirichletData:
    """Node samples of the boundary data and derived quantities.

    h is the velocity data of the equivalent Stokes problem: with
    u = grad_perp w one has u.n = dw/dtau and u.tau = -dw/dn, so
    h = f_tau n - g tau.
    """

    f: np.ndarray
    g: np.ndarray
    df_dtau: np.ndarray
    b: np.ndarray
    h: np.ndarray


@dataclass
class BlockSystem:
    """Dense system [[-1/2 I + K, B], [D, F]] of size 2 n_d + N + 1."""

    matrix: np.ndarray
    domain: object
    conjugate: ConjugateSystem
    n_density: int
    row_scale: np.ndarray | None = None
    col_scale: np.ndarray | None = None

    @property
    def size(self) -> int:
        return self.matrix.shape[0]


@dataclass
class FarkasSystem:
    """Dense 2 n_d system of the comparison formulation, including the
    explicit [[1/2, 0], [-kappa, 1/2]] diagonal blocks."""

    matrix: np.ndarray
    domain: object
    n_density: int
    row_scale: np.ndarray | None = None
    col_scale: np.ndarray | None = None


@dataclass
class Solution:
    """Solved densities and charge coefficients plus reusable state."""

    mu: np.ndarray
    c: np.ndarray
    sigma: np.ndarray
    domain: object
    conjugate: ConjugateSystem


def _samples(func_or_values, pts: np.ndarray) -> np.ndarray:
    if callable(func_or_values):
        return np.asarray(func_or_values(pts), dtype=float)
    return np.asarray(func_or_values, dtype=float)


def build_dirichlet_data(f, g, domain, grad_f=None) -> DirichletData:
    """Sample f, g at the nodes; f_tau analytically when grad_f is given,
    else by panelwise spectral differentiation; b_k by smooth quadrature."""
    pts = domain.all_nodes()
    wts = domain.all_weights()
    tau = domain.all_tangents()
    nrm = domain.all_normals()
    fv = _samples(f, pts)
    gv = _samples(g, pts)
    if grad_f is not None:
        ftau = np.einsum("ni,ni->n", np.asarray(grad_f(pts), dtype=float), tau)
    else:
        ftau = boundary_tangential_derivative(domain, fv)
    h = ftau[:, None] * nrm - gv[:, None] * tau
    b = np.array([np.sum(fv[sl] * wts[sl]) for sl in domain.component_slices()])
    return DirichletData(f=fv, g=gv, df_dtau=ftau, b=b, h=h)


def assemble_velocity_block(domain, L: np.ndarray | None = None) -> np.ndarray:
    """Nystrom matrix of -1/2 I + S + D^PV + W on interleaved unknowns."""
    if L is None:
        L = log_potential_matrix(domain)
    pts = domain.all_nodes()
    wts = domain.all_weights()
    tau = domain.all_tangents()
    nrm = domain.all_normals()
    kap = domain.all_curvature()
    N = len(wts)
    r = pts[:, None, :] - pts[None, :, :]
    r2 = np.einsum("ijk,ijk->ij", r, r)
    np.fill_diagonal(r2, 1.0)
    # Stokeslet smooth part r rT/|r|^2 and the stresslet DLP kernel are
    # smooth along the curve; plain rule + diagonal limits.
    smooth = np.einsum("ija,ijb->ijab", r, r) / r2[..., None, None]
    ii = np.arange(N)
    smooth[ii, ii] = np.einsum("na,nb->nab", tau, tau)
    smooth /= 4.0 * np.pi
    with np.errstate(divide="ignore", invalid="ignore"):
        M = kernels.stresslet_dlp_kernel(pts[:, None, :], pts[None, :, :],
                                         nrm[None, :, :])
    M[ii, ii] = kernels.dlp_diagonal_limit(tau, kap)
    T = (smooth + M) * wts[None, :, None, None]
    # Stokeslet log part via the singular quadrature weights
    T[..., 0, 0] -= L / (4.0 * np.pi)
    T[..., 1, 1] -= L / (4.0 * np.pi)
    # completion W: int mu dS broadcast
    T[..., 0, 0] += wts[None, :]
    T[..., 1, 1] += wts[None, :]
    # range completion n(x) int mu.n dS: removes the classical interior
    # deficiency (a normal-like density radiates zero velocity in D); the
    # added term vanishes at the solution because int h.n dS = 0
    T += np.einsum("ia,jb,j->ijab", nrm, nrm, wts)
    A = T.transpose(0, 2, 1, 3).reshape(2 * N, 2 * N)
    A[np.diag_indices_from(A)] -= 0.5
    return A


def assemble_charge_columns(domain) -> tuple:
    """B (2n_d x (N+1), first column zero for c_0) and F ((N+1) x (N+1))."""
    pts = domain.all_nodes()
    wts = domain.all_weights()
    slices = domain.component_slices()
    ncomp = len(slices)
    nch = len(domain.charge_points)
    B = np.zeros((2 * len(wts), nch + 1))
    for k, zk in enumerate(domain.charge_points):
        B[:, k + 1] = kernels.charge_velocity(pts, zk).ravel()
    F = np.zeros((ncomp, nch + 1))
    for k, sl in enumerate(slices):
        F[k, 0] = np.sum(wts[sl])
        for l, zl in enumerate(domain.charge_points):
            F[k, l + 1] = np.sum(kernels.charge_stream(pts[sl], zl) * wts[sl])
    return B, F


def assemble_constraint_rows(domain, conjugate: ConjugateSystem) -> np.ndarray:
    """Rows D_k mapping mu to int_{Gamma_k} w dS, via the boundary w matrix."""
    Ww = boundary_w_matrix(conjugate)
    wts = domain.all_weights()
    return np.stack([wts[sl] @ Ww[sl] for sl in domain.component_slices()])


def assemble_block_system(domain, L: np.ndarray | None = None,
                          conjugate: ConjugateSystem | None = None) -> BlockSystem:
    if L is None:
        L = log_potential_matrix(domain)
    if conjugate is None:
        conjugate = build_conjugate_system(domain, L)
    K = assemble_velocity_block(domain, L)
    B, F = assemble_charge_columns(domain)
    D = assemble_constraint_rows(domain, conjugate)
    n = K.shape[0]
    m = B.shape[1]
    A = np.empty((n + m, n + m))
    A[:n, :n] = K
    A[:n, n:] = B
    A[n:, :n] = D
    A[n:, n:] = F
    return BlockSystem(matrix=A, domain=domain, conjugate=conjugate,
                       n_density=n)


def block_rhs(system, data: DirichletData) -> np.ndarray:
    rhs = np.concatenate([data.h.ravel(), data.b])
    if system.row_scale is not None:
        rhs = rhs * system.row_scale
    return rhs


def assemble_farkas(domain) -> FarkasSystem:
    if domain.n_holes:
        raise ValueError("comparison system supports simply connected "
                         "domains only")
    pts = domain.all_nodes()
    wts = domain.all_weights()
    nrm = domain.all_normals()
    kap = domain.all_curvature()
    N = len(wts)
    with np.errstate(divide="ignore", invalid="ignore"):
        ker = kernels.farkas_kernels(pts[:, None, :], pts[None, :, :],
                                     nrm[:, None, :], nrm[None, :, :])
    dia = kernels.farkas_diagonal(kap)
    ii = np.arange(N)
    T = np.empty((N, 2, N, 2))
    for (a, b), name in {(0, 0): "K1", (0, 1): "K2",
                         (1, 0): "K21", (1, 1): "K22"}.items():
        km = ker[name]
        km[ii, ii] = dia[name]
        T[:, a, :, b] = km * wts[None, :]
    A = T.reshape(2 * N, 2 * N)
    A[np.diag_indices_from(A)] += 0.5
    A[2 * ii + 1, 2 * ii] -= kap
    return FarkasSystem(matrix=A, domain=domain, n_density=2 * N)


def scale_system(system):
    """sqrt-weight scaling of the density unknowns and matching rows, so
    the discrete spectrum approximates the operator on L2; any trailing
    non-density rows/columns are left unscaled."""
    n = system.n_density
    wts = system.domain.all_weights()
    s = np.repeat(np.sqrt(wts), 2)
    row = np.ones(system.matrix.shape[0])
    col = np.ones(system.matrix.shape[1])
    row[:n] = s
    col[:n] = 1.0 / s
    scaled = system.matrix * row[:, None] * col[None, :]
    kwargs = dict(matrix=scaled, domain=system.domain, n_density=n,
                  row_scale=row, col_scale=col)
    if isinstance(system, BlockSystem):
        return BlockSystem(conjugate=system.conjugate, **kwargs)
    return FarkasSystem(**kwargs)


def solve_dirichlet(domain, data: DirichletData,
                    system: BlockSystem | None = None) -> Solution:
    """Assemble (unless given), sqrt-w scale, solve by LU, unscale."""
    if system is None:
        system = scale_system(assemble_block_system(domain))
    x = factorize(system.matrix).solve(block_rhs(system, data))
    if system.col_scale is not None:
        x = x * system.col_scale
    n = system.n_density
    mu = x[:n].reshape(-1, 2)
    c = x[n:]
    sigma = solve_conjugate(mu_to_rho(mu), system.conjugate)
    return Solution(mu=mu, c=c, sigma=sigma, domain=domain,
                    conjugate=system.conjugate)
