"""Stream-function evaluation: the multivalued log term of the double
layer is recovered as the harmonic conjugate of a single-valued partner
(a Laplace Neumann solve), and total stream values w are composed from
the layer potentials, the completion term, and the biharmonic charges.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .kernels import RHO_SIGN, complexify, mu_to_rho
from .linalg import DenseFactorization, factorize
from .quadrature import _diff_matrix, log_potential_matrix, panel_diff


@dataclass
class ConjugateSystem:
    """Factored (1/2 I + K^L + W) Nystrom system on the boundary nodes,
    together with the shared log-potential matrix used for v2 and S^L."""

    domain: object
    L: np.ndarray
    matrix: np.ndarray
    fact: DenseFactorization


@dataclass
class StreamField:
    targets: np.ndarray
    w: np.ndarray
    conjugate_path: bool = True


def line_density(rho: np.ndarray, tangents: np.ndarray) -> np.ndarray:
    """Real density m with (rho-bar dxi + rho dxi-bar) = m dS."""
    tc = complexify(tangents)
    return 2.0 * (np.conj(rho) * tc).real


def eval_v2(targets: np.ndarray, rho: np.ndarray, domain) -> np.ndarray:
    """v2 = (1/4 pi) int (rho-bar dxi + rho dxi-bar) log|xi - z|, plain
    rule (targets off the boundary)."""
    m = line_density(rho, domain.all_tangents())
    d = np.asarray(targets, dtype=float)[:, None, :] - domain.all_nodes()[None, :, :]
    lg = 0.5 * np.log(np.einsum("ijk,ijk->ij", d, d))
    return lg @ (m * domain.all_weights()) / (4.0 * np.pi)


def eval_v2_boundary(rho: np.ndarray, system: ConjugateSystem) -> np.ndarray:
    m = line_density(rho, system.domain.all_tangents())
    return system.L @ m / (4.0 * np.pi)


def boundary_tangential_derivative(domain, values: np.ndarray) -> np.ndarray:
    """d/ds along the traversal direction, panelwise spectral."""
    out = np.empty_like(values)
    for comp, sl in zip(domain.components, domain.component_slices()):
        n = comp.nodes.shape[0] // comp.n_panels
        for p, panel in enumerate(comp.panels):
            rows = slice(sl.start + p * n, sl.start + (p + 1) * n)
            out[rows] = panel_diff(values[rows],
                                   comp.speeds[p * n:(p + 1) * n], panel.jac)
    return out


def tangential_derivative_matrix(domain) -> np.ndarray:
    """Block-diagonal matrix form of boundary_tangential_derivative."""
    N = domain.n_nodes
    T = np.zeros((N, N))
    for comp, sl in zip(domain.components, domain.component_slices()):
        n = comp.nodes.shape[0] // comp.n_panels
        for p, panel in enumerate(comp.panels):
            rows = slice(sl.start + p * n, sl.start + (p + 1) * n)
            s = comp.speeds[p * n:(p + 1) * n]
            T[rows, rows] = _diff_matrix(n) / (panel.jac * s[:, None])
    return T


def build_conjugate_system(domain, L: np.ndarray | None = None) -> ConjugateSystem:
    if L is None:
        L = log_potential_matrix(domain)
    pts = domain.all_nodes()
    wts = domain.all_weights()
    nrm = domain.all_normals()
    with np.errstate(divide="ignore", invalid="ignore"):
        K = kernels.laplace_kernels(pts[:, None, :], pts[None, :, :],
                                    nrm[:, None, :])["dlp_adjoint"]
    np.fill_diagonal(K, kernels.laplace_dlp_adjoint_diagonal(domain.all_curvature()))
    A = K * wts[None, :] + wts[None, :]          # K^L + W
    A[np.diag_indices_from(A)] += 0.5
    return ConjugateSystem(domain=domain, L=L, matrix=A, fact=factorize(A))


def solve_conjugate(rho: np.ndarray, system: ConjugateSystem) -> np.ndarray:
    """Density sigma with v1 = S^L sigma the harmonic conjugate (up to a
    constant) of v2; solves (1/2 I + K^L + W) sigma = -dv2/dtau."""
    v2 = eval_v2_boundary(rho, system)
    rhs = -boundary_tangential_derivative(system.domain, v2)
    return system.fact.solve(rhs)


def eval_slp_laplace(targets: np.ndarray, sigma: np.ndarray, domain) -> np.ndarray:
    """S^L sigma = -(1/2 pi) int log|x - y| sigma dS, plain rule."""
    d = np.asarray(targets, dtype=float)[:, None, :] - domain.all_nodes()[None, :, :]
    lg = 0.5 * np.log(np.einsum("ijk,ijk->ij", d, d))
    return -lg @ (sigma * domain.all_weights()) / (2.0 * np.pi)


def eval_w_total(mu: np.ndarray, c: np.ndarray, targets: np.ndarray, domain,
                 system: ConjugateSystem | None = None,
                 sigma: np.ndarray | None = None) -> StreamField:
    """w = w_S + (w_D first term + v1) + Re[conj(z) int rho dS] + c_0 +
    sum c_k r_k^2 log r_k, plain rules (targets off the boundary)."""
    targets = np.atleast_2d(np.asarray(targets, dtype=float))
    rho = mu_to_rho(mu)
    nodes, wts = domain.all_nodes(), domain.all_weights()
    _, ws = kernels.goursat_slp(targets, rho, nodes, wts)
    _, wd1 = kernels.goursat_dlp(targets, rho, nodes, wts, domain.all_tangents())
    if sigma is None:
        if system is None:
            system = build_conjugate_system(domain)
        sigma = solve_conjugate(rho, system)
    v1 = eval_slp_laplace(targets, sigma, domain)
    z = complexify(targets)
    w = ws + wd1 + v1 + (np.conj(z) * np.sum(rho * wts)).real
    c = np.asarray(c, dtype=float)
    w = w + c[0]
    for k, zk in enumerate(domain.charge_points):
        w = w + c[k + 1] * kernels.charge_stream(targets, zk)
    return StreamField(targets=targets, w=w)


def _realify(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    """Real N x 2N matrix of mu -> Re[A rho + B conj(rho)] with interleaved
    (mu1, mu2) columns and rho = RHO_SIGN (mu2 - i mu1)."""
    n, m = A.shape
    out = np.empty((n, 2 * m))
    out[:, 0::2] = RHO_SIGN * (A.imag - B.imag)
    out[:, 1::2] = RHO_SIGN * (A.real + B.real)
    return out


def boundary_w_matrix(system: ConjugateSystem) -> np.ndarray:
    """Dense N x 2N real matrix taking interleaved node samples of mu to
    the density part of w at the boundary nodes (charges and c_0 excluded):
    w_S + w_D + Re[conj(z) int rho dS], with the double layer's log term
    routed through the factored conjugate system."""
    domain, L = system.domain, system.L
    nodes, wts = domain.all_nodes(), domain.all_weights()
    tc = complexify(domain.all_tangents())
    z = complexify(nodes)
    D = z[None, :] - z[:, None]                  # xi_j - z_i
    c8 = 1.0 / (8.0 * np.pi)
    A = c8 * (L * np.conj(D)) + c8 * np.outer(np.conj(z), wts)
    B = c8 * (L * D) - c8 * D * wts[None, :]
    # double layer first term, smooth on-curve kernel with diagonal limit
    Dsafe = D.copy()
    np.fill_diagonal(Dsafe, 1.0)
    ker = np.conj(Dsafe) / Dsafe * (tc * wts)[None, :]
    np.fill_diagonal(ker, np.conj(tc) * wts)
    A += ker / (4.0 * np.pi * 1j)
    # completion term Re[conj(z) int rho dS]
    A += np.outer(np.conj(z), wts)
    W = _realify(A, B)
    # v1 = S^L (A_N^{-1} (-d/dtau) (1/4 pi) L M_m) mu
    N = len(wts)
    Mm = np.zeros((N, 2 * N))
    tau = domain.all_tangents()
    Mm[np.arange(N), 2 * np.arange(N)] = -2.0 * RHO_SIGN * tau[:, 1]
    Mm[np.arange(N), 2 * np.arange(N) + 1] = 2.0 * RHO_SIGN * tau[:, 0]
    V2 = L @ Mm / (4.0 * np.pi)
    Sig = system.fact.solve(-tangential_derivative_matrix(domain) @ V2)
    W += -(L @ Sig) / (2.0 * np.pi)
    return W
