"""Pointwise kernels: biharmonic Green's function, Stokeslet, stresslet
double-layer kernel, Goursat-form layer potentials, charge fields, Laplace
kernels, and the classical Green's-function-derivative kernels of the
comparison (Farkas-type) formulation.

Conventions used throughout the package:

* ``grad_perp w = (dw/dx2, -dw/dx1)`` is the velocity of a stream
  function w.
* The complex density is ``rho = RHO_SIGN * (mu_2 - i mu_1)``.  The sign
  is calibrated (see tests) so that ``grad_perp w_S = S_Gamma mu``,
  ``grad_perp w_D = D_Gamma mu`` and
  ``grad_perp Re[conj(z) int rho dS] = W_Gamma mu`` all hold with plus
  signs.
* All functions broadcast over leading axes; points are arrays with a
  trailing axis of length 2.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

RHO_SIGN = -1.0


@dataclass
class GoursatEval:
    """Values of the Goursat pair (phi, psi) and phi' at target points.

    The biharmonic stream function is w = Re[conj(z) phi(z) + chi(z)] with
    chi' = psi, and its gradient follows from Muskhelishvili's formula.
    """

    phi: np.ndarray
    dphi: np.ndarray
    psi: np.ndarray

    def __add__(self, other: "GoursatEval") -> "GoursatEval":
        return GoursatEval(self.phi + other.phi, self.dphi + other.dphi,
                           self.psi + other.psi)


def mu_to_rho(mu: np.ndarray) -> np.ndarray:
    """Canonical real-vector -> complex density map, rho = sign*(mu2 - i mu1)."""
    mu = np.asarray(mu, dtype=float)
    return RHO_SIGN * (mu[..., 1] - 1j * mu[..., 0])


def rho_to_mu(rho: np.ndarray) -> np.ndarray:
    rho = np.asarray(rho)
    s = rho / RHO_SIGN
    return np.stack([-s.imag, s.real], axis=-1)


def complexify(points: np.ndarray) -> np.ndarray:
    points = np.asarray(points, dtype=float)
    return points[..., 0] + 1j * points[..., 1]


def biharm_green(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """G^B(x, y) = |x-y|^2 log|x-y| / (8 pi)."""
    r = np.asarray(x, dtype=float) - np.asarray(y, dtype=float)
    r2 = np.einsum("...i,...i->...", r, r)
    return r2 * np.log(r2) / (16.0 * np.pi)


def stokeslet(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """G_ij = (1/4 pi)[-log|x-y| delta_ij + r_i r_j / |r|^2], r = x - y."""
    r = np.asarray(x, dtype=float) - np.asarray(y, dtype=float)
    r2 = np.einsum("...i,...i->...", r, r)
    out = np.einsum("...i,...j->...ij", r, r) / r2[..., None, None]
    lg = 0.5 * np.log(r2)
    out[..., 0, 0] -= lg
    out[..., 1, 1] -= lg
    return out / (4.0 * np.pi)


def stresslet_dlp_kernel(x: np.ndarray, y: np.ndarray,
                         ny: np.ndarray) -> np.ndarray:
    """Matrix M with [D_Gamma mu]_i(x) = int M_ij(x, y) mu_j(y) dS(y).

    From T_ijk(y, x) n_k(y) with T_ijk(a, b) = -(1/pi)(a-b)_i(a-b)_j(a-b)_k
    / |a-b|^4, i.e. M = -(1/pi) d dT (d.n(y)) / |d|^4 with d = y - x.
    """
    d = np.asarray(y, dtype=float) - np.asarray(x, dtype=float)
    d2 = np.einsum("...i,...i->...", d, d)
    dn = np.einsum("...i,...i->...", d, np.asarray(ny, dtype=float))
    out = np.einsum("...i,...j->...ij", d, d)
    return -(1.0 / np.pi) * out * (dn / d2 ** 2)[..., None, None]


def dlp_diagonal_limit(tau: np.ndarray, kappa) -> np.ndarray:
    """Limit of the stresslet DLP kernel as y -> x along a smooth curve:
    -(kappa / 2 pi) tau tauT.  Calibrated against a symmetric-refinement
    principal-value oracle on the unit circle."""
    tau = np.asarray(tau, dtype=float)
    out = np.einsum("...i,...j->...ij", tau, tau)
    return -np.asarray(kappa)[..., None, None] / (2.0 * np.pi) * out


def charge_stream(x: np.ndarray, zk: np.ndarray) -> np.ndarray:
    """r^2 log r with r = |x - z_k|."""
    r = np.asarray(x, dtype=float) - np.asarray(zk, dtype=float)
    r2 = np.einsum("...i,...i->...", r, r)
    return 0.5 * r2 * np.log(r2)


def charge_velocity(x: np.ndarray, zk: np.ndarray) -> np.ndarray:
    """grad_perp(r^2 log r) = (2 log r + 1) (x2 - z_k2, -(x1 - z_k1))."""
    r = np.asarray(x, dtype=float) - np.asarray(zk, dtype=float)
    r2 = np.einsum("...i,...i->...", r, r)
    fac = np.log(r2) + 1.0
    return fac[..., None] * np.stack([r[..., 1], -r[..., 0]], axis=-1)


def laplace_kernels(x: np.ndarray, y: np.ndarray, nx: np.ndarray) -> dict:
    """slp = -(1/2 pi) log|x-y|; dlp_adjoint = -(1/2 pi) d/dn_x log|x-y|.

    The diagonal limit of dlp_adjoint on a smooth curve is
    ``laplace_dlp_adjoint_diagonal``.
    """
    r = np.asarray(x, dtype=float) - np.asarray(y, dtype=float)
    r2 = np.einsum("...i,...i->...", r, r)
    slp = -np.log(r2) / (4.0 * np.pi)
    rn = np.einsum("...i,...i->...", r, np.asarray(nx, dtype=float))
    dlp = -rn / (2.0 * np.pi * r2)
    return {"slp": slp, "dlp_adjoint": dlp}


def laplace_dlp_adjoint_diagonal(kappa) -> np.ndarray:
    """y -> x limit of the adjoint Laplace DLP kernel: -kappa / (4 pi)."""
    return -np.asarray(kappa) / (4.0 * np.pi)


def farkas_kernels(x: np.ndarray, y: np.ndarray, nx: np.ndarray,
                   ny: np.ndarray) -> dict:
    """Green's-function-derivative kernels of the comparison formulation."""
    r = np.asarray(x, dtype=float) - np.asarray(y, dtype=float)
    r2 = np.einsum("...i,...i->...", r, r)
    rny = np.einsum("...i,...i->...", r, np.asarray(ny, dtype=float))
    rnx = np.einsum("...i,...i->...", r, np.asarray(nx, dtype=float))
    nn = np.einsum("...i,...i->...", np.asarray(nx, dtype=float),
                   np.asarray(ny, dtype=float))
    k1 = rny ** 3 / (np.pi * r2 ** 2)
    k2 = (0.5 - rny ** 2 / r2) / (2.0 * np.pi)
    k21 = (-3.0 * rny ** 2 * nn / r2 ** 2
           + 4.0 * rny ** 3 * rnx / r2 ** 3) / np.pi
    k22 = (rny * rnx / r2 - rny ** 2 * rnx / r2 ** 2) / np.pi
    return {"K1": k1, "K2": k2, "K21": k21, "K22": k22}


def farkas_diagonal(kappa) -> dict:
    """y -> x limits of the smooth comparison kernels on a smooth curve."""
    kappa = np.asarray(kappa, dtype=float)
    z = np.zeros_like(kappa)
    return {"K1": z, "K2": np.full_like(kappa, 1.0 / (4.0 * np.pi)),
            "K21": -3.0 * kappa ** 2 / (4.0 * np.pi), "K22": z}


def muskhelishvili_gradient(g: GoursatEval, z: np.ndarray) -> np.ndarray:
    """(w_x, w_y) from w_x + i w_y = phi + z conj(phi') + conj(psi)."""
    c = g.phi + np.asarray(z) * np.conj(g.dphi) + np.conj(g.psi)
    return np.stack([c.real, c.imag], axis=-1)


def goursat_slp(targets: np.ndarray, rho: np.ndarray, nodes: np.ndarray,
                weights: np.ndarray) -> tuple:
    """Goursat functions and stream function of the Stokes single layer,
    smooth-rule quadrature (targets well off the sources).

    Returns (GoursatEval, w_S values).
    """
    z = complexify(targets)[..., None]
    xi = complexify(nodes)
    rw = rho * weights
    dz = xi - z
    logdz = np.log(dz)
    c8 = 1.0 / (8.0 * np.pi)
    phi = -c8 * (logdz @ rw) + c8 * np.sum(rw)
    dphi = c8 * ((1.0 / dz) @ rw)
    psi = (-c8 * (logdz @ (np.conj(rho) * weights))
           - c8 * ((1.0 / dz) @ (np.conj(xi) * rw)))
    w1 = (np.log(np.abs(dz)) * (np.conj(dz) * rho).real) @ weights
    w2 = dz @ (np.conj(rho) * weights)
    ws = ((1.0 / (4.0 * np.pi)) * w1
          + (-c8 * w2 + c8 * np.conj(z[..., 0]) * np.sum(rw)).real)
    return GoursatEval(phi=phi, dphi=dphi, psi=psi), ws


def goursat_dlp(targets: np.ndarray, rho: np.ndarray, nodes: np.ndarray,
                weights: np.ndarray, tangents: np.ndarray) -> tuple:
    """Goursat functions of the Stokes double layer plus the single-valued
    first term of its stream function; the log term v1 lives in stream_eval.

    Returns (GoursatEval, w_D first-term values).
    """
    z = complexify(targets)[..., None]
    xi = complexify(nodes)
    dxi = complexify(tangents) * weights
    dz = xi - z
    inv = 1.0 / dz
    c4 = 1.0 / (4.0 * np.pi * 1j)
    phi = -c4 * (inv @ (rho * dxi))
    dphi = -c4 * (inv ** 2 @ (rho * dxi))
    psi = (-c4 * (inv @ (np.conj(rho) * dxi + rho * np.conj(dxi)))
           + c4 * (inv ** 2 @ (np.conj(xi) * rho * dxi)))
    wd1 = (c4 * ((np.conj(dz) * inv) @ (rho * dxi))).real
    return GoursatEval(phi=phi, dphi=dphi, psi=psi), wd1
