import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate

from biharm2d import kernels
from biharm2d.geometry import make_circle
from biharm2d.kernels import (GoursatEval, biharm_green, charge_stream,
                              charge_velocity, complexify, dlp_diagonal_limit,
                              farkas_kernels, laplace_dlp_adjoint_diagonal,
                              laplace_kernels, mu_to_rho, muskhelishvili_gradient,
                              rho_to_mu, stokeslet, stresslet_dlp_kernel)

finite_coord = st.floats(min_value=-5.0, max_value=5.0,
                         allow_nan=False, allow_infinity=False)


def _dlp_velocity(comp, mu, p):
    """Direct Nystrom sum of the stresslet double layer at an off-curve p."""
    M = kernels.stresslet_dlp_kernel(np.asarray(p, float)[None, None, :],
                                     comp.nodes[None, :, :],
                                     comp.normals[None, :, :])[0]
    return np.einsum("jab,jb,j->a", M, mu, comp.weights)


def _slp_velocity(comp, mu, p):
    G = kernels.stokeslet(np.asarray(p, float)[None, None, :],
                          comp.nodes[None, :, :])[0]
    return np.einsum("jab,jb,j->a", G, mu, comp.weights)


class TestBiharmGreen:
    def test_zero_at_unit_distance(self):
        assert biharm_green(np.array([1.0, 0.0]), np.zeros(2)) == 0.0

    def test_value_at_distance_e(self):
        v = biharm_green(np.array([math.e, 0.0]), np.zeros(2))
        assert v == pytest.approx(math.e**2 / (8 * math.pi), rel=1e-14)

    def test_unit_point_load(self):
        # flux of grad(Delta G) through a circle around the load is 1:
        # Delta G = (log r + 1)/(2 pi), d/dr -> 1/(2 pi r)
        R = 0.8
        theta = np.linspace(0, 2 * math.pi, 64, endpoint=False)
        ring = R * np.column_stack([np.cos(theta), np.sin(theta)])
        h = 1e-3

        def lap(pts):
            out = np.zeros(len(pts))
            for dx, dy, c in ((h, 0, 1), (-h, 0, 1), (0, h, 1), (0, -h, 1),
                              (0, 0, -4)):
                out += c * np.array([biharm_green(p + [dx, dy], np.zeros(2))
                                     for p in pts])
            return out / h**2

        dldr = (lap(ring * (1 + h / R)) - lap(ring * (1 - h / R))) / (2 * h)
        flux = R * (2 * math.pi / len(theta)) * dldr.sum()
        assert flux == pytest.approx(1.0, abs=1e-4)


class TestStokeslet:
    def test_unit_horizontal_separation(self):
        G = stokeslet(np.array([1.0, 0.0]), np.zeros(2))
        assert np.allclose(G, np.diag([1.0, 0.0]) / (4 * math.pi), atol=1e-15)

    def test_vertical_separation_two(self):
        G = stokeslet(np.array([0.0, 2.0]), np.zeros(2))
        expect = np.diag([-math.log(2.0), -math.log(2.0) + 1.0]) / (4 * math.pi)
        assert np.allclose(G, expect, atol=1e-15)

    @settings(max_examples=30, deadline=None)
    @given(finite_coord, finite_coord, finite_coord, finite_coord)
    def test_symmetric(self, x1, x2, y1, y2):
        x = np.array([x1, x2])
        y = np.array([y1, y2])
        if np.linalg.norm(x - y) < 1e-3:
            return
        G = stokeslet(x, y)
        assert np.allclose(G, G.T, atol=1e-14)
        assert np.allclose(G, stokeslet(y, x), atol=1e-14)

    @settings(max_examples=30, deadline=None)
    @given(finite_coord, finite_coord, finite_coord, finite_coord)
    def test_translation_invariant(self, x1, x2, d1, d2):
        x = np.array([x1, x2])
        y = np.array([0.3, -0.4])
        d = np.array([d1, d2])
        if np.linalg.norm(x - y) < 1e-3:
            return
        assert np.allclose(stokeslet(x + d, y + d), stokeslet(x, y), atol=1e-13)

    def test_divergence_free(self):
        # numeric divergence of each column field at off-curve points
        y = np.zeros(2)
        h = 1e-5
        for p in ([0.7, 0.3], [-1.2, 0.5], [0.1, 2.0]):
            p = np.array(p)
            div = ((stokeslet(p + [h, 0], y) - stokeslet(p - [h, 0], y))[0]
                   + (stokeslet(p + [0, h], y) - stokeslet(p - [0, h], y))[1])
            assert np.max(np.abs(div)) / (2 * h) <= 1e-8


class TestStressletDlp:
    def test_orthogonal_case_vanishes(self):
        M = stresslet_dlp_kernel(np.array([1.0, 0.0]), np.zeros(2),
                                 np.array([0.0, 1.0]))
        assert np.allclose(M, 0.0, atol=1e-15)

    def test_aligned_case(self):
        M = stresslet_dlp_kernel(np.array([0.0, 1.0]), np.zeros(2),
                                 np.array([0.0, 1.0]))
        expect = np.zeros((2, 2))
        expect[1, 1] = 1.0 / math.pi
        assert np.allclose(M, expect, atol=1e-15)

    def test_constant_density_identity(self):
        # Stokes DLP of a constant density: -mu inside, 0 outside
        comp = make_circle((0.0, 0.0), 1.0, 12)
        mu_const = np.array([0.7, -0.3])
        mu = np.tile(mu_const, (comp.n_nodes, 1))
        assert np.allclose(_dlp_velocity(comp, mu, [0.2, 0.1]), -mu_const,
                           atol=1e-12)
        assert np.allclose(_dlp_velocity(comp, mu, [3.0, 0.0]), 0.0, atol=1e-12)

    @settings(max_examples=20, deadline=None)
    @given(finite_coord, finite_coord)
    def test_translation_invariant(self, d1, d2):
        x = np.array([0.9, -0.1])
        y = np.array([0.2, 0.4])
        n = np.array([0.6, 0.8])
        d = np.array([d1, d2])
        assert np.allclose(stresslet_dlp_kernel(x + d, y + d, n),
                           stresslet_dlp_kernel(x, y, n), atol=1e-13)


class TestDlpDiagonalLimit:
    def test_flat_curve(self):
        assert np.allclose(dlp_diagonal_limit(np.array([1.0, 0.0]), 0.0), 0.0)

    def test_radius_scaling(self):
        tau = np.array([0.6, 0.8])
        one = dlp_diagonal_limit(tau, 1.0)
        assert np.allclose(dlp_diagonal_limit(tau, 1.0 / 3.0), one / 3.0,
                           atol=1e-15)

    def test_matches_along_curve_limit(self):
        # Richardson limit of the smooth kernel along the unit circle
        comp = make_circle((0.0, 0.0), 1.0, 8)
        t0 = 0.3
        x = comp.curve.position(np.array([t0]))[0]
        tau = comp.curve.velocity(np.array([t0]))[0]
        lim = dlp_diagonal_limit(tau, 1.0)

        def k(dt):
            t = np.array([t0 + dt])
            y = comp.curve.position(t)[0]
            v = comp.curve.velocity(t)[0]
            n = np.array([v[1], -v[0]]) / np.linalg.norm(v)
            return stresslet_dlp_kernel(x, y, n)

        vals = [0.5 * (k(d) + k(-d)) for d in (1e-3, 5e-4)]
        extrap = (4 * vals[1] - vals[0]) / 3.0
        assert np.allclose(extrap, lim, atol=1e-8)


class TestCharge:
    def test_point_values(self):
        x = np.array([[1.0, 0.0]])
        z = np.zeros(2)
        assert charge_stream(x, z)[0] == 0.0
        assert np.allclose(charge_velocity(x, z)[0], [0.0, -1.0], atol=1e-15)

    def test_circulation_eight_pi(self):
        # Delta u integrated along a clockwise-traversed loop about z_k
        # (the hole-traversal convention) gives +8 pi; a loop elsewhere 0.
        z = np.array([0.4, -0.1])
        theta = np.linspace(0, 2 * math.pi, 400, endpoint=False)

        def circulation(center, R):
            pts = center + R * np.column_stack([np.cos(theta), np.sin(theta)])
            r = pts - z
            r2 = np.einsum("ni,ni->n", r, r)
            # Delta u = grad_perp(Delta r^2 log r) = 4 (r_2, -r_1)/r^2
            du = 4.0 * np.column_stack([r[:, 1], -r[:, 0]]) / r2[:, None]
            tau_cw = np.column_stack([np.sin(theta), -np.cos(theta)])
            return (2 * math.pi * R / len(theta)) * np.einsum(
                "ni,ni->", du, tau_cw)

        assert circulation(z, 0.7) == pytest.approx(8 * math.pi, rel=1e-12)
        assert circulation(z + [5.0, 0.0], 0.7) == pytest.approx(0.0, abs=1e-10)


class TestLaplaceKernels:
    def test_slp_zero_at_unit_distance(self):
        out = laplace_kernels(np.array([1.0, 0.0]), np.zeros(2),
                              np.array([1.0, 0.0]))
        assert out["slp"] == 0.0

    def test_antipodal_circle_value(self):
        out = laplace_kernels(np.array([1.0, 0.0]), np.array([-1.0, 0.0]),
                              np.array([1.0, 0.0]))
        assert out["dlp_adjoint"] == pytest.approx(-1.0 / (4 * math.pi),
                                                   rel=1e-14)

    def test_constant_density_row_integral(self):
        # oint K^L(x,y) dS(y) = -1/2 on a closed curve, so (1/2 I + K^L)
        # annihilates constants (the W term restores invertibility)
        comp = make_circle((0.0, 0.0), 1.0, 10)
        with np.errstate(divide="ignore", invalid="ignore"):
            K = laplace_kernels(comp.nodes[:, None, :], comp.nodes[None, :, :],
                                comp.normals[:, None, :])["dlp_adjoint"]
        np.fill_diagonal(K, laplace_dlp_adjoint_diagonal(comp.curvature))
        rows = (K * comp.weights[None, :]).sum(axis=1)
        assert np.allclose(rows, -0.5, atol=1e-10)

    def test_diagonal_limit_matches_curve_limit(self):
        comp = make_circle((0.0, 0.0), 2.0, 8)
        t0 = 1.1
        x = comp.curve.position(np.array([t0]))[0]
        n = (x - 0.0) / 2.0

        def k(dt):
            y = comp.curve.position(np.array([t0 + dt]))[0]
            return laplace_kernels(x, y, n)["dlp_adjoint"]

        vals = [0.5 * (k(d) + k(-d)) for d in (1e-3, 5e-4)]
        extrap = (4 * vals[1] - vals[0]) / 3.0
        assert extrap == pytest.approx(laplace_dlp_adjoint_diagonal(0.5),
                                       abs=1e-10)


class TestFarkasKernels:
    def test_orthogonal_case(self):
        out = farkas_kernels(np.array([1.0, 0.0]), np.zeros(2),
                             np.array([0.0, 1.0]), np.array([0.0, 1.0]))
        assert out["K1"] == pytest.approx(0.0, abs=1e-15)
        assert out["K2"] == pytest.approx(1.0 / (4 * math.pi), rel=1e-14)

    def test_parallel_case(self):
        out = farkas_kernels(np.array([2.0, 0.0]), np.zeros(2),
                             np.array([1.0, 0.0]), np.array([1.0, 0.0]))
        assert out["K1"] == pytest.approx(1.0 / (2 * math.pi), rel=1e-14)

    def test_k21_unit_case(self):
        out = farkas_kernels(np.array([1.0, 0.0]), np.zeros(2),
                             np.array([1.0, 0.0]), np.array([1.0, 0.0]))
        assert out["K21"] == pytest.approx(1.0 / math.pi, rel=1e-13)


class TestMuskhelishvili:
    def test_phi_z(self):
        # phi = z, psi = 0 represents w = |z|^2; gradient 2x
        z = np.array([0.7 + 0.2j, -1.0 + 1.5j])
        g = GoursatEval(phi=z, dphi=np.ones_like(z), psi=np.zeros_like(z))
        grad = muskhelishvili_gradient(g, z)
        assert np.allclose(grad, 2 * np.column_stack([z.real, z.imag]),
                           atol=1e-15)

    def test_constant_cancellation(self):
        # phi = i c with psi = conj(phi) i... choose psi so phi + conj(psi)=0
        z = np.array([0.3 - 0.4j])
        c = 2.0j
        g = GoursatEval(phi=np.array([c]), dphi=np.zeros(1),
                        psi=np.array([np.conj(-c)]))
        assert np.allclose(muskhelishvili_gradient(g, z), 0.0, atol=1e-15)

    def test_density_roundtrip(self):
        mu = np.array([[0.3, -1.2], [2.0, 0.7]])
        assert np.allclose(rho_to_mu(mu_to_rho(mu)), mu, atol=1e-16)


class TestGoursatRealEquivalence:
    """grad_perp of the Goursat-form stream functions reproduces the
    direct Stokeslet/stresslet layer velocities."""

    @staticmethod
    def _fd_grad_perp(w_of_pts, p, h=1e-5):
        p = np.asarray(p, float)
        vals = {}
        for k, (dx, dy) in enumerate(((h, 0), (-h, 0), (0, h), (0, -h),
                                      (2 * h, 0), (-2 * h, 0), (0, 2 * h),
                                      (0, -2 * h))):
            vals[k] = w_of_pts(p + [dx, dy])
        wx = (8 * (vals[0] - vals[1]) - (vals[4] - vals[5])) / (12 * h)
        wy = (8 * (vals[2] - vals[3]) - (vals[6] - vals[7])) / (12 * h)
        return np.array([wy, -wx])

    def test_single_layer(self, unit_circle_domain):
        from tests.conftest import smooth_test_density
        dom = unit_circle_domain
        comp = dom.outer
        mu = smooth_test_density(dom)
        rho = mu_to_rho(mu)

        def w_s(p):
            _, ws = kernels.goursat_slp(np.asarray(p, float)[None, :], rho,
                                        comp.nodes, comp.weights)
            return ws[0]

        for p in ([0.2, 0.1], [-0.4, 0.3], [0.0, -0.5]):
            u = self._fd_grad_perp(w_s, p)
            assert np.allclose(u, _slp_velocity(comp, mu, p), atol=1e-10)

    def test_double_layer(self, unit_circle_domain):
        from biharm2d.stream_eval import (build_conjugate_system,
                                          eval_slp_laplace, solve_conjugate)
        from tests.conftest import smooth_test_density
        dom = unit_circle_domain
        comp = dom.outer
        mu = smooth_test_density(dom)
        rho = mu_to_rho(mu)
        system = build_conjugate_system(dom)
        sigma = solve_conjugate(rho, system)

        def w_d(p):
            t = np.asarray(p, float)[None, :]
            _, wd1 = kernels.goursat_dlp(t, rho, comp.nodes, comp.weights,
                                         comp.tangents)
            return wd1[0] + eval_slp_laplace(t, sigma, dom)[0]

        for p in ([0.2, 0.1], [-0.4, 0.3]):
            u = self._fd_grad_perp(w_d, p)
            assert np.allclose(u, _dlp_velocity(comp, mu, p), atol=1e-8)

    def test_muskhelishvili_gradient_path(self, unit_circle_domain):
        # Goursat-assembled gradient vs finite differences of w_S
        from tests.conftest import smooth_test_density
        dom = unit_circle_domain
        comp = dom.outer
        mu = smooth_test_density(dom)
        rho = mu_to_rho(mu)
        for p in ([0.25, -0.1], [-0.3, 0.45]):
            t = np.asarray(p, float)[None, :]
            g, _ = kernels.goursat_slp(t, rho, comp.nodes, comp.weights)
            grad = muskhelishvili_gradient(g, complexify(t))[0]

            def w_s(q):
                _, ws = kernels.goursat_slp(np.asarray(q, float)[None, :], rho,
                                            comp.nodes, comp.weights)
                return ws[0]

            fd = self._fd_grad_perp(w_s, p)  # (wy, -wx)
            assert np.allclose(grad, [-fd[1], fd[0]], atol=1e-8)


class TestJumpRelation:
    """Interior limit of the Stokes double layer at a boundary point
    equals -mu/2 plus the principal value."""

    R = 1.0

    @staticmethod
    def _mu(t):
        return np.stack([np.cos(t) + 0.3, np.sin(2.0 * t)], axis=-1)

    def _dlp_at(self, p):
        """Adaptive quadrature of the DLP at an off-curve point p."""
        def integrand(t, i):
            y = self.R * np.array([math.cos(t), math.sin(t)])
            n = y / self.R
            M = stresslet_dlp_kernel(np.asarray(p, float), y, n)
            return (M @ self._mu(t)) [i] * self.R

        t0 = math.atan2(p[1], p[0])
        out = np.empty(2)
        for i in range(2):
            out[i] = sum(integrate.quad(integrand, a, b, args=(i,),
                                        limit=4000, epsabs=1e-12)[0]
                         for a, b in ((t0 - math.pi, t0), (t0, t0 + math.pi)))
        return out

    def _pv_at(self, t0):
        """Symmetric-exclusion principal value at x0 = x(t0)."""
        x0 = self.R * np.array([math.cos(t0), math.sin(t0)])

        def integrand(t, i):
            y = self.R * np.array([math.cos(t), math.sin(t)])
            M = stresslet_dlp_kernel(x0, y, y / self.R)
            return (M @ self._mu(t))[i] * self.R

        def excluded(delta):
            return np.array([
                integrate.quad(integrand, t0 + delta, t0 + 2 * math.pi - delta,
                               args=(i,), limit=4000, epsabs=1e-12)[0]
                for i in range(2)])

        # error is O(delta): two-point Richardson
        v1, v2 = excluded(2e-3), excluded(1e-3)
        return 2 * v2 - v1

    def test_interior_limit(self):
        t0 = 0.9424  # midway between nodes of an 8-panel discretization
        x0 = self.R * np.array([math.cos(t0), math.sin(t0)])
        mu0 = self._mu(t0)
        pv = self._pv_at(t0)
        # approach along the inward normal, Richardson in epsilon
        v1 = self._dlp_at(x0 * (1 - 2e-4 / self.R))
        v2 = self._dlp_at(x0 * (1 - 1e-4 / self.R))
        inside = 2 * v2 - v1
        assert np.allclose(inside, -0.5 * mu0 + pv, atol=1e-6)
