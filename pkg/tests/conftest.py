"""Shared small fixtures: cheap geometries reused across module tests."""

import numpy as np
import pytest

from biharm2d.geometry import Domain, make_circle, make_rounded_rectangle


@pytest.fixture(scope="session")
def unit_circle_domain():
    return Domain(outer=make_circle((0.0, 0.0), 1.0, 8))


@pytest.fixture(scope="session")
def bar_domain():
    """Rounded rectangle a=1, b=0.5, h=0.05 at modest resolution."""
    return Domain(outer=make_rounded_rectangle(1.0, 0.5, 0.05, 24))


@pytest.fixture(scope="session")
def annulus_domain():
    """Unit circle with one small hole, for multiply connected checks."""
    outer = make_circle((0.0, 0.0), 1.0, 10)
    hole = make_circle((0.3, 0.1), 0.2, 6, orientation=-1)
    return Domain(outer=outer, holes=[hole], charge_points=[(0.3, 0.1)])


def smooth_test_density(domain, seed=7):
    """Deterministic smooth vector density sampled at the nodes."""
    rng = np.random.default_rng(seed)
    a = rng.normal(size=(2, 3))
    b = rng.normal(size=(2, 3))
    x, y = domain.all_nodes().T
    mu = np.empty((domain.n_nodes, 2))
    for i in range(2):
        mu[:, i] = sum(a[i, k] * np.cos((k + 1) * x) * np.sin((k + 1) * y)
                       + b[i, k] * np.sin((k + 1) * x + 0.3)
                       for k in range(3))
    return mu
