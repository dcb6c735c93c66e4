import numpy as np
import pytest

import cavitywalk as cw
from cavitywalk import render
from cavitywalk._kernels import wigner_quadrature, wigner_terms

TWO_PI = 2.0 * np.pi

# Ten-step demo parameters used across the suite: symmetric start,
# quarter-spacing steps, phase a full turn, strongly biased coin.
DEMO_ALPHA = 0.0
DEMO_L = 0.05
DEMO_THETA = TWO_PI / 3.0
DEMO_PHI = TWO_PI
DEMO_N = 10


@pytest.fixture(scope="session")
def demo_params():
    return cw.WalkParams(
        alpha0=DEMO_ALPHA, l=DEMO_L, theta=DEMO_THETA, phi=DEMO_PHI, N=DEMO_N
    )


@pytest.fixture(scope="session")
def demo_state(demo_params):
    return cw.walk(demo_params)


@pytest.fixture(scope="session")
def demo_grid():
    return render.default_position_grid(DEMO_N, DEMO_L)


@pytest.fixture(scope="session")
def demo_phase_grid():
    return render.default_phase_grid(DEMO_N, DEMO_L)


@pytest.fixture(scope="session")
def warm_kernels():
    """Trigger kernel compilation outside any timed section."""
    wc = np.array([1.0 + 0.0j])
    z = np.zeros(1)
    xs = np.linspace(-1.0, 1.0, 8)
    wigner_terms(wc, z, z, z, z, xs, xs)
    psi = np.exp(-(xs**2) / 2.0).astype(complex)
    wigner_quadrature(psi, float(xs[1] - xs[0]), xs)
    return True


@pytest.fixture
def make_random_state():
    """Normalized few-component superpositions with well-behaved weights."""

    def _make(rng, n_components, complex_centers=True, spread=1.5):
        centers = rng.uniform(-spread, spread, n_components).astype(complex)
        if complex_centers:
            centers = centers + 1j * rng.uniform(-1.0, 1.0, n_components)
        weights = rng.normal(size=n_components) + 1j * rng.normal(size=n_components)
        return cw.normalize(cw.WalkerState(weights, centers))

    return _make
