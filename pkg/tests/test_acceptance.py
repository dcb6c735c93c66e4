"""End-to-end acceptance checks for the ten-step demo walk.

Every check prints a single line

    ACCEPTANCE <check-id> <PASS|FAIL>: <measured detail>

before asserting, so a plain ``python3 -m pytest tests/test_acceptance.py -s``
gives a one-line verdict per criterion.  Timing budgets exclude kernel
compilation (the ``warm_kernels`` fixture runs first).

Three checks fail by design and are left red on purpose:

* ``diagonal-peak-location`` expects the measurement-erased (diagonal-only)
  position peak near |x| ~ 0.5; the binomial mixture of closely spaced
  packets actually merges into a single bump peaked near the origin.
* ``purity-monotone`` expects purity to decay monotonically under damping;
  it instead revives because every component contracts toward the same
  vacuum state, which is pure.
* ``damped-center-prediction`` compares two centroids that are both
  within numerical noise of zero for the demo parameters, so their ratio
  is ill-conditioned and lands far outside the expected band.

The README discusses all three in detail.  Do not silence these tests.
"""

import math
import time
from fractions import Fraction

import numpy as np
import pytest
import scipy.linalg

from conftest import DEMO_ALPHA, DEMO_L, DEMO_N, DEMO_PHI, DEMO_THETA

import cavitywalk as cw
from cavitywalk import decoherence, fock, hamiltonian, homodyne, render, walker
from cavitywalk.decoherence import DampSpec
from cavitywalk.fock import SPIN_MINUS, SPIN_PLUS
from cavitywalk.hamiltonian import DriveSpec

# Frozen grid argmax of the demo position distribution; regression guard
# for the walk -> wavefunction -> distribution pipeline.
DEMO_PEAK_X = -1.7941

DAMP_KTS = (0.0, 1.0, 2.0, 8.0)


def report(check: str, ok: bool, detail: str) -> None:
    print(f"ACCEPTANCE {check} {'PASS' if ok else 'FAIL'}: {detail}")
    assert ok, f"{check}: {detail}"


@pytest.fixture(scope="module")
def damped_family(demo_state, demo_phase_grid, warm_kernels):
    """Damped demo state at a spread of kappa*t values with Wigner surfaces."""
    rhos = {}
    surfaces = {}
    purities = {}
    for kt in DAMP_KTS:
        rho = decoherence.damp(demo_state, DampSpec.from_kt(kt))
        rhos[kt] = rho
        surfaces[kt] = render.wigner_density(rho, demo_phase_grid, render.AMPLITUDE)
        purities[kt] = decoherence.purity(rho)
    return rhos, surfaces, purities


def test_walk_peak_is_displaced_and_unimodal(demo_params, demo_grid, warm_kernels):
    # Warm call so the timed section measures computation, not setup.
    small = render.QuadGrid(-5.0, 5.0, 128)
    render.position_distribution(cw.walk(cw.WalkParams(0.0, 0.1, 0.3, 0.0, 1)), small)

    start = time.perf_counter()
    state = cw.walk(demo_params)
    p = render.position_distribution(state, demo_grid, render.AMPLITUDE)
    stats = render.distribution_stats(demo_grid, p)
    elapsed = time.perf_counter() - start

    peak = float(np.max(p))
    interior = [
        i
        for i in range(1, p.size - 1)
        if p[i] > p[i - 1] and p[i] > p[i + 1] and p[i] > 0.25 * peak
    ]
    reach = 3.0 * DEMO_N * DEMO_L
    ok = (
        elapsed < 1.0
        and 1.5 <= abs(stats.peak_x) <= 2.5
        and abs(stats.peak_x) >= reach
        and len(interior) == 1
        and abs(stats.peak_x - DEMO_PEAK_X) <= 2.0 * demo_grid.spacing
    )
    report(
        "walk-peak",
        ok,
        f"peak_x={stats.peak_x:+.4f} (reach>={reach}) maxima={len(interior)} "
        f"time={elapsed:.2f}s",
    )


def test_walk_variance_below_vacuum(demo_state, demo_grid):
    p = render.position_distribution(demo_state, demo_grid, render.AMPLITUDE)
    stats = render.distribution_stats(demo_grid, p)
    ok = stats.variance < 0.5 - 1e-4
    report("walk-variance", ok, f"variance={stats.variance:.4f} vs vacuum 0.5")


def test_diagonal_peak_location(demo_state, demo_grid):
    p = render.position_distribution_diagonal(demo_state, demo_grid, render.AMPLITUDE)
    stats = render.distribution_stats(demo_grid, p)
    ok = 0.4 <= abs(stats.peak_x) <= 0.6
    report(
        "diagonal-peak-location",
        ok,
        f"peak_x={stats.peak_x:+.4f}, expected 0.4 <= |x| <= 0.6",
    )


def test_diagonal_matches_shifted_packet(demo_state, demo_grid):
    p_diag = render.position_distribution_diagonal(demo_state, demo_grid, render.AMPLITUDE)
    stats = render.distribution_stats(demo_grid, p_diag)
    reach = DEMO_N * DEMO_L
    p_quantum = render.position_distribution(demo_state, demo_grid, render.AMPLITUDE)
    q_stats = render.distribution_stats(demo_grid, p_quantum)
    candidates = {
        "packet_at_diag_peak": render.initial_packet_distribution(
            DEMO_ALPHA, stats.peak_x, demo_grid
        ),
        "packet_at_minus_reach": render.initial_packet_distribution(
            DEMO_ALPHA, -reach, demo_grid
        ),
        "packet_unshifted": render.initial_packet_distribution(
            DEMO_ALPHA, 0.0, demo_grid
        ),
        "packet_at_quantum_peak": render.initial_packet_distribution(
            DEMO_ALPHA, q_stats.peak_x, demo_grid
        ),
        "quantum_distribution": p_quantum,
    }
    dists = {
        name: render.l1_distance(demo_grid, p_diag, q) for name, q in candidates.items()
    }
    ranked = sorted(dists, key=dists.get)
    winner, runner_up = ranked[0], ranked[1]
    ok = (
        winner == "packet_at_diag_peak"
        and dists[winner] < 0.05
        and dists[runner_up] > 2.0 * dists[winner]
    )
    report(
        "diagonal-packet-match",
        ok,
        f"winner={winner} L1={dists[winner]:.4f}, runner-up={runner_up} "
        f"L1={dists[runner_up]:.4f}",
    )


def test_wigner_consistency_on_random_states(make_random_state, warm_kernels):
    rng = np.random.default_rng(101)
    pgrid = render.PhaseGrid(
        render.QuadGrid(-9.0, 9.0, 768), render.QuadGrid(-9.0, 9.0, 160)
    )
    worst_int = worst_marg = worst_oracle = 0.0
    start = time.perf_counter()
    for i in range(10):
        conv = render.AMPLITUDE if i < 5 else render.QUADRATURE
        state = make_random_state(rng, 2 + i % 3, complex_centers=conv == render.QUADRATURE)
        w = render.wigner_pure(state, pgrid, conv)
        integral = float(np.sum(w)) * pgrid.x.spacing * pgrid.p.spacing
        worst_int = max(worst_int, abs(integral - 1.0))
        marginal = render.wigner_marginal_x(pgrid, w)
        p_x = render.position_distribution(state, pgrid.x, conv)
        worst_marg = max(worst_marg, float(np.max(np.abs(marginal - p_x))))
        psi = render.wavefunction(state, pgrid.x, conv)
        oracle = render.wigner_numeric_oracle(psi, pgrid)
        worst_oracle = max(worst_oracle, float(np.max(np.abs(w - oracle))))
    elapsed = time.perf_counter() - start
    ok = (
        worst_int <= 1e-6
        and worst_marg <= 1e-6
        and worst_oracle <= 1e-6
        and elapsed < 30.0
    )
    report(
        "wigner-consistency",
        ok,
        f"integral_dev={worst_int:.2e} marginal_dev={worst_marg:.2e} "
        f"oracle_dev={worst_oracle:.2e} time={elapsed:.1f}s over 10 states",
    )


def test_probe_scan_tracks_the_peak(demo_state, demo_grid):
    delta_grid = render.QuadGrid(-3.0, 3.0, 241)
    gt_p = 1.5 * np.pi
    start = time.perf_counter()
    vacuum = cw.walk(cw.WalkParams(alpha0=0.0, l=0.1, theta=0.3, phi=0.0, N=0))
    scan_v = homodyne.delta_scan(vacuum, 0.0, delta_grid, gt_p)
    vac_peak = float(scan_v.delta[int(np.nanargmax(scan_v.p_g))])

    scan_d = homodyne.delta_scan(demo_state, DEMO_ALPHA, delta_grid, gt_p)
    demo_peak = float(scan_d.delta[int(np.nanargmax(scan_d.p_g))])
    elapsed = time.perf_counter() - start

    p = render.position_distribution(demo_state, demo_grid, render.AMPLITUDE)
    peak_x = render.distribution_stats(demo_grid, p).peak_x
    # Counter-displacement recovers the vacuum exactly at delta = -peak.
    ok = (
        abs(vac_peak) <= delta_grid.spacing
        and abs(demo_peak - (-peak_x)) <= 0.05
        and elapsed < 10.0
    )
    report(
        "probe-peak-tracking",
        ok,
        f"vacuum_peak={vac_peak:+.4f} demo_peak={demo_peak:+.4f} "
        f"-peak_x={-peak_x:+.4f} time={elapsed:.1f}s",
    )


def test_strong_drive_convergence():
    psi0 = fock.with_spin(0.0, 1.0, fock.coherent_vector(0.0, 16))
    ratios = (5.0, 20.0, 50.0)
    values = [
        hamiltonian.rwa_fidelity(DriveSpec(g=1.0, E=r), psi0, t=0.1) for r in ratios
    ]
    frozen = [0.997704, 0.999479, 0.999908]
    ok = (
        all(b >= a for a, b in zip(values, values[1:]))
        and values[-1] >= 0.99
        and np.allclose(values, frozen, atol=1e-4)
    )
    report(
        "strong-drive-convergence",
        ok,
        "fidelity " + " ".join(f"{r:g}:{v:.6f}" for r, v in zip(ratios, values)),
    )


def test_spin_frame_transform_matches_exponential():
    rng = np.random.default_rng(11)
    worst = 0.0
    for _ in range(20):
        E = rng.uniform(0.1, 3.0) * np.exp(1j * rng.uniform(-np.pi, np.pi))
        t = rng.uniform(0.0, 4.0)
        spec = DriveSpec(g=1.0, E=E)
        h_d = np.array([[0.0, E], [np.conj(E), 0.0]], dtype=complex)
        u = scipy.linalg.expm(1j * h_d * t)
        for analytic, bare in (
            (hamiltonian.transformed_spin_plus(spec, t), SPIN_PLUS),
            (hamiltonian.transformed_spin_minus(spec, t), SPIN_MINUS),
        ):
            worst = max(worst, float(np.max(np.abs(analytic - u @ bare @ u.conj().T))))
    ok = worst <= 1e-10
    report("spin-frame-transform", ok, f"max residual {worst:.2e} over 20 draws")


def test_damping_channel_matches_lindblad(make_random_state, demo_state):
    rng = np.random.default_rng(73)
    state = make_random_state(rng, 3, complex_centers=True)
    dim = 40
    rho0 = walker.to_density_matrix(walker.dyad_expansion(state), dim=dim)
    worst = 0.0
    for kt in (0.1, 0.5, 1.0):
        damped = walker.to_density_matrix(
            decoherence.damp(state, DampSpec(kappa=1.0, t=kt)), dim=dim
        )
        oracle = fock.evolve_lindblad(rho0, kappa=1.0, t=kt)
        worst = max(worst, float(np.max(np.abs(damped - oracle))))

    approx = decoherence.damp_small_kt(demo_state, DampSpec.from_kt(0.01), l=DEMO_L)
    exact = decoherence.damp(demo_state, DampSpec.from_kt(0.01))
    ratio_dev = float(np.max(np.abs(np.abs(approx.weights / exact.weights) - 1.0)))
    ok = worst <= 1e-6 and ratio_dev < 1e-3
    report(
        "damping-channel-match",
        ok,
        f"lindblad residual {worst:.2e}, small-kt weight ratio dev {ratio_dev:.2e}",
    )


def test_negativity_decays_toward_zero(damped_family):
    _, surfaces, _ = damped_family
    mins = [float(np.min(surfaces[kt])) for kt in DAMP_KTS]
    ok = (
        all(b >= a - 1e-12 for a, b in zip(mins, mins[1:]))
        and mins[-1] >= -1e-3
        and -2e-4 <= mins[0] <= -1e-4
    )
    report(
        "negativity-decay",
        ok,
        "min W " + " ".join(f"kt={kt:g}:{m:+.2e}" for kt, m in zip(DAMP_KTS, mins)),
    )


def test_purity_decreases_monotonically(damped_family):
    _, _, purities = damped_family
    values = [purities[kt] for kt in DAMP_KTS]
    ok = all(b <= a + 1e-9 for a, b in zip(values, values[1:]))
    report(
        "purity-monotone",
        ok,
        "purity " + " ".join(f"kt={kt:g}:{v:.6f}" for kt, v in zip(DAMP_KTS, values)),
    )


def test_damped_center_prediction(damped_family, demo_grid, demo_phase_grid):
    rhos, surfaces, _ = damped_family
    rho = rhos[DAMP_KTS[-1]]
    keep = np.abs(rho.kets - rho.bras) <= 1e-12
    diagonal = walker.CoherentDyadDensity(
        rho.weights[keep], rho.kets[keep], rho.bras[keep]
    )
    p = render.position_distribution_density(diagonal, demo_grid, render.AMPLITUDE)
    predicted = render.distribution_stats(demo_grid, p).mean
    measured = render.wigner_moments(demo_phase_grid, surfaces[DAMP_KTS[-1]]).mean_x
    ratio = measured / predicted if predicted != 0.0 else math.inf
    ok = 0.9 <= ratio <= 1.1
    report(
        "damped-center-prediction",
        ok,
        f"predicted mean {predicted:+.6f}, Wigner mean {measured:+.6f}, "
        f"ratio {ratio:.2f}",
    )


def test_classical_mixture_weights_are_exact():
    ok = True
    for N in (1, 5, 12, 20):
        mix = walker.classical_mixture(N, 0.0, DEMO_L)
        total = float(np.sum(mix.weights.real))
        exact = all(
            Fraction(w) == Fraction(math.comb(N, k), 2**N)
            for k, w in enumerate(mix.weights.real)
        )
        ok = ok and exact and total == 1.0
    report("mixture-exactness", ok, "binomial weights exact for N in {1, 5, 12, 20}")


def test_coherence_lifetime_value():
    value = decoherence.coherence_lifetime(DEMO_N, DEMO_L, 1.0)
    ok = value == 2.0
    report("lifetime-value", ok, f"T_N={value} for N=10, l=0.05, kappa=1")
