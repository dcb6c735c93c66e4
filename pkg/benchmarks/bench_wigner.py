"""Timing comparison of the numba and numpy Wigner kernels.

Runs both hot paths on a demo-scale workload: the dyad-sum kernel on a
damped ten-step walk (121 dyads) and the quadrature oracle on a
two-packet wavefunction, each over a 1024 x 256 phase-space grid.  The
numpy twins are always importable, so a single process can time both
implementations; compilation happens in an untimed warmup pass.

Usage:
    python3 benchmarks/bench_wigner.py [--repeats R] [--points N]
"""

import argparse
import time

import numpy as np

from cavitywalk import _kernels


def dyad_workload(rng, n_dyads):
    """Kernel arrays shaped like a damped demo walk: tight real centers,
    order-one weights, momentum kicks within a few units."""
    wc = rng.normal(size=n_dyads) + 1j * rng.normal(size=n_dyads)
    mx = rng.uniform(-0.5, 0.5, n_dyads)
    mp_ = rng.uniform(-0.5, 0.5, n_dyads)
    kx = rng.uniform(-3.0, 3.0, n_dyads)
    kp = rng.uniform(-3.0, 3.0, n_dyads)
    return wc, mx, mp_, kx, kp


def packet_wavefunction(xs):
    psi = np.exp(-((xs - 1.5) ** 2) / 2.0) + np.exp(-((xs + 1.5) ** 2) / 2.0 + 1j * xs)
    return psi / np.sqrt(np.sum(np.abs(psi) ** 2) * (xs[1] - xs[0]))


def best_of(repeats, fn):
    best = np.inf
    for _ in range(repeats):
        start = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - start)
    return best


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeats", type=int, default=5, help="timing passes, best kept")
    parser.add_argument("--points", type=int, default=1024, help="x grid points")
    args = parser.parse_args()

    rng = np.random.default_rng(2024)
    xs = np.linspace(-6.5, 6.5, args.points)
    ps = np.linspace(-4.0, 4.0, args.points // 4)
    wc, mx, mp_, kx, kp = dyad_workload(rng, 121)
    psi = packet_wavefunction(xs)
    dx = float(xs[1] - xs[0])

    active = _kernels.backend_name()
    print(f"active backend: {active}")
    print(f"grid {xs.size} x {ps.size}, {wc.size} dyads, repeats {args.repeats}")

    cases = [
        ("wigner_terms", lambda: _kernels.wigner_terms(wc, mx, mp_, kx, kp, xs, ps),
         lambda: _kernels.wigner_terms_numpy(wc, mx, mp_, kx, kp, xs, ps)),
        ("wigner_quadrature", lambda: _kernels.wigner_quadrature(psi, dx, ps),
         lambda: _kernels.wigner_quadrature_numpy(psi, dx, ps)),
    ]

    for name, selected, twin in cases:
        a = selected()  # warmup, compiles on the numba path
        b = twin()
        agree = float(np.max(np.abs(a - b)))
        t_sel = best_of(args.repeats, selected)
        t_np = best_of(args.repeats, twin)
        if active == "numba":
            speedup = f"speedup x{t_np / t_sel:.1f}"
        else:
            speedup = "no numba available for comparison"
        print(
            f"{name:>18}: {active} {t_sel * 1e3:8.2f} ms | numpy {t_np * 1e3:8.2f} ms"
            f" | max diff {agree:.2e} | {speedup}"
        )


if __name__ == "__main__":
    main()
