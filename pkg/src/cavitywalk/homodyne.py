"""Probe-atom readout of the walker field via reference-field injection.

Injecting a reference amplitude beta displaces every component of the
superposition, D(beta)|gamma> = e^{(beta gamma* - beta* gamma)/2}
|beta + gamma>, so the displaced Fock amplitudes are

    F_n = sum_m w_m e^{(beta c_m* - beta* c_m)/2} <n|beta + c_m>.

A probe atom coupled for time t_p then exits in its ground state with
probability P_g = sum_n |F_n|^2 cos^2(gt_p sqrt(n)).  Scanning
beta = -alpha0 + delta makes P_g(delta) peak where delta cancels a
walker component, i.e. at minus the walker's signed displacement.

All of this lives in amplitude space; comparisons against x-space peaks
from the render module use the coordinate mapping of whichever render
convention produced them (identity for real amplitudes in the packet
picture, sqrt(2) Re alpha in the quadrature picture).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ParameterDomainError, TruncationError
from .render import QuadGrid
from .walker import WalkerState


@dataclass(frozen=True)
class ProbeSpec:
    """Injection amplitude, probe coupling angle, and Fock cutoff."""

    beta: complex
    gt_p: float
    n_max: int

    def __post_init__(self):
        object.__setattr__(self, "beta", complex(self.beta))
        if not self.gt_p > 0.0:
            raise ParameterDomainError(f"probe coupling gt_p must be positive, got {self.gt_p}")
        if int(self.n_max) != self.n_max or self.n_max < 0:
            raise ParameterDomainError(f"n_max must be a nonnegative integer, got {self.n_max}")
        object.__setattr__(self, "n_max", int(self.n_max))


def default_n_max(beta: complex, centers: np.ndarray) -> int:
    """Fock cutoff from the Poisson-tail bound at the largest displaced
    amplitude |beta| + max|c_m|."""
    budget = abs(beta) + (float(np.max(np.abs(centers))) if len(centers) else 0.0)
    return math.ceil(budget * budget + 8.0 * budget + 16.0)


@dataclass(frozen=True)
class DisplacedSpectrum:
    """F_n array together with the cutoff used and the missing tail mass."""

    amplitudes: np.ndarray
    n_max: int
    tail_mass: float


def displaced_fock_amplitudes(
    state: WalkerState, beta: complex, n_max: int | None = None
) -> DisplacedSpectrum:
    """Fock amplitudes F_0..F_{n_max} of the displaced walker state.

    The state must be normalized; sum |F_n|^2 then equals 1 up to the
    truncated tail.  A tail above 1e-8 raises TruncationError carrying
    the achieved tail mass.
    """
    if not state.normalized:
        raise ParameterDomainError("displaced_fock_amplitudes needs a normalized state")
    beta = complex(beta)
    if n_max is None:
        n_max = default_n_max(beta, state.centers)
    gamma = beta + state.centers
    phase = np.exp((beta * np.conj(state.centers) - np.conj(beta) * state.centers) / 2.0)
    coeff = state.weights * phase * np.exp(-0.5 * np.abs(gamma) ** 2)
    f = np.empty(n_max + 1, dtype=complex)
    term = coeff.copy()
    f[0] = term.sum()
    for n in range(1, n_max + 1):
        term *= gamma / math.sqrt(n)
        f[n] = term.sum()
    tail = abs(1.0 - float(np.sum(np.abs(f) ** 2)))
    if tail > 1e-8:
        raise TruncationError(
            f"Fock cutoff n_max={n_max} leaves tail mass {tail:.3e} above 1e-8",
            tail_mass=tail,
        )
    return DisplacedSpectrum(amplitudes=f, n_max=n_max, tail_mass=tail)


def probe_ground_probability(f, gt_p: float) -> float:
    """P_g = sum_n |F_n|^2 cos^2(gt_p sqrt(n)), clipped to [0, 1]."""
    if not gt_p > 0.0:
        raise ParameterDomainError(f"probe coupling gt_p must be positive, got {gt_p}")
    amps = np.asarray(getattr(f, "amplitudes", f), dtype=complex)
    n = np.arange(amps.size)
    p = float(np.sum(np.abs(amps) ** 2 * np.cos(gt_p * np.sqrt(n)) ** 2))
    return min(1.0, max(0.0, p))


@dataclass(frozen=True)
class ScanResult:
    """Per-delta probe readout; failed points carry NaN P_g."""

    delta: np.ndarray
    p_g: np.ndarray
    n_max_used: np.ndarray
    tail_mass: np.ndarray


def delta_scan(
    state: WalkerState,
    alpha0: complex,
    delta_grid: QuadGrid,
    gt_p: float,
    n_max: int | None = None,
) -> ScanResult:
    """P_g(delta) for beta = -alpha0 + delta across the grid.

    Each point is evaluated independently; a cutoff failure marks that
    row with NaN and its achieved tail mass instead of aborting the scan.
    """
    deltas = delta_grid.values()
    p_g = np.empty(deltas.size)
    used = np.empty(deltas.size, dtype=np.int64)
    tails = np.empty(deltas.size)
    for i, d in enumerate(deltas):
        beta = -complex(alpha0) + d
        try:
            spec = displaced_fock_amplitudes(state, beta, n_max)
        except TruncationError as exc:
            p_g[i] = np.nan
            used[i] = n_max if n_max is not None else default_n_max(beta, state.centers)
            tails[i] = exc.tail_mass if exc.tail_mass is not None else np.nan
            continue
        p_g[i] = probe_ground_probability(spec, gt_p)
        used[i] = spec.n_max
        tails[i] = spec.tail_mass
    return ScanResult(delta=deltas, p_g=p_g, n_max_used=used, tail_mass=tails)


def sample_detections(scan: ScanResult, shots: int, seed: int | None = None) -> np.ndarray:
    """Synthetic ground-state detection counts, binomial per scan point.

    Returns one count per delta; failed scan points are marked -1.
    Deterministic for a fixed seed.
    """
    if shots <= 0:
        raise ParameterDomainError(f"shots must be positive, got {shots}")
    rng = np.random.default_rng(seed)
    counts = np.full(scan.p_g.size, -1, dtype=np.int64)
    ok = np.isfinite(scan.p_g)
    counts[ok] = rng.binomial(shots, np.clip(scan.p_g[ok], 0.0, 1.0))
    return counts
