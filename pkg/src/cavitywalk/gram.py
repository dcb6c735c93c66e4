"""High-precision Gram reductions over coherent-state superpositions.

Superpositions of nearly parallel coherent states can carry individual
weights of order 1e5 while the physical state has norm 1: the Gram
quadratic form cancels catastrophically and float64 keeps only ~6 correct
digits (quartic forms such as the purity keep none).  Every scalar that
is produced by summing large cancelling Gram terms is therefore computed
here with mpmath at 40 significant digits and rounded once at the end.
Weights rounded back to float64 after an mpmath normalization carry a
true norm within a few 1e-12 of 1, so all array-valued pipelines stay in
float64.

Overlap convention: ``<beta|gamma> = exp(conj(beta)*gamma - |beta|^2/2 -
|gamma|^2/2)``.  The coordinate-space variants take the unit-width
Gaussian wavefunction centered at x = c for a real amplitude c, whose
overlap is ``exp(-(c1 - c2)^2/4)``; they are needed because that mapping
is not unitary, so coordinate-space norms differ from amplitude-space
norms.
"""

from __future__ import annotations

import numpy as np
import mpmath as mp

# 40 significant digits absorbs the ~12 digits lost to cancellation in
# the worst quartic reductions with a wide margin.
_DPS = 40


def _mpc(z: complex) -> mp.mpc:
    z = complex(z)
    return mp.mpc(z.real, z.imag)


def _mp_overlap(b: mp.mpc, k: mp.mpc) -> mp.mpc:
    return mp.e ** (mp.conj(b) * k - (abs(b) ** 2 + abs(k) ** 2) / 2)


def _mp_coord_overlap(b: mp.mpc, k: mp.mpc) -> mp.mpc:
    # real-center coordinate overlap; callers guarantee Im b = Im k = 0
    return mp.e ** (-(b - k) ** 2 / 4)


def norm_sq(weights: np.ndarray, centers: np.ndarray) -> float:
    """Squared Gram norm w^dag G w of sum_i w_i |c_i>."""
    with mp.workdps(_DPS):
        w = [_mpc(z) for z in weights]
        c = [_mpc(z) for z in centers]
        total = mp.fsum(
            mp.conj(w[i]) * w[j] * _mp_overlap(c[i], c[j])
            for i in range(len(w))
            for j in range(len(w))
        )
        return float(mp.re(total))


def coord_norm_sq(weights: np.ndarray, centers: np.ndarray) -> float:
    """Squared coordinate-space norm using real-center Gaussian overlaps."""
    with mp.workdps(_DPS):
        w = [_mpc(z) for z in weights]
        c = [_mpc(z) for z in centers]
        total = mp.fsum(
            mp.conj(w[i]) * w[j] * _mp_coord_overlap(c[i], c[j])
            for i in range(len(w))
            for j in range(len(w))
        )
        return float(mp.re(total))


def cross_norm(
    weights_a: np.ndarray,
    centers_a: np.ndarray,
    weights_b: np.ndarray,
    centers_b: np.ndarray,
) -> complex:
    """Inner product <psi_a|psi_b> between two superpositions."""
    with mp.workdps(_DPS):
        wa = [_mpc(z) for z in weights_a]
        ca = [_mpc(z) for z in centers_a]
        wb = [_mpc(z) for z in weights_b]
        cb = [_mpc(z) for z in centers_b]
        total = mp.fsum(
            mp.conj(wa[i]) * wb[j] * _mp_overlap(ca[i], cb[j])
            for i in range(len(wa))
            for j in range(len(wb))
        )
        return complex(total)


def gram_distance(
    weights_a: np.ndarray,
    centers_a: np.ndarray,
    weights_b: np.ndarray,
    centers_b: np.ndarray,
) -> float:
    """Phase-insensitive Hilbert-space distance between two superpositions.

    Returns sqrt(|a|^2 + |b|^2 - 2|<a|b>|), which is zero exactly when the
    states agree up to a global phase.
    """
    na = norm_sq(weights_a, centers_a)
    nb = norm_sq(weights_b, centers_b)
    ov = abs(cross_norm(weights_a, centers_a, weights_b, centers_b))
    return float(np.sqrt(max(0.0, na + nb - 2.0 * ov)))


def dyad_trace(weights: np.ndarray, kets: np.ndarray, bras: np.ndarray) -> complex:
    """Trace of sum_d w_d |k_d><b_d|, i.e. sum_d w_d <b_d|k_d>."""
    with mp.workdps(_DPS):
        total = mp.fsum(
            _mpc(w) * _mp_overlap(_mpc(b), _mpc(k))
            for w, k, b in zip(weights, kets, bras)
        )
        return complex(total)


def dyad_coord_trace(weights: np.ndarray, kets: np.ndarray, bras: np.ndarray) -> complex:
    """Coordinate-space trace of a dyad set with real centers."""
    with mp.workdps(_DPS):
        total = mp.fsum(
            _mpc(w) * _mp_coord_overlap(_mpc(b), _mpc(k))
            for w, k, b in zip(weights, kets, bras)
        )
        return complex(total)


def purity_sum(weights: np.ndarray, kets: np.ndarray, bras: np.ndarray) -> float:
    """Tr rho^2 for rho = sum_d w_d |k_d><b_d|.

    Tr rho^2 = sum_{d,e} w_d w_e <b_d|k_e><b_e|k_d>; this is the worst
    conditioned reduction in the package (quartic in the raw weights), so
    it stays entirely in mpmath.
    """
    with mp.workdps(_DPS):
        w = [_mpc(z) for z in weights]
        k = [_mpc(z) for z in kets]
        b = [_mpc(z) for z in bras]
        total = mp.fsum(
            w[d] * w[e] * _mp_overlap(b[d], k[e]) * _mp_overlap(b[e], k[d])
            for d in range(len(w))
            for e in range(len(w))
        )
        return float(mp.re(total))


def normalized_weights(weights: np.ndarray, centers: np.ndarray) -> tuple[np.ndarray, float]:
    """Divide weights by the Gram norm computed in high precision.

    Returns the rescaled float64 weights and the original squared norm.
    """
    n2 = norm_sq(weights, centers)
    if not (n2 > 0.0) or not np.isfinite(n2):
        raise ValueError(f"cannot normalize: squared Gram norm {n2!r}")
    with mp.workdps(_DPS):
        scale = mp.mpf(1) / mp.sqrt(mp.mpf(n2))
        out = np.array([complex(_mpc(z) * scale) for z in weights], dtype=complex)
    return out, n2
