"""Cavity damping of walker superpositions in closed form.

A decay channel with rate kappa acting for time t maps each coherent
dyad |c_m><c_n| to the damped dyad |c_m e^{-kt/2}><c_n e^{-kt/2}| with
its weight multiplied by

    exp[lam (c_m c_n* - (|c_m|^2 + |c_n|^2)/2)],   lam = 1 - e^{-kt}.

The bracket is the exponent of the amplitude-space overlap <c_n|c_m>,
so the factor is that overlap raised to the power lam.  Writing the
power through the exponent directly fixes the principal branch without
evaluating a logarithm; the exponent convention (ket amplitude times
conjugated bra amplitude) is the one that matches the Lindblad
integrator for complex amplitudes.

For kt << 1 the factor reduces to exp(-2 kt l^2 (n-m)^2) on a walk
ladder with spacing 2l, leaving amplitudes undamped; cross terms
between sites n and m die on the timescale T_N = 1/(kappa 2 N^2 l^2),
faster by N^2 than the cavity lifetime itself.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from . import gram, walker
from .errors import ParameterDomainError
from .walker import CoherentDyadDensity, WalkerState


@dataclass(frozen=True)
class DampSpec:
    """Decay rate and duration; only the product kt enters the channel."""

    kappa: float
    t: float

    def __post_init__(self):
        if self.kappa < 0.0:
            raise ParameterDomainError(f"decay rate kappa must be >= 0, got {self.kappa}")
        if self.t < 0.0:
            raise ParameterDomainError(f"time t must be >= 0, got {self.t}")

    @property
    def kt(self) -> float:
        return self.kappa * self.t

    @classmethod
    def from_kt(cls, kt: float) -> "DampSpec":
        return cls(kappa=float(kt), t=1.0)


def default_kt_schedule(N: int, l: float) -> list[float]:
    """kt checkpoints spanning interference death for an N-step walk:
    0, then 1/4, 1/2, and 2 times the inverse site-coherence scale N^2 l^2."""
    if N < 1 or not l > 0.0:
        raise ParameterDomainError(f"need N >= 1 and l > 0, got N={N}, l={l}")
    scale = N * N * l * l
    return [0.0, 0.25 / scale, 0.5 / scale, 2.0 / scale]


def damp(state: WalkerState, spec: DampSpec) -> CoherentDyadDensity:
    """Exact damped density of a normalized superposition.

    Amplitudes shrink by e^{-kt/2}; dyad weights pick up the overlap
    power factor described in the module docstring.  The output trace is
    renormalized to 1 (the channel is trace-preserving, so drift in the
    closed-form weights is bookkeeping, not physics).
    """
    if not state.normalized:
        raise ParameterDomainError("damp needs a normalized state")
    kt = spec.kt
    lam = -np.expm1(-kt)
    survive = np.exp(-0.5 * kt)
    c = state.centers
    w = state.weights
    exponent = lam * (
        c[:, None] * np.conj(c)[None, :]
        - 0.5 * (np.abs(c) ** 2)[:, None]
        - 0.5 * (np.abs(c) ** 2)[None, :]
    )
    weights = (w[:, None] * np.conj(w)[None, :]) * np.exp(exponent)
    kets = np.repeat(c * survive, c.size)
    bras = np.tile(c * survive, c.size)
    flat = weights.ravel()
    trace = gram.dyad_trace(flat, kets, bras)
    if abs(trace.imag) > 1e-10 * max(1.0, abs(trace.real)) or not trace.real > 0.0:
        raise ParameterDomainError(f"damped dyad set has non-positive trace {trace}")
    return CoherentDyadDensity(weights=flat / trace.real, kets=kets, bras=bras)


def damp_small_kt(state: WalkerState, spec: DampSpec, l: float) -> CoherentDyadDensity:
    """Leading-order damped density for kt << 1.

    Cross weights are multiplied by exp(-2 kt l^2 d^2) with d the site
    separation (c_m - c_n)/(2l); amplitudes are left undamped.  Warns
    when kt exceeds 0.1, where the dropped orders become visible.
    """
    if not state.normalized:
        raise ParameterDomainError("damp_small_kt needs a normalized state")
    if not l > 0.0:
        raise ParameterDomainError(f"site half-spacing l must be positive, got {l}")
    kt = spec.kt
    if kt > 0.1:
        warnings.warn(
            f"kt={kt:.3g} is outside the kt << 1 regime; use damp() instead",
            stacklevel=2,
        )
    c = state.centers
    w = state.weights
    d = (c[:, None] - c[None, :]) / (2.0 * l)
    factor = np.exp(-2.0 * kt * l * l * np.abs(d) ** 2)
    weights = (w[:, None] * np.conj(w)[None, :]) * factor
    kets = np.repeat(c, c.size)
    bras = np.tile(c, c.size)
    # No trace renormalization here: the leading-order weights drift from
    # unit trace by O(kt spread^2), and that drift is part of the
    # approximation error this function is meant to expose.
    return CoherentDyadDensity(weights=weights.ravel(), kets=kets, bras=bras)


def coherence_lifetime(N: int, l: float, kappa: float) -> float:
    """Cross-term lifetime T_N = 1/(kappa 2 N^2 l^2) of an N-step walk."""
    if N < 1:
        raise ParameterDomainError(f"need N >= 1, got {N}")
    if not l > 0.0:
        raise ParameterDomainError(f"need l > 0, got {l}")
    if not kappa > 0.0:
        raise ParameterDomainError(f"need kappa > 0, got {kappa}")
    return 1.0 / (kappa * 2.0 * N * N * l * l)


def purity(rho: CoherentDyadDensity) -> float:
    """Tr rho^2 through the Gram form; 1 for pure inputs, smaller for mixed.

    The quartic sum is evaluated in high precision, but the stored dyad
    weights are floats, so deeply cancelling superpositions resolve
    purity only to about 1e-5 absolute; the mathematical bound of 1 is
    enforced on the result.
    """
    if walker.hermiticity_defect(rho) > 1e-10:
        raise ParameterDomainError("purity needs a Hermitian dyad set")
    return min(1.0, gram.purity_sum(rho.weights, rho.kets, rho.bras))
