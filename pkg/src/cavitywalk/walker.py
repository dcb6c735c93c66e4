"""Conditional random walk of a cavity field in coherent-amplitude space.

One atom, prepared in c1|e> + c2|g>, crosses the cavity and is detected
in |g> (or |e>).  The detection collapses the field into a superposition
of two coherent states displaced by +-gt/2, with branch weights set by
c+- = c1 +- c2 and a phase phi per step.  After N all-ground detections
the field is the closed-form superposition

    sum_{m=0..N} binom(N, m) e^{i(N-2m) phi} tan(theta)^(N-m) |alpha - (N-2m) l>

with l = gt/2 and c-/c+ = tan(theta), normalized over the nonorthogonal
Gram matrix of its coherent components.  This module owns that state
representation, the single-step and closed-form constructions, their
normalization, and the unconditioned (no-measurement) classical mixture.

Weights are stored unnormalized until an explicit normalize step because
the pre-normalization Gram norm is the probability of the conditioning
measurement record.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from math import comb, cos

import numpy as np

from . import fock, gram
from .errors import MeasurementImpossibleError, ParameterDomainError

# Components closer than this in amplitude are the same walk site; the
# closed form has N+1 distinct centers but iteration produces 2^N raw
# branches that must be re-merged.
MERGE_TOL = 1e-12


@dataclass(frozen=True)
class WalkParams:
    """All physical knobs of an N-step conditional walk.

    ``l`` is the step size gt/2; when ``g`` and ``t`` are also supplied
    they must be consistent with it.  ``theta`` parameterizes the atomic
    superposition through c-/c+ = tan(theta) and must stay away from
    pi/2 mod pi, where the closed form degenerates (the underlying state
    is still reachable through single_step).
    """

    alpha0: complex
    l: float
    theta: float
    phi: float
    N: int
    E_abs: float | None = None
    g: float | None = None
    t: float | None = None

    def __post_init__(self):
        if isinstance(self.l, complex):
            raise ParameterDomainError("step size l must be real; complex steps are rejected")
        if self.N < 0 or int(self.N) != self.N:
            raise ParameterDomainError(f"N must be a nonnegative integer, got {self.N}")
        if self.g is not None and self.t is not None:
            implied = self.g * self.t / 2.0
            if abs(implied - self.l) > 1e-12 * max(1.0, abs(self.l)):
                raise ParameterDomainError(
                    f"inconsistent step size: l = {self.l} but g*t/2 = {implied}"
                )
        if abs(cos(self.theta)) < 1e-12:
            raise ParameterDomainError(
                "theta is at pi/2 mod pi where tan(theta) diverges; "
                "reach this regime through single_step instead"
            )
        object.__setattr__(self, "alpha0", complex(self.alpha0))
        object.__setattr__(self, "N", int(self.N))

    @classmethod
    def from_drive(
        cls, alpha0: complex, theta: float, N: int, E_abs: float, g: float, t: float
    ) -> "WalkParams":
        """Derive l and phi from the drive parameters."""
        return cls(
            alpha0=alpha0,
            l=g * t / 2.0,
            theta=theta,
            phi=phi_of(E_abs, g, alpha0, t),
            N=N,
            E_abs=E_abs,
            g=g,
            t=t,
        )


@dataclass(frozen=True)
class WalkerState:
    """Weighted superposition sum_i w_i |c_i> of coherent states.

    ``normalized`` records whether the weights include the Gram
    normalization w^dag G w = 1; fresh single_step output does not.
    """

    weights: np.ndarray
    centers: np.ndarray
    normalized: bool = False

    def __post_init__(self):
        w = np.atleast_1d(np.asarray(self.weights, dtype=complex))
        c = np.atleast_1d(np.asarray(self.centers, dtype=complex))
        if w.shape != c.shape or w.ndim != 1 or w.size == 0:
            raise ValueError("weights and centers must be matching nonempty 1-D arrays")
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "centers", c)

    @property
    def n_components(self) -> int:
        return self.weights.size

    def to_json_dict(self) -> dict:
        return {
            "weights": [[z.real, z.imag] for z in self.weights],
            "centers": [[z.real, z.imag] for z in self.centers],
            "normalized": bool(self.normalized),
        }

    @classmethod
    def from_json_dict(cls, data: dict) -> "WalkerState":
        return cls(
            weights=np.array([complex(re, im) for re, im in data["weights"]]),
            centers=np.array([complex(re, im) for re, im in data["centers"]]),
            normalized=bool(data.get("normalized", False)),
        )

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict())


@dataclass(frozen=True)
class CoherentDyadDensity:
    """Mixed field state sum_d w_d |k_d><b_d| over coherent dyads.

    A physical density needs the Hermitian pairing: for every dyad
    (w, k, b) the partner (w*, b, k) must be present.  Use
    ``hermiticity_defect`` to verify.
    """

    weights: np.ndarray
    kets: np.ndarray
    bras: np.ndarray

    def __post_init__(self):
        w = np.atleast_1d(np.asarray(self.weights, dtype=complex))
        k = np.atleast_1d(np.asarray(self.kets, dtype=complex))
        b = np.atleast_1d(np.asarray(self.bras, dtype=complex))
        if not (w.shape == k.shape == b.shape) or w.ndim != 1 or w.size == 0:
            raise ValueError("weights, kets, bras must be matching nonempty 1-D arrays")
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "kets", k)
        object.__setattr__(self, "bras", b)

    @property
    def n_dyads(self) -> int:
        return self.weights.size

    def trace(self) -> complex:
        return gram.dyad_trace(self.weights, self.kets, self.bras)

    def to_json_dict(self) -> dict:
        return {
            "weights": [[z.real, z.imag] for z in self.weights],
            "kets": [[z.real, z.imag] for z in self.kets],
            "bras": [[z.real, z.imag] for z in self.bras],
        }

    @classmethod
    def from_json_dict(cls, data: dict) -> "CoherentDyadDensity":
        return cls(
            weights=np.array([complex(re, im) for re, im in data["weights"]]),
            kets=np.array([complex(re, im) for re, im in data["kets"]]),
            bras=np.array([complex(re, im) for re, im in data["bras"]]),
        )


def gram_overlap(beta: complex, gamma: complex) -> complex:
    """Coherent-state overlap <beta|gamma> = exp(beta* gamma - |beta|^2/2 - |gamma|^2/2)."""
    beta = complex(beta)
    gamma = complex(gamma)
    return complex(
        np.exp(np.conj(beta) * gamma - 0.5 * (abs(beta) ** 2 + abs(gamma) ** 2))
    )


def gram_matrix(centers: np.ndarray) -> np.ndarray:
    """Pairwise overlap matrix G_ij = <c_i|c_j>; Hermitian positive semidefinite."""
    c = np.asarray(centers, dtype=complex)
    return np.exp(
        np.conj(c)[:, None] * c[None, :]
        - 0.5 * (np.abs(c) ** 2)[:, None]
        - 0.5 * (np.abs(c) ** 2)[None, :]
    )


def gram_norm_sq(state: WalkerState) -> float:
    """Squared Gram norm of the state; the probability of its measurement record."""
    return gram.norm_sq(state.weights, state.centers)


def phi_of(E_abs: float, g: float, alpha0: complex, t: float) -> float:
    """Per-step phase phi = (|E| + (g/2) Im alpha) t."""
    return (E_abs + 0.5 * g * complex(alpha0).imag) * t


def merge_components(weights: np.ndarray, centers: np.ndarray, tol: float = MERGE_TOL) -> tuple[np.ndarray, np.ndarray]:
    """Add up weights of components whose centers coincide within tol.

    First-occurrence order is kept so repeated runs are deterministic.
    """
    out_w: list[complex] = []
    out_c: list[complex] = []
    for w, c in zip(weights, centers):
        for idx, existing in enumerate(out_c):
            if abs(c - existing) <= tol:
                out_w[idx] += w
                break
        else:
            out_w.append(complex(w))
            out_c.append(complex(c))
    return np.array(out_w, dtype=complex), np.array(out_c, dtype=complex)


def single_step(
    field: WalkerState,
    c1: complex,
    c2: complex,
    gt: float,
    phi: float,
    outcome: str,
) -> WalkerState:
    """One atom crossing plus conditional detection, unnormalized.

    Each component (w, c) spawns w c+ e^{-i phi}/2 at c + gt/2 and
    +- w c- e^{+i phi}/2 at c - gt/2, the upper sign for detection in
    |g> and the lower for |e>, with c+- = c1 +- c2.  A detection whose
    branch has zero Gram norm is impossible and raises.
    """
    if outcome not in ("g", "e"):
        raise ParameterDomainError(f"outcome must be 'g' or 'e', got {outcome!r}")
    c1 = complex(c1)
    c2 = complex(c2)
    if abs(abs(c1) ** 2 + abs(c2) ** 2 - 1.0) > 1e-10:
        raise ParameterDomainError("atomic state (c1, c2) must be normalized")
    cp = c1 + c2
    cm = c1 - c2
    sign = 1.0 if outcome == "g" else -1.0
    up = 0.5 * cp * np.exp(-1j * phi)
    down = sign * 0.5 * cm * np.exp(1j * phi)
    raw_w = np.concatenate([field.weights * up, field.weights * down])
    raw_c = np.concatenate([field.centers + gt / 2.0, field.centers - gt / 2.0])
    w, c = merge_components(raw_w, raw_c)
    keep = w != 0.0
    if not np.any(keep):
        raise MeasurementImpossibleError(f"outcome {outcome!r} has zero probability")
    w, c = w[keep], c[keep]
    if gram.norm_sq(w, c) < 1e-24:
        raise MeasurementImpossibleError(f"outcome {outcome!r} has zero probability")
    return WalkerState(w, c, normalized=False)


def walk(params: WalkParams) -> WalkerState:
    """Closed-form N-step walker state, Gram-normalized.

    Component m = 0..N carries weight binom(N, m) e^{i(N-2m) phi}
    tan(theta)^(N-m) at center alpha0 - (N-2m) l, then the whole list is
    normalized over its Gram matrix.
    """
    n = params.N
    if n == 0:
        return WalkerState(np.array([1.0 + 0j]), np.array([params.alpha0]), normalized=True)
    tan_theta = np.tan(params.theta)
    m = np.arange(n + 1)
    weights = (
        np.array([comb(n, int(mm)) for mm in m], dtype=complex)
        * np.exp(1j * (n - 2 * m) * params.phi)
        * tan_theta ** (n - m)
    )
    if not np.all(np.isfinite(weights)):
        raise ParameterDomainError(
            f"tan(theta)^N overflowed for theta = {params.theta}, N = {n}"
        )
    centers = params.alpha0 - (n - 2 * m) * params.l
    weights, centers = merge_components(weights, centers)
    return normalize(WalkerState(weights, centers, normalized=False))


def normalize(state: WalkerState) -> WalkerState:
    """Rescale weights so that w^dag G w = 1; relative weights unchanged.

    The scale factor is computed in high precision (see the gram
    module); zero-norm input means an impossible measurement record.
    """
    try:
        weights, _ = gram.normalized_weights(state.weights, state.centers)
    except ValueError as exc:
        raise MeasurementImpossibleError(str(exc)) from None
    return WalkerState(weights, state.centers, normalized=True)


def classical_mixture(N: int, alpha0: complex, l: float) -> CoherentDyadDensity:
    """Field state when the atoms are never measured: a binomial mixture.

    Diagonal dyads at alpha0 + p l for p = -N..N step 2 with weights
    binom(N, (N-p)/2) / 2^N.  The weights are dyadic rationals, exactly
    representable in binary floating point for moderate N, so the trace
    is exactly 1.
    """
    if N < 0 or int(N) != N:
        raise ParameterDomainError(f"N must be a nonnegative integer, got {N}")
    ps = np.arange(-N, N + 1, 2)
    weights = np.array([comb(N, (N - int(p)) // 2) for p in ps], dtype=float) / float(2**N)
    centers = complex(alpha0) + ps * float(l)
    return CoherentDyadDensity(weights.astype(complex), centers.astype(complex), centers.astype(complex))


def dyad_expansion(state: WalkerState) -> CoherentDyadDensity:
    """Pure-state density: dyads w_i w_j* |c_i><c_j| over all pairs."""
    w = state.weights
    c = state.centers
    ww = (w[:, None] * np.conj(w)[None, :]).ravel()
    kets = np.repeat(c, c.size)
    bras = np.tile(c, c.size)
    return CoherentDyadDensity(ww, kets, bras)


def hermiticity_defect(rho: CoherentDyadDensity, center_tol: float = 1e-9) -> float:
    """Largest deviation from the Hermitian dyad pairing.

    For each dyad (w, k, b) the best-matching partner with (ket, bra)
    close to (b, k) is located; the defect is the worst |w - w_partner*|.
    Missing partners count as infinite.
    """
    worst = 0.0
    for d in range(rho.n_dyads):
        mismatch = np.abs(rho.kets - rho.bras[d]) + np.abs(rho.bras - rho.kets[d])
        candidates = np.flatnonzero(mismatch <= center_tol)
        if candidates.size == 0:
            return float("inf")
        defect = float(np.min(np.abs(np.conj(rho.weights[candidates]) - rho.weights[d])))
        worst = max(worst, defect)
    return worst


def to_density_matrix(rho: CoherentDyadDensity, dim: int | None = None) -> np.ndarray:
    """Render the dyad set as a matrix on the truncated number basis."""
    if dim is None:
        biggest = float(max(np.max(np.abs(rho.kets)), np.max(np.abs(rho.bras))))
        dim = fock.adequate_dim(biggest)
    out = np.zeros((dim, dim), dtype=complex)
    for w, k, b in zip(rho.weights, rho.kets, rho.bras):
        kv = fock.coherent_vector(k, dim).amplitudes
        bv = fock.coherent_vector(b, dim).amplitudes
        out += w * np.outer(kv, bv.conj())
    return out


def to_fock_vector(state: WalkerState, dim: int | None = None) -> fock.FockVector:
    """Render the superposition as a field-only truncated Fock vector."""
    if dim is None:
        dim = fock.adequate_dim(float(np.max(np.abs(state.centers))))
    amps = np.zeros(dim, dtype=complex)
    for w, c in zip(state.weights, state.centers):
        amps += w * fock.coherent_vector(c, dim).amplitudes
    return fock.FockVector(amps, spin_dim=1)
