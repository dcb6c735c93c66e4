"""Hamiltonians for a resonantly driven two-level atom in a cavity.

Three pictures of the same physics, with hbar = 1 throughout:

- ``h_full``: interaction-picture Hamiltonian
  -i g (S+ a - a^dag S-) + (S+ E + S- E*), the resonant atom-field
  coupling plus a classical drive of complex amplitude E.
- ``h_transformed``: the same generator conjugated into the frame of the
  drive term h = S+ E + S- E*.  Because h^2 = |E|^2 on the spin space,
  exp(i h t) = cos(|E|t) + i h sin(|E|t)/|E| and the conjugated spin
  operators have closed trigonometric forms.
- ``h_effective``: the strong-driving reduction obtained by dropping
  terms oscillating at exp(+-2i|E|t):
  g Sx (a - a^dag)/i + 2|E| Sx.  Valid when the drive phase satisfies
  E*^2/|E|^2 = 1, enforced here as E real and nonnegative; other phases
  must be rotated away first and the rotation is recorded.

``rwa_fidelity`` quantifies the reduction by integrating a state under
both the full and effective generators and returning the overlap.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from cmath import phase as arg

import numpy as np

from . import fock
from .errors import ConventionError, ParameterDomainError
from .fock import SPIN_MINUS, SPIN_PLUS, SPIN_X, SPIN_Z, FockOperator, FockVector


@dataclass(frozen=True)
class DriveSpec:
    """Coupling constants of the atom-field-drive system.

    ``g`` is the vacuum Rabi coupling, ``E`` the classical drive
    amplitude, both in rad/time.  ``phase_rotation`` records any phase
    angle already rotated out of the drive so that downstream consumers
    can undo it; it is set by :meth:`rotated`.
    """

    g: float
    E: complex
    phase_rotation: float = 0.0

    def __post_init__(self):
        if not self.g > 0:
            raise ParameterDomainError(f"coupling g must be positive, got {self.g}")
        object.__setattr__(self, "E", complex(self.E))

    @property
    def E_abs(self) -> float:
        return abs(self.E)

    @property
    def phase_ok(self) -> bool:
        """True when E*^2/|E|^2 = 1 under the real-nonnegative reading."""
        return self.E.imag == 0.0 and self.E.real >= 0.0

    def rotated(self) -> "DriveSpec":
        """Rotate the drive to a real-nonnegative amplitude, recording the angle."""
        if self.E == 0:
            return self
        angle = arg(self.E)
        return replace(self, E=complex(abs(self.E)), phase_rotation=self.phase_rotation + angle)


def h_drive(spec: DriveSpec, dim: int) -> FockOperator:
    """The drive term h = S+ E + S- E*, identity on the field."""
    spin = SPIN_PLUS * spec.E + SPIN_MINUS * np.conj(spec.E)
    return fock.spin_operator(spin, dim)


def h_full(spec: DriveSpec, dim: int) -> FockOperator:
    """Interaction-picture Hamiltonian -i g (S+ a - a^dag S-) + (S+ E + S- E*)."""
    a = fock.annihilation(dim)
    jc = -1j * spec.g * (np.kron(SPIN_PLUS, a) - np.kron(SPIN_MINUS, a.conj().T))
    return FockOperator(jc + h_drive(spec, dim).matrix, spin_dim=2)


def transformed_spin_plus(spec: DriveSpec, t: float) -> np.ndarray:
    """exp(iht) S+ exp(-iht) in closed form on the 2x2 spin space.

    S+ cos^2(|E|t) + (E*^2/|E|^2) sin^2(|E|t) S-
    - (2i E*/|E|) Sz sin(|E|t) cos(|E|t).
    At E = 0 the frame is trivial and S+ is returned unchanged.
    """
    if spec.E_abs == 0.0:
        return SPIN_PLUS.copy()
    c = np.cos(spec.E_abs * t)
    s = np.sin(spec.E_abs * t)
    ec = np.conj(spec.E)
    return (
        SPIN_PLUS * c * c
        + (ec * ec / spec.E_abs**2) * s * s * SPIN_MINUS
        - (2j * ec / spec.E_abs) * SPIN_Z * s * c
    )


def transformed_spin_minus(spec: DriveSpec, t: float) -> np.ndarray:
    """exp(iht) S- exp(-iht) in closed form on the 2x2 spin space.

    S- cos^2(|E|t) + (E^2/|E|^2) sin^2(|E|t) S+
    + (2i E/|E|) Sz sin(|E|t) cos(|E|t).
    """
    if spec.E_abs == 0.0:
        return SPIN_MINUS.copy()
    c = np.cos(spec.E_abs * t)
    s = np.sin(spec.E_abs * t)
    e = spec.E
    return (
        SPIN_MINUS * c * c
        + (e * e / spec.E_abs**2) * s * s * SPIN_PLUS
        + (2j * e / spec.E_abs) * SPIN_Z * s * c
    )


def h_transformed(spec: DriveSpec, t: float, dim: int) -> FockOperator:
    """Drive-frame Hamiltonian -i g (S+(t) a) + h.c. with the closed-form spin transform.

    At t = 0 this coincides with ``h_full`` with the drive term removed.
    """
    a = fock.annihilation(dim)
    m = -1j * spec.g * np.kron(transformed_spin_plus(spec, t), a)
    return FockOperator(m + m.conj().T, spin_dim=2)


def h_effective(spec: DriveSpec, dim: int) -> FockOperator:
    """Strong-driving effective Hamiltonian g Sx (a - a^dag)/i + 2|E| Sx.

    Requires the drive phase convention E*^2/|E|^2 = 1, enforced as E
    real and nonnegative; call ``spec.rotated()`` first for other
    phases (the rotation angle is recorded on the returned spec).
    """
    if not spec.phase_ok:
        raise ConventionError(
            "effective Hamiltonian requires E*^2/|E|^2 = 1, i.e. a real nonnegative "
            f"drive amplitude; got E = {spec.E} (arg {arg(spec.E):.6f} rad). "
            "Use DriveSpec.rotated() to rotate the drive and record the angle."
        )
    a = fock.annihilation(dim)
    momentum = (a - a.conj().T) / 1j  # out-of-phase quadrature, Hermitian
    mat = spec.g * np.kron(SPIN_X, momentum) + 2.0 * spec.E_abs * np.kron(
        SPIN_X, np.eye(dim, dtype=complex)
    )
    return FockOperator(mat, spin_dim=2)


def rwa_fidelity(spec: DriveSpec, psi0: FockVector, t: float, steps: int = 256) -> float:
    """Overlap |<psi_full(t)|psi_eff(t)>|^2 between full and effective evolution.

    Measures how well the strong-driving reduction tracks the exact
    dynamics from ``psi0`` over time ``t``; approaches 1 as |E|/g grows.
    """
    if spec.E_abs == 0.0:
        raise ParameterDomainError("rwa_fidelity needs |E| > 0; the reduction assumes a strong drive")
    if psi0.spin_dim != 2:
        raise ParameterDomainError("psi0 must be a composite spin+field vector")
    full = fock.evolve_schrodinger(h_full(spec, psi0.dim), psi0, t, steps=steps)
    eff = fock.evolve_schrodinger(h_effective(spec, psi0.dim), psi0, t, steps=steps)
    return fock.fidelity(full, eff)

def drive_propagator_spin(spec: DriveSpec, t: float) -> np.ndarray:
    """e^{i h t} on the bare spin for the drive term h = S+ E + S- E*.

    Built by eigendecomposition, independently of the closed-form
    transformed operators; conjugating with it is the numeric route the
    analytic forms are checked against.
    """
    h = np.array([[0.0, spec.E], [np.conj(spec.E), 0.0]], dtype=complex)
    vals, vecs = np.linalg.eigh(h)
    return (vecs * np.exp(1j * vals * t)) @ vecs.conj().T


def conjugated_spin(spec: DriveSpec, t: float, op: np.ndarray) -> np.ndarray:
    """e^{i h t} op e^{-i h t} with h the drive term, computed numerically."""
    u = drive_propagator_spin(spec, t)
    return u @ np.asarray(op, dtype=complex) @ u.conj().T
