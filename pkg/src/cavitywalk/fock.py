"""Truncated Fock (x) spin linear algebra and brute-force evolution oracles.

This module is the package's ground truth: analytic formulas elsewhere
are validated against direct integration in a truncated number basis.
The composite index order is fixed as (spin outer, Fock inner), so a
vector of dimension 2*dim stores the spin-up (excited) block first;
``ATOM_E = 0`` and ``ATOM_G = 1`` name the two spin rows.

Integrators are fixed-step classical RK4 with a step-doubling
convergence loop: system sizes are tiny, so robustness wins over speed.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Union

import numpy as np

from .errors import IntegrationError, TruncationError

ATOM_E = 0  # excited spin row
ATOM_G = 1  # ground spin row

# 2x2 spin matrices in the (|e>, |g>) basis
SPIN_PLUS = np.array([[0.0, 1.0], [0.0, 0.0]], dtype=complex)
SPIN_MINUS = np.array([[0.0, 0.0], [1.0, 0.0]], dtype=complex)
SPIN_X = (SPIN_PLUS + SPIN_MINUS) / 2.0
SPIN_Z = np.array([[0.5, 0.0], [0.0, -0.5]], dtype=complex)


@dataclass(frozen=True)
class FockVector:
    """State vector over (spin) x (truncated Fock) with fixed index order.

    ``spin_dim`` is 1 for field-only vectors (coherent states before the
    atom is attached) and 2 for composite atom-field vectors.
    """

    amplitudes: np.ndarray
    spin_dim: int = 2

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=complex)
        if self.spin_dim not in (1, 2):
            raise ValueError(f"spin_dim must be 1 or 2, got {self.spin_dim}")
        if amps.ndim != 1 or amps.size == 0 or amps.size % self.spin_dim != 0:
            raise ValueError("amplitudes must be a 1-D array of length spin_dim * dim")
        object.__setattr__(self, "amplitudes", amps)

    @property
    def dim(self) -> int:
        return self.amplitudes.size // self.spin_dim

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))


@dataclass(frozen=True)
class FockOperator:
    """Dense operator over the same composite basis as FockVector."""

    matrix: np.ndarray
    spin_dim: int = 2

    def __post_init__(self):
        mat = np.asarray(self.matrix, dtype=complex)
        if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
            raise ValueError("matrix must be square")
        if self.spin_dim not in (1, 2) or mat.shape[0] % self.spin_dim != 0:
            raise ValueError("matrix side must be spin_dim * dim")
        object.__setattr__(self, "matrix", mat)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0] // self.spin_dim


OperatorLike = Union[FockOperator, np.ndarray, Callable[[float], Union[FockOperator, np.ndarray]]]


def annihilation(dim: int) -> np.ndarray:
    """Field annihilation operator a on the truncated number basis."""
    return np.diag(np.sqrt(np.arange(1, dim, dtype=float)), 1).astype(complex)


def creation(dim: int) -> np.ndarray:
    return annihilation(dim).conj().T


def number_operator(dim: int) -> np.ndarray:
    return np.diag(np.arange(dim, dtype=float)).astype(complex)


def field_operator(mat: np.ndarray) -> FockOperator:
    """Lift a field-only matrix to the composite space (identity on spin)."""
    return FockOperator(np.kron(np.eye(2, dtype=complex), mat), spin_dim=2)


def spin_operator(spin_mat: np.ndarray, dim: int) -> FockOperator:
    """Lift a 2x2 spin matrix to the composite space (identity on field)."""
    return FockOperator(np.kron(spin_mat, np.eye(dim, dtype=complex)), spin_dim=2)


def basis_vector(spin: int, n: int, dim: int) -> FockVector:
    """Composite basis state |spin, n>."""
    if spin not in (ATOM_E, ATOM_G):
        raise ValueError("spin must be ATOM_E or ATOM_G")
    if not 0 <= n < dim:
        raise ValueError(f"Fock index {n} outside [0, {dim})")
    amps = np.zeros(2 * dim, dtype=complex)
    amps[spin * dim + n] = 1.0
    return FockVector(amps, spin_dim=2)


def adequate_dim(alpha_max: complex) -> int:
    """Truncation heuristic keeping the Poisson tail below 1e-10.

    dim >= |alpha|^2 + 8|alpha| + 16 covers desk-scale amplitudes.
    """
    a = abs(alpha_max)
    return int(np.ceil(a * a + 8.0 * a + 16.0))


def poisson_tail(alpha: complex, dim: int) -> float:
    """Probability mass of a coherent state beyond the truncation."""
    mu = abs(alpha) ** 2
    if mu == 0.0:
        return 0.0
    term = np.exp(-mu)
    cdf = term
    for n in range(1, dim):
        term *= mu / n
        cdf += term
    return max(0.0, 1.0 - cdf)


def coherent_vector(alpha: complex, dim: int) -> FockVector:
    """Field-only coherent state |alpha> on a dim-level truncation.

    Amplitudes follow <n|alpha> = exp(-|alpha|^2/2) alpha^n / sqrt(n!),
    renormalized to the truncated norm.  The truncated tail must stay
    below 1e-10; a larger tail raises TruncationError rather than being
    silently renormalized away.
    """
    if dim < 1:
        raise ValueError("dim must be >= 1")
    tail = poisson_tail(alpha, dim)
    if tail > 1e-10:
        raise TruncationError(
            f"coherent amplitude {alpha} needs dim >= {adequate_dim(alpha)}; "
            f"requested dim {dim} leaves tail mass {tail:.3e}",
            tail_mass=tail,
        )
    amps = np.zeros(dim, dtype=complex)
    amps[0] = np.exp(-0.5 * abs(alpha) ** 2)
    for n in range(1, dim):
        amps[n] = amps[n - 1] * alpha / np.sqrt(n)
    amps /= np.linalg.norm(amps)
    return FockVector(amps, spin_dim=1)


def with_spin(c_e: complex, c_g: complex, field: FockVector) -> FockVector:
    """Attach a spin state c_e|e> + c_g|g> to a field-only vector."""
    if field.spin_dim != 1:
        raise ValueError("field must be a spin_dim=1 vector")
    amps = np.concatenate([c_e * field.amplitudes, c_g * field.amplitudes])
    return FockVector(amps, spin_dim=2)


def fidelity(a: FockVector, b: FockVector) -> float:
    """|<a|b>|^2, symmetric, in [0, 1] for normalized inputs."""
    if a.spin_dim != b.spin_dim or a.dim != b.dim:
        raise ValueError(
            f"dimension mismatch: ({a.spin_dim}, {a.dim}) vs ({b.spin_dim}, {b.dim})"
        )
    val = abs(np.vdot(a.amplitudes, b.amplitudes)) ** 2
    return float(min(1.0, val))


def _as_matrix_provider(H: OperatorLike) -> Callable[[float], np.ndarray]:
    if callable(H) and not isinstance(H, (FockOperator, np.ndarray)):
        def provider(t: float) -> np.ndarray:
            val = H(t)
            return val.matrix if isinstance(val, FockOperator) else np.asarray(val, dtype=complex)
        return provider
    mat = H.matrix if isinstance(H, FockOperator) else np.asarray(H, dtype=complex)
    return lambda t: mat


def _rk4_schrodinger(provider: Callable[[float], np.ndarray], y0: np.ndarray, t: float, n: int) -> np.ndarray:
    h = t / n
    y = y0.astype(complex, copy=True)
    for k in range(n):
        tk = k * h
        h1 = provider(tk)
        h2 = provider(tk + 0.5 * h)
        h4 = provider(tk + h)
        k1 = -1j * (h1 @ y)
        k2 = -1j * (h2 @ (y + 0.5 * h * k1))
        k3 = -1j * (h2 @ (y + 0.5 * h * k2))
        k4 = -1j * (h4 @ (y + h * k3))
        y = y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
    return y


def evolve_schrodinger(
    H: OperatorLike,
    psi0: FockVector,
    t: float,
    steps: int = 64,
    tol: float = 1e-8,
    step_cap: int = 1 << 20,
) -> FockVector:
    """Integrate i d|psi>/dt = H|psi> from 0 to t.

    ``steps`` is the starting resolution; the count doubles until two
    successive refinements land within ``tol`` of each other in norm
    distance.  Non-convergence at ``step_cap`` raises IntegrationError
    carrying the achieved residual, as does norm drift beyond 1e-8.
    """
    provider = _as_matrix_provider(H)
    y0 = psi0.amplitudes
    if t == 0.0:
        return psi0
    n = max(1, int(steps))
    y_prev = _rk4_schrodinger(provider, y0, t, n)
    residual = np.inf
    while n <= step_cap:
        n *= 2
        y_next = _rk4_schrodinger(provider, y0, t, n)
        residual = float(np.linalg.norm(y_next - y_prev))
        y_prev = y_next
        if residual < tol:
            break
    else:
        raise IntegrationError(
            f"no convergence after {step_cap} steps (residual {residual:.3e})",
            residual=residual,
        )
    drift = abs(np.linalg.norm(y_prev) - np.linalg.norm(y0))
    if drift > 1e-8 * max(1.0, float(np.linalg.norm(y0))):
        raise IntegrationError(f"norm drift {drift:.3e} exceeds 1e-8", residual=drift)
    return FockVector(y_prev, spin_dim=psi0.spin_dim)


def _rk4_lindblad(a: np.ndarray, kappa: float, rho0: np.ndarray, t: float, n: int) -> np.ndarray:
    ad = a.conj().T
    nm = ad @ a
    h = t / n
    r = rho0.astype(complex, copy=True)

    def rhs(m: np.ndarray) -> np.ndarray:
        return kappa * (a @ m @ ad) - 0.5 * kappa * (nm @ m + m @ nm)

    for _ in range(n):
        k1 = rhs(r)
        k2 = rhs(r + 0.5 * h * k1)
        k3 = rhs(r + 0.5 * h * k2)
        k4 = rhs(r + h * k3)
        r = r + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
    return r


def evolve_lindblad(
    rho0: np.ndarray,
    kappa: float,
    t: float,
    steps: int = 256,
    tol: float = 1e-8,
    step_cap: int = 1 << 20,
) -> np.ndarray:
    """Evolve a field density matrix under pure photon loss at rate kappa.

    d rho/dt = kappa (a rho a^dag) - (kappa/2) {a^dag a, rho}.  The input
    is an already-rendered square matrix on the truncated number basis.
    Trace preservation (1e-8), Hermiticity (1e-10) and positivity
    (eigenvalue floor -1e-8) are verified on the result.
    """
    rho0 = np.asarray(rho0, dtype=complex)
    if rho0.ndim != 2 or rho0.shape[0] != rho0.shape[1]:
        raise ValueError("rho0 must be a square matrix")
    if kappa < 0:
        raise ValueError("kappa must be >= 0")
    if kappa == 0.0 or t == 0.0:
        return rho0.copy()
    a = annihilation(rho0.shape[0])
    n = max(1, int(steps))
    r_prev = _rk4_lindblad(a, kappa, rho0, t, n)
    residual = np.inf
    while n <= step_cap:
        n *= 2
        r_next = _rk4_lindblad(a, kappa, rho0, t, n)
        residual = float(np.linalg.norm(r_next - r_prev))
        r_prev = r_next
        if residual < tol:
            break
    else:
        raise IntegrationError(
            f"no convergence after {step_cap} steps (residual {residual:.3e})",
            residual=residual,
        )
    trace_drift = abs(np.trace(r_prev) - np.trace(rho0))
    if trace_drift > 1e-8:
        raise IntegrationError(f"trace drift {trace_drift:.3e} exceeds 1e-8", residual=float(trace_drift))
    herm = float(np.max(np.abs(r_prev - r_prev.conj().T)))
    if herm > 1e-10:
        raise IntegrationError(f"Hermiticity violation {herm:.3e} exceeds 1e-10", residual=herm)
    floor = float(np.min(np.linalg.eigvalsh((r_prev + r_prev.conj().T) / 2.0)))
    if floor < -1e-8:
        raise IntegrationError(f"negative eigenvalue {floor:.3e} below -1e-8 floor", residual=-floor)
    return r_prev
