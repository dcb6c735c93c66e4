"""Driven-cavity realization of a coined quantum walk on coherent states.

The package builds the conditional walker state produced by sending N
driven atoms through a cavity and post-selecting their ground-state
detections, renders it in coordinate and phase space, reads it out with
a probe-atom scan, and damps it analytically under cavity decay with a
Lindblad integrator as the cross-check.
"""

from .decoherence import (
    DampSpec,
    coherence_lifetime,
    damp,
    damp_small_kt,
    default_kt_schedule,
    purity,
)
from .errors import (
    CavityWalkError,
    ConfigError,
    ConventionError,
    IntegrationError,
    MeasurementImpossibleError,
    ParameterDomainError,
    ResolutionError,
    TruncationError,
)
from .fock import (
    FockOperator,
    FockVector,
    adequate_dim,
    coherent_vector,
    evolve_lindblad,
    evolve_schrodinger,
    fidelity,
    with_spin,
)
from .hamiltonian import (
    DriveSpec,
    h_drive,
    h_effective,
    h_full,
    h_transformed,
    rwa_fidelity,
    transformed_spin_minus,
    transformed_spin_plus,
)
from .homodyne import (
    DisplacedSpectrum,
    ProbeSpec,
    ScanResult,
    delta_scan,
    displaced_fock_amplitudes,
    probe_ground_probability,
    sample_detections,
)
from .render import (
    PhaseGrid,
    QuadGrid,
    default_phase_grid,
    default_position_grid,
    position_distribution,
    position_distribution_diagonal,
    wavefunction,
    wigner_density,
    wigner_numeric_oracle,
    wigner_pure,
)
from .walker import (
    CoherentDyadDensity,
    WalkerState,
    WalkParams,
    classical_mixture,
    gram_overlap,
    normalize,
    phi_of,
    single_step,
    walk,
)

__version__ = "0.1.0"

__all__ = [
    "CavityWalkError",
    "ConfigError",
    "ConventionError",
    "IntegrationError",
    "MeasurementImpossibleError",
    "ParameterDomainError",
    "ResolutionError",
    "TruncationError",
    "FockOperator",
    "FockVector",
    "adequate_dim",
    "coherent_vector",
    "evolve_lindblad",
    "evolve_schrodinger",
    "fidelity",
    "with_spin",
    "DriveSpec",
    "h_drive",
    "h_effective",
    "h_full",
    "h_transformed",
    "rwa_fidelity",
    "transformed_spin_minus",
    "transformed_spin_plus",
    "WalkParams",
    "WalkerState",
    "CoherentDyadDensity",
    "classical_mixture",
    "gram_overlap",
    "normalize",
    "phi_of",
    "single_step",
    "walk",
    "QuadGrid",
    "PhaseGrid",
    "default_phase_grid",
    "default_position_grid",
    "position_distribution",
    "position_distribution_diagonal",
    "wavefunction",
    "wigner_density",
    "wigner_numeric_oracle",
    "wigner_pure",
    "ProbeSpec",
    "DisplacedSpectrum",
    "ScanResult",
    "delta_scan",
    "displaced_fock_amplitudes",
    "probe_ground_probability",
    "sample_detections",
    "DampSpec",
    "coherence_lifetime",
    "damp",
    "damp_small_kt",
    "default_kt_schedule",
    "purity",
    "__version__",
]
