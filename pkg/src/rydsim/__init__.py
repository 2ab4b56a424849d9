"""Rydberg controlled-phase gate simulator and pulse-synthesis toolkit.

Builds controlled-phase gates on ground-Rydberg qubits from three pulse
families (invariant-engineered shortcut, adiabatic cosine ramps, resonant
truncated Gaussians), propagates them under Schrodinger or Lindblad
dynamics, and scores fidelity, robustness and decay resilience.
"""

__version__ = "0.1.0"

from .core import (
    DensityMatrix,
    InteractionSpec,
    Operator,
    StateVector,
    build_drive,
    build_rri,
    instantaneous_eigensystem,
    invariant_operator,
    invariant_residual,
    lr_decompose,
    lr_phase,
)
from .dynamics import (
    EvolutionResult,
    IntegratorConfig,
    NoiseSpec,
    evolve_lindblad,
    evolve_schrodinger,
)
from .errors import (
    ContractViolationError,
    DegeneratePointError,
    DimensionMismatchError,
    DomainError,
    InfeasibleError,
    IntegrationError,
    InvalidParameterError,
    RydsimError,
)
from .metrics import (
    AdiabaticPhases,
    SweepResult,
    adiabatic_phases,
    adiabaticity_monitor,
    fidelity_mixed,
    fidelity_pure,
)
from .protocols import (
    CPGSpec,
    GateResult,
    StepPhaseConfig,
    adiabatic_sequence,
    extract_gate_matrix,
    ideal_cpg,
    nonadiabatic_sequence,
    run_gate,
    sta_sequence,
    uniform_superposition,
)
from .pulses import (
    AdiabaticPulseParams,
    CubicPolynomial,
    GaussianPulseParams,
    LRPulseParams,
    PulseSample,
    adiabatic_pulse,
    calibrate_sigma,
    gaussian_pulse,
    lr_pulse,
    solve_alpha,
    solve_beta,
)
from .schedule import (
    DriveSegment,
    PulseSchedule,
    perturb,
    schedule_from_json,
    schedule_to_json,
)
