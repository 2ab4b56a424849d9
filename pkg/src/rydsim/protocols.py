"""Controlled-phase gate protocols.

Three schemes build the same gate family:

* invariant-shortcut ("sta"): four inverse-engineered segments of length
  t_f each; the conditional phase theta is set through the step-(ii)
  boundary phases, theta = pi + beta3 - beta2;
* adiabatic: four cosine-ramp sweeps of 2*tau each with laser phases
  pi/2, 0, 0, -pi/2;
* non-adiabatic: resonant truncated-Gaussian pi / 2pi / pi pulses.

The control atom is index 0; targets are 1..n-1.  The interaction term
stays on for the whole schedule.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import (
    InteractionSpec,
    StateVector,
    basis_levels,
    dimension,
    DensityMatrix,
)
from .dynamics import (
    IntegratorConfig,
    NoiseSpec,
    evolve_lindblad,
    evolve_schrodinger,
)
from .errors import ContractViolationError, InvalidParameterError
from .metrics import fidelity_mixed, fidelity_pure
from .pulses import GaussianPulseParams, LRPulseParams, calibrate_sigma
from .schedule import DriveSegment, PulseSchedule

HALF_PI = 0.5 * math.pi


def _wrap_pi(x: float) -> float:
    """Wrap an angle into (-pi, pi]."""
    w = (x + math.pi) % (2.0 * math.pi) - math.pi
    return math.pi if w == -math.pi else w


@dataclass(frozen=True)
class StepPhaseConfig:
    """Boundary phases of the three invariant-shortcut steps.

    Finite drives at the segment boundaries require beta2 - phi1 = pi/2
    and beta3 - phi2 = pi/2; the return step needs phi3 = pi and the
    excitation step uses beta1 = pi/2.
    """

    beta1: float
    beta2: float
    beta3: float
    phi1: float
    phi2: float
    phi3: float

    def __post_init__(self):
        checks = (
            ("beta1", self.beta1 - HALF_PI),
            ("beta2 - phi1", self.beta2 - self.phi1 - HALF_PI),
            ("beta3 - phi2", self.beta3 - self.phi2 - HALF_PI),
            ("phi3", self.phi3 - math.pi),
        )
        for name, resid in checks:
            if abs(resid) > 1e-9:
                raise InvalidParameterError(
                    f"phase constraint violated: {name} off by {resid:.3e} rad"
                )

    @classmethod
    def from_theta(cls, theta: float) -> "StepPhaseConfig":
        """Pick the constraint-satisfying member with beta2 = pi/2, so the
        first step-(ii) segment shares the step-(i) pulse shape."""
        beta2 = HALF_PI
        beta3 = theta - HALF_PI
        return cls(
            beta1=HALF_PI,
            beta2=beta2,
            beta3=beta3,
            phi1=beta2 - HALF_PI,
            phi2=beta3 - HALF_PI,
            phi3=math.pi,
        )

    @property
    def theta(self) -> float:
        """Conditional phase this configuration applies."""
        return _wrap_pi(math.pi + self.beta3 - self.beta2)


@dataclass(frozen=True)
class CPGSpec:
    """Target controlled-phase gate: 1 control + (n_qubits - 1) targets,
    conditional phase theta_j on target j."""

    n_qubits: int
    thetas: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "thetas", tuple(self.thetas))
        if self.n_qubits < 2:
            raise InvalidParameterError("need at least one control and one target")
        if len(self.thetas) != self.n_qubits - 1:
            raise InvalidParameterError("need one theta per target")
        for th in self.thetas:
            if not -math.pi - 1e-12 <= th <= math.pi + 1e-12:
                raise InvalidParameterError(f"theta {th} outside [-pi, pi]")


def sta_sequence(
    spec: CPGSpec,
    t_f: float,
    interactions: InteractionSpec,
    phases: tuple[StepPhaseConfig, ...] | None = None,
) -> PulseSchedule:
    """Invariant-shortcut schedule, total duration 4*t_f.

    Step (i): control |0> <-> |r>, phi = 0.  Step (ii): two consecutive
    segments on each target's |1> <-> |r>, all targets driven
    simultaneously.  Step (iii): control again with phi = pi.  Explicit
    phases override the default from_theta choice per target.
    """
    if phases is None:
        phases = tuple(StepPhaseConfig.from_theta(th) for th in spec.thetas)
    if len(phases) != spec.n_qubits - 1:
        raise InvalidParameterError("need one phase configuration per target")
    n = spec.n_qubits
    segments = [
        DriveSegment(
            atom=0,
            a_level=0,
            t_start=0.0,
            t_end=t_f,
            family="lr",
            params=LRPulseParams.from_boundaries(t_f, 0.0, HALF_PI),
            phi=0.0,
        )
    ]
    for target, ph in enumerate(phases, start=1):
        segments.append(
            DriveSegment(
                atom=target,
                a_level=1,
                t_start=t_f,
                t_end=2.0 * t_f,
                family="lr",
                params=LRPulseParams.from_boundaries(t_f, ph.phi1, ph.beta2),
                phi=ph.phi1,
            )
        )
        segments.append(
            DriveSegment(
                atom=target,
                a_level=1,
                t_start=2.0 * t_f,
                t_end=3.0 * t_f,
                family="lr",
                params=LRPulseParams.from_boundaries(t_f, ph.phi2, ph.beta3),
                phi=ph.phi2,
            )
        )
    segments.append(
        DriveSegment(
            atom=0,
            a_level=0,
            t_start=3.0 * t_f,
            t_end=4.0 * t_f,
            family="lr",
            params=LRPulseParams.from_boundaries(t_f, math.pi, HALF_PI + math.pi),
            phi=math.pi,
        )
    )
    thetas = tuple(ph.theta for ph in phases)
    return PulseSchedule(n, tuple(segments), interactions, thetas)


def adiabatic_sequence(
    omega0: float, delta0: float, tau: float, interactions: InteractionSpec
) -> PulseSchedule:
    """Two-qubit adiabatic pi-gate schedule, total duration 8*tau.

    Four identical cosine sweeps of 2*tau each: control with laser phase
    pi/2, target twice with phase 0, control with phase -pi/2.
    """
    from .pulses import AdiabaticPulseParams

    params = AdiabaticPulseParams(omega0, delta0, tau)
    plan = [
        (0, 0, 0.0, HALF_PI),
        (1, 1, 2.0 * tau, 0.0),
        (1, 1, 4.0 * tau, 0.0),
        (0, 0, 6.0 * tau, -HALF_PI),
    ]
    segments = tuple(
        DriveSegment(atom, a, t0, t0 + 2.0 * tau, "adiabatic", params, phi)
        for atom, a, t0, phi in plan
    )
    return PulseSchedule(2, segments, interactions, (math.pi,))


def nonadiabatic_sequence(
    omega_n: float, interactions: InteractionSpec, pi_window: float = 1.0
) -> PulseSchedule:
    """Two-qubit resonant Gaussian pi-gate schedule.

    A pi pulse on the control, a 2*pi pulse on the target with laser
    phase pi, then a pi pulse on the control with laser phase pi (so the
    two control pulses compose to the identity on the |0>, |r> pair).
    Widths come from area calibration; total duration 4*pi_window.
    """
    w = pi_window
    sigma_pi = calibrate_sigma(omega_n, w, math.pi)
    sigma_2pi = calibrate_sigma(omega_n, 2.0 * w, 2.0 * math.pi)
    p_pi = GaussianPulseParams(omega_n, sigma_pi, (0.0, w))
    p_2pi = GaussianPulseParams(omega_n, sigma_2pi, (0.0, 2.0 * w))
    segments = (
        DriveSegment(0, 0, 0.0, w, "gaussian", p_pi, 0.0),
        DriveSegment(1, 1, w, 3.0 * w, "gaussian", p_2pi, math.pi),
        DriveSegment(0, 0, 3.0 * w, 4.0 * w, "gaussian", p_pi, math.pi),
    )
    return PulseSchedule(2, segments, interactions, (math.pi,))


def computational_indices(n_atoms: int) -> np.ndarray:
    """Flat indices of the 2^n basis states with no Rydberg excitation."""
    dim = dimension(n_atoms)
    return np.array(
        [i for i in range(dim) if 2 not in basis_levels(i, n_atoms)], dtype=int
    )


def ideal_cpg(spec: CPGSpec) -> np.ndarray:
    """Diagonal 2^n x 2^n unitary with phase
    Theta = bit_c * (bit_1*theta_1 + ... + bit_{n-1}*theta_{n-1})."""
    n = spec.n_qubits
    phases = np.empty(2**n)
    for idx in range(2**n):
        bits = [(idx >> (n - 1 - k)) & 1 for k in range(n)]
        phases[idx] = bits[0] * sum(b * th for b, th in zip(bits[1:], spec.thetas))
    return np.diag(np.exp(1j * phases))


def uniform_superposition(n_atoms: int) -> StateVector:
    """Equal-amplitude superposition of all 2^n computational basis states."""
    amp = np.zeros(dimension(n_atoms), dtype=complex)
    amp[computational_indices(n_atoms)] = 2.0 ** (-0.5 * n_atoms)
    return StateVector(n_atoms, amp)


def ideal_final_state(schedule: PulseSchedule, initial: StateVector) -> StateVector:
    """The ideal gate defined by the schedule's thetas applied to initial."""
    spec = CPGSpec(schedule.n_atoms, schedule.thetas)
    comp = computational_indices(schedule.n_atoms)
    amp = initial.amplitudes.copy()
    amp[comp] = ideal_cpg(spec) @ amp[comp]
    return StateVector(schedule.n_atoms, amp)


def propagate_schedule(
    schedule: PulseSchedule,
    initial: StateVector,
    noise: NoiseSpec | None = None,
    config: IntegratorConfig | None = None,
) -> StateVector | DensityMatrix:
    """Propagate through all schedule windows in order.

    The fixed step count of the integrator config applies per window.
    """
    if noise is None:
        state = initial
        for window in schedule.windows:
            state = evolve_schrodinger(
                state, schedule.window_hamiltonian(window), window, config
            ).state
        return state
    rho = initial.to_density_matrix()
    for window in schedule.windows:
        rho = evolve_lindblad(
            rho, schedule.window_hamiltonian(window), noise, window, config
        ).state
    return rho


def _leakage(state: StateVector | DensityMatrix, n_atoms: int) -> float:
    comp = computational_indices(n_atoms)
    if isinstance(state, StateVector):
        total = float(np.sum(np.abs(state.amplitudes) ** 2))
        kept = float(np.sum(np.abs(state.amplitudes[comp]) ** 2))
    else:
        diag = np.diag(state.entries).real
        total = float(diag.sum())
        kept = float(diag[comp].sum())
    return total - kept


@dataclass
class GateResult:
    """Outcome of one gate execution."""

    final_state: StateVector | DensityMatrix
    fidelity: float
    leakage: float
    duration: float


def run_gate(
    schedule: PulseSchedule,
    initial: StateVector,
    noise: NoiseSpec | None = None,
    config: IntegratorConfig | None = None,
) -> GateResult:
    """Execute a gate and score it against the ideal controlled-phase gate.

    The initial state must live in the computational subspace (Rydberg
    population at most 1e-12).
    """
    if initial.rydberg_population() > 1e-12:
        raise ContractViolationError("initial state has Rydberg population")
    ideal = ideal_final_state(schedule, initial)
    final = propagate_schedule(schedule, initial, noise, config)
    if isinstance(final, StateVector):
        fid = fidelity_pure(ideal, final)
    else:
        fid = fidelity_mixed(ideal, final)
    return GateResult(
        final_state=final,
        fidelity=fid,
        leakage=_leakage(final, schedule.n_atoms),
        duration=schedule.duration,
    )


def extract_gate_matrix(
    schedule: PulseSchedule, config: IntegratorConfig | None = None
) -> tuple[np.ndarray, np.ndarray]:
    """Propagate every computational basis state (noiseless) and project
    onto the computational subspace.

    Returns the 2^n x 2^n gate matrix and the per-column leakage.
    """
    n = schedule.n_atoms
    comp = computational_indices(n)
    dim_c = comp.size
    gate = np.zeros((dim_c, dim_c), dtype=complex)
    leakage = np.zeros(dim_c)
    for col, idx in enumerate(comp):
        amp = np.zeros(dimension(n), dtype=complex)
        amp[idx] = 1.0
        final = propagate_schedule(schedule, StateVector(n, amp), None, config)
        gate[:, col] = final.amplitudes[comp]
        leakage[col] = _leakage(final, n)
    return gate, leakage
