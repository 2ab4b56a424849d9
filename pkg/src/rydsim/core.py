"""States, operators and Hamiltonians for n-atom ground-Rydberg systems.

Each atom carries three levels ordered (|0>, |1>, |r>) mapped to indices
(0, 1, 2).  Multi-atom states live in the 3^n tensor-product space with
atom 0 (the control) most significant.  hbar = 1 throughout; energies in
rad/us.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad

from .errors import (
    ContractViolationError,
    DegeneratePointError,
    DimensionMismatchError,
    DomainError,
    IntegrationError,
    InvalidParameterError,
)
from .pulses import LRPulseParams, PulseSample, lr_pulse

LEVELS = 3
RYDBERG = 2


def dimension(n_atoms: int) -> int:
    return LEVELS**n_atoms


def basis_index(levels: tuple[int, ...] | list[int]) -> int:
    """Flat index of a product basis state, atom 0 most significant."""
    idx = 0
    for lv in levels:
        if not 0 <= lv < LEVELS:
            raise InvalidParameterError(f"level {lv} outside 0..2")
        idx = idx * LEVELS + lv
    return idx


def basis_levels(idx: int, n_atoms: int) -> tuple[int, ...]:
    """Inverse of basis_index."""
    out = []
    for k in range(n_atoms):
        out.append(idx // LEVELS ** (n_atoms - 1 - k) % LEVELS)
    return tuple(out)


@dataclass
class StateVector:
    """Pure state on the 3^n-dimensional n-atom space."""

    n_atoms: int
    amplitudes: np.ndarray

    def __post_init__(self):
        self.amplitudes = np.asarray(self.amplitudes, dtype=complex)
        if self.amplitudes.shape != (dimension(self.n_atoms),):
            raise DimensionMismatchError(
                f"expected {dimension(self.n_atoms)} amplitudes, "
                f"got shape {self.amplitudes.shape}"
            )

    @classmethod
    def from_levels(cls, levels: tuple[int, ...] | list[int]) -> "StateVector":
        n = len(levels)
        amp = np.zeros(dimension(n), dtype=complex)
        amp[basis_index(levels)] = 1.0
        return cls(n, amp)

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def normalized(self) -> "StateVector":
        return StateVector(self.n_atoms, self.amplitudes / self.norm())

    def rydberg_population(self) -> float:
        """Total population on basis states with any atom in |r>."""
        pops = np.abs(self.amplitudes) ** 2
        mask = np.array(
            [RYDBERG in basis_levels(i, self.n_atoms) for i in range(pops.size)]
        )
        return float(pops[mask].sum())

    def to_density_matrix(self) -> "DensityMatrix":
        return DensityMatrix(self.n_atoms, np.outer(self.amplitudes, self.amplitudes.conj()))


@dataclass
class DensityMatrix:
    """Mixed state on the 3^n-dimensional n-atom space."""

    n_atoms: int
    entries: np.ndarray

    def __post_init__(self):
        self.entries = np.asarray(self.entries, dtype=complex)
        d = dimension(self.n_atoms)
        if self.entries.shape != (d, d):
            raise DimensionMismatchError(
                f"expected {d}x{d} matrix, got shape {self.entries.shape}"
            )

    def trace(self) -> float:
        return float(np.trace(self.entries).real)

    def hermiticity_defect(self) -> float:
        return float(np.linalg.norm(self.entries - self.entries.conj().T))

    def min_eigenvalue(self) -> float:
        return float(np.linalg.eigvalsh(0.5 * (self.entries + self.entries.conj().T))[0])


@dataclass
class Operator:
    """Dense linear operator on the n-atom space."""

    n_atoms: int
    entries: np.ndarray

    def __post_init__(self):
        self.entries = np.asarray(self.entries, dtype=complex)
        d = dimension(self.n_atoms)
        if self.entries.shape != (d, d):
            raise DimensionMismatchError(
                f"expected {d}x{d} matrix, got shape {self.entries.shape}"
            )

    def hermiticity_defect(self) -> float:
        return float(np.linalg.norm(self.entries - self.entries.conj().T))


@dataclass(frozen=True)
class InteractionSpec:
    """Rydberg-Rydberg interaction strengths: control-target V and
    target-target V1, both in rad/us."""

    V: float
    V1: float = 0.0

    def __post_init__(self):
        if self.V < 0.0 or self.V1 < 0.0:
            raise InvalidParameterError("interaction strengths must be non-negative")


def embed_single(op3: np.ndarray, atom: int, n_atoms: int) -> np.ndarray:
    """Embed a 3x3 single-atom operator by identity on the other atoms."""
    if not 0 <= atom < n_atoms:
        raise DomainError(f"atom index {atom} outside 0..{n_atoms - 1}")
    out = np.ones((1, 1), dtype=complex)
    for k in range(n_atoms):
        out = np.kron(out, op3 if k == atom else np.eye(LEVELS, dtype=complex))
    return out


def build_drive(sample: PulseSample, atom: int, a_level: int, n_atoms: int) -> Operator:
    """Single-atom drive H = (1/2)[Omega(|r><a|e^{-i phi} + h.c.)
    + Delta(|a><a| - |r><r|)] embedded in the n-atom space."""
    if a_level not in (0, 1):
        raise InvalidParameterError(f"driven ground level must be 0 or 1, got {a_level}")
    h = np.zeros((LEVELS, LEVELS), dtype=complex)
    h[RYDBERG, a_level] = 0.5 * sample.omega * np.exp(-1j * sample.phi)
    h[a_level, RYDBERG] = 0.5 * sample.omega * np.exp(1j * sample.phi)
    h[a_level, a_level] += 0.5 * sample.delta
    h[RYDBERG, RYDBERG] -= 0.5 * sample.delta
    return Operator(n_atoms, embed_single(h, atom, n_atoms))


def build_rri(n_atoms: int, spec: InteractionSpec) -> Operator:
    """Diagonal pairwise Rydberg-Rydberg interaction: strength V for each
    (control, target) pair and V1 for each (target, target) pair."""
    if n_atoms < 2:
        raise DomainError("interactions need at least 2 atoms")
    d = dimension(n_atoms)
    diag = np.zeros(d)
    for idx in range(d):
        ryd = [k for k, lv in enumerate(basis_levels(idx, n_atoms)) if lv == RYDBERG]
        e = 0.0
        for i, j in zip(*np.triu_indices(len(ryd), k=1)):
            e += spec.V if ryd[i] == 0 else spec.V1
        diag[idx] = e
    return Operator(n_atoms, np.diag(diag.astype(complex)))


@dataclass(frozen=True)
class AdiabaticEigensystem:
    """Instantaneous dressed states of the driven two-level system.

    States are 2-vectors on the ordered basis (|a>, |r>).
    """

    theta: float
    omega_total: float
    phi_plus: np.ndarray
    phi_minus: np.ndarray
    e_plus: float
    e_minus: float


def instantaneous_eigensystem(sample: PulseSample) -> AdiabaticEigensystem:
    """Dressed states of H = (Omega/2)(|r><a|e^{-i phi}+h.c.)
    + (Delta/2)(|a><a|-|r><r|), with mixing angle
    theta = arccos(Delta / sqrt(Delta^2 + Omega^2))."""
    omega_total = math.hypot(sample.omega, sample.delta)
    if omega_total == 0.0:
        raise DegeneratePointError("eigensystem undefined at Omega = Delta = 0")
    # a negative Rabi frequency is the same drive with phase phi + pi
    phi = sample.phi if sample.omega >= 0.0 else sample.phi + math.pi
    theta = math.acos(sample.delta / omega_total)
    half = 0.5 * theta
    ph = np.exp(-1j * phi)
    phi_plus = np.array([math.cos(half), math.sin(half) * ph])
    phi_minus = np.array([-math.sin(half) * ph.conjugate(), math.cos(half)])
    return AdiabaticEigensystem(
        theta=theta,
        omega_total=omega_total,
        phi_plus=phi_plus,
        phi_minus=phi_minus,
        e_plus=0.5 * omega_total,
        e_minus=-0.5 * omega_total,
    )


def drive_2level(sample: PulseSample) -> np.ndarray:
    """The 2x2 driven block of the drive Hamiltonian on (|a>, |r>)."""
    return np.array(
        [
            [0.5 * sample.delta, 0.5 * sample.omega * np.exp(1j * sample.phi)],
            [0.5 * sample.omega * np.exp(-1j * sample.phi), -0.5 * sample.delta],
        ],
        dtype=complex,
    )


def invariant_operator(alpha: float, beta: float, chi: float = 1.0) -> np.ndarray:
    """Dynamical invariant on (|a>, |r>):
    I = (chi/2)[cos(alpha)(|a><a|-|r><r|) + sin(alpha)(|r><a|e^{-i beta}+h.c.)]."""
    c, s = math.cos(alpha), math.sin(alpha)
    return 0.5 * chi * np.array(
        [[c, s * np.exp(1j * beta)], [s * np.exp(-1j * beta), -c]], dtype=complex
    )


def invariant_eigenstates(alpha: float, beta: float) -> tuple[np.ndarray, np.ndarray]:
    """Eigenstates of the invariant: phi_plus with eigenvalue +chi/2,
    phi_minus with -chi/2, on the (|a>, |r>) basis."""
    half = 0.5 * alpha
    phi_plus = np.array([math.cos(half), math.sin(half) * np.exp(-1j * beta)])
    phi_minus = np.array([-math.sin(half) * np.exp(1j * beta), math.cos(half)])
    return phi_plus, phi_minus


def _invariant_time_derivative(alpha: float, beta: float, alpha_dot: float,
                               beta_dot: float, chi: float) -> np.ndarray:
    c, s = math.cos(alpha), math.sin(alpha)
    e = np.exp(1j * beta)
    d_upper = (alpha_dot * c + 1j * beta_dot * s) * e
    return 0.5 * chi * np.array(
        [[-alpha_dot * s, d_upper], [d_upper.conjugate(), alpha_dot * s]], dtype=complex
    )


def invariant_residual(t: float, params: LRPulseParams, chi: float = 1.0) -> float:
    """Frobenius norm of i*dI/dt - [H, I] with dI/dt taken analytically.

    Vanishes (to round-off) when H is the inverse-engineered drive built
    from the same alpha, beta.
    """
    sample = lr_pulse(t, params)
    h = drive_2level(sample)
    i_op = invariant_operator(params.alpha(t), params.beta(t), chi)
    di = _invariant_time_derivative(
        params.alpha(t),
        params.beta(t),
        params.alpha.derivative(t),
        params.beta.derivative(t),
        chi,
    )
    return float(np.linalg.norm(1j * di - (h @ i_op - i_op @ h)))


def lr_phase(params: LRPulseParams) -> float:
    """Total phase picked up along the +chi/2 invariant eigenstate:
    lambda_plus = (1/2) * integral of Delta - 2*Omega_tilde, with
    Omega_tilde = (Delta + beta_dot) cos^2(alpha/2)
                + (Omega/2) sin(alpha) cos(beta - phi).
    The -chi/2 branch accumulates -lambda_plus."""

    def integrand(t: float) -> float:
        sample = lr_pulse(t, params)
        al = params.alpha(t)
        bd = params.beta.derivative(t)
        omega_tilde = (sample.delta + bd) * math.cos(0.5 * al) ** 2 + (
            0.5 * sample.omega * math.sin(al) * math.cos(params.beta(t) - params.phi)
        )
        return 0.5 * (sample.delta - 2.0 * omega_tilde)

    value, err = quad(integrand, 0.0, params.t_f, epsabs=1e-10, limit=400)
    if err > 1e-6:
        raise IntegrationError(f"phase quadrature error estimate {err:.2e} too large")
    return float(value)


@dataclass(frozen=True)
class LRDecomposition:
    """Constant amplitudes of a state expanded on the invariant eigenstates."""

    c_plus: complex
    c_minus: complex
    lambda_plus: float | None = None


def lr_decompose(
    psi: np.ndarray, alpha: float, beta: float, a_level: int = 0
) -> LRDecomposition:
    """Expand a driven-subspace state on the invariant eigenstates.

    psi may be a 2-vector on (|a>, |r>) or a single-atom 3-vector; in the
    latter case the undriven ground level must carry at most 1e-6
    population.
    """
    psi = np.asarray(psi, dtype=complex)
    if psi.shape == (LEVELS,):
        other = 1 - a_level
        if abs(psi[other]) ** 2 > 1e-6:
            raise ContractViolationError(
                "state has population outside the driven two-level subspace"
            )
        psi = np.array([psi[a_level], psi[RYDBERG]])
    elif psi.shape != (2,):
        raise DimensionMismatchError(f"expected a 2- or 3-vector, got shape {psi.shape}")
    phi_plus, phi_minus = invariant_eigenstates(alpha, beta)
    return LRDecomposition(
        c_plus=complex(np.vdot(phi_plus, psi)),
        c_minus=complex(np.vdot(phi_minus, psi)),
    )
