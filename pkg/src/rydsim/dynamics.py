"""Time-dependent Schrodinger and Lindblad propagation.

Hamiltonians are passed as callables t -> ndarray and must be smooth over
the requested span; callers split schedules at segment boundaries and
propagate window by window.

Schrodinger methods:
  magnus4   two-exponential fourth-order commutator-free scheme, each
            exponential taken exactly via Hermitian eigendecomposition;
            exactly unitary at any step size (default)
  rk4       classical fixed-step Runge-Kutta
  adaptive  scipy DOP853 with configurable tolerance

Lindblad methods:
  split     Strang splitting: exact dissipator half-steps around an exact
            midpoint-Hamiltonian conjugation (default)
  rk4       classical fixed-step Runge-Kutta on the vectorized equation
  adaptive  scipy DOP853 on the vectorized equation
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.integrate import solve_ivp
from scipy.linalg import expm

from .core import DensityMatrix, StateVector, dimension, embed_single, LEVELS, RYDBERG
from .errors import IntegrationError, InvalidParameterError

_SQRT3_6 = math.sqrt(3.0) / 6.0

SCHRODINGER_METHODS = ("magnus4", "rk4", "adaptive")
LINDBLAD_METHODS = ("split", "rk4", "adaptive")


@dataclass(frozen=True)
class IntegratorConfig:
    """Propagation settings.

    method None selects the default for the equation being solved
    (magnus4 for Schrodinger, split for Lindblad).  steps is the fixed
    step count over the span; tolerance applies to the adaptive method.
    """

    method: str | None = None
    steps: int = 4000
    tolerance: float = 1e-10
    record_trajectory: bool = False
    sample_count: int = 201

    def __post_init__(self):
        if self.steps <= 0:
            raise InvalidParameterError("steps must be positive")
        if self.tolerance <= 0.0:
            raise InvalidParameterError("tolerance must be positive")
        if self.sample_count < 2:
            raise InvalidParameterError("sample_count must be at least 2")


@dataclass(frozen=True)
class NoiseSpec:
    """Spontaneous decay rates out of |r>: the control atom decays to
    |0>, each target atom decays to |1>.  Rates in 1/us."""

    gamma_r0: float
    gamma_r1: float

    def __post_init__(self):
        if self.gamma_r0 < 0.0 or self.gamma_r1 < 0.0:
            raise InvalidParameterError("decay rates must be non-negative")


@dataclass
class EvolutionResult:
    """Final state plus an optional trajectory sampled on a uniform grid."""

    state: StateVector | DensityMatrix
    times: np.ndarray | None = None
    trajectory: np.ndarray | None = None


def lindblad_operators(noise: NoiseSpec, n_atoms: int) -> list[np.ndarray]:
    """Collapse operators: sqrt(gamma_r0)|0><r| on atom 0 and
    sqrt(gamma_r1)|1><r| on each target atom."""
    ops = []
    l0 = np.zeros((LEVELS, LEVELS), dtype=complex)
    l0[0, RYDBERG] = math.sqrt(noise.gamma_r0)
    ops.append(embed_single(l0, 0, n_atoms))
    for atom in range(1, n_atoms):
        l1 = np.zeros((LEVELS, LEVELS), dtype=complex)
        l1[1, RYDBERG] = math.sqrt(noise.gamma_r1)
        ops.append(embed_single(l1, atom, n_atoms))
    return ops


def _expi(h_matrix: np.ndarray, psi: np.ndarray) -> np.ndarray:
    """exp(-i * h_matrix) @ psi via Hermitian eigendecomposition."""
    w, v = np.linalg.eigh(h_matrix)
    return v @ (np.exp(-1j * w) * (v.conj().T @ psi))


def _sample_indices(steps: int, sample_count: int) -> np.ndarray:
    return np.unique(np.round(np.linspace(0, steps, sample_count)).astype(int))


def evolve_schrodinger(
    psi0: StateVector,
    hamiltonian: Callable[[float], np.ndarray],
    span: tuple[float, float],
    config: IntegratorConfig | None = None,
) -> EvolutionResult:
    """Propagate i dpsi/dt = H(t) psi from span[0] to span[1]."""
    config = config or IntegratorConfig()
    method = config.method or "magnus4"
    if method not in SCHRODINGER_METHODS:
        raise InvalidParameterError(f"unknown method {method!r}")
    t0, t1 = span
    if t1 <= t0:
        raise InvalidParameterError("span must have positive duration")
    psi = psi0.amplitudes.astype(complex).copy()
    n = psi0.n_atoms

    if method == "adaptive":
        sol = solve_ivp(
            lambda t, y: -1j * (hamiltonian(t) @ y),
            (t0, t1),
            psi,
            method="DOP853",
            rtol=config.tolerance,
            atol=config.tolerance * 1e-2,
            t_eval=np.linspace(t0, t1, config.sample_count)
            if config.record_trajectory
            else None,
        )
        if not sol.success:
            raise IntegrationError(sol.message, time=float(sol.t[-1]) if sol.t.size else t0)
        final = StateVector(n, sol.y[:, -1])
        if config.record_trajectory:
            return EvolutionResult(final, sol.t, sol.y.T)
        return EvolutionResult(final)

    # grid endpoints are exact, so evaluation times never drift past t1
    grid = np.linspace(t0, t1, config.steps + 1)
    record = config.record_trajectory
    idx = _sample_indices(config.steps, config.sample_count) if record else None
    traj = [psi.copy()] if record and 0 in idx else []
    for k in range(config.steps):
        t, t_next = grid[k], grid[k + 1]
        h = t_next - t
        if method == "magnus4":
            h1 = hamiltonian(t + (0.5 - _SQRT3_6) * h)
            h2 = hamiltonian(t + (0.5 + _SQRT3_6) * h)
            a1 = h * ((0.25 + _SQRT3_6) * h1 + (0.25 - _SQRT3_6) * h2)
            a2 = h * ((0.25 - _SQRT3_6) * h1 + (0.25 + _SQRT3_6) * h2)
            psi = _expi(a2, _expi(a1, psi))
        else:
            f = lambda tt, y: -1j * (hamiltonian(tt) @ y)
            k1 = f(t, psi)
            k2 = f(t + 0.5 * h, psi + 0.5 * h * k1)
            k3 = f(t + 0.5 * h, psi + 0.5 * h * k2)
            k4 = f(t_next, psi + h * k3)
            psi = psi + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        if record and (k + 1) in idx:
            traj.append(psi.copy())
    final = StateVector(n, psi)
    if record:
        return EvolutionResult(final, grid[idx], np.array(traj))
    return EvolutionResult(final)


def _dissipator_superoperator(collapse_ops: list[np.ndarray], dim: int) -> np.ndarray:
    """Vectorized (column-stacking on row-major ravel) dissipator matrix D
    such that d vec(rho)/dt = D vec(rho) under pure dissipation."""
    eye = np.eye(dim, dtype=complex)
    d = np.zeros((dim * dim, dim * dim), dtype=complex)
    for L in collapse_ops:
        ll = L.conj().T @ L
        d += np.kron(L, L.conj())
        d -= 0.5 * (np.kron(ll, eye) + np.kron(eye, ll.conj()))
    return d


def _lindblad_rhs(hamiltonian, collapse_ops, lls):
    def f(t: float, y: np.ndarray) -> np.ndarray:
        dim = int(round(math.sqrt(y.size)))
        rho = y.reshape(dim, dim)
        ht = hamiltonian(t)
        drho = -1j * (ht @ rho - rho @ ht)
        for L, ll in zip(collapse_ops, lls):
            drho += L @ rho @ L.conj().T - 0.5 * (ll @ rho + rho @ ll)
        return drho.ravel()

    return f


def evolve_lindblad(
    rho0: DensityMatrix,
    hamiltonian: Callable[[float], np.ndarray],
    noise: NoiseSpec,
    span: tuple[float, float],
    config: IntegratorConfig | None = None,
) -> EvolutionResult:
    """Propagate the Lindblad master equation
    drho/dt = -i[H, rho] + sum_k (L_k rho L_k^dag - (1/2){L_k^dag L_k, rho})."""
    config = config or IntegratorConfig()
    method = config.method or "split"
    if method not in LINDBLAD_METHODS:
        raise InvalidParameterError(f"unknown method {method!r}")
    t0, t1 = span
    if t1 <= t0:
        raise InvalidParameterError("span must have positive duration")
    n = rho0.n_atoms
    dim = dimension(n)
    collapse_ops = lindblad_operators(noise, n)
    rho = rho0.entries.astype(complex).copy()

    if method == "adaptive":
        lls = [L.conj().T @ L for L in collapse_ops]
        sol = solve_ivp(
            _lindblad_rhs(hamiltonian, collapse_ops, lls),
            (t0, t1),
            rho.ravel(),
            method="DOP853",
            rtol=config.tolerance,
            atol=config.tolerance * 1e-2,
        )
        if not sol.success:
            raise IntegrationError(sol.message, time=float(sol.t[-1]) if sol.t.size else t0)
        return EvolutionResult(DensityMatrix(n, sol.y[:, -1].reshape(dim, dim)))

    h = (t1 - t0) / config.steps
    if method == "split":
        d_super = _dissipator_superoperator(collapse_ops, dim)
        half = expm(0.5 * h * d_super)
        for k in range(config.steps):
            t_mid = t0 + (k + 0.5) * h
            rho = (half @ rho.ravel()).reshape(dim, dim)
            w, v = np.linalg.eigh(hamiltonian(t_mid))
            u = v @ np.diag(np.exp(-1j * h * w)) @ v.conj().T
            rho = u @ rho @ u.conj().T
            rho = (half @ rho.ravel()).reshape(dim, dim)
        return EvolutionResult(DensityMatrix(n, rho))

    lls = [L.conj().T @ L for L in collapse_ops]
    f = _lindblad_rhs(hamiltonian, collapse_ops, lls)
    y = rho.ravel()
    # grid endpoints are exact, so evaluation times never drift past t1
    grid = np.linspace(t0, t1, config.steps + 1)
    for k in range(config.steps):
        t, t_next = grid[k], grid[k + 1]
        hk = t_next - t
        k1 = f(t, y)
        k2 = f(t + 0.5 * hk, y + 0.5 * hk * k1)
        k3 = f(t + 0.5 * hk, y + 0.5 * hk * k2)
        k4 = f(t_next, y + hk * k3)
        y = y + (hk / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
    return EvolutionResult(DensityMatrix(n, y.reshape(dim, dim)))
