"""Fidelity measures, adiabaticity diagnostics and adiabatic phases."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.integrate import quad

from .core import DensityMatrix, StateVector
from .errors import (
    DegeneratePointError,
    DimensionMismatchError,
    IntegrationError,
    InvalidParameterError,
)
from .pulses import PulseSample


def _amplitudes(state: StateVector | np.ndarray) -> np.ndarray:
    if isinstance(state, StateVector):
        return state.amplitudes
    return np.asarray(state, dtype=complex)


def fidelity_pure(ideal: StateVector | np.ndarray, actual: StateVector | np.ndarray) -> float:
    """Squared overlap |<ideal|actual>|^2."""
    a = _amplitudes(ideal)
    b = _amplitudes(actual)
    if a.shape != b.shape:
        raise DimensionMismatchError(f"state shapes differ: {a.shape} vs {b.shape}")
    return float(abs(np.vdot(a, b)) ** 2)


def fidelity_mixed(ideal: StateVector | np.ndarray, actual: DensityMatrix | np.ndarray) -> float:
    """<ideal| rho |ideal> for a pure reference and a mixed actual state."""
    a = _amplitudes(ideal)
    rho = actual.entries if isinstance(actual, DensityMatrix) else np.asarray(actual)
    if rho.shape != (a.size, a.size):
        raise DimensionMismatchError(
            f"density matrix shape {rho.shape} does not match state size {a.size}"
        )
    return float((a.conj() @ rho @ a).real)


def adiabaticity_monitor(
    omega: float, delta: float, omega_dot: float, delta_dot: float
) -> float:
    """The adiabatic-condition ratio |(Omega*Delta_dot - Omega_dot*Delta)|
    / (Delta^2 + Omega^2)^(3/2); evolution is adiabatic when this stays
    far below 1."""
    omega_total = math.hypot(omega, delta)
    if omega_total == 0.0:
        raise DegeneratePointError("monitor undefined at Omega = Delta = 0")
    return abs(omega * delta_dot - omega_dot * delta) / omega_total**3


@dataclass(frozen=True)
class AdiabaticPhases:
    """Phase picked up along one instantaneous eigenstate branch."""

    dynamical: float
    geometric: float

    @property
    def total(self) -> float:
        return self.dynamical + self.geometric


def adiabatic_phases(
    pulse: Callable[[float], PulseSample],
    branch: int,
    span: tuple[float, float],
) -> AdiabaticPhases:
    """Dynamical and geometric phase along the +/- dressed-state branch.

    dynamical = -integral of E_branch with E_pm = +/- sqrt(Delta^2+Omega^2)/2;
    geometric = i*integral of <Phi|d/dt Phi> in the gauge where the first
    state component is real and non-negative, which reduces to
    sin^2(theta/2)*phi_dot on the + branch and cos^2(theta/2)*phi_dot on
    the - branch.  phi_dot is taken by central differences (the pulse
    families all carry piecewise-constant phi, making it zero except at
    isolated switches).
    """
    if branch not in (+1, -1):
        raise DegeneratePointError("branch must be +1 or -1")
    t0, t1 = span

    def energy(t: float) -> float:
        s = pulse(t)
        return 0.5 * branch * math.hypot(s.omega, s.delta)

    def connection(t: float) -> float:
        s = pulse(t)
        omega_total = math.hypot(s.omega, s.delta)
        if omega_total == 0.0:
            return 0.0
        h = 1e-6 * (t1 - t0)
        ta, tb = max(t0, t - h), min(t1, t + h)
        phi_dot = (pulse(tb).phi - pulse(ta).phi) / (tb - ta)
        half = 0.5 * math.acos(s.delta / omega_total)
        weight = math.sin(half) ** 2 if branch > 0 else math.cos(half) ** 2
        return weight * phi_dot

    dyn, err_d = quad(energy, t0, t1, epsabs=1e-10, limit=400)
    geo, err_g = quad(connection, t0, t1, epsabs=1e-10, limit=400)
    if max(err_d, err_g) > 1e-6:
        raise IntegrationError("phase quadrature did not converge")
    return AdiabaticPhases(dynamical=-dyn, geometric=geo)


@dataclass(frozen=True)
class SweepResult:
    """Fidelity table over a deviation grid for one scheme and axis."""

    scheme: str
    axis: str
    deviations: tuple[float, ...]
    fidelities: tuple[float, ...]

    def __post_init__(self):
        if len(self.deviations) != len(self.fidelities):
            raise DimensionMismatchError("grid and fidelity lengths differ")
        for f in self.fidelities:
            if not (math.isnan(f) or 0.0 <= f <= 1.0 + 1e-9):
                raise InvalidParameterError(f"fidelity {f} outside [0, 1]")
