"""Pulse families for ground-Rydberg drives.

Three families are provided:

* invariant-engineered pulses, where the Rabi frequency and detuning are
  derived from two cubic boundary-value polynomials alpha(t), beta(t)
  via Omega = alpha_dot / sin(beta - phi) and
  Delta = Omega * cot(alpha) * cos(beta - phi) - beta_dot;
* piecewise-cosine adiabatic ramps;
* truncated Gaussian resonant pulses with area calibration.

Units: angular frequencies in rad/us, times in us.  A quantity quoted as
"2*pi x X MHz" equals 2*pi*X rad/us.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq
from scipy.special import erf

from .errors import DomainError, InfeasibleError, InvalidParameterError

TWO_PI = 2.0 * math.pi

# Published truncated-Gaussian widths (us^2) for the pi and 2*pi pulses.
# They correspond to a pulse area of 2*pi (resp. 4*pi), i.e. twice the
# half-Rabi-cycle area used here; calibrate_sigma() is the authoritative
# source for widths and these are kept for side-by-side reporting only.
QUOTED_SIGMA = {"pi": 0.08293, "2pi": 0.33171}


def quoted_sigma(target_area: float) -> float | None:
    """Published sigma for a pi or 2*pi area target, else None."""
    if math.isclose(target_area, math.pi, rel_tol=1e-9):
        return QUOTED_SIGMA["pi"]
    if math.isclose(target_area, TWO_PI, rel_tol=1e-9):
        return QUOTED_SIGMA["2pi"]
    return None


@dataclass(frozen=True)
class CubicPolynomial:
    """c0 + c1*t + c2*t^2 + c3*t^3 on the domain [0, t_f]."""

    c0: float
    c1: float
    c2: float
    c3: float
    t_f: float

    @property
    def coefficients(self) -> tuple[float, float, float, float]:
        return (self.c0, self.c1, self.c2, self.c3)

    def __call__(self, t: float) -> float:
        return ((self.c3 * t + self.c2) * t + self.c1) * t + self.c0

    def derivative(self, t: float) -> float:
        return (3.0 * self.c3 * t + 2.0 * self.c2) * t + self.c1

    def second_derivative(self, t: float) -> float:
        return 6.0 * self.c3 * t + 2.0 * self.c2


@dataclass(frozen=True)
class PulseSample:
    """Drive values at one instant: Omega(t), Delta(t) and the laser phase."""

    t: float
    omega: float
    delta: float
    phi: float


def solve_alpha(t_f: float) -> CubicPolynomial:
    """Unique cubic with alpha(0)=0, alpha(t_f)=pi, alpha_dot(0)=alpha_dot(t_f)=0."""
    if t_f <= 0.0:
        raise InvalidParameterError(f"t_f must be positive, got {t_f}")
    # c0 = c1 = 0 from the t=0 conditions; solve the remaining 2x2 system.
    a = np.array([[t_f**2, t_f**3], [2.0 * t_f, 3.0 * t_f**2]])
    c2, c3 = np.linalg.solve(a, np.array([math.pi, 0.0]))
    return CubicPolynomial(0.0, 0.0, float(c2), float(c3), t_f)


def solve_beta(t_f: float, beta_endpoint: float) -> CubicPolynomial:
    """Unique cubic with beta(0)=beta(t_f)=beta_endpoint and
    beta_dot(0) = -beta_dot(t_f) = 3*pi/(2*t_f)."""
    if t_f <= 0.0:
        raise InvalidParameterError(f"t_f must be positive, got {t_f}")
    c1 = 3.0 * math.pi / (2.0 * t_f)
    a = np.array([[t_f**2, t_f**3], [2.0 * t_f, 3.0 * t_f**2]])
    c2, c3 = np.linalg.solve(a, np.array([-c1 * t_f, -2.0 * c1]))
    return CubicPolynomial(beta_endpoint, c1, float(c2), float(c3), t_f)


@dataclass(frozen=True)
class LRPulseParams:
    """Invariant-engineered pulse over one step of duration t_f.

    phi is the time-independent laser phase; beta_endpoint is the common
    value of beta at both boundaries.  The drive stays finite at the
    boundaries only when beta_endpoint - phi = pi/2 (mod pi).
    """

    t_f: float
    phi: float
    alpha: CubicPolynomial
    beta: CubicPolynomial
    beta_endpoint: float

    @classmethod
    def from_boundaries(
        cls, t_f: float, phi: float = 0.0, beta_endpoint: float = math.pi / 2
    ) -> "LRPulseParams":
        return cls(
            t_f=t_f,
            phi=phi,
            alpha=solve_alpha(t_f),
            beta=solve_beta(t_f, beta_endpoint),
            beta_endpoint=beta_endpoint,
        )


_EDGE_FRACTION = 1e-12


def lr_pulse(t: float, params: LRPulseParams) -> PulseSample:
    """Evaluate the invariant-engineered drive at time t in [0, t_f].

    At the boundaries Omega*cot(alpha)*cos(beta-phi) is a 0*inf*0 form;
    the analytic limit gives Omega = 0 and Delta = -3*beta_dot there.
    """
    t_f = params.t_f
    if not 0.0 <= t <= t_f:
        raise DomainError(f"t={t} outside pulse domain [0, {t_f}]")
    edge = _EDGE_FRACTION * t_f
    if t < edge or t > t_f - edge:
        psi0 = params.beta_endpoint - params.phi
        if abs(math.cos(psi0)) > 1e-9:
            raise InvalidParameterError(
                "detuning diverges at the boundary unless "
                "beta_endpoint - phi = pi/2 (mod pi)"
            )
        t_end = 0.0 if t < edge else t_f
        return PulseSample(t, 0.0, -3.0 * params.beta.derivative(t_end), params.phi)
    b = params.beta(t) - params.phi
    omega = params.alpha.derivative(t) / math.sin(b)
    delta = omega / math.tan(params.alpha(t)) * math.cos(b) - params.beta.derivative(t)
    return PulseSample(t, omega, delta, params.phi)


def lr_pulse_derivatives(t: float, params: LRPulseParams) -> tuple[float, float]:
    """Closed-form (Omega_dot, Delta_dot); valid on the open interval (0, t_f)."""
    t_f = params.t_f
    edge = _EDGE_FRACTION * t_f
    if not edge <= t <= t_f - edge:
        raise DomainError("derivatives are singular forms at the boundaries")
    al = params.alpha(t)
    ad = params.alpha.derivative(t)
    add = params.alpha.second_derivative(t)
    b = params.beta(t) - params.phi
    bd = params.beta.derivative(t)
    bdd = params.beta.second_derivative(t)
    s, c = math.sin(b), math.cos(b)
    omega = ad / s
    omega_dot = add / s - omega * bd * c / s
    cot = 1.0 / math.tan(al)
    delta_dot = (
        omega_dot * cot * c
        - omega * ad * c / math.sin(al) ** 2
        - omega * cot * s * bd
        - bdd
    )
    return omega_dot, delta_dot


@dataclass(frozen=True)
class AdiabaticPulseParams:
    """Cosine-ramp parameters: peak Rabi 2*omega0, peak detuning 2*delta0,
    half-segment time tau (one population sweep lasts 2*tau)."""

    omega0: float
    delta0: float
    tau: float

    def __post_init__(self):
        if self.omega0 <= 0.0 or self.tau <= 0.0:
            raise InvalidParameterError("omega0 and tau must be positive")


_ADIABATIC_SEGMENTS = ("first-half", "second-half")


def adiabatic_pulse(
    t: float,
    params: AdiabaticPulseParams,
    segment: str = "first-half",
    phi: float = 0.0,
) -> PulseSample:
    """Piecewise-cosine ramp over one 2*tau sweep, t measured from segment start.

    The excitation (first-half) and return (second-half) sweeps share the
    same printed shapes; both take Omega from 0 up to 2*omega0 and back,
    and Delta from +2*delta0 down to -2*delta0.
    """
    if segment not in _ADIABATIC_SEGMENTS:
        raise InvalidParameterError(f"unknown segment {segment!r}")
    tau = params.tau
    if not 0.0 <= t <= 2.0 * tau:
        raise DomainError(f"t={t} outside segment [0, {2.0 * tau}]")
    if t < tau:
        x = math.cos(math.pi * t / tau)
        omega = params.omega0 * (1.0 - x)
        delta = params.delta0 * (1.0 + x)
    else:
        x = math.cos(math.pi * (t - tau) / tau)
        omega = params.omega0 * (1.0 + x)
        delta = params.delta0 * (x - 1.0)
    return PulseSample(t, omega, delta, phi)


def adiabatic_pulse_derivatives(
    t: float, params: AdiabaticPulseParams, segment: str = "first-half"
) -> tuple[float, float]:
    """Closed-form (Omega_dot, Delta_dot) of the cosine ramps."""
    if segment not in _ADIABATIC_SEGMENTS:
        raise InvalidParameterError(f"unknown segment {segment!r}")
    tau = params.tau
    if not 0.0 <= t <= 2.0 * tau:
        raise DomainError(f"t={t} outside segment [0, {2.0 * tau}]")
    k = math.pi / tau
    if t < tau:
        s = math.sin(k * t)
        return params.omega0 * k * s, -params.delta0 * k * s
    s = math.sin(k * (t - tau))
    return -params.omega0 * k * s, -params.delta0 * k * s


@dataclass(frozen=True)
class GaussianPulseParams:
    """Truncated Gaussian Omega(t) = omega_n * exp(-(t - center)^2 / sigma),
    resonant (Delta = 0), nonzero only inside the window."""

    omega_n: float
    sigma: float
    window: tuple[float, float]

    def __post_init__(self):
        if self.sigma <= 0.0:
            raise InvalidParameterError("sigma must be positive")
        if self.window[1] <= self.window[0]:
            raise InvalidParameterError("window must have positive width")

    @property
    def center(self) -> float:
        return 0.5 * (self.window[0] + self.window[1])


def gaussian_pulse(t: float, params: GaussianPulseParams, phi: float = 0.0) -> PulseSample:
    """Evaluate the truncated Gaussian; outside the window it is zero, not an error."""
    t0, t1 = params.window
    if t < t0 or t > t1:
        return PulseSample(t, 0.0, 0.0, phi)
    omega = params.omega_n * math.exp(-((t - params.center) ** 2) / params.sigma)
    return PulseSample(t, omega, 0.0, phi)


def gaussian_pulse_derivatives(
    t: float, params: GaussianPulseParams
) -> tuple[float, float]:
    t0, t1 = params.window
    if t < t0 or t > t1:
        return 0.0, 0.0
    omega = params.omega_n * math.exp(-((t - params.center) ** 2) / params.sigma)
    return -2.0 * (t - params.center) / params.sigma * omega, 0.0


def truncated_area(omega_n: float, sigma: float, window: float) -> float:
    """Closed-form area of the truncated Gaussian over a centered window."""
    half = 0.5 * window
    return omega_n * math.sqrt(math.pi * sigma) * float(erf(half / math.sqrt(sigma)))


def calibrate_sigma(omega_n: float, window: float, target_area: float) -> float:
    """Width sigma such that the truncated pulse area equals target_area.

    The area is monotone in sigma and bounded by omega_n*window, so the
    target is bracketed and solved by root-finding to relative 1e-10.
    """
    if omega_n <= 0.0 or window <= 0.0:
        raise InvalidParameterError("omega_n and window must be positive")
    if target_area <= 0.0:
        raise InfeasibleError("target area must be positive")
    if target_area >= omega_n * window * (1.0 - 1e-12):
        raise InfeasibleError(
            f"area {target_area} unreachable: flat-top limit is {omega_n * window}"
        )
    f = lambda s: truncated_area(omega_n, s, window) - target_area
    lo = 1e-16 * window**2
    hi = window**2
    while f(hi) < 0.0:
        hi *= 4.0
        if hi > 1e12 * window**2:  # pragma: no cover - guarded by the area bound
            raise InfeasibleError("failed to bracket the calibration root")
    sigma = brentq(f, lo, hi, xtol=1e-300, rtol=1e-14)
    return float(sigma)
