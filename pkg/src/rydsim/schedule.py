"""Timed drive schedules: segments, deviations, Hamiltonian assembly and
JSON / CSV interchange.

A schedule is a list of drive segments over contiguous time windows with
the Rydberg-Rydberg interaction on throughout.  Segments sharing a window
drive different atoms simultaneously.  Systematic deviations (relative
Rabi error, relative and absolute detuning error) are stored on the
schedule and applied at sampling time, so a schedule and its perturbed
copies share the same segment objects.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, replace
from functools import cached_property

import numpy as np

from .core import InteractionSpec, build_drive, build_rri, dimension
from .errors import InvalidParameterError
from .pulses import (
    AdiabaticPulseParams,
    CubicPolynomial,
    GaussianPulseParams,
    LRPulseParams,
    PulseSample,
    adiabatic_pulse,
    gaussian_pulse,
    lr_pulse,
)

FAMILIES = ("lr", "adiabatic", "gaussian")


@dataclass(frozen=True)
class DriveSegment:
    """One laser drive on one atom over [t_start, t_end].

    a_level is the driven ground level (0 or 1); family selects the pulse
    shape; phi is the constant laser phase.  Times in us.
    """

    atom: int
    a_level: int
    t_start: float
    t_end: float
    family: str
    params: LRPulseParams | AdiabaticPulseParams | GaussianPulseParams
    phi: float

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise InvalidParameterError(f"unknown pulse family {self.family!r}")
        if self.t_end <= self.t_start:
            raise InvalidParameterError("segment must have positive duration")
        if self.a_level not in (0, 1):
            raise InvalidParameterError("a_level must be 0 or 1")
        if self.family == "lr" and abs(self.params.phi - self.phi) > 1e-12:
            raise InvalidParameterError("segment phi must match the pulse phi")

    @property
    def duration(self) -> float:
        return self.t_end - self.t_start

    def sample(self, t_local: float) -> PulseSample:
        """Drive values at local time t_local in [0, duration]."""
        if self.family == "lr":
            return lr_pulse(t_local, self.params)
        if self.family == "adiabatic":
            return adiabatic_pulse(t_local, self.params, phi=self.phi)
        return gaussian_pulse(t_local, self.params, phi=self.phi)


@dataclass(frozen=True)
class PulseSchedule:
    """A full gate protocol: segments, interactions and deviations.

    thetas records the conditional phases the schedule is meant to apply,
    one per target atom; it defines the ideal reference gate.
    """

    n_atoms: int
    segments: tuple[DriveSegment, ...]
    interactions: InteractionSpec
    thetas: tuple[float, ...]
    d_omega_rel: float = 0.0
    d_delta_rel: float = 0.0
    d_delta_abs: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "segments", tuple(self.segments))
        object.__setattr__(self, "thetas", tuple(self.thetas))
        if len(self.thetas) != self.n_atoms - 1:
            raise InvalidParameterError("need one theta per target atom")
        for seg in self.segments:
            if not 0 <= seg.atom < self.n_atoms:
                raise InvalidParameterError(f"segment atom {seg.atom} out of range")
        windows = self.windows
        if not windows:
            raise InvalidParameterError("schedule must contain segments")
        if abs(windows[0][0]) > 1e-12:
            raise InvalidParameterError("schedule must start at t=0")
        for (a0, a1), (b0, b1) in zip(windows, windows[1:]):
            if abs(b0 - a1) > 1e-12:
                raise InvalidParameterError(
                    f"windows not contiguous: [{a0}, {a1}] then [{b0}, {b1}]"
                )

    @cached_property
    def windows(self) -> tuple[tuple[float, float], ...]:
        """Distinct segment time spans in order; simultaneous drives share one."""
        return tuple(sorted(set((s.t_start, s.t_end) for s in self.segments)))

    @property
    def duration(self) -> float:
        return self.windows[-1][1]

    @cached_property
    def _rri_matrix(self) -> np.ndarray:
        if self.n_atoms >= 2:
            return build_rri(self.n_atoms, self.interactions).entries
        return np.zeros((dimension(self.n_atoms),) * 2, dtype=complex)

    def _apply_deviations(self, sample: PulseSample) -> PulseSample:
        return PulseSample(
            t=sample.t,
            omega=sample.omega * (1.0 + self.d_omega_rel),
            delta=sample.delta * (1.0 + self.d_delta_rel) + self.d_delta_abs,
            phi=sample.phi,
        )

    def active_segments(self, t: float) -> list[DriveSegment]:
        out = [s for s in self.segments if s.t_start <= t < s.t_end]
        if not out and abs(t - self.duration) <= 1e-12:
            out = [s for s in self.segments if s.t_end == self.duration]
        return out

    def hamiltonian(self, t: float) -> np.ndarray:
        """Full Hamiltonian at absolute time t (deviations applied)."""
        h = self._rri_matrix.copy()
        for seg in self.active_segments(t):
            sample = self._apply_deviations(seg.sample(t - seg.t_start))
            h += build_drive(sample, seg.atom, seg.a_level, self.n_atoms).entries
        return h

    def window_hamiltonian(self, window: tuple[float, float]):
        """Hamiltonian restricted to one window; callers propagate
        window by window so integrators never straddle a drive switch."""
        t0, t1 = window
        active = [s for s in self.segments if (s.t_start, s.t_end) == (t0, t1)]
        if not active:
            raise InvalidParameterError(f"no segments span window [{t0}, {t1}]")
        rri = self._rri_matrix

        def h_of_t(t: float) -> np.ndarray:
            h = rri.copy()
            for seg in active:
                sample = self._apply_deviations(seg.sample(t - t0))
                h += build_drive(sample, seg.atom, seg.a_level, self.n_atoms).entries
            return h

        return h_of_t


def perturb(
    schedule: PulseSchedule,
    d_omega_rel: float = 0.0,
    d_delta_rel: float = 0.0,
    d_delta_abs: float = 0.0,
) -> PulseSchedule:
    """Apply systematic deviations on top of any already present:
    Omega -> Omega*(1+d_omega_rel); Delta -> Delta*(1+d_delta_rel)+d_delta_abs."""
    return replace(
        schedule,
        d_omega_rel=(1.0 + schedule.d_omega_rel) * (1.0 + d_omega_rel) - 1.0,
        d_delta_rel=(1.0 + schedule.d_delta_rel) * (1.0 + d_delta_rel) - 1.0,
        d_delta_abs=schedule.d_delta_abs * (1.0 + d_delta_rel) + d_delta_abs,
    )


def _params_to_dict(seg: DriveSegment) -> dict:
    p = seg.params
    if seg.family == "lr":
        return {
            "t_f": p.t_f,
            "phi": p.phi,
            "beta_endpoint": p.beta_endpoint,
            "alpha_coeffs": list(p.alpha.coefficients),
            "beta_coeffs": list(p.beta.coefficients),
        }
    if seg.family == "adiabatic":
        return {"omega0": p.omega0, "delta0": p.delta0, "tau": p.tau}
    return {"omega_n": p.omega_n, "sigma": p.sigma, "window": list(p.window)}


def _params_from_dict(family: str, d: dict):
    if family == "lr":
        t_f = d["t_f"]
        return LRPulseParams(
            t_f=t_f,
            phi=d["phi"],
            alpha=CubicPolynomial(*d["alpha_coeffs"], t_f),
            beta=CubicPolynomial(*d["beta_coeffs"], t_f),
            beta_endpoint=d["beta_endpoint"],
        )
    if family == "adiabatic":
        return AdiabaticPulseParams(d["omega0"], d["delta0"], d["tau"])
    return GaussianPulseParams(d["omega_n"], d["sigma"], tuple(d["window"]))


def schedule_to_json(schedule: PulseSchedule) -> str:
    """Serialize a schedule; round-trips byte-exactly through
    schedule_from_json."""
    doc = {
        "n_atoms": schedule.n_atoms,
        "V_rad_per_us": schedule.interactions.V,
        "V1_rad_per_us": schedule.interactions.V1,
        "thetas": list(schedule.thetas),
        "deviations": {
            "omega_rel": schedule.d_omega_rel,
            "delta_rel": schedule.d_delta_rel,
            "delta_abs": schedule.d_delta_abs,
        },
        "segments": [
            {
                "atom": s.atom,
                "level_a": s.a_level,
                "t_start_us": s.t_start,
                "t_end_us": s.t_end,
                "family": s.family,
                "params": _params_to_dict(s),
                "phi_rad": s.phi,
            }
            for s in schedule.segments
        ],
    }
    return json.dumps(doc, sort_keys=True, indent=2)


def schedule_from_json(text: str) -> PulseSchedule:
    doc = json.loads(text)
    segments = tuple(
        DriveSegment(
            atom=s["atom"],
            a_level=s["level_a"],
            t_start=s["t_start_us"],
            t_end=s["t_end_us"],
            family=s["family"],
            params=_params_from_dict(s["family"], s["params"]),
            phi=s["phi_rad"],
        )
        for s in doc["segments"]
    )
    dev = doc.get("deviations", {})
    return PulseSchedule(
        n_atoms=doc["n_atoms"],
        segments=segments,
        interactions=InteractionSpec(doc["V_rad_per_us"], doc["V1_rad_per_us"]),
        thetas=tuple(doc["thetas"]),
        d_omega_rel=dev.get("omega_rel", 0.0),
        d_delta_rel=dev.get("delta_rel", 0.0),
        d_delta_abs=dev.get("delta_abs", 0.0),
    )


PULSE_CSV_HEADER = "t_us,omega_rad_per_us,delta_rad_per_us,phi_rad"


def segment_csv_rows(segment: DriveSegment, points: int = 2000) -> list[str]:
    """Uniform-grid pulse table for one segment, local time axis."""
    if points < 2:
        raise InvalidParameterError("need at least 2 points")
    rows = [PULSE_CSV_HEADER]
    for t in np.linspace(0.0, segment.duration, points):
        s = segment.sample(float(t))
        rows.append(f"{s.t:.9g},{s.omega:.12g},{s.delta:.12g},{s.phi:.12g}")
    return rows
