"""Panel definitions and rendering.

Rendering is read-only on the input files and deterministic: fixed style
parameters, a fixed color cycle, and legend entries sorted by label, so the
same CSV always produces the same figure.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

TWO_PI = 2.0 * math.pi

PANEL_SCHEMAS: dict[str, tuple[str, ...]] = {
    "pulses": ("t_us", "omega_rad_per_us", "delta_rad_per_us", "phi_rad"),
    "tau_scan": ("scheme", "V_rad_per_us", "step_time_us", "fidelity"),
    "robustness": ("scheme", "axis", "deviation", "fidelity"),
}

# fixed cycle so re-rendering the same inputs gives identical styling
COLOR_CYCLE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b")

_STYLE = {
    "figure.dpi": 120,
    "font.size": 10,
    "axes.grid": True,
    "grid.alpha": 0.3,
    "lines.linewidth": 1.6,
    "legend.frameon": False,
    "svg.hashsalt": "figplots",
}


class SchemaError(ValueError):
    """Input CSV does not carry the expected header for the panel."""

    def __init__(self, path: Path, missing: str):
        self.path = path
        self.missing = missing
        super().__init__(f"{path}: missing required column '{missing}'")


@dataclass(frozen=True)
class PlotSpec:
    panel: str
    inputs: tuple[Path, ...]
    output: Path
    raw_time: bool = False
    labels: tuple[str, ...] = field(default_factory=tuple)

    def __post_init__(self):
        if self.panel not in PANEL_SCHEMAS:
            raise ValueError(f"unknown panel type {self.panel!r}")
        if not self.inputs:
            raise ValueError("at least one input CSV is required")
        if self.labels and len(self.labels) != len(self.inputs):
            raise ValueError("one label per input file is required")


def load_table(path: Path, panel: str) -> dict[str, list[str]]:
    """Read a CSV and return columns keyed by header name.

    Raises SchemaError naming the first missing required column, and
    ValueError for files without data rows.
    """
    if not path.exists():
        raise FileNotFoundError(f"input file not found: {path}")
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        header = reader.fieldnames or []
        for column in PANEL_SCHEMAS[panel]:
            if column not in header:
                raise SchemaError(path, column)
        rows = list(reader)
    if not rows:
        raise ValueError(f"{path}: no data rows")
    return {col: [row[col] for row in rows] for col in header}


def _floats(table: dict[str, list[str]], column: str) -> np.ndarray:
    return np.array([float(v) for v in table[column]])


def _v_label(v_rad_per_us: float) -> str:
    return f"V=2π×{v_rad_per_us / TWO_PI:g} MHz"


def _render_pulses(spec: PlotSpec, ax) -> None:
    for i, path in enumerate(spec.inputs):
        table = load_table(path, "pulses")
        t = _floats(table, "t_us")
        omega = _floats(table, "omega_rad_per_us") / TWO_PI
        delta = _floats(table, "delta_rad_per_us") / TWO_PI
        if spec.raw_time:
            x = t
        else:
            span = t.max() - t.min()
            if span <= 0.0:
                raise ValueError(f"{path}: zero time span, cannot normalize")
            x = (t - t.min()) / span
        label = spec.labels[i] if spec.labels else path.stem
        color = COLOR_CYCLE[i % len(COLOR_CYCLE)]
        ax.plot(x, omega, color=color, linestyle="-",
                label=f"{label}: Ω/2π")
        ax.plot(x, delta, color=color, linestyle="--",
                label=f"{label}: Δ/2π")
    ax.set_xlabel("t (μs)" if spec.raw_time else "t / step duration")
    ax.set_ylabel("frequency (2π MHz)")


def _render_tau_scan(spec: PlotSpec, ax) -> None:
    curves: dict[str, tuple[list[float], list[float]]] = {}
    for path in spec.inputs:
        table = load_table(path, "tau_scan")
        vs = _floats(table, "V_rad_per_us")
        taus = _floats(table, "step_time_us")
        fids = _floats(table, "fidelity")
        for scheme, v, tau, fid in zip(table["scheme"], vs, taus, fids):
            key = f"{scheme}, {_v_label(v)}"
            curves.setdefault(key, ([], []))
            curves[key][0].append(tau)
            curves[key][1].append(fid)
    for i, key in enumerate(sorted(curves)):
        taus, fids = curves[key]
        order = np.argsort(taus)
        ax.plot(np.array(taus)[order], np.array(fids)[order],
                color=COLOR_CYCLE[i % len(COLOR_CYCLE)], marker="o",
                markersize=3, label=key)
    ax.set_xlabel("step time (μs)")
    ax.set_ylabel("fidelity")


def _render_robustness(spec: PlotSpec, ax) -> None:
    curves: dict[str, tuple[list[float], list[float]]] = {}
    axes_seen: set[str] = set()
    for path in spec.inputs:
        table = load_table(path, "robustness")
        devs = _floats(table, "deviation")
        fids = _floats(table, "fidelity")
        for scheme, axis, dev, fid in zip(table["scheme"], table["axis"],
                                          devs, fids):
            axes_seen.add(axis)
            key = f"{scheme} ({axis})"
            curves.setdefault(key, ([], []))
            curves[key][0].append(dev)
            curves[key][1].append(fid)
    for i, key in enumerate(sorted(curves)):
        devs, fids = curves[key]
        order = np.argsort(devs)
        ax.plot(np.array(devs)[order], np.array(fids)[order],
                color=COLOR_CYCLE[i % len(COLOR_CYCLE)], marker="o",
                markersize=3, label=key)
    relative = {"omega_rel", "delta_rel"}
    if axes_seen and axes_seen <= relative:
        ax.set_xlabel("relative deviation")
    elif axes_seen == {"delta_abs"}:
        ax.set_xlabel("detuning offset (rad/μs)")
    else:
        ax.set_xlabel("deviation")
    ax.set_ylabel("fidelity")


_RENDERERS = {
    "pulses": _render_pulses,
    "tau_scan": _render_tau_scan,
    "robustness": _render_robustness,
}


def render(spec: PlotSpec) -> Path:
    """Render the panel and write the image; returns the output path.

    All inputs are validated before any drawing happens, so a schema error
    never leaves a partial image behind.
    """
    for path in spec.inputs:
        load_table(path, spec.panel)
    with plt.rc_context(_STYLE):
        fig, ax = plt.subplots(figsize=(4.2, 3.2))
        try:
            _RENDERERS[spec.panel](spec, ax)
            handles, labels = ax.get_legend_handles_labels()
            order = sorted(range(len(labels)), key=labels.__getitem__)
            ax.legend([handles[i] for i in order], [labels[i] for i in order],
                      fontsize=8)
            fig.tight_layout()
            fig.savefig(spec.output, metadata=_deterministic_metadata(spec.output))
        finally:
            plt.close(fig)
    return spec.output


def _deterministic_metadata(output: Path) -> dict | None:
    suffix = output.suffix.lower()
    if suffix == ".png":
        # strip the embedded software/version string
        return {"Software": None}
    if suffix == ".svg":
        return {"Date": None}
    if suffix == ".pdf":
        return {"CreationDate": None}
    return None
