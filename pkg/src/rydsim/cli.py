"""Command-line front end.

Subcommands:
  synth      write the step-(i) pulse table of a scheme as CSV
  gate       run one gate and print a JSON result
  sweep      fidelity versus a systematic-deviation grid, CSV output
  tau-scan   fidelity versus single-step time for one or more blockade
             strengths, CSV output

Frequencies are entered in rad/us; the suffix `x2piMHz` converts from
2*pi MHz (e.g. `--V 40x2piMHz`).  Options may also come from a JSON file
via `--config`; explicit flags override file values.  Every output file
gets a `<name>.manifest.json` sidecar with the resolved configuration, so
the data files stay byte-identical across reruns.

Exit codes: 0 success, 1 usage error, 2 numeric failure, 3 partial sweep
failure (failed points recorded as NaN).
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from . import __version__
from .core import InteractionSpec
from .dynamics import IntegratorConfig, NoiseSpec
from .errors import RydsimError
from .protocols import (
    CPGSpec,
    adiabatic_sequence,
    extract_gate_matrix,
    nonadiabatic_sequence,
    run_gate,
    sta_sequence,
    uniform_superposition,
)
from .schedule import (
    PulseSchedule,
    perturb,
    schedule_from_json,
    schedule_to_json,
    segment_csv_rows,
)

TWO_PI = 2.0 * math.pi
SCHEMES = ("sta", "adiabatic", "nonadiabatic")
AXES = ("omega_rel", "delta_rel", "delta_abs")
# peak of the default invariant-shortcut pulse at t_f = 1 us
DEFAULT_OMEGA_N = 1.5 * math.pi / math.sin(math.pi / 8.0)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_NUMERIC = 2
EXIT_PARTIAL = 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # usage problems must exit 1, not argparse's 2
        raise UsageError(message)


def parse_freq(text: str) -> float:
    """rad/us, or `<value>x2piMHz` for 2*pi MHz."""
    if text.endswith("x2piMHz"):
        return float(text[: -len("x2piMHz")]) * TWO_PI
    return float(text)


def parse_thetas(text: str) -> tuple[float, ...]:
    """Comma-separated phases; arithmetic with `pi` allowed (e.g. pi/2)."""
    out = []
    for part in text.split(","):
        part = part.strip()
        if not part:
            raise UsageError("empty theta entry")
        if not all(c in "0123456789.+-*/()pi " for c in part):
            raise UsageError(f"bad theta expression {part!r}")
        try:
            out.append(float(eval(part, {"__builtins__": {}}, {"pi": math.pi})))
        except Exception as exc:
            raise UsageError(f"bad theta expression {part!r}: {exc}") from exc
    return tuple(out)


def _merge_config(args: argparse.Namespace, keys: dict) -> dict:
    """Resolve option values: explicit flag, then config file, then default."""
    file_values = {}
    if getattr(args, "config", None):
        with open(args.config) as fh:
            file_values = json.load(fh)
        unknown = set(file_values) - set(keys)
        if unknown:
            raise UsageError(f"unknown config keys: {sorted(unknown)}")
    resolved = {}
    for key, (convert, default) in keys.items():
        flag = getattr(args, key, None)
        if flag is not None:
            resolved[key] = convert(flag) if isinstance(flag, str) else flag
        elif key in file_values:
            raw = file_values[key]
            resolved[key] = convert(raw) if isinstance(raw, str) else raw
        else:
            resolved[key] = default
    return resolved


def _write_manifest(out_path: str, command: str, resolved: dict, runtimes) -> None:
    manifest = {
        "command": command,
        "config": {k: list(v) if isinstance(v, tuple) else v for k, v in resolved.items()},
        "version": __version__,
        "timestamp_utc": time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime()),
        "point_runtimes_s": runtimes,
    }
    with open(out_path + ".manifest.json", "w") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")


def build_schedule(scheme: str, cfg: dict) -> PulseSchedule:
    interactions = InteractionSpec(cfg["V"], cfg["V1"])
    if scheme == "sta":
        n = cfg["n"]
        thetas = cfg["theta"] or (math.pi,) * (n - 1)
        if len(thetas) != n - 1:
            raise UsageError(f"expected {n - 1} thetas for n={n}, got {len(thetas)}")
        return sta_sequence(CPGSpec(n, thetas), cfg["tf"], interactions)
    if scheme == "adiabatic":
        return adiabatic_sequence(cfg["omega0"], cfg["delta0"], cfg["tau"], interactions)
    return nonadiabatic_sequence(cfg["omega_n"], interactions)


_PHYSICS_KEYS = {
    "tf": (float, 1.0),
    "tau": (float, 4.0),
    "omega0": (parse_freq, math.pi),
    "delta0": (parse_freq, math.pi),
    "omega_n": (parse_freq, DEFAULT_OMEGA_N),
    "V": (parse_freq, TWO_PI * 40.0),
    "V1": (parse_freq, 0.0),
    "n": (int, 2),
    "theta": (parse_thetas, None),
    "gamma": (float, None),
    "steps": (int, 4000),
    "method": (str, None),
}


def _add_physics_flags(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--config", help="JSON file with option values")
    sub.add_argument("--scheme", choices=SCHEMES, required=True)
    sub.add_argument("--tf", type=float, help="single step time, us (sta)")
    sub.add_argument("--tau", type=float, help="half-segment time, us (adiabatic)")
    sub.add_argument("--omega0", help="peak half-Rabi, rad/us (adiabatic)")
    sub.add_argument("--delta0", help="peak half-detuning, rad/us (adiabatic)")
    sub.add_argument("--omega-n", dest="omega_n", help="Gaussian peak Rabi, rad/us")
    sub.add_argument("--V", help="control-target interaction, rad/us")
    sub.add_argument("--V1", help="target-target interaction, rad/us")
    sub.add_argument("--n", type=int, help="qubit count (sta only)")
    sub.add_argument("--theta", help="conditional phases, comma separated")
    sub.add_argument("--gamma", type=float, help="decay rate gamma_r0=gamma_r1, 1/us")
    sub.add_argument("--steps", type=int, help="integrator steps per window")
    sub.add_argument("--method", help="integrator method override")


def _integrator(cfg: dict) -> IntegratorConfig:
    return IntegratorConfig(method=cfg["method"], steps=cfg["steps"])


def _noise(cfg: dict) -> NoiseSpec | None:
    if cfg["gamma"] is None:
        return None
    return NoiseSpec(cfg["gamma"], cfg["gamma"])


def cmd_synth(args: argparse.Namespace) -> int:
    keys = dict(_PHYSICS_KEYS)
    keys["points"] = (int, 2000)
    cfg = _merge_config(args, keys)
    schedule = build_schedule(args.scheme, cfg)
    rows = segment_csv_rows(schedule.segments[0], cfg["points"])
    text = "\n".join(rows) + "\n"
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
        _write_manifest(args.out, "synth", {**cfg, "scheme": args.scheme}, None)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_gate(args: argparse.Namespace) -> int:
    cfg = _merge_config(args, _PHYSICS_KEYS)
    schedule = build_schedule(args.scheme, cfg)
    config = _integrator(cfg)
    noise = _noise(cfg)
    initial = uniform_superposition(schedule.n_atoms)
    result = run_gate(schedule, initial, noise, config)
    phases = None
    if args.phases:
        if noise is not None:
            raise UsageError("--phases requires a noiseless run")
        gate, _ = extract_gate_matrix(schedule, config)
        phases = [float(np.angle(gate[i, i])) for i in range(gate.shape[0])]
    doc = {
        "scheme": args.scheme,
        "fidelity": result.fidelity,
        "leakage": result.leakage,
        "duration_us": result.duration,
        "phases": phases,
    }
    print(json.dumps(doc, indent=2, sort_keys=True))
    return EXIT_OK


def _sweep_point(task: tuple) -> tuple[float, float]:
    """Worker entry: returns (fidelity, runtime seconds); NaN on failure."""
    schedule_json, axis, deviation, gamma, steps, method = task
    started = time.perf_counter()
    try:
        schedule = schedule_from_json(schedule_json)
        kwargs = {
            "omega_rel": {"d_omega_rel": deviation},
            "delta_rel": {"d_delta_rel": deviation},
            "delta_abs": {"d_delta_abs": deviation},
        }[axis]
        noise = NoiseSpec(gamma, gamma) if gamma is not None else None
        config = IntegratorConfig(method=method, steps=steps)
        initial = uniform_superposition(schedule.n_atoms)
        fid = run_gate(perturb(schedule, **kwargs), initial, noise, config).fidelity
    except RydsimError as exc:
        print(f"warning: point {deviation} failed: {exc}", file=sys.stderr)
        fid = float("nan")
    return fid, time.perf_counter() - started


def _worker_count(n_tasks: int) -> int:
    cap = os.environ.get("RYDSIM_THREADS")
    limit = int(cap) if cap else (os.cpu_count() or 1)
    return max(1, min(n_tasks, limit))


def _run_tasks(tasks: list[tuple]) -> list[tuple[float, float]]:
    workers = _worker_count(len(tasks))
    if workers == 1:
        return [_sweep_point(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_sweep_point, tasks))


def cmd_sweep(args: argparse.Namespace) -> int:
    keys = dict(_PHYSICS_KEYS)
    keys.update(
        {
            "axis": (str, None),
            "min": (float, None),
            "max": (float, None),
            "count": (int, None),
        }
    )
    cfg = _merge_config(args, keys)
    for required in ("axis", "min", "max", "count"):
        if cfg[required] is None:
            raise UsageError(f"--{required} is required")
    if cfg["axis"] not in AXES:
        raise UsageError(f"axis must be one of {AXES}")
    if cfg["axis"] == "delta_abs" and args.scheme != "nonadiabatic":
        raise UsageError("delta_abs deviations apply only to the resonant scheme")
    if cfg["count"] < 2 and cfg["min"] != cfg["max"]:
        raise UsageError("count must be at least 2")
    if cfg["count"] < 1 or cfg["min"] > cfg["max"]:
        raise UsageError("need count >= 1 and min <= max")

    schedule_json = schedule_to_json(build_schedule(args.scheme, cfg))
    grid = (
        [cfg["min"]]
        if cfg["count"] == 1
        else list(np.linspace(cfg["min"], cfg["max"], cfg["count"]))
    )
    tasks = [
        (schedule_json, cfg["axis"], dev, cfg["gamma"], cfg["steps"], cfg["method"])
        for dev in grid
    ]
    outcomes = _run_tasks(tasks)

    lines = ["scheme,axis,deviation,fidelity"]
    for dev, (fid, _) in zip(grid, outcomes):
        lines.append(f"{args.scheme},{cfg['axis']},{dev:.12g},{fid:.12g}")
    text = "\n".join(lines) + "\n"
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
        _write_manifest(
            args.out, "sweep", {**cfg, "scheme": args.scheme}, [r for _, r in outcomes]
        )
    else:
        sys.stdout.write(text)
    return EXIT_PARTIAL if any(math.isnan(f) for f, _ in outcomes) else EXIT_OK


def cmd_tau_scan(args: argparse.Namespace) -> int:
    keys = dict(_PHYSICS_KEYS)
    del keys["V"]
    keys["times"] = (lambda s: tuple(float(x) for x in s.split(",")), None)
    cfg = _merge_config(args, keys)
    if cfg["times"] is None:
        raise UsageError("--times is required")
    # --V takes a comma-separated list here, one curve per value
    if args.V:
        v_values = [parse_freq(v.strip()) for v in args.V.split(",")]
    else:
        v_values = [TWO_PI * 40.0]

    tasks = []
    labels = []
    for v in v_values:
        for step_time in cfg["times"]:
            point = dict(cfg)
            point["V"] = v
            if args.scheme == "adiabatic":
                point["tau"] = step_time
            elif args.scheme == "sta":
                point["tf"] = step_time
            else:
                raise UsageError("tau-scan supports sta and adiabatic schemes")
            schedule_json = schedule_to_json(build_schedule(args.scheme, point))
            tasks.append(
                (schedule_json, "omega_rel", 0.0, cfg["gamma"], cfg["steps"], cfg["method"])
            )
            labels.append((v, step_time))
    outcomes = _run_tasks(tasks)

    lines = ["scheme,V_rad_per_us,step_time_us,fidelity"]
    for (v, step_time), (fid, _) in zip(labels, outcomes):
        lines.append(f"{args.scheme},{v:.12g},{step_time:.12g},{fid:.12g}")
    text = "\n".join(lines) + "\n"
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
        _write_manifest(
            args.out,
            "tau-scan",
            {**cfg, "scheme": args.scheme, "V_values": v_values},
            [r for _, r in outcomes],
        )
    else:
        sys.stdout.write(text)
    return EXIT_PARTIAL if any(math.isnan(f) for f, _ in outcomes) else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="rydsim", description="Rydberg controlled-phase gate toolkit")
    parser.add_argument("--version", action="version", version=f"rydsim {__version__}")
    sub = parser.add_subparsers(dest="cmd", required=True, parser_class=_Parser)

    p_synth = sub.add_parser("synth", help="write a pulse table CSV")
    _add_physics_flags(p_synth)
    p_synth.add_argument("--points", type=int, help="grid points per step")
    p_synth.add_argument("--out", help="output CSV path (default stdout)")
    p_synth.set_defaults(func=cmd_synth)

    p_gate = sub.add_parser("gate", help="run one gate, print JSON")
    _add_physics_flags(p_gate)
    p_gate.add_argument(
        "--phases", action="store_true", help="also extract diagonal gate phases"
    )
    p_gate.set_defaults(func=cmd_gate)

    p_sweep = sub.add_parser("sweep", help="fidelity vs deviation grid")
    _add_physics_flags(p_sweep)
    p_sweep.add_argument("--axis", choices=AXES)
    p_sweep.add_argument("--min", type=float, help="grid minimum")
    p_sweep.add_argument("--max", type=float, help="grid maximum")
    p_sweep.add_argument("--count", type=int, help="grid size")
    p_sweep.add_argument("--out", help="output CSV path (default stdout)")
    p_sweep.set_defaults(func=cmd_sweep)

    p_scan = sub.add_parser("tau-scan", help="fidelity vs single-step time")
    _add_physics_flags(p_scan)
    p_scan.add_argument("--times", help="comma-separated step times, us")
    p_scan.add_argument("--out", help="output CSV path (default stdout)")
    p_scan.set_defaults(func=cmd_tau_scan)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except RydsimError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
