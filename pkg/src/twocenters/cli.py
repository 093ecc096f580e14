"""Command-line interface: ``diagram``, ``classify``, ``trajectory`` and ``verify``.

Options may also come from a JSON file given with ``--config``; keys are the
option names with dashes replaced by underscores.  Values are layered as
built-in defaults, then the ``--preset`` values, then the file, then
explicit flags.

Exit codes: 0 success, 1 verification failure, 2 configuration error,
3 numerical failure.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from contextlib import contextmanager
from dataclasses import dataclass, field

from twocenters import bifurcation, export, verification
from twocenters.coords import CartesianState, ChargeConfig, Sheet
from twocenters.dynamics import initial_state, integrate
from twocenters.errors import IntegratorDefect, OutOfScope, TwoCentersError
from twocenters.presets import PRESETS, get_preset
from twocenters.separation import EnergyMomentum

EXIT_OK, EXIT_VERIFY, EXIT_CONFIG, EXIT_NUMERIC = 0, 1, 2, 3

DEFAULTS = {
    "diagram": {
        "e_range": [0.0, 5.0],
        "k_range": [-8.0, 1.0],
        "nx": 101,
        "ny": 101,
        "curve_points": 400,
        "grid": "diagram_grid.csv",
        "curves": "diagram_curves.csv",
        "svg": None,
    },
    "classify": {"e": None, "k": None},
    "trajectory": {
        "state": None,
        "em": None,
        "xy": None,
        "sign_x": 1,
        "sign_y": 1,
        "sheet": "upper",
        "s_max": 100.0,
        "step_tol": 1e-10,
        "sample_ds": 0.01,
        "out": "trajectory.csv",
        "events": "events.csv",
        "svg": None,
    },
    "verify": {"checks": None, "quick": False, "step_tol": verification.DEFAULT_STEP_TOL},
}
COMMON = {"z1": None, "z2": None, "preset": None, "json": False}


class ConfigError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    charges: ChargeConfig | None
    params: dict = field(default_factory=dict)
    as_json: bool = False


def _positive(name, value):
    if not (isinstance(value, (int, float)) and value > 0 and math.isfinite(value)):
        raise ConfigError(f"{name} must be a positive number, got {value!r}")


def _pair(name, value):
    if value is None:
        return None
    try:
        lo, hi = (float(v) for v in value)
    except (TypeError, ValueError):
        raise ConfigError(f"{name} needs two numbers, got {value!r}") from None
    return lo, hi


def _charges(values, preset):
    z1, z2 = values.get("z1"), values.get("z2")
    if z1 is None and z2 is None and preset is not None:
        return preset.charges
    if z1 is None or z2 is None:
        raise ConfigError("both --z1 and --z2 are required (or use --preset)")
    try:
        return ChargeConfig(float(z1), float(z2))
    except ValueError as exc:
        raise ConfigError(str(exc)) from None


def _preset_values(command, preset):
    if command == "diagram":
        return {"e_range": list(preset.e_range), "k_range": list(preset.k_range)}
    if command == "classify":
        return {"e": preset.orbit[0], "k": preset.orbit[1]}
    if command == "trajectory":
        return {"em": list(preset.orbit)}
    return {}


def build_config(args: argparse.Namespace) -> RunConfig:
    """Layer defaults, preset, JSON config file and explicit flags, then validate."""
    command = args.command
    values = {**COMMON, **DEFAULTS[command]}
    file_values = {}
    if args.config:
        try:
            with open(args.config) as fh:
                file_values = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config {args.config}: {exc}") from None
        if not isinstance(file_values, dict):
            raise ConfigError("config file must hold a JSON object")
        unknown = set(file_values) - set(values)
        if unknown:
            raise ConfigError(f"unknown config keys for {command}: {', '.join(sorted(unknown))}")
    flags = {k: v for k in values if (v := getattr(args, k, None)) is not None and v is not False}

    preset = None
    preset_name = flags.get("preset", file_values.get("preset"))
    if preset_name is not None:
        try:
            preset = get_preset(preset_name)
        except KeyError as exc:
            raise ConfigError(exc.args[0]) from None
        values.update(_preset_values(command, preset))
    values.update(file_values)
    values.update(flags)
    if command == "trajectory" and "state" in {**file_values, **flags}:
        values["em"] = {**file_values, **flags}.get("em")

    charges = None if command == "verify" else _charges(values, preset)
    params = {k: v for k, v in values.items() if k not in COMMON}

    if command == "diagram":
        params["e_range"] = _pair("e-range", params["e_range"])
        params["k_range"] = _pair("k-range", params["k_range"])
        (e_lo, e_hi), (k_lo, k_hi) = params["e_range"], params["k_range"]
        if not (0 <= e_lo < e_hi) or not (k_lo < k_hi) or not all(map(math.isfinite, (e_hi, k_lo, k_hi))):
            raise ConfigError(f"invalid window E={params['e_range']}, K={params['k_range']} (need 0 <= E_lo < E_hi)")
        for key in ("nx", "ny", "curve_points"):
            if not isinstance(params[key], int) or params[key] < 2:
                raise ConfigError(f"{key} must be an integer >= 2")
    elif command == "classify":
        if params["e"] is None or params["k"] is None:
            raise ConfigError("classify needs --E and --K")
        params["e"], params["k"] = float(params["e"]), float(params["k"])
        if params["e"] < 0:
            raise ConfigError(f"E={params['e']} is out of scope: only E >= 0 is classified")
    elif command == "trajectory":
        if (params["state"] is None) == (params["em"] is None):
            raise ConfigError("trajectory needs exactly one of --state or --em")
        if params["state"] is not None and len(params["state"]) != 4:
            raise ConfigError("--state needs q1 q2 p1 p2")
        params["em"] = _pair("em", params["em"])
        params["xy"] = _pair("xy", params["xy"])
        _positive("s-max", params["s_max"])
        _positive("step-tol", params["step_tol"])
        _positive("sample-ds", params["sample_ds"])
        try:
            params["sheet"] = Sheet(params["sheet"])
        except ValueError:
            raise ConfigError(f"sheet must be 'upper' or 'lower', got {params['sheet']!r}") from None
    elif command == "verify":
        _positive("step-tol", params["step_tol"])
        checks = params["checks"]
        if isinstance(checks, str):
            checks = [c for c in checks.split(",") if c]
        unknown = [c for c in checks or () if c not in verification.CHECKS]
        if unknown:
            raise ConfigError(f"unknown checks {unknown}; available: {', '.join(verification.CHECKS)}")
        params["checks"] = checks
    return RunConfig(command, charges, params, bool(values["json"]))


@contextmanager
def _outputs(paths):
    """Remove every listed file if the body fails."""
    try:
        yield
    except BaseException:
        for path in paths:
            if path and os.path.exists(path):
                os.remove(path)
        raise


def _interval_json(ivs):
    return [[_json_float(a), _json_float(b)] for a, b in ivs]


def _json_float(v):
    return v if math.isfinite(v) else ("inf" if v > 0 else "-inf")


def cmd_diagram(cfg: RunConfig, out) -> int:
    p = cfg.params
    paths = [p["grid"], p["curves"], p["svg"]]
    with _outputs(paths):
        diagram = bifurcation.sample_diagram(
            p["e_range"], p["k_range"], p["nx"], p["ny"], cfg.charges, curve_points=p["curve_points"]
        )
        export.write_grid_csv(diagram, p["grid"])
        export.write_curves_csv(diagram, p["curves"])
        if p["svg"]:
            title = f"z1 = {cfg.charges.z1:g}, z2 = {cfg.charges.z2:g}"
            export.write_text(p["svg"], export.diagram_svg(diagram, title))
    summary = {
        "grid": p["grid"],
        "curves": p["curves"],
        "svg": p["svg"],
        "curve_ids": sorted(c.value for c in diagram.curves),
        "cells": len(diagram.e_values) * len(diagram.k_values),
    }
    _emit(summary, cfg.as_json, out)
    return EXIT_OK


def classify_report(em: EnergyMomentum, charges: ChargeConfig) -> dict:
    region = bifurcation.classify(em, charges)
    return {
        "E": em.e,
        "K": em.k,
        "label": region.label,
        "pattern": region.pattern,
        "x_intervals": _interval_json(region.x_intervals),
        "y_intervals": _interval_json(region.y_intervals),
        "on_curves": sorted(c.value for c in region.on_curves),
        "bounded": region.bounded_component,
        "K_plus": _json_float(bifurcation.k_plus(em.e, charges)),
        "K_minus": _json_float(bifurcation.k_minus(em.e, charges)),
    }


def cmd_classify(cfg: RunConfig, out) -> int:
    report = classify_report(EnergyMomentum(cfg.params["e"], cfg.params["k"]), cfg.charges)
    _emit(report, cfg.as_json, out)
    return EXIT_OK


def _trajectory_start(cfg: RunConfig):
    p = cfg.params
    if p["state"] is not None:
        return CartesianState(*(float(v) for v in p["state"]))
    em = EnergyMomentum(*p["em"])
    if p["xy"] is not None:
        x, y = p["xy"]
    else:
        region = bifurcation.classify(em, cfg.charges)
        if not region.in_hill_region:
            raise ConfigError(f"{em} is outside the Hill region")
        lo, hi = region.x_intervals[0]
        x = 0.5 * (lo + hi) if math.isfinite(hi) else lo + 0.5
        y = 0.5 * sum(region.y_intervals[0])
    try:
        return initial_state(em, cfg.charges, x, y, p["sign_x"], p["sign_y"], p["sheet"])
    except ValueError as exc:
        raise ConfigError(str(exc)) from None


def cmd_trajectory(cfg: RunConfig, out) -> int:
    p = cfg.params
    start = _trajectory_start(cfg)
    paths = [p["out"], p["events"], p["svg"]]
    with _outputs(paths):
        traj = integrate(start, cfg.charges, p["s_max"], p["step_tol"], sample_ds=p["sample_ds"])
        export.write_trajectory_csv(traj, p["out"])
        export.write_events_csv(traj, p["events"])
        if p["svg"]:
            export.write_text(p["svg"], export.trajectory_svg(traj))
    de, dk = traj.drift()
    summary = {
        "trajectory": p["out"],
        "events": p["events"],
        "svg": p["svg"],
        "status": traj.status,
        "E": traj.em.e,
        "K": traj.em.k,
        "samples": len(traj),
        "s_end": float(traj.s[-1]),
        "max_E_drift": float(de.max()),
        "max_K_drift": float(dk.max()),
    }
    _emit(summary, cfg.as_json, out)
    return EXIT_OK


def cmd_verify(cfg: RunConfig, out) -> int:
    p = cfg.params
    settings = verification.Settings(quick=bool(p["quick"]), step_tol=float(p["step_tol"]))
    results = verification.run_checks(p["checks"], settings, workers=bifurcation.default_workers())
    passed = all(r.passed for r in results)
    if cfg.as_json:
        json.dump({"passed": passed, "checks": [r.as_dict() for r in results]}, out, indent=2)
        out.write("\n")
    else:
        for r in results:
            out.write(r.line() + "\n")
        out.write(f"{'ALL PASS' if passed else 'FAILED'} ({sum(r.passed for r in results)}/{len(results)})\n")
    return EXIT_OK if passed else EXIT_VERIFY


def _emit(data: dict, as_json: bool, out) -> None:
    if as_json:
        json.dump(data, out, indent=2)
        out.write("\n")
        return
    for key, value in data.items():
        if isinstance(value, (list, tuple)):
            value = json.dumps(value)
        out.write(f"{key}={value}\n")


COMMANDS = {
    "diagram": cmd_diagram,
    "classify": cmd_classify,
    "trajectory": cmd_trajectory,
    "verify": cmd_verify,
}


def _common(parser):
    parser.add_argument("--config", help="JSON file with option values")
    parser.add_argument("--z1", type=float, help="strength of the center at q1=+1")
    parser.add_argument("--z2", type=float, help="strength of the center at q1=-1")
    parser.add_argument("--preset", help=f"named configuration: {', '.join(sorted(PRESETS))}")
    parser.add_argument("--json", action="store_true", help="print the report as JSON")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="twocenters", description="Planar two-center problem toolkit.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("diagram", help="rasterize the bifurcation diagram")
    _common(p)
    p.add_argument("--e-range", nargs=2, type=float, metavar=("LO", "HI"))
    p.add_argument("--k-range", nargs=2, type=float, metavar=("LO", "HI"))
    p.add_argument("--nx", type=int)
    p.add_argument("--ny", type=int)
    p.add_argument("--curve-points", type=int)
    p.add_argument("--grid", help="grid CSV path")
    p.add_argument("--curves", help="curve CSV path")
    p.add_argument("--svg", help="optional SVG path")

    p = sub.add_parser("classify", help="classify one (E, K) pair")
    _common(p)
    p.add_argument("--E", dest="e", type=float)
    p.add_argument("--K", dest="k", type=float)

    p = sub.add_parser("trajectory", help="integrate and export one trajectory")
    _common(p)
    p.add_argument("--state", nargs=4, type=float, metavar=("Q1", "Q2", "P1", "P2"))
    p.add_argument("--em", nargs=2, type=float, metavar=("E", "K"), help="start from constants of motion")
    p.add_argument("--xy", nargs=2, type=float, metavar=("X", "Y"), help="separated start point for --em")
    p.add_argument("--sign-x", type=int, choices=(-1, 1))
    p.add_argument("--sign-y", type=int, choices=(-1, 1))
    p.add_argument("--sheet", choices=("upper", "lower"))
    p.add_argument("--s-max", type=float)
    p.add_argument("--step-tol", type=float)
    p.add_argument("--sample-ds", type=float)
    p.add_argument("--out", help="trajectory CSV path")
    p.add_argument("--events", help="events CSV path")
    p.add_argument("--svg", help="optional SVG path")

    p = sub.add_parser("verify", help="run the acceptance checks")
    _common(p)
    p.add_argument("--checks", help="comma-separated subset of checks")
    p.add_argument("--quick", action="store_true", help="reduced sample counts")
    p.add_argument("--step-tol", type=float)
    return parser


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code else EXIT_OK
    try:
        cfg = build_config(args)
        return COMMANDS[cfg.command](cfg, out)
    except (ConfigError, OutOfScope) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (IntegratorDefect, RuntimeError, FloatingPointError, ArithmeticError, TwoCentersError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
