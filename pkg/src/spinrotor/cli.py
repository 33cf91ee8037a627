"""``spinrotor`` command line.

Exit codes: 0 success, 1 verification failure, 2 usage, configuration or
domain error. Errors go to stderr as ``error_code=<code>: <message>``.
"""
from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import dirac_wave as dw
from . import oracles, suite
from .errors import ConfigurationError, SpinrotorError
from .frame import (
    CylEvent,
    FrameParams,
    apply,
    build_transform,
    frame_spinor_operators,
    kinematic_map,
    quadratic_invariant,
    time_dilation_ratios,
)
from .pauli import (
    PauliConfig,
    SpinVector,
    integrate_spin,
    recommended_dt,
    to_lab_frame,
)

SCHEMA_VERSION = 1


class UsageError(SpinrotorError):
    error_code = "usage"


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _floats(text: str) -> list[float]:
    if isinstance(text, (list, tuple)):
        return [float(v) for v in text]
    try:
        return [float(v) for v in str(text).split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def fmt(x: float) -> str:
    """Shortest decimal that round-trips to the same double."""
    return repr(float(x))


def _complex_list(v) -> list[list[float]]:
    return [[float(z.real), float(z.imag)] for z in np.asarray(v, dtype=complex).ravel()]


def _matrix(m) -> dict:
    m = np.asarray(m)
    return {"re": m.real.tolist(), "im": m.imag.tolist()}


# options per subcommand: dest -> (flags, kwargs); defaults live here so the
# effective config can be echoed and replayed
OPTIONS = {
    "transform": {
        "r": (["--r"], {"type": float, "default": 1.0}),
        "Omega": (["--omega", "--Omega"], {"type": float, "default": 0.0}),
        "v": (["--v"], {"type": float, "default": 0.0}),
        "event": (["--event"], {"type": _floats, "default": [0.0, 0.0, 1.0]}),
    },
    "kinematics": {
        "r": (["--r"], {"type": float, "default": 1.0}),
        "Omega": (["--Omega"], {"type": float, "default": 0.0}),
        "omega": (["--omega"], {"type": float, "default": 0.0}),
        "v": (["--v"], {"type": float, "default": 0.0}),
    },
    "pauli": {
        "g": (["--g"], {"type": float, "default": 2.0}),
        "H": (["--H"], {"type": float, "default": 0.1}),
        "Hz": (["--Hz"], {"type": float, "default": -0.5}),
        "Omega": (["--Omega"], {"type": float, "default": 1.0}),
        "t_max": (["--t-max"], {"type": float, "default": 10.0}),
        "dt": (["--dt"], {"type": float, "default": None}),
        "s0": (["--s0"], {"type": _floats, "default": [0.0, 0.0, 1.0]}),
        "lab": (["--lab"], {"action": "store_true", "default": False}),
    },
    "dirac-modes": {
        "units": (["--units"], {"choices": ["normalized", "si"], "default": "normalized"}),
        "Hz": (["--Hz"], {"type": float, "default": -0.5}),
        "H": (["--H"], {"type": float, "default": 0.0025}),
        "Omega": (["--Omega"], {"type": float, "default": 0.25}),
        "Bz": (["--Bz"], {"type": float, "default": None}),
        "Bwave": (["--Bwave"], {"type": float, "default": None}),
        "f": (["--f"], {"type": float, "default": None}),
        "particle": (["--particle"], {"default": "electron"}),
        "p": (["--p"], {"type": float, "default": None}),
    },
}
OPTIONS["dirac-spin"] = {
    **OPTIONS["dirac-modes"],
    "branch": (["--branch"], {"choices": [dw.PLUS_SINGULAR, dw.MINUS_SINGULAR, dw.REGULAR], "default": dw.PLUS_SINGULAR}),
    "z": (["--z"], {"type": float, "default": 0.0}),
    "t_max": (["--t-max"], {"type": float, "default": None}),
    "samples": (["--samples"], {"type": int, "default": 201}),
}
OPTIONS["verify"] = {
    "suite": (["--suite"], {"default": "all"}),
    "parallel": (["--parallel"], {"type": int, "default": 1}),
}


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="spinrotor", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    def add(name, opts, aliases=()):
        sp = sub.add_parser(name, aliases=list(aliases))
        for dest, (flags, kw) in opts.items():
            kw = dict(kw)
            kw.pop("default", None)
            sp.add_argument(*flags, dest=dest, default=argparse.SUPPRESS, **kw)
        sp.add_argument("--config", type=Path, help="flat JSON object of option values")
        sp.add_argument("--output", "-o", type=Path, help="write here instead of stdout")
        sp.add_argument("--meta", type=Path, help="write the effective config as JSON (CSV commands)")
        sp.set_defaults(command=name)
        return sp

    for name in ("transform", "kinematics", "pauli", "dirac-modes", "dirac-spin", "verify"):
        add(name, OPTIONS[name])

    dirac = sub.add_parser("dirac")
    dsub = dirac.add_subparsers(dest="dirac_command", parser_class=_Parser)
    for short in ("modes", "spin"):
        sp = dsub.add_parser(short)
        for dest, (flags, kw) in OPTIONS[f"dirac-{short}"].items():
            kw = dict(kw)
            kw.pop("default", None)
            sp.add_argument(*flags, dest=dest, default=argparse.SUPPRESS, **kw)
        sp.add_argument("--config", type=Path)
        sp.add_argument("--output", "-o", type=Path)
        sp.add_argument("--meta", type=Path)
        sp.set_defaults(command=f"dirac-{short}")
    return parser


def effective_config(command: str, ns: argparse.Namespace) -> dict:
    opts = OPTIONS[command]
    cfg = {dest: kw.get("default") for dest, (_, kw) in opts.items()}
    if getattr(ns, "config", None) is not None:
        try:
            loaded = json.loads(Path(ns.config).read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigurationError(f"cannot read config {ns.config}: {exc}") from None
        if not isinstance(loaded, dict):
            raise ConfigurationError("config file must hold a flat JSON object")
        unknown = sorted(set(loaded) - set(opts))
        if unknown:
            raise ConfigurationError(f"unknown config keys for {command}: {unknown}")
        for k, v in loaded.items():
            kw = opts[k][1]
            if v is not None and "type" in kw:
                v = kw["type"](v)
            if "choices" in kw and v not in kw["choices"]:
                raise ConfigurationError(f"{k} must be one of {kw['choices']}")
            cfg[k] = v
    for dest in opts:
        if hasattr(ns, dest):
            cfg[dest] = getattr(ns, dest)
    return cfg


# ---------------------------------------------------------------- commands


def cmd_transform(cfg: dict) -> tuple[str, int]:
    params = FrameParams(cfg["r"], cfg["Omega"], cfg["v"])
    ratios = time_dilation_ratios(params)
    zero_v = FrameParams(params.r, params.Omega)
    tf = build_transform(params)
    if len(cfg["event"]) != 3:
        raise ConfigurationError("--event takes phi,z,t")
    ev = CylEvent(*cfg["event"], params.r)
    out = apply(tf, ev)
    ops = frame_spinor_operators(zero_v)
    doc = {
        "schema_version": SCHEMA_VERSION,
        "command": "transform",
        "config": cfg,
        "matrix": tf.a.tolist(),
        "det": tf.det,
        "constraint_defects": list(tf.constraint_defects()),
        "event": [ev.phi, ev.z, ev.t],
        "transformed_event": [out.phi, out.z, out.t],
        "invariant": quadratic_invariant(ev),
        "invariant_transformed": quadratic_invariant(out),
        "time_dilation": {"fixed_rotating": ratios[0], "fixed_lab": ratios[1]},
        "spinor": {
            "Phi": ops.Phi,
            "Phi1": ops.Phi1,
            "P": _matrix(ops.P),
            "P_tilde": _matrix(ops.P_tilde),
            "exp_sum_discrepancy": ops.exp_sum_discrepancy,
        },
    }
    return json.dumps(doc, indent=2) + "\n", 0


def cmd_kinematics(cfg: dict) -> tuple[str, int]:
    params = FrameParams(cfg["r"], cfg["Omega"])
    w, v = kinematic_map(cfg["omega"], cfg["v"], params)
    doc = {
        "schema_version": SCHEMA_VERSION,
        "command": "kinematics",
        "config": cfg,
        "omega_rot": w,
        "v_rot": v,
    }
    return json.dumps(doc, indent=2) + "\n", 0


def cmd_pauli(cfg: dict) -> tuple[str, int]:
    pc = PauliConfig(cfg["g"], cfg["H"], cfg["Hz"], cfg["Omega"])
    dt = cfg["dt"] if cfg["dt"] is not None else recommended_dt(pc)
    s0 = cfg["s0"]
    if len(s0) != 3:
        raise ConfigurationError("--s0 takes s1,s2,s3")
    series = integrate_spin(SpinVector(*s0), pc, cfg["t_max"], dt)
    if cfg["lab"]:
        series = to_lab_frame(series, pc.Omega)
    lines = ["t,s1,s2,s3,frame"]
    for t, (a, b, c) in zip(series.t, series.s):
        lines.append(f"{fmt(t)},{fmt(a)},{fmt(b)},{fmt(c)},{series.frame}")
    return "\n".join(lines) + "\n", 0


def _wave_config(cfg: dict) -> dw.WaveConfig:
    if cfg["units"] == "si":
        missing = [k for k in ("Bz", "Bwave", "f") if cfg[k] is None]
        if missing:
            raise ConfigurationError(f"--units si needs {missing}")
        return dw.si_to_normalized(cfg["Bz"], cfg["Bwave"], cfg["f"], cfg["particle"])
    return dw.WaveConfig(Hz=cfg["Hz"], H=cfg["H"], Omega=cfg["Omega"])


def _calibration_meta(cal: oracles.Calibration) -> dict:
    return {
        "representation": cal.conventions.representation,
        "d2_convention": cal.conventions.d2_convention,
        "d2_sign": cal.conventions.d2_sign,
        "norm_factor": cal.conventions.norm_factor,
        "branch_signs": cal.branch_signs,
        "frame_rotation_sign": cal.rotation_sign,
        "residual_margin": cal.margin,
    }


def _mode_doc(m: dw.ModeSolution) -> dict:
    obs = dw.spin_expectation(m)
    return {
        "branch": m.branch,
        "Ecal": m.Ecal,
        "p": m.p,
        "E": m.E,
        "d2": m.d2,
        "N": m.N,
        "psi": _complex_list(m.psi),
        "spin": {"amp_perp": obs.amp_perp, "s3": obs.s3, "phase_sign": obs.phase_sign},
    }


def cmd_dirac_modes(cfg: dict) -> tuple[str, int]:
    wc = _wave_config(cfg)
    dp = dw.derived_params(wc)
    cal = oracles.calibrate()
    cr, modes = dw.all_modes(wc, cfg["p"], cal.conventions)
    doc = {
        "schema_version": SCHEMA_VERSION,
        "command": "dirac-modes",
        "config": cfg,
        "inputs": {"Hz": wc.Hz, "H": wc.H, "Omega": wc.Omega},
        "derived": {"d": dp.d, "h": dp.h, "E0": dp.E0},
        "p": modes[0].p if modes else cfg["p"],
        "roots": _complex_list(cr.roots),
        "pole_flags": [bool(b) for b in cr.poles],
        "modes": [_mode_doc(m) for m in modes],
        "calibration": _calibration_meta(cal),
    }
    return json.dumps(doc, indent=2) + "\n", 0


def cmd_dirac_spin(cfg: dict) -> tuple[str, int]:
    wc = _wave_config(cfg)
    cal = oracles.calibrate()
    _, modes = dw.all_modes(wc, cfg["p"], cal.conventions)
    chosen = [m for m in modes if m.branch == cfg["branch"]]
    if not chosen:
        raise ConfigurationError(f"no mode with branch {cfg['branch']!r}")
    obs = dw.spin_expectation(chosen[0])
    t_max = cfg["t_max"] if cfg["t_max"] is not None else 2 * math.pi / abs(wc.Omega)
    if cfg["samples"] < 2:
        raise ConfigurationError("--samples must be >= 2")
    t = np.linspace(0.0, t_max, cfg["samples"])
    s1, s2, s3 = obs.components(t, cfg["z"])
    lines = ["t,s1,s2,s3"]
    for row in zip(t, s1, s2, s3):
        lines.append(",".join(fmt(v) for v in row))
    return "\n".join(lines) + "\n", 0


def cmd_verify(cfg: dict) -> tuple[str, int]:
    names = tuple(n.strip() for n in cfg["suite"].split(",") if n.strip())
    try:
        report = suite.run_suite(names, parallel=cfg["parallel"])
    except KeyError as exc:
        raise ConfigurationError(str(exc)) from None
    report["command"] = "verify"
    report["config"] = cfg
    return json.dumps(report, indent=2) + "\n", 0 if report["passed"] else 1


COMMANDS = {
    "transform": cmd_transform,
    "kinematics": cmd_kinematics,
    "pauli": cmd_pauli,
    "dirac-modes": cmd_dirac_modes,
    "dirac-spin": cmd_dirac_spin,
    "verify": cmd_verify,
}


def run(argv=None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
        if not getattr(ns, "command", None) or ns.command == "dirac":
            raise UsageError("a subcommand is required")
        cfg = effective_config(ns.command, ns)
        text, code = COMMANDS[ns.command](cfg)
    except SpinrotorError as exc:
        print(f"error_code={exc.error_code}: {exc}", file=sys.stderr)
        return 2
    if ns.output is not None:
        ns.output.write_text(text, encoding="utf-8", newline="\n")
    else:
        sys.stdout.write(text)
    if ns.meta is not None:
        meta = {"schema_version": SCHEMA_VERSION, "command": ns.command, "config": cfg}
        ns.meta.write_text(json.dumps(meta, indent=2) + "\n", encoding="utf-8")
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
