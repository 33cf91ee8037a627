"""Named verification checks behind ``spinrotor verify``.

Each check returns a :class:`CheckResult` with its measured metrics and the
thresholds it was judged against. Sizes default to the full acceptance
settings; pass a smaller ``n`` for quick runs.
"""
from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import dirac_wave as dw
from . import oracles
from .clifford import clifford_defect, dirac_matrices
from .frame import (
    CylEvent,
    FrameParams,
    apply,
    build_transform,
    dalembert_invariance_check,
    frame_spinor_operators,
    kinematic_map,
    quadratic_invariant,
)
from .pauli import (
    PauliConfig,
    SpinVector,
    analytic_resonant_solution,
    integrate_spin,
    max_flip_depth,
    resonance_frequency,
)

DEFAULT_SEED = 20240611


def seed_from_env(default: int = DEFAULT_SEED) -> int:
    raw = os.environ.get("SPINROTOR_SEED")
    return int(raw) if raw not in (None, "") else default


@dataclass
class CheckResult:
    name: str
    passed: bool
    metrics: dict = field(default_factory=dict)
    thresholds: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        return {
            "name": self.name,
            "passed": bool(self.passed),
            "metrics": _jsonable(self.metrics),
            "thresholds": _jsonable(self.thresholds),
        }


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _jsonable(obj.tolist())
    if isinstance(obj, (np.floating,)):
        return float(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    return obj


def random_admissible_frames(rng: np.random.Generator, n: int) -> list[FrameParams]:
    r = rng.uniform(0.0, 3.0, n)
    rw = rng.uniform(-0.999, 0.999, n)
    omega = np.where(r > 0, rw / np.maximum(r, 1e-300), rng.uniform(-1, 1, n))
    return [FrameParams(float(ri), float(wi)) for ri, wi in zip(r, omega)]


# -------------------------------------------------------------- 1


def check_transform(n: int = 1000, seed: int | None = None) -> CheckResult:
    rng = np.random.default_rng(seed_from_env() if seed is None else seed)
    det_err = con_err = light_err = inv_err = roundtrip = 0.0
    for params in random_admissible_frames(rng, n):
        tf = build_transform(params)
        det_err = max(det_err, abs(tf.det - 1.0))
        con_err = max(con_err, *tf.constraint_defects())
        t = rng.uniform(0.5, 5.0)
        phi = rng.uniform(-3, 3) * t  # any omega = phi/t
        light = apply(tf, CylEvent(phi, t, t, params.r))
        light_err = max(light_err, abs(light.z / light.t - 1.0))
        e = CylEvent(*rng.uniform(-5, 5, 3), params.r)
        q0 = quadratic_invariant(e)
        q1 = quadratic_invariant(apply(tf, e))
        scale = params.r**2 * e.phi**2 + e.z**2 + e.t**2
        inv_err = max(inv_err, abs(q1 - q0) / scale)
        back = apply(tf.inverse(), apply(tf, e))
        roundtrip = max(roundtrip, float(np.max(np.abs(back.vector() - e.vector()))))
    ident = float(np.max(np.abs(build_transform(FrameParams(1.3, 0.0)).a - np.eye(3))))
    thresholds = {"det": 1e-12, "constraints": 1e-12, "light_speed": 1e-10, "quadratic_invariant": 1e-10, "identity": 0.0, "roundtrip": 1e-12}
    metrics = {"det": det_err, "constraints": con_err, "light_speed": light_err, "quadratic_invariant": inv_err, "identity": ident, "roundtrip": roundtrip, "n": n}
    passed = all(metrics[k] <= thresholds[k] for k in thresholds)
    return CheckResult("transform", passed, metrics, thresholds)


# -------------------------------------------------------------- 2


def _plane_wave(k_phi, k_z, omega):
    def f(phi, z, t):
        return math.cos(k_phi * phi + k_z * z - omega * t)

    return f


def check_dalembert(step: float = 1e-3) -> CheckResult:
    # truncation error must dominate roundoff (~1e-9 at step/2) for the order to be measurable
    cases = [
        ((-0.7, 1.2, 0.3), FrameParams(1.0, 0.6)),
        ((1.5, -2.0, 0.5), FrameParams(1.0, 0.6)),
        ((-0.7, 1.2, 0.3), FrameParams(2.0, 0.3)),
        ((0.4, -0.9, 1.1), FrameParams(2.0, 0.3)),
        ((1.5, -2.0, 0.5), FrameParams(2.0, 0.3)),
    ]
    point = (0.3, -0.4, 0.7)
    worst, orders = 0.0, []
    for k, params in cases:
        f = _plane_wave(*k)
        r1 = dalembert_invariance_check(f, params, point, step)
        r2 = dalembert_invariance_check(f, params, point, step / 2)
        worst = max(worst, r1)
        orders.append(math.log2(r1 / r2))
    metrics = {"max_residual": worst, "order_min": min(orders), "order_max": max(orders)}
    thresholds = {"max_residual": 1e-6, "order_window": list(oracles.ORDER_WINDOW)}
    lo, hi = oracles.ORDER_WINDOW
    passed = worst < 1e-6 and lo <= min(orders) and max(orders) <= hi
    return CheckResult("dalembert", passed, metrics, thresholds)


# -------------------------------------------------------------- 3


def check_kinematics() -> CheckResult:
    rw2 = 1.0 - np.logspace(-2, -12, 201)  # r^2 Omega^2 from 0.99 toward 1
    Omega = 1.0
    monotone = True
    final = []
    for omega, v in [(0.3, 0.2), (-0.5, 0.0), (0.9, -0.5), (0.0, 0.0)]:
        vals = np.array([kinematic_map(omega, v, FrameParams(math.sqrt(s), Omega)) for s in rw2])
        monotone &= bool(np.all(np.diff(np.abs(vals[:, 0])) < 0) and np.all(np.diff(vals[:, 1]) > 0))
        final.append((abs(vals[-1, 0]), abs(1.0 - vals[-1, 1])))
    co = kinematic_map(0.6, 0.0, FrameParams(1.0, 0.6))
    metrics = {
        "monotone": monotone,
        "final_abs_omega_rot": max(a for a, _ in final),
        "final_abs_1_minus_v_rot": max(b for _, b in final),
        "corotation": [abs(co[0]), abs(co[1])],
    }
    passed = monotone and metrics["final_abs_omega_rot"] < 1e-5 and metrics["final_abs_1_minus_v_rot"] < 1e-9 and max(metrics["corotation"]) == 0.0
    return CheckResult("kinematics", passed, metrics, {"corotation": 0.0})


# -------------------------------------------------------------- 4


def _pauli_error(cfg: PauliConfig, t_max: float, dt: float) -> tuple[float, float]:
    run = integrate_spin(SpinVector(0.0, 0.0, 1.0), cfg, t_max, dt)
    exact = analytic_resonant_solution(run.t, cfg)
    return float(np.max(np.abs(run.s - exact.s))), float(np.max(np.abs(run.norms - 1.0)))


def check_pauli(scan_points: int = 17) -> CheckResult:
    cfg = PauliConfig(g=2.0, H=0.1, Hz=-0.5, Omega=1.0)
    t_max = 10 * math.pi / cfg.rabi
    err, drift = _pauli_error(cfg, t_max, 0.05)
    e1, _ = _pauli_error(cfg, t_max, 0.4)
    e2, _ = _pauli_error(cfg, t_max, 0.2)
    ratio = e1 / e2
    omega_star = resonance_frequency(cfg)
    grid = omega_star + np.linspace(-0.4, 0.4, scan_points)
    depths = [
        max_flip_depth(PauliConfig(cfg.g, cfg.H, cfg.Hz, float(w)), t_max, 0.05) for w in grid
    ]
    best = float(grid[int(np.argmax(depths))])
    metrics = {
        "max_error": err,
        "norm_drift": drift,
        "halving_ratio": ratio,
        "scan_argmax": best,
        "omega_star": omega_star,
        "depth_at_star": float(max(depths)),
    }
    thresholds = {"max_error": 1e-6, "norm_drift": 1e-9, "halving_ratio": [12.0, 20.0]}
    passed = err <= 1e-6 and drift <= 1e-9 and 12.0 <= ratio <= 20.0 and abs(best - omega_star) < 1e-12
    return CheckResult("pauli", passed, metrics, thresholds)


# -------------------------------------------------------------- 5


def check_cubic(n: int = 1000, seed: int | None = None) -> CheckResult:
    rng = np.random.default_rng(seed_from_env() if seed is None else seed)
    worst_match = worst_res = 0.0
    for _ in range(n):
        E0 = rng.uniform(0.2, 5.0)
        h = rng.uniform(0.0, 0.1)
        A = rng.uniform(-3.0, 3.0)
        Omega = 0.25
        p = 0.5 * (A + Omega)
        cr = dw.characteristic_roots(E0, h, p, Omega)
        bf = oracles.brute_force_roots(cr.coeffs)
        worst_match = max(worst_match, oracles.match_distance(cr.roots, bf))
        scale = max(1.0, float(np.max(np.abs(cr.coeffs))))
        worst_res = max(worst_res, float(np.max(cr.residuals())) / scale)
    metrics = {"max_root_mismatch": worst_match, "max_scaled_residual": worst_res, "n": n}
    thresholds = {"max_root_mismatch": 1e-9, "max_scaled_residual": 1e-10}
    passed = worst_match <= 1e-9 and worst_res <= 1e-10
    return CheckResult("cubic", passed, metrics, thresholds)


# -------------------------------------------------------------- 6


def check_singular_pair(E0_values=(0.5, 1.0, 2.0, 3.5), Omega: float = 0.25) -> CheckResult:
    hs = (1e-2, 1e-3, 1e-4)
    worst_ratio_dev = 0.0
    decreasing = True
    energy_ok = True
    for E0 in E0_values:
        kappa = dw.leading_split(E0)
        errs = []
        for h in hs:
            plus, minus = dw.singular_pair(E0, h, Omega)
            e = max(abs((plus.Ecal - E0) / h - kappa), abs((minus.Ecal - E0) / h + kappa))
            errs.append(e)
            worst_ratio_dev = max(worst_ratio_dev, e / h)
            E_lead = dw.singular_energy_leading(E0, Omega)
            energy_ok &= max(abs(plus.E - E_lead), abs(minus.E - E_lead)) <= 2 * h
        decreasing &= errs[0] > errs[1] > errs[2]
    plus, minus = dw.singular_pair(1.0, 1e-3, Omega)
    s = 1e-3 / math.sqrt(2)
    rel = max(abs((plus.Ecal - 1.0) - s) / s, abs((minus.Ecal - 1.0) + s) / s)
    metrics = {
        "max_error_over_h": worst_ratio_dev,
        "errors_decreasing": decreasing,
        "E0_1_relative_split_error": rel,
        "energy_within_O_h": energy_ok,
    }
    thresholds = {"E0_1_relative_split_error": 0.01, "max_error_over_h": 10.0}
    passed = decreasing and rel <= 0.01 and worst_ratio_dev <= 10.0 and energy_ok
    return CheckResult("singular_pair", passed, metrics, thresholds)


# -------------------------------------------------------------- 7


def check_dirac_residual(E0: float = 1.0, h: float = 0.01, Omega: float = 0.25) -> CheckResult:
    cal = oracles.calibrate(E0, h, Omega)
    cfg = dw.wave_config_from(E0, h, Omega)
    plus, minus = dw.singular_pair(E0, h, Omega, cal.conventions)
    reports = [oracles.dirac_residual(m, cfg) for m in (plus, minus)]
    bad = oracles.dirac_residual(plus.with_Ecal(plus.Ecal * 1.01), cfg)
    good = max(r.max_residual for r in reports)
    orders = [r.convergence_order for r in reports]
    metrics = {
        "residual": good,
        "orders": orders,
        "negative_control_residual": bad.max_residual,
        "separation": bad.max_residual / max(good, 1e-300),
        "calibration": cal.as_dict(),
    }
    passed = (
        all(1.7 <= o <= 2.3 for o in orders)
        and good <= 1e-8
        and bad.max_residual / max(good, 1e-300) >= 1e4
    )
    thresholds = {"residual": 1e-8, "order_window": [1.7, 2.3], "separation": 1e4}
    return CheckResult("dirac_residual", passed, metrics, thresholds)


# -------------------------------------------------------------- 8


def random_mode(rng: np.random.Generator) -> tuple[dw.ModeSolution, dw.WaveConfig]:
    """A mode from a random root of a random admissible configuration."""
    while True:
        E0 = rng.uniform(0.2, 5.0)
        h = rng.uniform(0.0, 0.5)
        Omega = rng.uniform(0.05, 2.0)
        p = rng.uniform(-2.0, 2.0)
        cfg = dw.wave_config_from(E0, h, Omega)
        cr = dw.characteristic_roots(E0, h, p, Omega)
        real = cr.real_roots()
        real = real[np.abs(real - E0) > 1e-6]
        if not len(real):
            continue
        Ecal = float(rng.choice(real))
        # keep the envelope representable: exp(d2^2/d) must not overflow
        if h > 0 and abs(dw.d2_value(Ecal, E0, h, Omega)) > 3.0:
            continue
        return dw.make_mode(cfg, Ecal, p), cfg


def check_normalization_and_spin(n: int = 1000, seed: int | None = None) -> CheckResult:
    rng = np.random.default_rng(seed_from_env() if seed is None else seed)
    bil = 0.0
    for _ in range(n):
        mode, _ = random_mode(rng)
        obs = dw.spin_expectation(mode)
        t, z = rng.uniform(-3, 3, 2)
        closed = np.array([float(c) for c in obs.components(t, z)])
        bil = max(bil, float(np.max(np.abs(oracles.spin_bilinears(mode, t, z) - closed))))
    quad = 0.0
    for d, d2 in [(0.05, 0.0), (0.25, 0.7071), (1.0, -1.5), (2.0, 3.0), (0.05, 3.0), (0.5, -3.0)]:
        E0, Omega = 1.0, 2 * d  # d = E0 Omega / 2
        h = 0.05
        cfg = dw.wave_config_from(E0, h, Omega)
        cr = dw.characteristic_roots(E0, h, 0.0, Omega)
        Ecal = float(cr.real_roots()[-1])
        mode = dw.make_mode(cfg, Ecal, 0.0, d2=d2)
        q = oracles.quadrature_check(mode, cfg, order=64)
        quad = max(quad, q.norm_rel_error)
    amp_limit, s3_limit = dw.singular_limit_spin(1.0, 0.25)
    target = dw.singular_amplitude(2.0)
    metrics = {
        "bilinear_max_error": bil,
        "quadrature_rel_error": quad,
        "singular_amp": amp_limit,
        "singular_amp_error": abs(amp_limit - target),
        "singular_s3": s3_limit,
        "n": n,
    }
    thresholds = {"bilinear_max_error": 1e-12, "quadrature_rel_error": 1e-8, "singular_amp_error": 1e-9, "singular_s3": 1e-9}
    passed = bil <= 1e-12 and quad <= 1e-8 and abs(amp_limit - target) <= 1e-9 and abs(s3_limit) <= 1e-9
    return CheckResult("normalization_spin", passed, metrics, thresholds)


# -------------------------------------------------------------- 9


def check_suppression() -> CheckResult:
    ratio = dw.lambda_ratio(100e9, "electron")
    E0 = 1.0
    exponent = dw.suppression_exponent(E0, ratio)
    metrics = {"lambda_ratio": ratio, "exponent": exponent, "formula_error": abs(exponent - (E0**2 + 1) / E0 * ratio)}
    passed = 5e9 <= ratio <= 1e10 and metrics["formula_error"] == 0.0
    return CheckResult("suppression", passed, metrics, {"lambda_ratio": [5e9, 1e10]})


# -------------------------------------------------------------- 10


def check_frame_operators(n: int = 200, seed: int | None = None) -> CheckResult:
    rng = np.random.default_rng(seed_from_env() if seed is None else seed)
    ds = dirac_matrices()
    herm = unit = inv = 0.0
    for params in random_admissible_frames(rng, n):
        ops = frame_spinor_operators(params, ds)
        herm = max(herm, float(np.max(np.abs(ops.P_phi - ops.P_phi.conj().T))))
        unit = max(unit, float(np.max(np.abs(ops.P_phi1.conj().T @ ops.P_phi1 - np.eye(4)))))
        inv = max(inv, float(np.max(np.abs(ds.beta @ ops.P_phi @ ds.beta @ ops.P_phi - np.eye(4)))))
    good = oracles.rotating_frame_invariance_residual(FrameParams(1.0, 0.6))
    bad = oracles.rotating_frame_invariance_residual(FrameParams(1.0, 0.6), spinor_map="P")
    rand = []
    for _ in range(5):
        params = random_admissible_frames(rng, 1)[0]
        if params.r < 0.2:
            continue
        k = rng.uniform(-1.5, 1.5, 3)
        u = rng.normal(size=4) + 1j * rng.normal(size=4)
        rand.append(oracles.rotating_frame_invariance_residual(params, *k, u=u).max_residual)
    metrics = {
        "P_phi_hermitian": herm,
        "P_phi1_unitary": unit,
        "beta_P_beta_inverse": inv,
        "invariance_residual": max([good.max_residual, *rand]),
        "negative_control": bad.max_residual,
        "clifford_defect": clifford_defect(ds),
    }
    thresholds = {"P_phi_hermitian": 1e-12, "P_phi1_unitary": 1e-12, "beta_P_beta_inverse": 1e-12, "invariance_residual": 1e-8}
    passed = (
        herm <= 1e-12 and unit <= 1e-12 and inv <= 1e-12
        and metrics["invariance_residual"] <= 1e-8 and bad.max_residual > 1e-4
    )
    return CheckResult("frame_operators", passed, metrics, thresholds)


CHECKS = {
    "transform": check_transform,
    "dalembert": check_dalembert,
    "kinematics": check_kinematics,
    "pauli": check_pauli,
    "cubic": check_cubic,
    "singular_pair": check_singular_pair,
    "dirac_residual": check_dirac_residual,
    "normalization_spin": check_normalization_and_spin,
    "suppression": check_suppression,
    "frame_operators": check_frame_operators,
}


def run_suite(names=("all",), parallel: int = 1) -> dict:
    if "all" in names:
        names = tuple(CHECKS)
    unknown = [n for n in names if n not in CHECKS]
    if unknown:
        raise KeyError(f"unknown checks: {unknown}")
    if parallel > 1:
        with ThreadPoolExecutor(max_workers=parallel) as ex:
            results = list(ex.map(lambda n: CHECKS[n](), names))
    else:
        results = [CHECKS[n]() for n in names]
    return {
        "schema_version": 1,
        "seed": seed_from_env(),
        "passed": all(r.passed for r in results),
        "checks": [r.as_dict() for r in results],
    }
