"""Acceptance criteria, one test per criterion.

Each test records a ``PASS``/``FAIL`` line (shown in the pytest terminal
summary, or printed directly when this file is run as a script). The
tolerances below are the acceptance thresholds, pinned here rather than
read from the library.
"""
import math

import numpy as np
import pytest

from spinrotor import dirac_wave as dw
from spinrotor import oracles, suite
from spinrotor.frame import FrameParams, kinematic_map

RESULTS: list[str] = []

DET_TOL = 1e-12
LIGHT_TOL = 1e-10
INVARIANT_TOL = 1e-10
DALEMBERT_TOL = 1e-6
ORDER_LO, ORDER_HI = 1.7, 2.3
PAULI_ERR_TOL = 1e-6
NORM_DRIFT_TOL = 1e-9
RK4_RATIO = 16.0
RK4_RATIO_SLACK = 4.0
ROOT_TOL = 1e-9
POLY_RES_TOL = 1e-10
SPLIT_REL_TOL = 0.01
DIRAC_RES_TOL = 1e-8
NEG_CONTROL_ORDERS = 1e4
QUAD_TOL = 1e-8
BILINEAR_TOL = 1e-12
SINGULAR_AMP_TOL = 1e-9
LAMBDA_RANGE = (5e9, 1e10)
FRAME_OP_TOL = 1e-12
INVARIANCE_TOL = 1e-8


def record(n: int, ok: bool, detail: str) -> None:
    RESULTS.append(f"{'PASS' if ok else 'FAIL'} criterion {n:2d}: {detail}")
    assert ok, detail


def test_01_transformation_suite():
    m = suite.check_transform(n=1000).metrics
    ok = (
        m["det"] <= DET_TOL
        and m["constraints"] <= DET_TOL
        and m["light_speed"] <= LIGHT_TOL
        and m["quadratic_invariant"] <= INVARIANT_TOL
        and m["identity"] == 0
    )
    record(1, ok, f"transform det {m['det']:.1e}, light speed {m['light_speed']:.1e}, "
                  f"invariant {m['quadratic_invariant']:.1e} over {m['n']} frames")


def test_02_dalembertian_invariance():
    m = suite.check_dalembert(step=1e-3).metrics
    ok = m["max_residual"] < DALEMBERT_TOL and ORDER_LO <= m["order_min"] and m["order_max"] <= ORDER_HI
    record(2, ok, f"d'Alembertian residual {m['max_residual']:.2e} at step 1e-3, "
                  f"order {m['order_min']:.2f}..{m['order_max']:.2f}")


def test_03_kinematic_limits():
    params = [FrameParams(1.0, w) for w in np.sqrt(np.linspace(0.99, 1 - 1e-10, 200))]
    vals = np.array([kinematic_map(0.0, 0.0, p) for p in params])
    w_rot, v_rot = np.abs(vals[:, 0]), vals[:, 1]
    monotone = bool(np.all(np.diff(w_rot) < 0) and np.all(np.diff(v_rot) > 0))
    corot = kinematic_map(0.6, 0.0, FrameParams(1.0, 0.6))
    ok = monotone and w_rot[-1] < 1e-4 and 1 - v_rot[-1] < 1e-8 and corot == (0.0, 0.0)
    record(3, ok, f"|omega~| -> {w_rot[-1]:.1e}, 1 - v~ -> {1 - v_rot[-1]:.1e}, monotone={monotone}, "
                  f"co-rotation -> {corot}")


def test_04_pauli_resonance():
    m = suite.check_pauli().metrics
    ok = (
        m["max_error"] <= PAULI_ERR_TOL
        and m["norm_drift"] <= NORM_DRIFT_TOL
        and abs(m["halving_ratio"] - RK4_RATIO) <= RK4_RATIO_SLACK
        and m["scan_argmax"] == pytest.approx(m["omega_star"])
    )
    record(4, ok, f"RK4 error {m['max_error']:.1e}, drift {m['norm_drift']:.1e}, "
                  f"halving ratio {m['halving_ratio']:.2f}, scan peak at Omega={m['scan_argmax']}")


def test_05_characteristic_cubic():
    m = suite.check_cubic(n=1000).metrics
    ok = m["max_root_mismatch"] <= ROOT_TOL and m["max_scaled_residual"] <= POLY_RES_TOL
    record(5, ok, f"companion vs brute force {m['max_root_mismatch']:.1e}, "
                  f"polynomial residual {m['max_scaled_residual']:.1e} over {m['n']} cubics")


def test_06_singular_pair_expansion():
    errors = []
    for h in (1e-2, 1e-3, 1e-4):
        plus, minus = dw.singular_pair(1.0, h, 0.25)
        lead = dw.leading_split(1.0)
        errors.append(max(abs((plus.Ecal - 1) / h - lead), abs((1 - minus.Ecal) / h - lead)))
    ratios = [errors[0] / errors[1], errors[1] / errors[2]]
    first_order = all(5 < r < 20 for r in ratios)
    plus, minus = dw.singular_pair(1.0, 1e-3, 0.25)
    target = 1e-3 / math.sqrt(2)
    split_ok = abs(plus.Ecal - 1 - target) <= SPLIT_REL_TOL * target and abs(1 - minus.Ecal - target) <= SPLIT_REL_TOL * target
    E_lead = dw.singular_energy_leading(1.0, 0.25)
    energy_ok = max(abs(plus.E - E_lead), abs(minus.E - E_lead)) <= 2e-3
    others = suite.check_singular_pair().passed
    ok = first_order and split_ok and energy_ok and others
    record(6, ok, f"split/h error {errors[0]:.1e} -> {errors[2]:.1e} (ratios {ratios[0]:.1f}, {ratios[1]:.1f}), "
                  f"E0=1 split {plus.Ecal - 1:.4e} vs {target:.4e}")


def test_07_calibrated_dirac_residual():
    m = suite.check_dirac_residual().metrics
    cal = m["calibration"]
    ok = (
        m["residual"] <= DIRAC_RES_TOL
        and all(ORDER_LO <= o <= ORDER_HI for o in m["orders"])
        and m["separation"] >= NEG_CONTROL_ORDERS
        and cal["margin"] >= 1e4
    )
    record(7, ok, f"residual {m['residual']:.1e}, orders {', '.join(f'{o:.2f}' for o in m['orders'])}, "
                  f"perturbed/true {m['separation']:.1e}, conventions {cal['conventions']}")


def test_08_normalization_and_spin():
    m = suite.check_normalization_and_spin(n=1000).metrics
    amp, s3 = dw.singular_limit_spin(1.0, 0.25)
    ok = (
        m["quadrature_rel_error"] <= QUAD_TOL
        and m["bilinear_max_error"] <= BILINEAR_TOL
        and abs(amp - 0.353553) <= 1e-6
        and abs(amp - 1 / math.sqrt(8)) <= SINGULAR_AMP_TOL
        and abs(s3) <= SINGULAR_AMP_TOL
    )
    record(8, ok, f"quadrature {m['quadrature_rel_error']:.1e}, bilinears {m['bilinear_max_error']:.1e}, "
                  f"g=2 amp {amp:.9f}, s3 {s3:.1e}")


def test_09_suppression_factor():
    lam = dw.lambda_ratio(100e9, "electron")
    exact = all(
        dw.suppression_exponent(E0, lam) == (E0 * E0 + 1) / E0 * lam for E0 in (0.5, 1.0, 2.0)
    )
    ok = LAMBDA_RANGE[0] <= lam <= LAMBDA_RANGE[1] and exact
    record(9, ok, f"lambda/lambdabar = {lam:.3e}, exponent at E0=1 = {dw.suppression_exponent(1.0, lam):.3e}")


def test_10_frame_operators():
    m = suite.check_frame_operators().metrics
    neg = oracles.rotating_frame_invariance_residual(FrameParams(1.0, 0.6), spinor_map="P").max_residual
    ok = (
        m["P_phi_hermitian"] <= FRAME_OP_TOL
        and m["P_phi1_unitary"] <= FRAME_OP_TOL
        and m["beta_P_beta_inverse"] <= FRAME_OP_TOL
        and m["invariance_residual"] <= INVARIANCE_TOL
        and neg > 1e3 * INVARIANCE_TOL
    )
    record(10, ok, f"hermitian {m['P_phi_hermitian']:.1e}, unitary {m['P_phi1_unitary']:.1e}, "
                   f"invariance {m['invariance_residual']:.1e}, negative control {neg:.2f}")


if __name__ == "__main__":
    tests = [v for k, v in sorted(globals().items()) if k.startswith("test_")]
    failed = 0
    for fn in tests:
        try:
            fn()
        except AssertionError:
            failed += 1
        print(RESULTS[-1])
    raise SystemExit(1 if failed else 0)
