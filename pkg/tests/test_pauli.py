import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from spinrotor.errors import DomainError, FrameError, PreconditionError
from spinrotor.pauli import (
    LAB,
    PauliConfig,
    SpinSeries,
    SpinVector,
    analytic_resonant_solution,
    integrate_spin,
    max_flip_depth,
    recommended_dt,
    resonance_frequency,
    spin_rhs,
    to_lab_frame,
)

RES = PauliConfig(g=2, H=0.1, Hz=-0.5, Omega=1.0)
UP = SpinVector(0, 0, 1)

configs = st.builds(
    PauliConfig,
    g=st.floats(-3, 3),
    H=st.floats(0, 1),
    Hz=st.floats(-2, 2),
    Omega=st.floats(-3, 3),
)


@st.composite
def unit_spins(draw):
    v = np.array([draw(st.floats(-1, 1)) for _ in range(3)])
    n = np.linalg.norm(v)
    if n < 1e-3:
        v, n = np.array([0.0, 0.0, 1.0]), 1.0
    return SpinVector(*(v / n))


def test_rhs_from_up_state():
    np.testing.assert_allclose(spin_rhs(UP, RES), [0, 0.2, 0])


def test_rhs_resonance_freezes_s1():
    np.testing.assert_allclose(spin_rhs(SpinVector(1, 0, 0), RES), [0, 0, 0])


@given(unit_spins(), configs)
def test_rhs_orthogonal_to_state(s, cfg):
    assert abs(np.dot(s.as_array(), spin_rhs(s, cfg))) < 1e-12


def test_rhs_rejects_lab_frame():
    with pytest.raises(FrameError):
        spin_rhs(SpinVector(0, 0, 1, LAB), RES)


def test_zero_field_is_constant():
    cfg = PauliConfig(g=2, H=0, Hz=-0.5, Omega=1.0)
    run = integrate_spin(UP, cfg, 5.0, 0.1)
    np.testing.assert_array_equal(run.s, np.tile([0, 0, 1.0], (len(run), 1)))


def test_full_flip_at_half_period():
    run = integrate_spin(UP, RES, 5 * math.pi, 0.01)
    assert run.t[-1] == 5 * math.pi
    assert run.s[-1, 2] == pytest.approx(-1, abs=1e-6)


def test_matches_analytic_solution():
    run = integrate_spin(UP, RES, 10 * math.pi, 0.05)
    exact = analytic_resonant_solution(run.t, RES)
    assert np.max(np.abs(run.s - exact.s)) < 1e-6


def test_fourth_order_convergence():
    errs = []
    for dt in (0.4, 0.2):
        run = integrate_spin(UP, RES, 10 * math.pi, dt)
        errs.append(np.max(np.abs(run.s - analytic_resonant_solution(run.t, RES).s)))
    assert 12 < errs[0] / errs[1] < 20


@given(unit_spins(), configs)
def test_norm_conserved(s, cfg):
    dt = recommended_dt(cfg)
    n = min(2000, int(20 / dt) + 1)
    run = integrate_spin(s, cfg, n * dt, dt)
    assert np.max(np.abs(run.norms - 1)) < 1e-9


def test_integrator_preconditions():
    with pytest.raises(DomainError):
        integrate_spin(UP, RES, 1.0, 0.0)
    with pytest.raises(PreconditionError):
        integrate_spin(SpinVector(0, 0, 2), RES, 1.0, 0.1)
    with pytest.raises(DomainError):
        PauliConfig(g=math.inf, H=0.1, Hz=0, Omega=1)
    with pytest.raises(DomainError):
        PauliConfig(g=2, H=-0.1, Hz=0, Omega=1)


def test_resonance_frequency_examples():
    assert resonance_frequency(RES) == 1.0
    assert resonance_frequency(PauliConfig(2, 0.1, 0.0, 1.0)) == 0
    assert resonance_frequency(PauliConfig(2, 0.1, 0.5, 1.0)) == -1.0


def test_analytic_examples():
    assert analytic_resonant_solution(0.0, RES).as_array().tolist() == [0, 0, 1]
    s = analytic_resonant_solution(5 * math.pi, RES)
    assert (s.s1, s.s2, s.s3) == pytest.approx((0, 0, -1), abs=1e-15)
    with pytest.raises(PreconditionError):
        analytic_resonant_solution(1.0, PauliConfig(2, 0.1, -0.5, 1.1))


def test_lab_frame_reproduces_closed_form():
    t = np.linspace(0, 20, 101)
    lab = to_lab_frame(analytic_resonant_solution(t, RES), RES.Omega)
    w, W = RES.rabi, RES.Omega
    expected = np.column_stack([-np.sin(w * t) * np.sin(W * t), np.sin(w * t) * np.cos(W * t), np.cos(w * t)])
    np.testing.assert_allclose(lab.s, expected, atol=1e-15)
    assert lab.frame == LAB
    with pytest.raises(FrameError):
        to_lab_frame(lab, 1.0)


def test_lab_frame_identity_at_zero_omega():
    run = integrate_spin(SpinVector(0.6, 0, 0.8), PauliConfig(2, 0.3, 0.1, 0.4), 3, 0.1)
    np.testing.assert_array_equal(to_lab_frame(run, 0.0).s, run.s)


@given(st.floats(-5, 5))
def test_lab_frame_isometry(W):
    run = integrate_spin(SpinVector(0.6, 0, 0.8), PauliConfig(2, 0.3, 0.1, 0.4), 3, 0.1)
    lab = to_lab_frame(run, W)
    np.testing.assert_allclose(lab.norms, run.norms, atol=1e-14)


def test_resonance_maximises_swing():
    omegas = np.linspace(0.5, 1.5, 11)
    depths = [max_flip_depth(PauliConfig(2, 0.1, -0.5, w), 10 * math.pi, 0.05) for w in omegas]
    assert omegas[int(np.argmax(depths))] == pytest.approx(1.0)


def test_series_indexing():
    run = integrate_spin(UP, RES, 0.3, 0.1)
    assert isinstance(run, SpinSeries)
    assert run[0] == UP
