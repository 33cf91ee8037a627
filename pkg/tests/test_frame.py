import math

import numpy as np
import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from spinrotor.clifford import I4, dirac_matrices, is_hermitian, is_unitary, mat_exp
from spinrotor.errors import DomainError, RadiusBoundError, SingularMapError, UnsupportedParameterError
from spinrotor.frame import (
    CylEvent,
    FrameParams,
    apply,
    build_transform,
    dalembert_invariance_check,
    dalembertian_fd,
    frame_spinor_operators,
    galilean_map,
    kinematic_map,
    quadratic_invariant,
    time_dilation_ratios,
)

frames = st.tuples(st.floats(0.05, 5), st.floats(-0.999, 0.999)).map(
    lambda p: FrameParams(r=p[0], Omega=p[1] / p[0])
)
coords = st.floats(-10, 10)


def test_identity_at_zero_rotation():
    np.testing.assert_array_equal(build_transform(FrameParams(1, 0)).a, np.eye(3))


def test_reference_matrix():
    # the third row follows t~ = (t - r^2 Omega phi) / sqrt(1 - r^2 Omega^2)
    tf = build_transform(FrameParams(1, 0.6))
    np.testing.assert_allclose(
        tf.a, [[1, 0.6, -0.6], [-0.75, 0.8, 0.45], [-0.75, 0, 1.25]], atol=1e-15
    )
    assert tf.det == pytest.approx(1, abs=1e-12)


def test_reference_event():
    out = apply(build_transform(FrameParams(1, 0.6)), CylEvent(0, 0, 1, 1))
    assert (out.phi, out.z, out.t) == pytest.approx((-0.6, 0.45, 1.25), abs=1e-15)
    assert out.r == 1
    assert quadratic_invariant(out) == pytest.approx(-1, abs=1e-14)


def test_radius_bound():
    with pytest.raises(RadiusBoundError):
        build_transform(FrameParams(2, 0.6))


def test_nonzero_v_unsupported():
    with pytest.raises(UnsupportedParameterError):
        build_transform(FrameParams(1, 0.3, v=0.1))


def test_radius_mismatch():
    with pytest.raises(DomainError):
        apply(build_transform(FrameParams(1, 0.6)), CylEvent(0, 0, 1, 2))


def test_invalid_params():
    with pytest.raises(DomainError):
        FrameParams(-1, 0.1)
    with pytest.raises(DomainError):
        FrameParams(1, math.nan)


@given(frames)
def test_det_and_constraints(params):
    tf = build_transform(params)
    assert abs(tf.det - 1) < 1e-12
    assert max(tf.constraint_defects()) < 1e-12


@given(frames, coords, coords, coords)
def test_quadratic_invariant_preserved(params, phi, z, t):
    e = CylEvent(phi, z, t, params.r)
    before = quadratic_invariant(e)
    after = quadratic_invariant(apply(build_transform(params), e))
    scale = params.r**2 * phi**2 + z**2 + t**2
    assert abs(after - before) <= 1e-10 * max(scale, 1e-300) * (1 + 1 / (1 - params.rw2))


@given(frames, coords, st.floats(0.1, 10))
def test_light_speed(params, phi, t):
    out = apply(build_transform(params), CylEvent(phi, t, t, params.r))
    assume(abs(out.t) > 1e-6)
    assert out.z / out.t == pytest.approx(1, abs=1e-10 * (1 + abs(params.r**2 * params.Omega * phi / out.t)))


@given(frames, coords, coords, coords)
def test_inverse_roundtrip(params, phi, z, t):
    tf = build_transform(params)
    e = CylEvent(phi, z, t, params.r)
    back = apply(tf.inverse(), apply(tf, e))
    assert np.allclose(back.vector(), e.vector(), atol=1e-12 * (1 + np.abs(e.vector()).max()) / (1 - params.rw2))


def test_galilean_examples():
    assert galilean_map(CylEvent(1, 0, 2, 1), 0.5).phi == 0
    e = CylEvent(0.3, 0.2, 0.1, 1)
    assert galilean_map(e, 0) == e


def test_galilean_agrees_to_first_order():
    # phi row of the transform is phi + z Omega - Omega t; the Galilean map drops z Omega
    eps = 1e-4
    tf = build_transform(FrameParams(1, eps))
    e = CylEvent(0.3, 0.0, 2.0, 1)
    assert apply(tf, e).phi == pytest.approx(galilean_map(e, eps).phi, abs=1e-15)


def test_dalembertian_of_t_squared():
    val = dalembertian_fd(lambda phi, z, t: t * t, (0.1, 0.2, 0.3), 1.0, 1e-3)
    assert val == pytest.approx(-2, abs=1e-8)


def test_dalembert_plane_wave_second_order():
    params = FrameParams(1, 0.6)

    def f(phi, z, t):
        return math.cos(1.7 * phi + 2.2 * z - 0.8 * t)

    r1 = dalembert_invariance_check(f, params, (0.3, -0.2, 0.5), 1e-3)
    r2 = dalembert_invariance_check(f, params, (0.3, -0.2, 0.5), 5e-4)
    assert r1 < 1e-5
    assert 3 < r1 / r2 < 5


def test_dalembert_rejects_bad_step():
    with pytest.raises(DomainError):
        dalembert_invariance_check(lambda *a: 0.0, FrameParams(1, 0.6), (0, 0, 0), 0)


def test_time_dilation_examples():
    assert time_dilation_ratios(FrameParams(1, 0.6)) == pytest.approx((0.8, 1.25), abs=1e-15)
    assert time_dilation_ratios(FrameParams(1, 0)) == (1, 1)


@given(frames)
def test_time_dilation_reciprocal_at_zero_v(params):
    a, b = time_dilation_ratios(params)
    assert a * b == pytest.approx(1, rel=1e-12)


def test_kinematic_examples():
    params = FrameParams(1, 0.6)
    assert kinematic_map(0.6, 0, params) == (0, 0)
    assert kinematic_map(0, 0, params) == pytest.approx((-0.48, 0.36), abs=1e-15)


def test_kinematic_singular():
    with pytest.raises(SingularMapError):
        kinematic_map(1 / 0.6, 0, FrameParams(1, 0.6))


def test_spinor_ops_trivial_at_rest():
    ops = frame_spinor_operators(FrameParams(1, 0))
    np.testing.assert_allclose(ops.P, I4, atol=1e-15)
    np.testing.assert_allclose(ops.P_tilde, I4, atol=1e-15)


def test_spinor_ops_reference_frame():
    ds = dirac_matrices()
    ops = frame_spinor_operators(FrameParams(1, 0.6), ds)
    assert math.cosh(ops.Phi) == pytest.approx(1.25)
    assert math.sinh(ops.Phi) == pytest.approx(0.75)
    assert math.sin(ops.Phi1) == pytest.approx(-0.6)
    assert np.linalg.det(ops.P) == pytest.approx(1, abs=1e-12)
    assert is_hermitian(ops.P_phi)
    assert np.all(np.linalg.eigvalsh(ops.P_phi) > 0)
    assert is_unitary(ops.P_phi1)
    np.testing.assert_allclose(ds.beta @ ops.P_phi @ ds.beta @ ops.P_phi, I4, atol=1e-12)
    np.testing.assert_allclose(ds.beta @ ops.P_phi @ ds.beta, mat_exp(-0.5 * ops.Phi * ds.alpha2), atol=1e-12)
    np.testing.assert_allclose(ops.P_tilde, ds.beta @ ops.P @ ds.beta, atol=0)


def test_exp_sum_form_differs():
    # the two generators anticommute, so exp(A) exp(B) != exp(A + B)
    ops = frame_spinor_operators(FrameParams(1, 0.6))
    assert ops.exp_sum_discrepancy > 1e-3
    assert frame_spinor_operators(FrameParams(1, 0)).exp_sum_discrepancy < 1e-15
