import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cartoon25d import (IDENTITY_VIEW, ViewRotation, frobenius_distance,
                        project, rotation_from_euler)
from cartoon25d.errors import NonOrthonormalView, ReflectionError
from cartoon25d.geometry import (polar_decompose_2x2, rotation_2x2,
                                 rotation_angle_2x2, sym_exp, sym_log)

angles = st.floats(-180.0, 180.0, allow_nan=False)


def test_front_view_is_identity():
    assert np.allclose(rotation_from_euler(0, 0, 0).matrix, np.eye(3), atol=0)
    assert np.array_equal(IDENTITY_VIEW.matrix, np.eye(3))


def test_yaw_90_maps_x_to_minus_z():
    r = rotation_from_euler(90, 0, 0)
    assert np.allclose(r.matrix @ [1, 0, 0], [0, 0, -1], atol=1e-15)


def test_roll_180_is_diag():
    r = rotation_from_euler(0, 0, 180)
    assert np.allclose(r.matrix, np.diag([-1.0, -1.0, 1.0]), atol=1e-15)


def test_rotation_is_orthonormal_det_one():
    r = rotation_from_euler(33.0, -17.0, 141.0).matrix
    assert np.allclose(r.T @ r, np.eye(3), atol=1e-14)
    assert np.linalg.det(r) == pytest.approx(1.0, abs=1e-14)


def test_view_rotation_rejects_non_orthonormal():
    with pytest.raises(NonOrthonormalView):
        ViewRotation(np.eye(3) * 1.01)
    with pytest.raises(NonOrthonormalView):
        ViewRotation(np.diag([1.0, 1.0, -1.0]))  # reflection


def test_view_rotation_matrix_is_read_only():
    r = rotation_from_euler(10, 20, 30)
    with pytest.raises(ValueError):
        r.matrix[0, 0] = 2.0


@given(yaw=angles, pitch=st.floats(-89.0, 89.0), roll=angles)
@settings(max_examples=80, deadline=None)
def test_euler_round_trip(yaw, pitch, roll):
    r = rotation_from_euler(yaw, pitch, roll)
    r2 = rotation_from_euler(*r.euler_angles())
    assert np.allclose(r.matrix, r2.matrix, atol=1e-12)


def test_euler_gimbal_pitch_90_round_trips():
    r = rotation_from_euler(25.0, 90.0, 40.0)
    yaw, pitch, roll = r.euler_angles()
    assert roll == 0.0
    assert pitch == pytest.approx(90.0, abs=1e-9)
    assert np.allclose(rotation_from_euler(yaw, pitch, roll).matrix,
                       r.matrix, atol=1e-12)


def test_project_drops_z():
    assert np.array_equal(project(np.array([3.0, -5.0, 7.0])), [3.0, -5.0])


@pytest.mark.parametrize("axis", ["yaw", "pitch", "roll"])
@pytest.mark.parametrize("theta", [5.0, 30.0, 90.0, 144.0, 175.0])
def test_frobenius_distance_single_axis_closed_form(axis, theta):
    # |R(theta) - I|_F = 2*sqrt(2)*|sin(theta/2)| for any single-axis rotation
    kwargs = {"yaw": 0.0, "pitch": 0.0, "roll": 0.0, axis: theta}
    d = frobenius_distance(rotation_from_euler(**kwargs), IDENTITY_VIEW)
    assert d == pytest.approx(2 * math.sqrt(2) * abs(math.sin(math.radians(theta) / 2)),
                              abs=1e-12)


def test_frobenius_distance_symmetry():
    a = rotation_from_euler(10, 20, 30)
    b = rotation_from_euler(-40, 5, 60)
    assert frobenius_distance(a, b) == frobenius_distance(b, a)
    assert frobenius_distance(a, a) == 0.0


@given(theta=st.floats(-3.1, 3.1), sx=st.floats(0.2, 3.0),
       sy=st.floats(0.2, 3.0), shear=st.floats(-0.5, 0.5))
@settings(max_examples=80, deadline=None)
def test_polar_decompose_recomposes(theta, sx, sy, shear):
    s = np.array([[sx, shear], [shear, sy]])
    if np.linalg.det(s) <= 1e-6:
        return
    a = rotation_2x2(theta) @ s
    r, s2 = polar_decompose_2x2(a)
    assert np.allclose(r.T @ r, np.eye(2), atol=1e-12)
    assert np.linalg.det(r) == pytest.approx(1.0, abs=1e-12)
    assert np.allclose(s2, s2.T, atol=0)
    assert np.allclose(r @ s2, a, atol=1e-10)


def test_polar_decompose_pure_rotation_is_exact():
    theta = 0.7363
    r, s = polar_decompose_2x2(rotation_2x2(theta))
    assert rotation_angle_2x2(r) == pytest.approx(theta, abs=1e-15)
    assert np.allclose(s, np.eye(2), atol=1e-15)


def test_polar_decompose_rejects_reflection():
    with pytest.raises(ReflectionError):
        polar_decompose_2x2(np.diag([1.0, -1.0]))


def test_rotation_angle_round_trip():
    for theta in np.linspace(-3.1, 3.1, 13):
        assert rotation_angle_2x2(rotation_2x2(theta)) == pytest.approx(theta, abs=1e-12)


@given(a=st.floats(-1.0, 1.0), b=st.floats(-0.8, 0.8), c=st.floats(-1.0, 1.0))
@settings(max_examples=80, deadline=None)
def test_sym_log_exp_inverse_pair(a, b, c):
    log_s = np.array([[a, b], [b, c]])
    s = sym_exp(log_s)
    evals = np.linalg.eigvalsh(s)
    assert evals.min() > 0  # exp of symmetric is positive definite
    assert np.allclose(sym_log(s), log_s, atol=1e-10)
