import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from diracdelta.clifford import SIGMA_3
from diracdelta.errors import DomainError
from diracdelta.free_states import Kinematics, dispersion, positron_spinor, u_plus, v_plus

from oracles import dirac_residual, u_minus

momentum = st.floats(-20, 20, allow_nan=False)


def test_dispersion_examples():
    assert dispersion(1.0, 0) == 1
    assert abs(dispersion(1.0, 0.6j) - 0.8) < 1e-15
    assert abs(dispersion(1.0, 1.0) - math.sqrt(2)) < 1e-15
    np.testing.assert_allclose(dispersion(2.0, [0, 1.5]), [2, 2.5])
    with pytest.raises(DomainError):
        dispersion(0.0, 1.0)


def test_spinor_examples():
    np.testing.assert_allclose(u_plus(1.0, 0), [1, 0])
    np.testing.assert_allclose(u_plus(1.0, 1.0), [1, 1 / (math.sqrt(2) + 1)], rtol=1e-15)
    np.testing.assert_allclose(u_plus(1.0, 0.6j), [1, 1j / 3], rtol=1e-15)
    np.testing.assert_allclose(v_plus(1.0, 0), [0, 1])
    np.testing.assert_allclose(v_plus(1.0, 1.0), [1 / (math.sqrt(2) + 1), 1], rtol=1e-15)


def test_v_plus_is_gamma2_conjugate_and_holomorphic_variant():
    k = 0.3 + 0.4j
    w = cmath.sqrt(k * k + 1)
    np.testing.assert_allclose(v_plus(1.0, k), [np.conj(k) / (np.conj(w) + 1), 1])
    np.testing.assert_allclose(positron_spinor(1.0, k), [k / (w + 1), 1])
    np.testing.assert_allclose(positron_spinor(1.0, 0.7), v_plus(1.0, 0.7))


def test_vectorised_shapes():
    ks = np.linspace(0.1, 2, 7)
    assert u_plus(1.0, ks).shape == (7, 2)
    assert v_plus(1.0, ks.reshape(7, 1)).shape == (7, 1, 2)


@settings(max_examples=100, deadline=None)
@given(momentum, st.floats(0.1, 5))
def test_dirac_equation(k, m):
    w = math.sqrt(k * k + m * m)
    assert dirac_residual(u_plus(m, k), m, k, w) < 1e-12 * max(1, w)
    # positron spinor: conjugate system (w + m) phi1 + i phi2' = 0, i phi1' + (w - m) phi2 = 0
    v = v_plus(m, k)
    d = 1j * k
    assert abs((w + m) * v[0] + 1j * d * v[1]) < 1e-12 * max(1, w)
    assert abs(1j * d * v[0] + (w - m) * v[1]) < 1e-12 * max(1, w)


@settings(max_examples=100, deadline=None)
@given(momentum)
def test_orthogonality(k):
    m = 1.0
    u, v = u_plus(m, k), v_plus(m, k)
    assert abs(np.vdot(u, SIGMA_3 @ v)) < 1e-14        # Dirac adjoint pairing
    assert abs(np.vdot(u_plus(m, -k), v)) < 1e-14       # v+(k) = u-(-k)
    np.testing.assert_allclose(v, u_minus(m, -k), atol=1e-15)
    assert abs(np.vdot(u, u_minus(m, k))) < 1e-14       # opposite-energy eigenvectors


def test_imaginary_kinematics():
    kin = Kinematics.imaginary(2.0, math.pi / 6)
    assert abs(kin.k - 1j) < 1e-15 and abs(kin.omega - math.sqrt(3)) < 1e-15
    kin = Kinematics.from_momentum(1.0, 0.75)
    assert kin.omega == 1.25
