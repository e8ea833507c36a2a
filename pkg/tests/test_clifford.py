import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from diracdelta.clifford import (
    IDENTITY, SIGMA_1, alpha, anticommutator, beta, clifford_check, dagger, gamma, mat_exp,
)
from diracdelta.errors import DomainError

from oracles import scipy_exp, series_exp

finite = st.floats(-3, 3, allow_nan=False)


def test_gamma_representation():
    np.testing.assert_array_equal(gamma(0), [[1, 0], [0, -1]])
    np.testing.assert_array_equal(gamma(1), [[0, 1], [-1, 0]])
    np.testing.assert_array_equal(gamma(2), [[0, 1], [1, 0]])
    np.testing.assert_array_equal(gamma(0) @ gamma(1), gamma(2))
    np.testing.assert_array_equal(beta(), gamma(0))
    np.testing.assert_array_equal(alpha(), gamma(2))


def test_gamma_returns_copies_and_constants_are_frozen():
    g = gamma(0)
    g[0, 0] = 7
    assert gamma(0)[0, 0] == 1
    with pytest.raises(ValueError):
        SIGMA_1[0, 0] = 3


@pytest.mark.parametrize("bad", [-1, 3, 1.5, True, "0"])
def test_gamma_rejects_bad_index(bad):
    with pytest.raises(DomainError):
        gamma(bad)


def test_clifford_relations():
    assert clifford_check()
    eta = np.diag([1.0, -1.0])
    for mu in range(2):
        for nu in range(2):
            np.testing.assert_array_equal(anticommutator(gamma(mu), gamma(nu)),
                                          2 * eta[mu, nu] * IDENTITY)


def test_dagger():
    a = np.array([[1, 2j], [3, 4 - 1j]])
    np.testing.assert_array_equal(dagger(a), [[1, 3], [-2j, 4 + 1j]])


def test_mat_exp_examples():
    np.testing.assert_allclose(mat_exp(np.zeros((2, 2))), IDENTITY, atol=0)
    q = math.pi / 3
    expected = [[math.cos(q), -1j * math.sin(q)], [-1j * math.sin(q), math.cos(q)]]
    np.testing.assert_allclose(mat_exp(-1j * q * gamma(2)), expected, atol=1e-15)
    lam = 0.7
    a = -1j * lam * gamma(2) @ gamma(0)
    expected = [[math.cosh(lam), 1j * math.sinh(lam)], [-1j * math.sinh(lam), math.cosh(lam)]]
    np.testing.assert_allclose(mat_exp(a), expected, atol=1e-15)
    np.testing.assert_allclose(mat_exp(a), series_exp(a), atol=1e-14)


@settings(max_examples=300, deadline=None)
@given(*(finite for _ in range(8)))
def test_mat_exp_matches_expm(a, b, c, d, e, f, g, h):
    m = np.array([[a + 1j * b, c + 1j * d], [e + 1j * f, g + 1j * h]])
    ref = scipy_exp(m)
    np.testing.assert_allclose(mat_exp(m), ref, rtol=1e-12, atol=1e-12 * np.max(np.abs(ref)))


@pytest.mark.parametrize("eps", [0.0, 1e-9, 1e-7, 1e-6, 2e-6, 1e-4])
def test_mat_exp_near_nilpotent(eps):
    # B^2 = eps^2: crosses the series / closed-form switch
    m = np.array([[0.3, 1.0], [eps * eps, 0.3]], dtype=complex)
    np.testing.assert_allclose(mat_exp(m), series_exp(m, 40), rtol=1e-13, atol=1e-15)


def test_mat_exp_rejects_bad_input():
    with pytest.raises(DomainError):
        mat_exp(np.array([[np.nan, 0], [0, 0]]))
    with pytest.raises(DomainError):
        mat_exp(np.array([[np.inf, 0], [0, 0]]))
    with pytest.raises(DomainError):
        mat_exp(np.eye(3))
