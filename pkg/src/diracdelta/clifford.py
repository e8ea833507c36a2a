"""Clifford algebra of R^{1,1} in a fixed 2x2 representation.

Matrices are plain ``numpy`` arrays of shape ``(2, 2)`` and dtype ``complex128``.
The representation is

    gamma^0 = sigma_3 = beta,   gamma^1 = i sigma_2,   gamma^2 = gamma^0 gamma^1 = sigma_1 = alpha

with metric diag(+, -).
"""

from __future__ import annotations

import cmath

import numpy as np
from numpy.typing import NDArray

from .errors import DomainError

Mat2C = NDArray[np.complex128]


def _frozen(rows) -> Mat2C:
    a = np.array(rows, dtype=np.complex128)
    a.setflags(write=False)
    return a


IDENTITY = _frozen([[1, 0], [0, 1]])
SIGMA_1 = _frozen([[0, 1], [1, 0]])
SIGMA_2 = _frozen([[0, -1j], [1j, 0]])
SIGMA_3 = _frozen([[1, 0], [0, -1]])

_GAMMAS = (SIGMA_3, _frozen(1j * SIGMA_2), SIGMA_1)

# |s| below which sinh(s)/s is taken from its Taylor series
_SERIES_THRESHOLD = 1e-6


def gamma(index: int) -> Mat2C:
    """Return a fresh copy of gamma^index for index in {0, 1, 2}."""
    if isinstance(index, bool) or index not in (0, 1, 2):
        raise DomainError(f"gamma index must be 0, 1 or 2, got {index!r}")
    return _GAMMAS[index].copy()


def beta() -> Mat2C:
    return gamma(0)


def alpha() -> Mat2C:
    return gamma(2)


def dagger(a: Mat2C) -> Mat2C:
    return np.conj(np.asarray(a)).T


def anticommutator(a: Mat2C, b: Mat2C) -> Mat2C:
    return a @ b + b @ a


def _sinhc(s: complex) -> complex:
    if abs(s) < _SERIES_THRESHOLD:
        s2 = s * s
        return 1.0 + s2 / 6.0 + s2 * s2 / 120.0 + s2 * s2 * s2 / 5040.0
    return cmath.sinh(s) / s


def mat_exp(a: Mat2C) -> Mat2C:
    """Matrix exponential of a complex 2x2 matrix in closed form.

    With ``t = tr(A)/2`` and ``B = A - t*1`` one has ``B @ B = s**2 * 1`` where
    ``s**2 = t**2 - det(A)``, hence

        exp(A) = e^t [cosh(s) 1 + sinh(s)/s B].

    Both ``cosh`` and ``sinh(s)/s`` are even in ``s``, so the branch of the
    square root is irrelevant. Crossing ``s = 0`` (for the point interaction:
    ``q**2 = lambda**2``) is handled by the series of ``sinh(s)/s``.
    """
    a = np.asarray(a, dtype=np.complex128)
    if a.shape != (2, 2):
        raise DomainError(f"mat_exp expects a 2x2 matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise DomainError("mat_exp: matrix has non-finite entries")
    a11, a12, a21, a22 = (complex(v) for v in a.ravel())
    t = 0.5 * (a11 + a22)
    det = a11 * a22 - a12 * a21
    s = cmath.sqrt(t * t - det)
    ch = cmath.cosh(s)
    sc = _sinhc(s)
    et = cmath.exp(t)
    return np.array(
        [
            [et * (ch + sc * (a11 - t)), et * sc * a12],
            [et * sc * a21, et * (ch + sc * (a22 - t))],
        ],
        dtype=np.complex128,
    )


def clifford_check() -> bool:
    """True iff the fixed representation closes {gamma^mu, gamma^nu} = 2 eta^{mu nu}."""
    g0, g1, g2 = (gamma(i) for i in range(3))
    return bool(
        np.array_equal(g0 @ g0, IDENTITY)
        and np.array_equal(g1 @ g1, -IDENTITY)
        and np.array_equal(anticommutator(g0, g1), np.zeros((2, 2)))
        and np.array_equal(g0 @ g1, g2)
    )
