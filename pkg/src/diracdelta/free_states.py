"""Free-particle kinematics and plane-wave spinors.

All functions accept scalar or array momenta; array inputs broadcast and the
spinor axis is the last one.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .clifford import SIGMA_1
from .errors import DomainError


def _check_mass(mass: float) -> None:
    if not mass > 0:
        raise DomainError(f"mass must be positive, got {mass!r}")


def dispersion(mass: float, k):
    """Positive-branch energy omega = sqrt(k^2 + m^2) (principal complex root)."""
    _check_mass(mass)
    k = np.asarray(k, dtype=np.complex128)
    w = np.sqrt(k * k + mass * mass)
    return w[()] if w.ndim == 0 else w


@dataclass(frozen=True)
class Kinematics:
    """Momentum/energy pair on the positive-energy branch.

    ``omega`` may be supplied explicitly when it is known more accurately than
    ``sqrt(k**2 + m**2)`` (e.g. near the threshold k = i*m).
    """

    mass: float
    k: complex
    omega: complex

    @classmethod
    def from_momentum(cls, mass: float, k) -> "Kinematics":
        return cls(mass, k, dispersion(mass, k))

    @classmethod
    def imaginary(cls, mass: float, theta) -> "Kinematics":
        """k = i m sin(theta), omega = m cos(theta): the bound-state search contour."""
        _check_mass(mass)
        theta = np.asarray(theta, dtype=float)
        return cls(mass, 1j * mass * np.sin(theta), mass * np.cos(theta) + 0j)


def _ratio(mass, k, omega):
    return k / (omega + mass)


def u_plus(mass: float, k, omega=None) -> np.ndarray:
    """Electron spinor (1, k/(omega + m)), unnormalised."""
    _check_mass(mass)
    k = np.asarray(k, dtype=np.complex128)
    omega = dispersion(mass, k) if omega is None else np.asarray(omega, dtype=np.complex128)
    r = _ratio(mass, k, omega)
    return np.stack(np.broadcast_arrays(np.ones_like(r), r), axis=-1)


def v_plus(mass: float, k, omega=None) -> np.ndarray:
    """Positron spinor gamma^2 conj(u_plus(k)) = (conj(k)/(conj(omega)+m), 1)."""
    return np.conj(u_plus(mass, k, omega)) @ SIGMA_1.T


def positron_spinor(mass: float, k, omega=None) -> np.ndarray:
    """Holomorphic continuation of v_plus: (k/(omega+m), 1).

    Equal to ``v_plus`` for real k; for complex k this is the spinor that solves
    the conjugate Dirac equation together with e^{ikx}.
    """
    return u_plus(mass, k, omega) @ SIGMA_1.T
