"""General delta impurity: couplings, matching matrix and discrete symmetries."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, replace

import numpy as np

from .clifford import Mat2C, SIGMA_1, SIGMA_3, IDENTITY, mat_exp
from .errors import DomainError

TWO_PI = 2.0 * math.pi
HALF_PI = 0.5 * math.pi

# Absolute tolerance for recognising q in {0, pi/2, pi, 3pi/2} after reduction mod 2pi.
BOUNDARY_TOL = 1e-12


class Species(enum.Enum):
    ELECTRON = "electron"
    POSITRON = "positron"

    @classmethod
    def parse(cls, text: str) -> "Species":
        key = text.strip().lower()
        aliases = {"e": "electron", "e-": "electron", "p": "positron", "e+": "positron"}
        key = aliases.get(key, key)
        try:
            return cls(key)
        except ValueError:
            raise DomainError(f"unknown species {text!r} (expected electron or positron)") from None

    @property
    def charge_sign(self) -> int:
        """Sign of the charge density: + for electrons, - for positrons."""
        return 1 if self is Species.ELECTRON else -1

    def conjugate(self) -> "Species":
        return Species.POSITRON if self is Species.ELECTRON else Species.ELECTRON


class Transformation(enum.Enum):
    P = "P"
    T = "T"
    C = "C"


@dataclass(frozen=True)
class PointInteraction:
    """A delta impurity ``Gamma(q, lambda) delta(x - position)`` with Gamma = q*1 + lambda*beta.

    ``q`` is the electrostatic coupling (an angle), ``lam`` the mass-spike coupling.
    """

    position: float = 0.0
    q: float = 0.0
    lam: float = 0.0

    def __post_init__(self):
        for name in ("position", "q", "lam"):
            value = getattr(self, name)
            if not math.isfinite(value):
                raise DomainError(f"PointInteraction.{name} must be finite, got {value!r}")

    @property
    def q_reduced(self) -> float:
        return reduce_angle(self.q)

    @property
    def is_electrostatic(self) -> bool:
        return self.lam == 0.0

    @property
    def is_mass_spike(self) -> bool:
        return self.q == 0.0

    @property
    def is_pure(self) -> bool:
        return self.is_electrostatic or self.is_mass_spike


def reduce_angle(q: float) -> float:
    """Representative of q in [0, 2pi)."""
    r = math.fmod(q, TWO_PI)
    if r < 0.0:
        r += TWO_PI
    if r >= TWO_PI:
        r = 0.0
    return r


def boundary_index(q: float, tol: float = BOUNDARY_TOL) -> int | None:
    """Return j if q = j*pi/2 (mod 2pi) for j in {0,1,2,3}, else None."""
    r = reduce_angle(q)
    j = round(r / HALF_PI)
    if abs(r - j * HALF_PI) <= tol:
        return j % 4
    return None


def quadrant(q: float) -> int | None:
    """Open quadrant 1..4 containing q (mod 2pi); None on the quadrant boundaries."""
    if boundary_index(q) is not None:
        return None
    return int(reduce_angle(q) // HALF_PI) + 1


def coupling_matrix(q: float, lam: float) -> Mat2C:
    """Gamma(q, lambda) = q*1 + lambda*beta."""
    return q * IDENTITY + lam * SIGMA_3


def matching_matrix(p: PointInteraction, species: Species = Species.ELECTRON) -> Mat2C:
    """T_delta = exp(-i gamma^2 Gamma(q', lambda)), q' = q (electrons) or -q (positrons).

    Relates the spinor on the two sides of the impurity: psi(x0+) = T psi(x0-).
    """
    q = p.q if species is Species.ELECTRON else -p.q
    return mat_exp(-1j * SIGMA_1 @ coupling_matrix(q, p.lam))


def transform(p: PointInteraction, which: Transformation | str) -> PointInteraction:
    """Image of the impurity under P, T or C.

    P and T leave the matching matrix invariant; C maps T(q, lambda) to T(-q, lambda).
    """
    which = Transformation(which) if isinstance(which, str) else which
    if which is Transformation.C:
        return replace(p, q=-p.q)
    return p


def conjugations(t: Mat2C) -> dict[str, Mat2C]:
    """The P, T and C images of a matching matrix, in the form they act on T itself."""
    g0, g2 = SIGMA_3, SIGMA_1
    return {
        "P": g0 @ np.linalg.inv(t) @ g0,
        "T": g0 @ np.conj(t) @ g0,
        "C": g2 @ np.conj(t) @ g2,
    }
