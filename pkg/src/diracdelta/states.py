"""Result containers: scattering amplitudes, piecewise spinors, bound states, densities."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from itertools import groupby

import numpy as np

from .errors import DomainError
from .point_interaction import Species


class Incidence(enum.Enum):
    """Side the incoming wave arrives from.

    FROM_LEFT is the right-moving ("diestro") setup whose amplitudes carry the
    subscript R in the literature; FROM_RIGHT is the left-moving ("zurdo") one.
    """

    FROM_LEFT = "left"
    FROM_RIGHT = "right"


@dataclass(frozen=True)
class ScatteringResult:
    k: float
    sigma: complex
    rho: complex
    species: Species
    side: Incidence = Incidence.FROM_LEFT

    @property
    def transmission(self) -> float:
        return abs(self.sigma) ** 2

    @property
    def reflection(self) -> float:
        return abs(self.rho) ** 2

    @property
    def unitarity_residual(self) -> float:
        return abs(self.transmission + self.reflection - 1.0)


@dataclass(frozen=True)
class SpinorPiece:
    """``coeffs * exp(exponent * x)`` on the open interval (lo, hi)."""

    lo: float
    hi: float
    coeffs: np.ndarray
    exponent: complex

    def __post_init__(self):
        if not self.lo < self.hi:
            raise DomainError(f"empty interval ({self.lo}, {self.hi})")
        c = np.asarray(self.coeffs, dtype=np.complex128).reshape(2)
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)
        object.__setattr__(self, "exponent", complex(self.exponent))


def _exp_integral(e: complex, lo: float, hi: float) -> complex:
    """Integral of exp(e*x) over (lo, hi); bounds may be infinite."""
    if abs(e) < 1e-300:
        if math.isinf(lo) or math.isinf(hi):
            raise DomainError("spinor field is not square integrable")
        return hi - lo

    def at(x: float) -> complex:
        if math.isinf(x):
            if (e.real > 0) == (x > 0) or e.real == 0.0:
                raise DomainError("spinor field is not square integrable")
            return 0.0
        return np.exp(e * x)

    return (at(hi) - at(lo)) / e


@dataclass(frozen=True)
class SpinorField:
    """Piecewise sum of exponentials; several pieces may share an interval."""

    pieces: tuple[SpinorPiece, ...]

    def __post_init__(self):
        object.__setattr__(self, "pieces", tuple(self.pieces))

    @property
    def breakpoints(self) -> list[float]:
        pts = sorted({p.lo for p in self.pieces} | {p.hi for p in self.pieces})
        return [x for x in pts if math.isfinite(x)]

    def __call__(self, x, side: int = 1) -> np.ndarray:
        """Evaluate at x (scalar or array). At a breakpoint ``side`` picks the one-sided limit."""
        x = np.asarray(x, dtype=float)
        out = np.zeros(x.shape + (2,), dtype=np.complex128)
        for p in self.pieces:
            if side >= 0:
                mask = (x >= p.lo) & (x < p.hi)
            else:
                mask = (x > p.lo) & (x <= p.hi)
            if np.any(mask):
                xs = x[mask]
                out[mask] += np.exp(p.exponent * xs)[..., None] * p.coeffs
        return out

    def limit(self, x0: float, side: int) -> np.ndarray:
        return self(np.float64(x0), side=side)

    def norm2(self) -> float:
        """Exact integral of |psi|^2 over the real line."""
        total = 0.0 + 0.0j
        key = lambda p: (p.lo, p.hi)
        for _, group in groupby(sorted(self.pieces, key=key), key=key):
            group = list(group)
            for a in group:
                for b in group:
                    overlap = np.vdot(b.coeffs, a.coeffs)
                    if overlap == 0:
                        continue
                    total += overlap * _exp_integral(a.exponent + np.conj(b.exponent), a.lo, a.hi)
        return float(total.real)

    def scaled(self, factor: complex) -> "SpinorField":
        return SpinorField(tuple(SpinorPiece(p.lo, p.hi, factor * p.coeffs, p.exponent)
                                 for p in self.pieces))

    def normalized(self) -> "SpinorField":
        n2 = self.norm2()
        if not n2 > 0:
            raise DomainError("cannot normalise a zero spinor field")
        return self.scaled(1.0 / math.sqrt(n2))

    def probability(self, x) -> np.ndarray:
        psi = self(x)
        return np.sum((psi * np.conj(psi)).real, axis=-1)


@dataclass(frozen=True)
class BoundState:
    """Normalised bound state; ``spinor_profile`` has unit L2 norm."""

    mass: float
    kappa_b: float
    omega_b: float
    species: Species
    sign_flip: int
    spinor_profile: SpinorField = field(repr=False)

    @property
    def momentum(self) -> complex:
        return 1j * self.kappa_b


@dataclass(frozen=True)
class DensityProfile:
    """Charge density sign * amplitude * exp(-decay_rate * |x - center|)."""

    Q: float
    amplitude: float
    decay_rate: float
    sign: int
    center: float = 0.0

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        return self.sign * self.amplitude * np.exp(-self.decay_rate * np.abs(x - self.center))

    @property
    def total_charge(self) -> float:
        return self.sign * 2.0 * self.amplitude / self.decay_rate
