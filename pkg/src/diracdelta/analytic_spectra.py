"""Closed-form spectra of a single electrostatic or mass-spike impurity at x = 0.

Bound states, charge densities, scattering amplitudes, pole conditions and
phase shifts for electrons (Dirac Hamiltonian, matching matrix T(q, lambda))
and positrons (conjugate Hamiltonian, matching matrix T(-q, lambda)).

Conventions
-----------
* Electron scattering from the left: ``u e^{ikx} + rho gamma0 u e^{-ikx}`` for
  x < 0 and ``sigma u e^{ikx}`` for x > 0.
* Positron reflected waves enter with an explicit minus sign,
  ``-rho gamma0 v``; with it electron and positron amplitudes are complex
  conjugates of one another at equal couplings.
* Bound-state spinors have unit norm, so the charge density is +-Q|psi|^2 and
  integrates to +-Q.
* The total phase shift is reported through tan(2 delta) = Im/Re of
  sigma^2 - rho^2, for both potential types.
"""

from __future__ import annotations

import enum
import math

import numpy as np

from .errors import DomainError, InconsistencyError
from .point_interaction import (
    PointInteraction,
    Species,
    boundary_index,
    matching_matrix,
    quadrant,
)
from .states import (
    BoundState,
    DensityProfile,
    Incidence,
    ScatteringResult,
    SpinorField,
    SpinorPiece,
)

UNITARITY_TOL = 1e-8
# States with a smaller kappa (extent beyond 1e150/m) cannot be normalised in floating point.
MIN_KAPPA = 1e-150


class Kind(enum.Enum):
    ELECTROSTATIC = "electrostatic"
    MASS_SPIKE = "mass_spike"


def _check_mass(m: float) -> None:
    if not m > 0:
        raise DomainError(f"mass must be positive, got {m!r}")


def _check_k(k: float) -> None:
    if not k > 0:
        raise DomainError(f"momentum must be positive, got {k!r}; use the L/R symmetry for k < 0")


# ---------------------------------------------------------------------------
# bound states
# ---------------------------------------------------------------------------

def zone_spinors(m: float, kappa: float, omega: float, species: Species):
    """Decaying free spinors (left zone, right zone) at k = i*kappa.

    Electrons: (1, -+ i kappa/(omega+m)); positrons: (-+ i kappa/(omega+m), 1).
    """
    r = kappa / (omega + m)
    if species is Species.ELECTRON:
        return np.array([1.0, -1j * r]), np.array([1.0, 1j * r])
    return np.array([-1j * r, 1.0]), np.array([1j * r, 1.0])


def _bound_state(m, kappa, omega, species, sign_flip, center=0.0) -> BoundState:
    left, right = zone_spinors(m, kappa, omega, species)
    field = SpinorField((
        SpinorPiece(-math.inf, center, left * math.exp(-kappa * center), kappa),
        SpinorPiece(center, math.inf, sign_flip * right * math.exp(kappa * center), -kappa),
    )).normalized()
    return BoundState(m, kappa, omega, species, sign_flip, field)


def electrostatic_bound_state(m: float, q: float) -> BoundState | None:
    """The bound state of the electrostatic impurity, if any.

    One state per open quadrant of q (mod 2pi): positron in I and III, electron
    in II and IV. q = pi/2 gives the positron zero mode and q = 3pi/2 the
    electron zero mode (kappa = m, omega = 0); q in {0, pi} gives none.
    """
    _check_mass(m)
    b = boundary_index(q)
    if b is not None:
        if b == 1:
            return _bound_state(m, m, 0.0, Species.POSITRON, 1)
        if b == 3:
            return _bound_state(m, m, 0.0, Species.ELECTRON, 1)
        return None
    quad = quadrant(q)
    s, c = math.sin(q), math.cos(q)
    kappa = m * abs(s)
    omega = m * abs(c)
    species, flip = {
        1: (Species.POSITRON, 1),
        2: (Species.ELECTRON, -1),
        3: (Species.POSITRON, -1),
        4: (Species.ELECTRON, 1),
    }[quad]
    return _bound_state(m, kappa, omega, species, flip)


def mass_spike_bound_state(m: float, lam: float) -> BoundState | None:
    """Electron state for lambda < 0, positron state for lambda > 0, kappa = m|tanh lambda|."""
    _check_mass(m)
    if lam == 0.0:
        return None
    species = Species.ELECTRON if lam < 0 else Species.POSITRON
    kappa = m * abs(math.tanh(lam))
    if kappa < MIN_KAPPA * m:
        return None
    omega = m / math.cosh(lam)
    return _bound_state(m, kappa, omega, species, 1)


def bound_state(m: float, p: PointInteraction, species: Species) -> BoundState | None:
    """Closed-form bound state of a pure-type impurity for one species (None if absent)."""
    if p.q != 0.0 and p.lam != 0.0:
        raise DomainError("no closed form for an impurity with both q and lambda nonzero")
    bs = (mass_spike_bound_state(m, p.lam) if p.q == 0.0
          else electrostatic_bound_state(m, p.q))
    if bs is None or bs.species is not species:
        return None
    if p.position != 0.0:
        bs = _bound_state(m, bs.kappa_b, bs.omega_b, species, bs.sign_flip, p.position)
    return bs


def matching_residual(bs: BoundState, p: PointInteraction) -> float:
    """max |psi(x0+) - T psi(x0-)| for the bound-state spinor at impurity p."""
    field = bs.spinor_profile
    t = matching_matrix(p, bs.species)
    left = field.limit(p.position, -1)
    right = field.limit(p.position, +1)
    return float(np.max(np.abs(right - t @ left)))


def bound_state_density(bs: BoundState, Q: float = 1.0) -> DensityProfile:
    """Charge density +-Q kappa_b exp(-2 kappa_b |x - x0|) of a single-impurity bound state."""
    if not Q > 0:
        raise DomainError(f"Q must be positive, got {Q!r}")
    pieces = bs.spinor_profile.pieces
    center = pieces[0].hi if len(pieces) == 2 else 0.0
    return DensityProfile(Q=Q, amplitude=Q * bs.kappa_b, decay_rate=2.0 * bs.kappa_b,
                          sign=bs.species.charge_sign, center=center)


# ---------------------------------------------------------------------------
# scattering
# ---------------------------------------------------------------------------

def _result(k, sigma, rho, species, side):
    return ScatteringResult(float(k), complex(sigma), complex(rho), species, side)


def electrostatic_amplitudes(m: float, q: float, k: float, species: Species,
                             side: Incidence = Incidence.FROM_LEFT) -> ScatteringResult:
    _check_mass(m)
    _check_k(k)
    w = math.sqrt(k * k + m * m)
    s = 1.0 if species is Species.ELECTRON else -1.0
    den = k * math.cos(q) + s * 1j * w * math.sin(q)
    return _result(k, k / den, -s * 1j * m * math.sin(q) / den, species, side)


def mass_spike_amplitudes(m: float, lam: float, k: float, species: Species,
                          side: Incidence = Incidence.FROM_LEFT) -> ScatteringResult:
    _check_mass(m)
    _check_k(k)
    w = math.sqrt(k * k + m * m)
    s = 1.0 if species is Species.ELECTRON else -1.0
    den = k * math.cosh(lam) + s * 1j * m * math.sinh(lam)
    return _result(k, k / den, -s * 1j * w * math.sinh(lam) / den, species, side)


def amplitudes(m: float, p: PointInteraction, k: float, species: Species,
               side: Incidence = Incidence.FROM_LEFT) -> ScatteringResult:
    """Closed-form amplitudes for a pure-type impurity at any position.

    Moving the impurity to x0 multiplies the reflection amplitude by
    exp(2ikx0) for incidence from the left and exp(-2ikx0) from the right.
    """
    if p.q != 0.0 and p.lam != 0.0:
        raise DomainError("no closed form for an impurity with both q and lambda nonzero")
    if p.q == 0.0:
        r = mass_spike_amplitudes(m, p.lam, k, species, side)
    else:
        r = electrostatic_amplitudes(m, p.q, k, species, side)
    if p.position != 0.0:
        sgn = 1.0 if side is Incidence.FROM_LEFT else -1.0
        r = _result(k, r.sigma, r.rho * np.exp(2j * sgn * k * p.position), species, side)
    return r


def pole_condition_residual(m: float, coupling: float, kind: Kind, species: Species,
                            kappa: float) -> float:
    """|denominator of sigma| at k = i*kappa; vanishes exactly at the bound-state kappa."""
    _check_mass(m)
    if not 0 < kappa < m:
        raise DomainError(f"kappa must lie in (0, m), got {kappa!r}")
    s = 1.0 if species is Species.ELECTRON else -1.0
    if kind is Kind.ELECTROSTATIC:
        w = math.sqrt((m - kappa) * (m + kappa))
        # k cos q + i s w sin q  at k = i kappa  ->  i (kappa cos q + s w sin q)
        return abs(kappa * math.cos(coupling) + s * w * math.sin(coupling))
    return abs(kappa * math.cosh(coupling) + s * m * math.sinh(coupling))


# ---------------------------------------------------------------------------
# phase shifts
# ---------------------------------------------------------------------------

def channel_phase_shifts(sigma: complex, rho: complex) -> tuple[float, float]:
    """(delta_+, delta_-) with exp(2 i delta_pm) = sigma +- rho, each in (-pi/2, pi/2]."""
    plus, minus = sigma + rho, sigma - rho
    return 0.5 * math.atan2(plus.imag, plus.real), 0.5 * math.atan2(minus.imag, minus.real)


def total_phase_shift(amps: ScatteringResult) -> float:
    """delta = delta_+ + delta_- from the eigenvalues sigma +- rho of the S-matrix."""
    if abs(amps.transmission + amps.reflection - 1.0) > UNITARITY_TOL:
        raise InconsistencyError(
            f"amplitudes are not unitary: |sigma|^2+|rho|^2 = {amps.transmission + amps.reflection!r}")
    d_plus, d_minus = channel_phase_shifts(amps.sigma, amps.rho)
    return d_plus + d_minus


def unwrap_phase(deltas) -> np.ndarray:
    """Continuous-in-k version of a sampled total phase shift (defined mod pi)."""
    d = np.asarray(deltas, dtype=float)
    return 0.5 * np.unwrap(2.0 * d)


def closed_form_tan2delta(m: float, coupling: float, kind: Kind, species: Species, k):
    """tan(2 delta(k)) in closed form; positrons carry the opposite sign."""
    k = np.asarray(k, dtype=float)
    s = 1.0 if species is Species.ELECTRON else -1.0
    if kind is Kind.ELECTROSTATIC:
        q = coupling
        num = 2.0 * k * np.sqrt(k * k + m * m) * math.sin(2 * q)
        den = m * m - (2 * k * k + m * m) * math.cos(2 * q)
    else:
        lam = coupling
        num = -2.0 * k * m * math.sinh(2 * lam)
        den = k * k + m * m + (k * k - m * m) * math.cosh(2 * lam)
    return s * num / den


def kind_of(p: PointInteraction) -> tuple[Kind, float]:
    """(kind, coupling) of a pure-type impurity; q = lambda = 0 counts as electrostatic."""
    if p.q != 0.0 and p.lam != 0.0:
        raise DomainError("impurity has both q and lambda nonzero")
    if p.q == 0.0 and p.lam != 0.0:
        return Kind.MASS_SPIKE, p.lam
    return Kind.ELECTROSTATIC, p.q

