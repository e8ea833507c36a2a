"""Exact solver for arrays of point interactions.

Between impurities the field is a combination of the two free plane waves at
momentum k, so each impurity acts on the coefficient pair (right mover, left
mover) through M = W(x0)^-1 T W(x0), where the columns of W are the plane-wave
spinors evaluated at the impurity position.

Basis per species (the left-mover sign for positrons keeps electron and
positron amplitudes of an impurity at the origin complex conjugate at equal
couplings):

    electron:  u(k) e^{ikx},   gamma0 u(k) e^{-ikx}
    positron:  v(k) e^{ikx},  -gamma0 v(k) e^{-ikx}

With det M = 1, incidence from the left gives sigma = 1/M22 and
rho = -M21/M22, incidence from the right gives sigma = 1/M22 and rho = M12/M22.

Bound states are zeros of M22 at k = i kappa: the field then decays on both
sides. On that contour all transfer matrices are real, so the secular function
is Re M22, scanned on a grid and refined by bisection. The scan is uniform in
theta with kappa = m sin(theta), omega = m cos(theta); this keeps omega exact
and resolves states close to the zero-mode threshold kappa -> m.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy import optimize

from .clifford import SIGMA_3
from .errors import DegenerateBasisError, DomainError, TransmissionPoleError
from .free_states import Kinematics, positron_spinor, u_plus
from .point_interaction import PointInteraction, Species, matching_matrix
from .states import BoundState, Incidence, ScatteringResult, SpinorField, SpinorPiece

DEGENERATE_DET = 1e-14
POLE_TOL = 1e-14


@dataclass(frozen=True)
class ImpurityArray:
    impurities: tuple[PointInteraction, ...]
    mass: float = 1.0

    def __post_init__(self):
        imps = tuple(self.impurities)
        object.__setattr__(self, "impurities", imps)
        if not imps:
            raise DomainError("an impurity array needs at least one impurity")
        if not self.mass > 0:
            raise DomainError(f"mass must be positive, got {self.mass!r}")
        xs = [p.position for p in imps]
        if any(b <= a for a, b in zip(xs, xs[1:])):
            raise DomainError(f"impurity positions must be strictly increasing, got {xs}")

    @classmethod
    def single(cls, q: float = 0.0, lam: float = 0.0, position: float = 0.0,
               mass: float = 1.0) -> "ImpurityArray":
        return cls((PointInteraction(position, q, lam),), mass)

    @property
    def positions(self) -> list[float]:
        return [p.position for p in self.impurities]

    def __len__(self) -> int:
        return len(self.impurities)


@dataclass(frozen=True)
class TransferMatrix:
    """Coefficient-space transfer matrix; ``matrix`` has shape (..., 2, 2)."""

    matrix: np.ndarray
    k: complex

    def __matmul__(self, other: "TransferMatrix") -> "TransferMatrix":
        return TransferMatrix(self.matrix @ other.matrix, self.k)

    @property
    def det(self):
        m = self.matrix
        return m[..., 0, 0] * m[..., 1, 1] - m[..., 0, 1] * m[..., 1, 0]


def _mover_spinors(species: Species, kin: Kinematics):
    if species is Species.ELECTRON:
        right = u_plus(kin.mass, kin.k, kin.omega)
        return right, right @ SIGMA_3.T
    right = positron_spinor(kin.mass, kin.k, kin.omega)
    return right, -(right @ SIGMA_3.T)


def plane_wave_basis(species: Species, kin: Kinematics, x0: float) -> np.ndarray:
    """W(x0, k): columns are the right- and left-moving solutions at x0."""
    right, left = _mover_spinors(species, kin)
    k = np.asarray(kin.k, dtype=np.complex128)
    phase = np.exp(1j * k * x0)[..., None]
    return np.stack(np.broadcast_arrays(right * phase, left / phase), axis=-1)


def _inv2(w: np.ndarray) -> np.ndarray:
    det = w[..., 0, 0] * w[..., 1, 1] - w[..., 0, 1] * w[..., 1, 0]
    if np.any(np.abs(det) < DEGENERATE_DET):
        raise DegenerateBasisError("plane-wave basis is singular (k = 0?)")
    inv = np.empty_like(w)
    inv[..., 0, 0] = w[..., 1, 1]
    inv[..., 1, 1] = w[..., 0, 0]
    inv[..., 0, 1] = -w[..., 0, 1]
    inv[..., 1, 0] = -w[..., 1, 0]
    return inv / det[..., None, None]


def coefficient_transfer(p: PointInteraction, species: Species, kin: Kinematics) -> TransferMatrix:
    w = plane_wave_basis(species, kin, p.position)
    t = matching_matrix(p, species)
    return TransferMatrix(_inv2(w) @ t @ w, kin.k)


def free_propagator(species: Species, kin: Kinematics, d: float) -> np.ndarray:
    """Spinor map psi(x) -> psi(x + d) of the free equation, cos(kd) 1 + sin(kd)/k G.

    G is the first-order generator psi' = G psi (G^2 = -k^2); unlike the
    plane-wave basis it stays well conditioned as k -> 0.
    """
    k = np.asarray(kin.k, dtype=np.complex128)
    w = np.asarray(kin.omega, dtype=np.complex128)
    m = kin.mass
    up, down = (w + m, w - m) if species is Species.ELECTRON else (w - m, w + m)
    c = np.cos(k * d)
    sk = d * np.sinc(k * d / math.pi)           # sin(kd)/k, finite at k = 0
    out = np.zeros(np.broadcast(k, w).shape + (2, 2), dtype=np.complex128)
    out[..., 0, 0] = c
    out[..., 1, 1] = c
    out[..., 0, 1] = 1j * sk * up
    out[..., 1, 0] = 1j * sk * down
    return out


def compose(arr: ImpurityArray, species: Species, kin: Kinematics) -> TransferMatrix:
    """M_N ... M_1 in order of increasing position.

    Evaluated as W(x_N)^-1 T_N E_{N-1} ... E_1 T_1 W(x_1), with E the free
    propagator across each gap, so the ill-conditioned basis change at small
    k enters once instead of once per impurity.
    """
    imps = arr.impurities
    if len(imps) == 1:
        return coefficient_transfer(imps[0], species, kin)
    total = matching_matrix(imps[0], species)
    for prev, cur in zip(imps[:-1], imps[1:]):
        e = free_propagator(species, kin, cur.position - prev.position)
        total = matching_matrix(cur, species) @ e @ total
    w_first = plane_wave_basis(species, kin, imps[0].position)
    w_last = plane_wave_basis(species, kin, imps[-1].position)
    return TransferMatrix(_inv2(w_last) @ total @ w_first, kin.k)


# ---------------------------------------------------------------------------
# scattering
# ---------------------------------------------------------------------------

def amplitudes_on_grid(arr: ImpurityArray, species: Species, k) -> dict[str, np.ndarray]:
    """Vectorised amplitudes over real momenta for both incidence sides."""
    k = np.asarray(k, dtype=float)
    if np.any(k <= 0):
        raise DomainError("scattering momenta must be positive")
    m = compose(arr, species, Kinematics.from_momentum(arr.mass, k)).matrix
    m22 = m[..., 1, 1]
    if np.any(np.abs(m22) < POLE_TOL):
        raise TransmissionPoleError("transmission amplitude has a pole on the real k axis")
    # det M = 1 exactly, so 1/M22 is the transmission for either side; the
    # equivalent M11 - M12 M21 / M22 cancels badly once |M| is large (small k).
    return {
        "sigma_from_left": 1.0 / m22,
        "rho_from_left": -m[..., 1, 0] / m22,
        "sigma_from_right": 1.0 / m22,
        "rho_from_right": m[..., 0, 1] / m22,
    }


def s_matrix(arr: ImpurityArray, species: Species, k: float
             ) -> tuple[ScatteringResult, ScatteringResult]:
    """(incidence from the left, incidence from the right) amplitudes at real k > 0."""
    a = amplitudes_on_grid(arr, species, float(k))
    left = ScatteringResult(float(k), complex(a["sigma_from_left"]),
                            complex(a["rho_from_left"]),
                            species, Incidence.FROM_LEFT)
    right = ScatteringResult(float(k), complex(a["sigma_from_right"]),
                             complex(a["rho_from_right"]), species, Incidence.FROM_RIGHT)
    return left, right


def s_matrix_phase_shifts(sigma: complex, rho_left: complex, rho_right: complex
                          ) -> tuple[float, float]:
    """Channel phase shifts from the eigenvalues sigma +- r of [[sigma, rho_L],[rho_R, sigma]].

    r = sqrt(rho_L rho_R) with the sign closest to rho_L, so that r = rho for
    a reflection-symmetric scatterer.
    """
    r = np.sqrt(complex(rho_left) * complex(rho_right))
    if abs(r - rho_left) > abs(r + rho_left):
        r = -r
    plus, minus = sigma + r, sigma - r
    return 0.5 * math.atan2(plus.imag, plus.real), 0.5 * math.atan2(minus.imag, minus.real)


# ---------------------------------------------------------------------------
# bound states
# ---------------------------------------------------------------------------

def secular_function(arr: ImpurityArray, species: Species, theta):
    """Re M22 at k = i m sin(theta); zero exactly at bound states."""
    kin = Kinematics.imaginary(arr.mass, theta)
    return compose(arr, species, kin).matrix[..., 1, 1].real


def _theta_roots(arr, species, n_grid, eps):
    theta = np.linspace(eps, 0.5 * math.pi - eps, n_grid)
    f = secular_function(arr, species, theta)
    roots = []
    for i in range(n_grid - 1):
        a, b = f[i], f[i + 1]
        if a == 0.0:
            roots.append(float(theta[i]))
        elif a * b < 0.0:
            g = lambda t: float(secular_function(arr, species, t))
            roots.append(optimize.bisect(g, theta[i], theta[i + 1], xtol=1e-14, maxiter=200))
    if f[-1] == 0.0:
        roots.append(float(theta[-1]))
    return roots


def bound_state_at(arr: ImpurityArray, species: Species, theta: float) -> BoundState:
    """Rebuild the normalised bound-state spinor for a root theta of the secular function."""
    m = arr.mass
    kin = Kinematics.imaginary(m, theta)
    k = complex(kin.k)
    right, left = _mover_spinors(species, kin)
    kappa = m * math.sin(theta)
    omega = m * math.cos(theta)

    bounds = [-math.inf] + arr.positions + [math.inf]
    c = np.array([0.0, 1.0], dtype=np.complex128)
    coeffs = [c]
    for p in arr.impurities:
        c = coefficient_transfer(p, species, kin).matrix @ c
        coeffs.append(c)
    first = coeffs[0][1]
    last = coeffs[-1][0]
    coeffs[-1] = np.array([last, 0.0])

    pieces = []
    for lo, hi, (a, b) in zip(bounds[:-1], bounds[1:], coeffs):
        if a != 0:
            pieces.append(SpinorPiece(lo, hi, a * right, 1j * k))
        if b != 0:
            pieces.append(SpinorPiece(lo, hi, b * left, -1j * k))
    field = SpinorField(tuple(pieces)).normalized()
    flip = 1 if (last / first).real >= 0 else -1
    return BoundState(m, kappa, omega, species, flip, field)


def find_bound_states(arr: ImpurityArray, species: Species, n_grid: int = 2048,
                      eps: float = 1e-6) -> list[BoundState]:
    """All bound states with kappa in (m sin(eps), m cos(eps)), ordered by kappa."""
    if n_grid < 2:
        raise DomainError("n_grid must be at least 2")
    return [bound_state_at(arr, species, t) for t in _theta_roots(arr, species, n_grid, eps)]


def matching_residuals(bs: BoundState, arr: ImpurityArray) -> list[float]:
    """max |psi(x+) - T psi(x-)| at every impurity of the array."""
    out = []
    for p in arr.impurities:
        t = matching_matrix(p, bs.species)
        left = bs.spinor_profile.limit(p.position, -1)
        right = bs.spinor_profile.limit(p.position, +1)
        out.append(float(np.max(np.abs(right - t @ left))))
    return out


def as_array(impurities: Sequence[PointInteraction] | ImpurityArray, mass: float = 1.0
             ) -> ImpurityArray:
    if isinstance(impurities, ImpurityArray):
        return impurities
    return ImpurityArray(tuple(impurities), mass)
