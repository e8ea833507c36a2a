"""Acceptance checks shared by ``diracdelta verify`` and the test suite.

Each check draws its random cases from a seeded generator and returns a
:class:`CheckResult` with the worst deviation it saw, so a failing run can be
reproduced exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import analytic_spectra as an
from . import transfer_solver as ts
from .cli import cmd_bound, cmd_density, cmd_phase, run_job
from .config import Grid, JobConfig, Sweep, parse_config
from .free_states import Kinematics
from .point_interaction import PointInteraction, Species, boundary_index, matching_matrix
from .states import Incidence

DEFAULT_SEED = 20240917

E, P = Species.ELECTRON, Species.POSITRON
LEFT, RIGHT = Incidence.FROM_LEFT, Incidence.FROM_RIGHT


@dataclass(frozen=True)
class CheckResult:
    number: int
    name: str
    passed: bool
    detail: str

    def line(self) -> str:
        return f"criterion {self.number} [{'PASS' if self.passed else 'FAIL'}] {self.name}: {self.detail}"


def _rng(seed: int | None, number: int) -> np.random.Generator:
    return np.random.default_rng([DEFAULT_SEED if seed is None else seed, number])


def _random_array(rng, max_n: int = 8, mixed: bool = True) -> ts.ImpurityArray:
    n = int(rng.integers(1, max_n + 1))
    x = np.cumsum(rng.uniform(0.1, 2.0, n)) - rng.uniform(0.0, 4.0)
    imps = []
    for xi in x:
        q = rng.uniform(-math.pi, math.pi)
        lam = rng.uniform(-2.0, 2.0) if mixed else 0.0
        imps.append(PointInteraction(float(xi), q, lam))
    return ts.ImpurityArray(tuple(imps))


def _mirror_array(rng, max_pairs: int = 4) -> ts.ImpurityArray:
    """Random array invariant under x -> -x (couplings mirrored)."""
    n = int(rng.integers(1, max_pairs + 1))
    x = np.cumsum(rng.uniform(0.1, 2.0, n))
    cs = [(rng.uniform(-math.pi, math.pi), rng.uniform(-2.0, 2.0)) for _ in range(n)]
    imps = [PointInteraction(-float(xi), q, lam) for xi, (q, lam) in zip(x[::-1], cs[::-1])]
    if rng.random() < 0.5:
        imps.append(PointInteraction(0.0, rng.uniform(-math.pi, math.pi), rng.uniform(-2, 2)))
    imps += [PointInteraction(float(xi), q, lam) for xi, (q, lam) in zip(x, cs)]
    return ts.ImpurityArray(tuple(imps))


def _random_pure(rng, position: bool = False) -> tuple[PointInteraction, an.Kind, float]:
    x0 = float(rng.uniform(-2.0, 2.0)) if position else 0.0
    if rng.random() < 0.5:
        q = float(rng.uniform(-2 * math.pi, 2 * math.pi))
        return PointInteraction(x0, q, 0.0), an.Kind.ELECTROSTATIC, q
    lam = float(rng.uniform(-3.0, 3.0))
    return PointInteraction(x0, 0.0, lam), an.Kind.MASS_SPIKE, lam


# ---------------------------------------------------------------------------
# 1. matching-matrix special cases
# ---------------------------------------------------------------------------

def check_matching_special_cases(seed=None) -> CheckResult:
    rng = _rng(seed, 1)
    worst = 0.0
    for _ in range(200):
        c = rng.uniform(-5.0, 5.0)
        c_, s_ = math.cos(c), math.sin(c)
        # T(q) = cos q - i gamma^2 sin q ; T(lambda) = cosh lambda + i gamma^1 sinh lambda
        elec = np.array([[c_, -1j * s_], [-1j * s_, c_]])
        ch, sh = math.cosh(c), math.sinh(c)
        mass = np.array([[ch, 1j * sh], [-1j * sh, ch]])
        worst = max(worst,
                    np.max(np.abs(matching_matrix(PointInteraction(0, c, 0), E) - elec)),
                    np.max(np.abs(matching_matrix(PointInteraction(0, 0, c), E) - mass)),
                    np.max(np.abs(matching_matrix(PointInteraction(0, 0, c), P) - mass)))
    return CheckResult(1, "matching-matrix special cases", worst < 1e-13,
                       f"max entry error {worst:.2e} over 200 couplings (tol 1e-13)")


# ---------------------------------------------------------------------------
# 2. unitarity
# ---------------------------------------------------------------------------

def check_unitarity(seed=None) -> CheckResult:
    rng = _rng(seed, 2)
    worst_a = 0.0
    for _ in range(1000):
        p, _, _ = _random_pure(rng)
        species = E if rng.random() < 0.5 else P
        k = float(rng.uniform(1e-6, 10.0))
        for side in (LEFT, RIGHT):
            worst_a = max(worst_a, an.amplitudes(1.0, p, k, species, side).unitarity_residual)
    worst_n = 0.0
    for _ in range(1000):
        arr = _random_array(rng)
        species = E if rng.random() < 0.5 else P
        k = rng.uniform(1e-3, 10.0, 8)
        a = ts.amplitudes_on_grid(arr, species, k)
        for side in ("left", "right"):
            u = np.abs(a[f"sigma_from_{side}"]) ** 2 + np.abs(a[f"rho_from_{side}"]) ** 2
            worst_n = max(worst_n, float(np.max(np.abs(u - 1.0))))
    ok = worst_a < 1e-12 and worst_n < 1e-10
    return CheckResult(2, "unitarity", ok,
                       f"analytic {worst_a:.2e} (tol 1e-12), numeric arrays N<=8 {worst_n:.2e} "
                       f"(tol 1e-10)")


# ---------------------------------------------------------------------------
# 3. symmetry identities
# ---------------------------------------------------------------------------

def check_symmetries(seed=None) -> CheckResult:
    rng = _rng(seed, 3)
    worst_a = 0.0
    for _ in range(1000):
        p, _, _ = _random_pure(rng)
        k = float(rng.uniform(1e-3, 10.0))
        r = {(s, d): an.amplitudes(1.0, p, k, s, d) for s in (E, P) for d in (LEFT, RIGHT)}
        ref = r[E, LEFT]
        for (s, d), x in r.items():
            sig = x.sigma if s is E else x.sigma.conjugate()
            rho = x.rho if s is E else x.rho.conjugate()
            worst_a = max(worst_a, abs(sig - ref.sigma), abs(rho - ref.rho))
    worst_n = 0.0
    for _ in range(1000):
        # transfer path on single impurities at the origin, mixed couplings included
        q, lam = rng.uniform(-math.pi, math.pi), rng.uniform(-2.0, 2.0)
        if rng.random() < 0.5:
            q, lam = (q, 0.0) if rng.random() < 0.5 else (0.0, lam)
        arr = ts.ImpurityArray((PointInteraction(0.0, q, lam),))
        k = rng.uniform(1e-3, 10.0, 4)
        ae = ts.amplitudes_on_grid(arr, E, k)
        ap = ts.amplitudes_on_grid(arr, P, k)
        ref_s, ref_r = ae["sigma_from_left"], ae["rho_from_left"]
        for a, conj in ((ae, False), (ap, True)):
            for side in ("left", "right"):
                s, r = a[f"sigma_from_{side}"], a[f"rho_from_{side}"]
                if conj:
                    s, r = np.conj(s), np.conj(r)
                worst_n = max(worst_n, float(np.max(np.abs(s - ref_s))),
                              float(np.max(np.abs(r - ref_r))))
        # parity on arrays: rho_L = rho_R when mirror symmetric (sigma_L = sigma_R by det M = 1)
        mirror = _mirror_array(rng)
        for species in (E, P):
            a = ts.amplitudes_on_grid(mirror, species, k)
            worst_n = max(worst_n,
                          float(np.max(np.abs(a["sigma_from_left"] - a["sigma_from_right"]))),
                          float(np.max(np.abs(a["rho_from_left"] - a["rho_from_right"]))))
    ok = worst_a < 1e-12 and worst_n < 1e-10
    return CheckResult(3, "parity/time-reversal and electron-positron conjugation", ok,
                       f"analytic {worst_a:.2e} (tol 1e-12), numeric {worst_n:.2e} (tol 1e-10)")


# ---------------------------------------------------------------------------
# 4. bound-state tables
# ---------------------------------------------------------------------------

def _sweep(parameter: str, lo: float, hi: float, n: int, species="both") -> list[tuple]:
    cfg = JobConfig(species=species, impurities=[PointInteraction(0.0, 0.0, 0.0)],
                    sweep=Sweep(parameter, lo, hi, n))
    return cmd_bound(cfg).rows


def check_bound_tables(seed=None) -> CheckResult:
    problems = []
    worst = 0.0
    m = 1.0
    # electrostatic sweep, 8 samples strictly inside each quadrant
    pattern = {1: "positron", 2: "electron", 3: "positron", 4: "electron"}
    for quad in range(1, 5):
        lo = (quad - 1) * math.pi / 2
        for q in lo + (np.arange(8) + 0.5) * (math.pi / 16):
            rows = _sweep("q", q, q + 1.0, 2)[:1]
            if len(rows) != 1 or rows[0][1] != pattern[quad]:
                problems.append(f"q={q:.3f}: {rows}")
                continue
            _, sp, kappa, omega, flip, _, _ = rows[0]
            worst = max(worst, abs(kappa - m * abs(math.sin(q))),
                        abs(omega - m * abs(math.cos(q))))
            numeric = ts.find_bound_states(ts.ImpurityArray.single(q=q), Species.parse(sp))
            if len(numeric) != 1:
                problems.append(f"q={q:.3f}: numeric found {len(numeric)}")
                continue
            worst = max(worst, abs(numeric[0].kappa_b - kappa), abs(numeric[0].omega_b - omega))
            if numeric[0].sign_flip != flip:
                problems.append(f"q={q:.3f}: sign flip {numeric[0].sign_flip} vs {flip}")
    # zero mode and boundaries
    zm = an.electrostatic_bound_state(m, math.pi / 2)
    if not (zm and zm.species is P and zm.kappa_b == m and zm.omega_b == 0.0):
        problems.append(f"zero mode at pi/2: {zm}")
    for q in (0.0, math.pi):
        if any(an.bound_state(m, PointInteraction(0, q, 0), s) for s in (E, P)):
            problems.append(f"unexpected bound state at q={q}")
    # mass spike sweep over [-2, 2]
    for lam in np.linspace(-2.0, 2.0, 41):
        lam = float(lam)
        rows = _sweep("lambda", lam, lam + 1.0, 2)
        rows = [r for r in rows if r[0] == lam]
        expect = [] if lam == 0 else ["electron" if lam < 0 else "positron"]
        if [r[1] for r in rows] != expect:
            problems.append(f"lambda={lam}: species {[r[1] for r in rows]}")
            continue
        for r in rows:
            kappa, omega = r[2], r[3]
            worst = max(worst, abs(kappa - m * abs(math.tanh(lam))),
                        abs(omega - m / math.cosh(lam)))
            numeric = ts.find_bound_states(ts.ImpurityArray.single(lam=lam), Species.parse(r[1]))
            if len(numeric) != 1:
                problems.append(f"lambda={lam}: numeric found {len(numeric)}")
                continue
            worst = max(worst, abs(numeric[0].kappa_b - kappa), abs(numeric[0].omega_b - omega))
    ok = not problems and worst < 1e-10
    detail = f"max deviation {worst:.2e} (tol 1e-10)"
    if problems:
        detail += f"; {len(problems)} mismatches, first: {problems[0]}"
    return CheckResult(4, "bound-state tables", ok, detail)


# ---------------------------------------------------------------------------
# 5. pole / bound-state correspondence
# ---------------------------------------------------------------------------

def check_poles(seed=None) -> CheckResult:
    rng = _rng(seed, 5)
    worst = 0.0
    problems = []
    for _ in range(100):
        p, kind, c = _random_pure(rng)
        if kind is an.Kind.ELECTROSTATIC and boundary_index(c, 1e-3) is not None:
            continue
        arr = ts.ImpurityArray((p,))
        for species in (E, P):
            found = ts.find_bound_states(arr, species)
            for bs in found:
                worst = max(worst,
                            an.pole_condition_residual(1.0, c, kind, species, bs.kappa_b),
                            abs(complex(ts.compose(arr, species,
                                                   Kinematics(1.0, 1j * bs.kappa_b, bs.omega_b)
                                                   ).matrix[1, 1])))
            expected = an.bound_state(1.0, p, species) is not None
            if bool(found) != expected:
                problems.append(f"{p} {species.value}: found {len(found)}")
            # complementary regions: the closed-form rules
            if kind is an.Kind.ELECTROSTATIC:
                allowed = (math.tan(c) < 0) if species is E else (math.tan(c) > 0)
            else:
                allowed = (c < 0) if species is E else (c > 0)
            if bool(found) != allowed:
                problems.append(f"{p} {species.value}: region rule violated")
    # arrays: every numeric root is a zero of the transmission denominator
    for _ in range(100):
        arr = _random_array(rng, 4)
        for species in (E, P):
            for bs in ts.find_bound_states(arr, species):
                m22 = ts.compose(arr, species, Kinematics(1.0, 1j * bs.kappa_b, bs.omega_b)
                                 ).matrix[1, 1]
                worst = max(worst, abs(complex(m22)))
    ok = worst < 1e-10 and not problems
    detail = f"max denominator at k=i*kappa_b {worst:.2e} (tol 1e-10)"
    if problems:
        detail += f"; {len(problems)} mismatches, first: {problems[0]}"
    return CheckResult(5, "pole/bound-state correspondence", ok, detail)


# ---------------------------------------------------------------------------
# 6. charge densities
# ---------------------------------------------------------------------------

def check_densities(seed=None) -> CheckResult:
    rng = _rng(seed, 6)
    cases = [("electrostatic", math.pi / 6, "positron"), ("mass", -1.0, "electron")]
    for _ in range(10):
        q = float(rng.uniform(0.05, 2 * math.pi - 0.05))
        bs = an.electrostatic_bound_state(1.0, q)
        if bs is not None:
            cases.append(("electrostatic", q, bs.species.value))
        lam = float(rng.uniform(-3, 3))
        cases.append(("mass", lam, "electron" if lam < 0 else "positron"))
    worst_exact = worst_total = 0.0
    problems = []
    for kind, c, sp in cases:
        Q = float(rng.uniform(0.5, 2.0))
        imp = PointInteraction(0.0, c, 0.0) if kind == "electrostatic" else \
            PointInteraction(0.0, 0.0, c)
        table = cmd_density(JobConfig(Q=Q, species=sp, impurities=[imp]))
        ch = dict(table.checks)
        sign = 1 if sp == "electron" else -1
        if kind == "electrostatic":
            kappa = abs(math.sin(c))
        else:
            kappa = abs(math.tanh(c))
        worst_exact = max(worst_exact, abs(ch["j0_at_center"] - sign * Q * kappa),
                          abs(ch["decay_rate"] - 2 * kappa))
        worst_total = max(worst_total, abs(ch["total_charge_simpson"] - sign * Q))
        x = np.array(table.column("x"))
        j = np.array(table.column("j0"))
        mid = len(x) // 2
        if not np.array_equal(j, j[::-1]):
            problems.append(f"{kind} {c:.3f}: not mirror symmetric")
        if np.any(np.sign(j) != sign):
            problems.append(f"{kind} {c:.3f}: wrong sign")
        if not (np.all(np.diff(np.abs(j[mid:])) < 0) and abs(j[mid]) == np.max(np.abs(j))):
            problems.append(f"{kind} {c:.3f}: no cusp with monotone tails")
    ok = worst_exact < 1e-12 and worst_total < 1e-6 and not problems
    detail = (f"j0(0)/decay error {worst_exact:.2e} (tol 1e-12), total charge error "
              f"{worst_total:.2e} (tol 1e-6) over {len(cases)} cases")
    if problems:
        detail += f"; first problem: {problems[0]}"
    return CheckResult(6, "charge densities", ok, detail)


# ---------------------------------------------------------------------------
# 7. phase shifts
# ---------------------------------------------------------------------------

def check_phase_shifts(seed=None) -> CheckResult:
    rng = _rng(seed, 7)
    grid = Grid(0.01, 10.0, 512)
    ks = np.linspace(grid.lo, grid.hi, grid.n)
    worst = 0.0
    for kind in ("q", "lambda"):
        for _ in range(20):
            c = float(rng.uniform(-math.pi, math.pi) if kind == "q" else rng.uniform(-3, 3))
            imp = PointInteraction(0.0, c, 0.0) if kind == "q" else PointInteraction(0.0, 0.0, c)
            table = cmd_phase(JobConfig(species="both", impurities=[imp], k_grid=grid))
            worst = max(worst, max(table.column("residual")))
            # eigenvalues of the numerically composed S-matrix against the same closed form
            k_kind = an.Kind.ELECTROSTATIC if kind == "q" else an.Kind.MASS_SPIKE
            for species in (E, P):
                a = ts.amplitudes_on_grid(ts.ImpurityArray((imp,)), species, ks)
                cf = an.closed_form_tan2delta(1.0, c, k_kind, species, ks)
                for s, rl, rr, ref in zip(a["sigma_from_left"], a["rho_from_left"],
                                          a["rho_from_right"], cf):
                    dp, dm = ts.s_matrix_phase_shifts(s, rl, rr)
                    t = math.tan(2 * (dp + dm))
                    worst = max(worst, abs(t - ref) / max(1.0, abs(ref)))
    return CheckResult(7, "phase shifts", worst < 1e-8,
                       f"max relative tan(2 delta) residual {worst:.2e} over 20+20 couplings x "
                       f"512 k (tol 1e-8)")


# ---------------------------------------------------------------------------
# 8. analytic vs transfer-matrix oracle equivalence
# ---------------------------------------------------------------------------

def check_oracle_equivalence(seed=None) -> CheckResult:
    rng = _rng(seed, 8)
    worst_amp = worst_bs = 0.0
    problems = []
    for _ in range(500):
        p, kind, c = _random_pure(rng, position=True)
        arr = ts.ImpurityArray((p,))
        ks = rng.uniform(1e-3, 10.0, 4)
        for species in (E, P):
            a = ts.amplitudes_on_grid(arr, species, ks)
            for i, k in enumerate(ks):
                for side, key in ((LEFT, "left"), (RIGHT, "right")):
                    r = an.amplitudes(1.0, p, float(k), species, side)
                    worst_amp = max(worst_amp, abs(r.sigma - a[f"sigma_from_{key}"][i]),
                                    abs(r.rho - a[f"rho_from_{key}"][i]))
            exact = an.bound_state(1.0, p, species)
            found = ts.find_bound_states(arr, species)
            if exact is None:
                if found:
                    problems.append(f"{p} {species.value}: spurious state")
                continue
            if exact.kappa_b < 1e-5 or exact.omega_b < 1e-5:
                continue  # outside the scanned window kappa in (m sin eps, m cos eps)
            if len(found) != 1:
                problems.append(f"{p} {species.value}: found {len(found)}")
                continue
            b = found[0]
            if b.sign_flip != exact.sign_flip:
                problems.append(f"{p} {species.value}: sign flip")
            x = np.linspace(p.position - 3, p.position + 3, 7)
            worst_bs = max(worst_bs, abs(b.kappa_b - exact.kappa_b),
                           abs(b.omega_b - exact.omega_b),
                           float(np.max(np.abs(b.spinor_profile.probability(x)
                                               - exact.spinor_profile.probability(x)))))
    ok = worst_amp < 1e-10 and worst_bs < 1e-10 and not problems
    detail = f"amplitudes {worst_amp:.2e}, bound states {worst_bs:.2e} (tol 1e-10)"
    if problems:
        detail += f"; {len(problems)} mismatches, first: {problems[0]}"
    return CheckResult(8, "analytic vs transfer-matrix equivalence", ok, detail)


# ---------------------------------------------------------------------------
# 9. determinism
# ---------------------------------------------------------------------------

_DETERMINISM_CONFIGS = {
    "scatter": "[job]\nspecies = both\n[impurity.1]\nposition = -0.5\nq = 0.4\nlambda = 0.9\n"
               "[impurity.2]\nposition = 0.5\nq = 2*pi/3\n[grid]\nk_min = 0.01\nk_max = 10\n"
               "n_k = 64\n",
    "bound": "[job]\nspecies = both\n[impurity]\nq = 0\n[sweep]\nparameter = q\nmin = 0.1\n"
             "max = 2*pi - 0.1\nn = 32\n",
    "density": "[job]\nspecies = positron\n[impurity]\nq = pi/6\n",
    "phase": "[job]\nspecies = both\n[impurity]\nlambda = 1\n[grid]\nk_min = 0.01\nk_max = 10\n"
             "n_k = 64\n",
}


def check_determinism(seed=None) -> CheckResult:
    bad = []
    for command, text in _DETERMINISM_CONFIGS.items():
        for fmt in ("csv", "json"):
            outs = []
            for _ in range(2):
                cfg = parse_config(text, source=f"{command}.ini")
                cfg.output_format = fmt
                outs.append(run_job(command, cfg).encode("utf-8"))
            if outs[0] != outs[1]:
                bad.append(f"{command}/{fmt}")
    return CheckResult(9, "determinism", not bad,
                       "byte-identical repeated artifacts for 4 verbs x 2 formats"
                       if not bad else f"differing artifacts: {', '.join(bad)}")


ALL_CHECKS = (
    check_matching_special_cases,
    check_unitarity,
    check_symmetries,
    check_bound_tables,
    check_poles,
    check_densities,
    check_phase_shifts,
    check_oracle_equivalence,
    check_determinism,
)


def run_all(seed: int | None = None) -> list[CheckResult]:
    return [check(seed) for check in ALL_CHECKS]
