"""Command-line front end.

Verbs::

    diracdelta scatter  --impurity 0,pi/4,0 --k-min 0.01 --k-max 10 --n-k 100
    diracdelta bound    --impurity 0,0,0 --sweep-parameter q --sweep-min 0.1 --sweep-max 6.2 --sweep-n 32
    diracdelta density  --impurity 0,pi/6,0 --species positron
    diracdelta phase    --config job.ini
    diracdelta verify

Every job command accepts ``--config FILE`` (see :mod:`diracdelta.config`) and
flag overrides. ``--impurity x,q,lambda`` may be repeated and replaces any
impurities from the config file. Output goes to stdout unless ``--output`` or
the config names a file.
"""

from __future__ import annotations

import argparse
import math
import sys
from dataclasses import replace
from pathlib import Path

import numpy as np
from scipy import integrate

from . import __version__
from . import analytic_spectra as an
from . import transfer_solver as ts
from .config import Grid, JobConfig, Sweep, parse_config, parse_number, validate
from .errors import ConfigError, DiracDeltaError, DomainError
from .output import Table, render
from .point_interaction import PointInteraction, Species
from .states import Incidence

ANALYTIC_BOUND = 1e-12
NUMERIC_BOUND = 1e-10
DENSITY_HALF_WIDTH = 10.0   # in units of the decay length 1/kappa_b
DENSITY_POINTS = 2001


def _species_list(cfg: JobConfig) -> list[Species]:
    if cfg.species == "both":
        return [Species.ELECTRON, Species.POSITRON]
    return [Species.parse(cfg.species)]


def _analytic_impurity(cfg: JobConfig) -> PointInteraction | None:
    """The single impurity when a closed form applies, else None."""
    if len(cfg.impurities) == 1 and cfg.impurities[0].is_pure:
        return cfg.impurities[0]
    return None


def _array(cfg: JobConfig) -> ts.ImpurityArray:
    return ts.ImpurityArray(tuple(cfg.impurities), cfg.mass)


def _k_values(cfg: JobConfig) -> np.ndarray:
    g = cfg.k_grid
    return np.linspace(g.lo, g.hi, g.n)


# ---------------------------------------------------------------------------
# scatter
# ---------------------------------------------------------------------------

SCATTER_COLUMNS = ["k", "species", "side", "path", "re_sigma", "im_sigma", "re_rho", "im_rho",
                   "abs_sigma2", "abs_rho2", "unitarity_residual", "residual_bound"]


def cmd_scatter(cfg: JobConfig) -> Table:
    validate(cfg, "scatter")
    ks = _k_values(cfg)
    table = Table(list(SCATTER_COLUMNS))
    single = _analytic_impurity(cfg)
    worst = 0.0
    for species in _species_list(cfg):
        if single is not None:
            path, bound = "analytic", ANALYTIC_BOUND
            per_side = {
                side: [an.amplitudes(cfg.mass, single, float(k), species, side) for k in ks]
                for side in Incidence
            }
            sides = {side: ([r.sigma for r in rs], [r.rho for r in rs])
                     for side, rs in per_side.items()}
        else:
            path, bound = "numeric", NUMERIC_BOUND
            a = ts.amplitudes_on_grid(_array(cfg), species, ks)
            sides = {Incidence.FROM_LEFT: (a["sigma_from_left"], a["rho_from_left"]),
                     Incidence.FROM_RIGHT: (a["sigma_from_right"], a["rho_from_right"])}
        for side in Incidence:
            sig, rho = sides[side]
            for k, s, r in zip(ks, sig, rho):
                s, r = complex(s), complex(r)
                t2, r2 = abs(s) ** 2, abs(r) ** 2
                res = abs(t2 + r2 - 1.0)
                worst = max(worst, res)
                table.rows.append((float(k), species.value, side.value, path, s.real, s.imag,
                                   r.real, r.imag, t2, r2, res, bound))
    table.add_check("max_unitarity_residual", worst)
    return table


# ---------------------------------------------------------------------------
# bound
# ---------------------------------------------------------------------------

BOUND_COLUMNS = ["species", "kappa_b", "omega_b", "sign_flip", "matching_residual", "path"]


def _bound_rows(cfg: JobConfig) -> list[tuple]:
    rows = []
    single = _analytic_impurity(cfg)
    for species in _species_list(cfg):
        if single is not None:
            bs = an.bound_state(cfg.mass, single, species)
            found = [] if bs is None else [bs]
            residuals = [[an.matching_residual(b, single)] for b in found]
            path = "analytic"
        else:
            arr = _array(cfg)
            found = ts.find_bound_states(arr, species)
            residuals = [ts.matching_residuals(b, arr) for b in found]
            path = "numeric"
        for b, res in zip(found, residuals):
            rows.append((species.value, b.kappa_b, b.omega_b, b.sign_flip, max(res), path))
    return rows


def cmd_bound(cfg: JobConfig) -> Table:
    validate(cfg, "bound")
    if cfg.sweep is None:
        table = Table(list(BOUND_COLUMNS))
        table.rows.extend(_bound_rows(cfg))
    else:
        sw = cfg.sweep
        table = Table([sw.parameter] + BOUND_COLUMNS)
        base = cfg.impurities[0]
        for value in np.linspace(sw.lo, sw.hi, sw.n):
            value = float(value)
            imp = (replace(base, q=value) if sw.parameter == "q"
                   else replace(base, lam=value))
            sub = replace(cfg, impurities=[imp], sweep=None)
            table.rows.extend((value,) + row for row in _bound_rows(sub))
    res = [r[-2] for r in table.rows]
    table.add_check("n_states", len(table.rows))
    table.add_check("max_matching_residual", max(res) if res else 0.0)
    return table


# ---------------------------------------------------------------------------
# density
# ---------------------------------------------------------------------------

def symmetric_grid(center: float, half_width: float, n: int) -> np.ndarray:
    """n points on [center - w, center + w] with offsets exactly antisymmetric."""
    s = np.linspace(-half_width, half_width, n)
    s = 0.5 * (s - s[::-1])
    return center + s


def _probability(bs, x, side):
    psi = bs.spinor_profile(x, side=side)
    return np.sum((psi * np.conj(psi)).real, axis=-1)


def _piecewise_simpson(f, x, breaks) -> float:
    """Simpson's rule on each smooth segment of f, using one-sided limits at the breaks.

    The density of an array is discontinuous at the impurities, so integrating
    across them with a single Simpson rule loses about four digits.
    """
    lo, hi = float(x[0]), float(x[-1])
    edges = [lo] + sorted(b for b in breaks if lo < b < hi) + [hi]
    total = 0.0
    for a, b in zip(edges[:-1], edges[1:]):
        inner = x[(x > a) & (x < b)]
        pts = np.concatenate(([a], inner, [b]))
        vals = f(pts, +1)
        vals[-1] = f(np.array([b]), -1)[0]
        total += float(integrate.simpson(vals, x=pts))
    return total


def cmd_density(cfg: JobConfig) -> Table:
    validate(cfg, "density")
    species = Species.parse(cfg.species)
    single = _analytic_impurity(cfg)
    if single is not None:
        bs = an.bound_state(cfg.mass, single, species)
        states = [] if bs is None else [bs]
        path = "analytic"
    else:
        states = ts.find_bound_states(_array(cfg), species)
        path = "numeric"
    if not states:
        raise DomainError(f"no bound state: the configured impurities bind no {species.value}")
    if not 0 <= cfg.state < len(states):
        raise ConfigError(f"state index {cfg.state} out of range; {len(states)} bound state(s)",
                          cfg.line_of("job", "state"), cfg.source)
    bs = states[cfg.state]
    xs_imp = [p.position for p in cfg.impurities]
    center = 0.5 * (xs_imp[0] + xs_imp[-1])
    if cfg.x_grid is None:
        half = 0.5 * (xs_imp[-1] - xs_imp[0]) + DENSITY_HALF_WIDTH / bs.kappa_b
        x = symmetric_grid(center, half, DENSITY_POINTS)
    else:
        x = np.linspace(cfg.x_grid.lo, cfg.x_grid.hi, cfg.x_grid.n)

    sign = species.charge_sign
    if path == "analytic":
        profile = an.bound_state_density(bs, cfg.Q)
        j0 = profile(x)
        j0_center = float(profile(profile.center))
        decay = profile.decay_rate
    else:
        j0 = sign * cfg.Q * bs.spinor_profile.probability(x)
        j0_center = float(sign * cfg.Q * bs.spinor_profile.probability(np.float64(center)))
        decay = 2.0 * bs.kappa_b

    if path == "analytic":
        simpson = float(integrate.simpson(j0, x=x))
    else:
        simpson = _piecewise_simpson(
            lambda pts, side: sign * cfg.Q * _probability(bs, pts, side), x, xs_imp)

    table = Table(["x", "j0"], [(float(a), float(b)) for a, b in zip(x, j0)])
    table.add_check("species", species.value)
    table.add_check("path", path)
    table.add_check("kappa_b", bs.kappa_b)
    table.add_check("omega_b", bs.omega_b)
    table.add_check("j0_at_center", j0_center)
    table.add_check("decay_rate", decay)
    table.add_check("total_charge_simpson", simpson)
    table.add_check("total_charge_trapezoid", float(integrate.trapezoid(j0, x=x)))
    table.add_check("expected_total_charge", float(sign * cfg.Q))
    return table


# ---------------------------------------------------------------------------
# phase
# ---------------------------------------------------------------------------

PHASE_COLUMNS = ["k", "species", "delta_plus", "delta_minus", "delta", "tan_2delta",
                 "closed_form_tan_2delta", "residual", "path"]


def phase_residual(value: float, reference: float) -> float:
    """|value - reference| relative to max(1, |reference|); NaN without a reference."""
    if math.isnan(reference):
        return math.nan
    return abs(value - reference) / max(1.0, abs(reference))


def cmd_phase(cfg: JobConfig) -> Table:
    validate(cfg, "phase")
    ks = _k_values(cfg)
    table = Table(list(PHASE_COLUMNS))
    single = _analytic_impurity(cfg)
    worst = 0.0
    for species in _species_list(cfg):
        if single is not None:
            # phase shifts refer to the impurity position as origin
            p0 = replace(single, position=0.0)
            kind, coupling = an.kind_of(p0)
            closed = an.closed_form_tan2delta(cfg.mass, coupling, kind, species, ks)
            shifts = [an.channel_phase_shifts(r.sigma, r.rho)
                      for r in (an.amplitudes(cfg.mass, p0, float(k), species) for k in ks)]
            path = "analytic"
        else:
            a = ts.amplitudes_on_grid(_array(cfg), species, ks)
            shifts = [ts.s_matrix_phase_shifts(complex(s), complex(rl), complex(rr))
                      for s, rl, rr in zip(a["sigma_from_left"], a["rho_from_left"],
                                           a["rho_from_right"])]
            closed = np.full(ks.shape, math.nan)
            path = "numeric"
        for k, (dp, dm), cf in zip(ks, shifts, closed):
            delta = dp + dm
            tan2 = math.tan(2.0 * delta)
            res = phase_residual(tan2, float(cf))
            if not math.isnan(res):
                worst = max(worst, res)
            table.rows.append((float(k), species.value, dp, dm, delta, tan2, float(cf), res, path))
    table.add_check("max_phase_residual", worst if single is not None else math.nan)
    return table


COMMANDS = {"scatter": cmd_scatter, "bound": cmd_bound, "density": cmd_density,
            "phase": cmd_phase}


# ---------------------------------------------------------------------------
# argument handling
# ---------------------------------------------------------------------------

def _num(text: str) -> float:
    try:
        return parse_number(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _int(text: str) -> int:
    x = _num(text)
    if x != int(x):
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}")
    return int(x)


def _impurity(text: str) -> PointInteraction:
    parts = text.split(",")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError(f"expected 'x,q,lambda', got {text!r}")
    try:
        return PointInteraction(*(parse_number(p) for p in parts))
    except (ValueError, DomainError) as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="diracdelta",
        description="Dirac fermions scattering off delta-like impurities (natural units).")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    job = argparse.ArgumentParser(add_help=False)
    job.add_argument("--config", type=Path, help="INI-style job file")
    job.add_argument("--mass", type=_num)
    job.add_argument("--Q", type=_num, help="charge unit for densities")
    job.add_argument("--species", choices=("electron", "positron", "both"))
    job.add_argument("--state", type=_int, help="bound-state index for 'density'")
    job.add_argument("--impurity", type=_impurity, action="append", metavar="X,Q,LAMBDA",
                     help="repeatable; replaces impurities from the config file")
    for axis in ("k", "x"):
        job.add_argument(f"--{axis}-min", type=_num)
        job.add_argument(f"--{axis}-max", type=_num)
        job.add_argument(f"--n-{axis}", type=_int)
    job.add_argument("--sweep-parameter", choices=("q", "lambda"))
    job.add_argument("--sweep-min", type=_num)
    job.add_argument("--sweep-max", type=_num)
    job.add_argument("--sweep-n", type=_int)
    job.add_argument("--format", choices=("csv", "json"))
    job.add_argument("--output", help="output file, '-' for stdout")
    job.add_argument("--units", default=None,
                     help="only 'natural' (hbar = c = 1, lengths in 1/m) is accepted")

    helps = {"scatter": "transmission and reflection amplitudes over a k grid",
             "bound": "bound states (optionally swept over q or lambda)",
             "density": "charge density of a bound state over an x grid",
             "phase": "phase shifts over a k grid"}
    for name, text in helps.items():
        sub.add_parser(name, parents=[job], help=text, description=text)
    v = sub.add_parser("verify", help="run the acceptance checks and print pass/fail")
    v.add_argument("--seed", type=int, default=None)
    return parser


def _grid_override(old: Grid | None, lo, hi, n, what: str) -> Grid | None:
    if lo is None and hi is None and n is None:
        return old
    if old is None and None in (lo, hi, n):
        raise ConfigError(f"--{what}-min, --{what}-max and --n-{what} must be given together")
    return Grid(old.lo if lo is None else lo, old.hi if hi is None else hi,
                old.n if n is None else n)


def config_from_args(args: argparse.Namespace) -> JobConfig:
    if args.config is not None:
        try:
            text = args.config.read_text(encoding="utf-8")
        except OSError as exc:
            raise ConfigError(f"cannot read config: {exc.strerror}", None, str(args.config))
        cfg = parse_config(text, source=str(args.config))
    else:
        cfg = JobConfig()
    if args.units is not None and args.units.strip().lower() != "natural":
        raise ConfigError(f"only natural units (hbar = c = 1, lengths in 1/m) are supported, "
                          f"got --units {args.units!r}")
    for attr, name in (("mass", "mass"), ("Q", "Q"), ("species", "species"), ("state", "state")):
        value = getattr(args, name)
        if value is not None:
            setattr(cfg, attr, value)
    if args.impurity:
        cfg.impurities = list(args.impurity)
    cfg.k_grid = _grid_override(cfg.k_grid, args.k_min, args.k_max, args.n_k, "k")
    cfg.x_grid = _grid_override(cfg.x_grid, args.x_min, args.x_max, args.n_x, "x")
    sw = (args.sweep_parameter, args.sweep_min, args.sweep_max, args.sweep_n)
    if any(v is not None for v in sw):
        old = cfg.sweep
        if old is None and None in sw:
            raise ConfigError("--sweep-parameter, --sweep-min, --sweep-max and --sweep-n "
                              "must be given together")
        cfg.sweep = Sweep(*(o if v is None else v for v, o in
                            zip(sw, (old.parameter, old.lo, old.hi, old.n) if old else sw)))
    if args.format is not None:
        cfg.output_format = args.format
    if args.output is not None:
        cfg.output_path = args.output
    return cfg


def run_job(command: str, cfg: JobConfig) -> str:
    """Run one job and return the rendered artifact."""
    table = COMMANDS[command](cfg)
    return render(table, cfg.output_format, command, cfg.to_dict())


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "verify":
        from .checks import run_all
        results = run_all(seed=args.seed)
        for r in results:
            print(r.line())
        return 0 if all(r.passed for r in results) else 1
    try:
        cfg = config_from_args(args)
        text = run_job(args.command, cfg)
    except ConfigError as exc:
        print(f"diracdelta: config error: {exc}", file=sys.stderr)
        return 2
    except DiracDeltaError as exc:
        print(f"diracdelta: error: {exc}", file=sys.stderr)
        return 1
    if cfg.output_path == "-":
        sys.stdout.write(text)
    else:
        with open(cfg.output_path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    return 0


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
