"""Job configuration: INI-style text file plus command-line overrides.

Example::

    [job]
    mass = 1
    Q = 1
    species = electron        # electron | positron | both

    [impurity.1]
    position = 0
    q = pi/4
    lambda = 0

    [grid]
    k_min = 0.01
    k_max = 10
    n_k = 512

    [output]
    format = csv              # csv | json
    path = -                  # '-' is stdout

Numbers may be written as arithmetic in ``pi`` (``2*pi/3``). Units are natural
(hbar = c = 1) with the mass as scale; nothing else is accepted.
"""

from __future__ import annotations

import ast
import configparser
import math
import operator
import re
from dataclasses import dataclass, field, asdict

from .errors import ConfigError
from .point_interaction import PointInteraction

SPECIES_CHOICES = ("electron", "positron", "both")
FORMATS = ("csv", "json")
SWEEP_PARAMETERS = ("q", "lambda")

_SECTION_KEYS = {
    "job": {"mass", "q", "species", "units", "state"},
    "impurity": {"position", "q", "lambda"},
    "grid": {"k_min", "k_max", "n_k", "x_min", "x_max", "n_x"},
    "sweep": {"parameter", "min", "max", "n"},
    "output": {"format", "path"},
}


@dataclass(frozen=True)
class Grid:
    lo: float
    hi: float
    n: int

    def validate(self, what: str, positive: bool = False, line: int | None = None,
                 source: str | None = None) -> None:
        if self.n < 2:
            raise ConfigError(f"{what} grid needs n >= 2, got {self.n}", line, source)
        if not self.lo < self.hi:
            raise ConfigError(f"{what} grid needs min < max, got {self.lo} >= {self.hi}", line,
                              source)
        if positive and not self.lo > 0:
            raise ConfigError(f"{what} grid needs k_min > 0 (k = 0 is a threshold), got {self.lo}",
                              line, source)


@dataclass(frozen=True)
class Sweep:
    parameter: str
    lo: float
    hi: float
    n: int


@dataclass
class JobConfig:
    mass: float = 1.0
    Q: float = 1.0
    species: str = "electron"
    state: int = 0
    impurities: list[PointInteraction] = field(default_factory=list)
    k_grid: Grid | None = None
    x_grid: Grid | None = None
    sweep: Sweep | None = None
    output_format: str = "csv"
    output_path: str = "-"
    source: str | None = None
    lines: dict = field(default_factory=dict, repr=False, compare=False)

    def line_of(self, section: str, key: str | None = None) -> int | None:
        return self.lines.get((section, key))

    def to_dict(self) -> dict:
        """Echo of the physics-relevant settings, in a fixed key order."""
        out = {
            "mass": self.mass,
            "Q": self.Q,
            "species": self.species,
            "state": self.state,
            "impurities": [{"position": p.position, "q": p.q, "lambda": p.lam}
                           for p in self.impurities],
        }
        for name in ("k_grid", "x_grid", "sweep"):
            value = getattr(self, name)
            out[name] = None if value is None else asdict(value)
        return out


# ---------------------------------------------------------------------------
# numbers
# ---------------------------------------------------------------------------

_BINOPS = {ast.Add: operator.add, ast.Sub: operator.sub, ast.Mult: operator.mul,
           ast.Div: operator.truediv, ast.Pow: operator.pow}
_UNOPS = {ast.USub: operator.neg, ast.UAdd: operator.pos}
_NAMES = {"pi": math.pi, "e": math.e}


def parse_number(text: str) -> float:
    """Float literal or arithmetic expression in pi/e; raises ValueError otherwise."""
    text = text.strip()
    try:
        return float(text)
    except ValueError:
        pass

    def ev(node):
        if isinstance(node, ast.Expression):
            return ev(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)):
            return float(node.value)
        if isinstance(node, ast.Name) and node.id in _NAMES:
            return _NAMES[node.id]
        if isinstance(node, ast.BinOp) and type(node.op) in _BINOPS:
            return _BINOPS[type(node.op)](ev(node.left), ev(node.right))
        if isinstance(node, ast.UnaryOp) and type(node.op) in _UNOPS:
            return _UNOPS[type(node.op)](ev(node.operand))
        raise ValueError(f"not a number: {text!r}")

    try:
        value = ev(ast.parse(text, mode="eval"))
    except (SyntaxError, ZeroDivisionError, OverflowError) as exc:
        raise ValueError(f"not a number: {text!r}") from exc
    if not math.isfinite(value):
        raise ValueError(f"not a finite number: {text!r}")
    return value


def _number(value: str, section: str, key: str, lines: dict, source) -> float:
    try:
        return parse_number(value)
    except ValueError as exc:
        raise ConfigError(f"[{section}] {key}: {exc}", lines.get((section, key)), source) from None


def _integer(value: str, section: str, key: str, lines: dict, source) -> int:
    x = _number(value, section, key, lines, source)
    if x != int(x):
        raise ConfigError(f"[{section}] {key}: expected an integer, got {value!r}",
                          lines.get((section, key)), source)
    return int(x)


# ---------------------------------------------------------------------------
# file parsing
# ---------------------------------------------------------------------------

_SECTION_RE = re.compile(r"^\s*\[([^\]]+)\]")
_KEY_RE = re.compile(r"^\s*([^=:#;\s\[][^=:]*?)\s*[=:]")


def _line_map(text: str) -> dict:
    lines: dict = {}
    section = None
    for no, raw in enumerate(text.splitlines(), start=1):
        m = _SECTION_RE.match(raw)
        if m:
            section = m.group(1).strip()
            lines.setdefault((section, None), no)
            continue
        m = _KEY_RE.match(raw)
        if m and section is not None and not raw[:1].isspace():
            lines.setdefault((section, m.group(1).strip().lower()), no)
    return lines


def _base_section(name: str) -> str:
    return "impurity" if name == "impurity" or name.startswith("impurity.") else name


def parse_config(text: str, source: str | None = None) -> JobConfig:
    lines = _line_map(text)
    parser = configparser.ConfigParser(inline_comment_prefixes=("#", ";"), interpolation=None)
    try:
        parser.read_string(text, source=source or "<config>")
    except configparser.DuplicateSectionError as exc:
        raise ConfigError(f"duplicate section [{exc.section}]", exc.lineno, source) from None
    except configparser.DuplicateOptionError as exc:
        raise ConfigError(f"duplicate key {exc.option!r} in [{exc.section}]", exc.lineno,
                          source) from None
    except configparser.MissingSectionHeaderError as exc:
        raise ConfigError("key outside of any [section]", exc.lineno, source) from None
    except configparser.ParsingError as exc:
        lineno = exc.errors[0][0] if exc.errors else None
        raise ConfigError("cannot parse line", lineno, source) from None

    cfg = JobConfig(source=source, lines=lines)
    for name in parser.sections():
        base = _base_section(name)
        if base not in _SECTION_KEYS:
            raise ConfigError(f"unknown section [{name}]", lines.get((name, None)), source)
        for key in parser[name]:
            if key not in _SECTION_KEYS[base]:
                raise ConfigError(f"unknown key {key!r} in [{name}]", lines.get((name, key)),
                                  source)

    def get(section, key):
        return parser[section][key] if parser.has_option(section, key) else None

    if parser.has_section("job"):
        if (v := get("job", "mass")) is not None:
            cfg.mass = _number(v, "job", "mass", lines, source)
        if (v := get("job", "q")) is not None:
            cfg.Q = _number(v, "job", "q", lines, source)
        if (v := get("job", "species")) is not None:
            cfg.species = v.strip().lower()
        if (v := get("job", "state")) is not None:
            cfg.state = _integer(v, "job", "state", lines, source)
        if (v := get("job", "units")) is not None and v.strip().lower() != "natural":
            raise ConfigError(f"only natural units (hbar = c = 1, lengths in 1/m) are supported, "
                              f"got units = {v.strip()!r}", lines.get(("job", "units")), source)

    for name in parser.sections():
        if _base_section(name) != "impurity":
            continue
        vals = {}
        for key, default in (("position", 0.0), ("q", 0.0), ("lambda", 0.0)):
            v = get(name, key)
            vals[key] = default if v is None else _number(v, name, key, lines, source)
        cfg.impurities.append(PointInteraction(vals["position"], vals["q"], vals["lambda"]))

    if parser.has_section("grid"):
        g = {key: get("grid", key) for key in _SECTION_KEYS["grid"]}
        if any(g[k] is not None for k in ("k_min", "k_max", "n_k")):
            cfg.k_grid = Grid(*_grid_values(g, "k", lines, source))
        if any(g[k] is not None for k in ("x_min", "x_max", "n_x")):
            cfg.x_grid = Grid(*_grid_values(g, "x", lines, source))

    if parser.has_section("sweep"):
        s = parser["sweep"]
        missing = [k for k in ("parameter", "min", "max", "n") if k not in s]
        if missing:
            raise ConfigError(f"[sweep] is missing {', '.join(missing)}",
                              lines.get(("sweep", None)), source)
        cfg.sweep = Sweep(s["parameter"].strip().lower(),
                          _number(s["min"], "sweep", "min", lines, source),
                          _number(s["max"], "sweep", "max", lines, source),
                          _integer(s["n"], "sweep", "n", lines, source))

    if parser.has_section("output"):
        if (v := get("output", "format")) is not None:
            cfg.output_format = v.strip().lower()
        if (v := get("output", "path")) is not None:
            cfg.output_path = v.strip()
    return cfg


def _grid_values(g: dict, axis: str, lines: dict, source):
    keys = (f"{axis}_min", f"{axis}_max", f"n_{axis}")
    missing = [k for k in keys if g[k] is None]
    if missing:
        raise ConfigError(f"[grid] is missing {', '.join(missing)}", lines.get(("grid", None)),
                          source)
    return (_number(g[keys[0]], "grid", keys[0], lines, source),
            _number(g[keys[1]], "grid", keys[1], lines, source),
            _integer(g[keys[2]], "grid", keys[2], lines, source))


def validate(cfg: JobConfig, command: str) -> None:
    """Cross-field checks; errors point at the offending config line when there is one."""
    src = cfg.source
    if not cfg.mass > 0:
        raise ConfigError(f"mass must be positive, got {cfg.mass}", cfg.line_of("job", "mass"), src)
    if not cfg.Q > 0:
        raise ConfigError(f"Q must be positive, got {cfg.Q}", cfg.line_of("job", "q"), src)
    if cfg.species not in SPECIES_CHOICES:
        raise ConfigError(f"species must be one of {', '.join(SPECIES_CHOICES)}, got "
                          f"{cfg.species!r}", cfg.line_of("job", "species"), src)
    if cfg.output_format not in FORMATS:
        raise ConfigError(f"output format must be csv or json, got {cfg.output_format!r}",
                          cfg.line_of("output", "format"), src)
    if not cfg.impurities:
        raise ConfigError("no impurities configured (add an [impurity] section or --impurity)",
                          None, src)
    xs = [p.position for p in cfg.impurities]
    if any(b <= a for a, b in zip(xs, xs[1:])):
        raise ConfigError(f"impurity positions must be strictly increasing, got {xs}", None, src)
    if command in ("scatter", "phase"):
        if cfg.k_grid is None:
            raise ConfigError(f"'{command}' needs a k grid (k_min, k_max, n_k)",
                              cfg.line_of("grid", None), src)
        cfg.k_grid.validate("k", positive=True, line=cfg.line_of("grid", "k_min"),
                             source=src)
    if command == "density":
        if cfg.species == "both":
            raise ConfigError("'density' needs a single species", cfg.line_of("job", "species"),
                              src)
        if cfg.x_grid is not None:
            cfg.x_grid.validate("x", line=cfg.line_of("grid", "x_min"), source=src)
    if cfg.sweep is not None:
        line = cfg.line_of("sweep", None)
        if command != "bound":
            raise ConfigError("[sweep] is only supported by 'bound'", line, src)
        if cfg.sweep.parameter not in SWEEP_PARAMETERS:
            raise ConfigError(f"sweep parameter must be q or lambda, got {cfg.sweep.parameter!r}",
                              cfg.line_of("sweep", "parameter"), src)
        if len(cfg.impurities) != 1:
            raise ConfigError("a sweep needs exactly one impurity", line, src)
        Grid(cfg.sweep.lo, cfg.sweep.hi, cfg.sweep.n).validate("sweep", line=line, source=src)
