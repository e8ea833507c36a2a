import math
import textwrap

import pytest

from diracdelta.config import Grid, JobConfig, parse_config, parse_number, validate
from diracdelta.errors import ConfigError
from diracdelta.point_interaction import PointInteraction


def cfg(text, source="job.ini"):
    return parse_config(textwrap.dedent(text), source=source)


def test_full_config():
    c = cfg("""
        [job]
        mass = 2
        Q = 0.5
        species = both     # inline comment
        units = natural

        [impurity.1]
        position = -1
        q = 2*pi/3

        [impurity.2]
        position = 1
        lambda = -0.5

        [grid]
        k_min = 0.01
        k_max = 10
        n_k = 512
        x_min = -5
        x_max = 5
        n_x = 11

        [output]
        format = json
        path = out.json
        """)
    assert c.mass == 2 and c.Q == 0.5 and c.species == "both"
    assert c.impurities == [PointInteraction(-1, 2 * math.pi / 3, 0), PointInteraction(1, 0, -0.5)]
    assert c.k_grid == Grid(0.01, 10, 512) and c.x_grid == Grid(-5, 5, 11)
    assert c.output_format == "json" and c.output_path == "out.json"
    validate(c, "scatter")


def test_parse_number():
    assert parse_number("2*pi/3") == 2 * math.pi / 3
    assert parse_number("-1e-3") == -1e-3
    assert parse_number("(1 + 2) ** 2") == 9
    for bad in ("__import__('os')", "pi(", "1/0", "x", "1e400*1e400"):
        with pytest.raises(ValueError):
            parse_number(bad)


@pytest.mark.parametrize("text,line,fragment", [
    ("[job]\nmass = 1\nspecies = muon\n[impurity]\nq=1\n", 3, "species"),
    ("[job]\nmass = abc\n", 2, "mass"),
    ("[job]\nmass = 1\n\ncolour = red\n", 4, "unknown key"),
    ("[job]\n[nonsense]\n", 2, "unknown section"),
    ("[job]\nunits = SI\n", 2, "natural"),
    ("[job]\nmass = 1\nmass = 2\n", 3, "duplicate"),
    ("mass = 1\n", 1, "outside"),
    ("[impurity]\nq = 1\n[grid]\nk_min = 0\nk_max = 1\nn_k = 4\n", 4, "k_min > 0"),
    ("[impurity]\nq = 1\n[grid]\nk_min = 2\nk_max = 1\nn_k = 4\n", 4, "min < max"),
    ("[impurity]\nq = 1\n[grid]\nk_min = 1\nk_max = 2\nn_k = 2.5\n", 6, "integer"),
    ("[impurity]\nq = 1\n[grid]\nk_min = 1\nk_max = 2\n", 3, "missing n_k"),
    ("[job]\n\n[sweep]\nparameter = mass\nmin = 0\nmax = 1\nn = 3\n[impurity]\nq=1\n", 4,
     "sweep parameter"),
])
def test_errors_carry_line_numbers(text, line, fragment):
    with pytest.raises(ConfigError) as info:
        c = parse_config(text, source="job.ini")
        validate(c, "scatter" if "grid" in text else "bound")
    err = info.value
    assert err.line == line, str(err)
    assert fragment in str(err)
    assert str(err).startswith(f"job.ini:{line}: ")


def test_validation_rules():
    base = JobConfig(impurities=[PointInteraction(0, 1.0)])
    with pytest.raises(ConfigError, match="k grid"):
        validate(base, "scatter")
    with pytest.raises(ConfigError, match="n >= 2"):
        validate(JobConfig(impurities=base.impurities, k_grid=Grid(0.1, 1, 1)), "phase")
    with pytest.raises(ConfigError, match="no impurities"):
        validate(JobConfig(), "bound")
    with pytest.raises(ConfigError, match="increasing"):
        validate(JobConfig(impurities=[PointInteraction(1, 1), PointInteraction(0, 1)]), "bound")
    with pytest.raises(ConfigError, match="single species"):
        validate(JobConfig(species="both", impurities=base.impurities), "density")
    with pytest.raises(ConfigError, match="mass"):
        validate(JobConfig(mass=-1, impurities=base.impurities), "bound")


def test_to_dict_is_stable():
    a = cfg("[job]\nspecies=positron\n[impurity]\nq=pi/6\n").to_dict()
    b = cfg("[job]\nspecies = positron\n\n[impurity]\nq = pi / 6\n").to_dict()
    assert a == b
