"""Problem definitions from flat INI files.

A problem file has a ``[problem]`` section naming the group and giving the
derivation (or an algebra element whose inner derivation to use) and the
distribution rows, plus one section per command with its parameters:

    [problem]
    group = heisenberg
    derivation = 0 0 0 ; 1 0 0 ; 0 0 0
    delta = 1 0 0 ; 0 0 1

    [geodesic]
    point = 0 0 0
    covector = 1 0.8 0.5
    T = 5

Rows are separated by ';', numbers by whitespace. Full-line comments start
with '#'. Shapes are validated against the group dimension before anything
runs.
"""

from __future__ import annotations

import configparser
import os
from dataclasses import dataclass

import numpy as np

from .ars import SimpleArs, build_ars
from .errors import ValidationError
from .group_models import Aff2Chart, EuclideanChart, GroupChart, HeisenbergChart, Sl2Chart

#: reserved for future randomized features; read and recorded, never consumed.
SEED_ENV_VAR = "ARSLIE_SEED"

GROUP_NAMES = ("euclidean", "aff2", "heisenberg", "sl2")


def parse_floats(text: str) -> np.ndarray:
    try:
        return np.array([float(tok) for tok in text.replace(",", " ").split()])
    except ValueError as exc:
        raise ValidationError(f"could not parse numbers from {text!r}") from exc


def parse_rows(text: str) -> np.ndarray:
    rows = [parse_floats(part) for part in text.split(";") if part.strip()]
    if not rows:
        raise ValidationError("expected at least one row of numbers")
    width = len(rows[0])
    if any(len(r) != width for r in rows):
        raise ValidationError("rows have inconsistent lengths")
    return np.array(rows)


@dataclass
class ProblemConfig:
    path: str
    group: str
    chart: GroupChart
    derivation: np.ndarray
    delta: np.ndarray
    parser: configparser.ConfigParser
    seed: str | None

    def section(self, name: str) -> dict[str, str]:
        if self.parser.has_section(name):
            return dict(self.parser.items(name))
        return {}


def _make_chart(group: str, section: dict[str, str]) -> GroupChart:
    if group == "euclidean":
        if "n" not in section:
            raise ValidationError("euclidean problems need the dimension key 'n'")
        try:
            n = int(section["n"])
        except ValueError as exc:
            raise ValidationError("dimension 'n' must be an integer") from exc
        return EuclideanChart(n)
    if group == "aff2":
        return Aff2Chart()
    if group == "heisenberg":
        return HeisenbergChart()
    if group == "sl2":
        return Sl2Chart()
    raise ValidationError(f"unknown group {group!r}; expected one of {GROUP_NAMES}")


def load_problem(path: str) -> ProblemConfig:
    """Read and shape-check a problem file; raises ValidationError on bad content."""
    parser = configparser.ConfigParser()
    with open(path, "r", encoding="utf-8") as fh:
        try:
            parser.read_file(fh)
        except configparser.Error as exc:
            raise ValidationError(f"malformed config file: {exc}") from exc
    if not parser.has_section("problem"):
        raise ValidationError("config needs a [problem] section")
    section = dict(parser.items("problem"))
    group = section.get("group", "").strip().lower()
    chart = _make_chart(group, section)
    n = chart.dim

    has_derivation = "derivation" in section
    has_inner = "inner" in section
    if has_derivation == has_inner:
        raise ValidationError("give exactly one of 'derivation' or 'inner'")
    if has_derivation:
        d = parse_rows(section["derivation"])
        if d.size == n * n:
            d = d.reshape(n, n)
        if d.shape != (n, n):
            raise ValidationError(f"derivation must be {n}x{n}, got shape {d.shape}")
    else:
        x = parse_floats(section["inner"])
        if x.shape != (n,):
            raise ValidationError(f"'inner' must have {n} coefficients")
        d = -chart.algebra().ad(x)

    if "delta" not in section:
        raise ValidationError("the [problem] section needs 'delta' rows")
    delta = parse_rows(section["delta"])
    if delta.shape != (n - 1, n):
        raise ValidationError(
            f"delta must have {n - 1} rows of {n} coefficients, got shape {delta.shape}"
        )

    return ProblemConfig(
        path=path,
        group=group,
        chart=chart,
        derivation=d,
        delta=delta,
        parser=parser,
        seed=os.environ.get(SEED_ENV_VAR),
    )


def build_problem(cfg: ProblemConfig) -> SimpleArs:
    return build_ars(cfg.chart, cfg.derivation, cfg.delta)


def get_float(section: dict[str, str], key: str, default: float | None = None) -> float:
    if key not in section:
        if default is None:
            raise ValidationError(f"missing required key '{key}'")
        return default
    try:
        return float(section[key])
    except ValueError as exc:
        raise ValidationError(f"key '{key}' must be a number, got {section[key]!r}") from exc


def get_int(section: dict[str, str], key: str, default: int | None = None) -> int:
    if key not in section:
        if default is None:
            raise ValidationError(f"missing required key '{key}'")
        return default
    try:
        return int(section[key])
    except ValueError as exc:
        raise ValidationError(f"key '{key}' must be an integer, got {section[key]!r}") from exc


def get_vector(section: dict[str, str], key: str, length: int | None = None) -> np.ndarray:
    if key not in section:
        raise ValidationError(f"missing required key '{key}'")
    v = parse_floats(section[key])
    if length is not None and v.shape != (length,):
        raise ValidationError(f"key '{key}' must have {length} components")
    return v
