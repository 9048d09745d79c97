"""Strict ``[section] / key = value`` run configuration.

Sections and keys (all optional, case-sensitive)::

    [physical]  mu, eps, tau (number or inf), d0, xi0
    [drude]     kind (constant | wavy), alpha, xi1, scenario | omega1
    [grid]      dx, m1, n, dt_over_dx (must be 1)
    [output]    out_dir, snapshot_stride, emit (comma-separated subset of EMIT_CHOICES)
"""
from __future__ import annotations

import configparser
import math
from dataclasses import dataclass, field, fields

from .dispersion import BackgroundMode, PhysicalParams
from .drude import SCENARIOS, DrudeModel, scenario_frequency
from .errors import ParseError, ValidationError
from .grid import TrapezoidGrid, build_grid

EMIT_CHOICES = ("v_csv", "j_csv", "jpert_csv", "energy_csv", "heatmap_pgm")


@dataclass(frozen=True)
class DrudeConfig:
    kind: str = "constant"
    alpha: float = 0.0
    xi1: float | None = None
    scenario: str | None = None
    omega1: float | None = None


@dataclass(frozen=True)
class GridConfig:
    dx: float = 0.0105
    m1: int = 5
    n: int = 10
    dt_over_dx: float = 1.0


@dataclass(frozen=True)
class OutputConfig:
    out_dir: str = "out"
    snapshot_stride: int = 1
    emit: tuple = EMIT_CHOICES


@dataclass(frozen=True)
class SimConfig:
    physical: PhysicalParams = field(default_factory=PhysicalParams)
    drude: DrudeConfig = field(default_factory=DrudeConfig)
    grid: GridConfig = field(default_factory=GridConfig)
    output: OutputConfig = field(default_factory=OutputConfig)

    def build_grid(self) -> TrapezoidGrid:
        return build_grid(self.grid.dx, self.grid.m1, self.grid.n)

    def drude_model(self, mode: BackgroundMode) -> DrudeModel:
        d = self.drude
        if d.kind == "constant":
            return DrudeModel.constant(self.physical.d0)
        xi1 = self.physical.xi0 if d.xi1 is None else d.xi1
        if d.scenario is not None:
            omega1 = scenario_frequency(d.scenario, self.physical, mode, xi1)
        else:
            omega1 = 0.0 if d.omega1 is None else d.omega1
        return DrudeModel.wavy(self.physical.d0, d.alpha, xi1, omega1)


SECTIONS = {
    "physical": PhysicalParams,
    "drude": DrudeConfig,
    "grid": GridConfig,
    "output": OutputConfig,
}


def _to_float(key, text):
    try:
        return float(text)
    except ValueError:
        raise ValidationError(f"{key}: expected a number, got {text!r}") from None


def _to_int(key, text):
    try:
        return int(text)
    except ValueError:
        raise ValidationError(f"{key}: expected an integer, got {text!r}") from None


def _convert(section, key, text):
    name = f"{section}.{key}"
    if section == "physical":
        if key == "tau" and text.strip().lower() in ("inf", "infinity"):
            return math.inf
        return _to_float(name, text)
    if section == "drude":
        if key in ("kind", "scenario"):
            return text.strip()
        return _to_float(name, text)
    if section == "grid":
        if key in ("m1", "n"):
            return _to_int(name, text)
        return _to_float(name, text)
    if key == "snapshot_stride":
        return _to_int(name, text)
    if key == "emit":
        items = tuple(s.strip() for s in text.split(",") if s.strip())
        bad = [s for s in items if s not in EMIT_CHOICES]
        if bad:
            raise ValidationError(f"{name}: unknown output(s) {bad}; choose from {EMIT_CHOICES}")
        return items
    return text.strip()


def _reader() -> configparser.ConfigParser:
    cp = configparser.ConfigParser(delimiters=("=",), comment_prefixes=("#",),
                                   inline_comment_prefixes=("#",), interpolation=None,
                                   strict=True, empty_lines_in_values=False, default_section="\0")
    cp.optionxform = str
    return cp


def parse_config(text: str) -> SimConfig:
    cp = _reader()
    try:
        cp.read_string(text)
    except configparser.MissingSectionHeaderError as exc:
        raise ParseError("key = value line before any [section] header", exc.lineno) from None
    except (configparser.DuplicateOptionError, configparser.DuplicateSectionError) as exc:
        raise ParseError(str(exc).split(": ", 1)[-1], exc.lineno) from None
    except configparser.ParsingError as exc:
        lineno, line = exc.errors[0]
        raise ParseError(f"cannot parse {line.strip()!r}", lineno) from None

    values = {}
    for section in cp.sections():
        if section not in SECTIONS:
            raise ValidationError(f"unknown section [{section}]")
        allowed = {f.name for f in fields(SECTIONS[section])}
        kwargs = {}
        for key, raw in cp.items(section):
            if key not in allowed:
                raise ValidationError(f"unknown key {section}.{key}")
            kwargs[key] = _convert(section, key, raw)
        values[section] = kwargs

    physical = PhysicalParams(**values.get("physical", {}))
    drude = DrudeConfig(**values.get("drude", {}))
    grid = GridConfig(**values.get("grid", {}))
    output = OutputConfig(**values.get("output", {}))
    config = SimConfig(physical=physical, drude=drude, grid=grid, output=output)
    validate(config)
    return config


def validate(config: SimConfig):
    d = config.drude
    if d.kind not in ("constant", "wavy"):
        raise ValidationError(f"drude.kind must be 'constant' or 'wavy', got {d.kind!r}")
    if d.scenario is not None and d.omega1 is not None:
        raise ValidationError("drude.scenario and drude.omega1 are mutually exclusive")
    if d.scenario is not None and d.scenario not in SCENARIOS:
        raise ValidationError(f"drude.scenario must be one of {SCENARIOS}, got {d.scenario!r}")
    if not abs(d.alpha) < config.physical.d0:
        raise ValidationError(f"drude.alpha: |alpha| must be below d0 = {config.physical.d0}, got {d.alpha}")
    if d.kind == "constant" and (d.alpha != 0 or d.scenario is not None or d.omega1 is not None):
        raise ValidationError("drude.kind = constant takes no alpha, scenario or omega1")
    g = config.grid
    if g.dt_over_dx != 1.0:
        raise ValidationError(f"grid.dt_over_dx: only a ratio of 1 is supported, got {g.dt_over_dx}")
    config.build_grid()
    if config.output.snapshot_stride < 1:
        raise ValidationError("output.snapshot_stride must be >= 1")
    if not math.isclose(config.physical.mu * config.physical.eps, 1.0, rel_tol=1e-12):
        raise ValidationError("physical.mu * physical.eps must be 1 (unit wave speed on the dx = dt lattice)")


def _fmt(value):
    if isinstance(value, tuple):
        return ", ".join(value)
    if isinstance(value, float):
        return "inf" if math.isinf(value) else repr(value)
    return str(value)


def serialize_config(config: SimConfig) -> str:
    lines = []
    for section, obj in (("physical", config.physical), ("drude", config.drude),
                         ("grid", config.grid), ("output", config.output)):
        lines.append(f"[{section}]")
        for f in fields(obj):
            value = getattr(obj, f.name)
            if value is None:
                continue
            lines.append(f"{f.name} = {_fmt(value)}")
        lines.append("")
    return "\n".join(lines)
