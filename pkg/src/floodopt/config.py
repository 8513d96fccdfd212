"""Run configuration files (JSON).

Every section and field is optional; omitted values take the defaults of the
underlying types. Validation errors carry the dotted path of the bad field.
"""
from __future__ import annotations

import dataclasses
import json
import math
from dataclasses import dataclass, field

import numpy as np

from .ga import GaParams, ParamsError
from .model import ModelError, SiteGrid, Trait, default_site_grid
from .objective import (DEFAULT_COST_SCALE, DEFAULT_SHAPES, DEFAULT_WEIGHTS, ObjectiveConfig,
                        ObjectiveError, PenaltyShape)
from .sa import SaParams


class ConfigError(ValueError):
    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}" if path else message)
        self.path = path


@dataclass(frozen=True)
class OutputOptions:
    trace_csv: bool = True
    render: bool = True


@dataclass(frozen=True)
class RunConfig:
    grid: SiteGrid = field(default_factory=lambda: default_site_grid(6))
    objective: ObjectiveConfig = field(default_factory=ObjectiveConfig)
    ga: GaParams = field(default_factory=GaParams)
    sa: SaParams = field(default_factory=SaParams)
    output: OutputOptions = field(default_factory=OutputOptions)


def _expect(value, kind, path: str):
    if not isinstance(value, kind) or (kind is not bool and isinstance(value, bool)):
        names = kind.__name__ if isinstance(kind, type) else "/".join(k.__name__ for k in kind)
        raise ConfigError(path, f"expected {names}, got {type(value).__name__}")
    return value


def _number(value, path: str) -> float:
    _expect(value, (int, float), path)
    if not math.isfinite(value):
        raise ConfigError(path, "must be finite")
    return float(value)


def _integer(value, path: str) -> int:
    return _expect(value, int, path)


def _section(doc: dict, key: str, allowed: set[str]) -> dict:
    sec = doc.get(key, {})
    _expect(sec, dict, key)
    unknown = sorted(set(sec) - allowed)
    if unknown:
        raise ConfigError(f"{key}.{unknown[0]}", "unknown field")
    return sec


def _field_grid(value, n: int, path: str):
    if isinstance(value, list):
        if len(value) != n or any(not isinstance(row, list) or len(row) != n for row in value):
            raise ConfigError(path, f"must be a {n}x{n} array")
        return [[_number(v, f"{path}[{r}][{c}]") for c, v in enumerate(row)]
                for r, row in enumerate(value)]
    return _number(value, path)


def _parse_grid(doc: dict) -> SiteGrid:
    sec = _section(doc, "grid", {"n", "factors", "overrides"})
    n = _integer(sec.get("n", 6), "grid.n")
    if n < 1:
        raise ConfigError("grid.n", f"must be >= 1, got {n}")
    if "factors" in sec:
        factors = _field_grid(sec["factors"], n, "grid.factors")
        if not isinstance(factors, list):
            raise ConfigError("grid.factors", f"must be a {n}x{n} array")
    else:
        factors = default_site_grid(n).tolist()
    for i, ov in enumerate(_expect(sec.get("overrides", []), list, "grid.overrides")):
        path = f"grid.overrides[{i}]"
        _expect(ov, dict, path)
        if set(ov) != {"row", "col", "factor"}:
            raise ConfigError(path, "needs exactly row, col and factor")
        r, c = _integer(ov["row"], f"{path}.row"), _integer(ov["col"], f"{path}.col")
        if not (0 <= r < n and 0 <= c < n):
            raise ConfigError(path, f"cell ({r}, {c}) outside the {n}x{n} grid")
        factors[r][c] = _number(ov["factor"], f"{path}.factor")
    for r, row in enumerate(factors):
        for c, v in enumerate(row):
            if v <= 0:
                raise ConfigError(f"grid.factors[{r}][{c}]", f"site factor must be > 0, got {v}")
    return SiteGrid(factors)


def _trait_mapping(value, path: str) -> dict[Trait, object]:
    _expect(value, dict, path)
    out = {}
    for key, v in value.items():
        try:
            out[Trait.parse(key)] = v
        except ModelError:
            raise ConfigError(f"{path}.{key}", "unknown trait name") from None
    return out


def _parse_objective(doc: dict, n: int) -> ObjectiveConfig:
    sec = _section(doc, "objective", {"weights", "shapes", "cost_scale", "hazard", "exposure"})
    weights = list(DEFAULT_WEIGHTS)
    for trait, w in _trait_mapping(sec.get("weights", {}), "objective.weights").items():
        path = f"objective.weights.{trait.label}"
        w = _number(w, path)
        if w < 0:
            raise ConfigError(path, f"weight must be >= 0, got {w}")
        weights[trait] = w
    shapes = list(DEFAULT_SHAPES)
    for trait, s in _trait_mapping(sec.get("shapes", {}), "objective.shapes").items():
        path = f"objective.shapes.{trait.label}"
        try:
            shapes[trait] = PenaltyShape.parse(_expect(s, str, path))
        except ObjectiveError as exc:
            raise ConfigError(path, str(exc)) from None
    cost_scale = _number(sec.get("cost_scale", DEFAULT_COST_SCALE), "objective.cost_scale")
    if cost_scale <= 0:
        raise ConfigError("objective.cost_scale", f"must be > 0, got {cost_scale}")
    fields = {}
    for name in ("hazard", "exposure"):
        value = _field_grid(sec.get(name, 1.0), n, f"objective.{name}")
        if np.any(np.asarray(value) < 0):
            raise ConfigError(f"objective.{name}", "values must be >= 0")
        fields[name] = value
    return ObjectiveConfig(tuple(weights), tuple(shapes), cost_scale, **fields)


def _parse_params(doc: dict, key: str, cls):
    kinds = {f.name: f.type for f in dataclasses.fields(cls)}
    sec = _section(doc, key, set(kinds))
    values = {}
    for name, value in sec.items():
        path = f"{key}.{name}"
        kind = kinds[name]
        if value is None and "None" in kind:
            values[name] = None
        elif kind.startswith("int"):
            values[name] = _integer(value, path)
        elif kind.startswith("float"):
            values[name] = _number(value, path)
        else:
            values[name] = _expect(value, str, path)
    params = cls(**values)
    try:
        params.validate()
    except ParamsError as exc:
        raise ConfigError(key, str(exc)) from None
    return params


def parse_config(text: str) -> RunConfig:
    """Parse and validate a JSON run configuration, filling in defaults."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError("", f"malformed JSON: {exc}") from None
    _expect(doc, dict, "<root>")
    unknown = sorted(set(doc) - {"grid", "objective", "ga", "sa", "output"})
    if unknown:
        raise ConfigError(unknown[0], "unknown section")
    grid = _parse_grid(doc)
    objective = _parse_objective(doc, grid.n)
    out = _section(doc, "output", {"trace_csv", "render"})
    output = OutputOptions(**{k: _expect(v, bool, f"output.{k}") for k, v in out.items()})
    return RunConfig(grid, objective, _parse_params(doc, "ga", GaParams),
                     _parse_params(doc, "sa", SaParams), output)


def _plain(value):
    return value.tolist() if isinstance(value, np.ndarray) else value


def config_to_json(config: RunConfig) -> dict:
    obj = config.objective
    return {
        "grid": {"n": config.grid.n, "factors": config.grid.tolist()},
        "objective": {
            "weights": {t.label: obj.weights[t] for t in Trait},
            "shapes": {t.label: obj.shapes[t].value for t in Trait},
            "cost_scale": obj.cost_scale,
            "hazard": _plain(obj.hazard),
            "exposure": _plain(obj.exposure),
        },
        "ga": dataclasses.asdict(config.ga),
        "sa": dataclasses.asdict(config.sa),
        "output": dataclasses.asdict(config.output),
    }


def serialize_config(config: RunConfig) -> str:
    return json.dumps(config_to_json(config), indent=2, sort_keys=True)

