"""Vulnerability, penalty and the combined objective minimized by both engines.

For one barangay with site factor ``S`` and genes ``x_t``::

    V = S * sum_t w_t * x_t
    C = lam * sum_t shape_t(3 - x_t) / S

The cell objective is ``V + C`` and the city objective sums it over every
cell. Totals are accumulated with :func:`math.fsum` in row-major order so
that equal designs always produce bit-identical totals.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .model import (MAX_GENE, N_TRAITS, BarangayGenome, CityDesign, ModelError, SiteGrid,
                    Trait)


class ObjectiveError(ValueError):
    """Invalid objective parameter or dimension mismatch."""


class PenaltyShape(enum.Enum):
    LINEAR = "linear"
    QUADRATIC = "quadratic"
    EXPONENTIAL = "exponential"

    def __call__(self, u: float) -> float:
        if self is PenaltyShape.LINEAR:
            return float(u)
        if self is PenaltyShape.QUADRATIC:
            return float(u * u)
        return math.exp(u)

    @classmethod
    def parse(cls, name: str) -> "PenaltyShape":
        try:
            return cls(str(name).strip().lower())
        except ValueError:
            raise ObjectiveError(f"unknown penalty shape {name!r}") from None


DEFAULT_WEIGHTS = (1.0, 1.0, 1.0, 2.0, 1.0, 1.0, 1.0)
DEFAULT_SHAPES = (
    PenaltyShape.EXPONENTIAL,  # urbanization
    PenaltyShape.LINEAR,       # literacy
    PenaltyShape.QUADRATIC,    # mortality
    PenaltyShape.EXPONENTIAL,  # poverty
    PenaltyShape.LINEAR,       # tv/radio
    PenaltyShape.LINEAR,       # non-structural
    PenaltyShape.EXPONENTIAL,  # structural
)
DEFAULT_COST_SCALE = 3.26


def _as_field(value, name: str):
    """Scalar or n x n nonnegative field (hazard, exposure)."""
    if np.ndim(value) == 0:
        v = float(value)
        if not math.isfinite(v) or v < 0:
            raise ObjectiveError(f"{name} must be a finite value >= 0, got {value!r}")
        return v
    arr = np.array(value, dtype=float)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise ObjectiveError(f"{name} must be a scalar or a square grid")
    if not np.all(np.isfinite(arr)) or np.any(arr < 0):
        raise ObjectiveError(f"every {name} value must be finite and >= 0")
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True)
class ObjectiveConfig:
    """Trait weights, penalty shapes, cost scale and the risk constants.

    ``weights`` and ``shapes`` are indexed by :class:`Trait`. ``hazard`` and
    ``exposure`` are either scalars or per-cell grids; they only enter the
    risk report, never the optimized objective.
    """

    weights: tuple[float, ...] = DEFAULT_WEIGHTS
    shapes: tuple[PenaltyShape, ...] = DEFAULT_SHAPES
    cost_scale: float = DEFAULT_COST_SCALE
    hazard: object = 1.0
    exposure: object = 1.0

    def __post_init__(self):
        weights = tuple(float(w) for w in self.weights)
        if len(weights) != N_TRAITS:
            raise ObjectiveError(f"need {N_TRAITS} weights, got {len(weights)}")
        for trait, w in zip(Trait, weights):
            if not math.isfinite(w) or w < 0:
                raise ObjectiveError(f"weight for {trait.label} must be >= 0, got {w}")
        shapes = tuple(s if isinstance(s, PenaltyShape) else PenaltyShape.parse(s)
                       for s in self.shapes)
        if len(shapes) != N_TRAITS:
            raise ObjectiveError(f"need {N_TRAITS} penalty shapes, got {len(shapes)}")
        cost_scale = float(self.cost_scale)
        if not math.isfinite(cost_scale) or cost_scale <= 0:
            raise ObjectiveError(f"cost_scale must be > 0, got {self.cost_scale!r}")
        object.__setattr__(self, "weights", weights)
        object.__setattr__(self, "shapes", shapes)
        object.__setattr__(self, "cost_scale", cost_scale)
        object.__setattr__(self, "hazard", _as_field(self.hazard, "hazard"))
        object.__setattr__(self, "exposure", _as_field(self.exposure, "exposure"))

    def __eq__(self, other):
        if not isinstance(other, ObjectiveConfig):
            return NotImplemented
        return (self.weights == other.weights and self.shapes == other.shapes
                and self.cost_scale == other.cost_scale
                and np.array_equal(self.hazard, other.hazard)
                and np.array_equal(self.exposure, other.exposure))

    __hash__ = None

    def with_cost_scale(self, cost_scale: float) -> "ObjectiveConfig":
        return ObjectiveConfig(self.weights, self.shapes, cost_scale, self.hazard, self.exposure)


def _check_site(S: float) -> float:
    S = float(S)
    if not math.isfinite(S) or S <= 0:
        raise ObjectiveError(f"site factor must be > 0, got {S!r}")
    return S


def _genes(genome) -> tuple[int, ...]:
    return genome.genes if isinstance(genome, BarangayGenome) else tuple(genome)


def vulnerability_terms(genome, S: float, weights=DEFAULT_WEIGHTS) -> list[float]:
    S = _check_site(S)
    return [S * float(w) * g for w, g in zip(weights, _genes(genome))]


def penalty_terms(genome, S: float, shapes=DEFAULT_SHAPES,
                  cost_scale: float = DEFAULT_COST_SCALE) -> list[float]:
    S = _check_site(S)
    lam = float(cost_scale)
    if not math.isfinite(lam) or lam <= 0:
        raise ObjectiveError(f"cost scale must be > 0, got {cost_scale!r}")
    return [lam * shape(MAX_GENE - g) / S for shape, g in zip(shapes, _genes(genome))]


def vulnerability(genome, S: float, weights=DEFAULT_WEIGHTS) -> float:
    """``S * sum(w_t * x_t)``; zero for the all-zero genome."""
    return math.fsum(vulnerability_terms(genome, S, weights))


def penalty(genome, S: float, shapes=DEFAULT_SHAPES,
            cost_scale: float = DEFAULT_COST_SCALE) -> float:
    """Cost of lowering vulnerability: shaped three's complement of each gene, over ``S``."""
    return math.fsum(penalty_terms(genome, S, shapes, cost_scale))


def cell_objective(genome, S: float, config: ObjectiveConfig) -> float:
    return (vulnerability(genome, S, config.weights)
            + penalty(genome, S, config.shapes, config.cost_scale))


def _check_dims(city: CityDesign, grid: SiteGrid):
    if city.n != grid.n:
        raise ObjectiveError(f"design is {city.n}x{city.n} but site grid is {grid.n}x{grid.n}")


def cell_objectives(city: CityDesign, grid: SiteGrid, config: ObjectiveConfig) -> np.ndarray:
    _check_dims(city, grid)
    out = np.empty((city.n, city.n))
    for r, c, genome in city.cells():
        out[r, c] = cell_objective(genome, grid[r, c], config)
    return out


def total_objective(city: CityDesign, grid: SiteGrid, config: ObjectiveConfig) -> float:
    return math.fsum(cell_objectives(city, grid, config).ravel().tolist())


def risk(hazard: float, vulnerability: float, exposure: float) -> float:
    """Flood risk as the product of hazard, vulnerability and exposure."""
    for name, value in (("hazard", hazard), ("vulnerability", vulnerability),
                        ("exposure", exposure)):
        if not value >= 0:
            raise ObjectiveError(f"{name} must be >= 0, got {value!r}")
    return hazard * vulnerability * exposure


def _cell_value(fieldval, r: int, c: int, n: int) -> float:
    if isinstance(fieldval, np.ndarray):
        if fieldval.shape != (n, n):
            raise ObjectiveError(f"per-cell field has shape {fieldval.shape}, expected {(n, n)}")
        return float(fieldval[r, c])
    return float(fieldval)


def risk_grid(city: CityDesign, grid: SiteGrid, config: ObjectiveConfig) -> np.ndarray:
    _check_dims(city, grid)
    n = city.n
    out = np.empty((n, n))
    for r, c, genome in city.cells():
        v = vulnerability(genome, grid[r, c], config.weights)
        out[r, c] = risk(_cell_value(config.hazard, r, c, n), v,
                         _cell_value(config.exposure, r, c, n))
    return out


@dataclass(frozen=True)
class CellBreakdown:
    row: int
    col: int
    site_factor: float
    vulnerability: float
    penalty: float
    objective: float
    vulnerability_terms: tuple[float, ...]
    penalty_terms: tuple[float, ...]


@dataclass(frozen=True)
class ObjectiveBreakdown:
    cells: tuple[CellBreakdown, ...]
    total_vulnerability: float
    total_penalty: float
    total: float
    trait_vulnerability: tuple[float, ...] = field(default=())
    trait_penalty: tuple[float, ...] = field(default=())

    def to_json(self) -> dict:
        return {
            "total": self.total,
            "total_vulnerability": self.total_vulnerability,
            "total_penalty": self.total_penalty,
            "traits": {t.label: {"vulnerability": self.trait_vulnerability[t],
                                 "penalty": self.trait_penalty[t]} for t in Trait},
            "cells": [{"row": c.row, "col": c.col, "site_factor": c.site_factor,
                       "vulnerability": c.vulnerability, "penalty": c.penalty,
                       "objective": c.objective,
                       "vulnerability_terms": list(c.vulnerability_terms),
                       "penalty_terms": list(c.penalty_terms)} for c in self.cells],
        }


def breakdown(city: CityDesign, grid: SiteGrid, config: ObjectiveConfig) -> ObjectiveBreakdown:
    _check_dims(city, grid)
    cells = []
    for r, c, genome in city.cells():
        S = grid[r, c]
        vt = vulnerability_terms(genome, S, config.weights)
        pt = penalty_terms(genome, S, config.shapes, config.cost_scale)
        v, p = math.fsum(vt), math.fsum(pt)
        cells.append(CellBreakdown(r, c, S, v, p, v + p, tuple(vt), tuple(pt)))
    return ObjectiveBreakdown(
        cells=tuple(cells),
        total_vulnerability=math.fsum(c.vulnerability for c in cells),
        total_penalty=math.fsum(c.penalty for c in cells),
        total=math.fsum(c.objective for c in cells),
        trait_vulnerability=tuple(math.fsum(c.vulnerability_terms[t] for c in cells)
                                  for t in range(N_TRAITS)),
        trait_penalty=tuple(math.fsum(c.penalty_terms[t] for c in cells)
                            for t in range(N_TRAITS)),
    )


def term_table(grid: SiteGrid, config: ObjectiveConfig) -> np.ndarray:
    """Per-cell contribution of every (trait, gene value): shape ``(n, n, 7, 4)``.

    Summing ``table[r, c, t, x_t]`` over traits gives the cell objective up to
    rounding; the engines use it for fast incremental evaluation only.
    """
    S = grid.factors[:, :, None, None]
    g = np.arange(MAX_GENE + 1, dtype=float)
    w = np.asarray(config.weights)[:, None]
    shaped = np.array([[shape(MAX_GENE - x) for x in range(MAX_GENE + 1)]
                       for shape in config.shapes])
    return S * (w * g) + config.cost_scale * shaped / S


def population_objectives(genes: np.ndarray, table: np.ndarray) -> np.ndarray:
    """Approximate totals for a stack of gene arrays ``(..., n, n, 7)``."""
    n = table.shape[0]
    rr, cc, tt = np.meshgrid(np.arange(n), np.arange(n), np.arange(N_TRAITS), indexing="ij")
    vals = table[rr, cc, tt, genes]
    return vals.reshape(vals.shape[:-3] + (-1,)).sum(axis=-1)


__all__ = [
    "ModelError", "ObjectiveError", "PenaltyShape", "ObjectiveConfig", "ObjectiveBreakdown",
    "CellBreakdown", "vulnerability", "penalty", "cell_objective", "cell_objectives",
    "total_objective", "risk", "risk_grid", "breakdown", "term_table", "population_objectives",
    "vulnerability_terms", "penalty_terms", "DEFAULT_WEIGHTS", "DEFAULT_SHAPES",
    "DEFAULT_COST_SCALE",
]
