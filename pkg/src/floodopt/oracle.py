"""Exact global optimum by exhaustive enumeration.

The city objective is a sum of independent cell objectives, and each cell
objective only depends on the cell's site factor. Enumerating the 4**7
genomes once per distinct site factor therefore yields the true minimum.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .model import MAX_GENE, N_TRAITS, BarangayGenome, CityDesign, SiteGrid
from .objective import ObjectiveConfig, cell_objective, total_objective

# Lexicographic order in A..G, so argmin's first hit is the tie-break winner.
ALL_GENOMES = np.array(list(itertools.product(range(MAX_GENE + 1), repeat=N_TRAITS)),
                       dtype=np.uint8)
ALL_GENOMES.flags.writeable = False

# Values closer than this (relative to the cell scale) count as ties.
TIE_RTOL = 1e-12


def _trait_tables(S: float, config: ObjectiveConfig) -> np.ndarray:
    """``table[t, x]`` = contribution of gene value ``x`` of trait ``t``."""
    g = np.arange(MAX_GENE + 1, dtype=float)
    vul = S * np.asarray(config.weights)[:, None] * g
    pen = np.array([[config.cost_scale * shape(MAX_GENE - x) / S for x in range(MAX_GENE + 1)]
                    for shape in config.shapes])
    return vul + pen


def _tolerance(scale: float) -> float:
    return TIE_RTOL * max(1.0, abs(scale))


def best_genome_for_factor(S: float, config: ObjectiveConfig) -> tuple[BarangayGenome, float]:
    """Minimize the cell objective over all 16384 genomes for site factor ``S``."""
    S = float(S)
    cell_objective(BarangayGenome.zeros(), S, config)  # validates S
    table = _trait_tables(S, config)
    values = table[np.arange(N_TRAITS), ALL_GENOMES].sum(axis=1)
    best = values.min()
    idx = int(np.flatnonzero(values <= best + _tolerance(best))[0])
    genome = BarangayGenome(tuple(int(x) for x in ALL_GENOMES[idx]))
    return genome, cell_objective(genome, S, config)


def best_genome_per_trait(S: float, config: ObjectiveConfig) -> tuple[BarangayGenome, float]:
    """Same optimum via independent 1-D minimization of each trait."""
    S = float(S)
    cell_objective(BarangayGenome.zeros(), S, config)
    table = _trait_tables(S, config)
    mins = table.min(axis=1)
    tol = _tolerance(math.fsum(mins.tolist()))
    genes = tuple(int(np.flatnonzero(row <= m + tol)[0]) for row, m in zip(table, mins))
    genome = BarangayGenome(genes)
    return genome, cell_objective(genome, S, config)


@dataclass(frozen=True)
class OracleResult:
    per_factor: dict
    design: CityDesign
    total: float

    def to_json(self) -> dict:
        return {
            "total": self.total,
            "per_factor": [{"site_factor": S, "genome": list(g.genes), "objective": v}
                           for S, (g, v) in sorted(self.per_factor.items())],
            "design": self.design.to_json(),
        }


def exact_optimum(grid: SiteGrid, config: ObjectiveConfig) -> OracleResult:
    per_factor = {S: best_genome_for_factor(S, config) for S in grid.distinct_factors()}
    n = grid.n
    genes = np.empty((n, n, N_TRAITS), dtype=np.uint8)
    for r in range(n):
        for c in range(n):
            genes[r, c] = per_factor[grid[r, c]][0].genes
    design = CityDesign(genes)
    return OracleResult(per_factor, design, total_objective(design, grid, config))
