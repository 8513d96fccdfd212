"""Generational genetic algorithm over city designs.

Individuals are gene arrays of shape ``(n, n, 7)``; a population is a stacked
``(P, n, n, 7)`` array. Operators work on the 2-bit encoding: crossover swaps
whole genes, mutation flips single bits.
"""
from __future__ import annotations

import math
import time
from dataclasses import asdict, dataclass

import numpy as np

from .model import CityDesign, ModelError, SiteGrid, make_rng, n_bits, random_genes
from .objective import ObjectiveConfig, population_objectives, term_table, total_objective
from .report_types import RunReport


class ParamsError(ValueError):
    """Engine parameters outside their valid range."""


@dataclass(frozen=True)
class GaParams:
    population_size: int = 100
    generations: int = 500
    tournament_size: int = 2
    crossover_rate: float = 0.9
    mutation_rate_per_bit: float | None = None  # None -> 1 / encoding length
    elitism_count: int = 1
    seed: int = 0

    def validate(self) -> "GaParams":
        if self.population_size < 2:
            raise ParamsError("population_size must be >= 2")
        if self.generations < 0:
            raise ParamsError("generations must be >= 0")
        if not 0 <= self.elitism_count < self.population_size:
            raise ParamsError("elitism_count must be in [0, population_size)")
        if self.tournament_size < 1:
            raise ParamsError("tournament_size must be >= 1")
        if not 0.0 <= self.crossover_rate <= 1.0:
            raise ParamsError("crossover_rate must be in [0, 1]")
        if self.mutation_rate_per_bit is not None and not 0.0 <= self.mutation_rate_per_bit <= 1.0:
            raise ParamsError("mutation_rate_per_bit must be in [0, 1]")
        try:
            make_rng(self.seed)
        except ModelError as exc:
            raise ParamsError(str(exc)) from None
        return self

    def mutation_rate(self, n: int) -> float:
        if self.mutation_rate_per_bit is None:
            return 1.0 / n_bits(n)
        return self.mutation_rate_per_bit


def tournament_indices(objectives, k: int, rng: np.random.Generator, size: int) -> np.ndarray:
    """Winners of ``size`` independent tournaments of ``k`` draws with replacement."""
    objectives = np.asarray(objectives, dtype=float)
    if objectives.size == 0:
        raise ValueError("cannot select from an empty population")
    if k < 1:
        raise ValueError("tournament size must be >= 1")
    draws = rng.integers(0, objectives.size, size=(size, k))
    # argmin keeps the first of equal values, i.e. the earliest draw
    return draws[np.arange(size), np.argmin(objectives[draws], axis=1)]


def tournament_select(population, objectives, k: int, rng: np.random.Generator):
    """Pick one individual: best of ``k`` uniform draws, ties to the first drawn."""
    if len(population) != len(objectives):
        raise ValueError("population and objectives differ in length")
    return population[int(tournament_indices(objectives, k, rng, 1)[0])]


def crossover_arrays(a: np.ndarray, b: np.ndarray, rate: float, rng: np.random.Generator):
    """Gene-level uniform crossover for stacked parent pairs ``a[i]``, ``b[i]``."""
    if a.shape != b.shape:
        raise ValueError(f"parent shapes differ: {a.shape} vs {b.shape}")
    pairs = a.shape[0]
    do_cross = rng.random(pairs) < rate
    swap = rng.random(a.shape) < 0.5
    swap &= do_cross.reshape((pairs,) + (1,) * (a.ndim - 1))
    return np.where(swap, b, a), np.where(swap, a, b)


def crossover_uniform(parent_a: CityDesign, parent_b: CityDesign, rate: float,
                      rng: np.random.Generator) -> tuple[CityDesign, CityDesign]:
    if parent_a.n != parent_b.n:
        raise ValueError(f"parents are {parent_a.n}x{parent_a.n} and {parent_b.n}x{parent_b.n}")
    ca, cb = crossover_arrays(parent_a.genes[None], parent_b.genes[None], rate, rng)
    return CityDesign(ca[0]), CityDesign(cb[0])


def mutate_arrays(genes: np.ndarray, p: float, rng: np.random.Generator) -> np.ndarray:
    """Flip each bit of each 2-bit gene independently with probability ``p``."""
    flips = (rng.random(genes.shape + (2,)) < p).astype(np.uint8)
    return genes ^ ((flips[..., 0] << 1) | flips[..., 1])


def mutate_bitflip(design: CityDesign, p: float, rng: np.random.Generator) -> CityDesign:
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"mutation rate must be in [0, 1], got {p}")
    return CityDesign(mutate_arrays(design.genes, p, rng))


def step_generation(population: np.ndarray, params: GaParams, grid: SiteGrid,
                    config: ObjectiveConfig, rng: np.random.Generator,
                    objectives: np.ndarray | None = None,
                    table: np.ndarray | None = None) -> np.ndarray:
    """Produce the next generation: elites carried over, rest by select, cross, mutate."""
    size = population.shape[0]
    if size != params.population_size:
        raise ParamsError(f"population has {size} individuals, params say "
                          f"{params.population_size}")
    if table is None:
        table = term_table(grid, config)
    if objectives is None:
        objectives = population_objectives(population, table)
    order = np.argsort(objectives, kind="stable")
    elites = population[order[:params.elitism_count]]

    n_children = size - params.elitism_count
    n_pairs = math.ceil(n_children / 2)
    parents = tournament_indices(objectives, params.tournament_size, rng, 2 * n_pairs)
    a, b = crossover_arrays(population[parents[0::2]], population[parents[1::2]],
                            params.crossover_rate, rng)
    children = np.concatenate([a, b])[:n_children]
    children = mutate_arrays(children, params.mutation_rate(grid.n), rng)
    return np.concatenate([elites, children])


def run_ga(grid: SiteGrid, config: ObjectiveConfig, params: GaParams) -> RunReport:
    params.validate()
    start = time.perf_counter()
    rng = make_rng(params.seed)
    table = term_table(grid, config)
    population = np.stack([random_genes(rng, grid.n) for _ in range(params.population_size)])

    objectives = population_objectives(population, table)
    evaluations = population.shape[0]
    best_idx = int(np.argmin(objectives))
    best_genes, best_value = population[best_idx].copy(), float(objectives[best_idx])
    trace = [best_value]

    for _ in range(params.generations):
        population = step_generation(population, params, grid, config, rng, objectives, table)
        objectives = population_objectives(population, table)
        evaluations += population.shape[0]
        idx = int(np.argmin(objectives))
        if objectives[idx] < best_value:
            best_genes, best_value = population[idx].copy(), float(objectives[idx])
        trace.append(best_value)

    best = CityDesign(best_genes)
    return RunReport(
        engine="ga",
        params=asdict(params),
        seed=params.seed,
        best_design=best,
        best_objective=total_objective(best, grid, config),
        trace=tuple(trace),
        evaluations=evaluations,
        wall_time=time.perf_counter() - start,
    )
