"""Simulated annealing with Metropolis acceptance and geometric cooling.

The chain walks the 2-bit encoding of a design one bit flip at a time. Each
proposal changes a single gene of a single cell, so its objective delta is
read off a precomputed per-cell term table instead of re-evaluating the city.
"""
from __future__ import annotations

import math
import time
from dataclasses import asdict, dataclass

import numpy as np

from .ga import ParamsError
from .model import CityDesign, ModelError, N_TRAITS, SiteGrid, make_rng, n_bits, random_genes
from .objective import ObjectiveConfig, term_table, total_objective
from .report_types import RunReport

MOVES = ("bitflip", "resample")
CALIBRATION_SAMPLES = 200
CALIBRATION_ACCEPTANCE = 0.8


@dataclass(frozen=True)
class SaParams:
    initial_temperature: float | None = None  # None -> calibrated from uphill deltas
    cooling_ratio: float = 0.95
    steps_per_temperature: int | None = None  # None -> 2 * encoding length
    min_temperature: float | None = None  # None -> 1e-3 * initial temperature
    max_evaluations: int = 2_000_000
    move: str = "bitflip"
    seed: int = 0

    def validate(self) -> "SaParams":
        if not 0.0 < self.cooling_ratio < 1.0:
            raise ParamsError("cooling_ratio must be in (0, 1)")
        if self.initial_temperature is not None and not self.initial_temperature > 0:
            raise ParamsError("initial_temperature must be > 0")
        if self.min_temperature is not None and not self.min_temperature > 0:
            raise ParamsError("min_temperature must be > 0")
        if self.steps_per_temperature is not None and self.steps_per_temperature < 1:
            raise ParamsError("steps_per_temperature must be >= 1")
        if self.max_evaluations < 1:
            raise ParamsError("max_evaluations must be >= 1")
        if self.move not in MOVES:
            raise ParamsError(f"move must be one of {MOVES}, got {self.move!r}")
        try:
            make_rng(self.seed)
        except ModelError as exc:
            raise ParamsError(str(exc)) from None
        return self

    def steps(self, n: int) -> int:
        return self.steps_per_temperature or 2 * n_bits(n)


def acceptance_probability(delta: float, T: float) -> float:
    """Metropolis rule: downhill always, uphill with ``exp(-delta / T)``."""
    if not T > 0:
        raise ValueError(f"temperature must be > 0, got {T!r}")
    if delta <= 0:
        return 1.0
    return math.exp(-delta / T)


def neighbor(design: CityDesign, rng: np.random.Generator) -> CityDesign:
    """Flip one uniformly chosen bit of the design's encoding."""
    bit = int(rng.integers(0, n_bits(design.n)))
    flat = design.genes.ravel().copy()
    flat[bit >> 1] ^= 2 if bit % 2 == 0 else 1
    return CityDesign(flat.reshape(design.genes.shape))


def _proposals(move: str, count: int, n_genes: int, rng: np.random.Generator):
    """Batched (gene index, xor mask or value offset) pairs for one level."""
    if move == "bitflip":
        bits = rng.integers(0, 2 * n_genes, size=count)
        return (bits >> 1).tolist(), np.where(bits % 2 == 0, 2, 1).tolist()
    genes = rng.integers(0, n_genes, size=count)
    offsets = rng.integers(1, 4, size=count)
    return genes.tolist(), offsets.tolist()


def _apply(move: str, value: int, arg: int) -> int:
    if move == "bitflip":
        return value ^ arg
    return (value + arg) % 4


def calibrate_temperature(genes: list[int], table: list[list[float]], move: str,
                          rng: np.random.Generator,
                          samples: int = CALIBRATION_SAMPLES,
                          budget: int | None = None) -> tuple[float, int]:
    """Temperature at which the mean sampled uphill move is accepted with p = 0.8.

    Returns the temperature and the number of proposals evaluated (at most
    ``budget``).
    """
    limit = 50 * samples if budget is None else min(50 * samples, budget)
    uphill: list[float] = []
    tried = 0
    while len(uphill) < samples and tried < limit:
        idx, args = _proposals(move, min(samples, limit - tried), len(genes), rng)
        for i, a in zip(idx, args):
            tried += 1
            row = table[i]
            d = row[_apply(move, genes[i], a)] - row[genes[i]]
            if d > 0:
                uphill.append(d)
                if len(uphill) == samples:
                    break
    if not uphill:
        return 1.0, tried
    return -math.fsum(uphill) / len(uphill) / math.log(CALIBRATION_ACCEPTANCE), tried


def accept(delta: float, T: float, u: float) -> bool:
    """Apply a proposal iff the uniform draw ``u`` falls below its acceptance probability."""
    return u < acceptance_probability(delta, T)


def run_sa(grid: SiteGrid, config: ObjectiveConfig, params: SaParams,
           rng: np.random.Generator | None = None) -> RunReport:
    """Anneal from a seeded random design; ``rng`` overrides the seeded generator."""
    params.validate()
    start = time.perf_counter()
    if rng is None:
        rng = make_rng(params.seed)
    n = grid.n
    genes_arr = random_genes(rng, n)
    genes = genes_arr.ravel().astype(int).tolist()
    table = term_table(grid, config).reshape(n * n * N_TRAITS, 4).tolist()
    move = params.move

    current = total_objective(CityDesign(genes_arr), grid, config)
    evaluations = 1
    if params.initial_temperature is None:
        T0, used = calibrate_temperature(genes, table, move, rng,
                                         budget=params.max_evaluations - evaluations)
        evaluations += used
    else:
        T0 = float(params.initial_temperature)
    T_min = params.min_temperature if params.min_temperature is not None else 1e-3 * T0
    steps = params.steps(n)

    best_genes, best = list(genes), current
    trace = [best]
    levels = []
    T = T0
    level = 0
    while T >= T_min and evaluations < params.max_evaluations:
        count = min(steps, params.max_evaluations - evaluations)
        idx, args = _proposals(move, count, len(genes), rng)
        uniforms = rng.random(count).tolist()
        accepted = uphill = 0
        for i, a, u in zip(idx, args, uniforms):
            row = table[i]
            old = genes[i]
            new = _apply(move, old, a)
            delta = row[new] - row[old]
            if accept(delta, T, u):
                genes[i] = new
                current += delta
                accepted += 1
                if delta > 0:
                    uphill += 1
                elif current < best:
                    best = current
                    best_genes = list(genes)
        evaluations += count
        trace.append(best)
        levels.append({"temperature": T, "proposals": count, "accepted": accepted,
                       "accepted_uphill": uphill})
        level += 1
        T = T0 * params.cooling_ratio ** level

    best_design = CityDesign(np.array(best_genes, dtype=np.uint8).reshape(n, n, N_TRAITS))
    report_params = asdict(params)
    report_params.update(initial_temperature=T0, min_temperature=T_min,
                         steps_per_temperature=steps)
    return RunReport(
        engine="sa",
        params=report_params,
        seed=params.seed,
        best_design=best_design,
        best_objective=total_objective(best_design, grid, config),
        trace=tuple(trace),
        evaluations=evaluations,
        wall_time=time.perf_counter() - start,
        extra={"levels": levels},
    )
