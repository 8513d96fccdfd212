"""Grid rendering, floodplain tallies and the GA/SA comparison harness."""
from __future__ import annotations

import csv
import dataclasses
import io
import re
import statistics
from dataclasses import dataclass

import numpy as np

from .config import RunConfig
from .ga import run_ga
from .model import LEGENDS, MAX_GENE, CityDesign, ModelError, SiteGrid, Trait
from .objective import ObjectiveError
from .oracle import exact_optimum
from .report_types import RunReport
from .sa import run_sa

SITE_CLASSES = ("floodplain", "slope", "highland")


def site_class(S: float) -> str:
    if S >= 2.0:
        return "floodplain"
    if S >= 1.0:
        return "slope"
    return "highland"


def render_trait_grid(design: CityDesign, trait: Trait, legend: bool = True) -> str:
    lines = [f"[{trait.letter}] {trait.label}"]
    for row in design.trait_grid(trait):
        lines.append(" ".join(format(int(g), "02b") for g in row))
    if legend:
        lines.extend(f"  {format(v, '02b')} = {text}" for v, text in enumerate(LEGENDS[trait]))
    return "\n".join(lines)


def render_trait_grids(design: CityDesign, traits=None, legend: bool = True) -> str:
    """One table of 2-bit codes per trait, each followed by its code legend."""
    traits = list(Trait) if traits is None else [Trait.parse(t) if not isinstance(t, Trait)
                                                  else t for t in traits]
    return "\n\n".join(render_trait_grid(design, t, legend) for t in traits) + "\n"


_HEADER = re.compile(r"^\[([A-G])\]")
_CODE = re.compile(r"^[01]{1,2}$")


def parse_trait_grids(text: str) -> CityDesign:
    """Inverse of :func:`render_trait_grids` (all seven traits required).

    Codes may be zero-padded ("01") or not ("1"); both mean gene value 1.
    """
    grids: dict[Trait, list[list[int]]] = {}
    current = None
    for raw in text.splitlines():
        line = raw.strip()
        m = _HEADER.match(line)
        if m:
            current = Trait("ABCDEFG".index(m.group(1)))
            if current in grids:
                raise ModelError(f"trait {current.label} appears twice")
            grids[current] = []
            continue
        tokens = line.split()
        if current is None or not tokens or not all(_CODE.match(t) for t in tokens):
            continue
        grids[current].append([int(t, 2) for t in tokens])
    if set(grids) != set(Trait):
        missing = ", ".join(t.label for t in Trait if t not in grids)
        raise ModelError(f"missing trait grids: {missing}")
    shapes = {(len(g), tuple(len(r) for r in g)) for g in grids.values()}
    if len(shapes) != 1:
        raise ModelError("trait grids differ in size")
    return CityDesign(np.stack([np.array(grids[t]) for t in Trait], axis=-1))


@dataclass(frozen=True)
class FloodplainReport:
    """Gene-value counts per trait and site class, and value-3 genes on the floodplain."""

    counts: dict  # trait label -> class -> [count of 0, 1, 2, 3]
    high_risk: dict  # trait label -> [(row, col), ...]
    class_sizes: dict

    def to_json(self) -> dict:
        return {"class_sizes": self.class_sizes, "counts": self.counts,
                "high_risk_on_floodplain": {k: [list(rc) for rc in v]
                                            for k, v in self.high_risk.items()}}


def floodplain_report(design: CityDesign, grid: SiteGrid) -> FloodplainReport:
    if design.n != grid.n:
        raise ObjectiveError(f"design is {design.n}x{design.n} but site grid is {grid.n}x{grid.n}")
    classes = [[site_class(grid[r, c]) for c in range(grid.n)] for r in range(grid.n)]
    counts = {t.label: {k: [0] * (MAX_GENE + 1) for k in SITE_CLASSES} for t in Trait}
    high_risk = {t.label: [] for t in Trait}
    for r, c, genome in design.cells():
        k = classes[r][c]
        for t in Trait:
            counts[t.label][k][genome[t]] += 1
            if k == "floodplain" and genome[t] == MAX_GENE:
                high_risk[t.label].append((r, c))
    sizes = {k: sum(row.count(k) for row in classes) for k in SITE_CLASSES}
    return FloodplainReport(counts, high_risk, sizes)


def render_floodplain_report(report: FloodplainReport) -> str:
    lines = ["trait          class       00  01  10  11  high-risk on floodplain"]
    for t in Trait:
        flagged = report.high_risk[t.label]
        cells = " ".join(f"({r},{c})" for r, c in flagged)
        for i, k in enumerate(SITE_CLASSES):
            n = report.counts[t.label][k]
            name, tail = (t.label, f"{len(flagged)} {cells}") if i == 0 else ("", "")
            line = f"{name:<14} {k:<10} {n[0]:>3} {n[1]:>3} {n[2]:>3} {n[3]:>3}  {tail}"
            lines.append(line.rstrip())
    return "\n".join(lines) + "\n"


def trace_csv(report: RunReport) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["iteration", "best_objective"])
    for i, v in enumerate(report.trace):
        writer.writerow([i, repr(v)])
    return buf.getvalue()


def gap(value: float, optimum: float) -> float:
    """Relative excess over the exact optimum."""
    return (value - optimum) / abs(optimum)


def _summary(values: list[float]) -> dict:
    return {"median": statistics.median(values), "min": min(values), "max": max(values)}


@dataclass(frozen=True)
class Comparison:
    oracle_total: float
    oracle: object
    ga: tuple[RunReport, ...]
    sa: tuple[RunReport, ...]

    def to_json(self) -> dict:
        engines = {}
        for name, runs in (("ga", self.ga), ("sa", self.sa)):
            gaps = [gap(r.best_objective, self.oracle_total) for r in runs]
            best = min(runs, key=lambda r: (r.best_objective, r.seed))
            engines[name] = {
                "runs": [{"seed": r.seed, "best_objective": r.best_objective,
                          "gap": g, "evaluations": r.evaluations}
                         for r, g in zip(runs, gaps)],
                "gap": _summary(gaps),
                "best_objective": _summary([r.best_objective for r in runs]),
                "evaluations": _summary([r.evaluations for r in runs]),
                "best_seed": best.seed,
                "best_design": best.best_design.to_json(),
                "best_design_rendered": render_trait_grids(best.best_design, legend=False),
            }
        return {"oracle_total": self.oracle_total, "engines": engines}


def compare_runs(config: RunConfig, seeds, equal_budget: bool = False) -> Comparison:
    """Oracle once, then GA and SA for every seed, sorted by seed.

    With ``equal_budget`` the SA evaluation cap is set to the GA budget
    (``population_size * (generations + 1)``).
    """
    seeds = sorted(set(int(s) for s in seeds))
    if not seeds:
        raise ValueError("compare_runs needs at least one seed")
    oracle = exact_optimum(config.grid, config.objective)
    sa_params = config.sa
    if equal_budget:
        budget = config.ga.population_size * (config.ga.generations + 1)
        sa_params = dataclasses.replace(sa_params, max_evaluations=budget)
    ga_runs = tuple(run_ga(config.grid, config.objective, dataclasses.replace(config.ga, seed=s))
                    for s in seeds)
    sa_runs = tuple(run_sa(config.grid, config.objective, dataclasses.replace(sa_params, seed=s))
                    for s in seeds)
    return Comparison(oracle.total, oracle, ga_runs, sa_runs)


def render_comparison(comp: Comparison) -> str:
    doc = comp.to_json()
    lines = [f"oracle total: {comp.oracle_total:.6g}", "",
             "engine  seed                  best        gap   evaluations"]
    for name in ("ga", "sa"):
        for run in doc["engines"][name]["runs"]:
            lines.append(f"{name:<7} {run['seed']:<20} {run['best_objective']:>10.6g} "
                         f"{run['gap']:>9.4%} {run['evaluations']:>13}")
    lines.append("")
    for name in ("ga", "sa"):
        g = doc["engines"][name]["gap"]
        lines.append(f"{name} gap: median {g['median']:.4%}  min {g['min']:.4%}  "
                     f"max {g['max']:.4%}")
    return "\n".join(lines) + "\n"

