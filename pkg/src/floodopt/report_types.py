"""Result record shared by the two engines."""
from __future__ import annotations

from dataclasses import dataclass, field

from .model import CityDesign


@dataclass(frozen=True)
class RunReport:
    """Outcome of one seeded engine run.

    ``trace`` holds the best-so-far objective after every iteration (GA
    generation or SA temperature level, with the initial state first). It is
    computed incrementally and may differ from ``best_objective`` in the last
    few bits; ``best_objective`` is always recomputed from ``best_design``.
    ``wall_time`` is the only nondeterministic field.
    """

    engine: str
    params: dict
    seed: int
    best_design: CityDesign
    best_objective: float
    trace: tuple[float, ...]
    evaluations: int
    wall_time: float
    extra: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        """Deterministic part of the report (no timing)."""
        doc = {
            "engine": self.engine,
            "seed": self.seed,
            "params": self.params,
            "best_objective": self.best_objective,
            "best_design": self.best_design.to_json(),
            "evaluations": self.evaluations,
            "trace": list(self.trace),
        }
        doc.update(self.extra)
        return doc
