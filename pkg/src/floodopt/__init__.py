"""Flood-vulnerability city design: objective model, exact oracle, GA and SA engines."""

__version__ = "0.1.0"

from .model import (BarangayGenome, CityDesign, ModelError, SiteGrid, Trait, decode_design,
                    default_site_grid, encode_design, random_design)
from .objective import (ObjectiveConfig, PenaltyShape, breakdown, cell_objective, penalty, risk,
                        total_objective, vulnerability)
from .oracle import OracleResult, best_genome_for_factor, exact_optimum
from .ga import GaParams, run_ga
from .sa import SaParams, acceptance_probability, run_sa
from .report_types import RunReport

__all__ = [
    "BarangayGenome", "CityDesign", "ModelError", "SiteGrid", "Trait", "decode_design",
    "default_site_grid", "encode_design", "random_design", "ObjectiveConfig", "PenaltyShape",
    "breakdown", "cell_objective", "penalty", "risk", "total_objective", "vulnerability",
    "OracleResult", "best_genome_for_factor", "exact_optimum", "GaParams", "run_ga",
    "SaParams", "acceptance_probability", "run_sa", "RunReport",
]
