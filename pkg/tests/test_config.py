import json

import numpy as np
import pytest

from floodopt.config import ConfigError, parse_config, serialize_config
from floodopt.model import Trait, default_site_grid
from floodopt.objective import PenaltyShape


def test_empty_document_gives_defaults():
    cfg = parse_config("{}")
    assert cfg.grid == default_site_grid(6)
    assert cfg.objective.cost_scale == 3.26
    assert cfg.objective.weights[Trait.POVERTY] == 2.0
    assert cfg.objective.shapes[Trait.MORTALITY] is PenaltyShape.QUADRATIC
    assert cfg.ga.population_size == 100 and cfg.sa.cooling_ratio == 0.95


@pytest.mark.parametrize("doc,path", [
    ({"objective": {"weights": {"Poverty": -1}}}, "objective.weights.Poverty"),
    ({"grid": {"n": 0}}, "grid.n"),
    ({"grid": {"n": 2, "factors": [[1, 1], [1, 0]]}}, "grid.factors[1][1]"),
    ({"grid": {"n": 2, "factors": [[1, 1]]}}, "grid.factors"),
    ({"grid": {"overrides": [{"row": 0, "col": 0, "factor": -2}]}}, "grid.factors[0][0]"),
    ({"ga": {"crossover_rate": 1.5}}, "ga"),
    ({"ga": {"mutation_rate_per_bit": -0.5}}, "ga"),
    ({"ga": {"population_size": "many"}}, "ga.population_size"),
    ({"sa": {"cooling_ratio": 1.0}}, "sa"),
    ({"objective": {"shapes": {"Literacy": "cubic"}}}, "objective.shapes.Literacy"),
    ({"objective": {"weights": {"Income": 1}}}, "objective.weights.Income"),
    ({"objective": {"cost_scale": 0}}, "objective.cost_scale"),
    ({"objective": {"hazard": -1}}, "objective.hazard"),
    ({"extra": {}}, "extra"),
    ({"ga": {"popsize": 3}}, "ga.popsize"),
])
def test_validation_errors_name_the_field(doc, path):
    with pytest.raises(ConfigError) as info:
        parse_config(json.dumps(doc))
    assert info.value.path == path
    assert path in str(info.value)


def test_malformed_json():
    with pytest.raises(ConfigError):
        parse_config("{not json")
    with pytest.raises(ConfigError):
        parse_config("[1, 2]")


def test_explicit_default_factors_override_is_idempotent():
    factors = default_site_grid(6).tolist()
    cfg = parse_config(json.dumps({"grid": {"n": 6, "factors": factors}}))
    assert cfg.grid == default_site_grid(6)


def test_overrides_and_other_sizes():
    cfg = parse_config(json.dumps({"grid": {"n": 4, "overrides": [
        {"row": 0, "col": 0, "factor": 3.0}]}}))
    assert cfg.grid.n == 4 and cfg.grid[0, 0] == 3.0 and cfg.grid[0, 3] == 2.0


def test_trait_names_are_flexible():
    cfg = parse_config(json.dumps({"objective": {"weights": {"D": 3, "tv_radio": 0.5},
                                                 "shapes": {"mortality": "Linear"}}}))
    assert cfg.objective.weights[Trait.POVERTY] == 3
    assert cfg.objective.weights[Trait.TV_RADIO] == 0.5
    assert cfg.objective.shapes[Trait.MORTALITY] is PenaltyShape.LINEAR


def test_per_cell_hazard():
    hazard = np.arange(36, dtype=float).reshape(6, 6).tolist()
    cfg = parse_config(json.dumps({"objective": {"hazard": hazard, "exposure": 2}}))
    assert cfg.objective.hazard[5, 5] == 35
    assert cfg.objective.exposure == 2


@pytest.mark.parametrize("doc", [
    {},
    {"grid": {"n": 3}, "objective": {"cost_scale": 1.0, "weights": {"Literacy": 0}},
     "ga": {"population_size": 10, "mutation_rate_per_bit": 0.01, "seed": 9},
     "sa": {"initial_temperature": 4.0, "move": "resample"}, "output": {"render": False}},
    {"objective": {"hazard": [[0.5] * 6] * 6}},
])
def test_parse_serialize_fixed_point(doc):
    first = parse_config(json.dumps(doc))
    text = serialize_config(first)
    second = parse_config(text)
    assert second == first
    assert serialize_config(second) == text
