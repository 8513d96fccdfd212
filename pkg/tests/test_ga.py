import itertools
from fractions import Fraction

import numpy as np
import pytest

from floodopt.ga import (GaParams, ParamsError, crossover_uniform, mutate_bitflip, run_ga,
                         step_generation, tournament_indices, tournament_select)
from floodopt.model import CityDesign, encode_design, make_rng, random_design, random_genes
from floodopt.objective import population_objectives, term_table, total_objective

class ForcedRng:
    """Stand-in generator returning fixed draws."""

    def __init__(self, draws):
        self.draws = np.asarray(draws)

    def integers(self, low, high, size):
        return self.draws.reshape(size)


def hamming(a: CityDesign, b: CityDesign) -> int:
    return sum(x != y for x, y in zip(encode_design(a), encode_design(b)))


def test_tournament_lower_wins():
    assert tournament_select(["a", "b"], [5.0, 3.0], 2, ForcedRng([[0, 1]])) == "b"
    assert tournament_select(["a", "b"], [5.0, 3.0], 2, ForcedRng([[1, 0]])) == "b"


def test_tournament_ties_go_to_first_drawn():
    assert tournament_indices([1.0, 1.0, 1.0], 3, ForcedRng([[2, 0, 1]]), 1)[0] == 2


def test_tournament_k1_is_uniform():
    rng = make_rng(0)
    picks = tournament_indices([4.0, 3.0, 2.0, 1.0], 1, rng, 40_000)
    freq = np.bincount(picks, minlength=4) / picks.size
    assert np.allclose(freq, 0.25, atol=0.01)


def test_tournament_best_frequency():
    objectives = [1.0, 2.0, 3.0, 4.0]
    # enumerate every ordered pair of draws
    wins = sum(1 for a, b in itertools.product(range(4), repeat=2)
               if min((objectives[a], 0), (objectives[b], 1))[0] == 1.0)
    assert Fraction(wins, 16) == Fraction(7, 16)
    picks = tournament_indices(objectives, 2, make_rng(1), 10_000)
    assert abs(np.mean(picks == 0) - 7 / 16) <= 0.02


def test_tournament_empty_population():
    with pytest.raises(ValueError):
        tournament_indices([], 2, make_rng(0), 1)


def test_crossover_identical_parents():
    p = random_design(1, 6)
    a, b = crossover_uniform(p, p, 1.0, make_rng(0))
    assert a == p and b == p


def test_crossover_rate_zero_copies():
    pa, pb = random_design(1, 6), random_design(2, 6)
    a, b = crossover_uniform(pa, pb, 0.0, make_rng(0))
    assert a == pa and b == pb


def test_crossover_genes_come_from_parents():
    rng = make_rng(9)
    swapped = 0
    for i in range(1000):
        pa, pb = random_design(2 * i, 3), random_design(2 * i + 1, 3)
        a, b = crossover_uniform(pa, pb, 0.9, rng)
        ga, gb = a.genes, b.genes
        assert np.all((ga == pa.genes) | (ga == pb.genes))
        assert np.all((gb == pa.genes) | (gb == pb.genes))
        # the two children together hold exactly the parents' genes
        assert np.all(np.sort([ga, gb], axis=0) == np.sort([pa.genes, pb.genes], axis=0))
        swapped += int(np.any(ga != pa.genes))
    assert swapped > 800


def test_crossover_dimension_mismatch():
    with pytest.raises(ValueError):
        crossover_uniform(random_design(0, 2), random_design(0, 3), 1.0, make_rng(0))


def test_mutation_zero_and_one():
    d = random_design(4, 6)
    assert mutate_bitflip(d, 0.0, make_rng(0)) == d
    flipped = mutate_bitflip(d, 1.0, make_rng(0))
    assert np.array_equal(flipped.genes, 3 - d.genes)
    assert encode_design(flipped) == "".join("1" if b == "0" else "0" for b in encode_design(d))


def test_mutation_expected_flips():
    rng = make_rng(11)
    d = random_design(5, 6)
    flips = [hamming(d, mutate_bitflip(d, 1 / 504, rng)) for _ in range(10_000)]
    assert abs(np.mean(flips) - 1.0) <= 0.05


def test_params_validation():
    for bad in (dict(population_size=1), dict(elitism_count=100), dict(crossover_rate=1.5),
                dict(mutation_rate_per_bit=-0.1), dict(tournament_size=0), dict(seed=-1)):
        with pytest.raises(ParamsError):
            GaParams(**bad).validate()
    assert GaParams().mutation_rate(6) == pytest.approx(1 / 504)


def _population(rng, size, n=6):
    return np.stack([random_genes(rng, n) for _ in range(size)])


def test_step_generation_elitism_and_size(grid6, config):
    rng = make_rng(3)
    params = GaParams(population_size=30)
    table = term_table(grid6, config)
    pop = _population(rng, 30)
    best = population_objectives(pop, table).min()
    for _ in range(100):
        pop = step_generation(pop, params, grid6, config, rng)
        assert pop.shape == (30, 6, 6, 7)
        assert pop.max() <= 3
        new_best = population_objectives(pop, table).min()
        assert new_best <= best
        best = new_best


def test_step_generation_degenerates_without_variation(grid6, config):
    rng = make_rng(4)
    params = GaParams(population_size=10, crossover_rate=0.0, mutation_rate_per_bit=0.0)
    pop = _population(rng, 10)
    originals = {p.tobytes() for p in pop}
    for _ in range(50):
        pop = step_generation(pop, params, grid6, config, rng)
        assert {p.tobytes() for p in pop} <= originals
    assert len({p.tobytes() for p in pop}) == 1


def test_step_generation_wrong_size(grid6, config):
    with pytest.raises(ParamsError):
        step_generation(_population(make_rng(0), 5), GaParams(population_size=6), grid6, config,
                        make_rng(0))


def test_run_ga_deterministic(grid6, config):
    a = run_ga(grid6, config, GaParams(population_size=20, generations=30, seed=77))
    b = run_ga(grid6, config, GaParams(population_size=20, generations=30, seed=77))
    assert a.to_json() == b.to_json()
    c = run_ga(grid6, config, GaParams(population_size=20, generations=30, seed=78))
    assert c.to_json() != a.to_json()


def test_run_ga_report_consistency(grid6, config, oracle6):
    r = run_ga(grid6, config, GaParams(population_size=20, generations=30, seed=5))
    assert r.best_objective == total_objective(r.best_design, grid6, config)
    assert r.best_objective == pytest.approx(r.trace[-1], rel=1e-12)
    assert all(b <= a for a, b in zip(r.trace, r.trace[1:]))
    assert len(r.trace) == 31
    assert r.evaluations == 20 * 31
    assert r.best_objective >= oracle6.total


def test_run_ga_invalid_params(grid6, config):
    with pytest.raises(ParamsError):
        run_ga(grid6, config, GaParams(population_size=1))


def test_run_ga_zero_elitism_trace_still_tracks_best(grid6, config):
    r = run_ga(grid6, config, GaParams(population_size=10, generations=20, elitism_count=0,
                                       seed=2))
    assert all(b <= a for a, b in zip(r.trace, r.trace[1:]))
