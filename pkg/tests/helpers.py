"""Shared test doubles: recording generators and an independent SA replay."""
import math

import numpy as np

from floodopt.model import CityDesign, N_TRAITS, make_rng
from floodopt.objective import cell_objective, total_objective


class RecordingRng:
    """Wraps a generator and keeps every array it hands out, in call order."""

    def __init__(self, seed):
        self.inner = make_rng(seed)
        self.calls = []

    def integers(self, *args, **kwargs):
        out = self.inner.integers(*args, **kwargs)
        self.calls.append(("integers", out))
        return out

    def random(self, *args, **kwargs):
        out = self.inner.random(*args, **kwargs)
        self.calls.append(("random", out))
        return out


class StubUniformRng(RecordingRng):
    """Real proposal draws, but every uniform draw is the constant ``u``."""

    def __init__(self, seed, u):
        super().__init__(seed)
        self.u = u

    def random(self, size=None):
        out = np.full(size, self.u)
        self.calls.append(("random", out))
        return out


def replay(grid, config, calls, T0, ratio, levels, track_best=True):
    """Re-run the chain from recorded draws using only scalar objectives.

    Returns the best visited design and one (delta, T, u, accepted) tuple
    per proposal.
    """
    genes = calls[0][1].astype(int).copy()
    n = grid.n
    best = CityDesign(genes)
    best_value = total_objective(best, grid, config)
    pos = 1
    decisions = []
    for level in range(levels):
        T = T0 * ratio ** level
        bits, uniforms = calls[pos][1], calls[pos + 1][1]
        pos += 2
        for bit, u in zip(bits, uniforms):
            gene = int(bit) >> 1
            r, rem = divmod(gene, n * N_TRAITS)
            c, t = divmod(rem, N_TRAITS)
            new_genes = genes[r, c].copy()
            new_genes[t] ^= 2 if bit % 2 == 0 else 1
            delta = (cell_objective(tuple(new_genes), grid[r, c], config)
                     - cell_objective(tuple(genes[r, c]), grid[r, c], config))
            p = 1.0 if delta <= 0 else math.exp(-delta / T)
            taken = u < p
            if taken:
                genes[r, c] = new_genes
            if taken and track_best:
                value = total_objective(CityDesign(genes), grid, config)
                if value < best_value:
                    best, best_value = CityDesign(genes), value
            decisions.append((delta, T, u, taken))
    return best, decisions
