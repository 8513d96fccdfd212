"""Brute-force optimal genomes per site factor, with no package imports.

Prints the golden values frozen in tests/test_oracle.py. Evaluates the cell
objective directly for all 4**7 genomes in lexicographic order and keeps the
first strict minimum.
"""
import itertools
import math

WEIGHTS = (1, 1, 1, 2, 1, 1, 1)
SHAPES = ("exp", "lin", "quad", "exp", "lin", "lin", "exp")


def shaped(kind, u):
    return {"exp": math.exp(u), "lin": u, "quad": u * u}[kind]


def cell(genes, S, lam):
    v = S * sum(w * g for w, g in zip(WEIGHTS, genes))
    c = lam * sum(shaped(k, 3 - g) for k, g in zip(SHAPES, genes)) / S
    return v + c


def best(S, lam):
    top = None
    for genes in itertools.product(range(4), repeat=7):
        value = cell(genes, S, lam)
        if top is None or value < top[1] - 1e-12:
            top = (genes, value)
    return top


if __name__ == "__main__":
    for lam in (1.0, 3.26):
        for S in (0.5, 1.0, 2.0):
            genes, value = best(S, lam)
            print(f"lam={lam} S={S}: genes={genes} value={value!r}")
    counts = {0.5: 20, 1.0: 10, 2.0: 6}
    total = sum(counts[S] * best(S, 3.26)[1] for S in counts)
    print(f"default 6x6 total at lam=3.26: {total!r}")
