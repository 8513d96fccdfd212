"""Domain types for the gridded city: traits, genomes, site factors and designs.

A city is an ``n x n`` grid of barangays. Each barangay carries seven 2-bit
genes (trait levels 0..3) in the fixed order A..G. Designs are stored as
read-only ``uint8`` arrays of shape ``(n, n, 7)``.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

N_TRAITS = 7
GENE_BITS = 2
MAX_GENE = 3


class ModelError(ValueError):
    """Invalid dimension, gene value, site factor or encoding."""


class Trait(enum.IntEnum):
    URBANIZED = 0
    LITERACY = 1
    MORTALITY = 2
    POVERTY = 3
    TV_RADIO = 4
    NON_STRUCTURAL = 5
    STRUCTURAL = 6

    @property
    def letter(self) -> str:
        return "ABCDEFG"[self.value]

    @property
    def label(self) -> str:
        return _LABELS[self.value]

    @classmethod
    def parse(cls, name: str) -> "Trait":
        """Look up a trait by label, enum name or letter (case-insensitive)."""
        key = str(name).strip().lower().replace("-", "_").replace(" ", "_")
        for trait in cls:
            if key in (trait.label.lower(), trait.name.lower(), trait.letter.lower(),
                       trait.name.lower().replace("_", "")):
                return trait
        raise ModelError(f"unknown trait name {name!r}")


_LABELS = ("Urbanized", "Literacy", "Mortality", "Poverty", "TvRadio",
           "NonStructural", "Structural")

# Code meanings for "00".."11" per trait.
LEGENDS: dict[Trait, tuple[str, str, str, str]] = {
    Trait.URBANIZED: ("Not urbanized", "A little urbanized",
                      "Moderately urbanized", "Highly urbanized"),
    Trait.LITERACY: ("0-25% are illiterate", "25-50% are illiterate",
                     "50-75% are illiterate", "more than 75% are illiterate"),
    Trait.MORTALITY: ("Low mortality rate", "Below average mortality rate",
                      "Average mortality rate", "High mortality rate"),
    Trait.POVERTY: ("0-25% in class D", "25-50% in class D",
                    "50-75% in class D", "more than 75% in class D"),
    Trait.TV_RADIO: ("75-100% penetration rate", "50-75% penetration rate",
                     "25-50% penetration rate", "less than 25% penetration rate"),
    Trait.NON_STRUCTURAL: ("existing with good implementation/compliance",
                           "existing with average implementation/compliance",
                           "existing with poor implementation/compliance",
                           "no non-structural measure"),
    Trait.STRUCTURAL: ("existing structural measure in good condition",
                       "existing structural measure in average condition",
                       "existing structural measure in poor condition",
                       "no structural measure"),
}


def _check_gene(value) -> int:
    if isinstance(value, bool) or not isinstance(value, (int, np.integer)):
        raise ModelError(f"gene value must be an integer, got {value!r}")
    if not 0 <= value <= MAX_GENE:
        raise ModelError(f"gene value {value} outside 0..3")
    return int(value)


@dataclass(frozen=True)
class BarangayGenome:
    """Seven trait levels of one barangay, in A..G order."""

    genes: tuple[int, ...]

    def __post_init__(self):
        genes = tuple(_check_gene(g) for g in self.genes)
        if len(genes) != N_TRAITS:
            raise ModelError(f"a genome has {N_TRAITS} genes, got {len(genes)}")
        object.__setattr__(self, "genes", genes)

    @classmethod
    def zeros(cls) -> "BarangayGenome":
        return cls((0,) * N_TRAITS)

    @classmethod
    def from_mapping(cls, mapping: dict) -> "BarangayGenome":
        genes = [None] * N_TRAITS
        for key, value in mapping.items():
            genes[Trait.parse(key) if not isinstance(key, Trait) else key] = value
        if any(g is None for g in genes):
            raise ModelError("genome mapping must name all seven traits")
        return cls(tuple(genes))

    def __getitem__(self, trait: Trait | int) -> int:
        return self.genes[int(trait)]

    def replace(self, trait: Trait | int, value: int) -> "BarangayGenome":
        genes = list(self.genes)
        genes[int(trait)] = value
        return BarangayGenome(tuple(genes))


def _site_factor(r: int, c: int, n: int) -> float:
    d = abs(r + c - (n - 1))
    if d == 0:
        return 2.0
    if d == 1:
        return 1.0
    return 0.5


class SiteGrid:
    """Per-cell vulnerability multipliers (all strictly positive)."""

    __slots__ = ("_factors",)

    def __init__(self, factors):
        arr = np.array(factors, dtype=float)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] == 0:
            raise ModelError(f"site factors must be a non-empty square grid, got shape {arr.shape}")
        if not np.all(np.isfinite(arr)) or np.any(arr <= 0):
            raise ModelError("every site factor must be a finite value > 0")
        arr.flags.writeable = False
        self._factors = arr

    @property
    def n(self) -> int:
        return self._factors.shape[0]

    @property
    def factors(self) -> np.ndarray:
        return self._factors

    def __getitem__(self, rc: tuple[int, int]) -> float:
        return float(self._factors[rc])

    def __eq__(self, other) -> bool:
        return isinstance(other, SiteGrid) and np.array_equal(self._factors, other._factors)

    def __hash__(self):
        return hash(self._factors.tobytes())

    def __repr__(self) -> str:
        return f"SiteGrid(n={self.n})"

    def distinct_factors(self) -> list[float]:
        return sorted({float(x) for x in self._factors.ravel()})

    def tolist(self) -> list[list[float]]:
        return self._factors.tolist()


def default_site_grid(n: int) -> SiteGrid:
    """River along the anti-diagonal: factor 2 on it, 1 next to it, 0.5 elsewhere."""
    if isinstance(n, bool) or not isinstance(n, (int, np.integer)) or n < 1:
        raise ModelError(f"grid side must be an integer >= 1, got {n!r}")
    return SiteGrid([[_site_factor(r, c, n) for c in range(n)] for r in range(n)])


class CityDesign:
    """An ``n x n`` grid of barangay genomes backed by a read-only gene array."""

    __slots__ = ("_genes",)

    def __init__(self, genes):
        arr = np.array(genes)
        if arr.ndim != 3 or arr.shape[0] != arr.shape[1] or arr.shape[0] == 0 \
                or arr.shape[2] != N_TRAITS:
            raise ModelError(f"design genes must have shape (n, n, 7), got {arr.shape}")
        if arr.dtype.kind not in "iu":
            if arr.dtype.kind == "b" or not np.all(np.equal(np.mod(arr, 1), 0)):
                raise ModelError("gene values must be integers")
        if np.any(arr < 0) or np.any(arr > MAX_GENE):
            raise ModelError("gene values must lie in 0..3")
        arr = arr.astype(np.uint8)
        arr.flags.writeable = False
        self._genes = arr

    @classmethod
    def zeros(cls, n: int) -> "CityDesign":
        return cls(np.zeros((n, n, N_TRAITS), dtype=np.uint8))

    @classmethod
    def from_genomes(cls, cells: Sequence[Sequence[BarangayGenome]]) -> "CityDesign":
        return cls([[list(g.genes) for g in row] for row in cells])

    @property
    def n(self) -> int:
        return self._genes.shape[0]

    @property
    def genes(self) -> np.ndarray:
        return self._genes

    def cell(self, r: int, c: int) -> BarangayGenome:
        return BarangayGenome(tuple(int(g) for g in self._genes[r, c]))

    def cells(self) -> Iterable[tuple[int, int, BarangayGenome]]:
        for r in range(self.n):
            for c in range(self.n):
                yield r, c, self.cell(r, c)

    def trait_grid(self, trait: Trait | int) -> np.ndarray:
        return self._genes[:, :, int(trait)]

    def with_cell(self, r: int, c: int, genome: BarangayGenome) -> "CityDesign":
        arr = self._genes.copy()
        arr[r, c] = genome.genes
        return CityDesign(arr)

    def __eq__(self, other) -> bool:
        return isinstance(other, CityDesign) and np.array_equal(self._genes, other._genes)

    def __hash__(self):
        return hash((self.n, self._genes.tobytes()))

    def __repr__(self) -> str:
        return f"CityDesign(n={self.n})"

    def to_json(self) -> dict:
        return {"n": self.n, "cells": self._genes.astype(int).tolist()}

    @classmethod
    def from_json(cls, doc: dict) -> "CityDesign":
        try:
            n = doc["n"]
            cells = doc["cells"]
        except (KeyError, TypeError) as exc:
            raise ModelError(f"design document needs 'n' and 'cells': {exc}") from None
        for row in cells:
            for cell in row:
                for g in cell:
                    _check_gene(g)
        design = cls(cells)
        if design.n != n:
            raise ModelError(f"design declares n={n} but cells are {design.n}x{design.n}")
        return design


def n_bits(n: int) -> int:
    return n * n * N_TRAITS * GENE_BITS


def encode_design(city: CityDesign) -> str:
    """Row-major cells, A..G traits, each gene as two bits MSB first."""
    flat = city.genes.ravel()
    bits = np.empty(flat.size * 2, dtype=np.uint8)
    bits[0::2] = flat >> 1
    bits[1::2] = flat & 1
    return (bits + ord("0")).tobytes().decode("ascii")


def decode_design(bits: str, n: int) -> CityDesign:
    if n < 1:
        raise ModelError(f"grid side must be >= 1, got {n}")
    if len(bits) != n_bits(n):
        raise ModelError(f"encoding has {len(bits)} bits, expected {n_bits(n)} for n={n}")
    raw = np.frombuffer(bits.encode("ascii"), dtype=np.uint8) - ord("0")
    if np.any(raw > 1):
        raise ModelError("encoding may only contain '0' and '1'")
    genes = (raw[0::2] << 1) | raw[1::2]
    return CityDesign(genes.reshape(n, n, N_TRAITS))


def make_rng(seed: int) -> np.random.Generator:
    """The package's pseudorandom source: numpy PCG64 seeded with an unsigned 64-bit integer."""
    if isinstance(seed, bool) or not isinstance(seed, (int, np.integer)) \
            or not 0 <= seed < 2 ** 64:
        raise ModelError(f"seed must be an unsigned 64-bit integer, got {seed!r}")
    return np.random.Generator(np.random.PCG64(int(seed)))


def random_genes(rng: np.random.Generator, n: int) -> np.ndarray:
    return rng.integers(0, MAX_GENE + 1, size=(n, n, N_TRAITS), dtype=np.uint8)


def random_design(seed: int, n: int) -> CityDesign:
    if n < 1:
        raise ModelError(f"grid side must be >= 1, got {n}")
    return CityDesign(random_genes(make_rng(seed), n))

