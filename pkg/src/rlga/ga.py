"""Binary-genome genetic algorithm operators.

Genomes are boolean numpy vectors over the candidate positions; a population
is a 2-D boolean array with one genome per row.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

CROSSOVER_KINDS = ("single_point", "two_points", "uniform", "scattered")

STREAM_NAMES = ("init", "selection", "crossover", "mutation", "agent")


class RngStreams:
    """Independent named generators fanned out from one master seed.

    Each name gets its own child ``SeedSequence``, so drawing from one stream
    never shifts another. That keeps GA histories identical whether or not a
    Q-learning agent is consuming the ``agent`` stream.
    """

    def __init__(self, seed: int):
        self.seed = int(seed)
        for k, name in enumerate(STREAM_NAMES):
            ss = np.random.SeedSequence(self.seed, spawn_key=(k,))
            setattr(self, name, np.random.Generator(np.random.PCG64(ss)))


@dataclass(frozen=True)
class GAParams:
    population_size: int = 5
    parents_mating: int = 2
    crossover_kind: str = "single_point"
    mutation_percent: float = 4.0

    def __post_init__(self):
        if self.population_size < 2:
            raise ValueError("population size must be at least 2")
        if not 2 <= self.parents_mating <= self.population_size:
            raise ValueError("parents mating must lie in [2, population size]")
        if self.crossover_kind not in CROSSOVER_KINDS:
            raise ValueError(f"unknown crossover kind {self.crossover_kind!r}")
        if self.mutation_percent < 0:
            raise ValueError("mutation percent must be non-negative")


def init_population(n_genes: int, population_size: int, rng: np.random.Generator) -> np.ndarray:
    """Random population; every gene is on with probability 1/2."""
    if n_genes < 1 or population_size < 2:
        raise ValueError("need at least one gene and two individuals")
    return rng.random((population_size, n_genes)) < 0.5


def select_parents(fitnesses, parents_mating: int) -> np.ndarray:
    """Indices of the ``parents_mating`` fittest individuals, best first.

    Ties go to the lower population index.
    """
    f = np.asarray(fitnesses, dtype=float)
    if parents_mating > len(f):
        raise ValueError("cannot select more parents than individuals")
    return np.argsort(-f, kind="stable")[:parents_mating]


def crossover(a, b, kind: str, rng: np.random.Generator) -> tuple[np.ndarray, np.ndarray]:
    """Two children from parents ``a`` and ``b``.

    ``uniform`` and ``scattered`` both pick each gene from either parent with
    probability 1/2; they differ only in how the mask is drawn.
    """
    a = np.asarray(a, dtype=bool)
    b = np.asarray(b, dtype=bool)
    if a.shape != b.shape:
        raise ValueError("parents must have equal length")
    n = a.size
    if kind == "single_point" or (kind == "two_points" and n < 3):
        if n < 2:
            return a.copy(), b.copy()
        cut = int(rng.integers(1, n))
        return np.concatenate([a[:cut], b[cut:]]), np.concatenate([b[:cut], a[cut:]])
    if kind == "two_points":
        lo, hi = np.sort(rng.choice(np.arange(1, n), size=2, replace=False))
        c1, c2 = a.copy(), b.copy()
        c1[lo:hi], c2[lo:hi] = b[lo:hi], a[lo:hi]
        return c1, c2
    if kind == "uniform":
        mask = rng.random(n) < 0.5
    elif kind == "scattered":
        mask = rng.integers(0, 2, size=n).astype(bool)
    else:
        raise ValueError(f"unknown crossover kind {kind!r}")
    return np.where(mask, a, b), np.where(mask, b, a)


def mutation_count(n_genes: int, mutation_percent: float) -> int:
    """Number of flipped genes: the rounded percentage, at least one, at most all."""
    return min(n_genes, max(1, int(math.floor(mutation_percent / 100.0 * n_genes + 0.5))))


def mutate(genome, mutation_percent: float, rng: np.random.Generator) -> np.ndarray:
    """Flip ``mutation_count`` distinct, uniformly chosen genes."""
    g = np.array(genome, dtype=bool)
    if mutation_percent < 0:
        raise ValueError("mutation percent must be non-negative")
    idx = rng.choice(g.size, size=mutation_count(g.size, mutation_percent), replace=False)
    g[idx] = ~g[idx]
    return g


def make_offspring(parents: np.ndarray, n_children: int, params: GAParams, streams: RngStreams) -> np.ndarray:
    """Crossover random parent pairs (drawn with replacement), then mutate."""
    children = []
    while len(children) < n_children:
        i, j = streams.selection.integers(len(parents), size=2)
        c1, c2 = crossover(parents[i], parents[j], params.crossover_kind, streams.crossover)
        children.append(c1)
        if len(children) < n_children:
            children.append(c2)
    children = [mutate(c, params.mutation_percent, streams.mutation) for c in children]
    if not children:
        return np.zeros((0, parents.shape[1]), dtype=bool)
    return np.array(children)


def evolve_generation(population, fitnesses, params: GAParams, streams: RngStreams) -> tuple[np.ndarray, np.ndarray]:
    """One steady-state generation.

    The ``parents_mating`` best individuals survive unchanged in the first
    rows; the rest of the population is refilled with mutated offspring.
    Returns the new population and the indices (into the old population) of
    the surviving parents, so callers can reuse their cached fitness.
    """
    population = np.asarray(population, dtype=bool)
    idx = select_parents(fitnesses, params.parents_mating)
    parents = population[idx]
    kids = make_offspring(parents, params.population_size - params.parents_mating, params, streams)
    return np.vstack([parents, kids]), idx
