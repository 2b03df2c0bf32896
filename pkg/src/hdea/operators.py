"""Variation operators for both genome kinds, and gamete production.

A diploid carries two haploid genomes and is attributed the mean of their two
fitnesses. At reproduction a parent copies both genomes, crosses one copy of
each over to make two recombinants, mutates all four candidates, and passes
on one of them chosen uniformly at random.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Union

import numpy as np

from .rbn import RbnGenome

Genome = Union[np.ndarray, RbnGenome]


@dataclass(slots=True)
class Diploid:
    """Two haploid genomes with their fitnesses and the averaged composite."""

    genome_a: Genome
    genome_b: Genome
    fitness_a: float
    fitness_b: float
    fitness: float = field(init=False)

    def __post_init__(self):
        if genome_length(self.genome_a) != genome_length(self.genome_b):
            raise ValueError("diploid genomes must have identical dimensions")
        self.fitness = 0.5 * (self.fitness_a + self.fitness_b)


def genome_length(genome: Genome) -> int:
    """Locus count: bits for a binary genome, nodes for a network."""
    return len(genome)


def copy_genome(genome: Genome) -> Genome:
    return genome.copy()


def genomes_equal(a: Genome, b: Genome) -> bool:
    if isinstance(a, RbnGenome) or isinstance(b, RbnGenome):
        return a == b
    return np.array_equal(a, b)


def mutate_bit(genome: np.ndarray, rng: random.Random) -> np.ndarray:
    """Copy with exactly one uniformly chosen allele flipped."""
    out = genome.copy()
    i = rng.randrange(out.shape[0])
    out[i] ^= 1
    return out


def mutate_rbn(genome: RbnGenome, rng: random.Random) -> RbnGenome:
    """Copy with one uniformly chosen node altered.

    With probability 1/2 one uniformly chosen truth-table bit of that node is
    flipped; otherwise one uniformly chosen input connection is redrawn
    uniformly from [0, r) (possibly landing on the same index).
    """
    inputs = genome.inputs.copy()
    functions = genome.functions.copy()
    r = inputs.shape[0]
    node = rng.randrange(r)
    if rng.random() < 0.5:
        j = rng.randrange(functions.shape[1])
        functions[node, j] ^= 1
    else:
        j = rng.randrange(inputs.shape[1])
        inputs[node, j] = rng.randrange(r)
    return RbnGenome(inputs, functions)


def point_mutation(genome: Genome, rng: random.Random) -> Genome:
    """One mutation event on the appropriate representation."""
    if isinstance(genome, RbnGenome):
        return mutate_rbn(genome, rng)
    return mutate_bit(genome, rng)


def per_locus_mutation(genome: Genome, rng: random.Random) -> Genome:
    """Bernoulli(1/L) mutation per locus instead of a fixed single event.

    Sensitivity-study variant: the expected mutation count per genome is
    still one, but the realized count varies.
    """
    length = genome_length(genome)
    p = 1.0 / length
    if isinstance(genome, RbnGenome):
        inputs = genome.inputs.copy()
        functions = genome.functions.copy()
        r = inputs.shape[0]
        for node in range(r):
            if rng.random() < p:
                if rng.random() < 0.5:
                    j = rng.randrange(functions.shape[1])
                    functions[node, j] ^= 1
                else:
                    j = rng.randrange(inputs.shape[1])
                    inputs[node, j] = rng.randrange(r)
        return RbnGenome(inputs, functions)
    out = genome.copy()
    for i in range(length):
        if rng.random() < p:
            out[i] ^= 1
    return out


def _splice(left: Genome, right: Genome, cut: int) -> Genome:
    if isinstance(left, RbnGenome):
        return RbnGenome(
            np.concatenate((left.inputs[:cut], right.inputs[cut:])),
            np.concatenate((left.functions[:cut], right.functions[cut:])),
        )
    return np.concatenate((left[:cut], right[cut:]))


def crossover_one_point(parent1: Genome, parent2: Genome, rng: random.Random):
    """Single-point crossover at a uniform cut in [1, L-1].

    Network genomes are cut only at node boundaries, treating each node
    (wiring plus truth table) as one atomic allele.
    """
    length = genome_length(parent1)
    if genome_length(parent2) != length:
        raise ValueError("parents must have identical dimensions")
    if length < 2:
        raise ValueError("crossover needs at least two loci")
    cut = rng.randrange(1, length)
    return _splice(parent1, parent2, cut), _splice(parent2, parent1, cut)


def gametogenesis(
    parent: Diploid,
    rng: random.Random,
    mutate=point_mutation,
    crossover: bool = True,
) -> Genome:
    """Produce one haploid gamete from a diploid parent.

    Both parental genomes are copied; one copy of each is crossed over,
    giving two recombinants sharing one cut point; the mutation operator is
    applied to all candidates; one candidate is returned, chosen uniformly.
    Pass ``mutate=None`` to disable mutation and ``crossover=False`` to
    restrict the candidates to the two plain copies.
    """
    a, b = parent.genome_a, parent.genome_b
    if crossover:
        c1, c2 = crossover_one_point(a, b, rng)
        candidates = [a, b, c1, c2]
    else:
        candidates = [a, b]
    if mutate is not None:
        candidates = [mutate(g, rng) for g in candidates]
    pick = candidates[rng.randrange(len(candidates))]
    if pick is a or pick is b:
        pick = copy_genome(pick)
    return pick
