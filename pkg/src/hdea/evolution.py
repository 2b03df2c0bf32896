"""Steady-state evolutionary loops: haploid baseline and haploid-diploid scheme.

Both algorithms share the same machinery: binary tournament selection, one
offspring per generation, replacement of the worst member. The diploid
scheme produces two gametes (one per selected parent), evaluates both, and
attributes their mean to the offspring, so each of its generations costs two
evaluations; the haploid baseline costs one and is conventionally run for
twice as many generations to equalize the budget.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from typing import Callable, Optional

from .operators import (
    Diploid,
    Genome,
    copy_genome,
    crossover_one_point,
    gametogenesis,
    per_locus_mutation,
    point_mutation,
)

HDEA = "hdea"
HEA = "hea"
ALGORITHMS = (HDEA, HEA)


@dataclass(slots=True)
class Haploid:
    """A single-genome individual with its evaluated fitness."""

    genome: Genome
    fitness: float


class Population:
    """Fixed-size member list under steady-state replacement."""

    __slots__ = ("members",)

    def __init__(self, members):
        self.members = list(members)
        if not self.members:
            raise ValueError("population may not be empty")

    def __len__(self):
        return len(self.members)

    def __getitem__(self, i):
        return self.members[i]

    def __iter__(self):
        return iter(self.members)

    def best(self):
        return max(self.members, key=lambda m: m.fitness)

    def best_solution(self):
        """(genome, fitness) of the best single genome in the population.

        Haploid members contribute their genome directly; diploid members
        contribute each haploid separately, so the result is an actual
        evolved solution rather than an averaged score.
        """
        best_g = None
        best_f = -1.0
        for m in self.members:
            if isinstance(m, Diploid):
                if m.fitness_a > best_f:
                    best_g, best_f = m.genome_a, m.fitness_a
                if m.fitness_b > best_f:
                    best_g, best_f = m.genome_b, m.fitness_b
            elif m.fitness > best_f:
                best_g, best_f = m.genome, m.fitness
        return best_g, best_f


def tournament_select(pop: Population, rng: random.Random) -> int:
    """Binary tournament: two uniform draws with replacement, higher fitness
    wins, ties split uniformly."""
    members = pop.members
    size = len(members)
    i = rng.randrange(size)
    j = rng.randrange(size)
    fi = members[i].fitness
    fj = members[j].fitness
    if fi > fj:
        return i
    if fj > fi:
        return j
    return i if rng.random() < 0.5 else j


def replace_worst(
    pop: Population, newcomer, rng: random.Random, only_if_better: bool = False
) -> None:
    """Overwrite the minimum-fitness member (ties split uniformly).

    By default the newcomer enters unconditionally, even when it is worse
    than the current worst; with ``only_if_better`` the replacement happens
    only when the newcomer strictly improves on the worst member.
    """
    members = pop.members
    worst = 0
    worst_fit = members[0].fitness
    ties = 1
    for i in range(1, len(members)):
        f = members[i].fitness
        if f < worst_fit:
            worst_fit = f
            worst = i
            ties = 1
        elif f == worst_fit:
            # reservoir draw keeps each tied index equally likely
            ties += 1
            if rng.random() * ties < 1.0:
                worst = i
    if only_if_better and newcomer.fitness <= worst_fit:
        return
    members[worst] = newcomer


def hdea_generation(
    pop: Population,
    eval_fn: Callable[[Genome, random.Random], float],
    rng: random.Random,
    mutate=point_mutation,
    crossover: bool = True,
    only_if_better: bool = False,
) -> int:
    """One steady-state step of the haploid-diploid scheme.

    Two parents are selected independently (they may coincide); each yields
    one gamete; the offspring diploid carries both gametes, each evaluated
    separately. Returns the number of evaluations spent (always 2).
    """
    members = pop.members
    p1 = members[tournament_select(pop, rng)]
    g1 = gametogenesis(p1, rng, mutate=mutate, crossover=crossover)
    p2 = members[tournament_select(pop, rng)]
    g2 = gametogenesis(p2, rng, mutate=mutate, crossover=crossover)
    f1 = eval_fn(g1, rng)
    f2 = eval_fn(g2, rng)
    replace_worst(pop, Diploid(g1, g2, f1, f2), rng, only_if_better)
    return 2


def hea_generation(
    pop: Population,
    eval_fn: Callable[[Genome, random.Random], float],
    rng: random.Random,
    mutate=point_mutation,
    crossover: bool = True,
    only_if_better: bool = False,
) -> int:
    """One steady-state step of the traditional haploid baseline.

    With crossover: two tournament parents, one uniformly chosen child of a
    single-point cross. Without: a copy of one tournament winner. The chosen
    genome is then mutated and evaluated once. Returns 1.
    """
    members = pop.members
    if crossover:
        p1 = members[tournament_select(pop, rng)].genome
        p2 = members[tournament_select(pop, rng)].genome
        c1, c2 = crossover_one_point(p1, p2, rng)
        child = c1 if rng.random() < 0.5 else c2
    else:
        child = copy_genome(members[tournament_select(pop, rng)].genome)
    if mutate is not None:
        child = mutate(child, rng)
    fit = eval_fn(child, rng)
    replace_worst(pop, Haploid(child, fit), rng, only_if_better)
    return 1


@dataclass(frozen=True)
class Problem:
    """Task binding: how to spawn a random genome and how to score one."""

    spawn: Callable[[random.Random], Genome]
    evaluate: Callable[[Genome, random.Random], float]


@dataclass(frozen=True)
class RunSettings:
    """Parameters of one evolutionary run.

    ``generations`` is the algorithm's own count; callers equalizing budgets
    give the haploid baseline twice the diploid count.
    """

    algorithm: str
    generations: int
    pop_size: int = 50
    crossover: bool = True
    mutation: bool = True
    per_locus_mutation: bool = False
    replace_if_better_only: bool = False
    history_points: int = 1000

    def __post_init__(self):
        if self.algorithm not in ALGORITHMS:
            raise ValueError(f"unknown algorithm {self.algorithm!r}")
        if self.generations < 0:
            raise ValueError("generations must be >= 0")
        if self.pop_size < 1:
            raise ValueError("pop_size must be positive")
        if self.history_points < 1:
            raise ValueError("history_points must be positive")


@dataclass
class RunTrace:
    """Outcome of one run: budget accounting, sampled progress, final best.

    ``best_fitness`` is solution-level: the fitness of the best single
    genome in the final population. For the diploid scheme that is the best
    haploid of any member, which makes the number directly comparable with
    the haploid baseline's best individual; selection itself still acts on
    the composite.
    """

    algorithm: str
    generations: int
    evaluations: int
    best_fitness: float
    best_genomes: tuple
    history: list  # (generation, best solution fitness) samples


def _mutation_operator(settings: RunSettings):
    if not settings.mutation:
        return None
    if settings.per_locus_mutation:
        return per_locus_mutation
    return point_mutation


def init_population(
    settings: RunSettings, problem: Problem, rng: random.Random
):
    """Random evaluated population; returns (population, evaluations spent)."""
    members = []
    evals = 0
    if settings.algorithm == HDEA:
        for _ in range(settings.pop_size):
            ga = problem.spawn(rng)
            gb = problem.spawn(rng)
            fa = problem.evaluate(ga, rng)
            fb = problem.evaluate(gb, rng)
            members.append(Diploid(ga, gb, fa, fb))
            evals += 2
    else:
        for _ in range(settings.pop_size):
            g = problem.spawn(rng)
            members.append(Haploid(g, problem.evaluate(g, rng)))
            evals += 1
    return Population(members), evals


def run(
    settings: RunSettings,
    problem: Problem,
    rng,
    on_generation: Optional[Callable[[int, Population], None]] = None,
) -> RunTrace:
    """Execute one steady-state run and return its trace.

    ``rng`` may be a seed or a random.Random instance; all stochastic
    decisions of the run, including any randomness inside evaluation, draw
    from this single stream, so a seed fully determines the trace.
    """
    if not isinstance(rng, random.Random):
        rng = random.Random(rng)
    pop, evals = init_population(settings, problem, rng)
    mutate = _mutation_operator(settings)
    step_fn = hdea_generation if settings.algorithm == HDEA else hea_generation
    gens = settings.generations
    sample_every = max(1, math.ceil(gens / settings.history_points))
    history = [(0, pop.best_solution()[1])]
    for gen in range(1, gens + 1):
        evals += step_fn(
            pop,
            problem.evaluate,
            rng,
            mutate=mutate,
            crossover=settings.crossover,
            only_if_better=settings.replace_if_better_only,
        )
        if gen % sample_every == 0 or gen == gens:
            history.append((gen, pop.best_solution()[1]))
        if on_generation is not None:
            on_generation(gen, pop)
    best_genome, best_fitness = pop.best_solution()
    return RunTrace(
        algorithm=settings.algorithm,
        generations=gens,
        evaluations=evals,
        best_fitness=best_fitness,
        best_genomes=(best_genome,),
        history=history,
    )
