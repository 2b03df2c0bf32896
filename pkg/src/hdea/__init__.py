"""Haploid-diploid evolutionary algorithm on tunable NK / RBNK landscapes."""

from .evolution import (
    ALGORITHMS,
    Haploid,
    Population,
    Problem,
    RunSettings,
    RunTrace,
    hdea_generation,
    hea_generation,
    init_population,
    replace_worst,
    run,
    tournament_select,
)
from .harness import (
    ComparisonSummary,
    ExperimentConfig,
    RunRecord,
    WelchResult,
    derive_seed,
    effective_landscape,
    nk_problem,
    rbnk_problem,
    run_experiment,
    summarize,
    welch_t_test,
)
from .nk import (
    NkLandscape,
    brute_force_optimum,
    evaluate_nk,
    generate_nk,
    load_landscape,
    random_bit_genome,
    save_landscape,
)
from .operators import (
    Diploid,
    crossover_one_point,
    gametogenesis,
    mutate_bit,
    mutate_rbn,
    point_mutation,
)
from .rbn import (
    RbnGenome,
    TraitMap,
    assign_traits,
    evaluate_rbnk,
    generate_rbn,
    load_network,
    run_for,
    save_network,
    step,
)

__all__ = [
    "ALGORITHMS",
    "ComparisonSummary",
    "Diploid",
    "ExperimentConfig",
    "Haploid",
    "NkLandscape",
    "Population",
    "Problem",
    "RbnGenome",
    "RunRecord",
    "RunSettings",
    "RunTrace",
    "TraitMap",
    "WelchResult",
    "assign_traits",
    "brute_force_optimum",
    "crossover_one_point",
    "derive_seed",
    "effective_landscape",
    "evaluate_nk",
    "evaluate_rbnk",
    "gametogenesis",
    "generate_nk",
    "generate_rbn",
    "hdea_generation",
    "hea_generation",
    "init_population",
    "load_landscape",
    "load_network",
    "mutate_bit",
    "mutate_rbn",
    "nk_problem",
    "point_mutation",
    "random_bit_genome",
    "rbnk_problem",
    "replace_worst",
    "run",
    "run_experiment",
    "run_for",
    "save_landscape",
    "save_network",
    "step",
    "summarize",
    "tournament_select",
    "welch_t_test",
]
