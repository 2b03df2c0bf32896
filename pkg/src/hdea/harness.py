"""Comparative experiment grid, summary statistics, and landscape diagnostics.

An experiment sweeps k over a grid of (landscape, population-seed) cells,
runs every requested algorithm on the same landscape instances with
independent population seeds, and records one row per run. Summaries group
the rows per (k, algorithm), compare the two algorithms per k with Welch's
unequal-variance t-test, and flag significance at p < 0.05.
"""

from __future__ import annotations

import hashlib
import math
import multiprocessing
from dataclasses import dataclass, fields
from functools import lru_cache
from pathlib import Path
from typing import NamedTuple, Optional

from . import evolution, nk, rbn
from .evolution import ALGORITHMS, HDEA, Problem, RunSettings

TASKS = ("nk", "rbnk")
RESULTS_HEADER = (
    "task,n,k,r,b,algorithm,landscape_id,run_id,"
    "generations,evaluations,best_fitness"
)
ALPHA = 0.05


def derive_seed(*parts) -> int:
    """Stable 64-bit seed from arbitrary labels and integers.

    Uses a keyed hash of the parts' repr, so derived streams never depend on
    process, platform, or interpreter hash randomization.
    """
    digest = hashlib.blake2b(
        repr(tuple(parts)).encode("utf-8"), digest_size=8
    ).digest()
    return int.from_bytes(digest, "big")


# ---------------------------------------------------------------------------
# configuration


@dataclass(frozen=True)
class ExperimentConfig:
    """Full parameterization of a comparison study."""

    task: str = "nk"
    n: int = 50
    k_sweep: tuple = (0, 2, 4, 6, 8, 10)
    r: int = 100
    b: int = 2
    t_cycles: int = 50
    trials: int = 10
    pop_size: int = 50
    hdea_generations: int = 20000
    algorithms: tuple = (HDEA, "hea")
    crossover: bool = True
    replacement: str = "unconditional"
    landscapes: int = 10
    runs_per_landscape: int = 10
    master_seed: int = 1

    @property
    def hea_generations(self) -> int:
        """The haploid baseline runs twice as many generations (one
        evaluation each) so both algorithms spend 2G evaluations."""
        return 2 * self.hdea_generations

    def validate(self) -> None:
        if self.task not in TASKS:
            raise ValueError(f"task must be one of {TASKS}, got {self.task!r}")
        if self.n < 1:
            raise ValueError("n must be positive")
        if not self.k_sweep:
            raise ValueError("k_sweep may not be empty")
        for k in self.k_sweep:
            if k < 0 or k > self.n - 1:
                raise ValueError(f"k={k} must satisfy 0 <= k <= n-1={self.n - 1}")
        if self.task == "rbnk":
            if self.n > self.r:
                raise ValueError(f"n={self.n} traits cannot fit in r={self.r} nodes")
            if self.b < 1 or self.b > self.r:
                raise ValueError(f"b={self.b} must satisfy 1 <= b <= r={self.r}")
            if self.t_cycles < 1:
                raise ValueError("t_cycles must be positive")
            if self.trials < 1:
                raise ValueError("trials must be positive")
        if self.pop_size < 1:
            raise ValueError("pop_size must be positive")
        if self.hdea_generations < 0:
            raise ValueError("hdea_generations must be >= 0")
        if not self.algorithms:
            raise ValueError("algorithms may not be empty")
        for algorithm in self.algorithms:
            if algorithm not in ALGORITHMS:
                raise ValueError(f"unknown algorithm {algorithm!r}")
        if self.replacement not in ("unconditional", "if_better"):
            raise ValueError(
                f"replacement must be 'unconditional' or 'if_better',"
                f" got {self.replacement!r}"
            )
        if self.landscapes < 1:
            raise ValueError("landscapes must be positive")
        if self.runs_per_landscape < 1:
            raise ValueError("runs_per_landscape must be positive")


_LIST_FIELDS = {"k_sweep": int, "algorithms": str}
_BOOL_FIELDS = {"crossover"}
_STR_FIELDS = {"task", "replacement"}


def config_to_text(config: ExperimentConfig) -> str:
    """Flat key-value rendering with every field explicit."""
    lines = []
    for f in fields(config):
        value = getattr(config, f.name)
        if f.name in _LIST_FIELDS:
            lines.append(f"{f.name} " + " ".join(str(v) for v in value))
        elif f.name in _BOOL_FIELDS:
            lines.append(f"{f.name} {'true' if value else 'false'}")
        else:
            lines.append(f"{f.name} {value}")
    return "\n".join(lines) + "\n"


def config_from_text(text: str) -> ExperimentConfig:
    """Parse the flat key-value format; unknown or malformed keys raise a
    ValueError naming the field."""
    known = {f.name for f in fields(ExperimentConfig)}
    values = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        key, _, rest = line.partition(" ")
        if key not in known:
            raise ValueError(f"line {lineno}: unknown config field {key!r}")
        rest = rest.strip()
        try:
            if key in _LIST_FIELDS:
                cast = _LIST_FIELDS[key]
                values[key] = tuple(cast(v) for v in rest.split())
            elif key in _BOOL_FIELDS:
                if rest not in ("true", "false"):
                    raise ValueError("expected true or false")
                values[key] = rest == "true"
            elif key in _STR_FIELDS:
                values[key] = rest
            else:
                values[key] = int(rest)
        except ValueError as exc:
            raise ValueError(f"config field {key!r}: {exc}") from None
    config = ExperimentConfig(**values)
    config.validate()
    return config


# ---------------------------------------------------------------------------
# run records


@dataclass(frozen=True)
class RunRecord:
    """One row of an experiment: grid coordinates plus the run outcome."""

    task: str
    n: int
    k: int
    r: int
    b: int
    algorithm: str
    landscape_id: int
    run_id: int
    generations: int
    evaluations: int
    best_fitness: float

    def sort_key(self):
        return (self.k, self.landscape_id, self.run_id, self.algorithm)


def write_results(records, path) -> None:
    """Delimited text table, fitness at 17 significant digits."""
    lines = [RESULTS_HEADER]
    for rec in records:
        lines.append(
            f"{rec.task},{rec.n},{rec.k},{rec.r},{rec.b},{rec.algorithm},"
            f"{rec.landscape_id},{rec.run_id},{rec.generations},"
            f"{rec.evaluations},{rec.best_fitness:.17g}"
        )
    Path(path).write_text("\n".join(lines) + "\n")


def read_results(path) -> list:
    """Parse a results table; malformed rows raise with their row number."""
    lines = Path(path).read_text().splitlines()
    if not lines or lines[0] != RESULTS_HEADER:
        raise ValueError(f"{path}: missing or wrong header row")
    records = []
    for rowno, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        parts = line.split(",")
        if len(parts) != 11:
            raise ValueError(f"{path}: row {rowno}: expected 11 fields")
        try:
            records.append(
                RunRecord(
                    task=parts[0],
                    n=int(parts[1]),
                    k=int(parts[2]),
                    r=int(parts[3]),
                    b=int(parts[4]),
                    algorithm=parts[5],
                    landscape_id=int(parts[6]),
                    run_id=int(parts[7]),
                    generations=int(parts[8]),
                    evaluations=int(parts[9]),
                    best_fitness=float(parts[10]),
                )
            )
        except ValueError as exc:
            raise ValueError(f"{path}: row {rowno}: {exc}") from None
    return records


# ---------------------------------------------------------------------------
# problems and grid execution


def nk_problem(landscape: nk.NkLandscape) -> Problem:
    """Binary-genome task scored directly on an NK landscape."""
    n = landscape.n
    return Problem(
        spawn=lambda rng: nk.random_bit_genome(n, rng),
        evaluate=lambda genome, rng: landscape.evaluate(genome),
    )


def rbnk_problem(
    landscape: nk.NkLandscape,
    traits: rbn.TraitMap,
    r: int,
    b: int,
    t_cycles: int,
    trials: int,
) -> Problem:
    """Network-genome task scored by trait readout on an NK landscape.

    Spawned networks derive their wiring from the run's stream; evaluation
    start states draw from the same stream, so both algorithms face
    identically distributed trial conditions.
    """

    def spawn(rng):
        return rbn.generate_rbn(r, b, rng.getrandbits(64))

    def evaluate(genome, rng):
        return rbn.evaluate_rbnk(genome, landscape, traits, t_cycles, trials, rng)

    return Problem(spawn=spawn, evaluate=evaluate)


def landscape_seed(master_seed: int, k: int, landscape_id: int) -> int:
    return derive_seed(master_seed, "landscape", k, landscape_id)


def trait_seed(master_seed: int, k: int, landscape_id: int) -> int:
    return derive_seed(master_seed, "traits", k, landscape_id)


def run_seed(
    master_seed: int, k: int, landscape_id: int, run_id: int, algorithm: str
) -> int:
    return derive_seed(master_seed, "run", k, landscape_id, run_id, algorithm)


@lru_cache(maxsize=32)
def _cached_instance(task, n, k, land_seed, r, b, tr_seed):
    """Per-process cache: workers rebuild each landscape at most once."""
    landscape = nk.generate_nk(n, k, land_seed)
    traits = rbn.assign_traits(r, n, tr_seed) if task == "rbnk" else None
    return landscape, traits


def _run_cell(cell) -> RunRecord:
    """Execute one (k, landscape, run, algorithm) grid cell."""
    config, k, landscape_id, run_id, algorithm = cell
    landscape, traits = _cached_instance(
        config.task,
        config.n,
        k,
        landscape_seed(config.master_seed, k, landscape_id),
        config.r,
        config.b,
        trait_seed(config.master_seed, k, landscape_id),
    )
    if config.task == "rbnk":
        problem = rbnk_problem(
            landscape, traits, config.r, config.b, config.t_cycles, config.trials
        )
        rec_r, rec_b = config.r, config.b
    else:
        problem = nk_problem(landscape)
        rec_r, rec_b = 0, 0
    generations = (
        config.hdea_generations if algorithm == HDEA else config.hea_generations
    )
    settings = RunSettings(
        algorithm=algorithm,
        generations=generations,
        pop_size=config.pop_size,
        crossover=config.crossover,
        replace_if_better_only=(config.replacement == "if_better"),
    )
    seed = run_seed(config.master_seed, k, landscape_id, run_id, algorithm)
    try:
        trace = evolution.run(settings, problem, seed)
    except Exception as exc:
        raise RuntimeError(
            f"run failed at k={k} landscape={landscape_id} run={run_id}"
            f" algorithm={algorithm}: {exc}"
        ) from exc
    return RunRecord(
        task=config.task,
        n=config.n,
        k=k,
        r=rec_r,
        b=rec_b,
        algorithm=algorithm,
        landscape_id=landscape_id,
        run_id=run_id,
        generations=generations,
        evaluations=trace.evaluations,
        best_fitness=trace.best_fitness,
    )


def experiment_cells(config: ExperimentConfig) -> list:
    return [
        (config, k, landscape_id, run_id, algorithm)
        for k in config.k_sweep
        for landscape_id in range(config.landscapes)
        for run_id in range(config.runs_per_landscape)
        for algorithm in config.algorithms
    ]


def run_experiment(
    config: ExperimentConfig, workers: int = 1, progress=None
) -> list:
    """Execute the full grid deterministically; returns sorted RunRecords.

    Cells are independent, so any worker count yields the identical record
    list: every cell's stream is derived from the master seed and records
    are sorted canonically before returning.
    """
    config.validate()
    cells = experiment_cells(config)
    records = []
    if workers <= 1:
        for cell in cells:
            rec = _run_cell(cell)
            if progress is not None:
                progress(rec)
            records.append(rec)
    else:
        with multiprocessing.Pool(workers) as pool:
            for rec in pool.imap_unordered(_run_cell, cells):
                if progress is not None:
                    progress(rec)
                records.append(rec)
    records.sort(key=RunRecord.sort_key)
    return records


# ---------------------------------------------------------------------------
# Welch's t-test


class WelchResult(NamedTuple):
    t: float
    df: float
    p: float


def _beta_continued_fraction(x: float, a: float, b: float) -> float:
    """Continued-fraction kernel of the regularized incomplete beta
    (modified Lentz iteration)."""
    tiny = 1e-300
    qab = a + b
    qap = a + 1.0
    qam = a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if abs(d) < tiny:
        d = tiny
    d = 1.0 / d
    h = d
    for m in range(1, 300):
        m2 = 2 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        if abs(d) < tiny:
            d = tiny
        c = 1.0 + aa / c
        if abs(c) < tiny:
            c = tiny
        d = 1.0 / d
        h *= d * c
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        if abs(d) < tiny:
            d = tiny
        c = 1.0 + aa / c
        if abs(c) < tiny:
            c = tiny
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < 1e-15:
            break
    return h


def regularized_incomplete_beta(x: float, a: float, b: float) -> float:
    """I_x(a, b) for x in [0, 1], a > 0, b > 0."""
    if x <= 0.0:
        return 0.0
    if x >= 1.0:
        return 1.0
    ln_front = (
        math.lgamma(a + b)
        - math.lgamma(a)
        - math.lgamma(b)
        + a * math.log(x)
        + b * math.log1p(-x)
    )
    front = math.exp(ln_front)
    if x < (a + 1.0) / (a + b + 2.0):
        return front * _beta_continued_fraction(x, a, b) / a
    return 1.0 - front * _beta_continued_fraction(1.0 - x, b, a) / b


def student_t_two_tailed_p(t: float, df: float) -> float:
    """Two-tailed tail probability of Student's t via I_x(df/2, 1/2)."""
    if math.isinf(t):
        return 0.0
    if t == 0.0:
        return 1.0
    x = df / (df + t * t)
    return regularized_incomplete_beta(x, 0.5 * df, 0.5)


def welch_t_test(a, b) -> WelchResult:
    """Welch's unequal-variance two-sample t-test, two-tailed.

    t is positive when the first sample's mean is larger. Degrees of freedom
    follow the Welch-Satterthwaite approximation. When both samples are
    constant the test degenerates: p = 1 for equal means (no evidence), p = 0
    with an infinite t otherwise.
    """
    na, nb = len(a), len(b)
    if na < 2 or nb < 2:
        raise ValueError("each sample needs at least two observations")
    ma = sum(a) / na
    mb = sum(b) / nb
    va = sum((x - ma) ** 2 for x in a) / (na - 1)
    vb = sum((x - mb) ** 2 for x in b) / (nb - 1)
    sa = va / na
    sb = vb / nb
    pooled = sa + sb
    if pooled == 0.0:
        if ma == mb:
            return WelchResult(0.0, 0.0, 1.0)
        return WelchResult(math.copysign(math.inf, ma - mb), 0.0, 0.0)
    t = (ma - mb) / math.sqrt(pooled)
    df = pooled * pooled / (sa * sa / (na - 1) + sb * sb / (nb - 1))
    return WelchResult(t, df, student_t_two_tailed_p(t, df))


# ---------------------------------------------------------------------------
# summaries


@dataclass(frozen=True)
class CellSummary:
    """Per (k, algorithm) statistics of best fitness over the cell's runs."""

    k: int
    algorithm: str
    count: int
    mean: float
    fit_max: float
    fit_min: float


@dataclass(frozen=True)
class PairTest:
    """Welch comparison of the two algorithms' samples at one k.

    ``comparable`` is False when either sample is missing or too small to
    test; t is oriented so positive favors the haploid-diploid scheme.
    """

    k: int
    comparable: bool
    t: Optional[float] = None
    df: Optional[float] = None
    p: Optional[float] = None
    significant: bool = False


@dataclass(frozen=True)
class ComparisonSummary:
    cells: tuple
    tests: tuple


def summarize(records) -> ComparisonSummary:
    """Group records per (k, algorithm) and test hdea against hea per k."""
    if not records:
        raise ValueError("no records to summarize")
    samples = {}
    for rec in records:
        samples.setdefault((rec.k, rec.algorithm), []).append(rec.best_fitness)
    cells = tuple(
        CellSummary(
            k=k,
            algorithm=algorithm,
            count=len(vals),
            mean=sum(vals) / len(vals),
            fit_max=max(vals),
            fit_min=min(vals),
        )
        for (k, algorithm), vals in sorted(samples.items())
    )
    tests = []
    for k in sorted({key[0] for key in samples}):
        a = samples.get((k, "hdea"))
        b = samples.get((k, "hea"))
        if a is None or b is None or len(a) < 2 or len(b) < 2:
            tests.append(PairTest(k=k, comparable=False))
            continue
        t, df, p = welch_t_test(a, b)
        tests.append(
            PairTest(k=k, comparable=True, t=t, df=df, p=p, significant=p < ALPHA)
        )
    return ComparisonSummary(cells=cells, tests=tuple(tests))


def format_summary(summary: ComparisonSummary) -> str:
    lines = ["comparison-summary"]
    lines.append("cell k algorithm count mean max min")
    for c in summary.cells:
        lines.append(
            f"cell {c.k} {c.algorithm} {c.count} "
            f"{c.mean:.17g} {c.fit_max:.17g} {c.fit_min:.17g}"
        )
    lines.append("test k t df p significant")
    for t in summary.tests:
        if not t.comparable:
            lines.append(f"test {t.k} incomparable")
        else:
            flag = "yes" if t.significant else "no"
            lines.append(
                f"test {t.k} {t.t:.17g} {t.df:.17g} {t.p:.17g} {flag}"
            )
    return "\n".join(lines) + "\n"


def write_summary(summary: ComparisonSummary, path) -> None:
    Path(path).write_text(format_summary(summary))


def read_summary(path) -> ComparisonSummary:
    lines = Path(path).read_text().splitlines()
    if not lines or lines[0].strip() != "comparison-summary":
        raise ValueError(f"{path}: not a comparison-summary file")
    cells = []
    tests = []
    for lineno, line in enumerate(lines[1:], start=2):
        parts = line.split()
        if not parts:
            continue
        try:
            if parts[0] == "cell" and parts[1] != "k":
                cells.append(
                    CellSummary(
                        k=int(parts[1]),
                        algorithm=parts[2],
                        count=int(parts[3]),
                        mean=float(parts[4]),
                        fit_max=float(parts[5]),
                        fit_min=float(parts[6]),
                    )
                )
            elif parts[0] == "test" and parts[1] != "k":
                if parts[2] == "incomparable":
                    tests.append(PairTest(k=int(parts[1]), comparable=False))
                else:
                    tests.append(
                        PairTest(
                            k=int(parts[1]),
                            comparable=True,
                            t=float(parts[2]),
                            df=float(parts[3]),
                            p=float(parts[4]),
                            significant=parts[5] == "yes",
                        )
                    )
        except (IndexError, ValueError) as exc:
            raise ValueError(f"{path}: line {lineno}: {exc}") from None
    return ComparisonSummary(cells=tuple(cells), tests=tuple(tests))


# ---------------------------------------------------------------------------
# effective-landscape diagnostic


def effective_landscape(landscape: nk.NkLandscape, pairing) -> dict:
    """Fitness each genome is attributed when always paired per ``pairing``.

    ``pairing`` maps every genome code (locus 0 as most significant bit) to
    its partner's code; the attributed value is the mean of the two raw
    fitnesses, i.e. the surface selection actually sees under pairing.
    Exhaustive, so n is capped at 16.
    """
    n = landscape.n
    if n > 16:
        raise ValueError(f"effective landscape is exhaustive; n={n} > 16")
    total = 1 << n
    raw = {}
    for code in range(total):
        raw[code] = landscape.evaluate(nk.bits_from_int(code, n))
    missing = [code for code in range(total) if code not in pairing]
    if missing:
        raise ValueError(
            f"pairing must cover all {total} genomes; missing {missing[0]}"
        )
    effective = {}
    for code in range(total):
        partner = pairing[code]
        if partner not in raw:
            raise ValueError(f"pairing target {partner} out of range")
        effective[code] = 0.5 * (raw[code] + raw[partner])
    return effective
