"""Command-line front end: landscape generation, experiments, comparison, plots.

Subcommands: gen-landscape, run, compare, plot. Every command is
deterministic given its inputs; data goes to the named output files, progress
chatter to stderr. The environment variable HDEA_SEED, when set, overrides
the master seed of any experiment config.
"""

from __future__ import annotations

import argparse
import os
import sys
from dataclasses import dataclass, replace
from pathlib import Path

from . import harness, nk, rbn
from .evolution import HDEA


def _positive(name, value):
    if value < 1:
        raise ValueError(f"{name} must be positive, got {value}")


def cmd_gen_landscape(args) -> int:
    _positive("--n", args.n)
    if args.k < 0 or args.k > args.n - 1:
        raise ValueError(f"--k must satisfy 0 <= k <= n-1={args.n - 1}, got {args.k}")
    if args.task == "rbnk":
        _positive("--r", args.r)
        if args.b < 1 or args.b > args.r:
            raise ValueError(f"--b must satisfy 1 <= b <= r={args.r}, got {args.b}")
        if args.n > args.r:
            raise ValueError(f"--n traits must fit in --r nodes ({args.n} > {args.r})")
    landscape = nk.generate_nk(args.n, args.k, args.seed)
    if args.task == "rbnk":
        traits = rbn.assign_traits(
            args.r, args.n, harness.derive_seed(args.seed, "traits")
        )
        traits_out = args.traits_out or args.out + ".traits"
        rbn.save_traits(traits, traits_out)
    nk.save_landscape(landscape, args.out)
    return 0


def _load_config(path) -> harness.ExperimentConfig:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ValueError(f"cannot read config {path}: {exc}") from None
    try:
        config = harness.config_from_text(text)
    except ValueError as exc:
        raise ValueError(f"{path}: {exc}") from None
    env_seed = os.environ.get("HDEA_SEED")
    if env_seed is not None:
        try:
            config = replace(config, master_seed=int(env_seed))
        except ValueError:
            raise ValueError(f"HDEA_SEED must be an integer, got {env_seed!r}")
    return config


def _evaluation_budget(config: harness.ExperimentConfig) -> int:
    per_run = {
        HDEA: 2 * config.pop_size + 2 * config.hdea_generations,
        "hea": config.pop_size + config.hea_generations,
    }
    cells_per_algorithm = (
        len(config.k_sweep) * config.landscapes * config.runs_per_landscape
    )
    return sum(per_run[a] * cells_per_algorithm for a in config.algorithms)


def cmd_run(args) -> int:
    config = _load_config(args.config)
    cells = harness.experiment_cells(config)
    if args.dry_run:
        print(f"grid cells: {len(cells)}")
        print(f"evaluation budget: {_evaluation_budget(config)}")
        return 0
    if args.emit_config:
        Path(args.emit_config).write_text(harness.config_to_text(config))
    progress = None
    if args.verbose:

        def progress(rec):
            print(
                f"k={rec.k} landscape={rec.landscape_id} run={rec.run_id} "
                f"{rec.algorithm} best={rec.best_fitness:.6f} "
                f"evaluations={rec.evaluations}",
                file=sys.stderr,
            )

    records = harness.run_experiment(config, workers=args.workers, progress=progress)
    harness.write_results(records, args.out)
    return 0


def cmd_compare(args) -> int:
    records = harness.read_results(args.results)
    summary = harness.summarize(records)
    harness.write_summary(summary, args.out)
    return 0


@dataclass(frozen=True)
class PlotSpec:
    """One mean-with-range series per algorithm over the k sweep."""

    k_values: tuple
    series: tuple  # (label, means, maxes, mins), aligned with k_values
    title: str
    x_label: str = "K"
    y_label: str = "best fitness"


def build_plot_spec(summary: harness.ComparisonSummary, title: str) -> PlotSpec:
    if not summary.cells:
        raise ValueError("summary has no cells to plot")
    by_algorithm = {}
    for cell in summary.cells:
        by_algorithm.setdefault(cell.algorithm, {})[cell.k] = cell
    k_values = tuple(sorted({cell.k for cell in summary.cells}))
    series = []
    for algorithm in sorted(by_algorithm):
        cells = by_algorithm[algorithm]
        if set(cells) != set(k_values):
            raise ValueError(
                f"algorithm {algorithm!r} does not cover every k in the summary"
            )
        series.append(
            (
                algorithm,
                tuple(cells[k].mean for k in k_values),
                tuple(cells[k].fit_max for k in k_values),
                tuple(cells[k].fit_min for k in k_values),
            )
        )
    return PlotSpec(k_values=k_values, series=tuple(series), title=title)


_SERIES_COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd")


def render_svg(spec: PlotSpec) -> str:
    """Emit the comparison chart as standalone SVG markup."""
    width, height = 720, 480
    left, right, top, bottom = 70.0, 150.0, 50.0, 60.0
    x_lo, x_hi = left, width - right
    y_lo, y_hi = height - bottom, top
    ks = spec.k_values
    kmin, kmax = float(min(ks)), float(max(ks))
    if kmin == kmax:
        kmin -= 1.0
        kmax += 1.0
    vmin = min(min(mins) for _, _, _, mins in spec.series)
    vmax = max(max(maxes) for _, _, maxes, _ in spec.series)
    pad = 0.05 * (vmax - vmin)
    if pad == 0.0:
        pad = 0.05
    vmin -= pad
    vmax += pad

    def sx(k):
        return x_lo + (k - kmin) / (kmax - kmin) * (x_hi - x_lo)

    def sy(v):
        return y_lo - (v - vmin) / (vmax - vmin) * (y_lo - y_hi)

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" '
        f'height="{height}" viewBox="0 0 {width} {height}">',
        f'<rect x="0" y="0" width="{width}" height="{height}" fill="white"/>',
        f'<text x="{(x_lo + x_hi) / 2:.2f}" y="28" text-anchor="middle" '
        f'font-family="sans-serif" font-size="16">{spec.title}</text>',
        f'<line x1="{x_lo:.2f}" y1="{y_lo:.2f}" x2="{x_hi:.2f}" '
        f'y2="{y_lo:.2f}" stroke="black"/>',
        f'<line x1="{x_lo:.2f}" y1="{y_lo:.2f}" x2="{x_lo:.2f}" '
        f'y2="{y_hi:.2f}" stroke="black"/>',
    ]
    for k in ks:
        x = sx(k)
        out.append(
            f'<line x1="{x:.2f}" y1="{y_lo:.2f}" x2="{x:.2f}" '
            f'y2="{y_lo + 5:.2f}" stroke="black"/>'
        )
        out.append(
            f'<text x="{x:.2f}" y="{y_lo + 20:.2f}" text-anchor="middle" '
            f'font-family="sans-serif" font-size="12">{k}</text>'
        )
    for i in range(6):
        v = vmin + (vmax - vmin) * i / 5
        y = sy(v)
        out.append(
            f'<line x1="{x_lo - 5:.2f}" y1="{y:.2f}" x2="{x_lo:.2f}" '
            f'y2="{y:.2f}" stroke="black"/>'
        )
        out.append(
            f'<text x="{x_lo - 9:.2f}" y="{y + 4:.2f}" text-anchor="end" '
            f'font-family="sans-serif" font-size="12">{v:.4g}</text>'
        )
    out.append(
        f'<text x="{(x_lo + x_hi) / 2:.2f}" y="{height - 15}" '
        f'text-anchor="middle" font-family="sans-serif" font-size="14">'
        f"{spec.x_label}</text>"
    )
    out.append(
        f'<text x="20" y="{(y_lo + y_hi) / 2:.2f}" text-anchor="middle" '
        f'font-family="sans-serif" font-size="14" '
        f'transform="rotate(-90 20 {(y_lo + y_hi) / 2:.2f})">'
        f"{spec.y_label}</text>"
    )
    n_series = len(spec.series)
    for idx, (label, means, maxes, mins) in enumerate(spec.series):
        color = _SERIES_COLORS[idx % len(_SERIES_COLORS)]
        dx = (idx - (n_series - 1) / 2) * 8.0
        for k, hi_v, lo_v in zip(ks, maxes, mins):
            x = sx(k) + dx
            y_top, y_bot = sy(hi_v), sy(lo_v)
            out.append(
                f'<g class="errorbar" stroke="{color}">'
                f'<line x1="{x:.2f}" y1="{y_top:.2f}" x2="{x:.2f}" y2="{y_bot:.2f}"/>'
                f'<line x1="{x - 4:.2f}" y1="{y_top:.2f}" x2="{x + 4:.2f}" y2="{y_top:.2f}"/>'
                f'<line x1="{x - 4:.2f}" y1="{y_bot:.2f}" x2="{x + 4:.2f}" y2="{y_bot:.2f}"/>'
                f"</g>"
            )
        points = " ".join(
            f"{sx(k) + dx:.2f},{sy(v):.2f}" for k, v in zip(ks, means)
        )
        out.append(
            f'<polyline points="{points}" fill="none" stroke="{color}" '
            f'stroke-width="2"/>'
        )
        for k, v in zip(ks, means):
            out.append(
                f'<circle cx="{sx(k) + dx:.2f}" cy="{sy(v):.2f}" r="3.5" '
                f'fill="{color}"/>'
            )
        ly = top + 20 + idx * 20
        out.append(
            f'<line x1="{x_hi + 20:.2f}" y1="{ly:.2f}" x2="{x_hi + 50:.2f}" '
            f'y2="{ly:.2f}" stroke="{color}" stroke-width="2"/>'
        )
        out.append(
            f'<text x="{x_hi + 56:.2f}" y="{ly + 4:.2f}" '
            f'font-family="sans-serif" font-size="13">{label}</text>'
        )
    out.append("</svg>")
    return "\n".join(out) + "\n"


def cmd_plot(args) -> int:
    summary = harness.read_summary(args.summary)
    spec = build_plot_spec(summary, args.title)
    Path(args.out).write_text(render_svg(spec))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hdea",
        description="Haploid-diploid vs haploid evolutionary comparison on "
        "NK / RBNK landscapes.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen-landscape", help="generate and write a landscape")
    p.add_argument("--task", choices=("nk", "rbnk"), default="nk")
    p.add_argument("--n", type=int, required=True, help="locus / trait count")
    p.add_argument("--k", type=int, required=True, help="epistatic degree")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out", required=True, help="landscape output path")
    p.add_argument("--r", type=int, default=100, help="network size (rbnk)")
    p.add_argument("--b", type=int, default=2, help="inputs per node (rbnk)")
    p.add_argument(
        "--traits-out",
        default=None,
        help="trait-map output path (rbnk; default: <out>.traits)",
    )
    p.set_defaults(func=cmd_gen_landscape)

    p = sub.add_parser("run", help="execute an experiment config")
    p.add_argument("--config", required=True, help="experiment config file")
    p.add_argument("--out", required=True, help="results table output path")
    p.add_argument(
        "--workers",
        type=int,
        default=os.cpu_count() or 1,
        help="parallel worker processes (default: all processors)",
    )
    p.add_argument(
        "--dry-run",
        action="store_true",
        help="print grid size and evaluation budget, write nothing",
    )
    p.add_argument("--verbose", action="store_true", help="per-cell progress on stderr")
    p.add_argument(
        "--emit-config",
        default=None,
        help="also write the fully resolved config to this path",
    )
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("compare", help="summarize a results table")
    p.add_argument("--results", required=True, help="results table path")
    p.add_argument("--out", required=True, help="summary output path")
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("plot", help="render a summary as an SVG chart")
    p.add_argument("--summary", required=True, help="summary file path")
    p.add_argument("--out", required=True, help="SVG output path")
    p.add_argument("--title", default="Best fitness by landscape ruggedness")
    p.set_defaults(func=cmd_plot)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError, RuntimeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
