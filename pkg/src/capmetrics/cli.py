"""Command-line toolchain over the metrics library.

Subcommands: compute, rank, trajectory, correlate, synth, validate. The
reporting commands read a corpus file, evaluate metrics, and emit any
combination of stdout tables, delimited files, and SVG figures (figures are
always written next to the delimited data carrying the same numbers).

Exit status: 0 success, 1 usage error, 2 data error. Reruns with identical
inputs produce byte-identical outputs.
"""
from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass, field as dataclass_field
from pathlib import Path
from typing import Mapping, Sequence

from . import __version__
from .analysis import (
    DEFAULT_CORRELATION_METRICS,
    FACTOR_NAMES,
    POOLED_LABEL,
    CorrelationMatrix,
    UnknownMetricError,
    YearEvaluation,
    cap_trajectory,
    evaluate_year,
    factor_correlations,
    mean_of_matrices,
    metric_correlations,
    rank_by,
    record_setters,
    sensitivity_correlations,
    top_cohorts,
    trajectory,
)
from .corpusio import CorpusFormatError, parse_corpus, read_metric_table, write_corpus
from .metrics import METRIC_NAMES, MetricsRow, metric_value, rank_citation_profile
from .model import Corpus, corpus_stats
from .report import file_digest, provenance_line, render_table, write_delimited
from .synth import SynthConfig, synth_corpus

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2

FORMATS = ("table", "delimited", "plot")
DEFAULT_SYNTH_FIELDS = "biology,computer-science,economics,physics"


class UsageError(RuntimeError):
    pass


class _Parser(argparse.ArgumentParser):
    """argparse exits 2 on bad usage; our contract reserves 2 for data errors."""

    def error(self, message: str):
        raise UsageError(message)


@dataclass
class RunConfig:
    """Validated invocation parameters, built before any computation starts."""

    command: str
    corpus: Path | None = None
    years: list[int] = dataclass_field(default_factory=list)
    year_from: int | None = None
    year_to: int | None = None
    field: str | None = None
    metrics: list[str] = dataclass_field(default_factory=list)
    top_k: int = 100
    out_dir: Path = Path(".")
    formats: tuple[str, ...] = FORMATS
    strict: bool = False
    jobs: int = 1
    external: Path | None = None

    def validate(self) -> None:
        unknown = [f for f in self.formats if f not in FORMATS]
        if unknown:
            raise UsageError(
                f"unknown format(s) {', '.join(unknown)}; valid: {', '.join(FORMATS)}"
            )
        if self.top_k < 1:
            raise UsageError("--top must be >= 1")
        if self.jobs < 1:
            raise UsageError("--jobs must be >= 1")
        if (
            self.year_from is not None
            and self.year_to is not None
            and self.year_from > self.year_to
        ):
            raise UsageError(f"--from {self.year_from} exceeds --to {self.year_to}")


def _parse_formats(text: str) -> tuple[str, ...]:
    return tuple(part.strip() for part in text.split(",") if part.strip())


def _parse_years(text: str) -> list[int]:
    try:
        return [int(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise UsageError(f"--year expects integers, got {text!r}") from None


def _parse_team_size(text: str) -> float | dict[str, float]:
    if "=" not in text:
        try:
            return float(text)
        except ValueError:
            raise UsageError(f"--team-size expects a number, got {text!r}") from None
    sizes: dict[str, float] = {}
    for part in text.split(","):
        name, _, value = part.partition("=")
        try:
            sizes[name.strip()] = float(value)
        except ValueError:
            raise UsageError(f"bad --team-size entry {part!r}") from None
    return sizes


def _load_corpus(config: RunConfig):
    if config.corpus is None:
        raise UsageError("--corpus is required")
    if not config.corpus.exists():
        raise UsageError(f"corpus file not found: {config.corpus}")
    corpus, report = parse_corpus(config.corpus, strict=config.strict)
    if report.skipped_records:
        print(
            f"warning: skipped {report.skipped_records} malformed record(s)",
            file=sys.stderr,
        )
    return corpus, report


def _default_year(corpus: Corpus) -> int:
    year = corpus.latest_citation_year
    if year is None:
        raise UsageError("corpus has no data; pass --year explicitly")
    return year


def _resolve_years(config: RunConfig, corpus: Corpus) -> list[int]:
    return config.years if config.years else [_default_year(corpus)]


def _single_year(config: RunConfig, corpus: Corpus) -> int:
    years = _resolve_years(config, corpus)
    if len(years) > 1:
        raise UsageError(f"{config.command} takes a single --year")
    return years[0]


def _author_fields(corpus: Corpus) -> dict[str, str]:
    return {a.author_id: a.field for a in corpus.authors}


def _field_scope(config: RunConfig, corpus: Corpus) -> tuple[str, ...]:
    """Fields to report on; warns when a filter matches nothing."""
    if config.field is None:
        return corpus.fields
    if config.field not in corpus.fields:
        print(f"warning: no authors in field {config.field!r}", file=sys.stderr)
        return ()
    return (config.field,)


def _external_table(config: RunConfig):
    if config.external is None:
        return None
    if not config.external.exists():
        raise UsageError(f"external metric table not found: {config.external}")
    return read_metric_table(config.external)


def _report_external_join(
    table: Mapping[tuple[str, int], Mapping[str, float]],
    evaluations: Sequence[YearEvaluation],
) -> None:
    computed = {
        (row.author_id, row.eval_year) for ev in evaluations for row in ev.metrics
    }
    unmatched_table = sum(1 for key in table if key not in computed)
    unmatched_rows = sum(1 for key in computed if key not in table)
    if unmatched_table or unmatched_rows:
        print(
            f"warning: external join left {unmatched_table} table row(s) unmatched "
            f"and {unmatched_rows} author-year(s) without external values",
            file=sys.stderr,
        )


def _external_names(rows: Sequence[MetricsRow]) -> list[str]:
    names: set[str] = set()
    for row in rows:
        names.update(row.external)
    return sorted(names)


def _ensure_out_dir(config: RunConfig) -> Path:
    config.out_dir.mkdir(parents=True, exist_ok=True)
    return config.out_dir


def _emit(
    config: RunConfig,
    name: str,
    header: Sequence[str],
    rows: Sequence[Sequence],
    provenance: str,
    title: str | None = None,
) -> None:
    if "delimited" in config.formats:
        write_delimited(_ensure_out_dir(config) / f"{name}.csv", header, rows, provenance)
    if "table" in config.formats:
        if title:
            print(f"== {title}")
        print(render_table(header, rows))
        print()


def _correlation_rows(matrices: Mapping[str, CorrelationMatrix]):
    rows = []
    for scope in sorted(matrices):
        matrix = matrices[scope]
        for row_label in matrix.row_labels:
            for col_label in matrix.col_labels:
                cell = matrix.cell(row_label, col_label)
                rows.append(
                    (scope, row_label, col_label, cell.r, cell.n, cell.dropped, cell.reason)
                )
    return rows


# ---------------------------------------------------------------------------
# subcommands


def cmd_compute(config: RunConfig) -> int:
    corpus, _ = _load_corpus(config)
    digest = file_digest(config.corpus)
    years = _resolve_years(config, corpus)
    fields = _field_scope(config, corpus)
    author_fields = _author_fields(corpus)
    external = _external_table(config)

    selected = config.metrics or None
    evaluations = [
        evaluate_year(corpus, year, external=external, jobs=config.jobs)
        for year in years
    ]
    if external:
        _report_external_join(external, evaluations)

    all_rows = [row for ev in evaluations for row in ev.metrics]
    metric_columns = list(METRIC_NAMES) + _external_names(all_rows)
    if selected:
        bad = [m for m in selected if m not in metric_columns]
        if bad:
            raise UsageError(
                f"unknown metric(s) {', '.join(bad)}; valid: {', '.join(metric_columns)}"
            )
        metric_columns = selected

    in_scope = lambda author_id: author_fields.get(author_id) in fields

    params = {
        "year": ",".join(map(str, years)),
        "field": config.field,
        "metrics": ",".join(metric_columns),
    }
    provenance = provenance_line("compute", digest, params)

    metric_rows = [
        (row.author_id, row.eval_year, author_fields[row.author_id])
        + tuple(metric_value(row, m) for m in metric_columns)
        for ev in evaluations
        for row in ev.metrics
        if in_scope(row.author_id)
    ]
    _emit(
        config,
        "metrics",
        ["author_id", "eval_year", "field", *metric_columns],
        metric_rows,
        provenance,
        title="metrics",
    )

    factor_rows = [
        (
            f.author_id,
            f.eval_year,
            author_fields[f.author_id],
            f.pub_rate,
            f.median_authors,
            f.career_length,
        )
        for ev in evaluations
        for f in ev.factors
        if in_scope(f.author_id)
    ]
    _emit(
        config,
        "factors",
        ["author_id", "eval_year", "field", *FACTOR_NAMES],
        factor_rows,
        provenance,
        title="factors",
    )
    if not metric_rows:
        print("warning: no rows matched the requested scope", file=sys.stderr)

    if "plot" in config.formats:
        from . import plots

        for ev in evaluations:
            factors_by_author = {f.author_id: f for f in ev.factors}
            for factor_name in FACTOR_NAMES:
                points: dict[str, list[tuple[float, float]]] = {}
                for row in ev.metrics:
                    if not in_scope(row.author_id):
                        continue
                    factor = getattr(factors_by_author[row.author_id], factor_name)
                    if factor is None:
                        continue
                    points.setdefault(author_fields[row.author_id], []).append(
                        (factor, row.cap)
                    )
                fig = plots.scatter_factors_figure(points, factor_name, "cap")
                plots.save_figure(
                    fig,
                    _ensure_out_dir(config)
                    / f"scatter_{factor_name}_{ev.eval_year}.svg",
                )
    return EXIT_OK


def cmd_rank(config: RunConfig) -> int:
    if len(config.metrics) > 1:
        raise UsageError("rank takes a single metric")
    corpus, _ = _load_corpus(config)
    digest = file_digest(config.corpus)
    year = _single_year(config, corpus)
    metric = config.metrics[0] if config.metrics else "cap"
    fields = _field_scope(config, corpus)
    author_fields = _author_fields(corpus)
    external = _external_table(config)

    evaluation = evaluate_year(corpus, year, external=external, jobs=config.jobs)
    names = {a.author_id: a.display_name for a in corpus.authors}

    try:
        rankings = {
            f: rank_by(
                evaluation.metrics,
                metric,
                config.top_k,
                field=f,
                author_fields=author_fields,
            )
            for f in fields
        }
    except UnknownMetricError as exc:
        raise UsageError(str(exc)) from None

    params = {"year": year, "metric": metric, "top": config.top_k, "field": config.field}
    provenance = provenance_line("rank", digest, params)

    top_rows = [
        (f, e.rank, e.author_id, names[e.author_id], e.value, e.c_total)
        for f in fields
        for e in rankings[f]
    ]
    _emit(
        config,
        f"rank_{metric}",
        ["field", "rank", "author_id", "display_name", metric, "c_total"],
        top_rows,
        provenance,
        title=f"top {config.top_k} by {metric}",
    )
    _emit(
        config,
        f"rank_{metric}_distribution",
        ["field", "rank", metric],
        [(f, e.rank, e.value) for f in fields for e in rankings[f]],
        provenance,
    )

    # rank-citation geometry of each field's top author: the curve whose
    # diagonal and publication-count crossings give h and cp
    records_by_author = {r.author_id: r for r in evaluation.records}
    profiles = {
        f: rank_citation_profile(records_by_author[rankings[f][0].author_id]).counts
        for f in fields
        if rankings[f]
    }
    _emit(
        config,
        "rank_citation_profiles",
        ["field", "author_id", "rank", "citations"],
        [
            (f, rankings[f][0].author_id, i, count)
            for f in sorted(profiles)
            for i, count in enumerate(profiles[f], start=1)
        ],
        provenance,
    )

    if "plot" in config.formats:
        from . import plots

        series = {f: [e.value for e in rankings[f]] for f in fields}
        fig = plots.rank_distribution_figure(series, metric)
        plots.save_figure(fig, _ensure_out_dir(config) / f"rank_{metric}.svg")
        fig = plots.rank_citation_profile_figure(
            {f"{f}: {rankings[f][0].author_id}": profiles[f] for f in profiles}
        )
        plots.save_figure(fig, _ensure_out_dir(config) / "rank_citation_profiles.svg")
    return EXIT_OK


def cmd_trajectory(config: RunConfig) -> int:
    corpus, _ = _load_corpus(config)
    digest = file_digest(config.corpus)
    year_to = config.year_to if config.year_to is not None else _default_year(corpus)
    year_from = config.year_from if config.year_from is not None else year_to - 40
    if year_from > year_to:
        raise UsageError(f"--from {year_from} exceeds --to {year_to}")
    fields = _field_scope(config, corpus)

    year_range = corpus.year_range
    covered = year_range is not None and year_to >= year_range[0]
    if not covered:
        print(
            f"warning: span {year_from}-{year_to} precedes corpus data; "
            "emitting empty series",
            file=sys.stderr,
        )

    params = {"from": year_from, "to": year_to, "field": config.field}
    provenance = provenance_line("trajectory", digest, params)

    series = (
        {f: trajectory(corpus, f, year_from, year_to) for f in fields} if covered else {}
    )
    setters = {f: record_setters(series[f]) for f in series}
    names = {a.author_id: a.display_name for a in corpus.authors}

    _emit(
        config,
        "trajectory",
        ["field", "year", "max_cap", "leaders"],
        [
            (f, p.year, p.max_cap, ";".join(p.leaders))
            for f in sorted(series)
            for p in series[f]
        ],
        provenance,
        title="highest cap per field and year",
    )
    _emit(
        config,
        "record_setters",
        ["field", "author_id", "display_name", "years_led", "years", "leads_final_year"],
        [
            (f, s.author_id, names[s.author_id], s.years_led,
             ";".join(map(str, s.years)), s.leads_final_year)
            for f in sorted(setters)
            for s in setters[f]
        ],
        provenance,
        title="record setters",
    )

    author_series: dict[str, list[tuple[int, int]]] = {}
    for f in sorted(setters):
        for s in setters[f]:
            author_series[s.author_id] = cap_trajectory(
                corpus.by_id[s.author_id], year_from, year_to
            )
    _emit(
        config,
        "author_trajectories",
        ["author_id", "year", "cap"],
        [
            (author_id, year, value)
            for author_id in sorted(author_series)
            for year, value in author_series[author_id]
        ],
        provenance,
    )

    if "plot" in config.formats:
        from . import plots

        plots.save_figure(
            plots.trajectory_figure(series),
            _ensure_out_dir(config) / "trajectory.svg",
        )
        plots.save_figure(
            plots.author_trajectories_figure(author_series),
            _ensure_out_dir(config) / "author_trajectories.svg",
        )
    return EXIT_OK


def cmd_correlate(config: RunConfig) -> int:
    corpus, _ = _load_corpus(config)
    digest = file_digest(config.corpus)
    year = _single_year(config, corpus)
    author_fields = _author_fields(corpus)
    external = _external_table(config)

    evaluation = evaluate_year(corpus, year, external=external, jobs=config.jobs)
    if external:
        _report_external_join(external, [evaluation])

    metric_names = list(DEFAULT_CORRELATION_METRICS) + _external_names(evaluation.metrics)
    cohorts = top_cohorts(evaluation.metrics, author_fields, top_k=config.top_k)

    params = {"year": year, "top": config.top_k}
    provenance = provenance_line("correlate", digest, params)
    header = ["scope", "row", "col", "r", "n", "dropped", "reason"]

    factor_matrices = factor_correlations(
        evaluation.metrics, evaluation.factors, cohorts, metrics=metric_names
    )
    _emit(
        config,
        "factor_correlations",
        header,
        _correlation_rows(factor_matrices),
        provenance,
        title="metric vs factor correlations",
    )

    metric_matrices = metric_correlations(
        evaluation.metrics, cohorts, metrics=metric_names
    )
    _emit(
        config,
        "metric_correlations",
        header,
        _correlation_rows(metric_matrices),
        provenance,
        title="metric vs metric correlations",
    )

    records_by_author = {r.author_id: r for r in evaluation.records}
    sensitivity: dict[str, CorrelationMatrix] = {}
    pooled_records = []
    for f in sorted(cohorts):
        cohort_records = [records_by_author[a] for a in cohorts[f]]
        pooled_records.extend(cohort_records)
        sensitivity[f] = sensitivity_correlations(cohort_records)
    sensitivity[POOLED_LABEL] = sensitivity_correlations(pooled_records)
    sensitivity["all-mean"] = mean_of_matrices(
        [sensitivity[f] for f in sorted(cohorts)]
    )
    _emit(
        config,
        "sensitivity_correlations",
        header,
        _correlation_rows(sensitivity),
        provenance,
        title="cap variant correlations",
    )

    if "plot" in config.formats:
        from . import plots

        out = _ensure_out_dir(config)
        plots.save_figure(
            plots.correlation_heat_figure(factor_matrices, "metric vs factor"),
            out / "factor_correlations.svg",
        )
        plots.save_figure(
            plots.correlation_heat_figure(metric_matrices, "metric vs metric"),
            out / "metric_correlations.svg",
        )
        plots.save_figure(
            plots.correlation_heat_figure(sensitivity, "cap variants"),
            out / "sensitivity_correlations.svg",
        )
    return EXIT_OK


def cmd_synth(config: RunConfig, args: argparse.Namespace) -> int:
    fields = [f.strip() for f in args.fields.split(",") if f.strip()]
    try:
        synth_config = SynthConfig(
            seed=args.seed,
            authors_per_field={f: args.authors_per_field for f in fields},
            career_start_min=args.career_start_min,
            career_start_max=args.career_start_max,
            final_year=args.final_year,
            pubs_per_year=args.pubs_per_year,
            citation_shape=args.citation_shape,
            citation_min=args.citation_min,
            team_size_mean=_parse_team_size(args.team_size),
            spam_rate=args.spam_rate,
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    corpus = synth_corpus(synth_config)
    out_path = args.out_file
    write_corpus(corpus, out_path)
    stats = corpus_stats(corpus)
    print(f"wrote {out_path} ({len(corpus)} authors, {stats.total_publications} publications)")
    print(
        render_table(
            ["field", "publications", "pub_share", "citations", "citation_share"],
            [
                (f, s.publications, s.pub_share, s.citations, s.citation_share)
                for f, s in stats.per_field.items()
            ],
        )
    )
    return EXIT_OK


def cmd_validate(config: RunConfig) -> int:
    corpus, report = _load_corpus(config)
    print(f"authors: {len(corpus)}")
    year_range = corpus.year_range
    if year_range:
        print(f"year range: {year_range[0]}-{year_range[1]}")
    print(render_table(["warning", "count"], sorted(report.as_dict().items())))
    stats = corpus_stats(corpus)
    if stats.total_publications:
        print()
        print(
            render_table(
                ["field", "publications", "pub_share", "citations", "citation_share"],
                [
                    (f, s.publications, s.pub_share, s.citations, s.citation_share)
                    for f, s in stats.per_field.items()
                ],
            )
        )
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser


def build_parser() -> _Parser:
    parser = _Parser(
        prog="capmetrics",
        description="Citation metrics that price productivity: compute, rank, "
        "and analyze CAP and companion metrics over publication corpora.",
    )
    parser.add_argument("--version", action="version", version=f"capmetrics {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p: _Parser, *, year: bool = True) -> None:
        p.add_argument("--corpus", type=Path, help="corpus file (.capjsonl)")
        if year:
            p.add_argument("--year", help="evaluation year(s), comma separated")
        p.add_argument("--field", help="restrict to one field")
        p.add_argument("--top", type=int, default=100, dest="top_k")
        p.add_argument("--out", type=Path, default=Path("."), help="output directory")
        p.add_argument(
            "--format",
            default="table,delimited,plot",
            help="comma list of: table, delimited, plot",
        )
        p.add_argument("--metrics", help="comma list of metric columns")
        p.add_argument("--external", type=Path, help="external metric table to join")
        p.add_argument("--strict", action="store_true", help="fail on malformed records")
        p.add_argument("--jobs", type=int, default=1, help="worker threads")

    p = sub.add_parser("compute", help="metric and factor tables per author")
    add_common(p)
    p.set_defaults(handler=cmd_compute)

    p = sub.add_parser("rank", help="top authors per field by one metric")
    add_common(p)
    p.set_defaults(handler=cmd_rank)

    p = sub.add_parser("trajectory", help="highest cap per field over time")
    add_common(p, year=False)
    p.add_argument("--from", type=int, dest="year_from", help="first evaluation year")
    p.add_argument("--to", type=int, dest="year_to", help="last evaluation year")
    p.set_defaults(handler=cmd_trajectory)

    p = sub.add_parser("correlate", help="factor, metric, and variant correlations")
    add_common(p)
    p.set_defaults(handler=cmd_correlate)

    p = sub.add_parser("validate", help="parse a corpus and report anomalies")
    add_common(p, year=False)
    p.set_defaults(handler=cmd_validate)

    p = sub.add_parser("synth", help="generate a seeded synthetic corpus")
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--fields", default=DEFAULT_SYNTH_FIELDS)
    p.add_argument("--authors-per-field", type=int, default=50)
    p.add_argument("--career-start-min", type=int, default=1975)
    p.add_argument("--career-start-max", type=int, default=2015)
    p.add_argument("--final-year", type=int, default=2022)
    p.add_argument("--pubs-per-year", type=float, default=2.0)
    p.add_argument("--citation-shape", type=float, default=1.3)
    p.add_argument("--citation-min", type=int, default=1)
    p.add_argument("--team-size", default="4.0", help="mean, or field=mean pairs")
    p.add_argument("--spam-rate", type=float, default=0.0)
    p.add_argument(
        "--out",
        type=Path,
        default=Path("synth.capjsonl"),
        dest="out_file",
        help="output corpus file",
    )

    return parser


def _config_from_args(args: argparse.Namespace) -> RunConfig:
    config = RunConfig(command=args.command)
    if hasattr(args, "corpus"):
        config.corpus = args.corpus
    if getattr(args, "year", None):
        config.years = _parse_years(args.year)
    config.year_from = getattr(args, "year_from", None)
    config.year_to = getattr(args, "year_to", None)
    config.field = getattr(args, "field", None)
    if getattr(args, "metrics", None):
        config.metrics = [m.strip() for m in args.metrics.split(",") if m.strip()]
    config.top_k = getattr(args, "top_k", 100)
    config.out_dir = getattr(args, "out", Path("."))
    if hasattr(args, "format"):
        config.formats = _parse_formats(args.format)
    config.strict = getattr(args, "strict", False)
    config.jobs = getattr(args, "jobs", 1)
    config.external = getattr(args, "external", None)
    config.validate()
    return config


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        config = _config_from_args(args)
        if args.command == "synth":
            return cmd_synth(config, args)
        return args.handler(config)
    except SystemExit as exc:  # argparse --help / --version
        return int(exc.code or 0)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except CorpusFormatError as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_DATA


def entry_point() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry_point()
