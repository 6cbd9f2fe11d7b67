"""Rankings, trajectories, factor columns, and correlation analyses."""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import AbstractSet, Iterable, Mapping, Sequence

from .model import AuthorProfile, Corpus, DocType
from .metrics import (
    METRIC_NAMES,
    MetricsRow,
    cap as cap_metric,
    cap_variants,
    compute_metrics,
    metric_value,
)
from .windows import DEFAULT_DISCARD_TYPES, WindowedRecord, build_window, standard_window

FACTOR_NAMES = ("pub_rate", "median_authors", "career_length")

# Metric columns used in the factor and metric correlation tables; external
# columns supplied at ingestion are appended by the caller. cp is included
# so cap-vs-cp agreement on top cohorts can be read off the matrices.
DEFAULT_CORRELATION_METRICS = ("cap", "cp", "c_total", "mu", "h", "h_frac")

POOLED_LABEL = "all-pooled"  # one correlation over the concatenated cohorts
MEAN_LABEL = "all-mean"  # arithmetic mean of the per-field coefficients


@dataclass(frozen=True, slots=True)
class FactorRow:
    """Productivity and career factors for one (author, evaluation year) pair.

    pub_rate is the windowed publication count; median_authors the median
    team size over the windowed items (None for an empty window);
    career_length counts years since the author's first publication over the
    whole profile, not just the window (None for an empty profile).
    """

    author_id: str
    eval_year: int
    pub_rate: int
    median_authors: float | None
    career_length: int | None


def _median(values: Sequence[int]) -> float:
    ordered = sorted(values)
    n = len(ordered)
    mid = n // 2
    if n % 2:
        return float(ordered[mid])
    return (ordered[mid - 1] + ordered[mid]) / 2


def compute_factors(profile: AuthorProfile, record: WindowedRecord) -> FactorRow:
    """Factor columns for one author at the record's evaluation year."""
    first = profile.first_pub_year
    return FactorRow(
        author_id=record.author_id,
        eval_year=record.eval_year,
        pub_rate=record.pub_count,
        median_authors=_median([it.author_count for it in record.items])
        if record.items
        else None,
        career_length=record.eval_year - first if first is not None else None,
    )


@dataclass(frozen=True, slots=True)
class RankingEntry:
    rank: int
    author_id: str
    value: float
    c_total: int


class UnknownMetricError(ValueError):
    def __init__(self, name: str, valid: Iterable[str]):
        self.name = name
        self.valid = tuple(valid)
        super().__init__(
            f"unknown metric {name!r}; valid options: {', '.join(self.valid)}"
        )


def rank_by(
    rows: Sequence[MetricsRow],
    metric: str,
    top_k: int,
    *,
    field: str | None = None,
    author_fields: Mapping[str, str] | None = None,
) -> list[RankingEntry]:
    """Top-k authors by a metric, ties broken by total citations then author_id.

    Rows must share an evaluation year. When a field label is given,
    author_fields must map author_id to field so rows can be filtered. Rows
    whose metric value is undefined are excluded. Ordering is fully
    deterministic: metric descending, c_total descending, author_id
    ascending, with ranks assigned consecutively from 1.
    """
    if top_k < 1:
        raise ValueError(f"top_k must be >= 1, got {top_k}")
    years = {row.eval_year for row in rows}
    if len(years) > 1:
        raise ValueError(f"rows span multiple evaluation years: {sorted(years)}")
    valid = set(METRIC_NAMES)
    for row in rows:
        valid.update(row.external)
    if metric not in valid:
        raise UnknownMetricError(metric, sorted(valid))
    if field is not None:
        if author_fields is None:
            raise ValueError("author_fields is required when filtering by field")
        rows = [r for r in rows if author_fields.get(r.author_id) == field]
    scored = [
        (metric_value(row, metric), row)
        for row in rows
        if metric_value(row, metric) is not None
    ]
    scored.sort(key=lambda pair: (-pair[0], -pair[1].c_total, pair[1].author_id))
    return [
        RankingEntry(rank=i, author_id=row.author_id, value=value, c_total=row.c_total)
        for i, (value, row) in enumerate(scored[:top_k], start=1)
    ]


@dataclass(frozen=True, slots=True)
class TrajectoryPoint:
    """Field maximum for one evaluation year with every author attaining it."""

    year: int
    max_cap: int
    leaders: tuple[str, ...]


def trajectory(
    corpus: Corpus,
    field: str,
    year_from: int,
    year_to: int,
    *,
    discard_types: AbstractSet[DocType] = DEFAULT_DISCARD_TYPES,
) -> list[TrajectoryPoint]:
    """Highest CAP in a field for each evaluation year in [year_from, year_to].

    Years with no windowed publications yield a maximum of 0, which every
    author in the field then trivially attains.
    """
    if year_from > year_to:
        raise ValueError(f"year_from {year_from} exceeds year_to {year_to}")
    authors = corpus.authors_in(field)
    if not authors:
        raise ValueError(f"no authors in field {field!r}")
    points = []
    for year in range(year_from, year_to + 1):
        spec = standard_window(year)
        best = -1
        leaders: list[str] = []
        for author in authors:
            value = cap_metric(build_window(author, spec, discard_types))
            if value > best:
                best = value
                leaders = [author.author_id]
            elif value == best:
                leaders.append(author.author_id)
        points.append(TrajectoryPoint(year, best, tuple(sorted(leaders))))
    return points


def cap_trajectory(
    profile: AuthorProfile,
    year_from: int,
    year_to: int,
    *,
    discard_types: AbstractSet[DocType] = DEFAULT_DISCARD_TYPES,
) -> list[tuple[int, int]]:
    """One author's CAP per evaluation year over [year_from, year_to]."""
    return [
        (year, cap_metric(build_window(profile, standard_window(year), discard_types)))
        for year in range(year_from, year_to + 1)
    ]


@dataclass(frozen=True, slots=True)
class RecordSetter:
    author_id: str
    years_led: int
    years: tuple[int, ...]
    leads_final_year: bool


def record_setters(
    points: Sequence[TrajectoryPoint], min_years: int = 3
) -> list[RecordSetter]:
    """Authors who held a field's maximum for min_years or lead the final year.

    Shared maxima credit every co-leader, and the qualifying years need not
    be consecutive. Output is sorted by years led (descending) then
    author_id.
    """
    if not points:
        return []
    led: dict[str, list[int]] = {}
    for point in points:
        for author_id in point.leaders:
            led.setdefault(author_id, []).append(point.year)
    final_leaders = set(points[-1].leaders)
    setters = [
        RecordSetter(
            author_id=author_id,
            years_led=len(years),
            years=tuple(years),
            leads_final_year=author_id in final_leaders,
        )
        for author_id, years in led.items()
        if len(years) >= min_years or author_id in final_leaders
    ]
    setters.sort(key=lambda s: (-s.years_led, s.author_id))
    return setters


@dataclass(frozen=True, slots=True)
class CorrelationCell:
    """A Pearson coefficient, or an explicit undefined value with its reason.

    n counts the pairs actually used; dropped counts pairs removed because
    either side was undefined. r is None (never NaN) when the coefficient
    does not exist.
    """

    r: float | None
    n: int
    dropped: int = 0
    reason: str | None = None

    @property
    def defined(self) -> bool:
        return self.r is not None


def pearson(
    xs: Sequence[float | int | None], ys: Sequence[float | int | None]
) -> CorrelationCell:
    """Product-moment correlation with pairwise dropping of undefined values.

    Inputs must have equal length. Returns an undefined cell (with reason)
    when fewer than two valid pairs remain or either side has zero variance.
    The result is clamped to [-1, 1] against floating-point overshoot.
    """
    if len(xs) != len(ys):
        raise ValueError(f"length mismatch: {len(xs)} vs {len(ys)}")
    pairs = [(float(x), float(y)) for x, y in zip(xs, ys) if x is not None and y is not None]
    dropped = len(xs) - len(pairs)
    n = len(pairs)
    if n < 2:
        return CorrelationCell(None, n, dropped, "fewer than 2 valid pairs")
    mean_x = math.fsum(x for x, _ in pairs) / n
    mean_y = math.fsum(y for _, y in pairs) / n
    var_x = math.fsum((x - mean_x) ** 2 for x, _ in pairs)
    var_y = math.fsum((y - mean_y) ** 2 for _, y in pairs)
    # sqrt before multiplying so tiny variances cannot underflow the product
    denom = math.sqrt(var_x) * math.sqrt(var_y)
    if denom == 0.0:
        return CorrelationCell(None, n, dropped, "zero variance")
    num = math.fsum((x - mean_x) * (y - mean_y) for x, y in pairs)
    r = num / denom
    return CorrelationCell(max(-1.0, min(1.0, r)), n, dropped)


@dataclass(frozen=True)
class CorrelationMatrix:
    """Labeled grid of correlation cells."""

    row_labels: tuple[str, ...]
    col_labels: tuple[str, ...]
    cells: Mapping[tuple[str, str], CorrelationCell]

    def cell(self, row: str, col: str) -> CorrelationCell:
        return self.cells[(row, col)]


def top_cohorts(
    rows: Sequence[MetricsRow],
    author_fields: Mapping[str, str],
    *,
    metric: str = "cap",
    top_k: int = 100,
) -> dict[str, tuple[str, ...]]:
    """Per-field author cohorts: the top_k authors by a metric in each field."""
    cohorts = {}
    for field in sorted(set(author_fields.values())):
        ranking = rank_by(rows, metric, top_k, field=field, author_fields=author_fields)
        cohorts[field] = tuple(entry.author_id for entry in ranking)
    return cohorts


def _metric_column(
    rows_by_author: Mapping[str, MetricsRow], cohort: Sequence[str], name: str
) -> list[float | None]:
    return [metric_value(rows_by_author[a], name) for a in cohort]


def _factor_column(
    factors_by_author: Mapping[str, FactorRow], cohort: Sequence[str], name: str
) -> list[float | None]:
    return [getattr(factors_by_author[a], name) for a in cohort]


def _mean_of_cells(cells: Sequence[CorrelationCell]) -> CorrelationCell:
    defined = [c.r for c in cells if c.r is not None]
    if not defined:
        return CorrelationCell(None, 0, 0, "no defined per-field coefficients")
    return CorrelationCell(math.fsum(defined) / len(defined), len(defined))


def mean_of_matrices(matrices: Sequence[CorrelationMatrix]) -> CorrelationMatrix:
    """Cell-wise mean of equally labeled matrices, skipping undefined cells."""
    if not matrices:
        raise ValueError("need at least one matrix")
    first = matrices[0]
    cells = {
        (a, b): _mean_of_cells([m.cell(a, b) for m in matrices])
        for a in first.row_labels
        for b in first.col_labels
    }
    return CorrelationMatrix(first.row_labels, first.col_labels, cells)


def factor_correlations(
    rows: Sequence[MetricsRow],
    factors: Sequence[FactorRow],
    cohorts: Mapping[str, Sequence[str]],
    *,
    metrics: Sequence[str] = DEFAULT_CORRELATION_METRICS,
    factor_names: Sequence[str] = FACTOR_NAMES,
) -> dict[str, CorrelationMatrix]:
    """Metric-by-factor correlation matrices per field cohort.

    Besides one matrix per field, returns a pooled matrix computed over the
    concatenation of all cohorts (key "all-pooled") and the mean of the
    per-field coefficients (key "all-mean"). Undefined cells propagate.
    """
    rows_by_author = {r.author_id: r for r in rows}
    factors_by_author = {f.author_id: f for f in factors}
    fields = sorted(cohorts)
    pooled: list[str] = []
    for field in fields:
        pooled.extend(cohorts[field])

    result: dict[str, CorrelationMatrix] = {}
    for scope, cohort in [*((f, cohorts[f]) for f in fields), (POOLED_LABEL, pooled)]:
        cells = {}
        for metric in metrics:
            xs = _metric_column(rows_by_author, cohort, metric)
            for factor in factor_names:
                ys = _factor_column(factors_by_author, cohort, factor)
                cells[(metric, factor)] = pearson(xs, ys)
        result[scope] = CorrelationMatrix(tuple(metrics), tuple(factor_names), cells)

    mean_cells = {
        (metric, factor): _mean_of_cells(
            [result[f].cell(metric, factor) for f in fields]
        )
        for metric in metrics
        for factor in factor_names
    }
    result[MEAN_LABEL] = CorrelationMatrix(
        tuple(metrics), tuple(factor_names), mean_cells
    )
    return result


def _symmetric_matrix(
    columns: Mapping[str, Sequence[float | None]], labels: Sequence[str]
) -> CorrelationMatrix:
    """Symmetric correlation matrix with an exact unit diagonal.

    The diagonal is 1.0 whenever the column is non-degenerate; degenerate
    columns (zero variance or too few values) keep the undefined cell.
    """
    cells: dict[tuple[str, str], CorrelationCell] = {}
    for i, a in enumerate(labels):
        for b in labels[i:]:
            cell = pearson(columns[a], columns[b])
            if a == b and cell.defined:
                cell = CorrelationCell(1.0, cell.n, cell.dropped)
            cells[(a, b)] = cell
            cells[(b, a)] = cell
    return CorrelationMatrix(tuple(labels), tuple(labels), cells)


def metric_correlations(
    rows: Sequence[MetricsRow],
    cohorts: Mapping[str, Sequence[str]],
    *,
    metrics: Sequence[str] = DEFAULT_CORRELATION_METRICS,
) -> dict[str, CorrelationMatrix]:
    """Metric-by-metric correlation matrices per field cohort.

    Matrices are symmetric with unit diagonal on non-degenerate columns.
    Includes the pooled-concatenation and per-field-mean aggregations under
    the "all-pooled" and "all-mean" keys.
    """
    rows_by_author = {r.author_id: r for r in rows}
    fields = sorted(cohorts)
    pooled: list[str] = []
    for field in fields:
        pooled.extend(cohorts[field])

    result: dict[str, CorrelationMatrix] = {}
    for scope, cohort in [*((f, cohorts[f]) for f in fields), (POOLED_LABEL, pooled)]:
        columns = {m: _metric_column(rows_by_author, cohort, m) for m in metrics}
        result[scope] = _symmetric_matrix(columns, metrics)

    mean_cells = {
        (a, b): _mean_of_cells([result[f].cell(a, b) for f in fields])
        for a in metrics
        for b in metrics
    }
    result[MEAN_LABEL] = CorrelationMatrix(tuple(metrics), tuple(metrics), mean_cells)
    return result


SENSITIVITY_LABELS = ("cap", "cap_prime", "cap_dprime", "cap_tprime")


def sensitivity_correlations(records: Sequence[WindowedRecord]) -> CorrelationMatrix:
    """Correlations between CAP and its pruned variants over a record set.

    Degenerate inputs (a single record, or constant columns) produce
    undefined cells rather than errors.
    """
    columns: dict[str, list[float | None]] = {label: [] for label in SENSITIVITY_LABELS}
    for record in records:
        variants = cap_variants(record)
        columns["cap"].append(cap_metric(record))
        columns["cap_prime"].append(variants.prime)
        columns["cap_dprime"].append(variants.dprime)
        columns["cap_tprime"].append(variants.tprime)
    return _symmetric_matrix(columns, SENSITIVITY_LABELS)


@dataclass(frozen=True)
class YearEvaluation:
    """All rows for one evaluation year, in author_id order."""

    eval_year: int
    records: list[WindowedRecord]
    metrics: list[MetricsRow]
    factors: list[FactorRow]


def evaluate_year(
    corpus: Corpus,
    eval_year: int,
    *,
    discard_types: AbstractSet[DocType] = DEFAULT_DISCARD_TYPES,
    external: Mapping[tuple[str, int], Mapping[str, float]] | None = None,
    jobs: int = 1,
) -> YearEvaluation:
    """Windowed records, metrics and factors for every author at one year.

    Authors are partitioned into contiguous chunks evaluated in a thread
    pool and reassembled in corpus order, so the output is identical for
    any jobs count.
    """
    spec = standard_window(eval_year)

    def evaluate_chunk(authors: Sequence[AuthorProfile]):
        chunk = []
        for author in authors:
            record = build_window(author, spec, discard_types)
            extra = external.get((author.author_id, eval_year)) if external else None
            chunk.append(
                (record, compute_metrics(record, extra), compute_factors(author, record))
            )
        return chunk

    authors = corpus.authors
    if jobs <= 1 or len(authors) < 2:
        combined = evaluate_chunk(authors)
    else:
        step = -(-len(authors) // jobs)
        chunks = [authors[i : i + step] for i in range(0, len(authors), step)]
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            parts = list(pool.map(evaluate_chunk, chunks))
        combined = [row for part in parts for row in part]

    return YearEvaluation(
        eval_year=eval_year,
        records=[record for record, _, _ in combined],
        metrics=[row for _, row, _ in combined],
        factors=[factors for _, _, factors in combined],
    )


def inclusion_counts(
    ranking: Sequence[RankingEntry],
    factors: Sequence[FactorRow],
    thresholds: Sequence[int],
) -> list[tuple[int, int]]:
    """How many ranked authors have career length at or below each threshold.

    Entries with undefined career length are never counted. Counts are
    non-decreasing in the threshold.
    """
    factors_by_author = {f.author_id: f for f in factors}
    lengths = [
        factors_by_author[e.author_id].career_length
        for e in ranking
        if e.author_id in factors_by_author
    ]
    return [
        (t, sum(1 for length in lengths if length is not None and length <= t))
        for t in thresholds
    ]
