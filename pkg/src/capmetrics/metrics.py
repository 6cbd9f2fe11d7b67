"""Citation metrics over a windowed publication record.

CAP counts the publications whose citations, after subtracting the author
count, meet or exceed the size of the publication set itself. Every
publication raises that threshold for all of them, so publishing has a cost:

    cap = |{ i : citations_i - author_count_i - pub_count >= 0 }|

CP drops the author-count adjustment, the h-index is the classic largest k
with k publications cited at least k times, and h_frac is the h-index over
citations divided by author count. For any record,

    cap <= cp <= h_index <= pub_count.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Mapping, Sequence

from .windows import WindowedRecord, WindowItem


def cap(record: WindowedRecord) -> int:
    """Publications whose citations clear the author count plus the set size."""
    p = len(record.items)
    return sum(1 for it in record.items if it.citations - it.author_count - p >= 0)


def cp(record: WindowedRecord) -> int:
    """Like :func:`cap` but without the author-count adjustment."""
    p = len(record.items)
    return sum(1 for it in record.items if it.citations - p >= 0)


def _largest_feasible_k(counts_ge: Callable[[int], int], upper: int) -> int:
    """Largest k in [0, upper] with counts_ge(k) >= k.

    counts_ge(k) must be non-increasing in k, which makes the predicate
    monotone and binary search valid. counts_ge(0) >= 0 always holds.
    """
    lo, hi = 0, upper
    while lo < hi:
        mid = (lo + hi + 1) // 2
        if counts_ge(mid) >= mid:
            lo = mid
        else:
            hi = mid - 1
    return lo


def h_index(record: WindowedRecord) -> int:
    """Largest k such that at least k publications have at least k citations."""
    items = record.items
    return _largest_feasible_k(
        lambda k: sum(1 for it in items if it.citations >= k), len(items)
    )


def h_frac(record: WindowedRecord) -> int:
    """h-index over fractionally allocated citations (citations / authors).

    The comparison citations/authors >= k is evaluated as
    citations >= k * authors in exact integer arithmetic, so the result is
    never perturbed by floating-point thresholds.
    """
    items = record.items
    return _largest_feasible_k(
        lambda k: sum(1 for it in items if it.citations >= k * it.author_count),
        len(items),
    )


def total_citations(record: WindowedRecord) -> int:
    return sum(it.citations for it in record.items)


def mean_citations(record: WindowedRecord) -> float | None:
    """Mean citations per publication; None for an empty record.

    The undefined value is deliberately None rather than NaN so it renders
    as a blank field in outputs and is dropped from correlations.
    """
    p = len(record.items)
    if p == 0:
        return None
    return total_citations(record) / p


@dataclass(frozen=True, slots=True)
class CapVariants:
    """CAP recomputed on pruned publication sets, for noise-sensitivity checks.

    prime keeps only publications with at least one citation. dprime and
    tprime keep the most highly cited publications that together account for
    at least 99% and 98% of total citations. Each variant resets the
    threshold to the pruned set size before re-evaluating.
    """

    prime: int
    dprime: int
    tprime: int


def _cap_of_items(items: Sequence[WindowItem]) -> int:
    p = len(items)
    return sum(1 for it in items if it.citations - it.author_count - p >= 0)


def _mass_prefix(items: Sequence[WindowItem], percent: int) -> list[WindowItem]:
    """Shortest prefix of the citation-sorted items reaching percent of the mass.

    Threshold is ceil(percent/100 * total), ties in citations broken by
    ascending pub_id. An all-zero record keeps nothing.
    """
    total = sum(it.citations for it in items)
    if total == 0:
        return []
    threshold = -(-total * percent // 100)  # ceil without floats
    ordered = sorted(items, key=lambda it: (-it.citations, it.pub_id))
    kept: list[WindowItem] = []
    mass = 0
    for it in ordered:
        kept.append(it)
        mass += it.citations
        if mass >= threshold:
            break
    return kept


def cap_variants(record: WindowedRecord) -> CapVariants:
    """CAP', CAP'' and CAP''' for one record (see :class:`CapVariants`)."""
    nonzero = [it for it in record.items if it.citations > 0]
    return CapVariants(
        prime=_cap_of_items(nonzero),
        dprime=_cap_of_items(_mass_prefix(record.items, 99)),
        tprime=_cap_of_items(_mass_prefix(record.items, 98)),
    )


@dataclass(frozen=True, slots=True)
class RankCitationProfile:
    """Citation counts in non-increasing rank order.

    The h-index is the last rank where the profile still meets the diagonal
    (count >= rank); CP is the number of ranks where the profile meets the
    horizontal line at the publication count.
    """

    counts: tuple[int, ...]

    def __post_init__(self) -> None:
        if any(a < b for a, b in zip(self.counts, self.counts[1:])):
            raise ValueError("rank-citation profile must be non-increasing")

    @property
    def pub_count(self) -> int:
        return len(self.counts)


def rank_citation_profile(record: WindowedRecord) -> RankCitationProfile:
    """The record's citation counts sorted in non-increasing order."""
    return RankCitationProfile(
        tuple(sorted((it.citations for it in record.items), reverse=True))
    )


# Column order for delimited output; external columns follow these.
METRIC_NAMES = ("cap", "cp", "h", "h_frac", "mu", "c_total", "p")


@dataclass(frozen=True)
class MetricsRow:
    """All computed metrics for one (author, evaluation year) pair.

    mu is None when the record is empty. external carries pass-through
    metric columns supplied at ingestion (for example a composite indicator
    published elsewhere); they are never computed here.
    """

    author_id: str
    eval_year: int
    cap: int
    cp: int
    h: int
    h_frac: int
    mu: float | None
    c_total: int
    p: int
    external: Mapping[str, float] = field(default_factory=dict)


def compute_metrics(
    record: WindowedRecord, external: Mapping[str, float] | None = None
) -> MetricsRow:
    """Evaluate every metric on one windowed record."""
    return MetricsRow(
        author_id=record.author_id,
        eval_year=record.eval_year,
        cap=cap(record),
        cp=cp(record),
        h=h_index(record),
        h_frac=h_frac(record),
        mu=mean_citations(record),
        c_total=total_citations(record),
        p=record.pub_count,
        external=dict(external) if external else {},
    )


def metric_value(row: MetricsRow, name: str) -> float | int | None:
    """Look up a metric column by name, falling back to external columns."""
    if name in METRIC_NAMES:
        return getattr(row, name)
    return row.external.get(name)
