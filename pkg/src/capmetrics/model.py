"""Core corpus model: publications, author profiles, corpora.

Everything here is immutable after construction. Invariants that would make
downstream numbers meaningless (missing author counts, negative citations,
duplicate identifiers) are rejected with ValueError at construction time.
Anomalies that real citation databases are known to contain (citations dated
before the publication year, author lists truncated at 150) are kept but
surfaced through :func:`validate_corpus`.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import cached_property
from typing import Mapping

# Publication years outside this range are treated as data corruption.
DEFAULT_YEAR_BOUNDS = (1900, 2100)

# Several data platforms truncate author lists at exactly 150 names, so an
# author_count of 150 is more likely a cap than a true count.
SUSPECT_AUTHOR_COUNT = 150


class DocType(enum.Enum):
    """Document categories; ancillary types can be discarded at windowing."""

    ARTICLE = "article"
    CONFERENCE_PAPER = "conference-paper"
    EDITORIAL = "editorial"
    COMMENTARY = "commentary"
    OTHER = "other"


@dataclass(frozen=True, slots=True)
class Publication:
    """One indexed work with its per-year citation history.

    citations_by_year maps calendar year to the citation count received in
    that year. Storing per-year counts (rather than running totals) lets any
    evaluation year be served from a single data load. Citation years before
    the publication year are accepted (they occur in real databases) and are
    flagged by :func:`validate_corpus` rather than silently dropped.
    """

    pub_id: str
    year: int
    author_count: int
    citations_by_year: Mapping[int, int]
    doc_type: DocType = DocType.ARTICLE

    def __post_init__(self) -> None:
        if not self.pub_id:
            raise ValueError("pub_id must be non-empty")
        if self.author_count < 1:
            raise ValueError(
                f"publication {self.pub_id!r}: author_count must be >= 1, "
                f"got {self.author_count}"
            )
        lo, hi = DEFAULT_YEAR_BOUNDS
        if not lo <= self.year <= hi:
            raise ValueError(
                f"publication {self.pub_id!r}: year {self.year} outside sane "
                f"range [{lo}, {hi}]"
            )
        clean: dict[int, int] = {}
        for y, n in self.citations_by_year.items():
            if n < 0:
                raise ValueError(
                    f"publication {self.pub_id!r}: negative citation count "
                    f"{n} in year {y}"
                )
            if n:  # zero entries carry no information; drop for canonical form
                clean[int(y)] = int(n)
        object.__setattr__(self, "citations_by_year", clean)

    def citations_through(self, year: int) -> int:
        """Citations accumulated through the end of the given year."""
        return sum(n for y, n in self.citations_by_year.items() if y <= year)

    @property
    def total_citations(self) -> int:
        return sum(self.citations_by_year.values())

    @property
    def has_pre_publication_citations(self) -> bool:
        return any(y < self.year for y in self.citations_by_year)


@dataclass(frozen=True, slots=True)
class AuthorProfile:
    """A researcher and the publications attributed to them."""

    author_id: str
    display_name: str
    field: str
    publications: tuple[Publication, ...]

    def __post_init__(self) -> None:
        if not self.author_id:
            raise ValueError("author_id must be non-empty")
        pubs = tuple(self.publications)
        object.__setattr__(self, "publications", pubs)
        seen: set[str] = set()
        for pub in pubs:
            if pub.pub_id in seen:
                raise ValueError(
                    f"author {self.author_id!r}: duplicate pub_id {pub.pub_id!r}"
                )
            seen.add(pub.pub_id)

    @property
    def first_pub_year(self) -> int | None:
        """Year of the earliest publication; None for an empty profile."""
        if not self.publications:
            return None
        return min(p.year for p in self.publications)


@dataclass(frozen=True)
class Corpus:
    """Immutable collection of author profiles.

    Authors are normalized to ascending author_id order at construction so
    that serialization and every downstream ranking is deterministic.
    """

    authors: tuple[AuthorProfile, ...]

    def __post_init__(self) -> None:
        ordered = tuple(sorted(self.authors, key=lambda a: a.author_id))
        seen: set[str] = set()
        for author in ordered:
            if author.author_id in seen:
                raise ValueError(f"duplicate author_id {author.author_id!r}")
            seen.add(author.author_id)
        object.__setattr__(self, "authors", ordered)

    def __len__(self) -> int:
        return len(self.authors)

    @cached_property
    def by_id(self) -> Mapping[str, AuthorProfile]:
        return {a.author_id: a for a in self.authors}

    @cached_property
    def fields(self) -> tuple[str, ...]:
        return tuple(sorted({a.field for a in self.authors}))

    def authors_in(self, field_label: str) -> tuple[AuthorProfile, ...]:
        return tuple(a for a in self.authors if a.field == field_label)

    @cached_property
    def year_range(self) -> tuple[int, int] | None:
        """(min, max) over publication years and citation years; None if empty."""
        lo: int | None = None
        hi: int | None = None
        for author in self.authors:
            for pub in author.publications:
                years = [pub.year, *pub.citations_by_year.keys()]
                y_min, y_max = min(years), max(years)
                lo = y_min if lo is None else min(lo, y_min)
                hi = y_max if hi is None else max(hi, y_max)
        if lo is None or hi is None:
            return None
        return lo, hi

    @cached_property
    def latest_citation_year(self) -> int | None:
        """Most recent year with recorded citation activity.

        Falls back to the latest publication year for corpora that contain
        publications but no citations at all. This is the latest evaluation
        year whose citation cutoff is fully covered by the data.
        """
        latest: int | None = None
        latest_pub: int | None = None
        for author in self.authors:
            for pub in author.publications:
                if latest_pub is None or pub.year > latest_pub:
                    latest_pub = pub.year
                if pub.citations_by_year:
                    y = max(pub.citations_by_year)
                    if latest is None or y > latest:
                        latest = y
        return latest if latest is not None else latest_pub


@dataclass
class ValidationReport:
    """Counts of data anomalies; warnings only, never fatal."""

    pre_publication_citations: int = 0
    suspected_author_caps: int = 0
    empty_profiles: int = 0
    skipped_records: int = 0
    unknown_fields: int = 0

    @property
    def total_warnings(self) -> int:
        return (
            self.pre_publication_citations
            + self.suspected_author_caps
            + self.empty_profiles
            + self.skipped_records
            + self.unknown_fields
        )

    def as_dict(self) -> dict[str, int]:
        return {
            "pre_publication_citations": self.pre_publication_citations,
            "suspected_author_caps": self.suspected_author_caps,
            "empty_profiles": self.empty_profiles,
            "skipped_records": self.skipped_records,
            "unknown_fields": self.unknown_fields,
        }


def validate_corpus(corpus: Corpus, report: ValidationReport | None = None) -> ValidationReport:
    """Scan a corpus for known data anomalies.

    Counts publications with citations dated before their publication year,
    publications whose author count equals the suspicious platform cap of
    150, and profiles with no publications. Never mutates the corpus.
    """
    report = report if report is not None else ValidationReport()
    for author in corpus.authors:
        if not author.publications:
            report.empty_profiles += 1
        for pub in author.publications:
            if pub.has_pre_publication_citations:
                report.pre_publication_citations += 1
            if pub.author_count == SUSPECT_AUTHOR_COUNT:
                report.suspected_author_caps += 1
    return report


@dataclass(frozen=True)
class FieldStats:
    publications: int
    citations: int
    pub_share: float
    citation_share: float


@dataclass(frozen=True)
class CorpusStats:
    """Per-field publication and citation totals with shares of the corpus.

    Shares are count/total per dimension; when a dimension's total is zero
    (e.g. a corpus with no citations at all) its shares are reported as 0.0.
    """

    total_publications: int
    total_citations: int
    per_field: Mapping[str, FieldStats]


def corpus_stats(corpus: Corpus) -> CorpusStats:
    """Publication and citation totals and shares, partitioned by field.

    A publication is attributed to its author's field; works listed under
    several profiles count once per profile (the model has no cross-profile
    identity). An empty corpus yields the explicit zero-stats value.
    """
    pub_counts: dict[str, int] = {}
    cite_counts: dict[str, int] = {}
    for author in corpus.authors:
        pubs = pub_counts.setdefault(author.field, 0)
        cites = cite_counts.setdefault(author.field, 0)
        for pub in author.publications:
            pubs += 1
            cites += pub.total_citations
        pub_counts[author.field] = pubs
        cite_counts[author.field] = cites

    total_pubs = sum(pub_counts.values())
    total_cites = sum(cite_counts.values())
    per_field = {
        f: FieldStats(
            publications=pub_counts[f],
            citations=cite_counts[f],
            pub_share=pub_counts[f] / total_pubs if total_pubs else 0.0,
            citation_share=cite_counts[f] / total_cites if total_cites else 0.0,
        )
        for f in sorted(pub_counts)
    }
    return CorpusStats(total_pubs, total_cites, per_field)
