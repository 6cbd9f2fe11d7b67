"""Evaluation windows: select a publication set and accumulate its citations.

The standard window for evaluation year Y takes publications from the five
calendar years Y-6 through Y-2 and counts citations through the end of Y.
Ending the publication span two years before Y gives fresh publications time
to start accruing citations before they raise the productivity threshold.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import AbstractSet

from .model import AuthorProfile, DocType

# Ancillary types dropped from windows unless the caller overrides.
DEFAULT_DISCARD_TYPES = frozenset({DocType.EDITORIAL, DocType.COMMENTARY})

PUBLICATION_SPAN = 5  # calendar years of publications per standard window
GRACE_YEARS = 2  # citation-accrual years granted past the publication span


@dataclass(frozen=True, slots=True)
class WindowSpec:
    """Publication span and citation cutoff for one evaluation year."""

    eval_year: int
    pub_start: int
    pub_end: int
    citation_cutoff: int

    def __post_init__(self) -> None:
        if not self.pub_start <= self.pub_end <= self.citation_cutoff:
            raise ValueError(
                f"window requires pub_start <= pub_end <= citation_cutoff, got "
                f"({self.pub_start}, {self.pub_end}, {self.citation_cutoff})"
            )


def standard_window(eval_year: int) -> WindowSpec:
    """Window for eval_year: publications from [Y-6, Y-2], citations through Y."""
    pub_end = eval_year - GRACE_YEARS
    return WindowSpec(
        eval_year=eval_year,
        pub_start=pub_end - (PUBLICATION_SPAN - 1),
        pub_end=pub_end,
        citation_cutoff=eval_year,
    )


def lifetime_window(profile: AuthorProfile, eval_year: int) -> WindowSpec:
    """Window spanning the whole career: first publication year through eval_year.

    Informational only. Career-span windows are not comparable across
    researchers whose careers cover different calendar periods, because
    earlier cohorts have had more time to accumulate citations; prefer
    :func:`standard_window` for cross-researcher comparison.
    """
    first = profile.first_pub_year
    if first is None:
        raise ValueError(
            f"author {profile.author_id!r} has no publications; "
            "lifetime window is undefined"
        )
    return WindowSpec(
        eval_year=eval_year,
        pub_start=first,
        pub_end=eval_year,
        citation_cutoff=eval_year,
    )


@dataclass(frozen=True, slots=True)
class WindowItem:
    """One windowed publication: accumulated citations and author count."""

    pub_id: str
    citations: int
    author_count: int


@dataclass(frozen=True, slots=True)
class WindowedRecord:
    """Per-author snapshot for one evaluation year.

    Items are ordered by descending citations, ties broken by ascending
    pub_id, so every downstream metric and profile is deterministic.
    """

    author_id: str
    eval_year: int
    items: tuple[WindowItem, ...]

    @property
    def pub_count(self) -> int:
        return len(self.items)


def build_window(
    profile: AuthorProfile,
    spec: WindowSpec,
    discard_types: AbstractSet[DocType] = DEFAULT_DISCARD_TYPES,
) -> WindowedRecord:
    """Select the profile's publications inside the window and accumulate citations.

    Selection is by publication year only: a work published after pub_end is
    excluded even if its citations fall inside the window years. Citations
    are summed through citation_cutoff inclusive. An author with no
    qualifying publications yields an empty record, not an error.
    """
    start, end, cutoff = spec.pub_start, spec.pub_end, spec.citation_cutoff
    items = []
    for pub in profile.publications:
        if pub.year < start or pub.year > end:
            continue
        if pub.doc_type in discard_types:
            continue
        cited = sum(n for y, n in pub.citations_by_year.items() if y <= cutoff)
        items.append(WindowItem(pub.pub_id, cited, pub.author_count))
    items.sort(key=lambda item: (-item.citations, item.pub_id))
    return WindowedRecord(profile.author_id, spec.eval_year, tuple(items))
