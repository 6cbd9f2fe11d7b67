from __future__ import annotations

from pathlib import Path

import pytest

from capmetrics import AuthorProfile, Corpus, DocType, Publication

DATA_DIR = Path(__file__).parent / "data"


def pub(pub_id, year, citations, n_authors=1, doc_type=DocType.ARTICLE):
    """Shorthand publication builder; citations is a {year: count} map."""
    return Publication(pub_id, year, n_authors, citations, doc_type)


def build_fixture_corpus() -> Corpus:
    """Small corpus exercising every wrinkle the suite cares about.

    alice carries a pre-publication citation, a suspected capped author
    list, an out-of-window publication and a discarded editorial; bob is an
    empty profile; carol and dave tie on cap in 2020 with different citation
    totals; eve has cap 0 but nonzero cp and h.
    """
    alice = AuthorProfile(
        "alice",
        "Alice A.",
        "biology",
        (
            pub("alice-p1", 2014, {2013: 1, 2015: 10, 2019: 5, 2021: 7}, n_authors=2),
            pub("alice-p2", 2016, {2017: 3, 2018: 2}),
            pub("alice-p3", 2018, {2019: 30}, n_authors=150),
            pub("alice-p4", 2013, {2014: 50}),
            pub("alice-p5", 2017, {2018: 4}, doc_type=DocType.EDITORIAL),
        ),
    )
    bob = AuthorProfile("bob", "Bob B.", "biology", ())
    carol = AuthorProfile(
        "carol",
        "Carol C.",
        "computer-science",
        (
            pub("carol-p1", 2015, {2016: 12}, n_authors=3),
            pub("carol-p2", 2014, {2015: 2, 2016: 1}),
        ),
    )
    dave = AuthorProfile(
        "dave",
        "Dave D.",
        "computer-science",
        (
            pub("dave-p1", 2015, {2016: 20}),
            pub("dave-p2", 2016, {2017: 4}),
        ),
    )
    eve = AuthorProfile(
        "eve",
        "Eve E.",
        "economics",
        (pub("eve-p1", 2018, {2019: 1}),),
    )
    return Corpus((alice, bob, carol, dave, eve))


@pytest.fixture(scope="session")
def fixture_corpus() -> Corpus:
    return build_fixture_corpus()


@pytest.fixture(scope="session")
def fixture_corpus_path() -> Path:
    return DATA_DIR / "fixture.capjsonl"
