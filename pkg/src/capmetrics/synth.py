"""Seeded synthetic corpora for tests, demos, and benchmarks.

The generator is a pure function of its config: the same seed always yields
the same corpus, byte for byte after serialization. Citation counts follow a
discrete Pareto tail so a small number of publications dominate the citation
mass, which is what real corpora look like.

Citations are spread over the years following publication with a fixed decay
profile whose median delay is two years, so every cited publication has
recorded citations by its second year. Activity stops at ``final_year``;
citations that would fall later are dropped, exactly as a database snapshot
taken at the end of ``final_year`` would miss them.

Spam injection models the junk entries that data platforms attach to author
profiles: zero-citation single-author articles. Spam publications draw from
an independent random stream, so the spam-free twin of a corpus (same config
with spam_rate 0) is identical in every real publication; `strip_spam`
recovers that twin from the injected corpus.
"""
from __future__ import annotations

import math
import random
from dataclasses import dataclass
from typing import Mapping

from .model import AuthorProfile, Corpus, DocType, Publication

SPAM_PREFIX = "spam:"

# Fraction of citations arriving at each delay after publication (year 0 is
# the publication year itself). Cumulative share at delay 2 exceeds one half,
# which guarantees any publication with at least one citation is cited by
# its second year.
_DELAY_WEIGHTS = (0.10, 0.20, 0.25, 0.15, 0.10, 0.08, 0.05, 0.04, 0.02, 0.01)
_DELAY_CUMULATIVE = tuple(
    sum(_DELAY_WEIGHTS[: i + 1]) for i in range(len(_DELAY_WEIGHTS))
)

_DOC_TYPE_MIX = (
    (DocType.ARTICLE, 0.82),
    (DocType.CONFERENCE_PAPER, 0.12),
    (DocType.EDITORIAL, 0.03),
    (DocType.COMMENTARY, 0.02),
    (DocType.OTHER, 0.01),
)


@dataclass(frozen=True)
class SynthConfig:
    """Shape parameters for a synthetic corpus.

    authors_per_field maps field label to author count. Careers start
    uniformly in [career_start_min, career_start_max] and run through
    final_year. Publication counts per active year are Poisson with mean
    pubs_per_year. Total citations per publication follow a discrete Pareto
    with tail index citation_shape (smaller is heavier) and minimum
    citation_min; set citation_min >= 1 to guarantee every real publication
    is cited. team_size_mean may be a single number or a per-field map.
    spam_rate is the fraction of entries that are injected junk and must be
    in [0, 1).
    """

    seed: int
    authors_per_field: Mapping[str, int]
    career_start_min: int = 1975
    career_start_max: int = 2015
    final_year: int = 2022
    pubs_per_year: float = 2.0
    citation_shape: float = 1.3
    citation_min: int = 1
    team_size_mean: float | Mapping[str, float] = 4.0
    spam_rate: float = 0.0

    def __post_init__(self) -> None:
        if not self.authors_per_field:
            raise ValueError("authors_per_field must name at least one field")
        if any(n < 1 for n in self.authors_per_field.values()):
            raise ValueError("author counts must be >= 1")
        if not self.career_start_min <= self.career_start_max <= self.final_year:
            raise ValueError(
                "career window must satisfy career_start_min <= career_start_max "
                "<= final_year"
            )
        if self.pubs_per_year <= 0:
            raise ValueError("pubs_per_year must be positive")
        if self.citation_shape <= 0:
            raise ValueError("citation_shape must be positive")
        if self.citation_min < 0:
            raise ValueError("citation_min must be >= 0")
        if not 0.0 <= self.spam_rate < 1.0:
            raise ValueError("spam_rate must be in [0, 1)")

    def team_mean_for(self, field_label: str) -> float:
        if isinstance(self.team_size_mean, Mapping):
            return self.team_size_mean.get(field_label, 4.0)
        return self.team_size_mean


def _poisson(rng: random.Random, mean: float) -> int:
    """Knuth sampler; adequate for the small means used here."""
    if mean <= 0:
        return 0
    if mean > 30:  # normal approximation keeps the loop bounded
        return max(0, int(rng.gauss(mean, math.sqrt(mean)) + 0.5))
    limit = math.exp(-mean)
    k = 0
    product = rng.random()
    while product > limit:
        k += 1
        product *= rng.random()
    return k


def _pareto_count(rng: random.Random, shape: float, minimum: int) -> int:
    """Discrete heavy-tail draw with support {minimum, minimum+1, ...}."""
    return minimum - 1 + int((1.0 - rng.random()) ** (-1.0 / shape))


def _doc_type(rng: random.Random) -> DocType:
    u = rng.random()
    acc = 0.0
    for doc_type, weight in _DOC_TYPE_MIX:
        acc += weight
        if u < acc:
            return doc_type
    return DocType.OTHER


def _spread_citations(total: int, pub_year: int, final_year: int) -> dict[int, int]:
    """Allocate a citation total over post-publication years, deterministically.

    Uses cumulative rounding against the fixed delay profile; years past
    final_year are dropped.
    """
    history: dict[int, int] = {}
    previous = 0
    for delay, cumulative in enumerate(_DELAY_CUMULATIVE):
        year = pub_year + delay
        if year > final_year:
            break
        allotted = int(total * cumulative + 0.5)
        if allotted > previous:
            history[year] = allotted - previous
            previous = allotted
    return history


def synth_corpus(config: SynthConfig) -> Corpus:
    """Generate a corpus; deterministic for a fixed config."""
    rng = random.Random(config.seed)
    rng_spam = random.Random(f"{config.seed}/spam")
    profiles = []
    for field_label in sorted(config.authors_per_field):
        team_mean = max(config.team_mean_for(field_label), 1.0)
        for i in range(config.authors_per_field[field_label]):
            author_id = f"{field_label}-{i:05d}"
            start = rng.randint(config.career_start_min, config.career_start_max)
            pubs = []
            serial = 0
            for year in range(start, config.final_year + 1):
                for _ in range(_poisson(rng, config.pubs_per_year)):
                    total = _pareto_count(rng, config.citation_shape, config.citation_min)
                    pubs.append(
                        Publication(
                            pub_id=f"{author_id}-p{serial:05d}",
                            year=year,
                            author_count=1 + _poisson(rng, team_mean - 1.0),
                            citations_by_year=_spread_citations(
                                total, year, config.final_year
                            ),
                            doc_type=_doc_type(rng),
                        )
                    )
                    serial += 1
            if config.spam_rate > 0.0 and pubs:
                n_spam = int(len(pubs) * config.spam_rate / (1.0 - config.spam_rate) + 0.5)
                for j in range(n_spam):
                    pubs.append(
                        Publication(
                            pub_id=f"{SPAM_PREFIX}{author_id}-{j:04d}",
                            year=rng_spam.randint(start, config.final_year),
                            author_count=1,
                            citations_by_year={},
                            doc_type=DocType.ARTICLE,
                        )
                    )
            profiles.append(
                AuthorProfile(
                    author_id=author_id,
                    display_name=f"{field_label.replace('-', ' ').title()} Author {i}",
                    field=field_label,
                    publications=tuple(pubs),
                )
            )
    return Corpus(tuple(profiles))


def strip_spam(corpus: Corpus) -> Corpus:
    """Remove injected spam entries, recovering the spam-free twin corpus."""
    return Corpus(
        tuple(
            AuthorProfile(
                author_id=a.author_id,
                display_name=a.display_name,
                field=a.field,
                publications=tuple(
                    p for p in a.publications if not p.pub_id.startswith(SPAM_PREFIX)
                ),
            )
            for a in corpus.authors
        )
    )
