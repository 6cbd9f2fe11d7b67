"""Acceptance suite: one test per release criterion, one PASS/FAIL line each.

Run with `pytest tests/test_acceptance.py -v -s` to see the per-criterion
lines. Criterion 10 needs a real corpus and is skipped unless the
CAPMETRICS_REAL_CORPUS environment variable points at one; it documents a
data-dependent expectation and does not gate releases.
"""
from __future__ import annotations

import os
import random
import time
from contextlib import contextmanager
from pathlib import Path

import pytest

from capmetrics import (
    SynthConfig,
    build_window,
    cap,
    cap_variants,
    cp,
    evaluate_year,
    factor_correlations,
    h_frac,
    h_index,
    mean_citations,
    parse_corpus,
    pearson,
    rank_citation_profile,
    standard_window,
    strip_spam,
    synth_corpus,
    top_cohorts,
    total_citations,
    write_corpus,
)
from capmetrics.cli import EXIT_OK, main
from capmetrics.windows import WindowItem, WindowedRecord
import oracles

SEED = 20260808


@contextmanager
def criterion(number: int, label: str):
    try:
        yield
    except BaseException:
        print(f"[criterion {number:02d}] FAIL {label}")
        raise
    print(f"[criterion {number:02d}] PASS {label}")


def seeded_records(count: int, seed: int = SEED) -> list[WindowedRecord]:
    rng = random.Random(seed)
    return [oracles.random_record(rng, max_size=200) for _ in range(count)]


def test_criterion_1_metric_ordering_chain():
    with criterion(1, "cap <= cp <= h <= pub_count on 10,000 random records in < 5 s"):
        start = time.perf_counter()
        violations = 0
        for record in seeded_records(10_000):
            if not 0 <= cap(record) <= cp(record) <= h_index(record) <= record.pub_count:
                violations += 1
        elapsed = time.perf_counter() - start
        assert violations == 0
        assert elapsed < 5.0, f"took {elapsed:.2f}s"


def test_criterion_2_oracle_equivalence():
    with criterion(2, "production metrics equal naive evaluators on 10,000 records in < 10 s"):
        records = seeded_records(10_000, seed=SEED + 1)
        start = time.perf_counter()
        for record in records:
            assert cap(record) == oracles.naive_cap(record)
            assert cp(record) == oracles.naive_cp(record)
            assert h_index(record) == oracles.naive_h(record)
            assert h_frac(record) == oracles.naive_h_frac(record)
        elapsed = time.perf_counter() - start
        assert elapsed < 10.0, f"took {elapsed:.2f}s"


def test_criterion_3_rank_citation_profile_reconstruction():
    with criterion(3, "144-publication profile crossing checks give h=62 and cp=26"):
        counts = [150] * 26 + [100] * 36 + [40] * 82
        assert len(counts) == 144
        record = WindowedRecord(
            "profiled", 2020,
            tuple(WindowItem(f"p{i:03d}", c, 1) for i, c in enumerate(counts)),
        )
        gamma = rank_citation_profile(record).counts
        assert gamma[61] >= 62 > gamma[62]  # gamma(62) >= 62 > gamma(63)
        assert gamma[25] >= 144 > gamma[26]  # gamma(26) >= 144 > gamma(27)
        assert h_index(record) == 62
        assert cp(record) == 26


def test_criterion_4_window_semantics():
    with criterion(4, "2020 window selects 2014-2018 and counts citations through 2020"):
        spec = standard_window(2020)
        assert (spec.pub_start, spec.pub_end, spec.citation_cutoff) == (2014, 2018, 2020)
        from capmetrics import AuthorProfile, Publication

        def one_pub_record(year):
            profile = AuthorProfile(
                "a", "A", "biology",
                (Publication("p", year, 1, {year + 1: 3}),),
            )
            return build_window(profile, spec)

        assert one_pub_record(2013).pub_count == 0  # Y-7 excluded
        assert one_pub_record(2014).pub_count == 1  # Y-6 included
        assert one_pub_record(2018).pub_count == 1  # Y-2 included
        assert one_pub_record(2019).pub_count == 0  # Y-1 excluded

        profile = AuthorProfile(
            "a", "A", "biology",
            (Publication("p", 2016, 1, {2018: 3, 2020: 2, 2021: 9}),),
        )
        assert build_window(profile, spec).items[0].citations == 5


def test_criterion_5_monotonicity_suite():
    with criterion(5, "10,000 perturbation trials: dud penalty, citation and author monotonicity"):
        rng = random.Random(SEED + 2)
        for trial in range(10_000):
            record = oracles.random_record(rng, max_size=60)
            kind = trial % 3
            if kind == 0:
                extended = WindowedRecord(
                    record.author_id, record.eval_year,
                    record.items + (WindowItem("zz-dud", 0, 1),),
                )
                assert cap(extended) <= cap(record)
            elif record.items:
                i = rng.randrange(len(record.items))
                items = list(record.items)
                old = items[i]
                if kind == 1:
                    items[i] = WindowItem(old.pub_id, old.citations + rng.randint(1, 40), old.author_count)
                    bumped = WindowedRecord(record.author_id, record.eval_year, tuple(items))
                    assert cap(bumped) >= cap(record)
                    assert cp(bumped) >= cp(record)
                    assert h_index(bumped) >= h_index(record)
                    assert h_frac(bumped) >= h_frac(record)
                    assert total_citations(bumped) >= total_citations(record)
                    assert (mean_citations(bumped) or 0.0) >= (mean_citations(record) or 0.0)
                else:
                    items[i] = WindowItem(old.pub_id, old.citations, old.author_count + rng.randint(1, 30))
                    bumped = WindowedRecord(record.author_id, record.eval_year, tuple(items))
                    assert cap(bumped) <= cap(record)
                    assert h_frac(bumped) <= h_frac(record)
                    assert cp(bumped) == cp(record)
                    assert h_index(bumped) == h_index(record)
                    assert total_citations(bumped) == total_citations(record)


def _spam_config(spam_rate: float) -> SynthConfig:
    return SynthConfig(
        seed=SEED,
        authors_per_field={"biology": 40, "physics": 40},
        career_start_min=1995,
        career_start_max=2012,
        final_year=2020,
        pubs_per_year=3.0,
        spam_rate=spam_rate,
    )


def test_criterion_6_spam_sensitivity_contract():
    with criterion(6, "cap_prime on spam-injected corpus equals cap on spam-free twin"):
        injected = synth_corpus(_spam_config(0.3))
        twin = synth_corpus(_spam_config(0.0))
        assert strip_spam(injected) == twin
        lo = injected.year_range[0]
        checked = 0
        for year in range(lo, 2021):
            spec = standard_window(year)
            for noisy, clean in zip(injected.authors, twin.authors):
                noisy_record = build_window(noisy, spec)
                prime = cap_variants(noisy_record).prime
                assert prime == cap(build_window(clean, spec))
                assert prime >= cap(noisy_record)
                checked += 1
        assert checked >= 1000


def test_criterion_7_pearson_against_independent_implementation():
    with criterion(7, "pearson matches numpy to 1e-12; symmetry and affine rule to 1e-9"):
        rng = random.Random(SEED + 3)
        for _ in range(1_000):
            n = rng.randint(3, 200)
            xs = [rng.uniform(-100, 100) for _ in range(n)]
            ys = [rng.uniform(-100, 100) for _ in range(n)]
            ours = pearson(xs, ys)
            assert ours.r is not None
            assert abs(ours.r) <= 1.0 + 1e-12
            assert abs(ours.r - oracles.naive_pearson(xs, ys)) < 1e-12
            assert pearson(ys, xs).r == ours.r
            a, b = rng.uniform(-5, 5) or 1.0, rng.uniform(-10, 10)
            scaled = pearson([a * x + b for x in xs], ys)
            expected = ours.r if a > 0 else -ours.r
            assert abs(scaled.r - expected) < 1e-9
        degenerate = pearson([3.0, 3.0, 3.0], [1.0, 2.0, 3.0])
        assert degenerate.r is None and degenerate.reason == "zero variance"


def test_criterion_8_determinism_and_round_trip(tmp_path):
    with criterion(8, "parse/write identity and byte-identical CLI reruns at 1 and 4 threads"):
        fixture = Path(__file__).parent / "data" / "fixture.capjsonl"
        for source in [fixture]:
            corpus, _ = parse_corpus(source)
            rewritten = tmp_path / "rewritten.capjsonl"
            write_corpus(corpus, rewritten)
            reparsed, _ = parse_corpus(rewritten)
            assert reparsed == corpus

        demo = tmp_path / "demo.capjsonl"
        write_corpus(synth_corpus(_spam_config(0.2)), demo)
        reparsed, _ = parse_corpus(demo)
        assert reparsed == synth_corpus(_spam_config(0.2))

        outs = {}
        for name, jobs in (("a", 1), ("b", 1), ("c", 4)):
            out = tmp_path / name
            for command in (
                ["compute", "--year", "2019"],
                ["rank", "--year", "2019", "--top", "10"],
                ["correlate", "--year", "2019", "--top", "20"],
            ):
                code = main(
                    command
                    + ["--corpus", str(demo), "--jobs", str(jobs), "--out", str(out),
                       "--format", "delimited,plot"]
                )
                assert code == EXIT_OK
            outs[name] = out
        names = sorted(p.name for p in outs["a"].iterdir())
        assert len(names) >= 10  # tables and figures for all three commands
        for file_name in names:
            reference = (outs["a"] / file_name).read_bytes()
            assert (outs["b"] / file_name).read_bytes() == reference, file_name
            assert (outs["c"] / file_name).read_bytes() == reference, file_name


def test_criterion_9_desk_scale_throughput():
    with criterion(9, "13,000 authors / 3,000,000 publications metered in < 60 s"):
        config = SynthConfig(
            seed=SEED,
            authors_per_field={
                "biology": 3250,
                "computer-science": 3250,
                "economics": 3250,
                "physics": 3250,
            },
            career_start_min=1975,
            career_start_max=2015,
            final_year=2022,
            pubs_per_year=8.6,
            citation_shape=1.5,
        )
        corpus = synth_corpus(config)  # generation is setup, not metered
        assert len(corpus) == 13_000
        total_pubs = sum(len(a.publications) for a in corpus.authors)
        assert total_pubs >= 3_000_000

        start = time.perf_counter()
        evaluation = evaluate_year(corpus, 2021, jobs=2)
        elapsed = time.perf_counter() - start
        assert len(evaluation.metrics) == 13_000
        assert elapsed < 60.0, f"took {elapsed:.2f}s"
        print(f"  ({total_pubs} publications evaluated in {elapsed:.2f}s)")


def test_criterion_10_real_corpus_qualitative_ordering():
    path = os.environ.get("CAPMETRICS_REAL_CORPUS")
    if not path:
        pytest.skip(
            "criterion 10 documents a data-dependent expectation: set "
            "CAPMETRICS_REAL_CORPUS to a real corpus file to run it; it does "
            "not gate releases"
        )
    with criterion(10, "real corpus: r(h, pub_rate) near 0.87 exceeds r(cap, pub_rate) near 0.24"):
        corpus, _ = parse_corpus(path)
        year = corpus.latest_citation_year
        evaluation = evaluate_year(corpus, year)
        author_fields = {a.author_id: a.field for a in corpus.authors}
        cohorts = top_cohorts(evaluation.metrics, author_fields, top_k=100)
        matrices = factor_correlations(evaluation.metrics, evaluation.factors, cohorts)
        pooled = matrices["all-pooled"]
        r_h = pooled.cell("h", "pub_rate").r
        r_cap = pooled.cell("cap", "pub_rate").r
        assert r_h is not None and r_cap is not None
        assert abs(r_h - 0.87) <= 0.15
        assert abs(r_cap - 0.24) <= 0.15
        assert r_h > r_cap
