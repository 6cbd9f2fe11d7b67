from __future__ import annotations

import json

import pytest

from capmetrics import (
    Corpus,
    CorpusFormatError,
    corpus_from_records,
    parse_corpus,
    read_metric_table,
    write_corpus,
)
from capmetrics.synth import SynthConfig, synth_corpus
from conftest import build_fixture_corpus

GOOD_LINE = json.dumps(
    {
        "author_id": "a1",
        "display_name": "Ada",
        "field": "biology",
        "publications": [
            {
                "pub_id": "p1",
                "year": 2014,
                "n_authors": 3,
                "doc_type": "article",
                "citations_by_year": {"2015": 4},
            }
        ],
    }
)


def write_lines(path, *lines):
    path.write_text("".join(line + "\n" for line in lines), encoding="utf-8")
    return path


class TestParse:
    def test_empty_file(self, tmp_path):
        corpus, report = parse_corpus(write_lines(tmp_path / "c.capjsonl"))
        assert len(corpus) == 0
        assert report.total_warnings == 0

    def test_good_line(self, tmp_path):
        corpus, report = parse_corpus(write_lines(tmp_path / "c.capjsonl", GOOD_LINE))
        assert corpus.by_id["a1"].publications[0].citations_by_year == {2015: 4}
        assert report.skipped_records == 0

    def test_missing_n_authors_strict_names_field(self, tmp_path):
        obj = json.loads(GOOD_LINE)
        del obj["publications"][0]["n_authors"]
        path = write_lines(tmp_path / "c.capjsonl", json.dumps(obj))
        with pytest.raises(CorpusFormatError, match=r"publications\[0\]\.n_authors"):
            parse_corpus(path, strict=True)

    def test_missing_n_authors_lenient_skips(self, tmp_path):
        obj = json.loads(GOOD_LINE)
        del obj["publications"][0]["n_authors"]
        path = write_lines(tmp_path / "c.capjsonl", json.dumps(obj), GOOD_LINE.replace("a1", "a2"))
        corpus, report = parse_corpus(path)
        assert report.skipped_records == 1
        assert [a.author_id for a in corpus.authors] == ["a2"]

    def test_strict_reports_line_number(self, tmp_path):
        path = write_lines(tmp_path / "c.capjsonl", GOOD_LINE, "{broken")
        with pytest.raises(CorpusFormatError, match="line 2"):
            parse_corpus(path, strict=True)

    def test_duplicate_author_id_always_fatal(self, tmp_path):
        path = write_lines(tmp_path / "c.capjsonl", GOOD_LINE, GOOD_LINE)
        with pytest.raises(CorpusFormatError, match="duplicate author_id"):
            parse_corpus(path, strict=False)

    def test_unknown_keys_warned_and_ignored(self, tmp_path):
        obj = json.loads(GOOD_LINE)
        obj["mystery"] = 1
        obj["publications"][0]["bonus"] = 2
        corpus, report = parse_corpus(write_lines(tmp_path / "c.capjsonl", json.dumps(obj)))
        assert report.unknown_fields == 2
        assert len(corpus) == 1

    def test_reserved_external_key_tolerated(self, tmp_path):
        obj = json.loads(GOOD_LINE)
        obj["publications"][0]["external"] = {"composite": 1.5}
        corpus, report = parse_corpus(write_lines(tmp_path / "c.capjsonl", json.dumps(obj)))
        assert report.unknown_fields == 0
        assert len(corpus) == 1

    def test_unknown_doc_type_rejected(self, tmp_path):
        path = write_lines(tmp_path / "c.capjsonl", GOOD_LINE.replace("article", "poem"))
        with pytest.raises(CorpusFormatError, match="doc_type"):
            parse_corpus(path, strict=True)

    def test_bad_citation_year_key(self, tmp_path):
        path = write_lines(tmp_path / "c.capjsonl", GOOD_LINE.replace('"2015"', '"soon"'))
        with pytest.raises(CorpusFormatError, match="citation year"):
            parse_corpus(path, strict=True)

    def test_domain_violation_carries_location(self, tmp_path):
        path = write_lines(tmp_path / "c.capjsonl", GOOD_LINE.replace('"n_authors": 3', '"n_authors": 0'))
        with pytest.raises(CorpusFormatError, match="line 1"):
            parse_corpus(path, strict=True)

    def test_blank_lines_skipped(self, tmp_path):
        corpus, _ = parse_corpus(write_lines(tmp_path / "c.capjsonl", "", GOOD_LINE, ""))
        assert len(corpus) == 1


class TestWrite:
    def test_round_trip_identity(self, tmp_path, fixture_corpus):
        path = tmp_path / "c.capjsonl"
        write_corpus(fixture_corpus, path)
        parsed, _ = parse_corpus(path)
        assert parsed == fixture_corpus

    def test_golden_parses_to_fixture(self, fixture_corpus_path):
        corpus, _ = parse_corpus(fixture_corpus_path)
        assert corpus == build_fixture_corpus()

    def test_fixture_matches_checked_in_golden(self, tmp_path, fixture_corpus_path):
        path = tmp_path / "c.capjsonl"
        write_corpus(build_fixture_corpus(), path)
        assert path.read_bytes() == fixture_corpus_path.read_bytes()

    def test_write_parse_write_idempotent(self, tmp_path, fixture_corpus_path):
        first = tmp_path / "a.capjsonl"
        second = tmp_path / "b.capjsonl"
        corpus, _ = parse_corpus(fixture_corpus_path)
        write_corpus(corpus, first)
        reparsed, _ = parse_corpus(first)
        write_corpus(reparsed, second)
        assert first.read_bytes() == second.read_bytes()

    def test_empty_corpus_empty_file(self, tmp_path):
        path = tmp_path / "c.capjsonl"
        write_corpus(Corpus(()), path)
        assert path.read_bytes() == b""

    @pytest.mark.parametrize("seed", [0, 7, 99])
    def test_round_trip_on_generated_corpora(self, tmp_path, seed):
        corpus = synth_corpus(
            SynthConfig(
                seed=seed,
                authors_per_field={"biology": 5, "economics": 4},
                spam_rate=0.15,
                career_start_min=1990,
                career_start_max=2014,
                final_year=2020,
            )
        )
        path = tmp_path / "c.capjsonl"
        write_corpus(corpus, path)
        parsed, _ = parse_corpus(path)
        assert parsed == corpus


class TestCorpusFromRecords:
    """The adapter seam: decoded record objects in, corpus out."""

    def test_matches_file_parse(self, tmp_path, fixture_corpus_path):
        from_file, file_report = parse_corpus(fixture_corpus_path)
        records = [
            json.loads(line)
            for line in fixture_corpus_path.read_text().splitlines()
            if line
        ]
        from_records, record_report = corpus_from_records(records)
        assert from_records == from_file
        assert record_report.as_dict() == file_report.as_dict()

    def test_strict_reports_record_index(self):
        good = json.loads(GOOD_LINE)
        bad = json.loads(GOOD_LINE.replace("a1", "a2"))
        del bad["publications"][0]["year"]
        with pytest.raises(CorpusFormatError, match="line 2"):
            corpus_from_records([good, bad], strict=True)

    def test_duplicate_ids_fatal(self):
        record = json.loads(GOOD_LINE)
        with pytest.raises(CorpusFormatError, match="duplicate author_id"):
            corpus_from_records([record, record])

    def test_accepts_any_iterable(self):
        corpus, _ = corpus_from_records(iter([json.loads(GOOD_LINE)]))
        assert len(corpus) == 1


class TestMetricTable:
    def test_reads_columns(self, tmp_path):
        path = write_lines(
            tmp_path / "m.csv",
            "author_id,eval_year,composite,extra",
            "a1,2020,1.25,7",
            "a2,2020,,3",
        )
        table = read_metric_table(path)
        assert table[("a1", 2020)] == {"composite": 1.25, "extra": 7.0}
        assert table[("a2", 2020)] == {"extra": 3.0}  # blank cell means undefined

    def test_header_required(self, tmp_path):
        path = write_lines(tmp_path / "m.csv", "who,when,composite", "a1,2020,1")
        with pytest.raises(CorpusFormatError, match="header"):
            read_metric_table(path)

    def test_no_metric_columns(self, tmp_path):
        path = write_lines(tmp_path / "m.csv", "author_id,eval_year")
        with pytest.raises(CorpusFormatError, match="no metric columns"):
            read_metric_table(path)

    def test_bad_value(self, tmp_path):
        path = write_lines(
            tmp_path / "m.csv", "author_id,eval_year,composite", "a1,2020,high"
        )
        with pytest.raises(CorpusFormatError, match="not numeric"):
            read_metric_table(path)

    def test_bad_year(self, tmp_path):
        path = write_lines(
            tmp_path / "m.csv", "author_id,eval_year,composite", "a1,soon,1.0"
        )
        with pytest.raises(CorpusFormatError, match="not an integer"):
            read_metric_table(path)
