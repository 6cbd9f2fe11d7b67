"""Corpus interchange format: newline-delimited JSON, one author per line.

Each line is a UTF-8 JSON object:

    {"author_id": "a1", "display_name": "Ada", "field": "biology",
     "publications": [{"pub_id": "p1", "year": 2014, "n_authors": 3,
                       "doc_type": "article",
                       "citations_by_year": {"2015": 4, "2016": 9}}]}

Year keys in citations_by_year are strings in serialized form and integers
in memory. A publication may carry an optional "external" object; it is
reserved and currently ignored (per-author external metric columns travel in
a separate table, see :func:`read_metric_table`). Unknown keys are ignored
with a warning count. Writing is canonical: authors sorted by author_id,
fixed key order, citation years sorted numerically, compact separators, so
that write(parse(write(c))) == write(c) byte for byte.

Lenient parsing skips malformed author records and counts them; strict
parsing raises on the first violation with line number and field path.
Duplicate author ids are an error in both modes.
"""
from __future__ import annotations

import csv
import json
from pathlib import Path
from typing import Any, Iterable

from .model import (
    AuthorProfile,
    Corpus,
    DocType,
    Publication,
    ValidationReport,
    validate_corpus,
)

CORPUS_EXTENSION = ".capjsonl"

_AUTHOR_KEYS = {"author_id", "display_name", "field", "publications"}
_PUB_KEYS = {"pub_id", "year", "n_authors", "doc_type", "citations_by_year", "external"}


class CorpusFormatError(ValueError):
    """A schema violation in an interchange file, with location context."""

    def __init__(self, message: str, *, line: int | None = None, field: str | None = None):
        self.line = line
        self.field = field
        where = []
        if line is not None:
            where.append(f"line {line}")
        if field is not None:
            where.append(f"field {field}")
        suffix = f" ({', '.join(where)})" if where else ""
        super().__init__(message + suffix)


def _require(obj: dict, key: str, kind: type, line: int, path: str) -> Any:
    if key not in obj:
        raise CorpusFormatError("missing required field", line=line, field=f"{path}{key}")
    value = obj[key]
    if kind is int and isinstance(value, bool):
        raise CorpusFormatError("expected integer, got boolean", line=line, field=f"{path}{key}")
    if not isinstance(value, kind):
        raise CorpusFormatError(
            f"expected {kind.__name__}, got {type(value).__name__}",
            line=line,
            field=f"{path}{key}",
        )
    return value


def _publication_from_obj(obj: Any, line: int, index: int, report: ValidationReport) -> Publication:
    path = f"publications[{index}]."
    if not isinstance(obj, dict):
        raise CorpusFormatError("publication entry is not an object", line=line, field=path.rstrip("."))
    pub_id = _require(obj, "pub_id", str, line, path)
    year = _require(obj, "year", int, line, path)
    n_authors = _require(obj, "n_authors", int, line, path)
    doc_type_raw = _require(obj, "doc_type", str, line, path)
    citations_raw = _require(obj, "citations_by_year", dict, line, path)
    try:
        doc_type = DocType(doc_type_raw)
    except ValueError:
        raise CorpusFormatError(
            f"unknown doc_type {doc_type_raw!r}; valid: "
            + ", ".join(d.value for d in DocType),
            line=line,
            field=path + "doc_type",
        ) from None
    citations: dict[int, int] = {}
    for key, count in citations_raw.items():
        try:
            y = int(key)
        except (TypeError, ValueError):
            raise CorpusFormatError(
                f"citation year key {key!r} is not an integer",
                line=line,
                field=path + "citations_by_year",
            ) from None
        if isinstance(count, bool) or not isinstance(count, int):
            raise CorpusFormatError(
                f"citation count for year {key} is not an integer",
                line=line,
                field=path + "citations_by_year",
            )
        citations[y] = count
    report.unknown_fields += sum(1 for k in obj if k not in _PUB_KEYS)
    try:
        return Publication(pub_id, year, n_authors, citations, doc_type)
    except ValueError as exc:
        raise CorpusFormatError(str(exc), line=line, field=path.rstrip(".")) from None


def _author_from_obj(obj: Any, line: int, report: ValidationReport) -> AuthorProfile:
    if not isinstance(obj, dict):
        raise CorpusFormatError("record is not a JSON object", line=line)
    author_id = _require(obj, "author_id", str, line, "")
    display_name = _require(obj, "display_name", str, line, "")
    field = _require(obj, "field", str, line, "")
    pubs_raw = _require(obj, "publications", list, line, "")
    report.unknown_fields += sum(1 for k in obj if k not in _AUTHOR_KEYS)
    publications = tuple(
        _publication_from_obj(p, line, i, report) for i, p in enumerate(pubs_raw)
    )
    try:
        return AuthorProfile(author_id, display_name, field, publications)
    except ValueError as exc:
        raise CorpusFormatError(str(exc), line=line) from None


def _assemble(
    pairs: Iterable[tuple[int, Any]], strict: bool, report: ValidationReport
) -> Corpus:
    """Shared corpus assembly over lazily decoded (line, object) pairs."""
    profiles: list[AuthorProfile] = []
    seen_ids: dict[str, int] = {}
    for line_no, obj in pairs:
        try:
            profile = _author_from_obj(obj, line_no, report)
        except CorpusFormatError:
            if strict:
                raise
            report.skipped_records += 1
            continue
        if profile.author_id in seen_ids:
            raise CorpusFormatError(
                f"duplicate author_id {profile.author_id!r} "
                f"(first seen on line {seen_ids[profile.author_id]})",
                line=line_no,
            )
        seen_ids[profile.author_id] = line_no
        profiles.append(profile)
    return Corpus(tuple(profiles))


def corpus_from_records(
    records: Iterable[Any], strict: bool = False
) -> tuple[Corpus, ValidationReport]:
    """Build a corpus from decoded author record objects.

    This is the adapter surface for data-platform clients: fetch author
    pages however you like, shape each one like a file record (the schema in
    the module docstring, already decoded from JSON), and feed them here.
    Semantics match :func:`parse_corpus`; "line" numbers in errors are
    1-based record indices.
    """
    report = ValidationReport()
    corpus = _assemble(enumerate(records, start=1), strict, report)
    validate_corpus(corpus, report)
    return corpus, report


def parse_corpus(path: str | Path, strict: bool = False) -> tuple[Corpus, ValidationReport]:
    """Parse an interchange file into a corpus plus its validation report.

    Records are streamed line by line, so parsing memory is bounded by the
    largest single record plus the corpus being built. Lenient mode
    (default) skips malformed records, counting them in the report; strict
    mode raises :class:`CorpusFormatError` at the first violation. Duplicate
    author ids raise in both modes. The returned report also includes the
    corpus-level anomaly counts from :func:`validate_corpus`.
    """
    report = ValidationReport()

    def decoded(handle) -> Iterable[tuple[int, Any]]:
        for line_no, raw in enumerate(handle, start=1):
            text = raw.strip()
            if not text:
                continue
            try:
                yield line_no, json.loads(text)
            except json.JSONDecodeError as exc:
                if strict:
                    raise CorpusFormatError(
                        f"invalid JSON: {exc.msg}", line=line_no
                    ) from None
                report.skipped_records += 1

    with open(path, encoding="utf-8") as handle:
        corpus = _assemble(decoded(handle), strict, report)
    validate_corpus(corpus, report)
    return corpus, report


def _publication_to_obj(pub: Publication) -> dict:
    return {
        "pub_id": pub.pub_id,
        "year": pub.year,
        "n_authors": pub.author_count,
        "doc_type": pub.doc_type.value,
        "citations_by_year": {
            str(y): pub.citations_by_year[y] for y in sorted(pub.citations_by_year)
        },
    }


def author_to_line(author: AuthorProfile) -> str:
    """Canonical single-line JSON form of one author record."""
    obj = {
        "author_id": author.author_id,
        "display_name": author.display_name,
        "field": author.field,
        "publications": [_publication_to_obj(p) for p in author.publications],
    }
    return json.dumps(obj, ensure_ascii=False, separators=(",", ":"))


def write_corpus(corpus: Corpus, path: str | Path) -> None:
    """Write the canonical serialization; parse(write(c)) reproduces c."""
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        for author in corpus.authors:  # already sorted by author_id
            handle.write(author_to_line(author))
            handle.write("\n")


def read_metric_table(path: str | Path) -> dict[tuple[str, int], dict[str, float]]:
    """Read externally supplied metric columns keyed by (author_id, eval_year).

    The file is comma-delimited with header ``author_id,eval_year,<name>...``.
    Blank cells mean the metric is undefined for that author and year.
    """
    table: dict[tuple[str, int], dict[str, float]] = {}
    with open(path, encoding="utf-8", newline="") as handle:
        reader = csv.reader(handle)
        try:
            header = next(reader)
        except StopIteration:
            raise CorpusFormatError("metric table is empty", line=1) from None
        if header[:2] != ["author_id", "eval_year"]:
            raise CorpusFormatError(
                "metric table header must start with author_id,eval_year",
                line=1,
            )
        names = header[2:]
        if not names:
            raise CorpusFormatError("metric table has no metric columns", line=1)
        for line_no, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != len(header):
                raise CorpusFormatError(
                    f"expected {len(header)} columns, got {len(row)}", line=line_no
                )
            try:
                year = int(row[1])
            except ValueError:
                raise CorpusFormatError(
                    f"eval_year {row[1]!r} is not an integer", line=line_no
                ) from None
            values: dict[str, float] = {}
            for name, cell in zip(names, row[2:]):
                if cell == "":
                    continue
                try:
                    values[name] = float(cell)
                except ValueError:
                    raise CorpusFormatError(
                        f"value {cell!r} for {name} is not numeric", line=line_no
                    ) from None
            table[(row[0], year)] = values
    return table
