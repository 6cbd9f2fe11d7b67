"""Delimited and human-readable table emission.

Every delimited file starts with one provenance comment line naming the tool
version, the source corpus digest, and the command configuration, so any
table can be traced back to its inputs. Nothing in the output depends on
time of day or machine, which keeps reruns byte-identical.

Reals are written with six decimals; integers verbatim; undefined values as
empty cells (never NaN).
"""
from __future__ import annotations

import csv
import hashlib
from pathlib import Path
from typing import Iterable, Sequence

from . import __version__

Cell = float | int | str | None


def file_digest(path: str | Path) -> str:
    """Short sha256 digest of a file's bytes."""
    digest = hashlib.sha256()
    with open(path, "rb") as handle:
        for block in iter(lambda: handle.read(1 << 20), b""):
            digest.update(block)
    return digest.hexdigest()[:16]


def provenance_line(command: str, corpus_digest: str | None, params: dict) -> str:
    parts = [f"capmetrics={__version__}", f"command={command}"]
    if corpus_digest:
        parts.append(f"corpus=sha256:{corpus_digest}")
    for key in sorted(params):
        value = params[key]
        if value is not None:
            parts.append(f"{key}={value}")
    return "# " + " ".join(parts)


def format_cell(value: Cell) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return f"{value:.6f}"
    return str(value)


def write_delimited(
    path: str | Path,
    header: Sequence[str],
    rows: Iterable[Sequence[Cell]],
    provenance: str,
) -> None:
    with open(path, "w", encoding="utf-8", newline="") as handle:
        handle.write(provenance + "\n")
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([format_cell(cell) for cell in row])


def render_table(header: Sequence[str], rows: Sequence[Sequence[Cell]]) -> str:
    """Fixed-width text table for standard output."""
    cells = [[format_cell(c) for c in row] for row in rows]
    widths = [len(h) for h in header]
    for row in cells:
        for i, cell in enumerate(row):
            widths[i] = max(widths[i], len(cell))
    lines = [
        "  ".join(h.ljust(w) for h, w in zip(header, widths)).rstrip(),
        "  ".join("-" * w for w in widths),
    ]
    for row in cells:
        lines.append("  ".join(c.ljust(w) for c, w in zip(row, widths)).rstrip())
    return "\n".join(lines)
