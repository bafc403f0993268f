"""Indicator detection and Table-style aggregation of explanation quality."""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from decimal import ROUND_HALF_UP, Decimal
from typing import Iterable

from .corpus import Corpus
from .explain import Explanation

INDICATORS = (
    "synonym", "j_modifier", "subject", "object", "hypernym", "hyponym", "meronym",
    "holonym", "a_modifier", "such_as", "troponym", "opposite", "pp", "infrequent",
    "data_issues",
)
LABELS = {
    "synonym": "synonym", "j_modifier": "J modifier", "subject": "subject",
    "object": "object", "hypernym": "hypernym", "hyponym": "hyponym",
    "meronym": "meronym", "holonym": "holonym", "a_modifier": "A modifier",
    "such_as": "(such) as", "troponym": "troponym", "opposite": "opposite", "pp": "PP",
    "infrequent": "infrequent", "data_issues": "data issues",
}
POS_COLUMNS = ("N", "J", "V")
QUALITIES = ("good", "post-edit", "bad")

APPLICABLE = {
    "N": ("synonym", "j_modifier", "subject", "object", "hypernym", "hyponym", "meronym",
          "holonym", "infrequent", "data_issues"),
    "J": ("synonym", "a_modifier", "such_as", "opposite", "infrequent", "data_issues"),
    "V": ("synonym", "subject", "object", "a_modifier", "troponym", "pp", "infrequent",
          "data_issues"),
}

# line keys or source names whose presence sets a flag
EVIDENCE = {
    "synonym": {"thesaurus"},
    "j_modifier": {"can_be"},
    "subject": {"can_do", "typical_subject"},
    "object": {"done_to", "typical_object"},
    "hypernym": {"hypernym_of"},
    "hyponym": {"hyponym_example"},
    "meronym": {"meronym_have", "meronym_contain"},
    "holonym": {"holonym_have"},
    "a_modifier": {"how"},
    "such_as": {"such_as"},
    "opposite": {"opposite"},
    "pp": {"with_prep"},
}

DEFAULT_INFREQUENCY_THRESHOLD = 5.0  # occurrences per million tokens


class EvaluationError(ValueError):
    pass


@dataclass(frozen=True)
class AnnotationRecord:
    headword: str
    pos: str
    quality: str
    data_issues: bool = False
    notes: str = ""
    troponym: bool | None = None

    def __post_init__(self):
        if self.quality not in QUALITIES:
            raise EvaluationError(f"{self.headword}: quality must be one of {QUALITIES}, "
                                  f"not {self.quality!r}")


@dataclass
class IndicatorSet:
    headword: str
    pos: str
    flags: dict[str, bool] = field(default_factory=dict)
    lang: str = ""


def _parse_bool(value: str, where: str) -> bool:
    v = value.strip().lower()
    if v in ("1", "true", "yes", "y"):
        return True
    if v in ("0", "false", "no", "n", ""):
        return False
    raise EvaluationError(f"{where}: not a boolean: {value!r}")


def read_annotations(lines: Iterable[str]) -> list[AnnotationRecord]:
    """Read the annotation TSV (header ``headword pos quality data_issues notes``,
    optionally followed by a ``troponym`` column)."""
    reader = csv.reader(lines, delimiter="\t", quoting=csv.QUOTE_NONE)
    try:
        header = [h.strip() for h in next(reader)]
    except StopIteration:
        return []
    required = ["headword", "pos", "quality", "data_issues", "notes"]
    missing = [h for h in required if h not in header]
    if missing:
        raise EvaluationError(f"annotation header lacks {', '.join(missing)}")
    col = {h: i for i, h in enumerate(header)}
    records = []
    for lineno, row in enumerate(reader, 2):
        if not row or not any(cell.strip() for cell in row):
            continue
        row = row + [""] * (len(header) - len(row))
        where = f"annotations line {lineno}"
        tropo = None
        if "troponym" in col and row[col["troponym"]].strip():
            tropo = _parse_bool(row[col["troponym"]], where)
        records.append(AnnotationRecord(
            row[col["headword"]], row[col["pos"]], row[col["quality"]].strip(),
            _parse_bool(row[col["data_issues"]], where), row[col["notes"]], tropo))
    return records


def detect_indicators(expl: Explanation, corpus: Corpus,
                      infrequency_threshold: float = DEFAULT_INFREQUENCY_THRESHOLD,
                      annotation: AnnotationRecord | None = None, lang: str = "") -> IndicatorSet:
    """Presence flags for one explanation.

    Troponym and data-issue flags cannot be detected automatically; they are
    copied from ``annotation`` (False without one).  Flags that do not apply
    to the headword's POS are left out.
    """
    head, pos = expl.headword
    evidence = set()
    items = []
    for line in expl.lines:
        evidence.add(line.key)
        evidence.update(line.sources)
        items.extend(line.items)
    unknown = sorted({i for i in items if corpus.freq("lemma", i) == 0})
    if unknown:
        raise EvaluationError(f"{head}: items not in corpus: {', '.join(unknown)}")
    n = len(corpus)
    infrequent = any(corpus.freq("lemma", i) * 1e6 / n < infrequency_threshold for i in items)

    flags = {}
    for name in APPLICABLE.get(pos, ("synonym", "infrequent", "data_issues")):
        if name == "infrequent":
            flags[name] = infrequent
        elif name == "data_issues":
            flags[name] = bool(annotation and annotation.data_issues)
        elif name == "troponym":
            flags[name] = bool(annotation and annotation.troponym)
        else:
            flags[name] = bool(evidence & EVIDENCE[name])
    return IndicatorSet(head, pos, flags, lang)


def percent(numerator: int, denominator: int) -> Decimal:
    """100 * numerator / denominator, rounded half-up to two decimals."""
    if denominator <= 0:
        raise EvaluationError("denominator must be positive")
    return (Decimal(100 * numerator) / Decimal(denominator)).quantize(
        Decimal("0.01"), rounding=ROUND_HALF_UP)


@dataclass(frozen=True)
class Cell:
    numerator: int
    denominator: int

    @property
    def percent(self) -> Decimal:
        return percent(self.numerator, self.denominator)


@dataclass
class RatioTable:
    title: str
    rows: tuple[str, ...]
    columns: tuple[str, ...]
    cells: dict[tuple[str, str], Cell]
    labels: dict[str, str] = field(default_factory=dict)

    def __getitem__(self, key: tuple[str, str]) -> Cell:
        return self.cells[key]

    def get(self, row: str, col: str) -> Cell | None:
        return self.cells.get((row, col))

    def to_dict(self) -> dict:
        return {
            "title": self.title,
            "columns": list(self.columns),
            "rows": [
                {"row": r, "cells": {c: ({"numerator": cell.numerator,
                                          "denominator": cell.denominator,
                                          "percent": f"{cell.percent:.2f}"}
                                         if (cell := self.get(r, c)) else None)
                                     for c in self.columns}}
                for r in self.rows],
        }

    def format_text(self) -> str:
        names = [self.labels.get(r, r) for r in self.rows]
        w0 = max([len(self.title)] + [len(n) for n in names])
        body = [[(f"{cell.percent:.2f}%" if (cell := self.get(r, c)) else "-")
                 for c in self.columns] for r in self.rows]
        widths = [max([len(c)] + [len(row[j]) for row in body]) for j, c in enumerate(self.columns)]
        out = [self.title.ljust(w0) + "".join("  " + c.rjust(w) for c, w in zip(self.columns, widths))]
        out.append("-" * len(out[0]))
        for name, row in zip(names, body):
            out.append(name.ljust(w0) + "".join("  " + v.rjust(w) for v, w in zip(row, widths)))
        return "\n".join(out) + "\n"


def aggregate_indicators(sets: list[IndicatorSet], title: str = "Indicators") -> RatioTable:
    langs = {s.lang for s in sets}
    if len(langs) > 1:
        raise EvaluationError(f"indicator sets mix languages: {sorted(langs)}")
    by_pos: dict[str, list[IndicatorSet]] = {}
    for s in sets:
        by_pos.setdefault(s.pos, []).append(s)
    columns = tuple(p for p in POS_COLUMNS if p in by_pos) + tuple(
        sorted(p for p in by_pos if p not in POS_COLUMNS))
    cells = {}
    for pos in columns:
        group = by_pos[pos]
        for name in INDICATORS:
            present = [s for s in group if name in s.flags]
            if present:
                cells[(name, pos)] = Cell(sum(1 for s in present if s.flags[name]), len(group))
    rows = tuple(name for name in INDICATORS if any((name, p) in cells for p in columns))
    return RatioTable(title, rows, columns, cells, LABELS)


def aggregate_quality(records: list[AnnotationRecord], title: str = "Quality") -> RatioTable:
    seen = set()
    for r in records:
        key = (r.headword, r.pos)
        if key in seen:
            raise EvaluationError(f"duplicate annotation for {r.headword} ({r.pos})")
        seen.add(key)
    by_pos: dict[str, list[AnnotationRecord]] = {}
    for r in records:
        by_pos.setdefault(r.pos, []).append(r)
    rows = tuple(p for p in POS_COLUMNS if p in by_pos) + tuple(
        sorted(p for p in by_pos if p not in POS_COLUMNS))
    cells = {}
    for pos in rows:
        group = by_pos[pos]
        for q in QUALITIES:
            cells[(pos, q)] = Cell(sum(1 for r in group if r.quality == q), len(group))
    return RatioTable(title, rows, QUALITIES, cells)


def coverage_rate(results: Iterable[Explanation]) -> Decimal:
    """Percentage of headwords whose explanation carries data."""
    results = list(results)
    if not results:
        raise EvaluationError("coverage of an empty headword list is undefined")
    return percent(sum(1 for r in results if r.has_data), len(results))


def build_report(indicators: RatioTable, quality: RatioTable | None,
                 coverage: Decimal | None, n_headwords: int) -> dict:
    return {
        "headwords": n_headwords,
        "coverage": None if coverage is None else f"{coverage:.2f}",
        "indicators": indicators.to_dict(),
        "quality": None if quality is None else quality.to_dict(),
    }


def format_report(indicators: RatioTable, quality: RatioTable | None,
                  coverage: Decimal | None) -> str:
    parts = [indicators.format_text()]
    if quality is not None:
        parts.append(quality.format_text())
    if coverage is not None:
        parts.append(f"coverage: {coverage:.2f}%\n")
    return "\n".join(parts)
