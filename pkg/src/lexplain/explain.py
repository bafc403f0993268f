"""Templated word-meaning explanations assembled from word sketches."""

from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from .sketches import Lemma, SketchIndex

SCHEMA_VERSION = 1
NO_DATA = "(no data)"
THESAURUS = "thesaurus"
POS_TEMPLATES = {"N": "noun.tpl", "J": "adjective.tpl", "V": "verb.tpl"}


class TemplateError(ValueError):
    pass


@dataclass(frozen=True)
class Source:
    """One contributor to a line: a relation, an inverted relation (``~rel``) or the thesaurus."""

    name: str
    inverse: bool = False
    limit: int | None = None  # None: use the configured quota

    def __str__(self) -> str:
        s = ("~" if self.inverse else "") + self.name
        return s if self.limit is None else f"{s}:{self.limit}"


@dataclass(frozen=True)
class LineTemplate:
    key: str
    pattern: str
    sources: tuple[Source, ...]


def parse_templates(text: str) -> tuple[LineTemplate, ...]:
    """Parse a template file: ``key<TAB>pattern<TAB>source source ...`` per line."""
    lines = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        if not raw.strip() or raw.lstrip().startswith("#"):
            continue
        parts = raw.split("\t")
        if len(parts) != 3:
            raise TemplateError(f"line {lineno}: expected key, pattern and sources separated by tabs")
        key, pattern, source_text = (p.strip() for p in parts)
        if "%(items)" not in pattern:
            raise TemplateError(f"line {lineno}: pattern lacks %(items)")
        sources = []
        for tok in source_text.split():
            name, _, limit = tok.partition(":")
            inverse = name.startswith("~")
            name = name.lstrip("~")
            if not name:
                raise TemplateError(f"line {lineno}: empty source name")
            try:
                n = int(limit) if limit else None
            except ValueError:
                raise TemplateError(f"line {lineno}: bad limit in {tok!r}") from None
            if n is not None and n < 1:
                raise TemplateError(f"line {lineno}: limit must be >= 1 in {tok!r}")
            sources.append(Source(name, inverse, n))
        if not sources:
            raise TemplateError(f"line {lineno}: no sources")
        if any(t.key == key for t in lines):
            raise TemplateError(f"line {lineno}: duplicate key {key!r}")
        lines.append(LineTemplate(key, pattern, tuple(sources)))
    return tuple(lines)


def load_templates(path=None, pos: str | None = None) -> tuple[LineTemplate, ...]:
    if path is None or str(path) == "builtin":
        text = (resources.files("lexplain") / "data" / "templates" / POS_TEMPLATES[pos]).read_text(
            encoding="utf-8")
    else:
        text = Path(path).read_text(encoding="utf-8")
    return parse_templates(text)


@dataclass(frozen=True)
class ExplanationLine:
    key: str
    pattern: str
    items: tuple[str, ...]
    sources: tuple[str, ...]

    def text(self, head: str) -> str:
        return self.pattern.replace("%(head)", head).replace("%(items)", ", ".join(self.items))


@dataclass(frozen=True)
class Explanation:
    headword: Lemma
    lines: tuple[ExplanationLine, ...] = ()
    no_data: bool = False

    @property
    def has_data(self) -> bool:
        return not self.no_data and bool(self.lines)


def no_data(head: Lemma) -> Explanation:
    return Explanation(tuple(head), (), True)


def compose(head: Lemma, index: SketchIndex, thes, templates, relation_top_k: int = 3,
            thesaurus_top_k: int = 5) -> Explanation:
    """Fill each template line from its sources.

    Every source is truncated to its quota first; the truncated lists are then
    concatenated in source order and deduplicated (first occurrence wins).
    The headword is never listed.  Lines without items are dropped.
    """
    head = tuple(head)
    if head not in index.marginals or not index.has_head(head):
        return no_data(head)
    lines = []
    for tpl in templates:
        items: list[str] = []
        contributed: list[str] = []
        for src in tpl.sources:
            if src.name == THESAURUS:
                k = src.limit or thesaurus_top_k
                cands = [r.neighbor[0] for r in thes.similar(head, k)] if thes is not None else []
            elif src.inverse:
                k = src.limit or relation_top_k
                cands = [t.head[0] for t in index.inverse_sketch(head, src.name, k)]
            else:
                k = src.limit or relation_top_k
                cands = [t.collocate[0] for t in index.word_sketch(head, src.name, k)]
            added = False
            for lemma in cands:
                if lemma != head[0] and lemma not in items:
                    items.append(lemma)
                    added = True
            if added:
                contributed.append(str(src).split(":")[0])
        if items:
            lines.append(ExplanationLine(tpl.key, tpl.pattern, tuple(items), tuple(contributed)))
    return Explanation(head, tuple(lines))


def _compose_for(pos: str, head, index, thes, templates=None, **quotas) -> Explanation:
    head = tuple(head)
    if head[1] != pos:
        raise ValueError(f"expected a {pos} headword, got {head[1]!r}")
    return compose(head, index, thes, templates or load_templates(pos=pos), **quotas)


def compose_noun(head, index, thes, templates=None, **quotas) -> Explanation:
    return _compose_for("N", head, index, thes, templates, **quotas)


def compose_adjective(head, index, thes, templates=None, **quotas) -> Explanation:
    return _compose_for("J", head, index, thes, templates, **quotas)


def compose_verb(head, index, thes, templates=None, **quotas) -> Explanation:
    return _compose_for("V", head, index, thes, templates, **quotas)


def render_text(expl: Explanation) -> str:
    head = expl.headword[0]
    out = [f"{head}:"]
    if not expl.lines:
        out.append(NO_DATA)
    for i, line in enumerate(expl.lines, 1):
        out.append(f"{i}. {line.text(head)}")
    return "\n".join(out) + "\n"


def to_structured(expl: Explanation) -> dict:
    return {
        "schema": SCHEMA_VERSION,
        "headword": expl.headword[0],
        "pos": expl.headword[1],
        "no_data": expl.no_data,
        "lines": [{"key": l.key, "pattern": l.pattern, "items": list(l.items),
                   "sources": list(l.sources)} for l in expl.lines],
    }


def render_structured(expl: Explanation) -> str:
    return json.dumps(to_structured(expl), ensure_ascii=False, indent=2) + "\n"


def parse_structured(text: str | dict) -> Explanation:
    doc = json.loads(text) if isinstance(text, str) else text
    if doc.get("schema", SCHEMA_VERSION) != SCHEMA_VERSION:
        raise ValueError(f"unsupported explanation schema {doc.get('schema')!r}")
    lines = tuple(ExplanationLine(l["key"], l["pattern"], tuple(l["items"]), tuple(l["sources"]))
                  for l in doc["lines"])
    return Explanation((doc["headword"], doc["pos"]), lines, bool(doc.get("no_data", False)))
