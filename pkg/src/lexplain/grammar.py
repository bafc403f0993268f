"""Sketch grammars: named relations made of labelled CQL queries.

File format::

    # comment
    =adj_modifier
    *HEADPOS N
    *COLLPOS J
    *GLOSS can_be
    2:[tag="JJ.*"] 1:[tag="NN.*"]
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from importlib import resources

from .corpus import COARSE_POS, Corpus
from .cql import And, Atom, CQLSyntaxError, Not, Or, Query, format_query, parse_query

_NAME = re.compile(r"[A-Za-z_][\w.-]*\Z")


class GrammarError(ValueError):
    def __init__(self, message: str, lineno: int | None = None, relation: str | None = None):
        where = []
        if lineno is not None:
            where.append(f"line {lineno}")
        if relation is not None:
            where.append(f"relation {relation!r}")
        super().__init__(f"{', '.join(where)}: {message}" if where else message)
        self.lineno = lineno
        self.relation = relation


@dataclass(frozen=True)
class Relation:
    name: str
    head_pos: str
    collocate_pos: str
    queries: tuple[Query, ...]
    gloss_key: str


@dataclass(frozen=True)
class Grammar:
    relations: tuple[Relation, ...] = ()

    def __getitem__(self, name: str) -> Relation:
        for rel in self.relations:
            if rel.name == name:
                return rel
        raise KeyError(name)

    def __contains__(self, name: str) -> bool:
        return any(rel.name == name for rel in self.relations)

    @property
    def names(self) -> list[str]:
        return [rel.name for rel in self.relations]


def _strip_comment(line: str) -> str:
    in_string = False
    escaped = False
    for i, ch in enumerate(line):
        if escaped:
            escaped = False
        elif ch == "\\":
            escaped = True
        elif ch == '"':
            in_string = not in_string
        elif ch == "#" and not in_string:
            return line[:i]
    return line


def parse_grammar(text: str) -> Grammar:
    relations: list[Relation] = []
    current: dict | None = None

    def finish():
        if current is None:
            return
        name = current["name"]
        if not current["queries"]:
            raise GrammarError("relation has no queries", current["lineno"], name)
        for key in ("head_pos", "collocate_pos"):
            if current[key] is None:
                raise GrammarError(f"missing {'*HEADPOS' if key == 'head_pos' else '*COLLPOS'}",
                                   current["lineno"], name)
        relations.append(Relation(name, current["head_pos"], current["collocate_pos"],
                                  tuple(current["queries"]), current["gloss"] or name))

    for lineno, raw in enumerate(text.splitlines(), 1):
        line = _strip_comment(raw).strip()
        if not line:
            continue
        if line.startswith("="):
            finish()
            name = line[1:].strip()
            if not _NAME.match(name):
                raise GrammarError(f"bad relation name {name!r}", lineno)
            if any(r.name == name for r in relations):
                raise GrammarError("duplicate relation name", lineno, name)
            current = {"name": name, "lineno": lineno, "head_pos": None,
                       "collocate_pos": None, "gloss": None, "queries": []}
            continue
        if current is None:
            raise GrammarError("query or directive before the first relation", lineno)
        if line.startswith("*"):
            parts = line[1:].split()
            if len(parts) != 2:
                raise GrammarError(f"malformed directive {line!r}", lineno, current["name"])
            directive, value = parts[0].upper(), parts[1]
            if directive in ("HEADPOS", "COLLPOS"):
                if value not in COARSE_POS:
                    raise GrammarError(f"unknown POS {value!r}", lineno, current["name"])
                current["head_pos" if directive == "HEADPOS" else "collocate_pos"] = value
            elif directive == "GLOSS":
                current["gloss"] = value
            else:
                raise GrammarError(f"unknown directive *{directive}", lineno, current["name"])
            continue
        try:
            q = parse_query(line)
        except CQLSyntaxError as exc:
            raise GrammarError(str(exc), lineno, current["name"]) from exc
        missing = [lab for lab in (1, 2) if q.label_index(lab) is None]
        if missing:
            raise GrammarError(f"query lacks label {' and '.join(map(str, missing))}",
                               lineno, current["name"])
        current["queries"].append(q)
    finish()
    return Grammar(tuple(relations))


def read_grammar(path) -> Grammar:
    with open(path, encoding="utf-8") as fh:
        return parse_grammar(fh.read())


def bundled_grammar_path(name: str = "en_noun_verb_adj.sg"):
    return resources.files("lexplain") / "data" / "grammars" / name


def load_bundled(name: str = "en_noun_verb_adj.sg") -> Grammar:
    return parse_grammar(bundled_grammar_path(name).read_text(encoding="utf-8"))


def format_grammar(grammar: Grammar) -> str:
    out = []
    for rel in grammar.relations:
        out.append(f"={rel.name}")
        out.append(f"*HEADPOS {rel.head_pos}")
        out.append(f"*COLLPOS {rel.collocate_pos}")
        out.append(f"*GLOSS {rel.gloss_key}")
        out.extend(format_query(q) for q in rel.queries)
        out.append("")
    return "\n".join(out)


def _tag_regexes(expr, out: list[str]) -> None:
    if isinstance(expr, Atom):
        if expr.attr == "tag":
            out.append(expr.regex)
    elif isinstance(expr, Not):
        _tag_regexes(expr.expr, out)
    elif isinstance(expr, (And, Or)):
        _tag_regexes(expr.left, out)
        _tag_regexes(expr.right, out)


def validate_against(grammar: Grammar, corpus: Corpus) -> list[str]:
    """Warn about tag regexes that match no tag of the corpus tagset."""
    tags = list(corpus.lexicons["tag"])
    warnings = []
    for rel in grammar.relations:
        regexes: list[str] = []
        for q in rel.queries:
            for el in q.elements:
                _tag_regexes(el.test, regexes)
        for regex in dict.fromkeys(regexes):
            rx = re.compile(regex)
            if not any(rx.fullmatch(t) for t in tags):
                warnings.append(f"relation {rel.name!r}: tag regex {regex!r} matches no corpus tag")
    return warnings
