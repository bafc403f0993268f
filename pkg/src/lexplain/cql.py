"""A small corpus query language.

Grammar::

    query   := element+
    element := (NUM ":")? "[" expr? "]" quant?
    expr    := or ; or := and ("|" and)* ; and := unary ("&" unary)*
    unary   := "!" unary | "(" expr ")" | atom
    atom    := ATTR "=" '"' REGEX '"'
    quant   := "?" | "{" m "," n "}"

Regexes are anchored to the whole attribute value.  Label 1 marks the
headword position, label 2 the collocate.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterator, Union

import numpy as np

from . import _kernels
from .corpus import ATTRIBUTES, Corpus

MAX_REPEAT = 9
_REGEX_META = set(".^$*+?{}[]\\|()")


class CQLSyntaxError(ValueError):
    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} at byte offset {offset}")
        self.offset = offset


@dataclass(frozen=True)
class Atom:
    attr: str
    regex: str


@dataclass(frozen=True)
class Not:
    expr: "Expr"


@dataclass(frozen=True)
class And:
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Or:
    left: "Expr"
    right: "Expr"


Expr = Union[Atom, Not, And, Or, None]


@dataclass(frozen=True)
class Element:
    test: Expr = None  # None matches any token
    label: int | None = None
    min: int = 1
    max: int = 1


@dataclass(frozen=True)
class Query:
    elements: tuple[Element, ...]

    def label_index(self, label: int) -> int | None:
        for i, el in enumerate(self.elements):
            if el.label == label:
                return i
        return None

    @property
    def labels(self) -> dict[int, int]:
        return {el.label: i for i, el in enumerate(self.elements) if el.label is not None}

    def __str__(self) -> str:
        return format_query(self)


@dataclass(frozen=True)
class Match:
    start: int
    end: int
    bindings: dict[int, int]


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.i = 0

    def error(self, message: str, at: int | None = None):
        at = self.i if at is None else at
        raise CQLSyntaxError(message, len(self.text[:at].encode("utf-8")))

    def skip(self):
        while self.i < len(self.text) and self.text[self.i].isspace():
            self.i += 1

    def peek(self) -> str:
        self.skip()
        return self.text[self.i] if self.i < len(self.text) else ""

    def expect(self, ch: str):
        if self.peek() != ch:
            self.error(f"expected {ch!r}")
        self.i += 1

    def number(self) -> int:
        self.skip()
        m = re.compile(r"\d+").match(self.text, self.i)
        if not m:
            self.error("expected a number")
        self.i = m.end()
        return int(m.group())

    def query(self) -> Query:
        elements = []
        seen: dict[int, int] = {}
        while self.peek():
            start = self.i
            el = self.element()
            if el.label is not None:
                if el.label in seen:
                    self.error(f"duplicate label {el.label}", start)
                if (el.min, el.max) != (1, 1):
                    self.error(f"label {el.label} under a quantifier", start)
                seen[el.label] = len(elements)
            elements.append(el)
        if not elements:
            self.error("empty query")
        return Query(tuple(elements))

    def element(self) -> Element:
        label = None
        if self.peek().isdigit():
            label = self.number()
            self.expect(":")
        self.expect("[")
        test = None
        if self.peek() != "]":
            test = self.expr()
        self.expect("]")
        lo, hi = 1, 1
        ch = self.text[self.i] if self.i < len(self.text) else ""
        if ch == "?":
            self.i += 1
            lo, hi = 0, 1
        elif ch == "{":
            at = self.i
            self.i += 1
            lo = self.number()
            self.expect(",")
            hi = self.number()
            self.expect("}")
            if hi < 1 or lo > hi:
                self.error(f"bad repeat bounds {{{lo},{hi}}}", at)
            if hi > MAX_REPEAT:
                self.error(f"repeat bound {hi} exceeds {MAX_REPEAT}", at)
        return Element(test, label, lo, hi)

    def expr(self) -> Expr:
        left = self.conj()
        while self.peek() == "|":
            self.i += 1
            left = Or(left, self.conj())
        return left

    def conj(self) -> Expr:
        left = self.unary()
        while self.peek() == "&":
            self.i += 1
            left = And(left, self.unary())
        return left

    def unary(self) -> Expr:
        ch = self.peek()
        if ch == "!":
            self.i += 1
            return Not(self.unary())
        if ch == "(":
            self.i += 1
            e = self.expr()
            self.expect(")")
            return e
        return self.atom()

    def atom(self) -> Atom:
        self.skip()
        at = self.i
        m = re.compile(r"[A-Za-z_]\w*").match(self.text, self.i)
        if not m:
            self.error("expected an attribute name")
        attr = m.group()
        if attr not in ATTRIBUTES:
            self.error(f"unknown attribute {attr!r}", at)
        self.i = m.end()
        self.expect("=")
        self.expect('"')
        out = []
        while True:
            if self.i >= len(self.text):
                self.error("unterminated string")
            ch = self.text[self.i]
            if ch == "\\" and self.i + 1 < len(self.text):
                nxt = self.text[self.i + 1]
                # \" is a literal quote; other escapes pass through to the regex
                out.append('"' if nxt == '"' else ch + nxt)
                self.i += 2
                continue
            if ch == '"':
                self.i += 1
                break
            out.append(ch)
            self.i += 1
        regex = "".join(out)
        try:
            re.compile(regex)
        except re.error as exc:
            self.error(f"bad regex {regex!r}: {exc}", at)
        return Atom(attr, regex)


def parse_query(text: str) -> Query:
    return _Parser(text).query()


def _format_expr(e: Expr, parent: str = "") -> str:
    if isinstance(e, Atom):
        return '%s="%s"' % (e.attr, e.regex.replace('"', '\\"'))
    if isinstance(e, Not):
        return "!" + _format_expr(e.expr, "!")
    if isinstance(e, (And, Or)):
        op = "&" if isinstance(e, And) else "|"
        # right operand of the same operator is parenthesised: parsing is left-associative
        s = "%s %s %s" % (_format_expr(e.left, op), op, _format_expr(e.right, op + "r"))
        tighter = {"&": ("!", "&r"), "|": ("!", "&", "&r", "|r")}[op]
        return "(%s)" % s if parent in tighter else s
    return ""


def format_query(query: Query) -> str:
    parts = []
    for el in query.elements:
        s = "[%s]" % _format_expr(el.test)
        if el.label is not None:
            s = "%d:%s" % (el.label, s)
        if (el.min, el.max) == (0, 1):
            s += "?"
        elif (el.min, el.max) != (1, 1):
            s += "{%d,%d}" % (el.min, el.max)
        parts.append(s)
    return " ".join(parts)


def is_literal(regex: str) -> bool:
    return not any(c in _REGEX_META for c in regex)


class MaskCache:
    """Per-corpus cache of token masks for atoms, shared across queries."""

    def __init__(self, corpus: Corpus):
        self.corpus = corpus
        self._atoms: dict[Atom, np.ndarray] = {}

    def lexicon_mask(self, atom: Atom) -> np.ndarray:
        lex = self.corpus.lexicons[atom.attr]
        mask = np.zeros(len(lex), dtype=bool)
        if is_literal(atom.regex):
            i = lex.get(atom.regex)
            if i >= 0:
                mask[i] = True
        else:
            rx = re.compile(atom.regex)
            for i, v in enumerate(lex):
                if rx.fullmatch(v):
                    mask[i] = True
        return mask

    def atom(self, atom: Atom) -> np.ndarray:
        m = self._atoms.get(atom)
        if m is None:
            m = self.lexicon_mask(atom)[self.corpus.ids[atom.attr]]
            self._atoms[atom] = m
        return m

    def expr(self, e: Expr) -> np.ndarray:
        if e is None:
            return np.ones(len(self.corpus), dtype=bool)
        if isinstance(e, Atom):
            return self.atom(e)
        if isinstance(e, Not):
            return ~self.expr(e.expr)
        if isinstance(e, And):
            return self.expr(e.left) & self.expr(e.right)
        return self.expr(e.left) | self.expr(e.right)


def match_arrays(query: Query, corpus: Corpus, cache: MaskCache | None = None,
                 use_jit: bool | None = None):
    """Matches as arrays ``(starts, ends, element_starts)`` in positional order."""
    cache = cache or MaskCache(corpus)
    n_el = len(query.elements)
    masks = np.empty((n_el, len(corpus)), dtype=bool)
    for i, el in enumerate(query.elements):
        masks[i] = cache.expr(el.test)
    mins = np.array([el.min for el in query.elements], dtype=np.int64)
    maxs = np.array([el.max for el in query.elements], dtype=np.int64)
    return _kernels.match_sequence(masks, mins, maxs, corpus.sent_end, use_jit=use_jit)


def find_matches(query: Query, corpus: Corpus, cache: MaskCache | None = None) -> Iterator[Match]:
    starts, ends, elem = match_arrays(query, corpus, cache)
    labels = query.labels
    for k in range(len(starts)):
        yield Match(int(starts[k]), int(ends[k]),
                    {lab: int(elem[k, i]) for lab, i in labels.items()})
