"""Word sketches: counted and scored (head, relation, collocate) triples."""

from __future__ import annotations

import math
from collections import defaultdict
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .corpus import COARSE_POS, Corpus
from .cql import MaskCache, match_arrays
from .grammar import Grammar

LOGDICE_MAX = 14.0
SCORE_MODES = ("logdice", "rawfreq")

Lemma = tuple  # (lemma, coarse POS)


class CountingError(ValueError):
    """A co-occurrence count exceeds one of its marginal frequencies."""


def log_dice(f_xy: int, f_x: int, f_y: int) -> float:
    """logDice = 14 + log2(2 f_xy / (f_x + f_y))."""
    if f_xy < 1 or f_x < 1 or f_y < 1:
        raise CountingError(f"frequencies must be positive: f_xy={f_xy}, f_x={f_x}, f_y={f_y}")
    if f_xy > f_x or f_xy > f_y:
        raise CountingError(f"pair frequency {f_xy} exceeds a marginal ({f_x}, {f_y})")
    return LOGDICE_MAX + math.log2(2 * f_xy / (f_x + f_y))


@dataclass(frozen=True)
class SketchTriple:
    head: Lemma
    relation: str
    collocate: Lemma
    pair_freq: int
    score: float


def _collocate_order(t: SketchTriple, mode: str):
    if mode == "rawfreq":
        return (-t.pair_freq, -t.score, t.collocate)
    return (-t.score, -t.pair_freq, t.collocate)


def _head_order(t: SketchTriple, mode: str):
    if mode == "rawfreq":
        return (-t.pair_freq, -t.score, t.head)
    return (-t.score, -t.pair_freq, t.head)


@dataclass
class SketchIndex:
    """Ranked triples grouped by (head, relation); also by (collocate, relation)."""

    relations: tuple[str, ...]
    groups: dict[tuple[Lemma, str], list[SketchTriple]]
    inverse: dict[tuple[Lemma, str], list[SketchTriple]]
    marginals: dict[Lemma, int]
    score_mode: str = "logdice"
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    @classmethod
    def from_triples(cls, triples, relations, marginals, score_mode="logdice") -> "SketchIndex":
        groups = defaultdict(list)
        inverse = defaultdict(list)
        for t in triples:
            groups[(t.head, t.relation)].append(t)
            inverse[(t.collocate, t.relation)].append(t)
        for g in groups.values():
            g.sort(key=lambda t: _collocate_order(t, score_mode))
        for g in inverse.values():
            g.sort(key=lambda t: _head_order(t, score_mode))
        return cls(tuple(relations), dict(sorted(groups.items())), dict(sorted(inverse.items())),
                   dict(marginals), score_mode)

    def triples(self):
        for g in self.groups.values():
            yield from g

    def __len__(self) -> int:
        return sum(len(g) for g in self.groups.values())

    def _check_relation(self, relation: str) -> None:
        if relation not in self.relations:
            raise ValueError(f"unknown relation {relation!r}")

    def has_head(self, head: Lemma) -> bool:
        seen = self._cache.get("lemmas")
        if seen is None:
            seen = self._cache["lemmas"] = {k[0] for k in self.groups} | {k[0] for k in self.inverse}
        return tuple(head) in seen

    def word_sketch(self, head: Lemma, relation: str, limit: int = 3) -> list[SketchTriple]:
        self._check_relation(relation)
        return self.groups.get((tuple(head), relation), [])[:limit]

    def inverse_sketch(self, collocate: Lemma, relation: str, limit: int = 3) -> list[SketchTriple]:
        """Triples whose collocate is ``collocate``, ranked by score."""
        self._check_relation(relation)
        return self.inverse.get((tuple(collocate), relation), [])[:limit]


def word_sketch(index: SketchIndex, head: Lemma, relation: str, limit: int = 3) -> list[SketchTriple]:
    return index.word_sketch(head, relation, limit)


def lemma_marginals(corpus: Corpus) -> dict[Lemma, int]:
    """Corpus-wide frequency of every (lemma, coarse POS) pair."""
    n_pos = len(COARSE_POS)
    keys = corpus.ids["lemma"].astype(np.int64) * n_pos + corpus.coarse
    uniq, counts = np.unique(keys, return_counts=True)
    lex = corpus.lexicons["lemma"]
    return {(lex[int(k) // n_pos], COARSE_POS[int(k) % n_pos]): int(c) for k, c in zip(uniq, counts)}


def _relation_pairs(corpus: Corpus, rel_idx: int, relation, cache: MaskCache) -> np.ndarray:
    """(relation, head lemma, head POS, collocate lemma, collocate POS) per counted match."""
    head_code = COARSE_POS.index(relation.head_pos)
    rows = []
    for q in relation.queries:
        _, _, elem = match_arrays(q, corpus, cache)
        h = elem[:, q.label_index(1)]
        c = elem[:, q.label_index(2)]
        keep = corpus.coarse[h] == head_code
        h, c = h[keep], c[keep]
        lemma = corpus.ids["lemma"]
        rows.append(np.stack([np.full(h.size, rel_idx), lemma[h], corpus.coarse[h],
                              lemma[c], corpus.coarse[c]], axis=1).astype(np.int64))
    return np.concatenate(rows) if rows else np.zeros((0, 5), np.int64)


def build_sketches(corpus: Corpus, grammar: Grammar, min_pair_freq: int = 2,
                   score_mode: str = "logdice", jobs: int = 1) -> SketchIndex:
    """Count every relation match as one triple, score with logDice, drop rare pairs."""
    if score_mode not in SCORE_MODES:
        raise ValueError(f"unknown score mode {score_mode!r}")
    if min_pair_freq < 1:
        raise ValueError("min_pair_freq must be >= 1")
    marginals = lemma_marginals(corpus)
    names = [rel.name for rel in grammar.relations]
    # atom masks are computed up front so worker threads only read the cache
    cache = MaskCache(corpus)
    for rel in grammar.relations:
        for q in rel.queries:
            for el in q.elements:
                cache.expr(el.test)
    work = list(enumerate(grammar.relations))
    if jobs > 1 and len(work) > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            parts = list(pool.map(lambda item: _relation_pairs(corpus, item[0], item[1], cache), work))
    else:
        parts = [_relation_pairs(corpus, i, rel, cache) for i, rel in work]
    rows = np.concatenate(parts) if parts else np.zeros((0, 5), np.int64)

    triples = []
    if len(rows):
        uniq, counts = np.unique(rows, axis=0, return_counts=True)
        lex = corpus.lexicons["lemma"]
        for (r, hl, hp, cl, cp), f_xy in zip(uniq.tolist(), counts.tolist()):
            if f_xy < min_pair_freq:
                continue
            head = (lex[hl], COARSE_POS[hp])
            coll = (lex[cl], COARSE_POS[cp])
            score = log_dice(f_xy, marginals[head], marginals[coll])
            triples.append(SketchTriple(head, names[r], coll, f_xy, score))
    return SketchIndex.from_triples(triples, names, marginals, score_mode)
