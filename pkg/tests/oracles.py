"""Slow reference implementations used as test oracles.

None of these share code with the package beyond the parsed query AST and
the corpus accessors that return plain strings.
"""

from __future__ import annotations

import itertools
import math
import re
from collections import Counter

from lexplain.cql import And, Atom, Not, Or


def count_vertical_tokens(lines) -> tuple[int, list[int]]:
    """Token count and sentence lengths of vertical text, by line counting."""
    total = 0
    lengths = []
    current = 0
    for line in lines:
        line = line.rstrip("\n")
        if not line.strip():
            continue
        if line.startswith("<"):
            if current:
                lengths.append(current)
            current = 0
            continue
        total += 1
        current += 1
    if current:
        lengths.append(current)
    return total, lengths


def scan_freq(corpus, attr: str, value: str) -> int:
    return sum(1 for t in corpus.tokens if getattr(t, attr) == value)


def eval_test(expr, token) -> bool:
    if expr is None:
        return True
    if isinstance(expr, Atom):
        return re.fullmatch(expr.regex, getattr(token, expr.attr)) is not None
    if isinstance(expr, Not):
        return not eval_test(expr.expr, token)
    if isinstance(expr, And):
        return eval_test(expr.left, token) and eval_test(expr.right, token)
    if isinstance(expr, Or):
        return eval_test(expr.left, token) or eval_test(expr.right, token)
    raise TypeError(expr)


def brute_force_matches(query, corpus) -> list[tuple[int, int, dict[int, int]]]:
    """Every start position, every expansion; keep the greedy-preferred one.

    The preferred expansion at a start is the lexicographically largest
    tuple of repeat counts among all valid ones.
    """
    tokens = corpus.tokens
    n = len(tokens)
    sentence_of = [None] * n
    bounds = {}
    for k, (a, b) in enumerate(corpus.sentences.tolist()):
        bounds[k] = (a, b)
        for p in range(a, b):
            sentence_of[p] = k
    els = query.elements
    sat = [[eval_test(el.test, tokens[p]) for p in range(n)] for el in els]
    ranges = [range(el.min, el.max + 1) for el in els]
    out = []
    for s in range(n):
        end = bounds[sentence_of[s]][1]
        valid = []
        for counts in itertools.product(*ranges):
            total = sum(counts)
            if total == 0 or s + total > end:
                continue
            p = s
            ok = True
            starts = []
            for i, c in enumerate(counts):
                starts.append(p)
                if not all(sat[i][q] for q in range(p, p + c)):
                    ok = False
                    break
                p += c
            if ok:
                valid.append((counts, p, starts))
        if valid:
            counts, p, starts = max(valid, key=lambda v: v[0])
            binds = {el.label: starts[i] for i, el in enumerate(els) if el.label is not None}
            out.append((s, p, binds))
    return out


def naive_marginals(corpus) -> Counter:
    return Counter((t.lemma, corpus.coarse_pos(t.tag)) for t in corpus.tokens)


def naive_log_dice(f_xy, f_x, f_y) -> float:
    return 14 + math.log2(2 * f_xy / (f_x + f_y))


def naive_sketches(corpus, grammar, min_pair_freq=2) -> dict:
    """{(head, relation, collocate): (pair_freq, score)} via find_matches."""
    from lexplain.cql import find_matches

    marg = naive_marginals(corpus)
    tally = Counter()
    for rel in grammar.relations:
        for q in rel.queries:
            for m in find_matches(q, corpus):
                h, c = corpus[m.bindings[1]], corpus[m.bindings[2]]
                head = (h.lemma, corpus.coarse_pos(h.tag))
                if head[1] != rel.head_pos:
                    continue
                coll = (c.lemma, corpus.coarse_pos(c.tag))
                tally[(head, rel.name, coll)] += 1
    return {k: (f, naive_log_dice(f, marg[k[0]], marg[k[2]]))
            for k, f in tally.items() if f >= min_pair_freq}


def formula_similarity(va: dict, vb: dict) -> float:
    """Similarity of two explicit {context: score} vectors."""
    a = {k: max(v, 0.0) for k, v in va.items()}
    b = {k: max(v, 0.0) for k, v in vb.items()}
    den = sum(a.values()) + sum(b.values())
    if den == 0:
        return 0.0
    num = sum(a[k] + b[k] - (a[k] - b[k]) ** 2 / 50 for k in a.keys() & b.keys())
    return max(0.0, num) / den


def index_vectors(index) -> dict:
    vectors: dict = {}
    for t in index.triples():
        vectors.setdefault(t.head, {})[(t.relation, t.collocate)] = t.score
    return vectors
