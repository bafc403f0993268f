"""Seeded generator for a synthetic Penn-tagged English corpus.

The output is vertical text, so it goes through the same ingest path as a
real corpus.  Word choice is Zipf-weighted.  Every sentence containing the
noun ``dax`` is followed by a copy with ``wug`` in its place, so those two
lemmas end up with identical context vectors.
"""

from __future__ import annotations

from typing import Iterator

import numpy as np

from .corpus import Corpus, ingest_vertical

NOUNS = tuple((
    "dog cat bird horse fish tree river stone house road car boat city garden wall door "
    "window table chair book letter song story child teacher doctor farmer king queen "
    "soldier sailor island mountain valley forest field flower leaf root seed apple bread "
    "cheese milk water fire wind rain snow cloud star moon sun engine wheel rope knife "
    "hammer bottle glass coin ring bell lamp map clock key box bag coat shoe hat bed"
).split())
ADJECTIVES = tuple((
    "big small old young red green dark bright cold warm heavy light quiet loud strong "
    "weak fast slow rich poor happy sad empty full soft hard clean dirty long short "
    "deep shallow sharp dull wide narrow sweet bitter"
).split())
VERBS = tuple((
    "see find take make hold carry open close push pull watch follow build break fill "
    "move turn paint wash lift drop throw catch keep leave call help"
).split())
ADVERBS = tuple("quickly slowly often rarely quietly loudly carefully badly easily suddenly".split())
PREPOSITIONS = tuple("in on under near behind with into through".split())
DETERMINERS = tuple("the a this that every".split())

TWIN, TWIN_COPY = "dax", "wug"
TWIN_RATE = 0.02


def _zipf(n: int, s: float = 1.0) -> np.ndarray:
    w = 1.0 / np.arange(1, n + 1) ** s
    return w / w.sum()


def _plural(noun: str) -> str:
    if noun.endswith(("s", "sh", "ch", "x")):
        return noun + "es"
    if noun.endswith("y") and noun[-2] not in "aeiou":
        return noun[:-1] + "ies"
    if noun.endswith("fe"):
        return noun[:-2] + "ves"
    if noun.endswith("f"):
        return noun[:-1] + "ves"
    return noun + "s"


def _third(verb: str) -> str:
    return verb + ("es" if verb.endswith(("s", "sh", "ch", "x")) else "s")


def _past(verb: str) -> str:
    return verb + ("d" if verb.endswith("e") else "ed")


class _Sampler:
    def __init__(self, rng: np.random.Generator):
        self.rng = rng
        self.nouns = NOUNS + (TWIN,)
        self.p_noun = _zipf(len(NOUNS)) * (1 - TWIN_RATE)
        self.p_noun = np.append(self.p_noun, TWIN_RATE)
        self.p_adj = _zipf(len(ADJECTIVES))
        self.p_verb = _zipf(len(VERBS))
        self.p_adv = _zipf(len(ADVERBS))

    def pick(self, words, p=None):
        return words[int(self.rng.choice(len(words), p=p))]

    def coin(self, p: float) -> bool:
        return bool(self.rng.random() < p)

    def noun(self, exclude=()) -> str:
        while True:
            w = self.pick(self.nouns, self.p_noun)
            if w not in exclude:
                return w

    def noun_phrase(self, used: set, max_adj: int = 2) -> list[tuple[str, str, str]]:
        """Determiner, adjectives and a noun; ``used`` collects noun lemmas."""
        out = []
        plural = self.coin(0.3)
        if not plural or self.coin(0.5):
            d = "the" if plural else self.pick(DETERMINERS)
            out.append((d, d, "DT"))
        n_adj = int(self.rng.integers(0, max_adj + 1))
        adjs = []
        for _ in range(n_adj):
            a = self.pick(ADJECTIVES, self.p_adj)
            if a not in adjs:
                adjs.append(a)
        out += [(a, a, "JJ") for a in adjs]
        n = self.noun(exclude=used)
        used.add(n)
        out.append((_plural(n), n, "NNS") if plural else (n, n, "NN"))
        return out

    def verb(self, plural_subject: bool) -> tuple[str, str, str]:
        v = self.pick(VERBS, self.p_verb)
        r = self.rng.random()
        if r < 0.4:
            return (_past(v), v, "VBD")
        if plural_subject:
            return (v, v, "VBP")
        return (_third(v), v, "VBZ")


def _clause(s: _Sampler) -> list[tuple[str, str, str]]:
    used: set[str] = set()
    toks = s.noun_phrase(used)
    if s.coin(0.15):
        cc = s.pick(("and", "or"))
        toks.append((cc, cc, "CC"))
        toks += s.noun_phrase(used, max_adj=1)
    plural = toks[-1][2] == "NNS" or any(t[2] == "CC" for t in toks)
    before = None
    if s.coin(0.25):
        before = s.pick(ADVERBS, s.p_adv)
        toks.append((before, before, "RB"))
    toks.append(s.verb(plural))
    if s.coin(0.7):
        toks += s.noun_phrase(used)
    if s.coin(0.3):
        # a repeated adverb around one verb would count that pair twice
        a = s.pick(ADVERBS, s.p_adv)
        if a != before:
            toks.append((a, a, "RB"))
    if s.coin(0.35):
        p = s.pick(PREPOSITIONS)
        toks.append((p, p, "IN"))
        toks += s.noun_phrase(used, max_adj=1)
    return toks


def _copula(s: _Sampler) -> list[tuple[str, str, str]]:
    used: set[str] = set()
    toks = s.noun_phrase(used, max_adj=0)
    plural = toks[-1][2] == "NNS"
    toks.append(("are", "be", "VBP") if plural else ("is", "be", "VBZ"))
    if s.coin(0.3):
        toks.append(("very", "very", "RB"))
    a = s.pick(ADJECTIVES, s.p_adj)
    toks.append((a, a, "JJ"))
    return toks


def _such_as(s: _Sampler) -> list[tuple[str, str, str]]:
    used: set[str] = set()
    general = s.noun()
    used.add(general)
    toks = [(_plural(general), general, "NNS"), ("such", "such", "JJ"), ("as", "as", "IN")]
    toks += s.noun_phrase(used, max_adj=0)
    return toks


def _have(s: _Sampler) -> list[tuple[str, str, str]]:
    used: set[str] = set()
    toks = s.noun_phrase(used, max_adj=1)
    plural = toks[-1][2] == "NNS"
    toks.append(("have", "have", "VBP") if plural else ("has", "have", "VBZ"))
    toks += s.noun_phrase(used)
    return toks


_PATTERNS = ((_clause, 0.7), (_copula, 0.12), (_such_as, 0.06), (_have, 0.12))


def groups(seed: int = 0) -> Iterator[list[list[tuple[str, str, str]]]]:
    """Endless stream of sentence groups: one sentence of (word, lemma, tag)
    triples, plus its twin copy when it mentions the twin noun."""
    rng = np.random.default_rng(seed)
    s = _Sampler(rng)
    funcs = [f for f, _ in _PATTERNS]
    weights = np.array([w for _, w in _PATTERNS])
    weights = weights / weights.sum()
    while True:
        toks = funcs[int(rng.choice(len(funcs), p=weights))](s)
        first = toks[0]
        toks[0] = (first[0].capitalize(), first[1], first[2])
        toks.append((".", ".", "."))
        group = [toks]
        if any(t[1] == TWIN for t in toks):
            group.append([(w.replace(TWIN, TWIN_COPY), TWIN_COPY if l == TWIN else l, t)
                          for w, l, t in toks])
        yield group


def generate(seed: int = 0, n_tokens: int | None = 50_000,
             n_sentences: int | None = None, doc_size: int = 200) -> list[str]:
    """Vertical lines for a corpus of at least ``n_tokens`` tokens, or of
    ``n_sentences`` sentences when given (one more if the last one is twinned)."""
    lines = []
    total = 0
    count = 0
    for group in groups(seed):
        if n_sentences is not None:
            if count >= n_sentences:
                break
        elif total >= n_tokens:
            break
        for sent in group:
            if count % doc_size == 0:
                if count:
                    lines.append("</doc>")
                lines.append(f'<doc id="d{count // doc_size}">')
            lines.append("<s>")
            lines += ["\t".join(t) for t in sent]
            lines.append("</s>")
            total += len(sent)
            count += 1
    if count:
        lines.append("</doc>")
    return lines


def synthetic_corpus(seed: int = 0, n_tokens: int = 50_000) -> Corpus:
    return ingest_vertical(generate(seed, n_tokens))
