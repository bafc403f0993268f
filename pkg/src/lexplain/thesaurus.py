"""Distributional thesaurus over word-sketch contexts.

Two lemmas of the same POS are similar when they share (relation, collocate)
contexts with similar association scores:

    sim(a, b) = max(0, sum_shared(AS_a + AS_b - (AS_a - AS_b)**2 / 50))
                / (sum(AS_a) + sum(AS_b))

with AS = max(score, 0).  Only candidates sharing at least two contexts
are scored.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .sketches import Lemma, SketchIndex

MIN_SHARED = 2


@dataclass(frozen=True)
class SimilarityResult:
    neighbor: Lemma
    similarity: float


class Thesaurus:
    """Context vectors for every head lemma of a sketch index, stored as CSR rows."""

    def __init__(self, index: SketchIndex, min_shared: int = MIN_SHARED):
        self.min_shared = min_shared
        vectors: dict[Lemma, dict[tuple[str, Lemma], float]] = defaultdict(dict)
        for t in index.triples():
            vectors[t.head][(t.relation, t.collocate)] = max(t.score, 0.0)
        self.owners: list[Lemma] = sorted(vectors)
        self.owner_id = {w: i for i, w in enumerate(self.owners)}
        contexts = sorted({c for v in vectors.values() for c in v})
        context_id = {c: i for i, c in enumerate(contexts)}

        indptr = [0]
        ctx: list[int] = []
        wt: list[float] = []
        postings: dict[int, list[int]] = defaultdict(list)
        for i, w in enumerate(self.owners):
            row = sorted((context_id[c], s) for c, s in vectors[w].items())
            for cid, s in row:
                ctx.append(cid)
                wt.append(s)
                postings[cid].append(i)
            indptr.append(len(ctx))
        self.indptr = np.array(indptr, dtype=np.int64)
        self.ctx = np.array(ctx, dtype=np.int64)
        self.wt = np.array(wt, dtype=np.float64)
        self.totals = np.array([sum(wt[indptr[i]:indptr[i + 1]]) for i in range(len(self.owners))],
                               dtype=np.float64)
        self._postings = {k: np.array(v, dtype=np.int64) for k, v in postings.items()}

    @classmethod
    def for_index(cls, index: SketchIndex) -> "Thesaurus":
        thes = index._cache.get("thesaurus")
        if thes is None:
            thes = index._cache["thesaurus"] = cls(index)
        return thes

    def vector(self, w: Lemma) -> dict[int, float]:
        i = self.owner_id.get(tuple(w))
        if i is None:
            return {}
        r = slice(self.indptr[i], self.indptr[i + 1])
        return dict(zip(self.ctx[r].tolist(), self.wt[r].tolist()))

    def _score(self, a: int, candidates: np.ndarray, use_jit=None):
        shared, num = _kernels.shared_contexts(self.indptr, self.ctx, self.wt, a, candidates, use_jit)
        den = self.totals[a] + self.totals[candidates]
        with np.errstate(invalid="ignore", divide="ignore"):
            sim = np.where(den > 0, np.maximum(num, 0.0) / np.where(den > 0, den, 1.0), 0.0)
        return shared, sim

    def similarity(self, a: Lemma, b: Lemma, use_jit=None) -> float:
        """Raw similarity of two lemmas, without the shared-context or POS filters."""
        ia, ib = self.owner_id.get(tuple(a)), self.owner_id.get(tuple(b))
        if ia is None or ib is None:
            return 0.0
        _, sim = self._score(ia, np.array([ib], dtype=np.int64), use_jit)
        return float(sim[0])

    def similar(self, head: Lemma, limit: int = 5, use_jit=None) -> list[SimilarityResult]:
        head = tuple(head)
        if head[1] not in ("N", "J", "V"):
            raise ValueError(f"thesaurus covers N, J and V only, not {head[1]!r}")
        a = self.owner_id.get(head)
        if a is None:
            return []
        row = self.ctx[self.indptr[a]:self.indptr[a + 1]]
        if row.size == 0:
            return []
        cands = np.unique(np.concatenate([self._postings[c] for c in row.tolist()]))
        pos = head[1]
        cands = np.array([c for c in cands.tolist() if c != a and self.owners[c][1] == pos],
                         dtype=np.int64)
        if cands.size == 0:
            return []
        shared, sim = self._score(a, cands, use_jit)
        results = [SimilarityResult(self.owners[c], float(s))
                   for c, n, s in zip(cands.tolist(), shared.tolist(), sim.tolist())
                   if n >= self.min_shared and s > 0.0]
        results.sort(key=lambda r: (-r.similarity, r.neighbor))
        return results[:limit]


def similar(index: SketchIndex, head: Lemma, limit: int = 5) -> list[SimilarityResult]:
    return Thesaurus.for_index(index).similar(head, limit)
