"""Hot loops: token-sequence matching and shared-context scoring.

Each kernel has a numba ``@njit`` version and a pure-numpy version.  The
numba path is used when numba imports and ``LEXPLAIN_DISABLE_JIT`` is unset
(or ``0``); both paths return identical results.
"""

from __future__ import annotations

import itertools
import os

import numpy as np

try:
    import numba
except ImportError:  # pragma: no cover - numba is an optional accelerator
    numba = None

HAVE_NUMBA = numba is not None


def jit_enabled() -> bool:
    return HAVE_NUMBA and os.environ.get("LEXPLAIN_DISABLE_JIT", "0") in ("", "0")


# --------------------------------------------------------------------------
# sequence matching
#
# masks[i, p] says whether token p satisfies element i.  Element i consumes
# between mins[i] and maxs[i] consecutive tokens.  For every start position s
# the first expansion in greedy order (element 0 longest first, then element
# 1, ...) that stays inside the sentence wins.  Empty expansions never match.


def _match_python(masks, mins, maxs, sent_end):
    n_el, n = masks.shape
    out_start = np.empty(n, dtype=np.int64)
    out_end = np.empty(n, dtype=np.int64)
    out_elem = np.empty((n, n_el), dtype=np.int64)
    counts = np.empty(n_el, dtype=np.int64)
    elem_start = np.empty(n_el, dtype=np.int64)
    m = 0
    for s in range(n):
        if mins[0] > 0 and not masks[0, s]:
            continue
        end = sent_end[s]
        i = 0
        p = s
        ok = False
        while True:
            if i == n_el:
                ok = p > s
                break
            lim = min(maxs[i], end - p)
            r = 0
            while r < lim and masks[i, p + r]:
                r += 1
            if r >= mins[i]:
                elem_start[i] = p
                counts[i] = r
                p += r
                i += 1
                continue
            # backtrack to the nearest element that can give up a token
            while True:
                i -= 1
                if i < 0:
                    break
                if counts[i] > mins[i]:
                    counts[i] -= 1
                    p = elem_start[i] + counts[i]
                    i += 1
                    break
            if i < 0:
                break
        if ok:
            out_start[m] = s
            out_end[m] = p
            for k in range(n_el):
                out_elem[m, k] = elem_start[k]
            m += 1
    return out_start[:m], out_end[:m], out_elem[:m]


if HAVE_NUMBA:
    _match_jit = numba.njit(nogil=True, cache=False)(_match_python)
else:  # pragma: no cover
    _match_jit = None


def _match_numpy(masks, mins, maxs, sent_end):
    """Vectorised over start positions: try expansions in greedy order."""
    n_el, n = masks.shape
    csum = np.zeros((n_el, n + 1), dtype=np.int64)
    np.cumsum(masks, axis=1, out=csum[:, 1:])
    pos = np.arange(n, dtype=np.int64)
    found = np.zeros(n, dtype=bool)
    out_end = np.zeros(n, dtype=np.int64)
    out_elem = np.zeros((n, n_el), dtype=np.int64)
    if mins[0] > 0:
        alive = masks[0].copy()
    else:
        alive = np.ones(n, dtype=bool)
    ranges = [range(int(maxs[i]), int(mins[i]) - 1, -1) for i in range(n_el)]
    for expansion in itertools.product(*ranges):
        total = sum(expansion)
        if total == 0:
            continue
        cand = alive & ~found
        if not cand.any():
            break
        idx = pos[cand]
        idx = idx[idx + total <= sent_end[idx]]
        if idx.size == 0:
            continue
        off = idx.copy()
        ok = np.ones(idx.size, dtype=bool)
        starts = np.empty((idx.size, n_el), dtype=np.int64)
        for i, c in enumerate(expansion):
            starts[:, i] = off
            if c:
                ok &= (csum[i, off + c] - csum[i, off]) == c
                off = off + c
        hit = idx[ok]
        found[hit] = True
        out_end[hit] = off[ok]
        out_elem[hit] = starts[ok]
    hits = np.flatnonzero(found)
    return hits.astype(np.int64), out_end[hits], out_elem[hits]


def match_sequence(masks, mins, maxs, sent_end, use_jit: bool | None = None):
    """Return ``(starts, ends, element_starts)`` for every matching start position."""
    masks = np.ascontiguousarray(masks, dtype=np.bool_)
    mins = np.ascontiguousarray(mins, dtype=np.int64)
    maxs = np.ascontiguousarray(maxs, dtype=np.int64)
    sent_end = np.ascontiguousarray(sent_end, dtype=np.int64)
    if masks.shape[1] == 0:
        empty = np.zeros(0, dtype=np.int64)
        return empty, empty, np.zeros((0, masks.shape[0]), dtype=np.int64)
    if use_jit is None:
        use_jit = jit_enabled()
    if use_jit:
        return _match_jit(masks, mins, maxs, sent_end)
    return _match_numpy(masks, mins, maxs, sent_end)


# --------------------------------------------------------------------------
# shared-context similarity
#
# Context vectors are CSR rows: ctx[indptr[w]:indptr[w+1]] are sorted context
# ids with weights wt[...] (association scores clamped at 0).


def _shared_python(indptr, ctx, wt, a, candidates):
    """For each candidate b: (number of shared contexts, sum of shared terms)."""
    nc = candidates.shape[0]
    shared = np.zeros(nc, dtype=np.int64)
    total = np.zeros(nc, dtype=np.float64)
    a0 = indptr[a]
    a1 = indptr[a + 1]
    for k in range(nc):
        b = candidates[k]
        i = a0
        j = indptr[b]
        j1 = indptr[b + 1]
        acc = 0.0
        cnt = 0
        while i < a1 and j < j1:
            ci = ctx[i]
            cj = ctx[j]
            if ci == cj:
                x = wt[i]
                y = wt[j]
                d = x - y
                acc += x + y - d * d / 50.0
                cnt += 1
                i += 1
                j += 1
            elif ci < cj:
                i += 1
            else:
                j += 1
        shared[k] = cnt
        total[k] = acc
    return shared, total


if HAVE_NUMBA:
    _shared_jit = numba.njit(nogil=True, cache=False)(_shared_python)
else:  # pragma: no cover
    _shared_jit = None


def _shared_numpy(indptr, ctx, wt, a, candidates):
    nc = candidates.shape[0]
    shared = np.zeros(nc, dtype=np.int64)
    total = np.zeros(nc, dtype=np.float64)
    ra = slice(indptr[a], indptr[a + 1])
    ctx_a, wt_a = ctx[ra], wt[ra]
    for k, b in enumerate(candidates):
        rb = slice(indptr[b], indptr[b + 1])
        _, ia, ib = np.intersect1d(ctx_a, ctx[rb], assume_unique=True, return_indices=True)
        if ia.size == 0:
            continue
        x = wt_a[ia]
        y = wt[rb][ib]
        terms = x + y - (x - y) * (x - y) / 50.0
        # sequential sum in context order, matching the merge-join kernel
        acc = 0.0
        for t in terms.tolist():
            acc += t
        shared[k] = ia.size
        total[k] = acc
    return shared, total


def shared_contexts(indptr, ctx, wt, a, candidates, use_jit: bool | None = None):
    indptr = np.ascontiguousarray(indptr, dtype=np.int64)
    ctx = np.ascontiguousarray(ctx, dtype=np.int64)
    wt = np.ascontiguousarray(wt, dtype=np.float64)
    candidates = np.ascontiguousarray(candidates, dtype=np.int64)
    if use_jit is None:
        use_jit = jit_enabled()
    if use_jit:
        return _shared_jit(indptr, ctx, wt, int(a), candidates)
    return _shared_numpy(indptr, ctx, wt, int(a), candidates)
