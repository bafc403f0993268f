"""Time the numba kernels against their numpy fallbacks.

    python benchmarks/bench_kernels.py --tokens 200000 --repeat 5

Both paths run on the same inputs and their outputs are compared before any
timing is reported.  The first numba call is timed separately since it
includes compilation.
"""

import argparse
import time

import numpy as np

from lexplain import _kernels
from lexplain.cql import MaskCache, match_arrays
from lexplain.grammar import load_bundled
from lexplain.sketches import build_sketches
from lexplain.synthetic import synthetic_corpus
from lexplain.thesaurus import Thesaurus


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t)
    return min(times)


def bench_match(corpus, grammar, repeat):
    cache = MaskCache(corpus)
    queries = [q for rel in grammar.relations for q in rel.queries]

    def run(use_jit):
        return [match_arrays(q, corpus, cache, use_jit=use_jit) for q in queries]

    run(False)  # warm the mask cache so both paths time only the kernel
    t = time.perf_counter()
    fast = run(True)
    first = time.perf_counter() - t
    slow = run(False)
    for a, b in zip(fast, slow):
        for x, y in zip(a, b):
            assert np.array_equal(x, y)
    return first, best_of(lambda: run(True), repeat), best_of(lambda: run(False), repeat)


def bench_shared(thes, repeat, limit):
    every = np.arange(len(thes.owners), dtype=np.int64)
    heads = range(min(limit, len(thes.owners)))

    def run(use_jit):
        return [_kernels.shared_contexts(thes.indptr, thes.ctx, thes.wt, a, every, use_jit)
                for a in heads]

    t = time.perf_counter()
    fast = run(True)
    first = time.perf_counter() - t
    for (s1, n1), (s2, n2) in zip(fast, run(False)):
        assert np.array_equal(s1, s2)
        np.testing.assert_allclose(n1, n2, rtol=0, atol=1e-9)
    return first, best_of(lambda: run(True), repeat), best_of(lambda: run(False), repeat)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--tokens", type=int, default=200_000)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--heads", type=int, default=200, help="thesaurus rows to score")
    args = ap.parse_args()
    if not _kernels.HAVE_NUMBA:
        raise SystemExit("numba is not installed; nothing to compare")

    corpus = synthetic_corpus(args.seed, args.tokens)
    grammar = load_bundled("synthetic.sg")
    # matching goes first: building the sketches would compile its kernel
    match = bench_match(corpus, grammar, args.repeat)
    thes = Thesaurus(build_sketches(corpus, grammar))
    print(f"corpus: {len(corpus)} tokens, {len(grammar.relations)} relations, "
          f"{len(thes.owners)} thesaurus lemmas")
    print(f"{'kernel':<16}{'jit first':>12}{'jit best':>12}{'numpy best':>12}{'speedup':>10}")
    for name, (first, jit, npy) in [
        ("match_sequence", match),
        ("shared_contexts", bench_shared(thes, args.repeat, args.heads)),
    ]:
        print(f"{name:<16}{first:>11.3f}s{jit:>11.3f}s{npy:>11.3f}s{npy / jit:>9.1f}x")


if __name__ == "__main__":
    main()
