"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run on its own with ``pytest tests/test_acceptance.py -v``.
"""

import filecmp
import random
import time

import mpmath
import numpy as np
import pytest

from lexplain.cli import run
from lexplain.cql import find_matches, parse_query
from lexplain.evaluate import (AnnotationRecord, IndicatorSet, aggregate_indicators,
                               aggregate_quality, coverage_rate)
from lexplain.explain import Explanation, ExplanationLine, compose_noun, no_data, render_text
from lexplain.sketches import log_dice
from lexplain.thesaurus import Thesaurus

from conftest import DATA_DIR, SAMPLE_DIR
from gen import random_corpus, random_query
from oracles import brute_force_matches, formula_similarity, index_vectors, naive_sketches
from test_explain import test_explanation_invariants as explanation_invariants


@pytest.fixture
def report(capsys):
    def emit(number, title, ok, detail=""):
        line = f"criterion {number} {'PASS' if ok else 'FAIL'}: {title}"
        if detail:
            line += f" ({detail})"
        with capsys.disabled():
            print("\n" + line)
        assert ok, line
    return emit


def test_criterion_1_cql_oracle(report):
    rng = random.Random(2024)
    mismatches = []
    own_time = 0.0
    start = time.perf_counter()
    for i in range(1000):
        corpus = random_corpus(rng, rng.randint(1, 2000))
        text = random_query(rng, max_elements=4, max_repeat=3)
        q = parse_query(text)
        t = time.perf_counter()
        got = [(m.start, m.end, m.bindings) for m in find_matches(q, corpus)]
        own_time += time.perf_counter() - t
        if got != brute_force_matches(q, corpus):
            mismatches.append((i, text))
    total = time.perf_counter() - start
    report(1, "CQL oracle equivalence", not mismatches and total < 60,
           f"1000 pairs, {len(mismatches)} mismatches, {total:.1f} s total, "
           f"{own_time:.1f} s in find_matches")


def test_criterion_2_log_dice(report):
    exact = log_dice(10, 10, 10) == 14.0 and log_dice(1, 2, 2) == 13.0
    rng = random.Random(7)
    worst = 0.0
    with mpmath.workdps(50):
        for _ in range(10_000):
            f_x = rng.randint(1, 10**9)
            f_y = rng.randint(1, 10**9)
            f = rng.randint(1, min(f_x, f_y))
            ref = 14 + mpmath.log(mpmath.mpf(2 * f) / (f_x + f_y), 2)
            worst = max(worst, abs(log_dice(f, f_x, f_y) - float(ref)))
    report(2, "logDice unit suite", exact and worst < 1e-9,
           f"exact values {'ok' if exact else 'wrong'}, max error {worst:.2e} over 10000 triples")


def test_criterion_3_sketch_oracle(synth_corpus, synth_grammar, synth_index, report):
    got = {(t.head, t.relation, t.collocate): (t.pair_freq, t.score) for t in synth_index.triples()}
    want = naive_sketches(synth_corpus, synth_grammar)
    report(3, "sketch build equals naive tally", got == want,
           f"{len(synth_corpus)} tokens, {len(got)} triples vs {len(want)}")


def test_criterion_4_golden(sample_index, sample_thesaurus, report):
    text = render_text(compose_noun(("bone", "N"), sample_index, sample_thesaurus))
    golden = (DATA_DIR / "bone.golden.txt").read_text(encoding="utf-8")
    body = golden.splitlines()[1:]
    shape = (len(body) == 9 and body[0].startswith(
        "1. similar meaning as a/an bone can have (a/an) tooth, joint, muscle, "))
    report(4, "bone golden explanation", text == golden and shape,
           f"{len(body)} lines, byte-identical: {text == golden}")


def test_criterion_5_tables(report):
    def ind(pos, flag, true, total):
        return [IndicatorSet(f"w{i}", pos, {flag: i < true}) for i in range(total)]

    t1 = aggregate_indicators(ind("N", "synonym", 66, 71) + ind("J", "synonym", 26, 33)
                              + ind("V", "synonym", 38, 42))
    got1 = [f"{t1['synonym', p].percent}" for p in ("N", "J", "V")]
    recs = [AnnotationRecord(f"{q}{i}", "N", q)
            for q, n in (("good", 28), ("post-edit", 37), ("bad", 6)) for i in range(n)]
    t2 = aggregate_quality(recs)
    got2 = [f"{t2['N', q].percent}" for q in ("good", "post-edit", "bad")]
    line = Explanation(("x", "N"), (ExplanationLine("k", "%(items)", ("y",), ("r",)),))
    cov = f"{coverage_rate([line] * 63 + [no_data(('z', 'N'))] * 8)}"
    ok = (got1 == ["92.96", "78.79", "90.48"] and got2 == ["39.44", "52.11", "8.45"]
          and cov == "88.73")
    report(5, "table arithmetic", ok, f"indicators {got1}, quality {got2}, coverage {cov}")


def test_criterion_6_thesaurus(synth_index, report):
    thes = Thesaurus.for_index(synth_index)
    n = len(thes.owners)
    every = np.arange(n, dtype=np.int64)
    m = np.vstack([thes._score(a, every)[1] for a in range(n)])
    symmetric = bool(np.array_equal(m, m.T))
    in_range = bool((m >= 0).all() and (m <= 1).all())
    vectors = index_vectors(synth_index)
    twins = [(a, b) for i, a in enumerate(thes.owners) for b in thes.owners[i + 1:]
             if vectors[a] == vectors[b]]
    identical = [thes.similarity(a, b) for a, b in twins]
    twin_ok = bool(identical) and all(abs(s - 1.0) < 1e-12 for s in identical)
    formula_ok = all(abs(m[i, j] - formula_similarity(vectors[a], vectors[b])) < 1e-12
                     for i, a in enumerate(thes.owners) for j, b in enumerate(thes.owners))
    report(6, "thesaurus properties", symmetric and in_range and twin_ok and formula_ok,
           f"{n * n} ordered pairs, symmetric {symmetric}, in [0,1] {in_range}, "
           f"{len(twins)} identical-vector pairs at 1.0: {twin_ok}")


def test_criterion_7_explanation_invariants(report):
    try:
        explanation_invariants()
        ok, detail = True, "300 random sketch indices"
    except AssertionError as exc:
        ok, detail = False, str(exc).splitlines()[0]
    report(7, "explanation invariants", ok, detail)


def _pipeline(root, capsys):
    root.mkdir()
    idx = root / "c.idx"
    out = root / "explanations"
    assert run(["ingest", "--input", str(SAMPLE_DIR / "sample.vert"), "--output", str(idx)]) == 0
    assert run(["explain", "--corpus", str(idx), "--headlist", str(SAMPLE_DIR / "headwords.txt"),
                "--outdir", str(out), "--format", "json"]) == 0
    assert run(["explain", "--corpus", str(idx), "--headlist", str(SAMPLE_DIR / "headwords.txt"),
                "--outdir", str(root / "text")]) == 0
    capsys.readouterr()
    assert run(["evaluate", "--corpus", str(idx), "--explanations", str(out),
                "--annotations", str(SAMPLE_DIR / "annotations.tsv"),
                "--output", str(root / "report.json")]) == 0
    (root / "report.txt").write_text(capsys.readouterr().out)


def test_criterion_8_determinism(tmp_path, capsys, report):
    a, b = tmp_path / "a", tmp_path / "b"
    _pipeline(a, capsys)
    _pipeline(b, capsys)
    files = sorted(p.relative_to(a) for p in a.rglob("*") if p.is_file())
    same = [filecmp.cmp(a / f, b / f, shallow=False) for f in files]
    other = sorted(p.relative_to(b) for p in b.rglob("*") if p.is_file())
    report(8, "pipeline determinism", files == other and all(same) and len(files) > 3,
           f"{len(files)} artifacts, {sum(same)} byte-identical")
