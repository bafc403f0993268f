import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lexplain.corpus import ingest_vertical
from lexplain.cql import (And, Atom, CQLSyntaxError, Not, Or, find_matches, format_query,
                          match_arrays, parse_query)

from gen import random_corpus, random_query
from oracles import brute_force_matches


def as_tuples(matches):
    return [(m.start, m.end, m.bindings) for m in matches]


def test_empty_brackets_match_anything():
    q = parse_query("[]")
    assert len(q.elements) == 1 and q.elements[0].test is None and q.elements[0].label is None
    c = ingest_vertical("<s>\ndog\tdog\tNN\nbarks\tbark\tVBZ\n</s>".splitlines())
    assert len(list(find_matches(q, c))) == 2


def test_labels():
    q = parse_query('2:[tag="J.*"] 1:[tag="N.*"]')
    assert q.labels == {2: 0, 1: 1}
    assert q.elements[0].test == Atom("tag", "J.*")


def test_adjective_noun_binding():
    c = ingest_vertical(["big\tbig\tJJ", "dog\tdog\tNN"])
    ms = list(find_matches(parse_query('2:[tag="J.*"] 1:[tag="N.*"]'), c))
    assert len(ms) == 1
    assert c[ms[0].bindings[2]].word == "big"
    assert c[ms[0].bindings[1]].word == "dog"


def test_precedence():
    e = parse_query('[!word="a" & tag="b" | lemma="c"]').elements[0].test
    assert e == Or(And(Not(Atom("word", "a")), Atom("tag", "b")), Atom("lemma", "c"))
    e = parse_query('[word="a" & (tag="b" | lemma="c")]').elements[0].test
    assert e == And(Atom("word", "a"), Or(Atom("tag", "b"), Atom("lemma", "c")))


def test_quantifiers():
    q = parse_query('[tag="DT"]? [tag="JJ"]{0,2} 1:[]')
    assert [(e.min, e.max) for e in q.elements] == [(0, 1), (0, 2), (1, 1)]


def test_escaped_quote():
    q = parse_query(r'[word="say \"hi\""]')
    assert q.elements[0].test.regex == 'say "hi"'


@pytest.mark.parametrize("text, offset", [
    ('[word="a"', 9),
    ('[pos="a"]', 1),
    ('1:[] 1:[]', 5),
    ('1:[]? 2:[]', 0),
    ('[]{0,12}', 2),
    ('[]{3,1}', 2),
    ('[word="("]', 1),
    ('[word="a"] ]', 11),
    ('', 0),
    ('[wörd="a"]', 1),
    ('[word="é" & x]', 13),
])
def test_syntax_errors_report_byte_offset(text, offset):
    with pytest.raises(CQLSyntaxError) as exc:
        parse_query(text)
    assert exc.value.offset == offset


def test_round_trip_example():
    text = '1:[tag="N.*"] [word="of"] 2:[tag="N.*"]'
    q = parse_query(text)
    assert parse_query(format_query(q)) == q


@settings(max_examples=300, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_parse_print_parse_fixpoint(seed):
    q = parse_query(random_query(random.Random(seed)))
    printed = format_query(q)
    assert parse_query(printed) == q
    assert format_query(parse_query(printed)) == printed


def test_no_empty_matches():
    c = ingest_vertical(["a\ta\tDT", "b\tb\tNN"])
    assert list(find_matches(parse_query('[tag="JJ"]?'), c)) == []
    ms = as_tuples(find_matches(parse_query('[tag="DT"]?'), c))
    assert ms == [(0, 1, {})]


def test_greedy_with_backtracking():
    c = ingest_vertical([f"{w}\t{w}\t{t}" for w, t in
                         [("a", "JJ"), ("b", "JJ"), ("c", "JJ"), ("d", "NN")]])
    ms = as_tuples(find_matches(parse_query('[tag="JJ"]{1,3} 1:[tag="JJ|NN"]'), c))
    # from 0 the greedy {3} would eat every adjective; backtrack to {3} + NN
    assert ms[0] == (0, 4, {1: 3})
    assert ms == [(0, 4, {1: 3}), (1, 4, {1: 3}), (2, 4, {1: 3})]
    ms = as_tuples(find_matches(parse_query('[tag="JJ"]{1,3} 1:[tag="JJ"]'), c))
    assert ms == [(0, 3, {1: 2}), (1, 3, {1: 2})]


def test_no_match_crosses_sentence_boundary():
    lines = ["<s>", "big\tbig\tJJ", "</s>", "<s>", "dog\tdog\tNN", "</s>"]
    c = ingest_vertical(lines)
    assert list(find_matches(parse_query('[tag="JJ"] [tag="NN"]'), c)) == []


def test_matches_against_oracle_small():
    rng = random.Random(7)
    for _ in range(150):
        c = random_corpus(rng, rng.randint(1, 200))
        q = parse_query(random_query(rng, max_elements=3))
        assert as_tuples(find_matches(q, c)) == brute_force_matches(q, c)


@pytest.mark.parametrize("use_jit", [True, False])
def test_kernel_paths_match_oracle(use_jit):
    rng = random.Random(11)
    for _ in range(100):
        c = random_corpus(rng, rng.randint(1, 300))
        q = parse_query(random_query(rng))
        s, e, el = match_arrays(q, c, use_jit=use_jit)
        got = [(int(a), int(b), {lab: int(el[k, i]) for lab, i in q.labels.items()})
               for k, (a, b) in enumerate(zip(s, e))]
        assert got == brute_force_matches(q, c)


def test_match_spans_contain_bindings(synth_corpus, synth_grammar):
    sent = synth_corpus.sent_end
    for rel in synth_grammar.relations:
        for q in rel.queries:
            for m in find_matches(q, synth_corpus):
                assert m.end <= sent[m.start]
                for p in m.bindings.values():
                    assert m.start <= p < m.end


def test_deterministic(synth_corpus):
    q = parse_query('2:[tag="JJ.*"] [tag="JJ.*"]{0,2} 1:[tag="NN.*"]')
    assert as_tuples(find_matches(q, synth_corpus)) == as_tuples(find_matches(q, synth_corpus))
