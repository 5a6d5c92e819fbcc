import itertools

import pytest
from hypothesis import given, strategies as st

from termeval.alignment import (WordAlignment, format_pharaoh, load_alignments,
                                monolingual_align, parse_pharaoh, project_span)
from termeval.corpus import FormatError, tokenize

words = st.lists(st.sampled_from("a b c d".split()), max_size=9)
link_sets = st.frozensets(st.tuples(st.integers(0, 9), st.integers(0, 9)), max_size=20)


def test_parse_pharaoh():
    assert parse_pharaoh("0-0 1-2 1-3").links == {(0, 0), (1, 2), (1, 3)}
    assert parse_pharaoh("").links == frozenset()


@pytest.mark.parametrize("bad", ["2-x", "1", "1-", "-1", "a-b", "1-2-3"])
def test_parse_pharaoh_malformed(bad):
    with pytest.raises(FormatError):
        parse_pharaoh(bad)


@given(link_sets)
def test_pharaoh_roundtrip(links):
    a = WordAlignment(links)
    assert parse_pharaoh(format_pharaoh(a)) == a


def test_load_alignments_reports_line(tmp_path):
    p = tmp_path / "a.txt"
    p.write_text("0-0\n\n1-x\n", encoding="utf-8")
    with pytest.raises(FormatError, match=":3:"):
        load_alignments(p)


def test_check_bounds():
    with pytest.raises(FormatError):
        WordAlignment(frozenset({(0, 3)})).check_bounds(1, 3)
    WordAlignment(frozenset({(0, 2)})).check_bounds(1, 3)


@given(words)
def test_monolingual_identity(ws):
    toks = tokenize(" ".join(ws))
    assert monolingual_align(toks, toks).links == {(i, i) for i in range(len(ws))}


def test_monolingual_repeated_tokens():
    a = monolingual_align(tokenize("a b a"), tokenize("a a"))
    assert a.links == {(0, 0), (2, 1)}


def test_monolingual_casefolds():
    assert monolingual_align(tokenize("Fiebre"), tokenize("fiebre")).links == {(0, 0)}


def _brute_greedy(hyp, ref):
    # independent statement of the rule with exact fractions
    from fractions import Fraction
    pairs = [(abs(Fraction(i + 1, len(hyp)) - Fraction(j + 1, len(ref))), j, i)
             for i, j in itertools.product(range(len(hyp)), range(len(ref)))
             if hyp[i] == ref[j]]
    links, uh, ur = set(), set(), set()
    for _, j, i in sorted(pairs):
        if i not in uh and j not in ur:
            links.add((i, j))
            uh.add(i)
            ur.add(j)
    return links


@given(words, words)
def test_monolingual_matches_fraction_oracle(h, r):
    got = monolingual_align(tokenize(" ".join(h)), tokenize(" ".join(r))).links
    assert got == _brute_greedy(h, r)
    # one-to-one, identical tokens only
    assert len({i for i, _ in got}) == len(got) == len({j for _, j in got})
    assert all(h[i] == r[j] for i, j in got)


def test_example_tos_alignment(example, outputs):
    seg = example.segments[0]
    hyp = outputs[1][0].tokens
    a = monolingual_align(hyp, seg.reference)
    ref_words = [t.surface for t in seg.reference]
    tos, seca = ref_words.index("tos"), ref_words.index("seca")
    to_hyp = dict((j, i) for i, j in a.links)
    assert hyp[to_hyp[tos]].surface == "tos"
    assert seca not in to_hyp


def test_project_span():
    a = WordAlignment(frozenset({(2, 5), (3, 7)}))
    p = project_span((2, 4), a)
    assert (p.lo, p.hi, p.empty) == (5, 7, False)
    assert project_span((0, 2), a).empty


def test_project_span_example(example, outputs):
    seg = example.segments[0]
    hyp = outputs[1][0].tokens
    a = monolingual_align(hyp, seg.reference).inverted()
    occ = [o for o in seg.occurrences if o.entry_id == 3][0]
    p = project_span(occ.ref_span, a, len(hyp))
    assert p.lo == p.hi and hyp[p.lo].surface == "tos"


@given(link_sets, st.integers(0, 9), st.integers(1, 5), st.integers(0, 3), st.integers(0, 3))
def test_project_span_monotone(links, i, width, grow_left, grow_right):
    a = WordAlignment(links)
    small = project_span((i, i + width), a)
    big = project_span((max(0, i - grow_left), i + width + grow_right), a)
    if not small.empty:
        assert not big.empty and big.lo <= small.lo and big.hi >= small.hi
