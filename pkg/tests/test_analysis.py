import random

import pytest
from hypothesis import given, settings, strategies as st
from scipy import stats

from termeval.analysis import (CorrelationResult, hypothesis_lines, match_census, naive_cheat,
                               smart_cheat, spearman)
from termeval.corpus import TermEntry, Terminology, annotate_corpus, make_hypotheses
from termeval.term_match import exact_match

from oracles import enumerate_p, rank_rho
from strategies import corpora_with_hypotheses


# cheats


def test_smart_cheat_example(example, outputs):
    mt1, mt2 = outputs
    assert smart_cheat(example, mt1) == mt1
    cheated = smart_cheat(example, mt2)
    assert hypothesis_lines(cheated)[0] == hypothesis_lines(mt2)[0] + " tos seca"
    assert exact_match(example, cheated)[0].percent == 100.0


def test_naive_cheat_duplicates_everything(example, outputs):
    cheated = naive_cheat(example, outputs[0])
    assert hypothesis_lines(cheated)[0] == hypothesis_lines(outputs[0])[0] + " fiebre tos tos seca síntomas"
    assert exact_match(example, cheated)[0].percent == 100.0


def test_empty_hypothesis_becomes_term_list(example):
    for fn in (smart_cheat, naive_cheat):
        assert hypothesis_lines(fn(example, make_hypotheses([""])))[0] == "fiebre tos tos seca síntomas"


def test_cheat_keeps_stopword_flags(example):
    cheated = smart_cheat(example, make_hypotheses(["."], example.stopwords))
    assert all(t.is_content for t in cheated[0].tokens[1:])


@given(corpora_with_hypotheses())
@settings(max_examples=100, deadline=None)
def test_cheat_properties(case):
    corpus, hyps = case
    smart = smart_cheat(corpus, hyps)
    acc = exact_match(corpus, smart)[0]
    if acc.denominator:
        assert acc.value == 1.0
    assert exact_match(corpus, naive_cheat(corpus, hyps))[0] == acc
    if exact_match(corpus, hyps)[0].numerator == 0:
        assert naive_cheat(corpus, hyps) == smart
    for seg, h, c in zip(corpus.segments, hyps, smart):
        # the original output is a prefix
        assert c.tokens[:len(h.tokens)] == h.tokens
        if not seg.occurrences:
            assert c == h


def test_cheats_on_empty_corpus():
    from termeval.corpus import EvalCorpus
    corpus = EvalCorpus((), Terminology(()), frozenset())
    assert smart_cheat(corpus, []) == naive_cheat(corpus, []) == []


# spearman


def test_spearman_worked_example():
    xs, ys = [1, 2, 3, 4], [2, 1, 4, 3]
    # sum of squared rank differences is 4: 1 - 6*4 / (4*15)
    r = spearman(xs, ys)
    assert r.rho == pytest.approx(0.6, abs=1e-12)
    assert r.p_value == pytest.approx(enumerate_p(xs, ys), abs=1e-12)
    # |rho| >= 0.6 for 10 of the 24 orderings
    assert r.p_value == pytest.approx(10 / 24, abs=1e-12)
    assert r.n == 4


def test_spearman_extremes():
    assert spearman([1, 2, 3], [4, 5, 6]).rho == 1.0
    assert spearman([1, 2, 3], [6, 5, 4]).rho == -1.0


def test_spearman_errors_and_constant():
    with pytest.raises(ValueError):
        spearman([1, 2], [1, 2])
    with pytest.raises(ValueError):
        spearman([1, 2, 3], [1, 2])
    r = spearman([1, 1, 1], [1, 2, 3])
    assert r.rho is None and r.render() == "--"


def test_spearman_large_n_uses_t_approximation():
    rng = random.Random(3)
    xs = [rng.random() for _ in range(15)]
    ys = [x + rng.gauss(0, 0.3) for x in xs]
    ours = spearman(xs, ys)
    ref = stats.spearmanr(xs, ys)
    assert ours.rho == pytest.approx(ref.statistic, abs=1e-12)
    assert ours.p_value == pytest.approx(ref.pvalue, rel=1e-9)


def test_spearman_against_rank_oracle_with_ties():
    rng = random.Random(11)
    for _ in range(50):
        n = rng.randint(3, 8)
        xs = [rng.randint(0, 4) for _ in range(n)]
        ys = [rng.randint(0, 4) for _ in range(n)]
        got, want = spearman(xs, ys).rho, rank_rho(xs, ys)
        if want is None:
            assert got is None
        else:
            assert got == pytest.approx(want, abs=1e-12)


_vals = st.lists(st.integers(-20, 20), min_size=3, max_size=7)


@given(_vals, st.data())
@settings(max_examples=100, deadline=None)
def test_spearman_monotone_invariance(xs, data):
    ys = data.draw(st.lists(st.integers(-20, 20), min_size=len(xs), max_size=len(xs)))
    base = spearman(xs, ys)
    for f in (lambda v: 3 * v + 7, lambda v: v ** 3, lambda v: 2.0 ** v):
        r = spearman([f(v) for v in xs], ys)
        assert r.rho == base.rho or r.rho == pytest.approx(base.rho, abs=1e-12)
        assert r.p_value == base.p_value or r.p_value == pytest.approx(base.p_value, abs=1e-12)
    if base.rho is not None:
        assert -1 <= base.rho <= 1 and 0 <= base.p_value <= 1


def test_render_rules():
    assert CorrelationResult(0.5, 0.3, 5).render() == "--"
    assert CorrelationResult(0.5, 0.3, 5).render(show_all=True) == "0.5000"
    assert CorrelationResult(0.9, 0.05, 5).render() == "0.9000*"
    assert CorrelationResult(0.7, 0.15, 5).render(digits=2) == "0.70"
    assert CorrelationResult(0.7, 0.2, 5).render() == "0.7000"


# census


def _lemma_fixture():
    terms = Terminology((TermEntry(("symptom",), ("síntoma",), 1),), ("en", "es"))
    src, ref = ["main symptoms"], ["síntomas principales"]
    src_lem, ref_lem = ["main symptom"], ["síntoma principal"]
    surface = annotate_corpus(src, ref, terms, "surface", src_lem, ref_lem)
    lemma = annotate_corpus(src, ref, terms, "lemma", src_lem, ref_lem)
    return surface, lemma


def test_census_lemma_only_match():
    surface, lemma = _lemma_fixture()
    c = match_census(surface.segments, lemma.segments)
    assert (c.surface, c.lemma_only, c.total) == (0, 1, 1)


def test_census_without_lemmas(example):
    c = match_census(example.segments)
    assert (c.surface, c.lemma_only, c.total) == (4, None, 4)


def test_census_identical_lemmas():
    terms = Terminology((TermEntry(("cough",), ("tos",), 1),), ("en", "es"))
    src, ref = ["dry cough"], ["tos seca"]
    s = annotate_corpus(src, ref, terms, "surface", src, ref)
    lem = annotate_corpus(src, ref, terms, "lemma", src, ref)
    assert match_census(s.segments, lem.segments).lemma_only == 0
