from collections import Counter

import pytest
from hypothesis import given, settings, strategies as st

from termeval.analysis import naive_cheat, smart_cheat
from termeval.corpus import Hypothesis, Token, make_hypotheses, tokenize
from termeval.fixtures import generate_corpus
from termeval.term_match import match_corpus
from termeval.window_overlap import (WindowConfig, extract_window, overlap_ratio,
                                     segment_window_scores, window_overlap)

from strategies import corpora_with_hypotheses


def _ref_index(seg, word):
    return [t.surface for t in seg.reference].index(word)


def test_extract_window_fiebre(example):
    seg = example.segments[0]
    i = _ref_index(seg, "fiebre")
    # hand walk: left "tenían también", right "(98%)" then "," is skipped, then "tos"
    assert extract_window(seg.reference, (i, i + 1), 2) == Counter(["tenían", "también", "(98%)", "tos"])


def test_extract_window_sentence_start():
    toks = tokenize("fiebre alta hoy")
    assert extract_window(toks, (0, 1), 2) == Counter(["alta", "hoy"])


def test_extract_window_only_function_words():
    toks = tokenize("y , fiebre de .", stopwords={"y", "de"})
    assert extract_window(toks, (2, 3), 3) == Counter()


def test_overlap_ratio():
    assert overlap_ratio(Counter("abc"), Counter("bcd")) == pytest.approx(2 / 3)
    assert overlap_ratio(Counter(), Counter()) == 1.0
    assert overlap_ratio(Counter("a"), Counter()) == 0.0
    assert overlap_ratio(Counter("aa"), Counter("a")) == 0.5


def test_window_config_validates():
    with pytest.raises(ValueError):
        WindowConfig(0)


def test_example_windows(example, outputs):
    mt1, mt2 = outputs
    assert window_overlap(example, mt1, config=2)[0] == 1.0
    # hand walk over the three matched terms of MT Output 2
    assert window_overlap(example, mt2, config=2)[0] == pytest.approx((1 + 3 / 4 + 1) / 3, abs=1e-12)
    assert window_overlap(example, mt2, config=3)[0] == pytest.approx((5 / 6 + 5 / 6 + 1) / 3, abs=1e-12)


def test_identity_is_perfect(example):
    seg = example.segments[0]
    hyp = [Hypothesis(seg.reference, 0)]
    for n in (1, 2, 3, 5):
        assert window_overlap(example, hyp, config=n)[0] == 1.0


def test_no_matches_is_undefined(example):
    assert window_overlap(example, make_hypotheses(["nada"]), config=2) == (None, [])


def test_precomputed_matches_are_used(example, outputs):
    matches = match_corpus(example, outputs[1])
    assert window_overlap(example, outputs[1], matches, 2) == window_overlap(example, outputs[1], config=2)


def test_cheating_lowers_window_overlap():
    sc = generate_corpus(40, seed=3)
    honest = make_hypotheses(sc.honest, sc.corpus.stopwords)
    for cheat in (smart_cheat, naive_cheat):
        cheated = cheat(sc.corpus, honest)
        for n in (2, 3):
            assert window_overlap(sc.corpus, cheated, config=n)[0] < window_overlap(sc.corpus, honest, config=n)[0]


@given(corpora_with_hypotheses(), st.integers(1, 3))
@settings(max_examples=100, deadline=None)
def test_scores_in_range(case, n):
    corpus, hyps = case
    value, scores = window_overlap(corpus, hyps, config=n)
    for s in scores:
        assert 0.0 <= s.overlap <= 1.0
    if scores:
        assert value == pytest.approx(sum(s.overlap for s in scores) / len(scores))


def _window_positions(sentence, span, n):
    """Content positions that feed the window."""
    left = [i for i in range(span[0] - 1, -1, -1) if sentence[i].is_content][:n]
    right = [j for j in range(span[1], len(sentence)) if sentence[j].is_content][:n]
    return left + right


def _window_reach(sentence, span, n):
    """Every position the window walk inspects, skipped tokens included."""
    left = [i for i in range(span[0] - 1, -1, -1) if sentence[i].is_content][:n]
    right = [j for j in range(span[1], len(sentence)) if sentence[j].is_content][:n]
    lo = left[-1] if len(left) == n else 0
    hi = right[-1] + 1 if len(right) == n else len(sentence)
    return set(range(lo, hi))


@given(corpora_with_hypotheses(), st.integers(1, 3), st.data())
@settings(max_examples=100, deadline=None)
def test_correcting_a_window_token_never_hurts(case, n, data):
    corpus, hyps = case
    for seg, h in zip(corpus.segments, hyps):
        matches = match_corpus(corpus, hyps)[seg.segment_id]
        for occ, m in zip(seg.occurrences, matches):
            if not m.matched:
                continue
            ref_win = extract_window(seg.reference, occ.ref_span, n)
            hyp_win = extract_window(h.tokens, m.matched_hyp_span, n)
            # only a surplus token (more copies than the reference window has) is "wrong"
            hyp_pos = [p for p in _window_positions(h.tokens, m.matched_hyp_span, n)
                       if hyp_win[h.tokens[p].norm] > ref_win[h.tokens[p].norm]]
            if not hyp_pos or not ref_win:
                continue
            p = data.draw(st.sampled_from(hyp_pos))
            w = data.draw(st.sampled_from(sorted(ref_win)))
            before = overlap_ratio(extract_window(h.tokens, m.matched_hyp_span, n), ref_win)
            toks = list(h.tokens)
            toks[p] = Token(w, None, False, False)
            after = overlap_ratio(extract_window(toks, m.matched_hyp_span, n), ref_win)
            assert after >= before


def test_positional_correction_can_hurt_multiset_overlap():
    # swapping in the positionally corresponding word duplicates "b"
    assert overlap_ratio(Counter("ab"), Counter("ba")) == 1.0
    assert overlap_ratio(Counter("bb"), Counter("ba")) == 0.5


@given(corpora_with_hypotheses(), st.integers(1, 3))
@settings(max_examples=100, deadline=None)
def test_edits_outside_windows_do_not_matter(case, n):
    corpus, hyps = case
    for seg, h in zip(corpus.segments, hyps):
        matches = match_corpus(corpus, hyps)[seg.segment_id]
        base = segment_window_scores(seg, h.tokens, matches, n)
        keep = set()
        for m in matches:
            if m.matched:
                keep.update(_window_reach(h.tokens, m.matched_hyp_span, n))
        # replacing far-away tokens by fresh content words changes nothing
        toks = [t if i in keep else Token(f"zz{i}", None, False, False) for i, t in enumerate(h.tokens)]
        again = segment_window_scores(seg, toks, matches, n)
        assert [s.overlap for s in again] == [s.overlap for s in base]
