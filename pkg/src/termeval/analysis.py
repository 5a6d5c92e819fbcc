"""Cheating baselines, rank correlation and match census."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy import stats

from .corpus import AnnotatedSegment, EvalCorpus, Hypothesis, Token, is_punctuation
from .term_match import exact_spans, check_lengths

EXACT_PERMUTATION_MAX_N = 8
OMIT_P_ABOVE = 0.2
STAR_P_BELOW = 0.1


# --------------------------------------------------------------------------
# cheating transforms


def _append(segment_hyp: Hypothesis, words: list[str], stopwords) -> Hypothesis:
    extra = tuple(Token(w, None, is_punctuation(w), w.casefold() in stopwords) for w in words)
    return Hypothesis(segment_hyp.tokens + extra, segment_hyp.segment_id)


def _cheat(corpus: EvalCorpus, hypotheses: Sequence[Hypothesis], only_missing: bool) -> list[Hypothesis]:
    check_lengths(corpus, hypotheses)
    out = []
    for seg, hyp in zip(corpus.segments, hypotheses):
        spans = exact_spans(seg, hyp.tokens) if only_missing else [None] * len(seg.occurrences)
        words: list[str] = []
        for occ, span in zip(seg.occurrences, spans):
            if span is None:
                i, j = occ.ref_span
                words.extend(t.surface for t in seg.reference[i:j])
        out.append(_append(hyp, words, corpus.stopwords) if words else hyp)
    return out


def smart_cheat(corpus: EvalCorpus, hypotheses: Sequence[Hypothesis]) -> list[Hypothesis]:
    """Append the target form of every term the hypothesis failed to produce."""
    return _cheat(corpus, hypotheses, only_missing=True)


def naive_cheat(corpus: EvalCorpus, hypotheses: Sequence[Hypothesis]) -> list[Hypothesis]:
    """Append the target form of every annotated term, present or not."""
    return _cheat(corpus, hypotheses, only_missing=False)


def hypothesis_lines(hypotheses: Sequence[Hypothesis]) -> list[str]:
    return [" ".join(t.surface for t in h.tokens) for h in hypotheses]


# --------------------------------------------------------------------------
# Spearman


@dataclass(frozen=True)
class CorrelationResult:
    rho: float | None
    p_value: float | None
    n: int

    def render(self, show_all: bool = False, digits: int = 4) -> str:
        """Table cell: ``--`` when undefined or p > 0.2, ``*`` marks p < 0.1."""
        if self.rho is None or self.p_value is None:
            return "--"
        if self.p_value > OMIT_P_ABOVE and not show_all:
            return "--"
        star = "*" if self.p_value < STAR_P_BELOW else ""
        return f"{self.rho:.{digits}f}{star}"


def _pearson(a: np.ndarray, b: np.ndarray) -> float:
    a = a - a.mean()
    b = b - b.mean()
    return float((a * b).sum() / math.sqrt((a * a).sum() * (b * b).sum()))


def spearman(xs: Sequence[float], ys: Sequence[float]) -> CorrelationResult:
    """Spearman's rho with average ranks for ties.

    The two-sided p-value is exact (all n! orderings) for n <= 8 and uses the
    t approximation with n-2 degrees of freedom otherwise.
    """
    if len(xs) != len(ys):
        raise ValueError("spearman needs equal-length inputs")
    n = len(xs)
    if n < 3:
        raise ValueError("spearman needs at least 3 observations")
    rx, ry = stats.rankdata(xs), stats.rankdata(ys)
    if np.ptp(rx) == 0 or np.ptp(ry) == 0:
        return CorrelationResult(None, None, n)
    rho = max(-1.0, min(1.0, _pearson(rx, ry)))
    if n <= EXACT_PERMUTATION_MAX_N:
        p = _exact_p(rx, ry, rho)
    else:
        if abs(rho) == 1.0:
            p = 0.0
        else:
            t = rho * math.sqrt((n - 2) / (1 - rho * rho))
            p = float(2 * stats.t.sf(abs(t), n - 2))
    return CorrelationResult(rho, p, n)


def _exact_p(rx: np.ndarray, ry: np.ndarray, rho: float) -> float:
    perms = np.array(list(itertools.permutations(ry)))
    a = rx - rx.mean()
    b = perms - perms.mean(axis=1, keepdims=True)
    r = (b @ a) / np.sqrt((a * a).sum() * (b * b).sum(axis=1))
    hits = np.abs(r) >= abs(rho) - 1e-12
    return float(hits.mean())


# --------------------------------------------------------------------------
# match census


@dataclass(frozen=True)
class Census:
    surface: int
    lemma_only: int | None
    total: int


def _occurrence_keys(segments: Sequence[AnnotatedSegment]) -> set:
    return {(s.segment_id, o.entry_id, o.src_span, o.ref_span)
            for s in segments for o in s.occurrences}


def match_census(surface: Sequence[AnnotatedSegment],
                 lemmatized: Sequence[AnnotatedSegment] | None = None) -> Census:
    """Count surface matches, extra matches found only via lemmas, and their union."""
    s_keys = _occurrence_keys(surface)
    if lemmatized is None:
        return Census(len(s_keys), None, len(s_keys))
    extra = _occurrence_keys(lemmatized) - s_keys
    return Census(len(s_keys), len(extra), len(s_keys) + len(extra))
