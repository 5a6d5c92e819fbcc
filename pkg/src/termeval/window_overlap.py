"""Context-placement scoring for exact-matched terms.

For every term found verbatim in the hypothesis, the ``n`` nearest content
words on each side of the term (punctuation and stopwords skipped, term
words excluded) are compared with the same window in the reference.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Sequence

from .corpus import EvalCorpus, Hypothesis, Span, Token
from .term_match import MatchResult, check_lengths, match_segment


@dataclass(frozen=True)
class WindowConfig:
    n: int = 2

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("window size must be >= 1")


@dataclass(frozen=True)
class WindowScore:
    segment_id: int
    entry_id: int
    hyp_window: Counter
    ref_window: Counter
    overlap: float


def extract_window(sentence: Sequence[Token], span: Span, n: int) -> Counter:
    """Casefolded multiset of up to ``n`` content words left and right of ``span``."""
    left, right = [], []
    i = span[0] - 1
    while i >= 0 and len(left) < n:
        if sentence[i].is_content:
            left.append(sentence[i].norm)
        i -= 1
    j = span[1]
    while j < len(sentence) and len(right) < n:
        if sentence[j].is_content:
            right.append(sentence[j].norm)
        j += 1
    return Counter(left + right)


def overlap_ratio(hyp_window: Counter, ref_window: Counter) -> float:
    """|H & R| / max(|H|, |R|); two empty windows count as perfect agreement."""
    denom = max(sum(hyp_window.values()), sum(ref_window.values()))
    if denom == 0:
        return 1.0
    return sum((hyp_window & ref_window).values()) / denom


def segment_window_scores(segment, hyp: Sequence[Token], matches: Sequence[MatchResult],
                          n: int) -> list[WindowScore]:
    scores = []
    for occ, res in zip(segment.occurrences, matches):
        if not res.matched:
            continue
        if res.matched_hyp_span is None:
            raise RuntimeError(f"segment {segment.segment_id}: matched term without a hypothesis span")
        h = extract_window(hyp, res.matched_hyp_span, n)
        r = extract_window(segment.reference, occ.ref_span, n)
        scores.append(WindowScore(segment.segment_id, occ.entry_id, h, r, overlap_ratio(h, r)))
    return scores


def window_overlap(corpus: EvalCorpus, hypotheses: Sequence[Hypothesis],
                   matches: Sequence[Sequence[MatchResult]] | None = None,
                   config: WindowConfig | int = 2
                   ) -> tuple[float | None, list[WindowScore]]:
    """Micro-averaged window overlap over exact-matched occurrences.

    ``matches`` holds the per-segment results of exact matching, in the
    corpus' occurrence order; it is computed when omitted.  Returns ``(None, [])`` when nothing matched.
    """
    n = config.n if isinstance(config, WindowConfig) else WindowConfig(config).n
    check_lengths(corpus, hypotheses)
    if matches is None:
        matches = [match_segment(seg, h.tokens) for seg, h in zip(corpus.segments, hypotheses)]
    check_lengths(corpus, matches, "match lists")
    scores: list[WindowScore] = []
    for seg, h, m in zip(corpus.segments, hypotheses, matches):
        scores.extend(segment_window_scores(seg, h.tokens, m, n))
    if not scores:
        return None, scores
    return sum(s.overlap for s in scores) / len(scores), scores
