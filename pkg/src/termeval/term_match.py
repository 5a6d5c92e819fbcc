"""Term accuracy: exact match, partial match, reordering-penalised match and
alignment-constrained match.

All accuracies are micro-averaged over annotated term occurrences.  A
corpus without occurrences has an undefined (``None``) accuracy.
"""

from __future__ import annotations

from collections import Counter, defaultdict
from dataclasses import dataclass
from typing import Sequence

from .alignment import WordAlignment
from .corpus import AnnotatedSegment, EvalCorpus, FormatError, Hypothesis, Span, Token


@dataclass(frozen=True)
class MatchResult:
    segment_id: int
    entry_id: int
    matched: bool
    matched_hyp_span: Span | None
    partial_credit: float
    rp_credit: float


@dataclass(frozen=True)
class AccuracyScore:
    numerator: float
    denominator: int

    @property
    def value(self) -> float | None:
        return self.numerator / self.denominator if self.denominator else None

    @property
    def percent(self) -> float | None:
        v = self.value
        return None if v is None else 100.0 * v

    def __add__(self, other: AccuracyScore) -> AccuracyScore:
        return AccuracyScore(self.numerator + other.numerator, self.denominator + other.denominator)


def check_lengths(corpus: EvalCorpus, hypotheses: Sequence, what: str = "hypotheses") -> None:
    if len(hypotheses) != len(corpus.segments):
        raise FormatError(f"{len(hypotheses)} {what} for {len(corpus.segments)} segments")


def _find_all(words: Sequence[str], pattern: Sequence[str]) -> list[Span]:
    m = len(pattern)
    pat = list(pattern)
    return [(i, i + m) for i in range(len(words) - m + 1) if list(words[i:i + m]) == pat]


def exact_spans(segment: AnnotatedSegment, hyp: Sequence[Token]) -> list[Span | None]:
    """Hypothesis span assigned to each occurrence, or None when unmatched.

    Occurrences of one entry claim pairwise-disjoint hypothesis spans,
    assigned greedily left to right in reference order.  Different entries
    may share hypothesis tokens.
    """
    words = [t.norm for t in hyp]
    out: list[Span | None] = [None] * len(segment.occurrences)
    groups: dict[int, list[int]] = defaultdict(list)
    for k, occ in enumerate(segment.occurrences):
        groups[occ.entry_id].append(k)
    for idxs in groups.values():
        claimed: list[Span] = []
        for k in idxs:
            target = segment.target_form(segment.occurrences[k])
            for span in _find_all(words, target):
                if all(span[1] <= a or span[0] >= b for a, b in claimed):
                    out[k] = span
                    claimed.append(span)
                    break
    return out


def partial_credit(target: Sequence[str], hyp_words: Sequence[str]) -> float:
    """Fraction of target words present in the hypothesis, multiplicity-capped."""
    have = Counter(hyp_words)
    need = Counter(target)
    return sum(min(c, have[w]) for w, c in need.items()) / len(target)


def reordering_penalty(i: int, j: int, hyp_len: int, ref_len: int) -> float:
    """1 - |i/|h| - j/|r||, with 1-based positions i (hypothesis) and j (reference)."""
    return 1.0 - abs(i / hyp_len - j / ref_len)


def rp_credit(target_positions: Sequence[int], ref_words: Sequence[str],
              hyp_words: Sequence[str]) -> float:
    """Partial credit where every found word is weighted by its reordering penalty.

    :param target_positions: 0-based reference positions of the term's words
    Each term word takes the unused hypothesis position of the same word with
    the highest penalty value (earliest position on ties).
    """
    m, n = len(hyp_words), len(ref_words)
    used: set[int] = set()
    total = 0.0
    for j in target_positions:
        w = ref_words[j]
        best, best_i = -1.0, None
        for i, hw in enumerate(hyp_words):
            if hw == w and i not in used:
                rp = reordering_penalty(i + 1, j + 1, m, n)
                if rp > best:
                    best, best_i = rp, i
        if best_i is not None:
            used.add(best_i)
            total += best
    return total / len(target_positions)


def match_segment(segment: AnnotatedSegment, hyp: Sequence[Token]) -> list[MatchResult]:
    spans = exact_spans(segment, hyp)
    hyp_words = [t.norm for t in hyp]
    ref_words = [t.norm for t in segment.reference]
    results = []
    for occ, span in zip(segment.occurrences, spans):
        target = segment.target_form(occ)
        part = partial_credit(target, hyp_words)
        rp = rp_credit(range(*occ.ref_span), ref_words, hyp_words) if hyp_words else 0.0
        results.append(MatchResult(segment.segment_id, occ.entry_id, span is not None,
                                   span, 1.0 if span is not None else part, rp))
    return results


def match_corpus(corpus: EvalCorpus, hypotheses: Sequence[Hypothesis]) -> list[list[MatchResult]]:
    check_lengths(corpus, hypotheses)
    return [match_segment(seg, h.tokens) for seg, h in zip(corpus.segments, hypotheses)]


def _flatten(per_segment):
    return [r for seg in per_segment for r in seg]


def exact_match(corpus: EvalCorpus, hypotheses: Sequence[Hypothesis]
                ) -> tuple[AccuracyScore, list[MatchResult]]:
    results = _flatten(match_corpus(corpus, hypotheses))
    return AccuracyScore(float(sum(r.matched for r in results)), len(results)), results


def partial_match(corpus: EvalCorpus, hypotheses: Sequence[Hypothesis]) -> AccuracyScore:
    results = _flatten(match_corpus(corpus, hypotheses))
    return AccuracyScore(sum(r.partial_credit for r in results), len(results))


def rp_match(corpus: EvalCorpus, hypotheses: Sequence[Hypothesis]) -> AccuracyScore:
    results = _flatten(match_corpus(corpus, hypotheses))
    return AccuracyScore(sum(r.rp_credit for r in results), len(results))


def alignment_credits(segment: AnnotatedSegment, hyp: Sequence[Token],
                      alignment: WordAlignment) -> list[float]:
    """Per-occurrence credit restricted to the hypothesis words aligned to the source term."""
    alignment.check_bounds(len(segment.source), len(hyp), f"segment {segment.segment_id}: ")
    hyp_words = [t.norm for t in hyp]
    out = []
    for occ in segment.occurrences:
        cands = [hyp_words[j] for j in alignment.right_of(range(*occ.src_span))]
        out.append(partial_credit(segment.target_form(occ), cands))
    return out


def alignment_match(corpus: EvalCorpus, hypotheses: Sequence[Hypothesis],
                    alignments: Sequence[WordAlignment]) -> AccuracyScore:
    """Partial-match accuracy where only source-aligned hypothesis words count.

    ``alignments[k]`` links source tokens (left) to hypothesis tokens (right).
    """
    check_lengths(corpus, hypotheses)
    check_lengths(corpus, alignments, "alignments")
    total, n = 0.0, 0
    for seg, h, a in zip(corpus.segments, hypotheses, alignments):
        credits = alignment_credits(seg, h.tokens, a)
        total += sum(credits)
        n += len(credits)
    return AccuracyScore(total, n)
