"""Corpus BLEU and term-centred phrase metrics.

Term-BLEU aligns each hypothesis to its reference, projects every term's
reference span onto the hypothesis, cuts ``k`` tokens of context around
both spans and scores the resulting phrase pairs as one small corpus.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Sequence

from .alignment import WordAlignment, monolingual_align, project_span
from .corpus import AnnotatedSegment, EvalCorpus, Hypothesis, Token
from .term_match import check_lengths


@dataclass(frozen=True)
class BleuConfig:
    max_ngram: int = 4
    smoothing: str = "none"  # "none" or "add-k"
    k: float = 1.0

    def __post_init__(self):
        if self.max_ngram < 1:
            raise ValueError("max_ngram must be >= 1")
        if self.smoothing not in ("none", "add-k"):
            raise ValueError(f"unknown smoothing {self.smoothing!r}")


PHRASE_CONFIG = BleuConfig(smoothing="add-k", k=1.0)


@dataclass
class BleuStats:
    correct: list[int]
    total: list[int]
    sys_len: int = 0
    ref_len: int = 0

    @classmethod
    def zeros(cls, max_ngram: int) -> BleuStats:
        return cls([0] * max_ngram, [0] * max_ngram)

    def __iadd__(self, other: BleuStats) -> BleuStats:
        self.correct = [a + b for a, b in zip(self.correct, other.correct)]
        self.total = [a + b for a, b in zip(self.total, other.total)]
        self.sys_len += other.sys_len
        self.ref_len += other.ref_len
        return self


def _ngrams(words: Sequence[str], n: int) -> Counter:
    return Counter(tuple(words[i:i + n]) for i in range(len(words) - n + 1))


def _norm(seq: Sequence) -> list[str]:
    return [t.norm if isinstance(t, Token) else str(t).casefold() for t in seq]


def sentence_stats(hyp: Sequence, ref: Sequence, max_ngram: int = 4) -> BleuStats:
    h, r = _norm(hyp), _norm(ref)
    stats = BleuStats.zeros(max_ngram)
    for n in range(1, max_ngram + 1):
        hc, rc = _ngrams(h, n), _ngrams(r, n)
        stats.correct[n - 1] = sum(min(c, rc[g]) for g, c in hc.items())
        stats.total[n - 1] = max(len(h) - n + 1, 0)
    stats.sys_len, stats.ref_len = len(h), len(r)
    return stats


def bleu_from_stats(stats: BleuStats, config: BleuConfig = BleuConfig()) -> float:
    """BLEU (0-100) from summed sufficient statistics."""
    log_sum = 0.0
    for n in range(config.max_ngram):
        correct, total = stats.correct[n], stats.total[n]
        if config.smoothing == "add-k" and n > 0:
            correct, total = correct + config.k, total + config.k
        if total == 0 or correct == 0:
            return 0.0
        log_sum += math.log(correct / total)
    if stats.sys_len == 0:
        return 0.0
    bp = 1.0 if stats.sys_len >= stats.ref_len else math.exp(1 - stats.ref_len / stats.sys_len)
    return 100.0 * bp * math.exp(log_sum / config.max_ngram)


def corpus_bleu(hypotheses: Sequence[Sequence], references: Sequence[Sequence],
                config: BleuConfig = BleuConfig()) -> float:
    """Single-reference corpus BLEU on pre-tokenized, casefolded tokens."""
    if len(hypotheses) != len(references):
        raise ValueError(f"{len(hypotheses)} hypotheses vs {len(references)} references")
    if not hypotheses:
        raise ValueError("corpus_bleu needs at least one segment")
    stats = BleuStats.zeros(config.max_ngram)
    for h, r in zip(hypotheses, references):
        stats += sentence_stats(h, r, config.max_ngram)
    return bleu_from_stats(stats, config)


# --------------------------------------------------------------------------
# term phrase pairs


@dataclass(frozen=True)
class TermPhrasePair:
    ref_phrase: tuple[str, ...]
    hyp_phrase: tuple[str, ...]
    entry_id: int
    segment_id: int


def extract_term_phrases(segment: AnnotatedSegment, hypothesis: Sequence[Token], k: int,
                         alignment: WordAlignment | None = None) -> list[TermPhrasePair]:
    """One phrase pair per occurrence: the term plus ``k`` tokens each side.

    :param alignment: hypothesis (left) to reference (right) links; built
        with :func:`monolingual_align` when omitted
    """
    if k < 0:
        raise ValueError("k must be >= 0")
    hyp = list(hypothesis)
    ref = segment.reference
    if alignment is None:
        alignment = monolingual_align(hyp, ref)
    ref_to_hyp = alignment.inverted()
    pairs = []
    for occ in segment.occurrences:
        i, j = occ.ref_span
        ref_phrase = tuple(t.surface for t in ref[max(0, i - k):j + k])
        proj = project_span(occ.ref_span, ref_to_hyp, len(hyp))
        if proj.empty:
            hyp_phrase: tuple[str, ...] = ()
        else:
            hyp_phrase = tuple(t.surface for t in hyp[max(0, proj.lo - k):proj.hi + 1 + k])
        pairs.append(TermPhrasePair(ref_phrase, hyp_phrase, occ.entry_id, segment.segment_id))
    return pairs


def corpus_term_phrases(corpus: EvalCorpus, hypotheses: Sequence[Hypothesis], k: int,
                        alignments: Sequence[WordAlignment] | None = None) -> list[TermPhrasePair]:
    check_lengths(corpus, hypotheses)
    if alignments is not None:
        check_lengths(corpus, alignments, "alignments")
    out = []
    for idx, (seg, h) in enumerate(zip(corpus.segments, hypotheses)):
        a = alignments[idx] if alignments is not None else None
        if a is not None:
            a.check_bounds(len(h.tokens), len(seg.reference), f"segment {idx}: ")
        out.extend(extract_term_phrases(seg, h.tokens, k, a))
    return out


def phrase_bleu(pairs: Iterable[TermPhrasePair], config: BleuConfig = PHRASE_CONFIG) -> float | None:
    pairs = list(pairs)
    if not pairs:
        return None
    return corpus_bleu([p.hyp_phrase for p in pairs], [p.ref_phrase for p in pairs], config)


def exact_order_fraction(pairs: Iterable[TermPhrasePair]) -> float | None:
    pairs = list(pairs)
    if not pairs:
        return None
    same = sum(_norm(p.hyp_phrase) == _norm(p.ref_phrase) for p in pairs)
    return same / len(pairs)


def term_bleu(corpus: EvalCorpus, hypotheses: Sequence[Hypothesis], k: int = 2,
              config: BleuConfig = PHRASE_CONFIG,
              alignments: Sequence[WordAlignment] | None = None) -> float | None:
    """BLEU over all term phrase pairs of the corpus pooled together (None if no terms)."""
    return phrase_bleu(corpus_term_phrases(corpus, hypotheses, k, alignments), config)


def exact_order_match(corpus: EvalCorpus, hypotheses: Sequence[Hypothesis], k: int = 2,
                      alignments: Sequence[WordAlignment] | None = None) -> float | None:
    """Fraction of term phrase pairs whose two sides are token-identical."""
    return exact_order_fraction(corpus_term_phrases(corpus, hypotheses, k, alignments))


def write_phrase_corpus(pairs: Iterable[TermPhrasePair], ref_path, hyp_path) -> None:
    """Write the phrase pairs as two line-parallel files for external scorers."""
    with open(ref_path, "w", encoding="utf-8", newline="\n") as fr, \
            open(hyp_path, "w", encoding="utf-8", newline="\n") as fh:
        for p in pairs:
            fr.write(" ".join(p.ref_phrase) + "\n")
            fh.write(" ".join(p.hyp_phrase) + "\n")
