"""Run every selected metric over one system's output.

Per-segment scoring is a pure function of its inputs, so it can be farmed
out to a process pool; statistics are always reduced in segment order in
the calling process, which keeps results independent of ``jobs``.
"""

from __future__ import annotations

from concurrent.futures import Executor, ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Sequence

from .alignment import WordAlignment
from .bleu import (PHRASE_CONFIG, BleuConfig, BleuStats, TermPhrasePair, bleu_from_stats,
                   exact_order_fraction, extract_term_phrases, phrase_bleu, sentence_stats)
from .corpus import AnnotatedSegment, EvalCorpus, Hypothesis
from .report import SystemReport
from .ter import TerResult, aggregate_ter, segment_schema, ter
from .term_match import MatchResult, alignment_credits, check_lengths, match_segment
from .window_overlap import segment_window_scores

ALL_METRICS = ("bleu", "exact", "partial", "rp", "window", "term", "ter",
               "alignment", "term_bleu", "exact_order")
DEFAULT_METRICS = ("bleu", "exact", "partial", "rp", "window", "term", "ter")
# metrics needing hypothesis<->reference links (file or built-in aligner)
MONOLINGUAL_METRICS = frozenset({"term_bleu", "exact_order"})
# metrics needing source<->hypothesis links from a file
BILINGUAL_METRICS = frozenset({"alignment"})


@dataclass(frozen=True)
class EvalConfig:
    metrics: tuple[str, ...] = DEFAULT_METRICS
    windows: tuple[int, ...] = (2, 3)
    ks: tuple[int, ...] = (2, 3)
    term_cost: float = 2.0
    average: str = "micro"
    normalize: str = "weighted"
    bleu: BleuConfig = BleuConfig()
    phrase_bleu: BleuConfig = PHRASE_CONFIG

    def __post_init__(self):
        unknown = set(self.metrics) - set(ALL_METRICS)
        if unknown:
            raise ValueError(f"unknown metrics: {sorted(unknown)}")
        if any(n < 1 for n in self.windows) or any(k < 1 for k in self.ks):
            raise ValueError("window sizes and k must be >= 1")
        if self.term_cost < 1:
            raise ValueError("term cost must be >= 1")

    def wants(self, metric: str) -> bool:
        return metric in self.metrics


@dataclass
class SegmentScores:
    segment_id: int
    bleu: BleuStats | None = None
    matches: list[MatchResult] = field(default_factory=list)
    windows: dict[int, list[float]] = field(default_factory=dict)
    term: TerResult | None = None
    plain: TerResult | None = None
    alignment: list[float] | None = None
    phrases: dict[int, list[TermPhrasePair]] = field(default_factory=dict)

    def record(self, system: str) -> dict:
        """JSON-ready per-segment record (full float precision)."""
        rec: dict = {"system": system, "segment_id": self.segment_id}
        if self.term is not None:
            rec["term"] = _ter_record(self.term)
            rec["one_minus_term"] = None if self.term.score is None else 1 - self.term.score
        if self.plain is not None:
            rec["ter"] = _ter_record(self.plain)
            rec["one_minus_ter"] = None if self.plain.score is None else 1 - self.plain.score
        terms = []
        window_iters = {n: iter(v) for n, v in self.windows.items()}
        for k, m in enumerate(self.matches):
            t = {"entry_id": m.entry_id, "matched": m.matched,
                 "hyp_span": list(m.matched_hyp_span) if m.matched_hyp_span else None,
                 "partial_credit": m.partial_credit, "rp_credit": m.rp_credit}
            for n, it in window_iters.items():
                t[f"window_{n}"] = next(it) if m.matched else None
            if self.alignment is not None:
                t["alignment_credit"] = self.alignment[k]
            terms.append(t)
        rec["terms"] = terms
        return rec

    def mean_window(self, n: int) -> float | None:
        vals = self.windows.get(n) or []
        return sum(vals) / len(vals) if vals else None


def _ter_record(r: TerResult) -> dict:
    return {"insertions": r.insertions, "deletions": r.deletions,
            "substitutions": r.substitutions, "shifts": r.shifts,
            "weighted_cost": r.weighted_cost, "normalizer": r.normalizer, "score": r.score}


def score_segment(segment: AnnotatedSegment, hypothesis: Hypothesis, config: EvalConfig,
                  src_alignment: WordAlignment | None = None,
                  hyp_alignment: WordAlignment | None = None,
                  builtin_aligner: bool = False) -> SegmentScores:
    hyp = hypothesis.tokens
    out = SegmentScores(segment.segment_id)
    if config.wants("bleu"):
        out.bleu = sentence_stats(hyp, segment.reference, config.bleu.max_ngram)
    matches = match_segment(segment, hyp)
    out.matches = matches
    if config.wants("window"):
        for n in config.windows:
            out.windows[n] = [w.overlap for w in segment_window_scores(segment, hyp, matches, n)]
    if config.wants("term"):
        out.term = ter(hyp, segment.reference, segment_schema(segment, config.term_cost),
                       config.normalize)
    if config.wants("ter"):
        out.plain = ter(hyp, segment.reference, segment_schema(segment, 1.0), config.normalize)
    if config.wants("alignment"):
        out.alignment = alignment_credits(segment, hyp, src_alignment)
    if config.wants("term_bleu") or config.wants("exact_order"):
        if hyp_alignment is None and not builtin_aligner:
            raise ValueError("term phrase metrics need an alignment")
        if hyp_alignment is not None:
            hyp_alignment.check_bounds(len(hyp), len(segment.reference),
                                       f"segment {segment.segment_id}: ")
        for k in config.ks:
            out.phrases[k] = extract_term_phrases(segment, hyp, k, hyp_alignment)
    return out


def _score_star(args):
    return score_segment(*args)


@dataclass
class SystemEvaluation:
    report: SystemReport
    segments: list[SegmentScores]

    def records(self) -> list[dict]:
        return [s.record(self.report.system_name) for s in self.segments]


def check_alignment_inputs(config: EvalConfig, src_alignments, hyp_alignments,
                           builtin_aligner: bool) -> None:
    if BILINGUAL_METRICS & set(config.metrics) and src_alignments is None:
        raise ValueError("alignment_match needs source-hypothesis alignments")
    if MONOLINGUAL_METRICS & set(config.metrics) and hyp_alignments is None and not builtin_aligner:
        raise ValueError("term_bleu/exact_order need hypothesis-reference alignments "
                         "or permission to use the built-in aligner")


def evaluate_system(corpus: EvalCorpus, hypotheses: Sequence[Hypothesis], system_name: str,
                    config: EvalConfig = EvalConfig(), *,
                    src_alignments: Sequence[WordAlignment] | None = None,
                    hyp_alignments: Sequence[WordAlignment] | None = None,
                    builtin_aligner: bool = False, is_cheating: bool = False,
                    jobs: int = 1, executor: Executor | None = None) -> SystemEvaluation:
    check_lengths(corpus, hypotheses)
    check_alignment_inputs(config, src_alignments, hyp_alignments, builtin_aligner)
    for aligns, what in ((src_alignments, "source alignments"), (hyp_alignments, "alignments")):
        if aligns is not None:
            check_lengths(corpus, aligns, what)
    n = len(corpus.segments)
    tasks = [(seg, hyp, config,
              src_alignments[k] if src_alignments is not None else None,
              hyp_alignments[k] if hyp_alignments is not None else None,
              builtin_aligner)
             for k, (seg, hyp) in enumerate(zip(corpus.segments, hypotheses))]
    if executor is not None:
        segs = list(executor.map(_score_star, tasks, chunksize=max(1, n // 32)))
    elif jobs > 1 and n > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            segs = list(pool.map(_score_star, tasks, chunksize=max(1, n // (4 * jobs))))
    else:
        segs = [_score_star(t) for t in tasks]
    return SystemEvaluation(reduce_scores(segs, system_name, config, is_cheating), segs)


def reduce_scores(segs: Sequence[SegmentScores], system_name: str, config: EvalConfig,
                  is_cheating: bool = False) -> SystemReport:
    rep = SystemReport(system_name, is_cheating=is_cheating)
    matches = [m for s in segs for m in s.matches]
    n_occ = len(matches)
    if config.wants("bleu") and segs:
        stats = BleuStats.zeros(config.bleu.max_ngram)
        for s in segs:
            stats += s.bleu
        rep.bleu = bleu_from_stats(stats, config.bleu) / 100.0
    if config.wants("exact"):
        rep.exact_match = sum(m.matched for m in matches) / n_occ if n_occ else None
    if config.wants("partial"):
        rep.partial_match = sum(m.partial_credit for m in matches) / n_occ if n_occ else None
    if config.wants("rp"):
        rep.rp_match = sum(m.rp_credit for m in matches) / n_occ if n_occ else None
    if config.wants("window"):
        for n in config.windows:
            vals = [v for s in segs for v in s.windows[n]]
            rep.window_overlap[n] = sum(vals) / len(vals) if vals else None
    if config.wants("term"):
        t = aggregate_ter([s.term for s in segs], config.average)
        rep.one_minus_term = None if t is None else 1 - t
    if config.wants("ter"):
        t = aggregate_ter([s.plain for s in segs], config.average)
        rep.one_minus_ter = None if t is None else 1 - t
    if config.wants("alignment"):
        credits = [c for s in segs for c in s.alignment]
        rep.alignment_match = sum(credits) / len(credits) if credits else None
    for k in config.ks:
        pairs = [p for s in segs for p in s.phrases.get(k, [])]
        if config.wants("term_bleu"):
            b = phrase_bleu(pairs, config.phrase_bleu)
            rep.term_bleu[k] = None if b is None else b / 100.0
        if config.wants("exact_order"):
            rep.exact_order[k] = exact_order_fraction(pairs)
    return rep
