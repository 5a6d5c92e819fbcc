"""Terminology consistency metrics for machine translation output."""

from .alignment import WordAlignment, load_alignments, monolingual_align, parse_pharaoh
from .analysis import match_census, naive_cheat, smart_cheat, spearman
from .bleu import BleuConfig, corpus_bleu, exact_order_match, extract_term_phrases, term_bleu
from .corpus import (AnnotatedSegment, EvalCorpus, FormatError, Hypothesis, TermEntry,
                     Terminology, TermOccurrence, Token, annotate_corpus, load_corpus,
                     load_hypotheses, load_terminology, make_hypotheses, tokenize)
from .evaluate import EvalConfig, evaluate_system
from .ter import CostSchema, corpus_ter, ter, weighted_edit_distance
from .term_match import alignment_match, exact_match, partial_match, rp_match
from .window_overlap import WindowConfig, window_overlap

__version__ = "0.1.0"
