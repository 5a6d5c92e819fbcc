"""Small bundled corpora: the English-Spanish COVID-19 example sentence and a
synthetic generator for larger term-annotated test sets."""

from __future__ import annotations

import random
from dataclasses import dataclass
from pathlib import Path

from .corpus import (EvalCorpus, Hypothesis, TermEntry, Terminology, annotate_corpus,
                     load_terminology, make_hypotheses)

DATA_DIR = Path(__file__).parent / "data"
EXAMPLE_DIR = DATA_DIR / "example"

# stopwords used for the Spanish example in the tests and demos
SPANISH_FIXTURE_STOPWORDS = frozenset("de la el los con y un como sus que".split())


def _line(name: str) -> str:
    return (EXAMPLE_DIR / name).read_text(encoding="utf-8").rstrip("\n")


def example_corpus(stopwords=SPANISH_FIXTURE_STOPWORDS) -> EvalCorpus:
    """One-segment corpus with four annotated terms (two of them nested)."""
    terminology = load_terminology(EXAMPLE_DIR / "terminology.tsv", ("en", "es"))
    ann = annotate_corpus([_line("source.txt")], [_line("reference.txt")], terminology,
                          stopwords=stopwords)
    return EvalCorpus(tuple(ann.segments), terminology, frozenset(stopwords))


def example_outputs(stopwords=SPANISH_FIXTURE_STOPWORDS) -> tuple[list[Hypothesis], list[Hypothesis]]:
    """The two system outputs: the first has all terms, the second drops "seca"."""
    return (make_hypotheses([_line("mt1.txt")], stopwords),
            make_hypotheses([_line("mt2.txt")], stopwords))


# --------------------------------------------------------------------------
# synthetic corpora

_STOPWORDS = ("the", "of", "a", "and", "to", "in", "is", "for", "with", "on")
_PUNCT = (",", ".", ";", ":")


@dataclass
class SyntheticCorpus:
    corpus: EvalCorpus
    honest: list[str]
    source_lines: list[str]
    reference_lines: list[str]


def generate_corpus(n_segments: int = 200, seed: int = 0, n_entries: int = 40,
                    vocab_size: int = 400, miss_rate: float = 0.3,
                    noise_rate: float = 0.15, length: tuple[int, int] = (18, 30),
                    term_length_weights: tuple[float, ...] = (0.6, 0.3, 0.1),
                    drop_rate: float = 0.03) -> SyntheticCorpus:
    """Generate parallel text with inserted terms and an honest system output.

    The honest output copies the reference, drops some terms in favour of a
    wrong translation of the same length, and perturbs a fraction of the
    other words, so that produced terms sit in reference-like contexts.
    ``drop_rate`` deletes non-term words to make outputs shorter than the
    references, as MT output often is.
    ``term_length_weights[i]`` is the probability of a target term with
    ``i + 1`` tokens.
    """
    rng = random.Random(seed)
    entries = []
    for k in range(n_entries):
        src = tuple(f"s{k}_{i}" for i in range(rng.randint(1, 3)))
        n_tgt = rng.choices(range(1, len(term_length_weights) + 1), term_length_weights)[0]
        tgt = tuple(f"t{k}_{i}" for i in range(n_tgt))
        entries.append(TermEntry(src, tgt, k + 1))
    terminology = Terminology(tuple(entries), ("xx", "yy"))
    vocab = [f"w{i}" for i in range(vocab_size)]

    def filler():
        r = rng.random()
        if r < 0.25:
            return rng.choice(_STOPWORDS)
        if r < 0.33:
            return rng.choice(_PUNCT)
        return rng.choice(vocab)

    src_lines, ref_lines, hyp_lines = [], [], []
    for _ in range(n_segments):
        n = rng.randint(*length)
        ref = [filler() for _ in range(n)]
        src = [filler() for _ in range(n)]
        hyp = list(ref)
        terms = rng.sample(entries, rng.randint(1, 3))
        # insert from the right so earlier offsets stay valid
        slots = sorted(rng.sample(range(n), len(terms)), reverse=True)
        for entry, pos in zip(terms, slots):
            ref[pos:pos] = entry.target_tokens
            src[pos:pos] = entry.source_tokens
            if rng.random() < miss_rate:
                wrong = [f"x{entry.id}_{i}" for i in range(len(entry.target_tokens))]
                hyp[pos:pos] = wrong
            else:
                hyp[pos:pos] = entry.target_tokens
        term_words = {w for e in terms for w in e.target_tokens}
        for i, w in enumerate(hyp):
            if w not in term_words and not w.startswith("x") and rng.random() < noise_rate:
                hyp[i] = rng.choice(vocab)
        if drop_rate:
            hyp = [w for w in hyp if w in term_words or w.startswith("x") or rng.random() >= drop_rate]
        src_lines.append(" ".join(src))
        ref_lines.append(" ".join(ref))
        hyp_lines.append(" ".join(hyp))
    stop = frozenset(_STOPWORDS)
    ann = annotate_corpus(src_lines, ref_lines, terminology, stopwords=stop)
    corpus = EvalCorpus(tuple(ann.segments), terminology, stop)
    return SyntheticCorpus(corpus, hyp_lines, src_lines, ref_lines)
