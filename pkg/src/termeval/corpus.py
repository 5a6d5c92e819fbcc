"""Data model and ingestion for term-annotated test sets.

Inputs are expected to be pre-tokenized (whitespace-delimited).  Token
comparison is casefolded exact string equality unless lemma mode is
requested.
"""

from __future__ import annotations

import json
import logging
import re
import unicodedata
from collections import defaultdict
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

logger = logging.getLogger(__name__)

Span = tuple[int, int]


class FormatError(ValueError):
    """Raised for malformed input files or annotations."""


def is_punctuation(text: str) -> bool:
    """True iff every character is a Unicode punctuation or symbol."""
    return bool(text) and all(unicodedata.category(ch)[0] in "PS" for ch in text)


@dataclass(frozen=True, slots=True)
class Token:
    surface: str
    lemma: str | None = None
    is_punct: bool = False
    is_stopword: bool = False

    @property
    def norm(self) -> str:
        return self.surface.casefold()

    @property
    def lemma_norm(self) -> str:
        return (self.lemma if self.lemma is not None else self.surface).casefold()

    @property
    def is_content(self) -> bool:
        return not (self.is_punct or self.is_stopword)


@dataclass(frozen=True)
class TermEntry:
    source_tokens: tuple[str, ...]
    target_tokens: tuple[str, ...]
    id: int

    def __post_init__(self):
        if not self.source_tokens or not self.target_tokens:
            raise ValueError(f"term entry {self.id} has an empty side")


@dataclass(frozen=True)
class Terminology:
    entries: tuple[TermEntry, ...] = ()
    language_pair: tuple[str, str] | None = None

    def __post_init__(self):
        ids = [e.id for e in self.entries]
        if len(ids) != len(set(ids)):
            raise ValueError("terminology entry ids must be unique")
        pairs = [(e.source_tokens, e.target_tokens) for e in self.entries]
        if len(pairs) != len(set(pairs)):
            raise ValueError("terminology contains duplicate entries")
        object.__setattr__(self, "_by_id", {e.id: e for e in self.entries})

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def __contains__(self, entry_id: int) -> bool:
        return entry_id in self._by_id

    def get(self, entry_id: int) -> TermEntry:
        try:
            return self._by_id[entry_id]
        except KeyError:
            raise KeyError(f"unknown terminology entry id {entry_id}") from None


@dataclass(frozen=True)
class TermOccurrence:
    """One annotated appearance of a terminology entry.

    Spans are half-open, 0-based token ranges.
    """

    entry_id: int
    src_span: Span
    ref_span: Span


@dataclass(frozen=True)
class AnnotatedSegment:
    source: tuple[Token, ...]
    reference: tuple[Token, ...]
    occurrences: tuple[TermOccurrence, ...]
    segment_id: int

    def target_form(self, occ: TermOccurrence) -> tuple[str, ...]:
        """Casefolded reference tokens of an occurrence.

        This is the string a hypothesis must contain for the term to count
        as produced; it equals the entry's target side under surface
        matching and keeps the inflected form under lemma matching.
        """
        i, j = occ.ref_span
        return tuple(t.norm for t in self.reference[i:j])

    def term_mask(self) -> list[bool]:
        mask = [False] * len(self.reference)
        for occ in self.occurrences:
            for k in range(*occ.ref_span):
                mask[k] = True
        return mask


@dataclass(frozen=True)
class Hypothesis:
    tokens: tuple[Token, ...]
    segment_id: int


@dataclass(frozen=True)
class EvalCorpus:
    segments: tuple[AnnotatedSegment, ...]
    terminology: Terminology
    stopwords: frozenset[str] = frozenset()

    def __post_init__(self):
        for k, seg in enumerate(self.segments):
            if seg.segment_id != k:
                raise ValueError(f"segment ids must be contiguous; got {seg.segment_id} at {k}")
            for occ in seg.occurrences:
                if occ.entry_id not in self.terminology:
                    raise ValueError(
                        f"segment {k}: entry id {occ.entry_id} not in terminology")

    def __len__(self) -> int:
        return len(self.segments)

    @property
    def n_occurrences(self) -> int:
        return sum(len(s.occurrences) for s in self.segments)


# --------------------------------------------------------------------------
# tokenization and simple loaders


def tokenize(line: str, lemma_line: str | None = None,
             stopwords: Iterable[str] = frozenset(), segment_id: int | None = None
             ) -> tuple[Token, ...]:
    """Split a pre-tokenized line on whitespace into Tokens.

    :param line: surface text
    :param lemma_line: optional lemma text, token-parallel to ``line``
    :param stopwords: casefolded stopword set
    :param segment_id: used only in error messages
    """
    surfaces = line.split()
    if lemma_line is None:
        lemmas: Sequence[str | None] = [None] * len(surfaces)
    else:
        lemmas = lemma_line.split()
        if len(lemmas) != len(surfaces):
            where = f" in segment {segment_id}" if segment_id is not None else ""
            raise FormatError(
                f"lemma/surface token count mismatch{where}: "
                f"{len(lemmas)} lemmas vs {len(surfaces)} tokens")
    if not isinstance(stopwords, (set, frozenset)):
        stopwords = frozenset(stopwords)
    return tuple(
        Token(s, lem, is_punctuation(s), s.casefold() in stopwords)
        for s, lem in zip(surfaces, lemmas))


def _read_lines(path) -> list[str]:
    with open(path, encoding="utf-8") as f:
        return [line.rstrip("\r\n") for line in f]


def load_terminology(path, language_pair: tuple[str, str] | None = None) -> Terminology:
    """Read a ``source<TAB>target`` terminology file.

    Entry ids are assigned 1, 2, ... in file order; duplicate pairs are
    dropped with a warning.  Blank lines are skipped.
    """
    entries: list[TermEntry] = []
    seen: set[tuple[tuple[str, ...], tuple[str, ...]]] = set()
    for lineno, line in enumerate(_read_lines(path), start=1):
        if not line.strip():
            continue
        fields = line.split("\t")
        if len(fields) != 2:
            raise FormatError(f"{path}:{lineno}: expected 2 tab-separated fields, got {len(fields)}")
        src, tgt = tuple(fields[0].split()), tuple(fields[1].split())
        if not src or not tgt:
            raise FormatError(f"{path}:{lineno}: empty term side")
        if (src, tgt) in seen:
            logger.warning("%s:%d: duplicate terminology entry %r dropped", path, lineno, line)
            continue
        seen.add((src, tgt))
        entries.append(TermEntry(src, tgt, len(entries) + 1))
    return Terminology(tuple(entries), language_pair)


def load_stopwords(path) -> frozenset[str]:
    return frozenset(w.strip().casefold() for w in _read_lines(path) if w.strip())


def builtin_stopwords(lang: str) -> frozenset[str]:
    """Stopword list shipped with the package (en, es, fr, ru).

    ``TERMEVAL_STOPWORDS_DIR`` points at an alternative directory of
    ``<lang>.txt`` files.
    """
    import os
    root = os.environ.get("TERMEVAL_STOPWORDS_DIR")
    base = Path(root) if root else Path(__file__).parent / "data" / "stopwords"
    path = base / f"{lang}.txt"
    if not path.exists():
        raise FileNotFoundError(f"no stopword list for {lang!r} in {base}")
    return load_stopwords(path)


def load_hypotheses(path, stopwords: Iterable[str] = frozenset(),
                    n_segments: int | None = None) -> list[Hypothesis]:
    stopwords = frozenset(stopwords)
    lines = _read_lines(path)
    if n_segments is not None and len(lines) != n_segments:
        raise FormatError(f"{path}: {len(lines)} hypotheses for {n_segments} segments")
    return [Hypothesis(tokenize(line, stopwords=stopwords), k) for k, line in enumerate(lines)]


def make_hypotheses(lines: Iterable[str], stopwords: Iterable[str] = frozenset()) -> list[Hypothesis]:
    stopwords = frozenset(stopwords)
    return [Hypothesis(tokenize(line, stopwords=stopwords), k) for k, line in enumerate(lines)]


# --------------------------------------------------------------------------
# inline tags

_TAG_RE = re.compile(r'<term\s+id="(\d+)"\s*>|</term\s*>')


def _strip_tags(line: str, lineno: int | None, side: str) -> tuple[list[str], dict[int, Span]]:
    where = f"line {lineno}, {side}" if lineno is not None else side
    tokens: list[str] = []
    spans: dict[int, Span] = {}
    stack: list[tuple[int, int]] = []
    pos = 0
    for m in _TAG_RE.finditer(line):
        tokens.extend(line[pos:m.start()].split())
        pos = m.end()
        if m.group(1) is not None:
            tid = int(m.group(1))
            if tid in spans or any(t == tid for t, _ in stack):
                raise FormatError(f"{where}: term id {tid} appears more than once")
            stack.append((tid, len(tokens)))
        else:
            if not stack:
                raise FormatError(f"{where}: unbalanced </term>")
            tid, start = stack.pop()
            if start == len(tokens):
                raise FormatError(f"{where}: empty term span for id {tid}")
            spans[tid] = (start, len(tokens))
    tokens.extend(line[pos:].split())
    if stack:
        raise FormatError(f"{where}: unclosed <term id=\"{stack[-1][0]}\">")
    if "<term" in line[pos:] or any("<term" in t or "</term" in t for t in tokens):
        raise FormatError(f"{where}: malformed term tag")
    return tokens, spans


def parse_inline_tags(src_line: str, ref_line: str, terminology: Terminology,
                      segment_id: int = 0, lineno: int | None = None,
                      stopwords: Iterable[str] = frozenset(),
                      src_lemmas: str | None = None, ref_lemmas: str | None = None,
                      ) -> AnnotatedSegment:
    """Convert a tagged line pair into an AnnotatedSegment.

    Tags look like ``<term id="N">...</term>`` where N is a terminology entry
    id; tags may nest, and each id appears exactly once on each side.
    """
    stopwords = frozenset(stopwords)
    src_toks, src_spans = _strip_tags(src_line, lineno, "source")
    ref_toks, ref_spans = _strip_tags(ref_line, lineno, "reference")
    where = f"line {lineno}" if lineno is not None else f"segment {segment_id}"
    one_sided = set(src_spans) ^ set(ref_spans)
    if one_sided:
        raise FormatError(f"{where}: term id(s) {sorted(one_sided)} tagged on one side only")
    for tid in src_spans:
        if tid not in terminology:
            raise FormatError(f"{where}: term id {tid} not in terminology")
    occs = [TermOccurrence(tid, src_spans[tid], ref_spans[tid]) for tid in src_spans]
    return AnnotatedSegment(
        tokenize(" ".join(src_toks), src_lemmas, stopwords, segment_id),
        tokenize(" ".join(ref_toks), ref_lemmas, stopwords, segment_id),
        tuple(sorted(occs, key=_occ_key)),
        segment_id)


def _occ_key(occ: TermOccurrence):
    return (occ.ref_span[0], occ.ref_span[1], occ.src_span, occ.entry_id)


def serialize_inline_tags(tokens: Sequence[str], spans: dict[int, Span]) -> str:
    """Inverse of the tag stripper for canonically spaced lines."""
    opens: dict[int, list[tuple[int, int]]] = defaultdict(list)
    for tid, (i, j) in spans.items():
        opens[i].append((-j, tid))
    out: list[str] = []
    stack: list[tuple[int, int]] = []  # (end, id)
    for k, tok in enumerate(tokens):
        prefix = ""
        for neg_end, tid in sorted(opens.get(k, [])):
            prefix += f'<term id="{tid}">'
            stack.append((-neg_end, tid))
        suffix = ""
        while stack and stack[-1][0] == k + 1:
            stack.pop()
            suffix += "</term>"
        out.append(prefix + tok + suffix)
    return " ".join(out)


# --------------------------------------------------------------------------
# automatic annotation


@dataclass
class UnpairedMatch:
    segment_id: int
    entry_id: int
    side: str  # "source" or "reference"
    span: Span


@dataclass
class Annotation:
    segments: list[AnnotatedSegment]
    unpaired: list[UnpairedMatch] = field(default_factory=list)


def find_matches(tokens: Sequence[Token], pattern: Sequence[str], use_lemma: bool = False) -> list[Span]:
    """Left-to-right non-overlapping contiguous matches of a casefolded pattern."""
    pat = [p.casefold() for p in pattern]
    words = [t.lemma_norm if use_lemma else t.norm for t in tokens]
    n, m = len(words), len(pat)
    spans = []
    i = 0
    while i + m <= n:
        if words[i:i + m] == pat:
            spans.append((i, i + m))
            i += m
        else:
            i += 1
    return spans


def annotate_segment(source: Sequence[Token], reference: Sequence[Token],
                     terminology: Terminology, segment_id: int = 0,
                     mode: str = "surface") -> tuple[AnnotatedSegment, list[UnpairedMatch]]:
    if mode not in ("surface", "lemma"):
        raise ValueError(f"unknown comparison mode {mode!r}")
    use_lemma = mode == "lemma"
    if use_lemma:
        # source/target sides of the entries are compared to lemmas as well
        _require_lemmas(source, reference, segment_id)
    occs: list[TermOccurrence] = []
    unpaired: list[UnpairedMatch] = []
    # longest entries first; shorter nested entries are still recorded
    ordered = sorted(terminology, key=lambda e: (-len(e.source_tokens), e.id))
    for entry in ordered:
        s_spans = find_matches(source, entry.source_tokens, use_lemma)
        r_spans = find_matches(reference, entry.target_tokens, use_lemma)
        for s, r in zip(s_spans, r_spans):
            occs.append(TermOccurrence(entry.id, s, r))
        for s in s_spans[len(r_spans):]:
            unpaired.append(UnpairedMatch(segment_id, entry.id, "source", s))
        for r in r_spans[len(s_spans):]:
            unpaired.append(UnpairedMatch(segment_id, entry.id, "reference", r))
    seg = AnnotatedSegment(tuple(source), tuple(reference),
                           tuple(sorted(occs, key=_occ_key)), segment_id)
    return seg, unpaired


def _require_lemmas(source, reference, segment_id):
    if any(t.lemma is None for t in source) or any(t.lemma is None for t in reference):
        raise ValueError(f"segment {segment_id}: lemma mode requires lemmas on both sides")


def annotate_corpus(source_lines: Sequence[str], reference_lines: Sequence[str],
                    terminology: Terminology, mode: str = "surface",
                    source_lemmas: Sequence[str] | None = None,
                    reference_lemmas: Sequence[str] | None = None,
                    stopwords: Iterable[str] = frozenset()) -> Annotation:
    """Find terminology matches in untagged parallel text.

    The k-th source match of an entry is paired with its k-th reference
    match; leftover matches are reported in ``Annotation.unpaired``.
    """
    if len(source_lines) != len(reference_lines):
        raise FormatError(
            f"line count mismatch: {len(source_lines)} source vs {len(reference_lines)} reference")
    if mode == "lemma" and (source_lemmas is None or reference_lemmas is None):
        raise ValueError("lemma mode requires source and reference lemma files")
    for name, lem in (("source", source_lemmas), ("reference", reference_lemmas)):
        if lem is not None and len(lem) != len(source_lines):
            raise FormatError(f"{name} lemma file has {len(lem)} lines, expected {len(source_lines)}")
    stopwords = frozenset(stopwords)
    result = Annotation([])
    for k, (s, r) in enumerate(zip(source_lines, reference_lines)):
        src = tokenize(s, source_lemmas[k] if source_lemmas else None, stopwords, k)
        ref = tokenize(r, reference_lemmas[k] if reference_lemmas else None, stopwords, k)
        seg, unp = annotate_segment(src, ref, terminology, k, mode)
        result.segments.append(seg)
        result.unpaired.extend(unp)
    if result.unpaired:
        logger.info("%d unpaired term matches dropped", len(result.unpaired))
    return result


# --------------------------------------------------------------------------
# canonical segment file


def segment_to_record(seg: AnnotatedSegment) -> dict:
    rec = {
        "src_tokens": [t.surface for t in seg.source],
        "ref_tokens": [t.surface for t in seg.reference],
        "terms": [{"id": o.entry_id, "src_span": list(o.src_span), "ref_span": list(o.ref_span)}
                  for o in seg.occurrences],
    }
    if seg.source and all(t.lemma is not None for t in seg.source):
        rec["src_lemmas"] = [t.lemma for t in seg.source]
    if seg.reference and all(t.lemma is not None for t in seg.reference):
        rec["ref_lemmas"] = [t.lemma for t in seg.reference]
    return rec


def dump_segments(segments: Iterable[AnnotatedSegment], path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        for seg in segments:
            f.write(json.dumps(segment_to_record(seg), ensure_ascii=False) + "\n")


def _check_spans(occs: Sequence[TermOccurrence], n_src: int, n_ref: int, where: str) -> None:
    by_entry: dict[int, list[TermOccurrence]] = defaultdict(list)
    for o in occs:
        for name, (i, j), n in (("src_span", o.src_span, n_src), ("ref_span", o.ref_span, n_ref)):
            if not 0 <= i < j <= n:
                raise FormatError(f"{where}: {name} {[i, j]} out of bounds for length {n}")
        by_entry[o.entry_id].append(o)
    for eid, group in by_entry.items():
        for attr in ("src_span", "ref_span"):
            spans = sorted(getattr(o, attr) for o in group)
            for (a, b), (c, d) in zip(spans, spans[1:]):
                if c < b:
                    raise FormatError(f"{where}: overlapping {attr}s for entry {eid}")


def record_to_segment(rec: dict, segment_id: int, stopwords: Iterable[str] = frozenset(),
                      terminology: Terminology | None = None) -> AnnotatedSegment:
    where = f"segment {segment_id}"
    try:
        src_tokens, ref_tokens, terms = rec["src_tokens"], rec["ref_tokens"], rec["terms"]
    except KeyError as e:
        raise FormatError(f"{where}: missing field {e}") from None
    stopwords = frozenset(stopwords)

    def toks(words, lemmas):
        if lemmas is not None and len(lemmas) != len(words):
            raise FormatError(f"{where}: lemma/surface token count mismatch")
        lemmas = lemmas if lemmas is not None else [None] * len(words)
        return tuple(Token(w, lem, is_punctuation(w), w.casefold() in stopwords)
                     for w, lem in zip(words, lemmas))

    occs = tuple(sorted(
        (TermOccurrence(int(t["id"]), tuple(t["src_span"]), tuple(t["ref_span"])) for t in terms),
        key=_occ_key))
    _check_spans(occs, len(src_tokens), len(ref_tokens), where)
    if terminology is not None:
        for o in occs:
            if o.entry_id not in terminology:
                raise FormatError(f"{where}: term id {o.entry_id} not in terminology")
    return AnnotatedSegment(toks(src_tokens, rec.get("src_lemmas")),
                            toks(ref_tokens, rec.get("ref_lemmas")), occs, segment_id)


def load_segments(path, stopwords: Iterable[str] = frozenset(),
                  terminology: Terminology | None = None) -> list[AnnotatedSegment]:
    segments = []
    for k, line in enumerate(l for l in _read_lines(path) if l.strip()):
        try:
            rec = json.loads(line)
        except json.JSONDecodeError as e:
            raise FormatError(f"{path}: record {k}: {e}") from None
        segments.append(record_to_segment(rec, k, stopwords, terminology))
    return segments


def load_corpus(segments_path, terminology_path, stopwords: Iterable[str] = frozenset()) -> EvalCorpus:
    terminology = load_terminology(terminology_path)
    stopwords = frozenset(stopwords)
    segs = load_segments(segments_path, stopwords, terminology)
    return EvalCorpus(tuple(segs), terminology, stopwords)


def load_tagged_corpus(source_path, reference_path, terminology: Terminology,
                       stopwords: Iterable[str] = frozenset()) -> list[AnnotatedSegment]:
    src, ref = _read_lines(source_path), _read_lines(reference_path)
    if len(src) != len(ref):
        raise FormatError(f"line count mismatch: {len(src)} source vs {len(ref)} reference")
    return [parse_inline_tags(s, r, terminology, k, k + 1, stopwords)
            for k, (s, r) in enumerate(zip(src, ref))]
