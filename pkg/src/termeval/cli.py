"""Command-line front end: ``annotate``, ``evaluate``, ``cheat`` and ``correlate``."""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from . import analysis, report
from .alignment import load_alignments
from .bleu import write_phrase_corpus
from .corpus import (EvalCorpus, FormatError, _read_lines, annotate_corpus, builtin_stopwords,
                     dump_segments, load_hypotheses, load_segments, load_stopwords,
                     load_tagged_corpus, load_terminology)
from .evaluate import ALL_METRICS, DEFAULT_METRICS, EvalConfig, check_alignment_inputs, evaluate_system

logger = logging.getLogger("termeval")


class UsageError(Exception):
    pass


def _write(path: Path, text: str) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        f.write(text)


def _named(values: list[str] | None) -> dict[str, str]:
    """Parse NAME=PATH items; a bare PATH is named after its file stem."""
    out: dict[str, str] = {}
    for v in values or []:
        name, sep, path = v.partition("=")
        if not sep:
            name, path = Path(v).stem, v
        if name in out:
            raise UsageError(f"duplicate system name {name!r}")
        out[name] = path
    return out


def _stopwords(args) -> frozenset[str]:
    if getattr(args, "stopwords", None):
        return load_stopwords(args.stopwords)
    if getattr(args, "lang", None):
        return builtin_stopwords(args.lang)
    return frozenset()


def _load_corpus(args) -> EvalCorpus:
    terminology = load_terminology(args.terminology)
    stop = _stopwords(args)
    segments = load_segments(args.segments, stop, terminology)
    return EvalCorpus(tuple(segments), terminology, stop)


# --------------------------------------------------------------------------
# annotate


def cmd_annotate(args) -> int:
    terminology = load_terminology(args.terminology)
    if not len(terminology):
        logger.warning("terminology is empty; no terms will be annotated")
    out_dir = Path(args.output_dir)
    unpaired = []
    census_lemma = None
    if args.tagged:
        segments = load_tagged_corpus(args.source, args.reference, terminology)
        census = analysis.match_census(segments)
    else:
        src, ref = _read_lines(args.source), _read_lines(args.reference)
        if len(src) != len(ref):
            raise FormatError(f"line count mismatch: {len(src)} source vs {len(ref)} reference")
        src_lem = _read_lines(args.source_lemmas) if args.source_lemmas else None
        ref_lem = _read_lines(args.reference_lemmas) if args.reference_lemmas else None
        if (src_lem is None) != (ref_lem is None):
            raise UsageError("give both --source-lemmas and --reference-lemmas or neither")
        surface = annotate_corpus(src, ref, terminology, "surface", src_lem, ref_lem)
        lemma = annotate_corpus(src, ref, terminology, "lemma", src_lem, ref_lem) if src_lem else None
        chosen = lemma if args.mode == "lemma" else surface
        if args.mode == "lemma" and lemma is None:
            raise UsageError("--mode lemma needs lemma files")
        segments, unpaired = chosen.segments, chosen.unpaired
        census = analysis.match_census(surface.segments, lemma.segments if lemma else None)
        census_lemma = census.lemma_only

    out_dir.mkdir(parents=True, exist_ok=True)
    dump_segments(segments, out_dir / "segments.jsonl")
    review = ["segment_id\tentry_id\tsource_term\ttarget_term\tsrc_span\tref_span"]
    for seg in segments:
        for occ in seg.occurrences:
            e = terminology.get(occ.entry_id)
            review.append(f"{seg.segment_id}\t{occ.entry_id}\t{' '.join(e.source_tokens)}\t"
                          f"{' '.join(e.target_tokens)}\t{occ.src_span[0]}-{occ.src_span[1]}\t"
                          f"{occ.ref_span[0]}-{occ.ref_span[1]}")
    _write(out_dir / "review.tsv", "\n".join(review) + "\n")
    unp = ["segment_id\tentry_id\tside\tspan"] + [
        f"{u.segment_id}\t{u.entry_id}\t{u.side}\t{u.span[0]}-{u.span[1]}" for u in unpaired]
    _write(out_dir / "unpaired.tsv", "\n".join(unp) + "\n")
    lemma_cell = report.NA if census_lemma is None else str(census_lemma)
    census_text = (f"surface_matches\tlemma_only_matches\ttotal_matches\n"
                   f"{census.surface}\t{lemma_cell}\t{census.total}\n")
    _write(out_dir / "census.tsv", census_text)
    sys.stdout.write(census_text)
    if unpaired:
        logger.warning("%d unpaired term matches were dropped (see unpaired.tsv)", len(unpaired))
    return 0


# --------------------------------------------------------------------------
# evaluate


def _eval_config(args) -> EvalConfig:
    return EvalConfig(metrics=tuple(args.metrics), windows=tuple(args.windows), ks=tuple(args.k),
                      term_cost=args.c_term, average=args.average, normalize=args.normalize)


def cmd_evaluate(args) -> int:
    config = _eval_config(args)
    if args.export_phrases and not {"term_bleu", "exact_order"} & set(config.metrics):
        raise UsageError("--export-phrases needs term_bleu or exact_order among --metrics")
    corpus = _load_corpus(args)
    systems = _named(args.hyp)
    if not systems:
        raise UsageError("at least one --hyp is required")
    aligns = _named(args.alignments)
    unknown = set(aligns) - set(systems)
    if unknown:
        raise UsageError(f"alignments given for unknown systems {sorted(unknown)}")
    labels = _read_lines(args.labels) if args.labels else None
    if labels is not None and len(labels) != len(corpus):
        raise FormatError(f"{args.labels}: {len(labels)} labels for {len(corpus)} segments")

    # load and validate everything before writing anything
    runs = []
    for name, path in systems.items():
        hyps = load_hypotheses(path, corpus.stopwords, len(corpus))
        al = load_alignments(aligns[name]) if name in aligns else None
        src_al = al if args.alignment_mode == "bilingual" else None
        hyp_al = al if args.alignment_mode == "monolingual" else None
        check_alignment_inputs(config, src_al, hyp_al, args.builtin_aligner)
        runs.append((name, hyps, src_al, hyp_al, name in set(args.cheating or [])))
        for mode in args.add_cheats or []:
            fn = analysis.smart_cheat if mode == "smart" else analysis.naive_cheat
            # alignment files describe the original output, not the cheated one
            try:
                check_alignment_inputs(config, None, None, args.builtin_aligner)
            except ValueError as e:
                raise UsageError(f"--add-cheats: {e}") from None
            runs.append((f"{name}-{mode}-cheating", fn(corpus, hyps), None, None, True))

    evaluations = []
    for name, hyps, src_al, hyp_al, cheating in runs:
        evaluations.append(evaluate_system(
            corpus, hyps, name, config, src_alignments=src_al, hyp_alignments=hyp_al,
            builtin_aligner=args.builtin_aligner, is_cheating=cheating, jobs=args.jobs))

    out_dir = Path(args.output_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    reports = [e.report for e in evaluations]
    _write(out_dir / "report.tsv", report.to_tsv(reports))
    _write(out_dir / "report.md", report.to_markdown(reports))
    scatter = ["\t".join(report.scatter_header(config.windows))]
    for e in evaluations:
        report.write_jsonl(e.records(), out_dir / f"segments.{e.report.system_name}.jsonl")
        scatter += ["\t".join(r) for r in
                    report.scatter_rows(e.report.system_name, e.segments, config.windows, labels)]
    _write(out_dir / "scatter.tsv", "\n".join(scatter) + "\n")
    if args.export_phrases:
        for e in evaluations:
            for k in config.ks:
                pairs = [p for s in e.segments for p in s.phrases.get(k, [])]
                stem = out_dir / f"phrases.{e.report.system_name}.k{k}"
                write_phrase_corpus(pairs, f"{stem}.ref", f"{stem}.hyp")
    sys.stdout.write(report.to_markdown(reports))
    return 0


# --------------------------------------------------------------------------
# cheat


def cmd_cheat(args) -> int:
    corpus = _load_corpus(args)
    hyps = load_hypotheses(args.hyp, corpus.stopwords, len(corpus))
    fn = analysis.smart_cheat if args.mode == "smart" else analysis.naive_cheat
    lines = analysis.hypothesis_lines(fn(corpus, hyps))
    _write(Path(args.output), "".join(line + "\n" for line in lines))
    return 0


# --------------------------------------------------------------------------
# correlate

CORRELATION_PAIRS = (("bleu", "exact_match"), ("bleu", "window_overlap_{w}"),
                     ("exact_match", "window_overlap_{w}"))


def correlation_table(reports, window: int = 3, show_all: bool = False) -> str:
    if len(reports) < 3:
        raise UsageError(f"correlation needs at least 3 systems, got {len(reports)}")
    lines = ["x\ty\trho\tp_value\tn\tcell"]
    for x, y in CORRELATION_PAIRS:
        x, y = x.format(w=window), y.format(w=window)
        xs = [r.metric(x) for r in reports]
        ys = [r.metric(y) for r in reports]
        if any(v is None for v in xs + ys):
            raise UsageError(f"undefined {x} or {y} in some report")
        res = analysis.spearman(xs, ys)
        rho = report.NA if res.rho is None else repr(res.rho)
        p = report.NA if res.p_value is None else repr(res.p_value)
        lines.append(f"{x}\t{y}\t{rho}\t{p}\t{res.n}\t{res.render(show_all)}")
    return "\n".join(lines) + "\n"


def cmd_correlate(args) -> int:
    reports = report.read_reports(args.reports)
    if not args.include_cheating:
        reports = [r for r in reports if not r.is_cheating]
    text = correlation_table(reports, args.window, args.show_all)
    if args.output:
        _write(Path(args.output), text)
    sys.stdout.write(text)
    return 0


# --------------------------------------------------------------------------


def _c_term(text: str) -> float:
    v = float(text)
    if v < 1:
        raise argparse.ArgumentTypeError("C_term must be > 1, or exactly 1 for standard TER")
    return v


def _positive(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return v


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="termeval", description=__doc__)
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    a = sub.add_parser("annotate", help="find and pair terminology matches in parallel text")
    a.add_argument("--source", required=True)
    a.add_argument("--reference", required=True)
    a.add_argument("--terminology", required=True)
    a.add_argument("--tagged", action="store_true", help='inputs carry <term id="N"> tags')
    a.add_argument("--source-lemmas")
    a.add_argument("--reference-lemmas")
    a.add_argument("--mode", choices=("surface", "lemma"), default="surface")
    a.add_argument("--output-dir", required=True)
    a.set_defaults(func=cmd_annotate)

    def corpus_args(q):
        q.add_argument("--segments", required=True, help="canonical segment file (JSONL)")
        q.add_argument("--terminology", required=True)
        g = q.add_mutually_exclusive_group()
        g.add_argument("--stopwords", help="stopword file, one token per line")
        g.add_argument("--lang", help="use the bundled stopword list for this language")

    e = sub.add_parser("evaluate", help="score system outputs")
    corpus_args(e)
    e.add_argument("--hyp", action="append", required=True, metavar="NAME=PATH")
    e.add_argument("--cheating", action="append", metavar="NAME", help="mark a system as cheating")
    e.add_argument("--add-cheats", nargs="+", choices=("smart", "naive"),
                   help="also evaluate cheat variants of every system")
    e.add_argument("--alignments", action="append", metavar="NAME=PATH")
    e.add_argument("--alignment-mode", choices=("bilingual", "monolingual"), default="bilingual",
                   help="left side of alignment files: source (bilingual) or hypothesis (monolingual)")
    e.add_argument("--builtin-aligner", action="store_true",
                   help="allow the built-in monolingual aligner for term phrase metrics")
    e.add_argument("--metrics", nargs="+", choices=ALL_METRICS, default=list(DEFAULT_METRICS))
    e.add_argument("--windows", nargs="+", type=_positive, default=[2, 3])
    e.add_argument("--k", nargs="+", type=_positive, default=[2, 3])
    e.add_argument("--c-term", type=_c_term, default=2.0)
    e.add_argument("--average", choices=("micro", "macro"), default="micro")
    e.add_argument("--normalize", choices=("weighted", "length"), default="weighted")
    e.add_argument("--export-phrases", action="store_true",
                   help="write the term phrase pairs as parallel text for external scorers")
    e.add_argument("--labels", help="one label per segment for the scatter file")
    e.add_argument("--jobs", type=_positive, default=1)
    e.add_argument("--output-dir", required=True)
    e.set_defaults(func=cmd_evaluate)

    c = sub.add_parser("cheat", help="write a cheating variant of a system output")
    corpus_args(c)
    c.add_argument("--hyp", required=True)
    c.add_argument("--mode", choices=("smart", "naive"), default="smart")
    c.add_argument("--output", required=True)
    c.set_defaults(func=cmd_cheat)

    r = sub.add_parser("correlate", help="Spearman correlations across system reports")
    r.add_argument("--reports", nargs="+", required=True)
    r.add_argument("--window", type=_positive, default=3)
    r.add_argument("--show-all", action="store_true", help="do not omit cells with p > 0.2")
    r.add_argument("--include-cheating", action="store_true")
    r.add_argument("--output")
    r.set_defaults(func=cmd_correlate)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s")
    try:
        return args.func(args)
    except (UsageError, FormatError, ValueError, KeyError, FileNotFoundError) as e:
        msg = e.args[0] if isinstance(e, KeyError) and e.args else e
        print(f"termeval {args.command}: error: {msg}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
