"""System-level report rows and their TSV / markdown / JSON renderings.

Scores are stored as fractions and rendered as percentages with two
decimals; undefined scores render as ``N/A``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable, Sequence, TextIO

NA = "N/A"


@dataclass
class SystemReport:
    system_name: str
    bleu: float | None = None
    exact_match: float | None = None
    partial_match: float | None = None
    window_overlap: dict[int, float | None] = field(default_factory=dict)
    one_minus_term: float | None = None
    one_minus_ter: float | None = None
    rp_match: float | None = None
    alignment_match: float | None = None
    term_bleu: dict[int, float | None] = field(default_factory=dict)
    exact_order: dict[int, float | None] = field(default_factory=dict)
    is_cheating: bool = False

    def columns(self) -> list[tuple[str, float | None]]:
        """(column name, fraction) pairs in report order, leading with the main table."""
        cols = [("bleu", self.bleu), ("exact_match", self.exact_match)]
        cols += [(f"window_overlap_{n}", v) for n, v in sorted(self.window_overlap.items())]
        cols += [("one_minus_term", self.one_minus_term), ("partial_match", self.partial_match),
                 ("rp_match", self.rp_match), ("one_minus_ter", self.one_minus_ter),
                 ("alignment_match", self.alignment_match)]
        cols += [(f"term_bleu_{k}", v) for k, v in sorted(self.term_bleu.items())]
        cols += [(f"exact_order_{k}", v) for k, v in sorted(self.exact_order.items())]
        return cols

    def metric(self, name: str) -> float | None:
        return dict(self.columns())[name]


def fmt_percent(value: float | None) -> str:
    return NA if value is None else f"{100.0 * value:.2f}"


def _parse_percent(text: str) -> float | None:
    return None if text == NA else float(text) / 100.0


def header(reports: Sequence[SystemReport]) -> list[str]:
    names: list[str] = []
    for r in reports:
        for name, _ in r.columns():
            if name not in names:
                names.append(name)
    return ["system"] + names + ["is_cheating"]


def _row(report: SystemReport, cols: list[str]) -> list[str]:
    values = dict(report.columns())
    return ([report.system_name] + [fmt_percent(values.get(c)) for c in cols[1:-1]]
            + [str(int(report.is_cheating))])


def write_tsv(reports: Sequence[SystemReport], out: TextIO) -> None:
    cols = header(reports)
    out.write("\t".join(cols) + "\n")
    for r in reports:
        out.write("\t".join(_row(r, cols)) + "\n")


def to_tsv(reports: Sequence[SystemReport]) -> str:
    import io
    buf = io.StringIO()
    write_tsv(reports, buf)
    return buf.getvalue()


def to_markdown(reports: Sequence[SystemReport]) -> str:
    cols = header(reports)
    rows = [cols] + [_row(r, cols) for r in reports]
    widths = [max(len(row[i]) for row in rows) for i in range(len(cols))]

    def line(cells):
        return "| " + " | ".join(c.ljust(w) for c, w in zip(cells, widths)) + " |"

    out = [line(rows[0]), "|" + "|".join("-" * (w + 2) for w in widths) + "|"]
    out += [line(r) for r in rows[1:]]
    return "\n".join(out) + "\n"


def parse_tsv(text: str) -> list[SystemReport]:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        return []
    cols = lines[0].split("\t")
    if cols[0] != "system" or cols[-1] != "is_cheating":
        raise ValueError("not a system report TSV")
    reports = []
    for ln in lines[1:]:
        cells = ln.split("\t")
        if len(cells) != len(cols):
            raise ValueError(f"report row has {len(cells)} cells, expected {len(cols)}")
        rep = SystemReport(cells[0], is_cheating=cells[-1] == "1")
        for name, cell in zip(cols[1:-1], cells[1:-1]):
            _set_metric(rep, name, _parse_percent(cell))
        reports.append(rep)
    return reports


def _set_metric(rep: SystemReport, name: str, value: float | None) -> None:
    for prefix, target in (("window_overlap_", rep.window_overlap),
                           ("term_bleu_", rep.term_bleu), ("exact_order_", rep.exact_order)):
        if name.startswith(prefix):
            target[int(name[len(prefix):])] = value
            return
    if not hasattr(rep, name) or name in ("system_name", "is_cheating"):
        raise ValueError(f"unknown report column {name!r}")
    setattr(rep, name, value)


def read_reports(paths: Iterable) -> list[SystemReport]:
    reports = []
    for p in paths:
        with open(p, encoding="utf-8") as f:
            reports.extend(parse_tsv(f.read()))
    return reports


def write_jsonl(records: Iterable[dict], path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        for rec in records:
            f.write(json.dumps(rec, ensure_ascii=False, sort_keys=True) + "\n")


def scatter_rows(system: str, segments, windows: Sequence[int],
                 labels: Sequence[str] | None = None) -> list[list[str]]:
    """Per-segment (1-TERm, mean window overlap, label) rows for plotting."""
    rows = []
    for k, s in enumerate(segments):
        term = None if s.term is None or s.term.score is None else 1 - s.term.score
        row = [system, str(s.segment_id), NA if term is None else repr(term)]
        for n in windows:
            w = s.mean_window(n)
            row.append(NA if w is None else repr(w))
        row.append(labels[k] if labels is not None else "")
        rows.append(row)
    return rows


def scatter_header(windows: Sequence[int]) -> list[str]:
    return ["system", "segment_id", "one_minus_term"] + [f"window_overlap_{n}" for n in windows] + ["label"]
