"""Word alignments: Pharaoh I/O, a monolingual aligner and span projection."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .corpus import FormatError, Span, Token


@dataclass(frozen=True)
class WordAlignment:
    """Set of (left_index, right_index) links; many-to-many allowed."""

    links: frozenset[tuple[int, int]] = frozenset()

    def __iter__(self):
        return iter(sorted(self.links))

    def __len__(self) -> int:
        return len(self.links)

    def inverted(self) -> WordAlignment:
        return WordAlignment(frozenset((j, i) for i, j in self.links))

    def check_bounds(self, left_len: int, right_len: int, where: str = "") -> None:
        for i, j in self.links:
            if not (0 <= i < left_len and 0 <= j < right_len):
                raise FormatError(
                    f"{where}alignment link {i}-{j} out of bounds for lengths {left_len}/{right_len}")

    def right_of(self, left_indices: Iterable[int]) -> list[int]:
        wanted = set(left_indices)
        return sorted({j for i, j in self.links if i in wanted})


@dataclass(frozen=True)
class ProjectedSpan:
    """Inclusive [lo, hi] span on the target side, or empty."""

    lo: int = 0
    hi: int = -1
    empty: bool = True


EMPTY_SPAN = ProjectedSpan()


def parse_pharaoh(line: str) -> WordAlignment:
    links = set()
    for tok in line.split():
        left, sep, right = tok.partition("-")
        if not sep or not left.isdigit() or not right.isdigit():
            raise FormatError(f"malformed alignment link {tok!r}")
        links.add((int(left), int(right)))
    return WordAlignment(frozenset(links))


def format_pharaoh(alignment: WordAlignment) -> str:
    return " ".join(f"{i}-{j}" for i, j in alignment)


def load_alignments(path) -> list[WordAlignment]:
    with open(path, encoding="utf-8") as f:
        out = []
        for lineno, line in enumerate(f, start=1):
            try:
                out.append(parse_pharaoh(line))
            except FormatError as e:
                raise FormatError(f"{path}:{lineno}: {e}") from None
        return out


def monolingual_align(hyp: Sequence[Token], ref: Sequence[Token]) -> WordAlignment:
    """Greedy one-to-one alignment of identical (casefolded) tokens.

    Candidate pairs are linked in order of their relative-position distance
    |(i+1)/|h| - (j+1)/|r||, ties broken by smaller j then smaller i.
    Distances are compared as exact integers |(i+1)|r| - (j+1)|h||.
    """
    m, n = len(hyp), len(ref)
    ref_pos: dict[str, list[int]] = {}
    for j, t in enumerate(ref):
        ref_pos.setdefault(t.norm, []).append(j)
    cands = []
    for i, t in enumerate(hyp):
        for j in ref_pos.get(t.norm, ()):
            cands.append((abs((i + 1) * n - (j + 1) * m), j, i))
    cands.sort()
    used_h, used_r = set(), set()
    links = set()
    for _, j, i in cands:
        if i in used_h or j in used_r:
            continue
        used_h.add(i)
        used_r.add(j)
        links.add((i, j))
    return WordAlignment(frozenset(links))


def project_span(span: Span, alignment: WordAlignment, target_length: int | None = None) -> ProjectedSpan:
    """Project a half-open left-side span to the right side of ``alignment``.

    Returns the [min, max] of all linked right-side indices; projections need
    not be contiguous, so the result may cover unaligned tokens in between.
    """
    linked = alignment.right_of(range(*span))
    if target_length is not None:
        linked = [j for j in linked if 0 <= j < target_length]
    if not linked:
        return EMPTY_SPAN
    return ProjectedSpan(linked[0], linked[-1], False)
