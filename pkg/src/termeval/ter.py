"""Translation Edit Rate with terminology-weighted costs (TERm).

Edits touching reference tokens inside a term span cost ``term_cost``
instead of 1, and shifting a block that carries term material costs
``term_cost`` too.  With ``term_cost == 1`` the computation is plain TER:
the shift search follows Tercom's candidate filtering and ranking.

Operation names used in the counts:

* substitution -- a hypothesis token aligned to a different reference token
* insertion    -- a hypothesis token with no reference counterpart
* deletion     -- a reference token with no hypothesis counterpart
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .corpus import EvalCorpus, Hypothesis, Token
from .term_match import check_lengths

MAX_SHIFT_SIZE = 10
MAX_SHIFT_DIST = 50
MAX_SHIFTS = 50
MAX_SHIFT_CANDIDATES = 1000
_MAX_CACHE_SIZE = 10000

# op codes
_MATCH, _SUB, _INS, _DEL = "M", "S", "I", "D"


@dataclass(frozen=True)
class CostSchema:
    term_token_mask: tuple[bool, ...]
    term_cost: float = 2.0
    base_cost: float = 1.0

    def __post_init__(self):
        if self.term_cost < self.base_cost:
            raise ValueError("term_cost must be >= base_cost")

    @classmethod
    def plain(cls, ref_len: int) -> CostSchema:
        return cls((False,) * ref_len, 1.0)

    def ref_costs(self) -> list[float]:
        return [self.term_cost if m else self.base_cost for m in self.term_token_mask]


@dataclass(frozen=True)
class TerResult:
    insertions: int
    deletions: int
    substitutions: int
    shifts: int
    weighted_cost: float
    normalizer: float

    @property
    def score(self) -> float | None:
        return self.weighted_cost / self.normalizer if self.normalizer else None


def _words(seq: Sequence) -> list[str]:
    return [t.norm if isinstance(t, Token) else str(t).casefold() for t in seq]


def _check_schema(ref: Sequence, schema: CostSchema) -> None:
    if len(schema.term_token_mask) != len(ref):
        raise ValueError(f"mask length {len(schema.term_token_mask)} != reference length {len(ref)}")


def _count_ops(ops: str) -> tuple[int, int, int]:
    return ops.count(_INS), ops.count(_DEL), ops.count(_SUB)


def weighted_edit_distance(hyp: Sequence, ref: Sequence, schema: CostSchema
                           ) -> tuple[float, tuple[int, int, int]]:
    """Minimum-cost alignment without shifts.

    :return: ``(cost, (insertions, deletions, substitutions))``
    """
    _check_schema(ref, schema)
    h, r = _words(hyp), _words(ref)
    rc = schema.ref_costs()
    base = schema.base_cost
    m, n = len(h), len(r)
    cost = [[0.0] * (n + 1) for _ in range(m + 1)]
    back = [[""] * (n + 1) for _ in range(m + 1)]
    for j in range(1, n + 1):
        cost[0][j] = cost[0][j - 1] + rc[j - 1]
        back[0][j] = _DEL
    for i in range(1, m + 1):
        cost[i][0] = cost[i - 1][0] + base
        back[i][0] = _INS
        for j in range(1, n + 1):
            if h[i - 1] == r[j - 1]:
                best, op = cost[i - 1][j - 1], _MATCH
            else:
                best, op = cost[i - 1][j - 1] + rc[j - 1], _SUB
            if cost[i - 1][j] + base < best:
                best, op = cost[i - 1][j] + base, _INS
            if cost[i][j - 1] + rc[j - 1] < best:
                best, op = cost[i][j - 1] + rc[j - 1], _DEL
            cost[i][j], back[i][j] = best, op
    ops = []
    i, j = m, n
    while i > 0 or j > 0:
        op = back[i][j]
        ops.append(op)
        if op in (_MATCH, _SUB):
            i, j = i - 1, j - 1
        elif op == _INS:
            i -= 1
        else:
            j -= 1
    return cost[m][n], _count_ops("".join(ops))


class _CachedEditDistance:
    """Edit distance against a fixed reference, caching DP rows by hypothesis prefix.

    Shift candidates share long prefixes with the current hypothesis, so
    most rows are reused.  Returns the cost and the forward op string.
    """

    def __init__(self, ref: list[str], ref_costs: list[float], base: float):
        self.ref = ref
        self.rc = ref_costs
        self.base = base
        n = len(ref)
        costs = [0.0] * (n + 1)
        for j in range(1, n + 1):
            costs[j] = costs[j - 1] + ref_costs[j - 1]
        self._initial = (costs, _DEL * (n + 1))
        self._trie: dict = {}
        self._size = 0

    def __call__(self, hyp: Sequence[str]) -> tuple[float, str]:
        node = self._trie
        rows = [self._initial]
        for w in hyp:
            if w not in node:
                break
            node, row = node[w]
            rows.append(row)
        start = len(rows) - 1
        ref, rc, base = self.ref, self.rc, self.base
        n = len(ref)
        for i in range(start, len(hyp)):
            w = hyp[i]
            prev, _ = rows[-1]
            cur = [0.0] * (n + 1)
            ops = [_INS] * (n + 1)
            cur[0] = prev[0] + base
            for j in range(1, n + 1):
                rj = ref[j - 1]
                if w == rj:
                    c, o = prev[j - 1], _MATCH
                else:
                    c, o = prev[j - 1] + rc[j - 1], _SUB
                d = prev[j] + base
                if d < c:
                    c, o = d, _INS
                e = cur[j - 1] + rc[j - 1]
                if e < c:
                    c, o = e, _DEL
                cur[j] = c
                ops[j] = o
            rows.append((cur, "".join(ops)))
            if self._size < _MAX_CACHE_SIZE:
                child: dict = {}
                node[w] = (child, rows[-1])
                node = child
                self._size += 1
        trace = []
        i, j = len(hyp), n
        while i > 0 or j > 0:
            op = rows[i][1][j]
            trace.append(op)
            if op in (_MATCH, _SUB):
                i, j = i - 1, j - 1
            elif op == _INS:
                i -= 1
            else:
                j -= 1
        trace.reverse()
        return rows[-1][0][n], "".join(trace)


def _alignment(trace: str) -> tuple[dict[int, int], list[int], list[int]]:
    """Reference->hypothesis position map and per-token error flags."""
    pos_h = pos_r = -1
    align: dict[int, int] = {}
    ref_err: list[int] = []
    hyp_err: list[int] = []
    for op in trace:
        if op in (_MATCH, _SUB):
            pos_h += 1
            pos_r += 1
            align[pos_r] = pos_h
            err = int(op == _SUB)
            hyp_err.append(err)
            ref_err.append(err)
        elif op == _INS:
            pos_h += 1
            hyp_err.append(1)
        else:
            pos_r += 1
            align[pos_r] = pos_h
            ref_err.append(1)
    return align, ref_err, hyp_err


def _perform_shift(words: list[str], start: int, length: int, target: int) -> list[str]:
    if target < start:
        return words[:target] + words[start:start + length] + words[target:start] + words[start + length:]
    if target > start + length:
        return words[:start] + words[start + length:target] + words[start:start + length] + words[target:]
    return (words[:start] + words[start + length:length + target]
            + words[start:start + length] + words[length + target:])


def _shifted_pairs(h: list[str], r: list[str]):
    """(h_start, r_start, length) for every matching block, lengths up to MAX_SHIFT_SIZE."""
    nh, nr = len(h), len(r)
    for sh in range(nh):
        for sr in range(nr):
            if abs(sr - sh) > MAX_SHIFT_DIST:
                continue
            length = 0
            while length < MAX_SHIFT_SIZE and sh + length < nh and sr + length < nr \
                    and h[sh + length] == r[sr + length]:
                length += 1
                yield sh, sr, length


class _ShiftSearch:
    def __init__(self, ref: list[str], schema: CostSchema):
        self.ref = ref
        self.schema = schema
        self.ed = _CachedEditDistance(ref, schema.ref_costs(), schema.base_cost)
        self.term_words = {w for w, m in zip(ref, schema.term_token_mask) if m}
        self.checked = 0

    def shift_cost(self, block: Sequence[str]) -> float:
        if any(w in self.term_words for w in block):
            return self.schema.term_cost
        return self.schema.base_cost

    def best_shift(self, h: list[str]):
        """Best candidate as ``(net_gain, new_words, shift_cost)``, or None."""
        pre, trace = self.ed(h)
        align, ref_err, hyp_err = _alignment(trace)
        base = self.schema.base_cost
        best = None
        for sh, sr, length in _shifted_pairs(h, self.ref):
            if not any(hyp_err[sh:sh + length]):
                continue
            if not any(ref_err[sr:sr + length]):
                continue
            if sh <= align[sr] < sh + length:
                continue
            extra = self.shift_cost(h[sh:sh + length]) - base
            prev_idx = -1
            for offset in range(-1, length):
                if sr + offset == -1:
                    idx = 0
                elif sr + offset in align:
                    idx = align[sr + offset] + 1
                else:
                    break
                if idx == prev_idx:
                    continue
                prev_idx = idx
                shifted = _perform_shift(h, sh, length, idx)
                gain = pre - self.ed(shifted)[0] - extra
                # Tercom ranking: gain, then longer block, earlier start, earlier target
                cand = (gain, length, -sh, -idx, shifted, extra + base)
                self.checked += 1
                if best is None or cand[:5] > best[:5]:
                    best = cand
            if self.checked >= MAX_SHIFT_CANDIDATES:
                break
        if best is None:
            return None
        return best[0], best[4], best[5]


def ter(hyp: Sequence, ref: Sequence, schema: CostSchema | None = None,
        normalize: str = "weighted") -> TerResult:
    """Greedy TER / TERm of one hypothesis against one reference.

    Shifts are applied greedily while one lowers the total cost (edit
    distance reduction minus any surcharge for a term-carrying block).

    :param normalize: ``"weighted"`` divides by the schema-weighted
        reference length, ``"length"`` by the plain token count.
    """
    if schema is None:
        schema = CostSchema.plain(len(ref))
    _check_schema(ref, schema)
    h, r = _words(hyp), _words(ref)
    normalizer = _normalizer(schema, normalize)
    if not r:
        return TerResult(len(h), 0, 0, 0, float(len(h)) * schema.base_cost, normalizer)
    search = _ShiftSearch(r, schema)
    shifts, shift_total = 0, 0.0
    while shifts < MAX_SHIFTS:
        found = search.best_shift(h)
        if search.checked >= MAX_SHIFT_CANDIDATES:
            break
        if found is None or found[0] <= 0:
            break
        _, h, cost = found
        shifts += 1
        shift_total += cost
    residual, trace = search.ed(h)
    ins, dels, subs = _count_ops(trace)
    return TerResult(ins, dels, subs, shifts, shift_total + residual, normalizer)


def _normalizer(schema: CostSchema, normalize: str) -> float:
    if normalize == "weighted":
        return float(sum(schema.ref_costs()))
    if normalize == "length":
        return float(len(schema.term_token_mask))
    raise ValueError(f"unknown normalization {normalize!r}")


def _all_shifts(words: tuple[str, ...]):
    m = len(words)
    for start in range(m):
        for length in range(1, m - start + 1):
            block = words[start:start + length]
            rest = words[:start] + words[start + length:]
            for pos in range(len(rest) + 1):
                if pos == start:
                    continue
                yield block, rest[:pos] + block + rest[pos:]


def brute_force_ter(hyp: Sequence, ref: Sequence, schema: CostSchema | None = None,
                    max_shifts: int = 2, normalize: str = "weighted") -> float | None:
    """Exhaustive minimum over all shift sequences of length <= ``max_shifts``.

    Every block may move to every position; each sequence is finished by
    :func:`weighted_edit_distance`.  A test oracle for small inputs only.
    """
    if schema is None:
        schema = CostSchema.plain(len(ref))
    if len(hyp) > 10 or len(ref) > 10 or max_shifts > 2 or max_shifts < 0:
        raise ValueError("brute_force_ter is limited to 10 tokens and 2 shifts")
    _check_schema(ref, schema)
    normalizer = _normalizer(schema, normalize)
    h, r = tuple(_words(hyp)), _words(ref)
    term_words = {w for w, m in zip(r, schema.term_token_mask) if m}

    def block_cost(block):
        return schema.term_cost if any(w in term_words for w in block) else schema.base_cost

    best_shift_cost = {h: 0.0}
    frontier = {h: 0.0}
    for _ in range(max_shifts):
        nxt: dict[tuple[str, ...], float] = {}
        for state, c in frontier.items():
            for block, new in _all_shifts(state):
                total = c + block_cost(block)
                if total < best_shift_cost.get(new, float("inf")) and total < nxt.get(new, float("inf")):
                    nxt[new] = total
        for state, c in nxt.items():
            best_shift_cost[state] = min(c, best_shift_cost.get(state, float("inf")))
        frontier = nxt
    best = min(c + weighted_edit_distance(s, r, schema)[0] for s, c in best_shift_cost.items())
    return best / normalizer if normalizer else None


# --------------------------------------------------------------------------
# corpus level


def segment_schema(segment, term_cost: float) -> CostSchema:
    return CostSchema(tuple(segment.term_mask()), term_cost)


def corpus_ter(corpus: EvalCorpus, hypotheses: Sequence[Hypothesis], term_cost: float = 2.0,
               average: str = "micro", normalize: str = "weighted"
               ) -> tuple[float | None, list[TerResult]]:
    """Corpus TER/TERm: summed costs over summed normalizers (micro) or mean of scores (macro)."""
    check_lengths(corpus, hypotheses)
    results = [ter(h.tokens, seg.reference, segment_schema(seg, term_cost), normalize)
               for seg, h in zip(corpus.segments, hypotheses)]
    return aggregate_ter(results, average), results


def aggregate_ter(results: Sequence[TerResult], average: str = "micro") -> float | None:
    if average == "micro":
        denom = sum(r.normalizer for r in results)
        return sum(r.weighted_cost for r in results) / denom if denom else None
    if average == "macro":
        scores = [r.score for r in results if r.score is not None]
        return sum(scores) / len(scores) if scores else None
    raise ValueError(f"unknown averaging {average!r}")


__all__ = [
    "CostSchema", "TerResult", "weighted_edit_distance", "ter", "brute_force_ter",
    "corpus_ter", "aggregate_ter", "segment_schema",
]
