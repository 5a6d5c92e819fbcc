import pytest
from hypothesis import given, strategies as st

from termeval.evaluate import EvalConfig, evaluate_system
from termeval.report import (NA, SystemReport, fmt_percent, parse_tsv, scatter_header,
                             scatter_rows, to_markdown, to_tsv)

fraction = st.one_of(st.none(), st.floats(0, 1))


@st.composite
def reports(draw):
    return SystemReport(
        draw(st.text("abcxyz-_0123456789", min_size=1, max_size=8)),
        bleu=draw(fraction), exact_match=draw(fraction), partial_match=draw(fraction),
        window_overlap={2: draw(fraction), 3: draw(fraction)},
        one_minus_term=draw(fraction), one_minus_ter=draw(fraction), rp_match=draw(fraction),
        term_bleu={2: draw(fraction)}, exact_order={2: draw(fraction)},
        is_cheating=draw(st.booleans()))


def _rounded(r: SystemReport):
    return [(name, None if v is None else round(100 * v, 2)) for name, v in r.columns()]


@given(st.lists(reports(), min_size=1, max_size=4))
def test_tsv_round_trip_at_two_decimals(reps):
    back = parse_tsv(to_tsv(reps))
    assert len(back) == len(reps)
    for a, b in zip(reps, back):
        assert a.system_name == b.system_name and a.is_cheating == b.is_cheating
        for (na, va), (nb, vb) in zip(_rounded(a), _rounded(b)):
            assert na == nb
            assert (va is None) == (vb is None)
            if va is not None:
                assert va == pytest.approx(vb, abs=1e-9)
        assert to_tsv([b]) == to_tsv([a])


def test_column_order_and_formatting():
    r = SystemReport("mt", bleu=0.2534, exact_match=0.75, window_overlap={3: 0.5, 2: 1.0},
                     one_minus_term=0.73529)
    text = to_tsv([r])
    head, row = text.splitlines()
    assert head.split("\t")[:6] == ["system", "bleu", "exact_match", "window_overlap_2",
                                    "window_overlap_3", "one_minus_term"]
    assert row.split("\t")[:6] == ["mt", "25.34", "75.00", "100.00", "50.00", "73.53"]
    assert row.endswith("\t0")
    assert fmt_percent(None) == NA


def test_markdown_table():
    md = to_markdown([SystemReport("a", bleu=1.0), SystemReport("long-name", bleu=None)])
    lines = md.splitlines()
    assert lines[0].startswith("| system")
    assert set(lines[1]) <= {"|", "-"}
    assert "| N/A" in lines[3]
    assert len({len(x) for x in lines}) == 1


def test_parse_rejects_bad_input():
    with pytest.raises(ValueError):
        parse_tsv("name\tbleu\n")
    with pytest.raises(ValueError):
        parse_tsv("system\tbleu\tis_cheating\nmt\t1.0\n")
    with pytest.raises(ValueError):
        parse_tsv("system\tnot_a_metric\tis_cheating\nmt\t1.0\t0\n")
    assert parse_tsv("") == []


def test_scatter_rows(example, outputs):
    ev = evaluate_system(example, outputs[1], "mt2", EvalConfig())
    rows = scatter_rows("mt2", ev.segments, (2, 3), ["news"])
    assert scatter_header((2, 3)) == ["system", "segment_id", "one_minus_term",
                                      "window_overlap_2", "window_overlap_3", "label"]
    (row,) = rows
    assert row[0:2] == ["mt2", "0"] and row[-1] == "news"
    assert float(row[2]) == pytest.approx(ev.report.one_minus_term)
    assert float(row[3]) == pytest.approx(ev.report.window_overlap[2])
