import json
from pathlib import Path

import pytest

from wordsimt.curves import CurvePoint, emit_curve, parse_result_table, read_curve_csv
from wordsimt.errors import InvalidParameter

CURVES = Path(__file__).resolve().parent.parent / "data" / "curves"


def test_table_rows_are_echoed():
    pts = parse_result_table("1 & 2.24 & 1.74 & 32.43 \\\\")
    assert pts == [CurvePoint(1.74, 32.43, "system", "1")]
    pts = parse_result_table("1 & 2.24 & 1.74 & 32.43 \\\\", latency="token")
    assert pts[0].latency == 2.24


def test_blocks_and_labels():
    pts = parse_result_table((CURVES / "en_fr_small_waitk.tex").read_text(encoding="utf-8"))
    by_label = {}
    for p in pts:
        by_label.setdefault(p.label, []).append(p)
    assert {k: len(v) for k, v in by_label.items()} == {
        "Token-level Wait-k": 7, "Word-level Wait-k": 6, "Word-level Wait-k w/ LM": 6}
    assert by_label["Word-level Wait-k"][0] == CurvePoint(1.74, 32.43, "Word-level Wait-k", "1")


def test_itst_table_has_delta_params():
    pts = parse_result_table((CURVES / "en_fr_small_itst.tex").read_text(encoding="utf-8"))
    assert len(pts) == 30
    assert pts[0].param == "0.2"


def test_header_reorders_columns():
    text = "k & BLEU & word AL\n3 & 39.36 & 3.32\n"
    assert parse_result_table(text) == [CurvePoint(3.32, 39.36, "system", "3")]


def test_empty_input():
    assert emit_curve([]) == "label,param,latency,quality\n"
    assert parse_result_table("") == []


def test_emit_sorted_and_json():
    pts = [CurvePoint(3.0, 30.0, "b"), CurvePoint(1.0, 20.0, "a", "1")]
    csv_text = emit_curve(pts, "csv")
    assert csv_text.splitlines()[1] == "a,1,1.0,20.0"
    data = json.loads(emit_curve(pts, "json"))
    assert [d["latency"] for d in data] == [1.0, 3.0]
    with pytest.raises(InvalidParameter):
        emit_curve(pts, "xlsx")


def test_csv_round_trip():
    pts = [CurvePoint(1.5, 30.25, "sys", "3")]
    assert read_curve_csv(emit_curve(pts)) == pts
