import json
from fractions import Fraction

import mpmath
import pytest

from dioph import best_approx as ba
from dioph import serialize as ser
from dioph.bounds import comparison_table
from dioph.errors import InputError, ParamError
from dioph.exponents import estimate
from dioph.geometry import ThetaMatrix
from dioph.plot import staircase_svg
from dioph.verify import run_verify

from conftest import random_matrix


def test_matrix_round_trip_exact():
    th = random_matrix(3, 2)
    back = ser.matrix_from_json(ser.matrix_to_json(th))
    assert back.rows == th.rows and back.precision == th.precision
    th = ThetaMatrix.from_values([["ratio:1/3", "0.125"], ["sqrt:2", "golden"]])
    back = ser.matrix_from_json(ser.matrix_to_json(th))
    assert back.rows == th.rows


def test_degenerate_flag_round_trip(golden_degenerate):
    text = ser.matrix_to_json(golden_degenerate)
    assert json.loads(text)["degenerate"] is True
    assert ser.matrix_from_json(text).degenerate


@pytest.mark.parametrize("text", [
    "not json", "[]", '{"n": 2, "rows": [["0.1", "0.2"]]}', '{"rows": [["0.1"]]}',
    '{"rows": [[0.1, 0.2]]}', '{"rows": [["0.1", "x"]]}',
])
def test_matrix_errors(text):
    with pytest.raises(InputError):
        ser.matrix_from_json(text)


def test_sequence_round_trip():
    th = random_matrix(2, 3)
    seq = ba.enumerate_spherical(th, 500)
    text = ser.sequence_to_jsonl(seq)
    for line in text.splitlines():
        row = json.loads(line)
        assert set(row) == set(ser.SEQUENCE_COLUMNS)
        assert all(isinstance(row[k], str) for k in ("zeta_sup", "zeta_sph", "Z"))
    back = ser.sequence_from_jsonl(text, ba.SPHERICAL, th)
    assert [v.z for v in back.records] == [v.z for v in seq.records]
    assert back.records == seq.records
    loose = ser.sequence_from_jsonl(text, ba.SPHERICAL)
    assert [v.z for v in loose.records] == [v.z for v in seq.records]
    csv = ser.sequence_to_csv(seq)
    assert csv.splitlines()[0] == ",".join(ser.SEQUENCE_COLUMNS)
    assert len(csv.splitlines()) == len(seq) + 1


def test_sequence_checked_against_matrix():
    th = random_matrix(2, 3)
    text = ser.sequence_to_jsonl(ba.enumerate_spherical(th, 100))
    with pytest.raises(InputError):
        ser.sequence_from_jsonl(text, ba.SPHERICAL, random_matrix(2, 4))
    with pytest.raises(InputError):
        ser.sequence_from_jsonl('{"nu": 2, "x": ["1", "0"], "y": ["0", "0"]}', ba.SPHERICAL)
    with pytest.raises(InputError):
        ser.sequence_from_jsonl("", "cube")


def test_decimal_strings_carry_precision():
    th = random_matrix(1, 1)
    text = ser.sequence_to_jsonl(ba.enumerate_sup(th, 10))
    row = json.loads(text.splitlines()[0])
    assert len(row["zeta_sup"].replace("0.", "")) > 60


def test_bounds_formats():
    rep = comparison_table(2, 1, 3)
    doc = json.loads(ser.bounds_to_text(rep, "json"))
    assert doc["G_value"].startswith("3.5615528128")
    assert doc["jarnik_two_var"] is None and "jarnik_two_var" in doc["absent"]
    assert doc["discrepancy"][0]["branch"] == 1
    assert ser.bounds_to_text(rep, "csv").startswith("bound,value,note\n")
    assert "G_value" in ser.bounds_to_text(rep, "table")
    with pytest.raises(InputError):
        ser.bounds_to_text(rep, "xml")


def test_estimate_json():
    seq = ba.enumerate_spherical(random_matrix(1, 5), 10**4)
    doc = json.loads(ser.estimate_to_json(estimate(seq)))
    assert set(doc) >= {"alpha_hat", "beta_hat", "flag", "ratios"}
    assert isinstance(doc["alpha_hat"], str)


def _segments(svg, cls):
    return svg.count(f'class="{cls}"')


def test_svg_segments_and_envelopes():
    st = ba.Staircase(((1, mpmath.mpf("0.3")), (4, mpmath.mpf("0.1"))), ba.SUP)
    svg = staircase_svg(st)
    assert _segments(svg, "step") == 2
    assert "envelope" not in svg
    seq = ba.enumerate_spherical(random_matrix(2, 7), 10**4)
    est = estimate(seq)
    svg = staircase_svg(ba.staircase(seq), est)
    assert _segments(svg, "step") == len(seq)
    assert _segments(svg, "envelope-alpha") == 1 and _segments(svg, "envelope-beta") == 1
    assert svg == staircase_svg(ba.staircase(seq), est)
    with pytest.raises(ParamError):
        staircase_svg(ba.Staircase((), ba.SUP))


def test_svg_handles_tiny_minima():
    st = ba.Staircase(((10, mpmath.mpf(10) ** -300), (10**6, mpmath.mpf(10) ** -900)), ba.SUP)
    svg = staircase_svg(st)
    assert "nan" not in svg and "inf" not in svg


def test_verify_report_and_determinism():
    th = random_matrix(2, 1)
    a = run_verify(th, 300)
    b = run_verify(th, 300, workers=2)
    assert a == b and a["ok"]
    names = [r["name"] for r in a["checks"]]
    for needle in ("heights strictly increasing", "every record primitive",
                   "extend to a basis", "Minkowski", "brute force", "Lemma 3"):
        assert any(needle in n for n in names)


def test_verify_degenerate_skips_minkowski(golden_degenerate):
    rep = run_verify(golden_degenerate, 200)
    assert rep["ok"]
    mink = [r for r in rep["checks"] if "Minkowski" in r["name"]]
    assert mink and all(r["status"] == "skip" for r in mink)
