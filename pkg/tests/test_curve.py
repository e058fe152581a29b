import json
from fractions import Fraction

import pytest

from treelimits.algebra import GaussianRational
from treelimits.curve import End, SpecError, mat_det, parse_curve_spec
from treelimits.expr import parse_rational_function as rf
from treelimits.words import parse_word


def spec(gens, **extra):
    return json.dumps({"generators": gens, **extra})


def test_canonical_spec(canonical):
    assert canonical.alphabet.generators == ("a", "b")
    for m in canonical.matrices.values():
        assert mat_det(m) == rf("1")


def test_determinant_error_names_generator():
    with pytest.raises(SpecError, match=r"'b' has determinant 0"):
        parse_curve_spec(spec({"a": [["1", "0"], ["0", "1"]], "b": [["1", "1"], ["1", "1"]]}))


def test_rational_entry_accepted():
    s = parse_curve_spec(spec({"a": [["t^2/ (t-1)", "0"], ["0", "(t-1)/t^2"]]}))
    assert s.curve.matrices["a"][0] == rf("t^2/(t-1)")


def test_ends_and_words():
    s = parse_curve_spec(spec({"a": [["t", "0"], ["0", "1/t"]]},
                              ends=["infinity", {"t0": "1/2 + i"}], words=["aA", "a"], ball_radius=2))
    assert s.ends == [End.infinity(), End.finite(GaussianRational(Fraction(1, 2), 1))]
    assert [x.letters for x in s.words] == [(), (1,)]
    assert s.ball_radius == 2
    assert End.parse("t0=3") == End.finite(3)


@pytest.mark.parametrize("doc, match", [
    ("not json", "not valid JSON"),
    (json.dumps({"gens": {}}), "generators"),
    (spec({"a": [["1", "0"]]}), "2x2"),
    (spec({"a": [["1", "0"], ["0", "1"]]}, words=["ab"]), "unknown letter"),
    (spec({"a": [["1", "0"], ["0", "1"]]}, ends=["minus infinity"]), "malformed end"),
    (spec({"a": [["t +", "0"], ["0", "1"]]}), "entry"),
    (spec({"a": [["1", "0"], ["0", "1"]]}, ball_radius=-1), "ball_radius"),
])
def test_malformed_specs(doc, match):
    with pytest.raises(SpecError, match=match):
        parse_curve_spec(doc)


def test_word_matrix_cache_consistency(canonical):
    w = parse_word("abAB", canonical.alphabet)
    m1 = canonical.word_matrix(w)
    fresh = parse_curve_spec(spec({"a": [["t", "0"], ["0", "1/t"]], "b": [["1", "1"], ["1", "2"]]})).curve
    assert fresh.word_matrix(w) == m1


def test_chart_moves_finite_end(canonical):
    chart = canonical.chart(End.finite(0))
    assert chart.matrices["a"][0] == rf("1/s", var="s")
    assert canonical.chart(End.finite(0)) is chart
