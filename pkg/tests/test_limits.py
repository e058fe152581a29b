import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import ABELIAN, CANONICAL
from treelimits.algebra import AlgebraError, GaussianRational, RationalFunction
from treelimits.curve import End, IDENTITY_MATRIX, curve_from_strings, mat_det, mat_trace
from treelimits.expr import parse_rational_function as rf
from treelimits.limits import (DriftError, NoBlowUpError, NumericOverflowError, RescalingSchedule,
                               basepoint_drift_check, blows_up, commutator_trace, conversion_factor,
                               evaluate_word_matrix, f_of, irreducibility_probe, limit_length,
                               limit_metric, numeric_length_samples, orbit_limit_length,
                               trace_function, valuation)
from treelimits.trees import four_point_defect
from treelimits.words import IDENTITY, Word, commutator, enumerate_ball, free_reduce, parse_word

ONE_RF = RationalFunction.constant(1)


def W(curve, text):
    return parse_word(text, curve.alphabet)


def test_word_matrix_examples(canonical):
    assert evaluate_word_matrix(canonical, IDENTITY) == IDENTITY_MATRIX
    assert evaluate_word_matrix(canonical, W(canonical, "a")) == (rf("t"), rf("0"), rf("0"), rf("1/t"))
    m = evaluate_word_matrix(canonical, W(canonical, "abAB"))
    assert mat_det(m) == ONE_RF
    assert mat_trace(m) == rf("-(t^2 + 1/t^2) + 4")


def test_commutator_trace_matches_closed_form(oracle, canonical):
    # canonical b is the normal form with b = 3/2, c = -1/2
    assert trace_function(canonical, W(canonical, "abAB")) == rf("-(t^2 + 1/t^2) + 4")
    assert str(trace_function(canonical, W(canonical, "abAB"))) == "(-t^4 + 4*t^2 - 1)/(t^2)"
    assert oracle["trace_abAB"] == "(-t**4 + 4*t**2 - 1)/t**2"


def test_trace_and_f_examples(canonical):
    assert trace_function(canonical, IDENTITY) == rf("2")
    assert f_of(canonical, IDENTITY).is_zero()
    assert f_of(canonical, W(canonical, "a")) == rf("(t - 1/t)^2")
    assert trace_function(canonical, W(canonical, "b")) == rf("3")
    assert f_of(canonical, W(canonical, "b")) == rf("5")


def test_valuation_examples(infinity):
    assert valuation(rf("(t-1/t)^2"), infinity) == 2
    assert valuation(rf("5"), infinity) == 0
    assert valuation(rf("5"), End.finite(3)) == 0
    assert valuation(rf("1/(t-1)^2"), End.finite(1)) == 2
    with pytest.raises(AlgebraError):
        valuation(rf("0"), infinity)


def test_limit_lengths_against_oracle(canonical, infinity, oracle):
    for w in enumerate_ball(canonical.alphabet, 3):
        key = w.render(canonical.alphabet)
        assert limit_length(canonical, infinity, w) == oracle["limit_length"][key]
    for key, value in oracle["extra_limit_length"].items():
        assert limit_length(canonical, infinity, W(canonical, key)) == value


def test_orbit_lengths_match_symbolic(canonical, infinity, oracle):
    for w in enumerate_ball(canonical.alphabet, 3):
        key = w.render(canonical.alphabet)
        assert orbit_limit_length(canonical, infinity, w) == oracle["limit_length"][key]
    assert orbit_limit_length(canonical, infinity, W(canonical, "abAB")) == 4


def test_blow_up_examples(canonical, infinity):
    assert blows_up(canonical, infinity, 2) == (True, W(canonical, "a"))
    const = curve_from_strings({"a": [["2", "1"], ["1", "1"]], "b": [["1", "1"], ["1", "2"]]})
    assert blows_up(const, infinity, 3) == (False, None)
    only_b = curve_from_strings({"a": [["1", "0"], ["0", "1"]], "b": [["t", "0"], ["0", "1/t"]]})
    assert blows_up(only_b, infinity, 2) == (True, W(only_b, "b"))
    with pytest.raises(ValueError):
        blows_up(canonical, infinity, 0)


def test_limit_metric_examples(canonical, infinity, oracle):
    ball = enumerate_ball(canonical.alphabet, 3)
    m = limit_metric(canonical, infinity, ball)
    one = IDENTITY
    assert m.d(one, W(canonical, "a")) == 2
    assert m.d(one, W(canonical, "b")) == 0
    assert m.d(one, W(canonical, "aa")) == 4
    assert [[int(x) for x in row] for row in m.dist] == oracle["metric_ball3"]
    assert m.triangle_violation() is None
    assert four_point_defect(m) <= 0


def test_limit_metric_left_invariant(canonical, infinity):
    ball = enumerate_ball(canonical.alphabet, 2)
    m = limit_metric(canonical, infinity, ball)
    for g in ball:
        for h in ball:
            k = g.inverse() * h
            if k in ball:
                assert m.d(g, h) == m.d(IDENTITY, k)


def test_limit_metric_needs_blow_up(infinity):
    const = curve_from_strings({"a": [["2", "1"], ["1", "1"]]})
    with pytest.raises(NoBlowUpError):
        limit_metric(const, infinity, enumerate_ball(const.alphabet, 2))


def test_drift_guard(infinity):
    drifting = curve_from_strings({"a": [["t", "0"], ["0", "1/t"]], "b": [["1", "t^2"], ["0", "1"]]})
    with pytest.raises(DriftError, match="approximate center drifts; supply conjugating normalization"):
        limit_metric(drifting, infinity, enumerate_ball(drifting.alphabet, 1))
    canonical = curve_from_strings(CANONICAL)
    dists = basepoint_drift_check(canonical, infinity)
    assert len(dists) == 2


def test_irreducibility_probe_canonical(canonical, infinity, oracle):
    probe = irreducibility_probe(canonical, infinity, 2, 4)
    assert probe.witness == (W(canonical, "a"), W(canonical, "b"))
    assert probe.commutator_lengths == {int(p): v for p, v in oracle["commutator_lengths"].items()}
    assert probe.verdict == "witness found"


@pytest.mark.parametrize("gens", [ABELIAN, {"a": [["t", "0"], ["0", "1/t"]], "b": [["1", "1"], ["0", "1"]]}])
def test_irreducibility_probe_none(gens, infinity):
    curve = curve_from_strings(gens)
    probe = irreducibility_probe(curve, infinity, 2, 4)
    assert probe.witness is None
    assert probe.verdict == "irreducibility not established"


def test_fricke_identity_matches_direct_product(canonical):
    ball = enumerate_ball(canonical.alphabet, 2)
    for u in ball:
        for w in ball:
            direct = trace_function(canonical, commutator(u, w))
            assert commutator_trace(canonical, u, w) == direct


@pytest.mark.parametrize("b, c", [("3/2", "-1/2"), ("2", "1/3"), ("t", "1"), ("1/2 + i", "t^2")])
def test_commutator_closed_form_on_normal_form_curves(b, c):
    bb, cc = rf(b), rf(c)
    entries = [bb + cc, bb * bb - cc * cc - 1, rf("1"), bb - cc]
    curve = curve_from_strings({
        "a": [["t", "0"], ["0", "1/t"]],
        "b": [[e.to_string() for e in entries[:2]], [e.to_string() for e in entries[2:]]],
    })
    t = RationalFunction.variable()
    for p in range(1, 5):
        w = Word((1,) * p + (2,) + (-1,) * p + (-2,))
        closed = (1 - bb * bb + cc * cc) * (t ** (2 * p) + t ** (-2 * p)) + 2 * (bb * bb - cc * cc)
        assert trace_function(curve, w) == closed


def test_conjugation_invariance(canonical, infinity):
    ball = enumerate_ball(canonical.alphabet, 2)
    for u in ball:
        for w in ball:
            assert limit_length(canonical, infinity, u * w * u.inverse()) == \
                limit_length(canonical, infinity, w)


def test_length_function_symmetric(canonical, infinity):
    for w in enumerate_ball(canonical.alphabet, 3):
        assert limit_length(canonical, infinity, w) == limit_length(canonical, infinity, w.inverse())
    assert limit_length(canonical, infinity, IDENTITY) == 0


def test_numeric_samples_examples(canonical, oracle):
    (t, v), = numeric_length_samples(canonical, W(canonical, "a"), [1e6])
    assert v == pytest.approx(2.0, abs=1e-12)
    for t, v in numeric_length_samples(canonical, W(canonical, "b"), [1e3, 1e6]):
        assert v == pytest.approx(2 * math.acosh(1.5) / math.log(t), rel=1e-12)
    (t, v), = numeric_length_samples(canonical, W(canonical, "abAB"), [1e6])
    assert v == pytest.approx(oracle["extra_numeric_1e6"]["abAB"], abs=1e-9)


def test_numeric_against_high_precision_oracle(canonical, oracle):
    for w in enumerate_ball(canonical.alphabet, 3):
        key = w.render(canonical.alphabet)
        (_, v), = numeric_length_samples(canonical, w, [1e6])
        assert v == pytest.approx(oracle["numeric_1e6"][key], abs=1e-9)


def test_numeric_errors(canonical):
    with pytest.raises(NumericOverflowError) as exc:
        numeric_length_samples(canonical, W(canonical, "aaaa"), [1e100])
    assert exc.value.t == 1e100
    with pytest.raises(ValueError):
        numeric_length_samples(canonical, W(canonical, "a"), [1e4, 1e3])


def test_numeric_convergence_radius_two(canonical, infinity):
    ts = [1e3, 1e4, 1e5, 1e6]
    for w in enumerate_ball(canonical.alphabet, 2):
        target = limit_length(canonical, infinity, w)
        errs = [abs(v - target) for _, v in numeric_length_samples(canonical, w, ts)]
        c = max(e * math.log(t) for e, t in zip(errs, ts))
        assert c < 5
        assert all(b <= a + 1e-12 for a, b in zip(errs, errs[1:]))


def test_finite_end():
    curve = curve_from_strings({"a": [["1/(t-1)", "0"], ["0", "t-1"]], "b": [["1", "1"], ["1", "2"]]})
    end = End.finite(GaussianRational(1))
    assert limit_length(curve, end, Word((1,))) == 2
    assert limit_length(curve, end, Word((2,))) == 0
    assert orbit_limit_length(curve, end, Word((1, 2, -1, -2))) == 4
    (s, v), = numeric_length_samples(curve, Word((1,)), [1e6], end)
    assert v == pytest.approx(2.0, abs=1e-9)


def test_rescaling(canonical, infinity):
    assert conversion_factor(canonical, infinity) == 2
    assert RescalingSchedule().factor(canonical, 1e3) == pytest.approx(1 / math.log(1e3))
    disp = RescalingSchedule("displacement").factor(canonical, 1e3)
    assert 0 < disp <= 1
    assert disp == pytest.approx(1 / (2 * math.log(1e3)), rel=1e-6)
    with pytest.raises(ValueError):
        RescalingSchedule("other")


letters = st.lists(st.sampled_from([1, -1, 2, -2]), max_size=5).map(lambda xs: free_reduce(tuple(xs)))


@settings(max_examples=60, deadline=None)
@given(letters, letters)
def test_length_function_properties(u, w):
    curve, end = curve_from_strings(CANONICAL), End.infinity()
    u, w = Word(u), Word(w)
    lw = limit_length(curve, end, w)
    assert lw >= 0
    assert limit_length(curve, end, w.inverse()) == lw
    assert limit_length(curve, end, u * w * u.inverse()) == lw
    assert orbit_limit_length(curve, end, w) == lw
