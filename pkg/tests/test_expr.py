from fractions import Fraction

import pytest

from treelimits.algebra import GaussianRational, RationalFunction
from treelimits.expr import ParseError, parse_gaussian, parse_rational_function

T = RationalFunction.variable()


def test_grammar_literal():
    f = parse_rational_function("(3/2)*t^2 - i*t + 1")
    expected = (RationalFunction.constant(GaussianRational(Fraction(3, 2))) * T ** 2
                - RationalFunction.constant(GaussianRational(0, 1)) * T + 1)
    assert f == expected


def test_division_by_polynomial_and_whitespace():
    assert parse_rational_function(" t ^ 2 / ( t - 1 ) ") == T ** 2 / (T - 1)


def test_unary_minus_and_nesting():
    assert parse_rational_function("-(-(t))") == T
    assert parse_rational_function("2^3") == RationalFunction.constant(8)


def test_gaussian_literals():
    assert parse_gaussian("1/2 + 3*i") == GaussianRational(Fraction(1, 2), 3)
    assert parse_gaussian("-i") == GaussianRational(0, -1)
    with pytest.raises(ParseError):
        parse_gaussian("t")


@pytest.mark.parametrize("text, pos", [
    ("t +", 3),
    ("t $ 1", 2),
    ("(t + 1", 6),
    ("t^-1", 2),
    ("x + 1", 0),
])
def test_parse_errors_carry_position(text, pos):
    with pytest.raises(ParseError) as exc:
        parse_rational_function(text)
    assert exc.value.position == pos


def test_division_by_zero_constant():
    with pytest.raises((ParseError, ZeroDivisionError)):
        parse_rational_function("t/0")
