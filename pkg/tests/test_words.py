import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from treelimits.expr import ParseError
from treelimits.words import (IDENTITY, Alphabet, Word, ball_size, commutator, enumerate_ball,
                              invert, multiply, parse_word)

AB = Alphabet(("a", "b"))


def w(text, al=AB):
    return parse_word(text, al)


@pytest.mark.parametrize("text, rendered", [("abA", "abA"), ("aA", ""), ("abBA", ""), ("1", "")])
def test_parse_and_reduce(text, rendered):
    assert w(text).render(AB) == rendered


def test_unknown_letter_position():
    with pytest.raises(ParseError) as exc:
        w("abc")
    assert exc.value.position == 2


def test_products():
    assert multiply(w("ab"), w("BA")) == IDENTITY
    assert invert(w("ab")).render(AB) == "BA"
    assert commutator(w("a"), w("b")).render(AB) == "abAB"
    assert (w("ab") ** 3).render(AB) == "ababab"
    assert (w("ab") ** -1) == w("BA")


@pytest.mark.parametrize("radius, size", [(0, 1), (1, 5), (2, 17)])
def test_ball_sizes(radius, size):
    assert len(enumerate_ball(AB, radius)) == size


def test_ball_cap():
    with pytest.raises(ValueError, match="ball too large"):
        enumerate_ball(AB, 9)


def test_shortlex_order():
    words = [x.render(AB) for x in enumerate_ball(AB, 1)]
    assert words == ["", "a", "A", "b", "B"]
    ball = list(enumerate_ball(AB, 3))
    assert ball == sorted(ball)


def _reduced(letters):
    return all(x != -y for x, y in zip(letters, letters[1:]))


@pytest.mark.parametrize("k", [1, 2, 3])
@pytest.mark.parametrize("radius", [0, 1, 2, 3, 4])
def test_ball_counts_exhaustive(k, radius):
    al = Alphabet(tuple("abc"[:k]))
    letters = al.letters()
    brute = {(): None}
    for n in range(1, radius + 1):
        for seq in itertools.product(letters, repeat=n):
            if _reduced(seq):
                brute[seq] = None
    ball = enumerate_ball(al, radius)
    assert len(ball) == len(brute) == ball_size(k, radius)
    assert {x.letters for x in ball} == set(brute)


def test_ball_closed_under_inversion():
    ball = enumerate_ball(AB, 3)
    assert all(x.inverse() in ball for x in ball)


def test_alphabet_validation():
    with pytest.raises(ValueError):
        Alphabet(("a", "a"))
    with pytest.raises(ValueError):
        Alphabet(("A",))
    with pytest.raises(ValueError):
        Alphabet(("ab",))


def test_render_parse_roundtrip_radius4():
    for x in enumerate_ball(AB, 4):
        assert parse_word(x.render(AB) or "1", AB) == x


words = st.lists(st.sampled_from([1, -1, 2, -2]), max_size=12).map(lambda ls: Word(tuple(ls)))


@settings(max_examples=200, deadline=None)
@given(words, words, words)
def test_group_laws(u, v, x):
    assert invert(invert(u)) == u
    assert multiply(u, invert(u)) == IDENTITY
    assert multiply(multiply(u, v), x) == multiply(u, multiply(v, x))
    assert _reduced(multiply(u, v).letters)
