"""Free-group words: reduction, products, shortlex balls, and parsing."""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

from .expr import ParseError

MAX_BALL_RADIUS = 8


@dataclass(frozen=True)
class Alphabet:
    """Ordered generator names; lowercase letter = generator, uppercase = inverse."""

    generators: tuple

    def __post_init__(self):
        gens = tuple(self.generators)
        object.__setattr__(self, "generators", gens)
        if len(set(gens)) != len(gens):
            raise ValueError(f"duplicate generator names in {gens}")
        if len(gens) > 26:
            raise ValueError("at most 26 generators are supported")
        for g in gens:
            if len(g) != 1 or not g.isalpha() or not g.islower():
                raise ValueError(f"generator names must be single lowercase letters, got {g!r}")

    def __len__(self):
        return len(self.generators)

    @cached_property
    def _index(self) -> dict:
        out = {}
        for k, g in enumerate(self.generators, start=1):
            out[g] = k
            out[g.upper()] = -k
        return out

    def letter(self, ch: str) -> int:
        return self._index[ch]

    def render_letter(self, x: int) -> str:
        name = self.generators[abs(x) - 1]
        return name if x > 0 else name.upper()

    def letters(self) -> list[int]:
        """All signed letters in shortlex order: a < A < b < B < ..."""
        out = []
        for k in range(1, len(self.generators) + 1):
            out += [k, -k]
        return out


def _letter_key(x: int) -> int:
    return 2 * (abs(x) - 1) + (x < 0)


@dataclass(frozen=True, order=False)
class Word:
    """A freely reduced word; ``letters`` holds signed 1-based generator indices."""

    letters: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "letters", free_reduce(self.letters))

    def __len__(self):
        return len(self.letters)

    def __bool__(self):
        return bool(self.letters)

    def __mul__(self, other: "Word") -> "Word":
        return multiply(self, other)

    def __pow__(self, n: int) -> "Word":
        return power(self, n)

    def inverse(self) -> "Word":
        return invert(self)

    def shortlex_key(self):
        return (len(self.letters), tuple(_letter_key(x) for x in self.letters))

    def __lt__(self, other: "Word") -> bool:
        return self.shortlex_key() < other.shortlex_key()

    def render(self, alphabet: Alphabet) -> str:
        return "".join(alphabet.render_letter(x) for x in self.letters)


def free_reduce(letters) -> tuple:
    out: list = []
    for x in letters:
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


def multiply(u: Word, v: Word) -> Word:
    return Word(u.letters + v.letters)


def invert(u: Word) -> Word:
    return Word(tuple(-x for x in reversed(u.letters)))


def commutator(u: Word, v: Word) -> Word:
    """u v u^-1 v^-1"""
    return Word(u.letters + v.letters + invert(u).letters + invert(v).letters)


def power(u: Word, n: int) -> Word:
    if n < 0:
        return power(invert(u), -n)
    return Word(u.letters * n)


IDENTITY = Word(())


def parse_word(text: str, alphabet: Alphabet) -> Word:
    if text.strip() == "1":
        return IDENTITY
    letters = []
    for pos, ch in enumerate(text):
        if ch.isspace():
            continue
        try:
            letters.append(alphabet.letter(ch))
        except KeyError:
            raise ParseError(f"unknown letter {ch!r}", pos, text) from None
    return Word(tuple(letters))


@dataclass(frozen=True)
class WordBall:
    radius: int
    words: tuple

    def __len__(self):
        return len(self.words)

    def __iter__(self):
        return iter(self.words)

    def index(self, w: Word) -> int:
        return self._positions[w]

    @cached_property
    def _positions(self) -> dict:
        return {w: k for k, w in enumerate(self.words)}

    def __contains__(self, w) -> bool:
        return w in self._positions


def enumerate_ball(alphabet: Alphabet, radius: int, cap: int = MAX_BALL_RADIUS) -> WordBall:
    """All freely reduced words of length <= radius, in shortlex order."""
    if radius < 0:
        raise ValueError("radius must be nonnegative")
    if radius > cap:
        raise ValueError(f"ball too large: radius {radius} exceeds cap {cap}")
    letters = alphabet.letters()
    words = [IDENTITY]
    layer = [()]
    for _ in range(radius):
        nxt = []
        for w in layer:
            for x in letters:
                if w and w[-1] == -x:
                    continue
                nxt.append(w + (x,))
        words.extend(Word(w) for w in nxt)
        layer = nxt
    return WordBall(radius, tuple(words))


def ball_size(k: int, radius: int) -> int:
    """Closed-form count of reduced words of length <= radius on k generators."""
    return 1 + sum(2 * k * (2 * k - 1) ** (r - 1) for r in range(1, radius + 1))
