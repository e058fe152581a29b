"""One-parameter curves of SL2 representations of a free group.

A curve assigns each generator a 2x2 matrix of rational functions in t with
determinant identically 1. Ends are t -> infinity or t -> t0; a finite end is
moved to infinity by the chart t = t0 + 1/s.
"""
from __future__ import annotations

import json
from dataclasses import dataclass

from .algebra import GaussianRational, RationalFunction, substitute_end_chart
from .expr import ParseError, parse_gaussian, parse_rational_function
from .words import Alphabet, Word, parse_word

ONE_RF = RationalFunction.constant(1)
ZERO_RF = RationalFunction.constant(0)
IDENTITY_MATRIX = (ONE_RF, ZERO_RF, ZERO_RF, ONE_RF)


class SpecError(ValueError):
    pass


# Matrices are row-major 4-tuples (a, b, c, d) of RationalFunction.

def mat_mul(m, n):
    a, b, c, d = m
    e, f, g, h = n
    return (a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h)


def mat_adjugate(m):
    a, b, c, d = m
    return (d, -b, -c, a)


def mat_det(m):
    a, b, c, d = m
    return a * d - b * c


def mat_trace(m):
    return m[0] + m[3]


@dataclass(frozen=True)
class End:
    kind: str  # "infinity" or "finite"
    t0: GaussianRational | None = None

    @classmethod
    def infinity(cls) -> "End":
        return cls("infinity")

    @classmethod
    def finite(cls, t0) -> "End":
        return cls("finite", GaussianRational.coerce(t0))

    @classmethod
    def parse(cls, value) -> "End":
        """Accepts "infinity", "t0=VALUE", or {"t0": "VALUE"}."""
        if isinstance(value, dict):
            if set(value) != {"t0"}:
                raise SpecError(f"malformed end {value!r}")
            return cls.finite(parse_gaussian(str(value["t0"])))
        text = str(value).strip()
        if text in ("infinity", "inf", "oo"):
            return cls.infinity()
        if text.startswith("t0="):
            return cls.finite(parse_gaussian(text[3:]))
        raise SpecError(f"malformed end {value!r}; use 'infinity' or 't0=VALUE'")

    def label(self) -> str:
        return "infinity" if self.kind == "infinity" else f"t0={self.t0}"

    def to_json(self):
        return "infinity" if self.kind == "infinity" else {"t0": str(self.t0)}


class RepCurve:
    """Generator -> 2x2 rational-function matrix, with cached word products."""

    def __init__(self, alphabet: Alphabet, matrices: dict, *, variable: str = "t",
                 check: bool = True):
        self.alphabet = alphabet
        self.matrices = {g: tuple(matrices[g]) for g in alphabet.generators}
        self.variable = variable
        if check:
            for g, m in self.matrices.items():
                det = mat_det(m)
                if det != ONE_RF:
                    raise SpecError(
                        f"generator {g!r} has determinant {det.to_string(variable)}, not 1"
                    )
        self._letter_mats = {}
        for k, g in enumerate(alphabet.generators, start=1):
            self._letter_mats[k] = self.matrices[g]
            self._letter_mats[-k] = mat_adjugate(self.matrices[g])
        self._cache: dict = {(): IDENTITY_MATRIX}
        self._charts: dict = {}

    def word_matrix(self, w: Word):
        letters = w.letters
        cached = self._cache.get(letters)
        if cached is not None:
            return cached
        # Longest cached prefix, then extend one letter at a time.
        k = len(letters) - 1
        while letters[:k] not in self._cache:
            k -= 1
        m = self._cache[letters[:k]]
        for j in range(k, len(letters)):
            m = mat_mul(m, self._letter_mats[letters[j]])
            self._cache[letters[: j + 1]] = m
        return m

    def chart(self, end: End) -> "RepCurve":
        """The same curve reparametrized so that ``end`` sits at s -> infinity."""
        if end.kind == "infinity":
            return self
        if end in self._charts:
            return self._charts[end]
        mats = {
            g: tuple(ZERO_RF if f.is_zero() else substitute_end_chart(f, end.t0) for f in m)
            for g, m in self.matrices.items()
        }
        chart = self._charts[end] = RepCurve(self.alphabet, mats, variable="s", check=False)
        return chart

    def numeric_matrices(self, t: complex) -> dict:
        """Generator matrices evaluated in double precision at parameter t."""
        return {g: tuple(complex(f(t)) for f in m) for g, m in self.matrices.items()}

    def is_constant(self) -> bool:
        return all(f.is_constant() for m in self.matrices.values() for f in m)


@dataclass
class CurveSpec:
    """A parsed curve-spec document; ``text`` is the verbatim source."""

    text: str
    curve: RepCurve
    ends: list
    words: list
    ball_radius: int | None


def parse_curve_spec(text: str) -> CurveSpec:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SpecError(f"spec is not valid JSON: {exc}") from None
    if not isinstance(doc, dict) or "generators" not in doc:
        raise SpecError("spec must be an object with a 'generators' entry")
    gens = doc["generators"]
    if not isinstance(gens, dict) or not gens:
        raise SpecError("'generators' must be a nonempty object")
    try:
        alphabet = Alphabet(tuple(gens))
    except ValueError as exc:
        raise SpecError(str(exc)) from None
    matrices = {}
    for g, rows in gens.items():
        if (not isinstance(rows, list) or len(rows) != 2
                or any(not isinstance(r, list) or len(r) != 2 for r in rows)):
            raise SpecError(f"generator {g!r} must be a 2x2 array of expressions")
        entries = []
        for r in rows:
            for e in r:
                try:
                    entries.append(parse_rational_function(str(e)))
                except ParseError as exc:
                    raise SpecError(f"generator {g!r}, entry {e!r}: {exc}") from None
        matrices[g] = tuple(entries)
    curve = RepCurve(alphabet, matrices)

    ends = [End.parse(e) for e in doc.get("ends", ["infinity"])]
    if not ends:
        raise SpecError("'ends' must list at least one end")
    words = []
    for w in doc.get("words", []):
        try:
            words.append(parse_word(str(w), alphabet))
        except ParseError as exc:
            raise SpecError(f"word {w!r}: {exc}") from None
    radius = doc.get("ball_radius")
    if radius is not None and (not isinstance(radius, int) or radius < 0):
        raise SpecError("'ball_radius' must be a nonnegative integer")
    return CurveSpec(text=text, curve=curve, ends=ends, words=words, ball_radius=radius)


def load_curve_spec(path) -> CurveSpec:
    with open(path, encoding="utf-8") as fh:
        return parse_curve_spec(fh.read())


def curve_from_strings(matrices: dict) -> RepCurve:
    """Convenience constructor: {"a": [["t", "0"], ["0", "1/t"]], ...}."""
    return parse_curve_spec(json.dumps({"generators": matrices})).curve
