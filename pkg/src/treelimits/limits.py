"""Limits of translation lengths along a rational curve of representations.

Everything symbolic is computed in the chart where the chosen end sits at
infinity, so valuations are degrees at infinity and limit lengths come out
as integers under the 1/log t rescaling.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from .algebra import AlgebraError, RationalFunction, degree_at_infinity, substitute_end_chart
from .curve import End, RepCurve, mat_trace
from .h3 import (BASEPOINT, GeometryError, HyperbolicContext, Matrix2C, approximate_center,
                 dist_h3, mobius_act, translation_length_trace)
from .trees import LimitMetric, NotRealizableError, classify_from_orbit
from .words import IDENTITY, Word, WordBall, commutator, enumerate_ball

TWO = RationalFunction.constant(2)
FOUR = RationalFunction.constant(4)

DRIFT_SAMPLES = (1e3, 1e4)
DRIFT_FRACTION = 0.25


class NoBlowUpError(ValueError):
    pass


class DriftError(ValueError):
    pass


class NumericOverflowError(OverflowError):
    def __init__(self, t, word=None):
        super().__init__(f"numeric overflow evaluating at t={t!r}")
        self.t = t
        self.word = word


# --- symbolic ---------------------------------------------------------------

def evaluate_word_matrix(curve: RepCurve, w: Word):
    return curve.word_matrix(w)


def trace_function(curve: RepCurve, w: Word) -> RationalFunction:
    return mat_trace(curve.word_matrix(w))


def f_of(curve: RepCurve, w: Word) -> RationalFunction:
    tr = trace_function(curve, w)
    return tr * tr - FOUR


def valuation(f: RationalFunction, end: End) -> int:
    if f.is_zero():
        raise AlgebraError("valuation of zero undefined")
    if end.kind == "infinity":
        return degree_at_infinity(f)
    return degree_at_infinity(substitute_end_chart(f, end.t0))


def _length_from_trace(tr: RationalFunction) -> int:
    f = tr * tr - FOUR
    if f.is_zero():
        return 0
    return max(degree_at_infinity(f), 0)


def limit_length(curve: RepCurve, end: End, w: Word) -> int:
    return _length_from_trace(trace_function(curve.chart(end), w))


def _entry_degree(m) -> int | None:
    degs = [degree_at_infinity(x) for x in m if not x.is_zero()]
    return max(degs) if degs else None


def displacement_limit(curve: RepCurve, end: End, w: Word) -> int:
    """Limit of d(j, rho_t(w) j)/log t: twice the top entry degree, clamped at 0."""
    return 2 * max(_entry_degree(curve.chart(end).word_matrix(w)), 0)


def blows_up(curve: RepCurve, end: End, radius: int):
    """(True, shortlex-first word of positive limit length) or (False, None)."""
    if radius < 1:
        raise ValueError("radius must be at least 1")
    for w in enumerate_ball(curve.alphabet, radius):
        if w and limit_length(curve, end, w) > 0:
            return True, w
    return False, None


def orbit_limit_length(curve: RepCurve, end: End, w: Word) -> int:
    d1 = displacement_limit(curve, end, w)
    d2 = displacement_limit(curve, end, w * w)
    return int(classify_from_orbit(d1, d2).t)


def limit_metric(curve: RepCurve, end: End, ball: WordBall, *, guard: bool = True,
                 ctx: HyperbolicContext = HyperbolicContext()) -> LimitMetric:
    ok, _ = blows_up(curve, end, max(ball.radius, 1))
    if not ok:
        raise NoBlowUpError("no blow-up at this end; limits are bounded")
    if guard:
        basepoint_drift_check(curve, end, ctx)
    words = list(ball)
    n = len(words)
    dist = [[0] * n for _ in range(n)]
    for i in range(n):
        gi = words[i].inverse()
        for j in range(i + 1, n):
            dist[i][j] = dist[j][i] = displacement_limit(curve, end, gi * words[j])
    return LimitMetric(words, dist, ball=ball)


# --- irreducibility -------------------------------------------------------------

@dataclass
class IrreducibilityProbe:
    witness: tuple | None
    commutator_lengths: dict = field(default_factory=dict)
    search: dict = field(default_factory=dict)

    @property
    def verdict(self) -> str:
        return "witness found" if self.witness else "irreducibility not established"


def _trace_of_product(m, n) -> RationalFunction:
    return m[0] * n[0] + m[1] * n[2] + m[2] * n[1] + m[3] * n[3]


def commutator_trace(curve: RepCurve, u: Word, w: Word) -> RationalFunction:
    """trace of [u, w] by the Fricke identity x^2 + y^2 + z^2 - xyz - 2."""
    mu, mw = curve.word_matrix(u), curve.word_matrix(w)
    x, y, z = mat_trace(mu), mat_trace(mw), _trace_of_product(mu, mw)
    return x * x + y * y + z * z - x * y * z - TWO


def irreducibility_probe(curve: RepCurve, end: End, radius: int, pmax: int = 4) -> IrreducibilityProbe:
    """Shortlex-first (u, w) with L(u) > 0 and L([u^p, w]) > 0 for some p <= pmax."""
    chart = curve.chart(end)
    ball = enumerate_ball(curve.alphabet, radius)
    hyperbolic = [u for u in ball if u and limit_length(curve, end, u) > 0]
    search = {"radius": radius, "pmax": pmax}
    for u in hyperbolic:
        for w in ball:
            if not w:
                continue
            for p in range(1, pmax + 1):
                if _length_from_trace(commutator_trace(chart, u ** p, w)) > 0:
                    lengths = {q: _length_from_trace(commutator_trace(chart, u ** q, w))
                               for q in range(1, pmax + 1)}
                    return IrreducibilityProbe((u, w), lengths, search)
    return IrreducibilityProbe(None, {}, search)


# --- length functions ---------------------------------------------------------

@dataclass
class LengthFunction:
    values: dict

    def __getitem__(self, w: Word):
        return self.values[w]

    def vector(self, words) -> list:
        return [self.values[w] for w in words]

    @classmethod
    def symbolic(cls, curve: RepCurve, end: End, words) -> "LengthFunction":
        return cls({w: limit_length(curve, end, w) for w in words})


def conversion_factor(curve: RepCurve, end: End) -> int:
    """Max generator limit length: converts 1/log t-rescaled lengths to displacement-rescaled ones."""
    return max(limit_length(curve, end, Word((k,))) for k in range(1, len(curve.alphabet) + 1))


# --- numerics -------------------------------------------------------------------

def parameter_at(end: End, s: float) -> complex:
    """Curve parameter for sample s: t = s at infinity, t = t0 + 1/s at a finite end."""
    if end.kind == "infinity":
        return complex(s)
    return complex(end.t0) + 1.0 / s


def numeric_generators(curve: RepCurve, t: complex) -> dict:
    """Signed letter -> Matrix2C at parameter t (no determinant rescaling)."""
    out = {}
    for k, g in enumerate(curve.alphabet.generators, start=1):
        vals = [f(t) for f in curve.matrices[g]]
        m = Matrix2C(*(complex(v) for v in vals))
        if not m.is_finite():
            raise NumericOverflowError(t)
        out[k] = m
        out[-k] = m.inverse()
    return out


def numeric_word_matrix(gens: dict, w: Word) -> Matrix2C:
    m = Matrix2C.identity()
    for x in w.letters:
        m = m @ gens[x]
    return m


def numeric_length_samples(curve: RepCurve, w: Word, ts, end: End = End.infinity()):
    """[(s, t(rho(w))/log s)] for samples s, with parameter given by ``parameter_at``."""
    ts = list(ts)
    if any(s <= 1 for s in ts) or any(b <= a for a, b in zip(ts, ts[1:])):
        raise ValueError("sample points must be increasing and greater than 1")
    out = []
    for s in ts:
        with _overflow_as_error(s, w):
            m = numeric_word_matrix(numeric_generators(curve, parameter_at(end, s)), w)
            if not m.is_finite():
                raise NumericOverflowError(s, w)
            out.append((s, translation_length_trace(m) / math.log(s)))
    return out


class _overflow_as_error:
    def __init__(self, s, w):
        self.s, self.w = s, w

    def __enter__(self):
        return self

    def __exit__(self, exc_type, exc, tb):
        if exc_type is not None and issubclass(exc_type, (OverflowError, ZeroDivisionError)) \
                and not issubclass(exc_type, NumericOverflowError):
            raise NumericOverflowError(self.s, self.w) from exc
        return False


@dataclass(frozen=True)
class RescalingSchedule:
    """Scale factor applied to translation lengths at sample s."""

    mode: str = "symbolic"  # or "displacement"

    def __post_init__(self):
        if self.mode not in ("symbolic", "displacement"):
            raise ValueError(f"unknown rescaling mode {self.mode!r}")

    def factor(self, curve: RepCurve, s: float, end: End = End.infinity()) -> float:
        if self.mode == "symbolic":
            return 1.0 / math.log(s)
        gens = numeric_generators(curve, parameter_at(end, s))
        reach = max(dist_h3(BASEPOINT, mobius_act(gens[k], BASEPOINT))
                    for k in range(1, len(curve.alphabet) + 1))
        return 1.0 / max(1.0, reach)


def basepoint_drift_check(curve: RepCurve, end: End,
                          ctx: HyperbolicContext = HyperbolicContext(),
                          samples=DRIFT_SAMPLES, fraction: float = DRIFT_FRACTION):
    """Raise DriftError if the approximate center runs away from the basepoint.

    Returns the (sample, distance from basepoint) pairs otherwise.
    """
    dists = []
    for s in samples:
        gens = numeric_generators(curve, parameter_at(end, s))
        mats = [gens[k] for k in range(1, len(curve.alphabet) + 1)]
        try:
            x, _ = approximate_center(mats, ctx)
        except GeometryError:
            raise DriftError("approximate center drifts; supply conjugating normalization") from None
        dists.append((s, dist_h3(BASEPOINT, x)))
    for (s1, d1), (s2, d2) in zip(dists, dists[1:]):
        if d2 - d1 > fraction * (math.log(s2) - math.log(s1)):
            raise DriftError("approximate center drifts; supply conjugating normalization")
    return dists


__all__ = [
    "NoBlowUpError", "DriftError", "NumericOverflowError", "NotRealizableError",
    "evaluate_word_matrix", "trace_function", "f_of", "valuation", "limit_length",
    "displacement_limit", "blows_up", "orbit_limit_length", "limit_metric",
    "IrreducibilityProbe", "commutator_trace", "irreducibility_probe", "LengthFunction",
    "conversion_factor", "parameter_at", "numeric_generators", "numeric_word_matrix",
    "numeric_length_samples", "RescalingSchedule", "basepoint_drift_check", "IDENTITY",
    "commutator", "Fraction",
]
