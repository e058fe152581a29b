"""Bivariate polynomials p(y, z), their Newton polygons, and the asymptotic
exponents lim log|y| / log|z| of branches of {p = 0} as |z| -> infinity.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import mpmath

from .algebra import _RATIONALS, AlgebraError, GaussianRational
from .expr import parse_expression


class BivariatePolynomial:
    """Sum of c * y^m * z^n; ``terms`` maps (m, n) to a nonzero Gaussian rational."""

    __slots__ = ("terms",)

    def __init__(self, terms: dict | None = None):
        clean = {}
        for (m, n), c in (terms or {}).items():
            c = GaussianRational.coerce(c)
            if m < 0 or n < 0:
                raise AlgebraError("negative exponent in a polynomial")
            if c:
                clean[(int(m), int(n))] = c
        self.terms = clean

    @classmethod
    def y(cls):
        return cls({(1, 0): 1})

    @classmethod
    def z(cls):
        return cls({(0, 1): 1})

    @classmethod
    def constant(cls, c):
        return cls({(0, 0): c})

    def _coerce(self, other):
        if isinstance(other, BivariatePolynomial):
            return other
        if isinstance(other, (*_RATIONALS, GaussianRational)):
            return BivariatePolynomial.constant(other)
        return None

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __neg__(self):
        return BivariatePolynomial({k: -c for k, c in self.terms.items()})

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        out = dict(self.terms)
        for k, c in other.terms.items():
            out[k] = out[k] + c if k in out else c
        return BivariatePolynomial(out)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        out: dict = {}
        for (m1, n1), a in self.terms.items():
            for (m2, n2), b in other.terms.items():
                k = (m1 + m2, n1 + n2)
                out[k] = out[k] + a * b if k in out else a * b
        return BivariatePolynomial(out)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is None or set(other.terms) - {(0, 0)}:
            raise TypeError("only division by a constant is supported")
        if not other.terms:
            raise ZeroDivisionError("division by zero")
        inv = other.terms[(0, 0)].inverse()
        return BivariatePolynomial({k: c * inv for k, c in self.terms.items()})

    def __pow__(self, n: int):
        out = BivariatePolynomial.constant(1)
        for _ in range(n):
            out = out * self
        return out

    def __repr__(self):
        return f"BivariatePolynomial({self})"

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for (m, n) in sorted(self.terms, reverse=True):
            c = self.terms[(m, n)]
            mono = "*".join(
                s for s in (
                    "" if m == 0 else ("y" if m == 1 else f"y^{m}"),
                    "" if n == 0 else ("z" if n == 1 else f"z^{n}"),
                ) if s
            )
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"{c}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")

    def y_degree(self) -> int:
        return max((m for m, _ in self.terms), default=0)


def parse_bivariate(text: str) -> BivariatePolynomial:
    value = parse_expression(
        text, {"y": BivariatePolynomial.y(), "z": BivariatePolynomial.z()}
    )
    if not isinstance(value, BivariatePolynomial):
        value = BivariatePolynomial.constant(value)
    return value


@dataclass(frozen=True)
class EdgeData:
    """Edge polynomial y^r z^s q(y^a z^b) with gcd(a, b) = 1 and q(0) != 0.

    ``exponent`` is the limit of log|y|/log|z| along branches governed by this
    edge, which equals -b/a.
    """

    r: int
    s: int
    a: int
    b: int
    q: tuple  # coefficients of q, lowest degree first
    exponent: Fraction | None

    def terms(self) -> dict:
        return {
            (self.r + k * self.a, self.s + k * self.b): c
            for k, c in enumerate(self.q)
            if c
        }


@dataclass(frozen=True)
class PolygonEdge:
    start: tuple
    end: tuple
    normal: tuple  # primitive outward normal (u, v)
    data: EdgeData


@dataclass
class NewtonPolygon:
    support: frozenset
    hull: list  # counterclockwise vertices
    edges: list = field(default_factory=list)


def _cross(o, a, b):
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def convex_hull(points) -> list:
    """Counterclockwise hull vertices (Andrew's monotone chain), collinear points dropped."""
    pts = sorted(set(points))
    if len(pts) <= 2:
        return pts
    lower: list = []
    for p in pts:
        while len(lower) >= 2 and _cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    upper: list = []
    for p in reversed(pts):
        while len(upper) >= 2 and _cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    hull = lower[:-1] + upper[:-1]
    if len(hull) == 2 and hull[0] == hull[1]:
        return hull[:1]
    return hull


def _edge_data(p: BivariatePolynomial, start, end) -> EdgeData:
    dx, dy = end[0] - start[0], end[1] - start[1]
    g = math.gcd(dx, dy)
    a, b = dx // g, dy // g
    if a < 0 or (a == 0 and b < 0):
        a, b = -a, -b
        start = end
    r, s = start
    q = tuple(p.terms.get((r + k * a, s + k * b), GaussianRational(0)) for k in range(g + 1))
    exponent = Fraction(-b, a) if a else None
    return EdgeData(r=r, s=s, a=a, b=b, q=q, exponent=exponent)


def newton_polygon(p: BivariatePolynomial) -> NewtonPolygon:
    if not p:
        raise AlgebraError("Newton polygon of the zero polynomial is undefined")
    support = frozenset(p.terms)
    hull = convex_hull(support)
    edges = []
    if len(hull) >= 2:
        cycle = hull if len(hull) > 2 else [hull[0], hull[1]]
        for k, start in enumerate(cycle):
            end = cycle[(k + 1) % len(cycle)]
            dx, dy = end[0] - start[0], end[1] - start[1]
            g = math.gcd(dx, dy)
            normal = (dy // g, -dx // g)
            edges.append(PolygonEdge(start, end, normal, _edge_data(p, start, end)))
    return NewtonPolygon(support=support, hull=hull, edges=edges)


def asymptotic_exponents(p: BivariatePolynomial) -> list[tuple[Fraction, EdgeData]]:
    """Possible limits of log|y|/log|z| on {p = 0} as |z| -> infinity, one per edge.

    Only edges whose outward normal (u, v) has v > 0 govern |z| -> infinity; the
    exponent is u/v. Sorted by exponent.
    """
    if len(p.terms) < 2:
        raise AlgebraError("no branches: polynomial has a single term")
    out = []
    for edge in newton_polygon(p).edges:
        u, v = edge.normal
        if v > 0:
            out.append((Fraction(u, v), edge.data))
    out.sort(key=lambda item: item[0])
    return out


def evaluate_bivariate(p: BivariatePolynomial, y: complex, z: complex) -> complex:
    """Horner evaluation in y with Horner-evaluated z-coefficients."""
    by_m: dict = {}
    for (m, n), c in p.terms.items():
        by_m.setdefault(m, {})[n] = complex(c)
    total = 0j
    for m in range(p.y_degree(), -1, -1):
        coeffs = by_m.get(m, {})
        cz = 0j
        for n in range(max(coeffs, default=0), -1, -1):
            cz = cz * z + coeffs.get(n, 0)
        total = total * y + cz
    return total


def numeric_branch_ratios(p: BivariatePolynomial, modulus: float = 1e4, angle: float = 0.3,
                          dps: int = 60) -> list[float]:
    """log|y|/log|z| for every nonzero root y of p(., z) at z = modulus * exp(i*angle).

    Independent of the Newton polygon: roots come from a high-precision
    polynomial root finder applied at a single fixed z.
    """
    deg = p.y_degree()
    if deg == 0:
        return []
    with mpmath.workdps(dps):
        z = mpmath.mpf(modulus) * mpmath.expj(angle)
        coeffs = [mpmath.mpc(0)] * (deg + 1)
        for (m, n), c in p.terms.items():
            coeffs[m] += mpmath.mpc(float(c.re), float(c.im)) * z ** n
        while coeffs and coeffs[-1] == 0:
            coeffs.pop()
        # strip zero roots (powers of y dividing p)
        low = 0
        while low < len(coeffs) and coeffs[low] == 0:
            low += 1
        coeffs = coeffs[low:]
        if len(coeffs) <= 1:
            return []
        roots = mpmath.polyroots(list(reversed(coeffs)), maxsteps=400, extraprec=4 * dps)
        logz = mpmath.log(abs(z))
        return sorted(float(mpmath.log(abs(r)) / logz) for r in roots)


def match_exponents(p: BivariatePolynomial, modulus: float = 1e4, tol: float = 0.02,
                    relative: bool = False) -> dict:
    """For each exponent, the closest numeric branch ratio and whether it is within tol."""
    ratios = numeric_branch_ratios(p, modulus)
    out = {}
    for exponent, _ in asymptotic_exponents(p):
        target = float(exponent)
        best = min(ratios, key=lambda r: abs(r - target)) if ratios else math.nan
        bound = tol * abs(target) if relative else tol
        out[exponent] = (best, abs(best - target) <= bound)
    return out

