"""Exact arithmetic over Q(i): Gaussian rationals, univariate polynomials,
Laurent polynomials and rational functions in canonical form.

Polynomials are stored as tuples of coefficients, lowest degree first, with
no trailing zeros. The zero polynomial is the empty tuple.
"""
from __future__ import annotations

from fractions import Fraction
from numbers import Rational

import gmpy2

# Coefficients are stored as gmpy2.mpq; it is a drop-in for Fraction and much faster.
_Q = type(gmpy2.mpq())
_RATIONALS = (int, Fraction, _Q)


class AlgebraError(ValueError):
    pass


def _frac(x):
    if type(x) is _Q:
        return x
    if isinstance(x, (int, Rational)):
        return gmpy2.mpq(x)
    if isinstance(x, str):
        return gmpy2.mpq(Fraction(x))
    raise TypeError(f"cannot make an exact rational from {x!r}")


def _gr(re, im):
    """Unchecked constructor for already-converted parts."""
    g = object.__new__(GaussianRational)
    g.re = re
    g.im = im
    return g


class GaussianRational:
    """An element re + im*i of Q(i)."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = _frac(re)
        self.im = _frac(im)

    @classmethod
    def coerce(cls, x) -> "GaussianRational":
        if isinstance(x, GaussianRational):
            return x
        if isinstance(x, complex):
            raise TypeError("floating complex values are not exact")
        return cls(x)

    def __repr__(self):
        return f"GaussianRational({self.re}, {self.im})"

    def __str__(self):
        if self.im == 0:
            return str(self.re)
        imag = "i" if abs(self.im) == 1 else f"{abs(self.im)}*i"
        if self.re == 0:
            return imag if self.im > 0 else f"-{imag}"
        sign = "+" if self.im > 0 else "-"
        return f"({self.re} {sign} {imag})"

    def __eq__(self, other):
        if isinstance(other, GaussianRational):
            return self.re == other.re and self.im == other.im
        if isinstance(other, _RATIONALS):
            return self.im == 0 and self.re == other
        return NotImplemented

    def __hash__(self):
        if self.im == 0:
            return hash(self.re)
        return hash((self.re, self.im))

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __neg__(self):
        return _gr(-self.re, -self.im)

    def __add__(self, other):
        if isinstance(other, GaussianRational):
            return _gr(self.re + other.re, self.im + other.im)
        if isinstance(other, _RATIONALS):
            return _gr(self.re + other, self.im)
        return NotImplemented

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, GaussianRational):
            return _gr(self.re - other.re, self.im - other.im)
        if isinstance(other, _RATIONALS):
            return _gr(self.re - other, self.im)
        return NotImplemented

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, GaussianRational):
            if not other.im:
                return _gr(self.re * other.re, self.im * other.re)
            if not self.im:
                return _gr(self.re * other.re, self.re * other.im)
            return _gr(
                self.re * other.re - self.im * other.im,
                self.re * other.im + self.im * other.re,
            )
        if isinstance(other, _RATIONALS):
            return _gr(self.re * other, self.im * other)
        return NotImplemented

    __rmul__ = __mul__

    def conjugate(self):
        return _gr(self.re, -self.im)

    def norm(self) -> Fraction:
        return self.re * self.re + self.im * self.im

    def inverse(self):
        if not self:
            raise ZeroDivisionError("division by zero in Q(i)")
        if not self.im:
            return GaussianRational(1 / self.re)
        n = self.norm()
        return _gr(self.re / n, -self.im / n)

    def __truediv__(self, other):
        if not isinstance(other, (GaussianRational, *_RATIONALS)):
            return NotImplemented
        return self * GaussianRational.coerce(other).inverse()

    def __rtruediv__(self, other):
        if not isinstance(other, _RATIONALS):
            return NotImplemented
        return GaussianRational.coerce(other) * self.inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        out = ONE
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __complex__(self):
        return complex(float(self.re), float(self.im))


ZERO = GaussianRational(0)
ONE = GaussianRational(1)
I = GaussianRational(0, 1)


# --- univariate polynomials as coefficient tuples -------------------------

def _trim(coeffs) -> tuple:
    coeffs = list(coeffs)
    while coeffs and not coeffs[-1]:
        coeffs.pop()
    return tuple(coeffs)


def poly(*coeffs) -> tuple:
    return _trim(GaussianRational.coerce(c) for c in coeffs)


def poly_degree(p: tuple) -> int:
    if not p:
        raise AlgebraError("degree of the zero polynomial is undefined")
    return len(p) - 1


def poly_add(p: tuple, q: tuple) -> tuple:
    if len(p) < len(q):
        p, q = q, p
    out = list(p)
    for k, c in enumerate(q):
        out[k] = out[k] + c
    return _trim(out)


def poly_neg(p: tuple) -> tuple:
    return tuple(-c for c in p)


def poly_sub(p: tuple, q: tuple) -> tuple:
    return poly_add(p, poly_neg(q))


def poly_mul(p: tuple, q: tuple) -> tuple:
    if not p or not q:
        return ()
    out = [ZERO] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if not a:
            continue
        for j, b in enumerate(q):
            if b:
                out[i + j] = out[i + j] + a * b
    return _trim(out)


def poly_scale(p: tuple, c: GaussianRational) -> tuple:
    if not c:
        return ()
    return tuple(a * c for a in p)


def poly_divmod(p: tuple, q: tuple) -> tuple[tuple, tuple]:
    if not q:
        raise ZeroDivisionError("polynomial division by zero")
    if len(p) < len(q):
        return (), p
    inv_lead = q[-1].inverse()
    rem = list(p)
    quot = [ZERO] * (len(p) - len(q) + 1)
    for k in range(len(p) - len(q), -1, -1):
        c = rem[k + len(q) - 1] * inv_lead
        quot[k] = c
        if c:
            for j, b in enumerate(q):
                rem[k + j] = rem[k + j] - c * b
    return _trim(quot), _trim(rem[: len(q) - 1])


def poly_monic(p: tuple) -> tuple:
    if not p:
        return p
    return poly_scale(p, p[-1].inverse())


def poly_gcd(p: tuple, q: tuple) -> tuple:
    """Monic gcd over Q(i) by the Euclidean algorithm."""
    while q:
        p, q = q, poly_divmod(p, q)[1]
    return poly_monic(p)


def poly_eval(p: tuple, x):
    out = 0
    for c in reversed(p):
        out = out * x + c
    return out


def poly_eval_complex(p: tuple, x: complex) -> complex:
    out = 0j
    for c in reversed(p):
        out = out * x + complex(c)
    return out


def poly_taylor_shift(p: tuple, t0: GaussianRational) -> tuple:
    """Coefficients of p(t0 + u) as a polynomial in u (synthetic division)."""
    c = list(p)
    n = len(c)
    for i in range(n):
        for k in range(n - 2, i - 1, -1):
            c[k] = c[k] + t0 * c[k + 1]
    return _trim(c)


def _poly_str(p: tuple, var: str) -> str:
    if not p:
        return "0"
    parts = []
    for k in range(len(p) - 1, -1, -1):
        c = p[k]
        if not c:
            continue
        if k == 0:
            mono = ""
        elif k == 1:
            mono = var
        else:
            mono = f"{var}^{k}"
        if not mono:
            parts.append(str(c))
        elif c == 1:
            parts.append(mono)
        elif c == -1:
            parts.append(f"-{mono}")
        else:
            parts.append(f"{c}*{mono}")
    return " + ".join(parts).replace("+ -", "- ")


# --- rational functions -----------------------------------------------------

class RationalFunction:
    """A ratio num/den of polynomials in one variable over Q(i).

    Always canonical: den is monic, gcd(num, den) = 1, and zero is 0/1.
    """

    __slots__ = ("num", "den")

    def __init__(self, num=(), den=None, *, _canonical=False):
        num = _trim(GaussianRational.coerce(c) for c in num)
        den = (ONE,) if den is None else _trim(GaussianRational.coerce(c) for c in den)
        if not den:
            raise ZeroDivisionError("rational function with zero denominator")
        if not _canonical:
            num, den = _canonicalize(num, den)
        self.num = num
        self.den = den

    @classmethod
    def constant(cls, c) -> "RationalFunction":
        c = GaussianRational.coerce(c)
        return cls((c,) if c else (), (ONE,), _canonical=True)

    @classmethod
    def variable(cls) -> "RationalFunction":
        return cls((ZERO, ONE), (ONE,), _canonical=True)

    @classmethod
    def monomial(cls, c, k: int) -> "RationalFunction":
        c = GaussianRational.coerce(c)
        if not c:
            return cls.constant(0)
        if k >= 0:
            return cls((ZERO,) * k + (c,), (ONE,), _canonical=True)
        return cls((c,), (ZERO,) * (-k) + (ONE,), _canonical=True)

    def is_zero(self) -> bool:
        return not self.num

    def is_constant(self) -> bool:
        return len(self.num) <= 1 and len(self.den) == 1

    def __bool__(self):
        return bool(self.num)

    def __eq__(self, other):
        if isinstance(other, RationalFunction):
            return self.num == other.num and self.den == other.den
        if isinstance(other, (*_RATIONALS, GaussianRational)):
            return self == RationalFunction.constant(other)
        return NotImplemented

    def __hash__(self):
        return hash((self.num, self.den))

    def __repr__(self):
        return f"RationalFunction({self})"

    def to_string(self, var: str = "t") -> str:
        n = _poly_str(self.num, var)
        if self.den == (ONE,):
            return n
        return f"({n})/({_poly_str(self.den, var)})"

    def __str__(self):
        return self.to_string()

    def _coerce(self, other):
        if isinstance(other, RationalFunction):
            return other
        if isinstance(other, (*_RATIONALS, GaussianRational)):
            return RationalFunction.constant(other)
        return None

    def __neg__(self):
        return RationalFunction(poly_neg(self.num), self.den, _canonical=True)

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        if self.den == other.den:
            return RationalFunction(poly_add(self.num, other.num), self.den)
        return RationalFunction(
            poly_add(poly_mul(self.num, other.den), poly_mul(other.num, self.den)),
            poly_mul(self.den, other.den),
        )

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
        if not self.num or not other.num:
            return RationalFunction.constant(0)
        return RationalFunction(poly_mul(self.num, other.num), poly_mul(self.den, other.den))

    __rmul__ = __mul__

    def inverse(self) -> "RationalFunction":
        if not self.num:
            raise ZeroDivisionError("inverse of the zero rational function")
        return RationalFunction(self.den, self.num)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        return RationalFunction.constant(other) * self.inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        out = RationalFunction.constant(1)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __call__(self, x):
        """Evaluate exactly at a Gaussian rational, or numerically at a float/complex."""
        if isinstance(x, (*_RATIONALS, GaussianRational)):
            x = GaussianRational.coerce(x)
            d = poly_eval(self.den, x)
            if not d:
                raise ZeroDivisionError(f"pole at {x}")
            return poly_eval(self.num, x) / d
        x = complex(x)
        return poly_eval_complex(self.num, x) / poly_eval_complex(self.den, x)


def _canonicalize(num: tuple, den: tuple) -> tuple[tuple, tuple]:
    if not num:
        return (), (ONE,)
    # Strip common powers of the variable first; cheap and very common here.
    k = 0
    while not num[k] and not den[k]:
        k += 1
    if k:
        num, den = num[k:], den[k:]
    # After stripping, a monomial denominator t^k is already coprime to num.
    if len(den) > 1 and any(den[:-1]):
        g = poly_gcd(num, den)
        if len(g) > 1:
            num = poly_divmod(num, g)[0]
            den = poly_divmod(den, g)[0]
    lead = den[-1]
    if lead != ONE:
        inv = lead.inverse()
        num = poly_scale(num, inv)
        den = poly_scale(den, inv)
    return num, den


def degree_at_infinity(f: RationalFunction) -> int:
    """deg(num) - deg(den): positive exactly when |f| blows up as t -> infinity."""
    if f.is_zero():
        raise AlgebraError("valuation of zero undefined")
    return len(f.num) - len(f.den)


def substitute_end_chart(f: RationalFunction, t0) -> RationalFunction:
    """Return g with g(s) = f(t0 + 1/s), moving the end t -> t0 to s -> infinity."""
    if f.is_zero():
        raise AlgebraError("valuation of zero undefined")
    t0 = GaussianRational.coerce(t0)
    # p(t0 + 1/s) = s^-deg(p) * reversed(taylor_shift(p))(s); the shift keeps deg(p).
    n = _trim(reversed(poly_taylor_shift(f.num, t0)))
    d = _trim(reversed(poly_taylor_shift(f.den, t0)))
    shift = (len(f.den) - 1) - (len(f.num) - 1)
    if shift >= 0:
        n = (ZERO,) * shift + n
    else:
        d = (ZERO,) * (-shift) + d
    return RationalFunction(n, d)


class LaurentPolynomial:
    """Finite sum of c_k t^k with integer k; zero coefficients are never stored."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: dict | None = None):
        self.coeffs = {
            int(k): GaussianRational.coerce(c)
            for k, c in (coeffs or {}).items()
            if GaussianRational.coerce(c)
        }

    def degree(self) -> int:
        if not self.coeffs:
            raise AlgebraError("degree of the zero Laurent polynomial is undefined")
        return max(self.coeffs)

    def order(self) -> int:
        if not self.coeffs:
            raise AlgebraError("order of the zero Laurent polynomial is undefined")
        return min(self.coeffs)

    def __eq__(self, other):
        if isinstance(other, LaurentPolynomial):
            return self.coeffs == other.coeffs
        return NotImplemented

    def __add__(self, other):
        out = dict(self.coeffs)
        for k, c in other.coeffs.items():
            out[k] = out.get(k, ZERO) + c
        return LaurentPolynomial(out)

    def __mul__(self, other):
        out: dict = {}
        for i, a in self.coeffs.items():
            for j, b in other.coeffs.items():
                out[i + j] = out.get(i + j, ZERO) + a * b
        return LaurentPolynomial(out)

    def to_rational(self) -> RationalFunction:
        if not self.coeffs:
            return RationalFunction.constant(0)
        lo = min(0, self.order())
        num = [ZERO] * (self.degree() - lo + 1)
        for k, c in self.coeffs.items():
            num[k - lo] = c
        return RationalFunction(num, (ZERO,) * (-lo) + (ONE,))

    @classmethod
    def from_rational(cls, f: RationalFunction) -> "LaurentPolynomial":
        """Exact conversion when the denominator is a monomial; raises otherwise."""
        if any(f.den[:-1]):
            raise AlgebraError(f"{f} is not a Laurent polynomial")
        shift = len(f.den) - 1
        return cls({k - shift: c for k, c in enumerate(f.num) if c})
