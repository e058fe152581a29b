"""Hyperbolic 3-space in the upper half-space model.

A point is z + h*j with z complex and h > 0; SL2(C) acts by the Poincare
extension of Mobius transformations. Geodesics are computed through the
hyperboloid model, where they have a closed form.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize
from scipy.stats import qmc

DELTA = math.log(1 + math.sqrt(2))


class GeometryError(ArithmeticError):
    pass


@dataclass(frozen=True)
class Matrix2C:
    a: complex
    b: complex
    c: complex
    d: complex

    @classmethod
    def sl2(cls, a, b, c, d) -> "Matrix2C":
        """Validated SL2 element; determinants within 1e-6 of 1 are rescaled."""
        a, b, c, d = complex(a), complex(b), complex(c), complex(d)
        det = a * d - b * c
        if abs(det - 1) > 1e-6:
            raise GeometryError(f"determinant {det} is not 1")
        if det != 1:
            s = complex(np.sqrt(det))
            a, b, c, d = a / s, b / s, c / s, d / s
        return cls(a, b, c, d)

    @classmethod
    def identity(cls) -> "Matrix2C":
        return cls(1, 0, 0, 1)

    @classmethod
    def diag(cls, lam) -> "Matrix2C":
        return cls(lam, 0, 0, 1 / lam)

    def __matmul__(self, o: "Matrix2C") -> "Matrix2C":
        return Matrix2C(
            self.a * o.a + self.b * o.c, self.a * o.b + self.b * o.d,
            self.c * o.a + self.d * o.c, self.c * o.b + self.d * o.d,
        )

    def inverse(self) -> "Matrix2C":
        return Matrix2C(self.d, -self.b, -self.c, self.a)

    def trace(self) -> complex:
        return self.a + self.d

    def det(self) -> complex:
        return self.a * self.d - self.b * self.c

    def is_finite(self) -> bool:
        return all(np.isfinite(x) for x in (self.a, self.b, self.c, self.d))


@dataclass(frozen=True)
class PointH3:
    z: complex
    h: float

    def __post_init__(self):
        if not (self.h > 0) or not math.isfinite(self.h) or not np.isfinite(self.z):
            raise GeometryError(f"invalid point of H3: z={self.z}, h={self.h}")


BASEPOINT = PointH3(0j, 1.0)


@dataclass(frozen=True)
class HyperbolicContext:
    delta: float = field(default=DELTA, init=False)
    samples_per_segment: int = 256
    tolerance: float = 1e-9


def mobius_act(m: Matrix2C, p: PointH3) -> PointH3:
    cz_d = m.c * p.z + m.d
    den = abs(cz_d) ** 2 + abs(m.c) ** 2 * p.h ** 2
    if not (den > 0) or not math.isfinite(den):
        raise GeometryError("point escapes to boundary")
    z = ((m.a * p.z + m.b) * cz_d.conjugate() + m.a * m.c.conjugate() * p.h ** 2) / den
    return PointH3(z, p.h / den)


def dist_h3(p: PointH3, q: PointH3) -> float:
    r2 = abs(p.z - q.z) ** 2 + (p.h - q.h) ** 2
    return 2.0 * math.asinh(math.sqrt(r2) / (2.0 * math.sqrt(p.h * q.h)))


def translation_length_trace(m: Matrix2C) -> float:
    """2 arccosh(|trace|/2), clamped to 0 when |trace| <= 2."""
    tr = abs(m.trace())
    if tr <= 2:
        return 0.0
    return 2.0 * math.acosh(tr / 2.0)


# --- geodesics ----------------------------------------------------------------
# On the hyperboloid, the geodesic from X to Y is w1(s) X + w2(s) Y with
# w1 = sinh((1-s)d)/sinh d and w2 = sinh(sd)/sinh d. In half-space coordinates
# X0 - X3 = 1/h and X1 + i X2 = z/h, so both recover without cancellation.

def _dist_arrays(z1, h1, z2, h2):
    r2 = np.abs(z1 - z2) ** 2 + (h1 - h2) ** 2
    return 2.0 * np.arcsinh(np.sqrt(r2) / (2.0 * np.sqrt(h1 * h2)))


def geodesic_samples(p: PointH3, q: PointH3, s) -> tuple[np.ndarray, np.ndarray]:
    """Points at fractions s (array in [0, 1]) of the way from p to q, as (z, h) arrays."""
    s = np.asarray(s, dtype=float)
    dpq = dist_h3(p, q)
    if dpq == 0:
        return np.full(s.shape, p.z, dtype=complex), np.full(s.shape, p.h)
    sinh_d = math.sinh(dpq)
    w1 = np.sinh((1 - s) * dpq) / sinh_d
    w2 = np.sinh(s * dpq) / sinh_d
    inv_h = w1 / p.h + w2 / q.h
    z = (w1 * (p.z / p.h) + w2 * (q.z / q.h)) / inv_h
    return z, 1.0 / inv_h


def geodesic_point(p: PointH3, q: PointH3, s: float) -> PointH3:
    if s == 0 or p == q:
        return p
    if s == 1:
        return q
    z, h = geodesic_samples(p, q, np.array([s]))
    return PointH3(complex(z[0]), float(h[0]))


def exp_from(p: PointH3, direction, r: float) -> PointH3:
    """Point at distance r from p along a tangent direction (3-vector, any length)."""
    u = np.asarray(direction, dtype=float)
    u = u / np.linalg.norm(u)
    # From j: hyperboloid point cosh(r) e0 + sinh(r) u, with the vertical axis as e3.
    inv_h = 0.5 * (math.exp(r) * (1 - u[2]) + math.exp(-r) * (1 + u[2]))
    at_j = PointH3(complex(u[0], u[1]) * math.sinh(r) / inv_h, 1.0 / inv_h)
    # Transport j -> p by the similarity w -> p.h * w + p.z.
    s = math.sqrt(p.h)
    return mobius_act(Matrix2C(s, p.z / s, 0, 1 / s), at_j)


def displacement(m: Matrix2C, p: PointH3) -> float:
    return dist_h3(p, mobius_act(m, p))


def min_displacement_on_segment(m: Matrix2C, x: PointH3,
                                ctx: HyperbolicContext = HyperbolicContext()):
    """Minimize d(y, My) over uniformly spaced samples y of the segment [x, Mx]."""
    mx = mobius_act(m, x)
    n = ctx.samples_per_segment
    zs, hs = geodesic_samples(x, mx, np.linspace(0.0, 1.0, n))
    best = None
    for z, h in zip(zs, hs):
        y = PointH3(complex(z), float(h))
        d = displacement(m, y)
        if best is None or d < best[1]:
            best = (y, d)
    return best


# --- approximate centers ----------------------------------------------------

def r_s(mats, x: PointH3) -> float:
    """Max displacement of x over the generator matrices."""
    return max((displacement(m, x) for m in mats), default=0.0)


def _descend(mats, start: PointH3, max_iter: int = 2000):
    x, r = start, r_s(mats, start)
    history = [r]
    step = 1.0
    for it in range(max_iter):
        worst = max(mats, key=lambda m: displacement(m, x))
        try:
            target = geodesic_point(x, mobius_act(worst, x), 0.5)
            cand = geodesic_point(x, target, step)
            r_cand = r_s(mats, cand)
        except GeometryError:
            r_cand = math.inf
        if r_cand < r:
            x, r = cand, r_cand
        else:
            step /= 2
        if not (math.isfinite(r) and 1e-200 < x.h < 1e200):
            raise GeometryError(f"center search failed at iteration {it}: x={x}, r={r}")
        history.append(r)
        if step < 1e-9:
            break
        if len(history) > 50 and history[-51] - history[-1] < 0.01:
            break
    return x, r


def _polish(mats, x: PointH3, r: float, tol: float = 1e-9):
    """Nelder-Mead in (Re z, Im z, log h); kinks of the max objective stall plain descent."""
    def obj(v):
        try:
            return r_s(mats, PointH3(complex(v[0], v[1]), math.exp(v[2])))
        except GeometryError:
            return math.inf

    res = minimize(obj, [x.z.real, x.z.imag, math.log(x.h)], method="Nelder-Mead",
                   options={"xatol": 1e-6, "fatol": 1e-9, "maxiter": 4000})
    if res.fun < r - tol:
        v = res.x
        return PointH3(complex(v[0], v[1]), math.exp(v[2])), float(res.fun)
    return x, r


def approximate_center(mats, ctx: HyperbolicContext = HyperbolicContext(),
                       x0: PointH3 = BASEPOINT):
    """A point x with r_S(x) <= r_S(y) + 1 for all y (found to well within the slack).

    Multistart from x0 and 8 points at distance 1 around it; only strict
    improvements replace the incumbent, so ties resolve to the earliest start.
    """
    mats = list(mats)
    if not mats:
        raise ValueError("approximate_center needs at least one matrix")
    dirs = [(1, 0, 0), (-1, 0, 0), (0, 1, 0), (0, -1, 0), (0, 0, 1), (0, 0, -1),
            (1, 1, 1), (-1, -1, -1)]
    starts = [x0] + [exp_from(x0, d, 1.0) for d in dirs]
    best_x, best_r = x0, r_s(mats, x0)
    for s in starts:
        x, r = _descend(mats, s)
        x, r = _polish(mats, x, r)
        if r < best_r - ctx.tolerance:
            best_x, best_r = x, r
    return best_x, best_r


def center_oracle(mats, n_points: int = 10_000, x0: PointH3 = BASEPOINT,
                  half_width: float = 3.0, log_height: float = 3.0, seed: int = 0):
    """Best r_S over a scrambled Halton grid in a box around x0 (verification only)."""
    mats = list(mats)
    u = qmc.Halton(d=3, scramble=True, seed=seed).random(n_points)
    zs = x0.z + half_width * x0.h * ((2 * u[:, 0] - 1) + 1j * (2 * u[:, 1] - 1))
    hs = x0.h * np.exp(log_height * (2 * u[:, 2] - 1))
    r = np.zeros(n_points)
    for m in mats:
        cz_d = m.c * zs + m.d
        den = np.abs(cz_d) ** 2 + np.abs(m.c) ** 2 * hs ** 2
        mz = ((m.a * zs + m.b) * np.conj(cz_d) + m.a * np.conj(m.c) * hs ** 2) / den
        mh = hs / den
        r = np.maximum(r, _dist_arrays(zs, hs, mz, mh))
    k = int(np.argmin(r))
    return PointH3(complex(zs[k]), float(hs[k])), float(r[k])


# --- thin polygons --------------------------------------------------------------

def _distance_to_segment(z, h, p: PointH3, q: PointH3, lo, hi, iters: int = 60):
    """Min over s in [lo, hi] of d((z, h), geodesic(p, q, s)), elementwise.

    Distance to a geodesic is convex along it, so golden-section search is exact
    up to the iteration count.
    """
    g = (math.sqrt(5) - 1) / 2
    a, b = np.array(lo, dtype=float), np.array(hi, dtype=float)

    def f(s):
        zs, hs = geodesic_samples(p, q, s)
        return _dist_arrays(z, h, zs, hs)

    c, d = b - g * (b - a), a + g * (b - a)
    fc, fd = f(c), f(d)
    for _ in range(iters):
        left = fc < fd
        b = np.where(left, d, b)
        a = np.where(left, a, c)
        c_new, d_new = b - g * (b - a), a + g * (b - a)
        c, d = c_new, d_new
        fc, fd = f(c), f(d)
    return np.minimum(np.minimum(fc, fd), np.minimum(f(np.asarray(lo, float)), f(np.asarray(hi, float))))


def polygon_thinness_defect(points, ctx: HyperbolicContext = HyperbolicContext(),
                            max_spacing: float = 0.05) -> float:
    """Max over sampled side points of the distance to the union of the other sides.

    Nearest points on the other sides are located on a sample grid and then
    refined by a bracketed search, so overlapping sides give defect 0.
    """
    pts = list(points)
    n = len(pts)
    if n < 3:
        raise ValueError("a polygon needs at least 3 points")
    sides = []
    for k in range(n):
        p, q = pts[k], pts[(k + 1) % n]
        length = dist_h3(p, q)
        count = max(ctx.samples_per_segment, int(math.ceil(length / max_spacing)) + 1)
        s = np.linspace(0.0, 1.0, count)
        sides.append((p, q, s, *geodesic_samples(p, q, s)))
    defect = 0.0
    for k, (_, _, _, zk, hk) in enumerate(sides):
        nearest = np.full(zk.shape, np.inf)
        for j, (p, q, s, zj, hj) in enumerate(sides):
            if j == k:
                continue
            d = _dist_arrays(zk[:, None], hk[:, None], zj[None, :], hj[None, :])
            idx = d.argmin(axis=1)
            lo = s[np.maximum(idx - 1, 0)]
            hi = s[np.minimum(idx + 1, len(s) - 1)]
            nearest = np.minimum(nearest, _distance_to_segment(zk, hk, p, q, lo, hi))
        defect = max(defect, float(nearest.max()))
    return defect


def random_point_near(rng: np.random.Generator, center: PointH3, radius: float) -> PointH3:
    """Point at a uniformly random distance <= radius in a uniformly random direction."""
    return exp_from(center, rng.normal(size=3), rng.uniform(0, radius))
