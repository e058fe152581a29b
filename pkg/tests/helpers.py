"""Random samplers shared by the numeric tests."""
import cmath
import math

import numpy as np

from treelimits.h3 import Matrix2C


def random_complex(rng: np.random.Generator, bound: float) -> complex:
    return cmath.rect(bound * math.sqrt(rng.uniform()), rng.uniform(0, 2 * math.pi))


def random_sl2(rng: np.random.Generator, bound: float = 10.0) -> Matrix2C:
    """SL2(C) matrix with all entries of modulus <= bound (rejection sampling)."""
    while True:
        a, b, c = (random_complex(rng, bound) for _ in range(3))
        if abs(a) < 0.1:
            continue
        d = (1 + b * c) / a
        if abs(d) <= bound:
            return Matrix2C.sl2(a, b, c, d)


def random_loxodromic(rng: np.random.Generator, bound: float = 10.0) -> Matrix2C:
    while True:
        m = random_sl2(rng, bound)
        if abs(m.trace()) > 2.05:
            return m
