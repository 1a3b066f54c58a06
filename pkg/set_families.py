"""
Set Families
Generators for the test corpora: arithmetic and geometric progressions,
Gaussian grids and seeded random sets
"""

import math
import random
from fractions import Fraction
from typing import Optional, Union

from exactnum import GaussianRational
from setcore import ComplexSet

FAMILIES = ("ap", "gp", "grid", "random")

DEFAULT_RATIO = GaussianRational.of(2)
DEFAULT_BOUND = 10


class FamilyParameterError(ValueError):
    """Invalid size or parameter for a set family"""


def arithmetic_progression(n: int) -> ComplexSet:
    """{1, 2, ..., n}"""
    return ComplexSet(range(1, n + 1))


def geometric_progression(n: int, ratio: GaussianRational) -> ComplexSet:
    """
    {r, r^2, ..., r^n}

    Raises: FamilyParameterError for r in {0, 1, -1} or when powers repeat
    (r a root of unity such as i)
    """
    if ratio in (GaussianRational.of(0), GaussianRational.of(1), GaussianRational.of(-1)):
        raise FamilyParameterError(f"gp ratio must not be 0 or +-1, got {ratio}")
    powers = [ratio ** k for k in range(1, n + 1)]
    if len(set(powers)) != n:
        raise FamilyParameterError(f"powers of {ratio} repeat within n={n}")
    return ComplexSet(powers)


def gaussian_grid(m: int) -> ComplexSet:
    """{a + b i : 1 <= a, b <= m}"""
    return ComplexSet(GaussianRational(a, b) for a in range(1, m + 1) for b in range(1, m + 1))


def random_set(n: int, bound: int, seed: int) -> ComplexSet:
    """
    n distinct nonzero Gaussian rationals, numerators in [-M, M] and
    denominators in [-M, M] minus 0, rejection-sampled from the seed

    Raises: FamilyParameterError when n distinct values cannot be found
    """
    if bound < 1:
        raise FamilyParameterError(f"random bound must be >= 1, got {bound}")
    rng = random.Random(seed)
    denominators = [d for d in range(-bound, bound + 1) if d != 0]

    def draw() -> Fraction:
        return Fraction(rng.randint(-bound, bound), rng.choice(denominators))

    chosen = set()
    budget = 1000 * n
    while len(chosen) < n and budget > 0:
        budget -= 1
        z = GaussianRational(draw(), draw())
        if z.is_zero() or z in chosen:
            continue
        chosen.add(z)
    if len(chosen) < n:
        raise FamilyParameterError(f"could not draw {n} distinct values with bound {bound}")
    return ComplexSet(chosen)


def generate(family: str, n: int, ratio: Optional[Union[int, GaussianRational]] = None,
             bound: Optional[int] = None, seed: int = 0) -> ComplexSet:
    """
    Build a member of a family

    grid takes n = m^2 and returns the m x m grid.
    """
    if n < 1:
        raise FamilyParameterError(f"n must be >= 1, got {n}")

    if family == "ap":
        return arithmetic_progression(n)
    if family == "gp":
        ratio = DEFAULT_RATIO if ratio is None else GaussianRational.of(ratio)
        return geometric_progression(n, ratio)
    if family == "grid":
        m = math.isqrt(n)
        if m * m != n:
            raise FamilyParameterError(f"grid needs n = m^2, got n={n}")
        return gaussian_grid(m)
    if family == "random":
        return random_set(n, DEFAULT_BOUND if bound is None else bound, seed)

    raise FamilyParameterError(f"unknown family {family!r}; choose from {', '.join(FAMILIES)}")
