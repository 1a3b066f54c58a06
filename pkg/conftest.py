"""
Shared fixtures: the set corpus used by the oracle and invariant tests
"""

from fractions import Fraction

import pytest
from hypothesis import strategies as st

from exactnum import GaussianRational
from set_families import arithmetic_progression, gaussian_grid, geometric_progression, random_set

GP_RATIOS = [
    GaussianRational.of(2),
    GaussianRational.of(3),
    GaussianRational.of(-2),
    GaussianRational.of(Fraction(1, 2)),
    GaussianRational(1, 1),
    GaussianRational(0, 2),
]


def build_corpus():
    """Over 200 sets with |A| <= 12 across every family"""
    corpus = []
    for n in range(1, 13):
        corpus.append((f"ap{n}", arithmetic_progression(n)))
    for ratio in GP_RATIOS:
        for n in range(1, 13):
            corpus.append((f"gp{n}[{ratio}]", geometric_progression(n, ratio)))
    for m in range(1, 4):
        corpus.append((f"grid{m}", gaussian_grid(m)))
    for seed in range(10):
        for n in range(1, 13):
            corpus.append((f"random{n}s{seed}", random_set(n, 10, seed)))
    return corpus


CORPUS = build_corpus()


@pytest.fixture(scope="session")
def corpus():
    return CORPUS


def pytest_generate_tests(metafunc):
    if "corpus_set" in metafunc.fixturenames:
        metafunc.parametrize("corpus_set", [a for _, a in CORPUS], ids=[name for name, _ in CORPUS])


# Small rationals keep the exact arithmetic quick under hypothesis
rationals = st.fractions(min_value=-20, max_value=20, max_denominator=12)
gaussians = st.builds(GaussianRational, rationals, rationals)
nonzero_gaussians = gaussians.filter(lambda z: not z.is_zero())
