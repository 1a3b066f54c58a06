"""
Test sumsets, product sets, direction tallies and the energy oracle
"""

from fractions import Fraction

import pytest

from exactnum import GaussianRational
from setcore import (
    ComplexSet, OracleCapExceeded, ZeroElementError, cauchy_schwarz_check,
    check_tally, direction_tally, energy_oracle, productset, sumset,
)

I = GaussianRational.unit()


def g(re, im=0):
    return GaussianRational(Fraction(re), Fraction(im))


def test_set_rejects_zero_and_dedupes():
    with pytest.raises(ZeroElementError):
        ComplexSet([1, 0, 2])
    a = ComplexSet([3, 1, Fraction(6, 2), 2])
    assert len(a) == 3
    assert a.elements == [g(1), g(2), g(3)]
    assert 3 in a
    assert 4 not in a


def test_sumset_examples():
    assert sumset(ComplexSet([1])) == {g(2)}
    assert sumset(ComplexSet([1, 2, 3])) == {g(k) for k in range(2, 7)}
    assert sumset(ComplexSet([1, I])) == {g(2), g(1, 1), g(0, 2)}


def test_sumset_may_contain_zero():
    assert g(0) in sumset(ComplexSet([1, -1]))


def test_productset_examples():
    assert productset(ComplexSet([1, 2, 3])) == {g(k) for k in (1, 2, 3, 4, 6, 9)}
    assert productset(ComplexSet([1, I])) == {g(1), I, g(-1)}
    assert productset(ComplexSet([1])) == {g(1)}


def test_tally_ap3():
    tally = direction_tally(ComplexSet([1, 2, 3]))
    assert tally.nu(g(1)) == 3
    for t in (g(2), g(Fraction(1, 2)), g(3), g(Fraction(1, 3)), g(Fraction(3, 2)), g(Fraction(2, 3))):
        assert tally.nu(t) == 1
    assert len(tally) == 7
    assert tally.energy == 15


def test_tally_gp3():
    tally = direction_tally(ComplexSet([1, 2, 4]))
    assert tally.nu(g(1)) == 3
    assert tally.nu(g(2)) == tally.nu(g(Fraction(1, 2))) == 2
    assert tally.nu(g(4)) == tally.nu(g(Fraction(1, 4))) == 1
    assert tally.energy == 19


def test_tally_one_and_i():
    tally = direction_tally(ComplexSet([1, I]))
    assert tally.nu(g(1)) == 2
    assert tally.nu(I) == tally.nu(-I) == 1
    assert tally.energy == 6


def test_tally_directions_are_canonically_ordered():
    tally = direction_tally(ComplexSet([1, 2, 3]))
    keys = [t.sort_key() for t in tally.directions]
    assert keys == sorted(keys)


def test_oracle_examples():
    assert energy_oracle(ComplexSet([1, 2, 3])) == 15
    assert energy_oracle(ComplexSet([1])) == 1
    assert energy_oracle(ComplexSet([1, I])) == 6


def test_oracle_cap():
    with pytest.raises(OracleCapExceeded):
        energy_oracle(ComplexSet(range(1, 18)))
    assert energy_oracle(ComplexSet(range(1, 5)), cap=4) == direction_tally(ComplexSet(range(1, 5))).energy
    with pytest.raises(OracleCapExceeded):
        energy_oracle(ComplexSet(range(1, 5)), cap=3)


def test_oracle_equivalence(corpus_set):
    """Tally energy equals brute-force quadruple counting on the whole corpus"""
    assert direction_tally(corpus_set).energy == energy_oracle(corpus_set, cap=12)


def test_tally_invariants(corpus_set):
    tally = direction_tally(corpus_set)
    assert check_tally(tally, corpus_set) == []
    n = len(corpus_set)
    assert n * n <= tally.energy <= n ** 3


def test_cauchy_schwarz(corpus_set):
    tally = direction_tally(corpus_set)
    verdict = cauchy_schwarz_check(tally, corpus_set, len(productset(corpus_set)))
    assert verdict.holds


def test_cauchy_schwarz_examples():
    a = ComplexSet([1, 2, 3])
    verdict = cauchy_schwarz_check(direction_tally(a), a, 6)
    assert verdict.bound == Fraction(27, 2)
    assert verdict.holds

    a = ComplexSet([1, 2, 4])
    verdict = cauchy_schwarz_check(direction_tally(a), a, len(productset(a)))
    assert verdict.bound == Fraction(81, 5)
    assert verdict.holds


def test_check_tally_reports_tampering():
    a = ComplexSet([1, 2, 3])
    tally = direction_tally(a)
    tally.entries[g(2)] = 2
    violations = check_tally(tally, a)
    assert any("expected |A|^2" in v for v in violations)
    assert any("1/t" in v for v in violations)


def test_scaling_invariance():
    """E and all sizes are unchanged under A -> lambda A"""
    a = ComplexSet([1, 2, 3, 5])
    for factor in (g(2), g(1, 1), g(Fraction(-1, 3), 2)):
        b = a.scaled(factor)
        assert direction_tally(b).energy == direction_tally(a).energy
        assert len(sumset(b)) == len(sumset(a))
        assert len(productset(b)) == len(productset(a))


def test_real_sets_have_real_sums_and_products():
    a = ComplexSet([1, 2, Fraction(7, 3)])
    assert a.is_real
    assert all(z.is_real() for z in sumset(a))
    assert all(z.is_real() for z in productset(a))
    assert not ComplexSet([1, I]).is_real


def test_digest_depends_only_on_the_set():
    assert ComplexSet([2, 1]).digest() == ComplexSet([1, 2, 2]).digest()
    assert ComplexSet([1, 2]).digest() != ComplexSet([1, 3]).digest()
