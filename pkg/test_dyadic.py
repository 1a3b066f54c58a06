"""
Test the dyadic decomposition of direction tallies and the class selection
"""

from fractions import Fraction

import pytest

from dyadic import DyadicClass, check_decomposition, dyadic_decompose, select_popular_class
from exactnum import GaussianRational
from setcore import ComplexSet, direction_tally


def g(re, im=0):
    return GaussianRational(Fraction(re), Fraction(im))


def test_ap3_classes():
    classes = dyadic_decompose(direction_tally(ComplexSet([1, 2, 3])))
    assert [c.k for c in classes] == [0, 1]
    assert len(classes[0]) == 6 and classes[0].mass == 6
    assert classes[1].members == [g(1)] and classes[1].mass == 9


def test_gp3_classes():
    classes = dyadic_decompose(direction_tally(ComplexSet([1, 2, 4])))
    assert set(classes[0].members) == {g(4), g(Fraction(1, 4))}
    assert classes[0].mass == 2
    assert set(classes[1].members) == {g(1), g(2), g(Fraction(1, 2))}
    assert classes[1].mass == 17
    assert classes[1].nu_min == 2 and classes[1].nu_max == 3


def test_singleton_has_one_class():
    classes = dyadic_decompose(direction_tally(ComplexSet([1])))
    assert len(classes) == 1
    assert classes[0].k == 0 and classes[0].mass == 1


def test_select_ap3():
    a = ComplexSet([1, 2, 3])
    verdict = select_popular_class(dyadic_decompose(direction_tally(a)), len(a))
    assert verdict.chosen.k == 1
    assert verdict.chosen.mass == 9
    assert verdict.provable_bound == Fraction(15, 2)
    assert verdict.provable_holds
    assert verdict.pigeonhole_holds
    # 9 >= 15 / (2 log2 3)
    assert verdict.log_bound_holds is True


def test_select_gp3():
    a = ComplexSet([1, 2, 4])
    verdict = select_popular_class(dyadic_decompose(direction_tally(a)), len(a))
    assert verdict.chosen.k == 1
    assert verdict.chosen.mass == 17
    assert verdict.chosen.mass >= Fraction(19, 2)
    assert verdict.provable_holds


def test_select_single_class():
    a = ComplexSet([1])
    verdict = select_popular_class(dyadic_decompose(direction_tally(a)), 1)
    assert verdict.chosen.mass == verdict.energy == 1
    assert verdict.provable_holds
    assert verdict.log_bound_holds is None


def test_ties_prefer_smaller_k():
    classes = [DyadicClass(k=2, members=[g(1)], mass=16, nu_min=4, nu_max=4),
               DyadicClass(k=0, members=[g(2), g(3)], mass=16, nu_min=1, nu_max=1)]
    assert select_popular_class(classes, 4).chosen.k == 0


def test_empty_inputs_raise():
    with pytest.raises(ValueError):
        select_popular_class([], 3)


def test_decomposition_invariants(corpus_set):
    """Partition, twofold comparability and mass accounting on the corpus"""
    tally = direction_tally(corpus_set)
    classes = dyadic_decompose(tally)
    assert check_decomposition(classes, tally) == []
    assert sum(c.mass for c in classes) == tally.energy
    assert all(c.twofold_comparable for c in classes)

    verdict = select_popular_class(classes, len(corpus_set))
    assert verdict.provable_holds
    assert verdict.pigeonhole_holds


def test_check_decomposition_flags_misplaced_direction():
    tally = direction_tally(ComplexSet([1, 2, 3]))
    classes = dyadic_decompose(tally)
    classes[0].members.append(g(1))
    violations = check_decomposition(classes, tally)
    assert any("outside class" in v for v in violations)
    assert any("in classes" in v for v in violations)
