"""
Set Core
Finite sets of Gaussian rationals, sumsets, product sets, direction tallies
and multiplicative energy
"""

import hashlib
import logging
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, FrozenSet, Iterable, List, Union

from exactnum import GaussianRational, Scalar, format_gaussian

logger = logging.getLogger(__name__)

DEFAULT_ORACLE_CAP = 16


class ZeroElementError(ValueError):
    """Raised when a set would contain 0 (every ratio a1/a2 must be defined)"""


class OracleCapExceeded(ValueError):
    """Raised when the O(|A|^4) energy oracle is asked for a set above its cap"""

    def __init__(self, size: int, cap: int):
        super().__init__(f"energy oracle capped at |A| <= {cap}, got |A| = {size}; "
                         f"use direction_tally instead")
        self.size = size
        self.cap = cap


class ComplexSet:
    """A finite set A of nonzero Gaussian rationals in canonical order"""

    def __init__(self, values: Iterable[Union[Scalar, GaussianRational]]):
        """
        Build the set, deduplicating and sorting by the canonical key

        Raises: ZeroElementError if 0 is among the values
        """
        elements = {GaussianRational.of(v) for v in values}
        if GaussianRational.of(0) in elements:
            raise ZeroElementError("0 is not allowed in A: ratios a1/a2 need a2 != 0")
        self._elements = tuple(sorted(elements, key=GaussianRational.sort_key))
        self._members = frozenset(self._elements)

    @property
    def elements(self) -> List[GaussianRational]:
        return list(self._elements)

    def __len__(self) -> int:
        return len(self._elements)

    def __iter__(self):
        return iter(self._elements)

    def __contains__(self, item) -> bool:
        return GaussianRational.of(item) in self._members

    def __eq__(self, other) -> bool:
        if not isinstance(other, ComplexSet):
            return NotImplemented
        return self._elements == other._elements

    def __hash__(self):
        return hash(self._elements)

    def __repr__(self):
        shown = ", ".join(format_gaussian(z) for z in self._elements[:8])
        more = ", ..." if len(self) > 8 else ""
        return f"ComplexSet({{{shown}{more}}})"

    def scaled(self, factor: Union[Scalar, GaussianRational]) -> 'ComplexSet':
        """The dilate factor*A (factor != 0)"""
        factor = GaussianRational.of(factor)
        return ComplexSet(factor * a for a in self._elements)

    @property
    def is_real(self) -> bool:
        return all(a.is_real() for a in self._elements)

    def digest(self) -> str:
        """SHA-256 over the canonical element strings, one per line"""
        text = "\n".join(format_gaussian(a) for a in self._elements)
        return hashlib.sha256(text.encode('utf-8')).hexdigest()


def sumset(a: ComplexSet) -> FrozenSet[GaussianRational]:
    """A + A, exact and deduplicated (may contain 0)"""
    elements = a.elements
    return frozenset(x + y for i, x in enumerate(elements) for y in elements[i:])


def productset(a: ComplexSet) -> FrozenSet[GaussianRational]:
    """A * A, exact and deduplicated"""
    elements = a.elements
    return frozenset(x * y for i, x in enumerate(elements) for y in elements[i:])


@dataclass
class DirectionTally:
    """The map t -> nu(t) over ordered pairs (a1, a2) with a1/a2 = t, plus E(A)"""
    entries: Dict[GaussianRational, int]
    energy: int
    set_size: int = 0

    def nu(self, t: GaussianRational) -> int:
        return self.entries.get(t, 0)

    @property
    def directions(self) -> List[GaussianRational]:
        """The key set T in canonical order"""
        return sorted(self.entries, key=GaussianRational.sort_key)

    def __len__(self) -> int:
        return len(self.entries)


def direction_tally(a: ComplexSet) -> DirectionTally:
    """
    Tally every ordered pair (a1, a2) by its ratio t = a1/a2

    Returns: DirectionTally with energy = sum of nu(t)^2
    """
    elements = a.elements
    counts = Counter(x / y for x in elements for y in elements)
    entries = {t: counts[t] for t in sorted(counts, key=GaussianRational.sort_key)}
    energy = sum(v * v for v in entries.values())
    logger.debug("direction tally: |A|=%d, |T|=%d, E=%d", len(a), len(entries), energy)
    return DirectionTally(entries=entries, energy=energy, set_size=len(a))


def energy_oracle(a: ComplexSet, cap: int = DEFAULT_ORACLE_CAP) -> int:
    """
    Count ordered quadruples with a1/a2 = a3/a4 by direct enumeration

    Cross-multiplied (a1*a4 == a3*a2) so the oracle shares no division code
    with direction_tally.

    Raises: OracleCapExceeded when |A| > cap
    """
    if len(a) > cap:
        raise OracleCapExceeded(len(a), cap)

    elements = a.elements
    products = [[x * y for y in elements] for x in elements]
    keys = [[p.sort_key() for p in row] for row in products]
    n = len(elements)
    count = 0
    for i1 in range(n):
        left = keys[i1]
        for i3 in range(n):
            right = keys[i3]
            for i2 in range(n):
                for i4 in range(n):
                    # a1/a2 == a3/a4  <=>  a1*a4 == a3*a2
                    if left[i4] == right[i2]:
                        count += 1
    return count


@dataclass
class CauchySchwarzVerdict:
    """E(A) against |A|^4 / |A*A|"""
    energy: int
    bound: Fraction
    holds: bool

    def to_dict(self) -> dict:
        return {'energy': self.energy, 'bound': self.bound, 'holds': self.holds}


def cauchy_schwarz_check(tally: DirectionTally, a: ComplexSet,
                         productset_size: int) -> CauchySchwarzVerdict:
    """
    Check E >= |A|^4 / |A*A| exactly

    This is a theorem: a False verdict means an implementation bug.
    """
    bound = Fraction(len(a) ** 4, productset_size)
    holds = tally.energy >= bound
    if not holds:
        logger.error("Cauchy-Schwarz violated: E=%d < %s", tally.energy, bound)
    return CauchySchwarzVerdict(energy=tally.energy, bound=bound, holds=holds)


def check_tally(tally: DirectionTally, a: ComplexSet) -> List[str]:
    """
    Check the structural invariants of a direction tally

    Returns: List of violation messages (empty if consistent)
    """
    violations = []
    n = len(a)
    one = GaussianRational.of(1)

    total = sum(tally.entries.values())
    if total != n * n:
        violations.append(f"sum of nu(t) is {total}, expected |A|^2 = {n * n}")

    energy = sum(v * v for v in tally.entries.values())
    if energy != tally.energy:
        violations.append(f"energy field {tally.energy} != sum of nu^2 = {energy}")

    if n and tally.nu(one) != n:
        violations.append(f"nu(1) is {tally.nu(one)}, expected |A| = {n}")

    for t, count in tally.entries.items():
        if count > n:
            violations.append(f"nu({t}) = {count} exceeds |A| = {n}")
        inverse = one / t
        if tally.nu(inverse) != count:
            violations.append(f"nu({t}) = {count} but nu(1/t) = {tally.nu(inverse)}")

    return violations
