"""
Dyadic Decomposition
Splits the range of nu into classes [2^k, 2^(k+1)) and selects the class
carrying the most energy
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional

from exactnum import GaussianRational, floor_log2, log2_at_least
from setcore import DirectionTally

logger = logging.getLogger(__name__)


@dataclass
class DyadicClass:
    """Directions t whose nu(t) lies in [2^k, 2^(k+1))"""
    k: int
    members: List[GaussianRational] = field(default_factory=list)
    mass: int = 0
    nu_min: int = 0
    nu_max: int = 0

    @property
    def twofold_comparable(self) -> bool:
        """max nu / min nu < 2, exactly"""
        return self.nu_max < 2 * self.nu_min

    def __len__(self) -> int:
        return len(self.members)


@dataclass
class PopularClassVerdict:
    """The selected class and the two lower bounds on its mass"""
    chosen: DyadicClass
    energy: int
    class_count: int
    provable_bound: Fraction           # E / (floor(log2|A|) + 1)
    provable_holds: bool
    pigeonhole_holds: bool             # mass * (nonempty classes) >= E
    log_bound_holds: Optional[bool]  # mass >= E / (2 log2|A|); None when |A| < 2

    def to_dict(self) -> dict:
        return {
            'k': self.chosen.k,
            'size': len(self.chosen),
            'mass': self.chosen.mass,
            'nu_min': self.chosen.nu_min,
            'nu_max': self.chosen.nu_max,
            'class_count': self.class_count,
            'provable_bound': self.provable_bound,
            'provable_holds': self.provable_holds,
            'pigeonhole_holds': self.pigeonhole_holds,
            'log_bound_holds': self.log_bound_holds,
        }


def dyadic_decompose(tally: DirectionTally) -> List[DyadicClass]:
    """
    Partition the directions of a tally by floor(log2 nu(t))

    Returns: Nonempty classes sorted by k; members in canonical order
    """
    if not tally.entries:
        raise ValueError("cannot decompose an empty tally")

    classes = {}
    for t in tally.directions:
        nu = tally.entries[t]
        k = floor_log2(nu)
        cls = classes.setdefault(k, DyadicClass(k=k, nu_min=nu, nu_max=nu))
        cls.members.append(t)
        cls.mass += nu * nu
        cls.nu_min = min(cls.nu_min, nu)
        cls.nu_max = max(cls.nu_max, nu)

    return [classes[k] for k in sorted(classes)]


def select_popular_class(classes: List[DyadicClass], a_size: int) -> PopularClassVerdict:
    """
    Pick the class of maximal mass (ties: smaller k) and report the bounds

    The provable bound divides E by the number of possible classes
    floor(log2|A|) + 1 (nu ranges over 1..|A|). The logarithmic bound
    E / (2 log2|A|) is decided exactly but only reported.
    """
    if not classes:
        raise ValueError("no dyadic classes to select from")

    chosen = min(classes, key=lambda c: (-c.mass, c.k))
    energy = sum(c.mass for c in classes)

    provable_bound = Fraction(energy, floor_log2(a_size) + 1)
    provable_holds = chosen.mass >= provable_bound
    pigeonhole_holds = chosen.mass * len(classes) >= energy

    log_bound_holds = None
    if a_size >= 2:
        # mass >= E / (2 log2|A|)  <=>  log2|A| >= E / (2 mass)
        log_bound_holds = log2_at_least(a_size, Fraction(energy, 2 * chosen.mass))

    logger.debug("dyadic: %d classes, chose k=%d with mass %d of E=%d",
                 len(classes), chosen.k, chosen.mass, energy)

    return PopularClassVerdict(
        chosen=chosen,
        energy=energy,
        class_count=len(classes),
        provable_bound=provable_bound,
        provable_holds=provable_holds,
        pigeonhole_holds=pigeonhole_holds,
        log_bound_holds=log_bound_holds,
    )


def check_decomposition(classes: List[DyadicClass], tally: DirectionTally) -> List[str]:
    """
    Check partition, per-class range and mass accounting

    Returns: List of violation messages (empty if consistent)
    """
    violations = []
    seen = {}
    for cls in classes:
        for t in cls.members:
            if t in seen:
                violations.append(f"direction {t} in classes {seen[t]} and {cls.k}")
            seen[t] = cls.k
            nu = tally.nu(t)
            if not (2 ** cls.k <= nu < 2 ** (cls.k + 1)):
                violations.append(f"nu({t}) = {nu} outside class k={cls.k}")
        if not cls.twofold_comparable:
            violations.append(f"class k={cls.k} has nu range {cls.nu_min}..{cls.nu_max}")

    missing = set(tally.entries) - set(seen)
    if missing:
        violations.append(f"{len(missing)} directions belong to no class")

    if sum(c.mass for c in classes) != tally.energy:
        violations.append("class masses do not sum to E")

    return violations
