"""
Family Sweeps
Certifies every member of a family over a size range and tabulates the
quantities of the sum-product bound, one row per instance
"""

import logging
import math
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import List, Optional, Union

import pandas as pd

from certify import certify, effective_numbers
from dyadic import dyadic_decompose, select_popular_class
from geom4 import GenericityExhausted
from pipeline_settings import PipelineSettings
from set_families import generate
from setcore import direction_tally, productset, sumset
from sphereplanar import HemisphereExhausted

logger = logging.getLogger(__name__)


@dataclass
class SweepRow:
    """One certified instance of a sweep"""
    family: str
    n: int
    set_size: int
    sumset_size: int
    productset_size: int
    energy: int
    class_mass: int
    theorem_constant: Optional[float]
    effective_exponent: Optional[float]
    globally_injective: bool
    retries_used: int


CSV_COLUMNS = [
    'family', 'n', 'set_size', 'sumset_size', 'productset_size', 'energy',
    'class_mass', 'theorem_constant', 'effective_exponent',
    'globally_injective', 'retries_used',
]


def sweep_sizes(family: str, n_min: int, n_max: int) -> List[int]:
    """Sizes to visit; grid only takes perfect squares"""
    sizes = list(range(max(1, n_min), n_max + 1))
    if family == "grid":
        sizes = [n for n in sizes if math.isqrt(n) ** 2 == n]
    return sizes


def run_sweep(family: str, n_min: int, n_max: int, seed: int = 0,
              settings: Optional[PipelineSettings] = None, ratio=None,
              bound: Optional[int] = None) -> List[SweepRow]:
    """
    Certify each instance with seed + row index

    A pipeline that exhausts its sampling budget yields a row with
    globally_injective False and the budget as retries_used.
    """
    settings = settings or PipelineSettings()
    rows = []
    for index, n in enumerate(sweep_sizes(family, n_min, n_max)):
        row_seed = seed + index
        a = generate(family, n, ratio=ratio, bound=bound, seed=row_seed)
        try:
            cert = certify(a, seed=row_seed, settings=settings)
        except (GenericityExhausted, HemisphereExhausted) as e:
            logger.warning("%s n=%d: %s", family, n, e)
            rows.append(_exhausted_row(family, n, a, settings))
            continue

        rows.append(SweepRow(
            family=family,
            n=n,
            set_size=len(a),
            sumset_size=cert.sumset_size,
            productset_size=cert.productset_size,
            energy=cert.energy,
            class_mass=cert.class_mass,
            theorem_constant=cert.effective_constant,
            effective_exponent=cert.effective_exponent,
            globally_injective=cert.globally_injective,
            retries_used=cert.attempts_used,
        ))
        logger.info("%s n=%d: |A+A|=%d |A*A|=%d injective=%s",
                    family, n, cert.sumset_size, cert.productset_size, cert.globally_injective)
    return rows


def _exhausted_row(family: str, n: int, a, settings: PipelineSettings) -> SweepRow:
    tally = direction_tally(a)
    sum_size, prod_size = len(sumset(a)), len(productset(a))
    chosen = select_popular_class(dyadic_decompose(tally), len(a)).chosen
    constant, exponent = effective_numbers(len(a), sum_size, prod_size)
    return SweepRow(family=family, n=n, set_size=len(a), sumset_size=sum_size,
                    productset_size=prod_size, energy=tally.energy, class_mass=chosen.mass,
                    theorem_constant=constant, effective_exponent=exponent,
                    globally_injective=False, retries_used=settings.retries)


def sweep_dataframe(rows: List[SweepRow]) -> pd.DataFrame:
    return pd.DataFrame([asdict(r) for r in rows], columns=CSV_COLUMNS)


def format_sweep_csv(rows: List[SweepRow]) -> str:
    """CSV text with the fixed header, rows in index order"""
    return sweep_dataframe(rows).to_csv(index=False, lineterminator="\n")


def write_sweep_csv(rows: List[SweepRow], path: Union[str, Path]) -> bool:
    try:
        with open(path, 'w', newline='') as f:
            f.write(format_sweep_csv(rows))
        return True
    except OSError as e:
        logger.error("Error writing sweep CSV: %s", e)
        return False


def exponent_trend(rows: List[SweepRow]) -> pd.Series:
    """Effective exponent by |A|, skipping sizes where it is undefined"""
    frame = sweep_dataframe(rows).dropna(subset=['effective_exponent'])
    return frame.set_index('set_size')['effective_exponent']


__all__ = [
    'SweepRow', 'CSV_COLUMNS', 'run_sweep', 'sweep_dataframe',
    'format_sweep_csv', 'write_sweep_csv', 'exponent_trend', 'sweep_sizes',
]
