"""
Set Files
Parses and prints set files: one Gaussian rational per line, '#' comments
"""

import logging
import re
from fractions import Fraction
from pathlib import Path
from typing import Dict, List, Optional, Union

from exactnum import GaussianRational, format_gaussian
from setcore import ComplexSet

logger = logging.getLogger(__name__)

# rat ::= ['-'] digits ['/' digits]
_RAT = r'-?\d+(?:/\d+)?'
_REAL = re.compile(rf'^(?P<re>{_RAT})$')
_IMAG = re.compile(rf'^(?P<im>{_RAT})?i$')
_COMPLEX = re.compile(rf'^(?P<re>{_RAT})(?P<sign>[+-])(?P<im>{_RAT})?i$')


class SetFileParseError(ValueError):
    """A set file line that is malformed, zero, or a duplicate"""

    def __init__(self, message: str, line_number: Optional[int] = None, source: str = "<string>"):
        location = f"{source}:{line_number}: " if line_number is not None else f"{source}: "
        super().__init__(location + message)
        self.line_number = line_number
        self.source = source


def _rational(text: str) -> Fraction:
    numerator, _, denominator = text.partition('/')
    if denominator and int(denominator) == 0:
        raise ValueError(f"zero denominator in {text!r}")
    return Fraction(int(numerator), int(denominator) if denominator else 1)


def parse_gaussian(text: str) -> GaussianRational:
    """
    Parse one term of the grammar: '3', '-1/2', 'i', '2/3i', '1+2i', '1-i'

    Raises: ValueError on anything else
    """
    text = text.strip()

    match = _REAL.match(text)
    if match:
        return GaussianRational(_rational(match['re']), Fraction(0))

    match = _IMAG.match(text)
    if match:
        im = _rational(match['im']) if match['im'] else Fraction(1)
        return GaussianRational(Fraction(0), im)

    match = _COMPLEX.match(text)
    if match:
        im = _rational(match['im']) if match['im'] else Fraction(1)
        if match['sign'] == '-':
            im = -im
        return GaussianRational(_rational(match['re']), im)

    raise ValueError(f"not a Gaussian rational: {text!r}")


def parse_set_text(text: str, source: str = "<string>") -> ComplexSet:
    """
    Parse a whole set file

    Raises: SetFileParseError with the line number for bad syntax, a literal
    zero, or a value already given on an earlier line; without one when the
    file holds no elements at all
    """
    first_seen: Dict[GaussianRational, int] = {}
    values: List[GaussianRational] = []

    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split('#', 1)[0].strip()
        if not line:
            continue
        try:
            value = parse_gaussian(line)
        except ValueError as e:
            raise SetFileParseError(str(e), number, source) from e

        if value.is_zero():
            raise SetFileParseError("0 is not allowed in a set", number, source)
        if value in first_seen:
            raise SetFileParseError(
                f"duplicate element {format_gaussian(value)} (first on line {first_seen[value]})",
                number, source)

        first_seen[value] = number
        values.append(value)

    if not values:
        raise SetFileParseError("set file has no elements", source=source)
    return ComplexSet(values)


def load_set_file(path: Union[str, Path]) -> ComplexSet:
    """Read and parse a set file"""
    path = Path(path)
    with open(path, 'r') as f:
        return parse_set_text(f.read(), source=str(path))


def format_set_file(a: ComplexSet, comment: Optional[str] = None) -> str:
    """One canonical element per line, with an optional leading comment block"""
    lines = []
    if comment:
        lines.extend(f"# {line}" for line in comment.splitlines())
    lines.extend(format_gaussian(z) for z in a)
    return "\n".join(lines) + "\n"


def save_set_file(a: ComplexSet, path: Union[str, Path], comment: Optional[str] = None) -> bool:
    """Save a set file"""
    try:
        with open(path, 'w') as f:
            f.write(format_set_file(a, comment))
        return True
    except OSError as e:
        logger.error("Error saving set file: %s", e)
        return False
