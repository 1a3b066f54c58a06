"""
Exact Number Kernel
Rationals, Gaussian rationals over sympy's QQ_I field and small exact
linear algebra (dimensions 2-4)
"""

from fractions import Fraction
from functools import total_ordering
from typing import Iterable, List, Sequence, Tuple, Union

from sympy import QQ, QQ_I
from sympy.polys.matrices import DomainMatrix

# Rational is the stdlib Fraction: lowest terms, positive denominator, 0 == 0/1
Rational = Fraction
Vec2Q = Tuple[Fraction, Fraction]
Vec3Q = Tuple[Fraction, Fraction, Fraction]
Vec4Q = Tuple[Fraction, Fraction, Fraction, Fraction]

Scalar = Union[int, Fraction]


def to_qq(q: Scalar):
    """Fraction or int as an element of sympy's QQ"""
    q = Fraction(q)
    return QQ(q.numerator, q.denominator)


def from_qq(q) -> Fraction:
    """Element of QQ (python or gmpy backed) as a Fraction"""
    return Fraction(int(q.numerator), int(q.denominator))


@total_ordering
class GaussianRational:
    """
    An exact element re + im*i of Q(i)

    Arithmetic is done by the wrapped QQ_I element; re and im are exposed as
    Fractions. Ordering is the canonical sort_key, not a numeric order.
    """
    __slots__ = ('_z',)

    def __init__(self, re: Scalar = 0, im: Scalar = 0):
        self._z = QQ_I(to_qq(re), to_qq(im))

    @classmethod
    def _wrap(cls, z) -> 'GaussianRational':
        obj = cls.__new__(cls)
        obj._z = z
        return obj

    @classmethod
    def of(cls, value: Union[Scalar, 'GaussianRational']) -> 'GaussianRational':
        """Coerce an int, Fraction or GaussianRational"""
        if isinstance(value, GaussianRational):
            return value
        return cls(value, 0)

    @classmethod
    def unit(cls) -> 'GaussianRational':
        """The imaginary unit i"""
        return cls(0, 1)

    @property
    def re(self) -> Fraction:
        return from_qq(self._z.x)

    @property
    def im(self) -> Fraction:
        return from_qq(self._z.y)

    @property
    def element(self):
        """The underlying QQ_I element"""
        return self._z

    @staticmethod
    def _coerce(other):
        if isinstance(other, GaussianRational):
            return other._z
        if isinstance(other, (int, Fraction)):
            return QQ_I(to_qq(other), QQ.zero)
        return None

    def __add__(self, other):
        z = self._coerce(other)
        if z is None:
            return NotImplemented
        return GaussianRational._wrap(self._z + z)

    __radd__ = __add__

    def __neg__(self):
        return GaussianRational._wrap(-self._z)

    def __sub__(self, other):
        z = self._coerce(other)
        if z is None:
            return NotImplemented
        return GaussianRational._wrap(self._z - z)

    def __rsub__(self, other):
        z = self._coerce(other)
        if z is None:
            return NotImplemented
        return GaussianRational._wrap(z - self._z)

    def __mul__(self, other):
        z = self._coerce(other)
        if z is None:
            return NotImplemented
        return GaussianRational._wrap(self._z * z)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if self._coerce(other) is None:
            return NotImplemented
        return gq_div(self, GaussianRational.of(other))

    def __rtruediv__(self, other):
        if self._coerce(other) is None:
            return NotImplemented
        return gq_div(GaussianRational.of(other), self)

    def __pow__(self, exponent: int) -> 'GaussianRational':
        if exponent == 0:
            return GaussianRational(1)
        if exponent < 0 and self.is_zero():
            raise ZeroDivisionError("negative power of zero Gaussian rational")
        return GaussianRational._wrap(self._z ** exponent)

    def __eq__(self, other):
        if not isinstance(other, GaussianRational):
            return NotImplemented
        return self._z == other._z

    def __hash__(self):
        return hash(self._z)

    def conjugate(self) -> 'GaussianRational':
        return GaussianRational._wrap(QQ_I.new(self._z.x, -self._z.y))

    def norm(self) -> Fraction:
        """Squared modulus re^2 + im^2 (exact)"""
        return from_qq(self._z.x * self._z.x + self._z.y * self._z.y)

    def is_zero(self) -> bool:
        return not self._z

    def is_real(self) -> bool:
        return not self._z.y

    def sort_key(self) -> Tuple[int, int, int, int]:
        """Canonical integer tuple; lexicographic order on it is the total order"""
        re, im = self.re, self.im
        return (re.numerator, re.denominator, im.numerator, im.denominator)

    def __lt__(self, other: 'GaussianRational') -> bool:
        if not isinstance(other, GaussianRational):
            return NotImplemented
        return self.sort_key() < other.sort_key()

    def __str__(self):
        return format_gaussian(self)

    def __repr__(self):
        return f"GaussianRational({format_gaussian(self)})"


def format_rational(q: Fraction) -> str:
    """Print as 'p/q', omitting '/q' when q == 1"""
    q = Fraction(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def format_gaussian(z: GaussianRational) -> str:
    """
    Print in the set-file grammar: '3', '-1/2i', 'i', '-1i', '1+2i', '2/3-i'

    Returns: canonical string; parse(format(z)) == z
    """
    re, im = z.re, z.im
    if im == 0:
        return format_rational(re)

    if im == 1:
        imag = "i"
    elif im == -1:
        imag = "-i"
    else:
        imag = f"{format_rational(im)}i"

    if re == 0:
        # A bare term has no sign in the grammar: -i is written -1i
        return "-1i" if im == -1 else imag
    if imag.startswith('-'):
        return f"{format_rational(re)}{imag}"
    return f"{format_rational(re)}+{imag}"


def gq_div(a: GaussianRational, b: GaussianRational) -> GaussianRational:
    """
    Exact a / b in Q(i)

    Raises: ZeroDivisionError when b == 0
    """
    if b.is_zero():
        raise ZeroDivisionError(f"division of {a} by zero Gaussian rational")
    return GaussianRational._wrap(a.element / b.element)


# ---------------------------------------------------------------------------
# Vectors
# ---------------------------------------------------------------------------

def vec(*components: Scalar) -> Tuple[Fraction, ...]:
    """Build an exact vector from ints/Fractions"""
    return tuple(Fraction(c) for c in components)


def dot(u: Sequence[Fraction], v: Sequence[Fraction]) -> Fraction:
    return sum((a * b for a, b in zip(u, v)), Fraction(0))


def vadd(u: Sequence[Fraction], v: Sequence[Fraction]) -> Tuple[Fraction, ...]:
    return tuple(a + b for a, b in zip(u, v))


def vsub(u: Sequence[Fraction], v: Sequence[Fraction]) -> Tuple[Fraction, ...]:
    return tuple(a - b for a, b in zip(u, v))


def vscale(c: Scalar, v: Sequence[Fraction]) -> Tuple[Fraction, ...]:
    return tuple(c * a for a in v)


def is_zero_vec(v: Sequence[Fraction]) -> bool:
    return all(a == 0 for a in v)


def direction_key(v: Sequence[Fraction]) -> Tuple[Fraction, ...]:
    """
    Canonical representative of the line spanned by v (first nonzero entry is 1)

    Two nonzero vectors are proportional iff their keys are equal.
    """
    for a in v:
        if a != 0:
            return tuple(b / a for b in v)
    raise ValueError("zero vector spans no line")


def positive_direction_key(v: Sequence[Fraction]) -> Tuple[Fraction, ...]:
    """Representative of the ray spanned by v (first nonzero entry is +1 or -1)"""
    for a in v:
        if a != 0:
            return tuple(b / abs(a) for b in v)
    raise ValueError("zero vector spans no ray")


def cross3(u: Sequence[Fraction], v: Sequence[Fraction]) -> Vec3Q:
    return (u[1] * v[2] - u[2] * v[1],
            u[2] * v[0] - u[0] * v[2],
            u[0] * v[1] - u[1] * v[0])


def complement_basis(normal: Sequence[Fraction]) -> Tuple[int, List[Tuple[Fraction, ...]]]:
    """
    Rational basis of the orthogonal complement of a nonzero vector

    Pivots on the last nonzero entry j of normal; the basis vectors are
    e_k - (normal_k / normal_j) e_j for k != j, so the coordinates of any
    vector of the complement are simply its entries with index != j.

    Returns: (pivot index j, basis vectors)
    """
    pivot = max(k for k, a in enumerate(normal) if a != 0)
    basis = []
    for k in range(len(normal)):
        if k == pivot:
            continue
        b = [Fraction(0)] * len(normal)
        b[k] = Fraction(1)
        b[pivot] = -Fraction(normal[k]) / normal[pivot]
        basis.append(tuple(b))
    return pivot, basis



# ---------------------------------------------------------------------------
# Determinants and rank
# ---------------------------------------------------------------------------

def _domain_matrix(rows: Sequence[Sequence[Scalar]], width: int) -> DomainMatrix:
    entries = [[to_qq(a) for a in row] for row in rows]
    if any(len(row) != width for row in entries):
        raise ValueError(f"every row needs {width} entries")
    return DomainMatrix(entries, (len(entries), width), QQ)


def _det(rows: Sequence[Sequence[Scalar]]) -> Fraction:
    """Exact determinant over QQ"""
    size = len(rows)
    if any(len(row) != size for row in rows):
        raise ValueError(f"determinant needs a square matrix, got {size} rows")
    return from_qq(_domain_matrix(rows, size).det())


def det2(rows: Sequence[Sequence[Scalar]]) -> Fraction:
    (a, b), (c, d) = rows
    return Fraction(a) * d - Fraction(b) * c


def det3(rows: Sequence[Sequence[Scalar]]) -> Fraction:
    if len(rows) != 3:
        raise ValueError("det3 needs exactly 3 rows")
    return _det(rows)


def det4(rows: Sequence[Sequence[Scalar]]) -> Fraction:
    if len(rows) != 4:
        raise ValueError("det4 needs exactly 4 rows")
    return _det(rows)


def rank(vectors: Iterable[Sequence[Scalar]]) -> int:
    """Exact rank of a list of vectors over QQ"""
    rows = list(vectors)
    if not rows:
        return 0
    return _domain_matrix(rows, len(rows[0])).rank()


def orient2(a: Vec2Q, b: Vec2Q, c: Vec2Q) -> Fraction:
    """Twice the signed area of triangle abc; > 0 when c is left of a->b"""
    return (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])


# ---------------------------------------------------------------------------
# Exact logarithm comparisons
# ---------------------------------------------------------------------------

def floor_log2(n: int) -> int:
    if n < 1:
        raise ValueError(f"floor_log2 needs n >= 1, got {n}")
    return n.bit_length() - 1


def log2_at_least(n: int, r: Scalar) -> bool:
    """
    Decide log2(n) >= r exactly for an integer n >= 1 and rational r = p/q

    Brackets floor(log2(n^k))/k <= log2(n) < (floor(log2(n^k)) + 1)/k for a
    few small k settle most inputs; otherwise n^q >= 2^p is compared directly.
    """
    r = Fraction(r)
    if n < 1:
        raise ValueError(f"log2_at_least needs n >= 1, got {n}")
    if n & (n - 1) == 0:
        return floor_log2(n) >= r

    k = 1
    while k <= 64:
        low = floor_log2(n ** k)
        if Fraction(low, k) >= r:
            return True
        if Fraction(low + 1, k) <= r:
            return False
        k *= 2
    # Here 0 < r, so p >= 1
    return n ** r.denominator >= 1 << r.numerator
