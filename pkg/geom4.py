"""
Geometry in R^4
Embedding C^2 -> R^4, the two-planes pi_t, generic hyperplane sampling,
exact projections and the per-plane ray selection
"""

import logging
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Tuple

from exactnum import (
    GaussianRational, Vec3Q, Vec4Q, complement_basis, det4, direction_key,
    dot, is_zero_vec, rank, vadd, vec, vscale, vsub,
)
from setcore import ComplexSet

logger = logging.getLogger(__name__)

# Genericity predicate names, in the order they are checked
TRANSVERSAL = "transversal"              # no pi_t inside H
PROJECTIONS_DISTINCT = "projections"     # x_par nonzero and pairwise distinct
LINES_DISTINCT = "lines"                 # pi_t cap H are distinct lines
LINE_COORDINATES = "line-coordinates"    # per-plane line coordinates nonzero, distinct


class GenericityExhausted(RuntimeError):
    """No sampled hyperplane passed every genericity predicate"""

    def __init__(self, predicate: str, attempts: int):
        super().__init__(f"no generic hyperplane after {attempts} samples; "
                         f"last failing predicate: {predicate}")
        self.predicate = predicate
        self.attempts = attempts


@dataclass(frozen=True)
class Point4:
    """A point x of X = A x A in R^4, remembering its source pair"""
    coords: Vec4Q
    source: Tuple[GaussianRational, GaussianRational]

    @property
    def ratio(self) -> GaussianRational:
        return self.source[0] / self.source[1]


@dataclass(frozen=True)
class PlaneT:
    """The real two-plane pi_t = {(t z, z)} of the complex line with direction t"""
    t: GaussianRational
    basis: Tuple[Vec4Q, Vec4Q]

    def contains(self, x: Vec4Q) -> bool:
        # x = alpha*b1 + beta*b2 forces alpha = x[2], beta = x[3]
        b1, b2 = self.basis
        return vadd(vscale(x[2], b1), vscale(x[3], b2)) == tuple(x)


@dataclass
class Hyperplane:
    """The hyperplane H = normal^perp with an exact rational basis"""
    normal: Vec4Q
    basis: List[Vec4Q] = field(default_factory=list)
    pivot: int = 3
    attempts: int = 1

    @classmethod
    def from_normal(cls, normal: Iterable, attempts: int = 1) -> 'Hyperplane':
        normal = vec(*normal)
        if is_zero_vec(normal):
            raise ValueError("hyperplane normal must be nonzero")
        pivot, basis = complement_basis(normal)
        return cls(normal=normal, basis=basis, pivot=pivot, attempts=attempts)

    def parallel(self, x: Vec4Q) -> Vec4Q:
        """x_par = x - (x.n / n.n) n"""
        n = self.normal
        return vsub(x, vscale(dot(x, n) / dot(n, n), n))

    def perpendicular(self, x: Vec4Q) -> Vec4Q:
        n = self.normal
        return vscale(dot(x, n) / dot(n, n), n)

    def coords(self, v: Vec4Q) -> Vec3Q:
        """Coordinates of a vector of H in the basis (the entries off the pivot)"""
        return tuple(a for k, a in enumerate(v) if k != self.pivot)


@dataclass
class PlaneLineData:
    """The line l_t = pi_t cap H, the line coordinates of X on pi_t, and the ray"""
    t: GaussianRational
    line_dir: Vec4Q
    signed_coords: Dict[Point4, Fraction]
    kept: List[Point4]
    ray_sign: int

    @property
    def nu(self) -> int:
        return len(self.signed_coords)

    @property
    def ray_dir(self) -> Vec4Q:
        return vscale(self.ray_sign, self.line_dir)


def embed_pair(a1: GaussianRational, a2: GaussianRational) -> Vec4Q:
    """Standard embedding (a1, a2) -> (Re a1, Im a1, Re a2, Im a2)"""
    return (a1.re, a1.im, a2.re, a2.im)


def embed(a: ComplexSet) -> List[Point4]:
    """The |A|^2 points of X in canonical pair order"""
    elements = a.elements
    return [Point4(coords=embed_pair(x, y), source=(x, y)) for x in elements for y in elements]


def plane_of(t: GaussianRational) -> PlaneT:
    """pi_t spanned by emb(t, 1) and emb(i t, i)"""
    if t.is_zero():
        raise ValueError("direction t must be nonzero")
    one = GaussianRational.of(1)
    i = GaussianRational.unit()
    return PlaneT(t=t, basis=(embed_pair(t, one), embed_pair(i * t, i)))


def spans_r4(p: PlaneT, q: PlaneT) -> bool:
    """True iff the two planes together span R^4"""
    return det4([p.basis[0], p.basis[1], q.basis[0], q.basis[1]]) != 0


def group_by_plane(points: Iterable[Point4]) -> Dict[GaussianRational, List[Point4]]:
    """Points of X keyed by the direction t = a1/a2 of the plane they lie on"""
    groups: Dict[GaussianRational, List[Point4]] = {}
    for x in points:
        groups.setdefault(x.ratio, []).append(x)
    return groups


def line_direction(plane: PlaneT, normal: Vec4Q) -> Vec4Q:
    """
    Spanning vector of pi_t cap n^perp

    Solves alpha (n.b1) + beta (n.b2) = 0 with (alpha, beta) = (n.b2, -n.b1).
    Zero exactly when pi_t lies inside the hyperplane.
    """
    b1, b2 = plane.basis
    return vsub(vscale(dot(normal, b2), b1), vscale(dot(normal, b1), b2))


def line_coordinate(x: Vec4Q, line_dir: Vec4Q) -> Fraction:
    """Coordinate (x.d)/(d.d) of x projected onto the line spanned by d"""
    return dot(x, line_dir) / dot(line_dir, line_dir)


def failed_predicate(normal: Vec4Q, planes: List[PlaneT], points: List[Point4],
                     groups: Optional[Dict[GaussianRational, List[Point4]]] = None) -> Optional[str]:
    """
    Run the genericity predicates for a candidate normal

    Returns: Name of the first failing predicate, or None if H is generic
    """
    directions = []
    for plane in planes:
        d = line_direction(plane, normal)
        if is_zero_vec(d):
            return TRANSVERSAL
        directions.append(d)

    nn = dot(normal, normal)
    seen = set()
    for x in points:
        x_par = vsub(x.coords, vscale(dot(x.coords, normal) / nn, normal))
        if is_zero_vec(x_par) or x_par in seen:
            return PROJECTIONS_DISTINCT
        seen.add(x_par)

    line_keys = {direction_key(d) for d in directions}
    if len(line_keys) != len(directions):
        return LINES_DISTINCT

    if groups is None:
        groups = group_by_plane(points)
    for plane, d in zip(planes, directions):
        coords = [line_coordinate(x.coords, d) for x in groups.get(plane.t, [])]
        if any(c == 0 for c in coords) or len(set(coords)) != len(coords):
            return LINE_COORDINATES

    return None


def box_size(attempt: int, initial_box: int, batch: int) -> int:
    """Half-width M of the sampling box; doubles after every batch of samples"""
    return initial_box * 2 ** (attempt // batch)


def sample_hyperplane(planes: List[PlaneT], points: List[Point4], seed: int,
                      retries: int, initial_box: int = 8, batch: int = 4) -> Hyperplane:
    """
    Draw integer normals from [-M, M]^4 until every genericity predicate holds

    Raises: GenericityExhausted after `retries` failed samples
    """
    if not planes:
        raise ValueError("need at least one plane")

    rng = random.Random(seed)
    groups = group_by_plane(points)
    last_failure = "none"

    for attempt in range(retries):
        bound = box_size(attempt, initial_box, batch)
        normal = (0, 0, 0, 0)
        while all(c == 0 for c in normal):
            normal = tuple(rng.randint(-bound, bound) for _ in range(4))

        failure = failed_predicate(vec(*normal), planes, points, groups)
        if failure is None:
            logger.debug("hyperplane n=%s accepted after %d samples", normal, attempt + 1)
            return Hyperplane.from_normal(normal, attempts=attempt + 1)

        last_failure = failure
        logger.debug("hyperplane n=%s rejected: %s", normal, failure)

    raise GenericityExhausted(last_failure, retries)


def plane_line_data(plane: PlaneT, h: Hyperplane, points_on_plane: List[Point4]) -> PlaneLineData:
    """
    Coordinatize the points of pi_t along l_t and keep the majority side

    Ties keep the positive side.
    """
    d = line_direction(plane, h.normal)
    signed = {x: line_coordinate(x.coords, d) for x in points_on_plane}
    positive = [x for x in points_on_plane if signed[x] > 0]
    negative = [x for x in points_on_plane if signed[x] < 0]

    if len(positive) >= len(negative):
        kept, ray_sign = positive, 1
    else:
        kept, ray_sign = negative, -1

    return PlaneLineData(t=plane.t, line_dir=d, signed_coords=signed, kept=kept, ray_sign=ray_sign)


def check_plane_line_data(data: PlaneLineData, plane: PlaneT, h: Hyperplane) -> List[str]:
    """
    Check l_t lies in pi_t and H and the ray keeps at least half the points

    Returns: List of violation messages (empty if consistent)
    """
    violations = []
    if is_zero_vec(data.line_dir) or not plane.contains(data.line_dir):
        violations.append(f"line direction for t={data.t} is not in pi_t")
    if dot(data.line_dir, h.normal) != 0:
        violations.append(f"line direction for t={data.t} is not in H")

    values = list(data.signed_coords.values())
    if any(v == 0 for v in values) or len(set(values)) != len(values):
        violations.append(f"line coordinates for t={data.t} are not nonzero and distinct")
    if 2 * len(data.kept) < data.nu:
        violations.append(f"ray for t={data.t} keeps {len(data.kept)} of {data.nu} points")
    return violations


def basis_independent(plane: PlaneT) -> bool:
    """True iff the two basis vectors of pi_t are linearly independent"""
    return rank(plane.basis) == 2
