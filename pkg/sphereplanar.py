"""
Sphere and Planar Graph
Ray directions on the sphere of H, open-hemisphere selection, the exact
gnomonic chart, the planar triangulation of the charted directions, and the
partner assignment along its edges
"""

import logging
import random
from collections import deque
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from exactnum import (
    GaussianRational, Vec2Q, Vec3Q, complement_basis, cross3, det3, dot,
    is_zero_vec, orient2, positive_direction_key, vec,
)

logger = logging.getLogger(__name__)

SMALLEST_NEIGHBOUR = "smallest-neighbour"
SPANNING_TREE = "spanning-tree"
PARTNER_RULES = (SMALLEST_NEIGHBOUR, SPANNING_TREE)


class HemisphereExhausted(RuntimeError):
    """No sampled pole avoided every ray's great circle"""


@dataclass(frozen=True)
class RayDir:
    """Direction of the ray r_t in the coordinates of H, up to positive scaling"""
    t: GaussianRational
    dir3: Vec3Q

    def __post_init__(self):
        if is_zero_vec(self.dir3):
            raise ValueError(f"ray for t={self.t} has zero direction")


@dataclass
class HemisphereChart:
    """Open hemisphere u.d > 0 and its central (gnomonic) chart"""
    pole: Vec3Q
    basis2: Tuple[Vec3Q, Vec3Q]
    members: List[GaussianRational]
    chart: Dict[GaussianRational, Vec2Q]
    rays: Dict[GaussianRational, Vec3Q] = field(default_factory=dict)
    attempts: int = 1

    def point(self, t: GaussianRational) -> Vec2Q:
        return self.chart[t]


@dataclass
class PlanarGraph:
    """Crossing-free straight-line graph on the charted directions"""
    vertices: List[GaussianRational]
    edges: List[Tuple[GaussianRational, GaussianRational]]
    points: Dict[GaussianRational, Vec2Q]
    collinear: bool = False
    partner: Dict[GaussianRational, GaussianRational] = field(default_factory=dict)

    def neighbours(self) -> Dict[GaussianRational, List[GaussianRational]]:
        adjacency = {v: [] for v in self.vertices}
        for a, b in self.edges:
            adjacency[a].append(b)
            adjacency[b].append(a)
        return adjacency


def chart_point(d: Vec3Q, pole: Vec3Q, basis2: Tuple[Vec3Q, Vec3Q]) -> Vec2Q:
    """Central projection of d onto the plane u.x = 1, in the basis e1, e2"""
    scale = dot(pole, d)
    e1, e2 = basis2
    return (dot(e1, d) / scale, dot(e2, d) / scale)


def make_chart(rays: List[RayDir], pole: Sequence, attempts: int = 1) -> HemisphereChart:
    """Chart the rays strictly inside the open hemisphere of the given pole"""
    pole = vec(*pole)
    _, basis = complement_basis(pole)
    basis2 = (basis[0], basis[1])
    members = [r.t for r in rays if dot(pole, r.dir3) > 0]
    directions = {r.t: r.dir3 for r in rays}
    chart = {t: chart_point(directions[t], pole, basis2) for t in members}
    return HemisphereChart(pole=pole, basis2=basis2, members=members, chart=chart,
                           rays={t: directions[t] for t in members}, attempts=attempts)


def select_hemisphere(rays: List[RayDir], seed: int, retries: int = 32,
                      pole: Optional[Sequence] = None, initial_box: int = 8,
                      batch: int = 4) -> HemisphereChart:
    """
    Choose a pole u meeting no ray orthogonally; flip it if -u sees more rays

    A given pole skips sampling (it must still be off every great circle).

    Raises: HemisphereExhausted when no sampled u avoids every ray's circle
    """
    if not rays:
        raise ValueError("need at least one ray")

    candidates = []
    if pole is not None:
        candidates = [tuple(pole)]
    else:
        rng = random.Random(seed)
        for attempt in range(retries):
            bound = initial_box * 2 ** (attempt // batch)
            u = (0, 0, 0)
            while all(c == 0 for c in u):
                u = tuple(rng.randint(-bound, bound) for _ in range(3))
            candidates.append(u)

    for attempt, u in enumerate(candidates, start=1):
        u = vec(*u)
        dots = [dot(u, r.dir3) for r in rays]
        if any(s == 0 for s in dots):
            logger.debug("pole %s lies on a ray's great circle, resampling", u)
            continue
        positive = sum(1 for s in dots if s > 0)
        if positive < len(rays) - positive:
            u = tuple(-c for c in u)
        chart = make_chart(rays, u, attempts=attempt)
        logger.debug("hemisphere pole %s holds %d of %d rays", u, len(chart.members), len(rays))
        return chart

    raise HemisphereExhausted(f"no pole off every ray circle after {len(candidates)} samples")


def collinear(p: Vec2Q, q: Vec2Q, r: Vec2Q) -> bool:
    return orient2(p, q, r) == 0


def coplanar_iff_collinear_check(r1: RayDir, r2: RayDir, r3: RayDir,
                                 chart: HemisphereChart) -> Tuple[bool, bool]:
    """
    (rays coplanar through the origin, chart points collinear)

    The two always agree for hemisphere members: central projection sends
    great circles to straight lines.
    """
    coplanar = det3([r1.dir3, r2.dir3, r3.dir3]) == 0
    on_line = collinear(chart.point(r1.t), chart.point(r2.t), chart.point(r3.t))
    return coplanar, on_line


def all_collinear(points: List[Vec2Q]) -> bool:
    if len(points) <= 2:
        return True
    p0 = points[0]
    p1 = next((p for p in points[1:] if p != p0), None)
    if p1 is None:
        return True
    return all(orient2(p0, p1, p) == 0 for p in points)


def _triangulate_indices(points: List[Vec2Q]) -> List[Tuple[int, int]]:
    """
    Incremental hull triangulation of lexicographically sorted, distinct points

    The leading collinear run becomes a path fanned to the first point off its
    line; every later point is lexicographically largest so far, hence
    strictly outside the hull, and is joined to the endpoints of the hull
    edges it sees strictly. Hull vertices are kept counter-clockwise,
    collinear boundary vertices included.
    """
    n = len(points)
    edges = set()

    def add(a, b):
        edges.add((min(a, b), max(a, b)))

    m = 2
    while m < n and orient2(points[0], points[1], points[m]) == 0:
        m += 1
    for k in range(m - 1):
        add(k, k + 1)
    if m == n:
        return sorted(edges)

    for k in range(m):
        add(k, m)
    if orient2(points[0], points[m - 1], points[m]) > 0:
        hull = list(range(m)) + [m]
    else:
        hull = [0, m] + list(range(m - 1, 0, -1))

    for p in range(m + 1, n):
        size = len(hull)
        visible = [orient2(points[hull[k]], points[hull[(k + 1) % size]], points[p]) < 0
                   for k in range(size)]
        start = next(k for k in range(size) if visible[k] and not visible[k - 1])
        end = start
        while visible[end % size]:
            end += 1
        for k in range(start, end + 1):
            add(hull[k % size], p)
        # Walk from hull[end] round to hull[start], then p replaces the visible chain
        rotated = [hull[(end + k) % size] for k in range(size - (end - start) + 1)]
        hull = rotated + [p]

    return sorted(edges)


def triangulate(chart: HemisphereChart) -> PlanarGraph:
    """
    Planar straight-line graph on the chart points

    Collinear points (one great circle) are joined by a single path in
    coordinate order; otherwise the convex hull is triangulated incrementally.
    """
    if not chart.members:
        raise ValueError("cannot triangulate an empty chart")

    order = sorted(chart.members, key=lambda t: chart.chart[t])
    points = [chart.chart[t] for t in order]
    if len(set(points)) != len(points):
        raise ValueError("chart points must be pairwise distinct")

    is_path = all_collinear(points)
    if is_path:
        index_edges = [(k, k + 1) for k in range(len(order) - 1)]
    else:
        index_edges = _triangulate_indices(points)

    return PlanarGraph(
        vertices=order,
        edges=[(order[a], order[b]) for a, b in index_edges],
        points={t: chart.chart[t] for t in order},
        collinear=is_path,
    )


def _on_segment(p: Vec2Q, q: Vec2Q, r: Vec2Q) -> bool:
    """r on the closed segment pq, given orient(p, q, r) == 0"""
    return (min(p[0], q[0]) <= r[0] <= max(p[0], q[0])
            and min(p[1], q[1]) <= r[1] <= max(p[1], q[1]))


def segments_conflict(a: Vec2Q, b: Vec2Q, c: Vec2Q, d: Vec2Q) -> bool:
    """
    True when segments ab and cd meet anywhere other than a shared endpoint

    Collinear overlaps count as conflicts, as does an endpoint lying inside
    the other segment.
    """
    shared = {a, b} & {c, d}
    if len(shared) == 2:
        return True
    if len(shared) == 1:
        common = shared.pop()
        other1 = b if a == common else a
        other2 = d if c == common else c
        if orient2(common, other1, other2) != 0:
            return False
        # Collinear through the shared endpoint: overlap iff they leave it the same way
        return dot((other1[0] - common[0], other1[1] - common[1]),
                   (other2[0] - common[0], other2[1] - common[1])) > 0

    o1 = orient2(a, b, c)
    o2 = orient2(a, b, d)
    o3 = orient2(c, d, a)
    o4 = orient2(c, d, b)
    if ((o1 > 0 and o2 < 0) or (o1 < 0 and o2 > 0)) and ((o3 > 0 and o4 < 0) or (o3 < 0 and o4 > 0)):
        return True
    return ((o1 == 0 and _on_segment(a, b, c)) or (o2 == 0 and _on_segment(a, b, d))
            or (o3 == 0 and _on_segment(c, d, a)) or (o4 == 0 and _on_segment(c, d, b)))


def is_connected(g: PlanarGraph) -> bool:
    if not g.vertices:
        return True
    adjacency = g.neighbours()
    seen = {g.vertices[0]}
    queue = deque([g.vertices[0]])
    while queue:
        v = queue.popleft()
        for w in adjacency[v]:
            if w not in seen:
                seen.add(w)
                queue.append(w)
    return len(seen) == len(g.vertices)


def check_planar_graph(g: PlanarGraph) -> List[str]:
    """
    Exact connectivity, crossing and edge-count checks

    Returns: List of violation messages (empty if consistent)
    """
    violations = []
    if not is_connected(g):
        violations.append("graph is not connected")
    if len(g.edges) < len(g.vertices) - 1:
        violations.append(f"{len(g.edges)} edges for {len(g.vertices)} vertices")

    segments = [(g.points[a], g.points[b]) for a, b in g.edges]
    for i in range(len(segments)):
        for j in range(i + 1, len(segments)):
            if segments_conflict(*segments[i], *segments[j]):
                violations.append(f"edges {g.edges[i]} and {g.edges[j]} cross")

    adjacency = g.neighbours()
    for t, t1 in g.partner.items():
        if t1 not in adjacency.get(t, []):
            violations.append(f"partner {t} -> {t1} is not an edge")
    return violations


def assign_partners(g: PlanarGraph) -> Dict[GaussianRational, GaussianRational]:
    """Map every non-isolated vertex to its neighbour with the smallest chart point"""
    adjacency = g.neighbours()
    partners = {}
    for t in g.vertices:
        if adjacency[t]:
            partners[t] = min(adjacency[t], key=lambda s: g.points[s])
    g.partner = partners
    return partners


def spanning_tree_partners(g: PlanarGraph) -> Dict[GaussianRational, GaussianRational]:
    """
    Map every vertex but the root to its BFS parent

    Rooted at the lexicographically smallest chart point; yields exactly
    |Y| - 1 distinct edges on a connected graph.
    """
    if not g.vertices:
        return {}
    adjacency = g.neighbours()
    root = g.vertices[0]
    partners = {}
    seen = {root}
    queue = deque([root])
    while queue:
        v = queue.popleft()
        for w in sorted(adjacency[v], key=lambda s: g.points[s]):
            if w not in seen:
                seen.add(w)
                partners[w] = v
                queue.append(w)
    g.partner = partners
    return partners


def antipodal_free(chart: HemisphereChart) -> bool:
    """No two members are negatively proportional (angles between rays < pi)"""
    keys = {positive_direction_key(d) for d in chart.rays.values()}
    return all(tuple(-c for c in key) not in keys for key in keys)


def in_open_cone(s: Vec3Q, r1: Vec3Q, r2: Vec3Q) -> bool:
    """
    s = alpha r1 + beta r2 with alpha, beta > 0 (r1, r2 independent)

    Coplanarity is det3 == 0; the coefficients follow from cross products,
    s x r2 = alpha (r1 x r2) and r1 x s = beta (r1 x r2).
    """
    if det3([s, r1, r2]) != 0:
        return False
    base = cross3(r1, r2)
    alpha_side = dot(cross3(s, r2), base)
    beta_side = dot(cross3(r1, s), base)
    return alpha_side > 0 and beta_side > 0
