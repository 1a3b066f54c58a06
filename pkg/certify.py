"""
Injection Certificates
Runs the whole pipeline for one set A and records every verdict in a
JSON-serializable certificate
"""

import json
import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Dict, List, Optional, Tuple, Union

from exactnum import (
    GaussianRational, Vec4Q, floor_log2, format_gaussian, format_rational,
    log2_at_least, vadd,
)
from setcore import (
    ComplexSet, cauchy_schwarz_check, direction_tally, productset, sumset,
)
from dyadic import dyadic_decompose, select_popular_class
from geom4 import (
    Hyperplane, PlaneLineData, Point4, embed, group_by_plane, plane_line_data,
    plane_of, sample_hyperplane, spans_r4,
)
from sphereplanar import (
    SPANNING_TREE, RayDir, antipodal_free, assign_partners, in_open_cone,
    select_hemisphere, spanning_tree_partners, triangulate,
)
from pipeline_settings import PipelineSettings

logger = logging.getLogger(__name__)

# Constant of the per-class accounting: class mass <= 32 |X+X|
EQ4_FACTOR = 32
# Constant of the final bound: 64 log2|A| |A+A|^2 |A*A| >= |A|^4
THEOREM_FACTOR = 64


@dataclass(frozen=True)
class TaggedSum:
    """A vector sum x + x1 with x on pi_t and x1 on pi_t1"""
    value: Vec4Q
    t: GaussianRational
    t1: GaussianRational
    x: Point4
    x1: Point4

    @property
    def edge(self) -> Tuple[GaussianRational, GaussianRational]:
        return (self.t, self.t1)

    def to_dict(self) -> dict:
        return {
            't': format_gaussian(self.t),
            't1': format_gaussian(self.t1),
            'x': [format_gaussian(z) for z in self.x.source],
            'x1': [format_gaussian(z) for z in self.x1.source],
            'sum': [format_rational(c) for c in self.value],
        }


@dataclass
class InjectionVerdict:
    within_pair_injective: bool
    globally_injective: bool
    collisions: List[List[TaggedSum]] = field(default_factory=list)
    distinct_sum_count: int = 0


def derive_seed(seed: int, attempt: int) -> int:
    """Per-attempt seed; attempt 0 of seed s differs from attempt 0 of s + 1"""
    return seed * 1_000_003 + attempt


def injection_edges(partners: Dict[GaussianRational, GaussianRational]
                    ) -> List[Tuple[GaussianRational, GaussianRational]]:
    """
    Distinct unordered edges {t, partner(t)}, oriented by the first vertex
    (in partner-map order) that names them

    Reciprocal partners would otherwise emit every sum twice.
    """
    edges = []
    used = set()
    for t, t1 in partners.items():
        key = frozenset((t, t1))
        if key not in used:
            used.add(key)
            edges.append((t, t1))
    return edges


def build_injection(partners: Dict[GaussianRational, GaussianRational],
                    plane_data: Dict[GaussianRational, PlaneLineData]) -> List[TaggedSum]:
    """Emit x + x1 for every kept x on pi_t and kept x1 on pi_t1, once per partner edge"""
    sums = []
    for t, t1 in injection_edges(partners):
        for x in plane_data[t].kept:
            for x1 in plane_data[t1].kept:
                sums.append(TaggedSum(value=vadd(x.coords, x1.coords), t=t, t1=t1, x=x, x1=x1))
    return sums


def verify_injective(sums: List[TaggedSum]) -> InjectionVerdict:
    """
    Index sums by exact value and report every repeated value

    Within-pair: no repeat among sums of the same edge. Global: no repeat at all.
    """
    index: Dict[Vec4Q, List[TaggedSum]] = {}
    for s in sums:
        index.setdefault(s.value, []).append(s)

    collisions = [tags for tags in index.values() if len(tags) > 1]
    within_pair = all(
        len({frozenset(tag.edge) for tag in tags}) == len(tags)
        for tags in collisions
    )
    if collisions:
        logger.info("%d repeated sum values among %d sums", len(collisions), len(sums))

    return InjectionVerdict(
        within_pair_injective=within_pair,
        globally_injective=not collisions,
        collisions=collisions,
        distinct_sum_count=len(index),
    )


@dataclass
class InjectionCertificate:
    """Full record of one pipeline run"""
    input_digest: dict
    sumset_size: int
    productset_size: int
    xx_size: int
    energy: int
    eq1_bound: Fraction
    eq1_holds: bool
    dyadic: dict
    t_prime: List[GaussianRational]
    class_mass: int
    hyperplane_normal: Optional[Vec4Q]
    hyperplane_retries: int
    attempts_used: int
    rays: Dict[GaussianRational, tuple]
    hemisphere_pole: Optional[tuple]
    t_double_prime: List[GaussianRational]
    graph_edges: List[Tuple[GaussianRational, GaussianRational]]
    graph_collinear: bool
    partners: Dict[GaussianRational, GaussianRational]
    per_edge_sum_counts: List[Tuple[GaussianRational, GaussianRational, int]]
    distinct_sum_count: int
    collisions: List[List[TaggedSum]]
    within_pair_injective: bool
    globally_injective: bool
    spans_r4_on_edges: bool
    eq4_style_bound: bool
    theorem_bound: Optional[bool]
    theorem_bound_floor: Optional[bool]
    effective_constant: Optional[float]
    effective_exponent: Optional[float]
    kept_point_count: int
    t_prime_nu_total: int
    kept_half_holds: bool
    antipodal_free: bool
    extra_edge_holds: Optional[bool]
    edge_interior_hits: int
    edge_sum_total: int
    degenerate: bool
    seed: int
    retries: int
    partner_rule: str
    log_base: int = 2

    @property
    def sum_count_total(self) -> int:
        return sum(count for _, _, count in self.per_edge_sum_counts)

    def to_dict(self) -> dict:
        """JSON object with rationals as 'p/q' strings and vectors as arrays of them"""
        def q(v):
            return format_rational(v)

        def qv(vector):
            return [format_rational(c) for c in vector] if vector is not None else None

        def g(z):
            return format_gaussian(z)

        return {
            'input_digest': self.input_digest,
            'sumset_size': self.sumset_size,
            'productset_size': self.productset_size,
            'xx_size': self.xx_size,
            'energy': self.energy,
            'eq1': {'bound': q(self.eq1_bound), 'holds': self.eq1_holds},
            'dyadic': {k: (q(v) if isinstance(v, Fraction) else v) for k, v in self.dyadic.items()},
            't_prime': [g(t) for t in self.t_prime],
            't_prime_size': len(self.t_prime),
            'class_mass': self.class_mass,
            'hyperplane_normal': qv(self.hyperplane_normal),
            'hyperplane_retries': self.hyperplane_retries,
            'attempts_used': self.attempts_used,
            'rays': [{'t': g(t), 'dir3': qv(d)} for t, d in self.rays.items()],
            'hemisphere_pole': qv(self.hemisphere_pole),
            't_double_prime': [g(t) for t in self.t_double_prime],
            't_double_prime_size': len(self.t_double_prime),
            'graph': {
                'edges': [[g(a), g(b)] for a, b in self.graph_edges],
                'collinear': self.graph_collinear,
            },
            'partners': {g(t): g(t1) for t, t1 in self.partners.items()},
            'per_edge_sum_counts': [{'t': g(a), 't1': g(b), 'count': c}
                                    for a, b, c in self.per_edge_sum_counts],
            'distinct_sum_count': self.distinct_sum_count,
            'collisions': [[tag.to_dict() for tag in tags] for tags in self.collisions],
            'within_pair_injective': self.within_pair_injective,
            'globally_injective': self.globally_injective,
            'spans_r4_on_edges': self.spans_r4_on_edges,
            'eq4_style_bound': self.eq4_style_bound,
            'theorem_bound': self.theorem_bound,
            'theorem_bound_floor': self.theorem_bound_floor,
            'effective_constant': self.effective_constant,
            'effective_exponent': self.effective_exponent,
            'kept_point_count': self.kept_point_count,
            't_prime_nu_total': self.t_prime_nu_total,
            'kept_half_holds': self.kept_half_holds,
            'antipodal_free': self.antipodal_free,
            'extra_edge_holds': self.extra_edge_holds,
            'edge_interior_hits': self.edge_interior_hits,
            'edge_sum_total': self.edge_sum_total,
            'degenerate': self.degenerate,
            'seed': self.seed,
            'retries': self.retries,
            'partner_rule': self.partner_rule,
            'log_base': self.log_base,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)


def theorem_verdicts(a_size: int, sumset_size: int,
                     productset_size: int) -> Tuple[Optional[bool], Optional[bool]]:
    """
    64 log2|A| |A+A|^2 |A*A| >= |A|^4, decided exactly and by floor(log2|A|)

    Returns: (exact verdict, floor-based verdict); both None when |A| < 2
    """
    if a_size < 2:
        return None, None
    lhs = THEOREM_FACTOR * sumset_size ** 2 * productset_size
    exact = log2_at_least(a_size, Fraction(a_size ** 4, lhs))
    floor_based = lhs * floor_log2(a_size) >= a_size ** 4
    return exact, floor_based


def effective_numbers(a_size: int, sumset_size: int,
                      productset_size: int) -> Tuple[Optional[float], Optional[float]]:
    """
    Reported, never asserted: |A+A|^2 |A*A| log2|A| / |A|^4 and
    log max(|A+A|, |A*A|) / log |A|
    """
    if a_size < 2:
        return None, None
    constant = sumset_size ** 2 * productset_size * math.log2(a_size) / a_size ** 4
    exponent = math.log(max(sumset_size, productset_size)) / math.log(a_size)
    return round(constant, 6), round(exponent, 6)


def _run_geometry(plane_list, points, groups, seed, settings):
    """One hyperplane draw through to the verified sums"""
    h = sample_hyperplane(plane_list, points, seed, settings.retries,
                          initial_box=settings.initial_box, batch=settings.box_batch)
    data = {p.t: plane_line_data(p, h, groups[p.t]) for p in plane_list}
    rays = [RayDir(t=t, dir3=h.coords(d.ray_dir)) for t, d in data.items()]
    chart = select_hemisphere(rays, derive_seed(seed, 1), settings.retries,
                              initial_box=settings.initial_box, batch=settings.box_batch)
    graph = triangulate(chart)
    if settings.partner_rule == SPANNING_TREE:
        partners = spanning_tree_partners(graph)
    else:
        partners = assign_partners(graph)
    sums = build_injection(partners, data)
    verdict = verify_injective(sums)
    return h, data, rays, chart, graph, partners, sums, verdict


def _edge_interior_hits(sums: List[TaggedSum], h: Hyperplane, chart) -> int:
    """Sums whose projection to H lies strictly inside the cone of their edge's rays"""
    hits = 0
    for s in sums:
        projected = h.coords(vadd(h.parallel(s.x.coords), h.parallel(s.x1.coords)))
        if in_open_cone(projected, chart.rays[s.t], chart.rays[s.t1]):
            hits += 1
    return hits


def certify(a: ComplexSet, seed: int = 0, retries: Optional[int] = None,
            settings: Optional[PipelineSettings] = None) -> InjectionCertificate:
    """
    Run the full pipeline on A and certify every inequality in the chain

    On a global collision the hyperplane is redrawn from a derived seed, up
    to `retries` times; the last attempt is recorded whatever its outcome.

    Raises: GenericityExhausted when no generic hyperplane is found
    """
    settings = settings or PipelineSettings()
    if retries is not None:
        settings = settings.override(retries=retries)
    if len(a) < 1:
        raise ValueError("certify needs a nonempty set")

    n = len(a)
    tally = direction_tally(a)
    sum_size = len(sumset(a))
    prod_size = len(productset(a))
    eq1 = cauchy_schwarz_check(tally, a, prod_size)

    classes = dyadic_decompose(tally)
    selection = select_popular_class(classes, n)
    t_prime = list(selection.chosen.members)

    points = embed(a)
    groups = group_by_plane(points)
    plane_list = [plane_of(t) for t in t_prime]

    total_samples = 0
    attempt = 0
    for attempt in range(settings.retries):
        result = _run_geometry(plane_list, points, groups, derive_seed(seed, attempt), settings)
        h, data, rays, chart, graph, partners, sums, verdict = result
        total_samples += h.attempts
        if verdict.globally_injective:
            break
        logger.info("attempt %d: %d collisions, resampling hyperplane",
                    attempt + 1, len(verdict.collisions))

    planes_by_t = {p.t: p for p in plane_list}
    per_edge = [(t, t1, len(data[t].kept) * len(data[t1].kept))
                for t, t1 in injection_edges(partners)]
    spans_ok = all(spans_r4(planes_by_t[t], planes_by_t[t1]) for t, t1, _ in per_edge)

    kept_total = sum(len(d.kept) for d in data.values())
    nu_total = sum(tally.nu(t) for t in t_prime)
    members = chart.members
    extra_edge = None if graph.collinear or len(members) < 2 else len(graph.edges) >= len(members)

    theorem_exact, theorem_floor = theorem_verdicts(n, sum_size, prod_size)
    constant, exponent = effective_numbers(n, sum_size, prod_size)
    xx_size = sum_size ** 2

    certificate = InjectionCertificate(
        input_digest={'size': n, 'elements_sha256': a.digest(),
                      'elements': [format_gaussian(z) for z in a]},
        sumset_size=sum_size,
        productset_size=prod_size,
        xx_size=xx_size,
        energy=tally.energy,
        eq1_bound=eq1.bound,
        eq1_holds=eq1.holds,
        dyadic=selection.to_dict(),
        t_prime=t_prime,
        class_mass=selection.chosen.mass,
        hyperplane_normal=h.normal,
        hyperplane_retries=total_samples,
        attempts_used=attempt + 1,
        rays={r.t: r.dir3 for r in rays},
        hemisphere_pole=chart.pole,
        t_double_prime=list(graph.vertices),
        graph_edges=list(graph.edges),
        graph_collinear=graph.collinear,
        partners=dict(partners),
        per_edge_sum_counts=per_edge,
        distinct_sum_count=verdict.distinct_sum_count,
        collisions=verdict.collisions,
        within_pair_injective=verdict.within_pair_injective,
        globally_injective=verdict.globally_injective,
        spans_r4_on_edges=spans_ok,
        eq4_style_bound=selection.chosen.mass <= EQ4_FACTOR * xx_size,
        theorem_bound=theorem_exact,
        theorem_bound_floor=theorem_floor,
        effective_constant=constant,
        effective_exponent=exponent,
        kept_point_count=kept_total,
        t_prime_nu_total=nu_total,
        kept_half_holds=2 * kept_total >= nu_total,
        antipodal_free=antipodal_free(chart),
        extra_edge_holds=extra_edge,
        edge_interior_hits=_edge_interior_hits(sums, h, chart),
        edge_sum_total=len(sums),
        degenerate=len(members) <= 1,
        seed=seed,
        retries=settings.retries,
        partner_rule=settings.partner_rule,
    )

    logger.info("certificate for |A|=%d: injective=%s after %d attempt(s), N=%d",
                n, certificate.globally_injective, certificate.attempts_used,
                certificate.distinct_sum_count)
    return certificate


def check_certificate(cert: InjectionCertificate) -> List[str]:
    """
    Theorem-backed invariants of a certificate

    Returns: List of violation messages (empty if all hold)
    """
    violations = []
    if not cert.eq1_holds:
        violations.append(f"E = {cert.energy} < |A|^4/|A*A| = {cert.eq1_bound}")
    if not cert.within_pair_injective:
        violations.append("sums repeat within a single edge")
    if not cert.spans_r4_on_edges:
        violations.append("two edge planes fail to span R^4")
    if cert.distinct_sum_count > cert.xx_size:
        violations.append(f"N = {cert.distinct_sum_count} exceeds |X+X| = {cert.xx_size}")
    if cert.globally_injective and cert.distinct_sum_count != cert.sum_count_total:
        violations.append("injective run with N != sum of per-edge counts")
    if cert.theorem_bound is False:
        violations.append("64 log2|A| |A+A|^2 |A*A| < |A|^4")
    if not cert.dyadic.get('pigeonhole_holds', True):
        violations.append("selected dyadic class below E / (number of classes)")
    if not cert.kept_half_holds:
        violations.append("rays keep fewer than half of the points on T'")
    return violations


def save_certificate(cert: InjectionCertificate, path: Union[str, Path]) -> bool:
    """Write the certificate JSON"""
    try:
        with open(path, 'w') as f:
            f.write(cert.to_json())
            f.write("\n")
        return True
    except OSError as e:
        logger.error("Error saving certificate: %s", e)
        return False
