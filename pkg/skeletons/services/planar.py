"""
Point-set skeletons under l_p metrics.

The brute-force oracle tests every pair's lens against every other point,
O(n^3) overall. Gabriel graph, RNG, Delaunay triangulation, minimum spanning
trees and the circle-based variant are built on top of it, together with the
inclusion-chain validator MST <= RNG <= G_b' <= G_b <= GG <= DT.
"""
import itertools
import logging
import math

import networkx as nx
import numpy as np
from scipy.spatial import Delaunay, QhullError

from skeletons.exceptions import CollinearInput, UnsupportedMetric
from skeletons.services.lenses import EPS_GEOM, lens_construct, lens_contains, point_in_lens
from skeletons.services.metric import MetricSpec, distance, distances_to
from skeletons.services.parallel import map_pairs
from skeletons.services.skeleton_graph import (
    ChainReport, PointSet, SkeletonGraph, Variant, as_variant, edge_key, format_beta,
)

logger = logging.getLogger(__name__)

CHAIN_BETAS = (1.0, 1.25, 1.5, 1.75, 2.0)


def _as_point_set(ps) -> PointSet:
    return ps if isinstance(ps, PointSet) else PointSet(ps)


def _others_mask(n: int, i: int, j: int) -> np.ndarray:
    mask = np.ones(n, dtype=bool)
    mask[[i, j]] = False
    return mask


def beta_skeleton_bruteforce(ps, metric: MetricSpec, beta, variant=Variant.CLOSED,
                             eps: float = EPS_GEOM, threads: int = 1) -> SkeletonGraph:
    """
    Lens-based beta-skeleton by testing every lens against every point.

    Edge (i, j) is present iff no third point lies in the lens of (p_i, p_j).
    """
    ps = _as_point_set(ps)
    variant = as_variant(variant)
    n = len(ps)
    coords = ps.coords

    def decide(pair):
        i, j = pair
        lens = lens_construct(metric, ps[i], ps[j], beta)
        others = coords[_others_mask(n, i, j)]
        return not lens_contains(lens, others, variant, eps).any()

    pairs = list(itertools.combinations(range(n), 2))
    decisions = map_pairs(decide, pairs, threads)
    edges = frozenset(pair for pair, keep in zip(pairs, decisions) if keep)
    logger.debug(f"Brute-force skeleton {metric.label} beta={format_beta(float(beta))}: {len(edges)} edges")
    return SkeletonGraph(n, edges, float(beta), metric.label, variant, 'brute')


def gabriel_graph(ps) -> SkeletonGraph:
    """Closed 1-skeleton in the Euclidean plane."""
    graph = beta_skeleton_bruteforce(ps, MetricSpec.euclidean(), 1.0, Variant.CLOSED)
    graph.producer = 'gabriel'
    return graph


def rng(ps) -> SkeletonGraph:
    """Relative neighborhood graph: the open 2-skeleton in the Euclidean plane."""
    graph = beta_skeleton_bruteforce(ps, MetricSpec.euclidean(), 2.0, Variant.OPEN)
    graph.producer = 'rng'
    return graph


def circle_based_skeleton(ps, beta, variant=Variant.CLOSED, metric: MetricSpec | None = None,
                          eps: float = EPS_GEOM) -> SkeletonGraph:
    """
    Euclidean circle-based beta-skeleton (beta >= 1).

    The forbidden region is the union of the two radius beta*d/2 discs whose
    boundaries pass through both generators.
    """
    metric = metric or MetricSpec.euclidean()
    if not metric.is_euclidean:
        raise UnsupportedMetric(f"Circle-based skeletons are Euclidean only, got {metric.label}")
    beta = float(beta)
    if beta < 1:
        raise ValueError(f"Circle-based skeletons need beta >= 1, got {beta}")
    ps = _as_point_set(ps)
    variant = as_variant(variant)
    n = len(ps)
    coords = ps.coords
    edges = set()

    for i, j in itertools.combinations(range(n), 2):
        a, b = coords[i], coords[j]
        d = float(np.hypot(*(b - a)))
        radius = beta * d / 2
        height = math.sqrt(max(radius * radius - d * d / 4, 0.0))
        mid = (a + b) / 2
        normal = np.array([-(b - a)[1], (b - a)[0]]) / d
        others = coords[_others_mask(n, i, j)]
        tol = eps * d
        blocked = False
        for center in (mid + height * normal, mid - height * normal):
            dist = np.hypot(others[:, 0] - center[0], others[:, 1] - center[1])
            inside = dist <= radius + tol if variant is Variant.CLOSED else dist < radius - tol
            if inside.any():
                blocked = True
                break
        if not blocked:
            edges.add((i, j))

    return SkeletonGraph(n, frozenset(edges), beta, metric.label, variant, 'circle')


def _circumcircle(a, b, c):
    """Centre and radius of the circle through three points, None when collinear."""
    ax, ay = a
    bx, by = b
    cx, cy = c
    det = 2 * (ax * (by - cy) + bx * (cy - ay) + cx * (ay - by))
    if det == 0:
        return None
    a2, b2, c2 = ax * ax + ay * ay, bx * bx + by * by, cx * cx + cy * cy
    ux = (a2 * (by - cy) + b2 * (cy - ay) + c2 * (ay - by)) / det
    uy = (a2 * (cx - bx) + b2 * (ax - cx) + c2 * (bx - ax)) / det
    return np.array([ux, uy]), math.hypot(ax - ux, ay - uy)


def _is_collinear(coords: np.ndarray, eps: float) -> bool:
    if len(coords) < 3:
        return True
    centred = coords - coords.mean(axis=0)
    singular = np.linalg.svd(centred, compute_uv=False)
    return singular[1] <= eps * max(singular[0], 1.0)


def empty_circumcircle_violations(ps, triangles, eps: float = EPS_GEOM) -> list[tuple]:
    """Triangles whose open circumcircle contains another point, as (triangle, point) pairs."""
    ps = _as_point_set(ps)
    coords = ps.coords
    violations = []
    for triangle in triangles:
        circle = _circumcircle(*(coords[k] for k in triangle))
        if circle is None:
            violations.append((tuple(triangle), None))
            continue
        center, radius = circle
        dist = np.hypot(coords[:, 0] - center[0], coords[:, 1] - center[1])
        inside = np.flatnonzero(dist < radius * (1 - eps))
        for k in inside:
            if k not in triangle:
                violations.append((tuple(int(v) for v in triangle), int(k)))
    return violations


def general_position_warnings(ps, eps: float = EPS_GEOM, triangles=None) -> list[str]:
    """Preflight: near-coincident points and (with triangles) co-circular quadruples."""
    ps = _as_point_set(ps)
    coords = ps.coords
    messages = []
    if len(coords) > 1:
        span = float(np.ptp(coords, axis=0).max()) or 1.0
        for i, j in itertools.combinations(range(len(coords)), 2):
            if np.hypot(*(coords[i] - coords[j])) <= eps * span:
                messages.append(f"points {i} and {j} nearly coincide")
    for triangle in triangles if triangles is not None else []:
        circle = _circumcircle(*(coords[k] for k in triangle))
        if circle is None:
            continue
        center, radius = circle
        dist = np.hypot(coords[:, 0] - center[0], coords[:, 1] - center[1])
        on_circle = [int(k) for k in np.flatnonzero(np.abs(dist - radius) <= eps * radius) if k not in triangle]
        if on_circle:
            messages.append(f"triangle {tuple(int(v) for v in triangle)} is co-circular with {on_circle}")
    for message in messages:
        logger.warning(f"General position: {message}")
    return messages


def delaunay(ps, eps: float = EPS_GEOM) -> SkeletonGraph:
    """
    Euclidean Delaunay triangulation edges.

    Built with scipy's Qhull wrapper and checked by the empty-circumcircle
    validator; violations are logged, not raised.
    """
    ps = _as_point_set(ps)
    n = len(ps)
    metric = MetricSpec.euclidean().label
    if n == 2:
        return SkeletonGraph(2, frozenset({(0, 1)}), math.nan, metric, Variant.OPEN, 'delaunay')
    if n < 2 or _is_collinear(ps.coords, eps):
        raise CollinearInput(f"Cannot triangulate {n} collinear points")
    try:
        tri = Delaunay(ps.coords)
    except QhullError as exc:
        raise CollinearInput(f"Triangulation failed: {exc}") from exc

    triangles = [tuple(int(v) for v in simplex) for simplex in tri.simplices]
    general_position_warnings(ps, eps, triangles)
    violations = empty_circumcircle_violations(ps, triangles, eps)
    if violations:
        logger.warning(f"Delaunay validator found {len(violations)} empty-circumcircle violations")

    edges = set()
    for a, b, c in triangles:
        edges.update({edge_key(a, b), edge_key(b, c), edge_key(a, c)})
    return SkeletonGraph(n, frozenset(edges), math.nan, metric, Variant.OPEN, 'delaunay')


def kruskal_tree(n: int, weighted_pairs) -> frozenset:
    """MST via networkx Kruskal; ties fall back to lexicographic pair order."""
    graph = nx.Graph()
    graph.add_nodes_from(range(n))
    for (i, j), weight in sorted(weighted_pairs, key=lambda item: item[0]):
        graph.add_edge(i, j, weight=weight)
    tree = nx.minimum_spanning_tree(graph, algorithm='kruskal')
    return frozenset(edge_key(i, j) for i, j in tree.edges())


def emst(ps, metric: MetricSpec | None = None) -> SkeletonGraph:
    """
    Minimum spanning tree of the complete graph weighted by `metric`.

    In the Euclidean plane the tree is searched among Delaunay edges only.
    """
    ps = _as_point_set(ps)
    metric = metric or MetricSpec.euclidean()
    n = len(ps)
    pairs = None
    if metric.is_euclidean and n > 3:
        try:
            pairs = sorted(delaunay(ps).edges)
        except CollinearInput:
            pairs = None
    if pairs is None:
        pairs = list(itertools.combinations(range(n), 2))
    weighted = [((i, j), distance(metric, ps[i], ps[j])) for i, j in pairs]
    return SkeletonGraph(n, kruskal_tree(n, weighted), math.nan, metric.label, Variant.CLOSED, 'emst')


def sorted_path_edges(ps) -> frozenset:
    """Consecutive pairs along the line through collinear points."""
    ps = _as_point_set(ps)
    order = np.lexsort((ps.coords[:, 1], ps.coords[:, 0]))
    return frozenset(edge_key(a, b) for a, b in zip(order[:-1], order[1:]))


def inclusion_chain_check(ps, betas=CHAIN_BETAS, variant=Variant.CLOSED,
                          threads: int = 1) -> ChainReport:
    """
    Check MST <= RNG <= G_b' <= G_b <= GG <= DT for consecutive betas b <= b'.

    The middle of the chain, RNG through GG, is built in `variant`. MST is
    compared with the open RNG and DT with the closed Gabriel graph.
    Violating edges are recorded in the report.
    """
    ps = _as_point_set(ps)
    variant = as_variant(variant)
    betas = sorted(float(b) for b in betas)
    if any(b < 1 or b > 2 for b in betas):
        raise ValueError(f"Chain betas must lie in [1, 2], got {betas}")
    euclidean = MetricSpec.euclidean()
    report = ChainReport(f"Inclusion chain on {len(ps)} points")
    if len(ps) < 2:
        return report

    tree = emst(ps, euclidean).edges
    open_relative = rng(ps).edges
    closed_gabriel = gabriel_graph(ps).edges
    try:
        triangulation = delaunay(ps).edges
    except CollinearInput:
        report.notes.append('collinear input: DT replaced by the sorted path')
        triangulation = sorted_path_edges(ps)

    skeletons = {
        b: beta_skeleton_bruteforce(ps, euclidean, b, variant, threads=threads).edges
        for b in sorted(set(betas) | {1.0, 2.0})
    }
    relative, gabriel = skeletons[2.0], skeletons[1.0]
    report.require('MST', tree, 'RNG open', open_relative)
    chain = betas or [1.0, 2.0]
    report.require(f"RNG {variant}", relative, f"G_{chain[-1]:g}", skeletons[chain[-1]])
    for low, high in zip(chain[:-1], chain[1:]):
        report.require(f"G_{high:g}", skeletons[high], f"G_{low:g}", skeletons[low])
    report.require(f"G_{chain[0]:g}", skeletons[chain[0]], f"GG {variant}", gabriel)
    report.require('GG closed', closed_gabriel, 'DT', triangulation)
    return report


def membership_recheck(ps, metric: MetricSpec, beta, variant=Variant.CLOSED,
                       eps: float = EPS_GEOM) -> SkeletonGraph:
    """
    Re-decide every pair one point at a time with scalar distances.

    Shares only lens construction with beta_skeleton_bruteforce, so it serves
    as an oracle for the vectorized membership test.
    """
    ps = _as_point_set(ps)
    variant = as_variant(variant)
    closed = variant is Variant.CLOSED
    n = len(ps)
    edges = set()
    for i, j in itertools.combinations(range(n), 2):
        lens = lens_construct(metric, ps[i], ps[j], beta)
        tol = lens.tolerance(eps)
        blocked = False
        for k in range(n):
            if k in (i, j):
                continue
            q = ps[k]
            if lens.c1 is None:
                inside = point_in_lens(lens, q, variant, eps)
            else:
                d1 = distance(metric, q, lens.c1)
                d2 = distance(metric, q, lens.c2)
                if closed:
                    inside = d1 <= lens.radius + tol and d2 <= lens.radius + tol
                else:
                    inside = d1 < lens.radius - tol and d2 < lens.radius - tol
            if inside:
                blocked = True
                break
        if not blocked:
            edges.add((i, j))
    return SkeletonGraph(n, frozenset(edges), float(beta), metric.label, variant, 'recheck')


def lp_oracle_check(ps, metric: MetricSpec, betas=(0.25, 0.5, 1.0, 1.5, 2.0, 3.0),
                    variants=(Variant.OPEN, Variant.CLOSED), eps: float = EPS_GEOM,
                    threads: int = 1) -> ChainReport:
    """Brute force against the scalar re-check, and circle-based within lens-based in L2."""
    ps = _as_point_set(ps)
    report = ChainReport(f"{metric.label} oracle on {len(ps)} points")
    for variant in variants:
        variant = as_variant(variant)
        for beta in betas:
            brute = beta_skeleton_bruteforce(ps, metric, beta, variant, eps, threads).edges
            report.require_equal(
                f"brute G_{beta:g} {variant}", brute,
                f"recheck G_{beta:g} {variant}", membership_recheck(ps, metric, beta, variant, eps).edges,
            )
            if metric.is_euclidean and beta >= 1:
                report.require(
                    f"circle G_{beta:g} {variant}", circle_based_skeleton(ps, beta, variant, metric, eps).edges,
                    f"lens G_{beta:g} {variant}", brute,
                )
    return report
