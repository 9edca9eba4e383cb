"""
Beta-skeletons of a vertex subset U (the sites) of an edge-weighted graph.

Distances are shortest-path lengths, extended to points inside edges. A lens
for sites (u1, u2) at distance D is

    {q : d(q, c1) <= beta*D/2 and d(q, c2) <= beta*D/2}

for centres with d(c1, u1) = beta*D/2, d(c1, u2) = |beta - 2|*D/2 (c2 with the
roles swapped) and d(c1, c2) = (beta - 1)*D. Only sites are tested for lens
membership.

Skeleton edges are indexed by site position (the order of `sites`), not by
vertex id.
"""
import itertools
import logging
import math
from dataclasses import dataclass, field

import networkx as nx
import numpy as np
from scipy.sparse.csgraph import csgraph_from_dense, shortest_path

from skeletons.exceptions import BetaOutOfRange, DisconnectedGraph, NoCycle
from skeletons.services.parallel import map_pairs
from skeletons.services.planar import kruskal_tree
from skeletons.services.skeleton_graph import (
    ChainReport, SkeletonGraph, Variant, as_variant, edge_key, format_beta,
)

logger = logging.getLogger(__name__)

EPS_WEIGHT = 1e-9
GRAPH_METRIC = 'graph'


@dataclass(frozen=True)
class Vertex:
    id: int


@dataclass(frozen=True)
class EdgePoint:
    """Point on edge `edge` at fraction `t` of its weight from the edge's first endpoint."""
    edge: int
    t: float


GraphPoint = Vertex | EdgePoint


@dataclass
class WeightedGraph:
    """
    Connected graph with positive edge weights and a set of site vertices.

    Parallel edges are allowed; self-loops are not. Connectivity is checked
    when distances are computed.
    """
    n_vertices: int
    sites: tuple
    edges: list
    coordinates: dict = field(default_factory=dict)

    def __post_init__(self):
        self.n_vertices = int(self.n_vertices)
        self.sites = tuple(int(s) for s in self.sites)
        if not self.sites:
            raise ValueError("A weighted graph needs at least one site")
        if len(set(self.sites)) != len(self.sites):
            raise ValueError("Sites must be distinct")
        for site in self.sites:
            if not 0 <= site < self.n_vertices:
                raise ValueError(f"Site {site} outside 0..{self.n_vertices - 1}")
        normalized = []
        for a, b, w in self.edges:
            a, b, w = int(a), int(b), float(w)
            if not (0 <= a < self.n_vertices and 0 <= b < self.n_vertices):
                raise ValueError(f"Edge ({a}, {b}) outside 0..{self.n_vertices - 1}")
            if a == b:
                raise ValueError(f"Self-loop on vertex {a}")
            if not (math.isfinite(w) and w > 0):
                raise ValueError(f"Edge ({a}, {b}) needs a positive finite weight, got {w}")
            normalized.append((a, b, w))
        self.edges = normalized

    @classmethod
    def from_json(cls, data: dict) -> 'WeightedGraph':
        """Build from {"vertices": n, "sites": [...], "edges": [[a, b, w], ...]}."""
        coordinates = {int(k): tuple(v) for k, v in data.get('coordinates', {}).items()}
        return cls(data['vertices'], data['sites'], data['edges'], coordinates)

    def to_json(self) -> dict:
        data = {
            'vertices': self.n_vertices,
            'sites': list(self.sites),
            'edges': [[a, b, w] for a, b, w in self.edges],
        }
        if self.coordinates:
            data['coordinates'] = {str(k): list(v) for k, v in sorted(self.coordinates.items())}
        return data

    @classmethod
    def random(cls, n_vertices: int, n_sites: int, seed: int, chords: int | None = None) -> 'WeightedGraph':
        """
        Random 2-edge-connected graph: a Hamiltonian cycle plus random chords.

        Weights are decimal rationals in [1, 10] with six digits, so ties
        between path lengths are rare.
        """
        if n_vertices < 3:
            raise ValueError(f"Need at least 3 vertices, got {n_vertices}")
        rng = np.random.default_rng(seed)
        order = rng.permutation(n_vertices)
        pairs = [(int(order[k]), int(order[(k + 1) % n_vertices])) for k in range(n_vertices)]
        if chords is None:
            chords = n_vertices // 2
        present = {edge_key(a, b) for a, b in pairs}
        attempts = 0
        while chords > 0 and attempts < 50 * n_vertices:
            attempts += 1
            a, b = (int(v) for v in rng.choice(n_vertices, size=2, replace=False))
            if edge_key(a, b) in present:
                continue
            present.add(edge_key(a, b))
            pairs.append((a, b))
            chords -= 1
        weights = rng.integers(10 ** 6, 10 ** 7, size=len(pairs), endpoint=True) / 10 ** 6
        sites = sorted(int(s) for s in rng.choice(n_vertices, size=min(n_sites, n_vertices), replace=False))
        angles = 2 * np.pi * np.arange(n_vertices) / n_vertices
        coordinates = {int(v): (float(np.cos(angles[k])), float(np.sin(angles[k]))) for k, v in enumerate(order)}
        return cls(n_vertices, sites, [(a, b, float(w)) for (a, b), w in zip(pairs, weights)], coordinates)

    @property
    def max_weight(self) -> float:
        return max((w for _, _, w in self.edges), default=1.0)

    def tolerance(self, eps: float = EPS_WEIGHT) -> float:
        return eps * self.max_weight

    def edge_point(self, edge: int, t: float, eps: float = EPS_WEIGHT) -> GraphPoint:
        """Point on `edge` at fraction t, as a Vertex when t is 0 or 1 (within eps)."""
        a, b, _ = self.edges[edge]
        t = float(t)
        if t < -eps or t > 1 + eps:
            raise ValueError(f"Edge fraction must lie in [0, 1], got {t}")
        if t <= eps:
            return Vertex(a)
        if t >= 1 - eps:
            return Vertex(b)
        return EdgePoint(edge, t)


@dataclass
class DistanceIndex:
    """Vertex-to-vertex shortest-path distances."""
    table: np.ndarray

    def __call__(self, u: int, v: int) -> float:
        return float(self.table[u, v])

    def __len__(self):
        return len(self.table)


def apsp(g: WeightedGraph, method: str = 'J') -> DistanceIndex:
    """
    All-pairs shortest paths through scipy's csgraph (Johnson by default).

    Raises DisconnectedGraph when some vertex cannot be reached.
    """
    dense = np.full((g.n_vertices, g.n_vertices), np.inf)
    for a, b, w in g.edges:
        if w < dense[a, b]:
            dense[a, b] = dense[b, a] = w
    graph = csgraph_from_dense(dense, null_value=np.inf)
    table = shortest_path(graph, method=method, directed=False)
    if not np.all(np.isfinite(table)):
        unreachable = int(np.count_nonzero(~np.isfinite(table[0])))
        raise DisconnectedGraph(f"Graph is disconnected: {unreachable} vertices unreachable from vertex 0")
    return DistanceIndex(table)


def _anchors(g: WeightedGraph, p: GraphPoint) -> list[tuple[int, float]]:
    """(vertex, offset) pairs through which shortest paths leave `p`."""
    if isinstance(p, Vertex):
        return [(p.id, 0.0)]
    a, b, w = g.edges[p.edge]
    return [(a, p.t * w), (b, (1 - p.t) * w)]


def graphpoint_distance(g: WeightedGraph, idx: DistanceIndex, p: GraphPoint, u: int) -> float:
    """
    Shortest-path distance from a graph point to vertex `u`.

    >>> triangle = WeightedGraph(3, [0, 1, 2], [(0, 1, 1), (1, 2, 1), (0, 2, 1)])
    >>> graphpoint_distance(triangle, apsp(triangle), EdgePoint(0, 0.5), 2)
    1.5
    """
    return min(offset + idx(anchor, u) for anchor, offset in _anchors(g, p))


def points_distance(g: WeightedGraph, idx: DistanceIndex, p: GraphPoint, q: GraphPoint) -> float:
    """Distance between two graph points, including the direct route along a shared edge."""
    best = min(
        op + oq + idx(ap, aq)
        for ap, op in _anchors(g, p)
        for aq, oq in _anchors(g, q)
    )
    if isinstance(p, EdgePoint) and isinstance(q, EdgePoint) and p.edge == q.edge:
        best = min(best, abs(p.t - q.t) * g.edges[p.edge][2])
    return best


def _site_distances(g: WeightedGraph, idx: DistanceIndex, p: GraphPoint, sites: np.ndarray) -> np.ndarray:
    rows = [offset + idx.table[anchor, sites] for anchor, offset in _anchors(g, p)]
    return np.min(rows, axis=0)


def _points_at(g: WeightedGraph, idx: DistanceIndex, a: int, b: int, ra: float, rb: float,
               eps: float) -> list[GraphPoint]:
    """
    Every graph point at distance ra from `a` and rb from `b`.

    On an edge (x, y, w) the distance to a vertex is the tent
    min(t*w + d(x, .), (1 - t)*w + d(y, .)); each rising or falling piece
    meets the level ra at most once, and the candidates are kept when the
    other tent also hits rb.
    """
    tol = g.tolerance(eps)
    found = []
    seen = set()
    for edge, (x, y, w) in enumerate(g.edges):
        candidates = ((ra - idx(x, a)) / w, 1 - (ra - idx(y, a)) / w)
        for t in candidates:
            if t < -eps or t > 1 + eps:
                continue
            t = min(max(t, 0.0), 1.0)
            to_a = min(t * w + idx(x, a), (1 - t) * w + idx(y, a))
            to_b = min(t * w + idx(x, b), (1 - t) * w + idx(y, b))
            if abs(to_a - ra) > tol or abs(to_b - rb) > tol:
                continue
            point = g.edge_point(edge, t, eps)
            if point not in seen:
                seen.add(point)
                found.append(point)
    return found


def candidate_centers(g: WeightedGraph, idx: DistanceIndex, u1: int, u2: int, beta: float,
                      eps: float = EPS_WEIGHT) -> list[GraphPoint]:
    """
    Lens centre candidates for sites u1, u2 (vertex ids).

    Points with d(c, u1) = beta*D/2 and d(c, u2) = |beta - 2|*D/2, followed
    by those with the roles swapped.
    """
    beta = float(beta)
    if beta < 1:
        raise ValueError(f"Lens centres need beta >= 1, got {beta}")
    if u1 == u2:
        raise ValueError(f"Sites must differ, got {u1} twice")
    d = idx(u1, u2)
    far, near = beta * d / 2, abs(beta - 2) * d / 2
    first = _points_at(g, idx, u1, u2, far, near, eps)
    second = [p for p in _points_at(g, idx, u2, u1, far, near, eps) if p not in first]
    return first + second


def _two_disjoint_paths_length(g: WeightedGraph, source: int, target: int) -> float | None:
    """
    Minimum total weight of two edge-disjoint source-target paths, None if there are none.

    Shortest path first, then its arcs reversed with negated weight and a
    second shortest path over the residual graph; overlapping edges cancel.
    """
    graph = nx.MultiDiGraph()
    graph.add_nodes_from(range(g.n_vertices))
    for key, (a, b, w) in enumerate(g.edges):
        graph.add_edge(a, b, key=key, weight=w)
        graph.add_edge(b, a, key=key, weight=w)
    try:
        first_nodes = nx.dijkstra_path(graph, source, target, weight='weight')
    except nx.NetworkXNoPath:
        return None

    first = 0.0
    for u, v in zip(first_nodes[:-1], first_nodes[1:]):
        # Ties prefer the lowest edge id
        key, weight = min(((k, data['weight']) for k, data in graph[u][v].items()),
                          key=lambda item: (item[1], item[0]))
        first += weight
        graph.remove_edge(u, v, key=key)
        graph[v][u][key]['weight'] = -weight
    try:
        second = nx.bellman_ford_path_length(graph, source, target, weight='weight')
    except nx.NetworkXNoPath:
        return None
    return first + second


def _pair_bound(cycle: float | None, d: float) -> float:
    if cycle is None:
        return 2.0
    return cycle / (2 * d) + 1


def pair_beta_bounds(g: WeightedGraph, idx: DistanceIndex | None = None) -> dict:
    """
    Per site-pair validity bound, keyed by site-position pair.

    Values are (bound, cycle) with cycle None for pairs joined only through
    bridges; those pairs get bound 2.
    """
    idx = idx or apsp(g)
    bounds = {}
    for i, j in itertools.combinations(range(len(g.sites)), 2):
        u1, u2 = g.sites[i], g.sites[j]
        cycle = _two_disjoint_paths_length(g, u1, u2)
        bounds[(i, j)] = (_pair_bound(cycle, idx(u1, u2)), cycle)
    return bounds


def beta_bound(g: WeightedGraph, idx: DistanceIndex | None = None) -> float:
    """
    Largest beta for which every site pair has well-defined lenses.

    >>> triangle = WeightedGraph(3, [0, 1, 2], [(0, 1, 1), (1, 2, 1), (0, 2, 1)])
    >>> beta_bound(triangle)
    2.5
    """
    bounds = pair_beta_bounds(g, idx)
    missing = sorted(pair for pair, (_, cycle) in bounds.items() if cycle is None)
    if missing:
        raise NoCycle(f"{len(missing)} site pairs have no two edge-disjoint paths", missing)
    if not bounds:
        return math.inf
    return min(bound for bound, _ in bounds.values())


def shortest_path_ties(g: WeightedGraph, idx: DistanceIndex, eps: float = EPS_WEIGHT) -> list[tuple[int, int]]:
    """Site pairs (by position) joined by more than one shortest path."""
    tol = g.tolerance(eps)
    if not g.edges:
        return []
    ends = np.array([(a, b) for a, b, _ in g.edges] + [(b, a) for a, b, _ in g.edges])
    weights = np.array([w for _, _, w in g.edges] * 2)
    tied = []
    for i, j in itertools.combinations(range(len(g.sites)), 2):
        s, t = g.sites[i], g.sites[j]
        from_s, to_t = idx.table[s], idx.table[:, t]
        on_path = np.abs(from_s + to_t - from_s[t]) <= tol
        tight = (
            on_path[ends[:, 0]] & on_path[ends[:, 1]]
            & (np.abs(from_s[ends[:, 0]] + weights - from_s[ends[:, 1]]) <= tol)
        )
        incoming = np.bincount(ends[tight, 1], minlength=g.n_vertices)
        if np.any(incoming > 1):
            tied.append((i, j))
    return tied


def weighted_beta_skeleton(g: WeightedGraph, beta, variant=Variant.CLOSED, strict: bool = False,
                           idx: DistanceIndex | None = None, eps: float = EPS_WEIGHT,
                           threads: int = 1) -> SkeletonGraph:
    """
    Lens-based beta-skeleton of the sites for 1 <= beta.

    A pair whose validity bound is below beta has no well-defined lenses: it
    is recorded in `undefined_pairs` and left out, or with `strict=True` the
    whole run fails with BetaOutOfRange.
    """
    beta = float(beta)
    if math.isnan(beta) or beta < 1:
        raise BetaOutOfRange(f"Weighted skeletons need beta >= 1, got {beta}; see small_beta_advisory")
    variant = as_variant(variant)
    closed = variant is Variant.CLOSED
    idx = idx or apsp(g)
    tol = g.tolerance(eps)
    sites = np.array(g.sites)
    n = len(sites)
    pairs = list(itertools.combinations(range(n), 2))

    ties = shortest_path_ties(g, idx, eps)
    if ties:
        logger.warning(f"{len(ties)} site pairs have tied shortest paths")

    bounds = pair_beta_bounds(g, idx) if beta > 2 else {}
    undefined = sorted(pair for pair, (bound, _) in bounds.items() if beta > bound + tol)
    if undefined and strict:
        raise BetaOutOfRange(
            f"beta={format_beta(beta)} exceeds the lens bound of {len(undefined)} site pairs", undefined,
        )
    blocked_pairs = set(undefined)

    def decide(pair):
        if pair in blocked_pairs:
            return None
        i, j = pair
        u1, u2 = int(sites[i]), int(sites[j])
        d = idx(u1, u2)
        far, near = beta * d / 2, abs(beta - 2) * d / 2
        radius = far
        others = np.delete(sites, [i, j])
        first = _points_at(g, idx, u1, u2, far, near, eps)
        second = _points_at(g, idx, u2, u1, far, near, eps)
        reach = {c: _site_distances(g, idx, c, others) for c in first + second}
        for c1 in first:
            for c2 in second:
                if abs(points_distance(g, idx, c1, c2) - (beta - 1) * d) > tol:
                    continue
                d1, d2 = reach[c1], reach[c2]
                if closed:
                    inside = (d1 <= radius + tol) & (d2 <= radius + tol)
                else:
                    inside = (d1 < radius - tol) & (d2 < radius - tol)
                if not inside.any():
                    return (c1, c2)
        return None

    witnesses = {}
    for pair, witness in zip(pairs, map_pairs(decide, pairs, threads)):
        if witness is not None:
            witnesses[pair] = witness

    if undefined:
        logger.warning(f"Partial weighted run: {len(undefined)} site pairs above their lens bound")
    logger.debug(f"Weighted skeleton beta={format_beta(beta)} {variant}: {len(witnesses)} edges")
    return SkeletonGraph(
        n, frozenset(witnesses), beta, GRAPH_METRIC, variant, 'weighted',
        witnesses=witnesses, undefined_pairs=undefined,
    )


def graph_mst(g: WeightedGraph, idx: DistanceIndex | None = None) -> SkeletonGraph:
    """MST of the complete graph on the sites weighted by shortest-path distance."""
    idx = idx or apsp(g)
    n = len(g.sites)
    weighted = [
        ((i, j), idx(g.sites[i], g.sites[j]))
        for i, j in itertools.combinations(range(n), 2)
    ]
    return SkeletonGraph(n, kruskal_tree(n, weighted), math.nan, GRAPH_METRIC, Variant.CLOSED, 'graph-mst')


def graph_delaunay(g: WeightedGraph, idx: DistanceIndex | None = None, eps: float = EPS_WEIGHT) -> SkeletonGraph:
    """
    Sites u1, u2 are joined iff some graph point is strictly closer to both
    of them than to every other site.

    The margin min_others d(c, u) - max(d(c, u1), d(c, u2)) is piecewise
    linear along each edge, so it is evaluated at the edge ends and at every
    crossing of a rising tent piece with a falling one.
    """
    idx = idx or apsp(g)
    tol = g.tolerance(eps)
    sites = np.array(g.sites)
    n = len(sites)
    edges = set()
    for x, y, w in g.edges:
        from_x = idx.table[x, sites]
        from_y = idx.table[y, sites]
        crossings = (w + from_y[:, None] - from_x[None, :]) / (2 * w)
        ts = np.unique(np.clip(np.concatenate([crossings.ravel(), [0.0, 1.0]]), 0.0, 1.0))
        reach = np.minimum(ts[None, :] * w + from_x[:, None], (1 - ts[None, :]) * w + from_y[:, None])
        for i, j in itertools.combinations(range(n), 2):
            if (i, j) in edges:
                continue
            nearest = np.max(reach[[i, j]], axis=0)
            others = np.delete(reach, [i, j], axis=0)
            rivals = others.min(axis=0) if len(others) else np.full(len(ts), np.inf)
            if np.any(rivals - nearest > tol):
                edges.add((i, j))
    return SkeletonGraph(n, frozenset(edges), math.nan, GRAPH_METRIC, Variant.OPEN, 'graph-delaunay')


@dataclass
class SmallBetaAdvice:
    """Whether a beta < 1 lens can exist for one site pair."""
    pair: tuple
    distance: float
    required_cycle: float
    shortest_cycle: float | None
    has_equidistant_points: bool

    @property
    def feasible(self) -> bool:
        return (
            self.has_equidistant_points
            and self.shortest_cycle is not None
            and self.shortest_cycle >= self.required_cycle
        )


def small_beta_advisory(g: WeightedGraph, beta, idx: DistanceIndex | None = None,
                        eps: float = EPS_WEIGHT) -> list[SmallBetaAdvice]:
    """Per site pair: required cycle D(1 + 1/beta), shortest cycle, and points at D/(2 beta) from both."""
    beta = float(beta)
    if not 0 < beta < 1:
        raise ValueError(f"Advisory applies to 0 < beta < 1, got {beta}")
    idx = idx or apsp(g)
    advice = []
    for (i, j), (_, cycle) in sorted(pair_beta_bounds(g, idx).items()):
        u1, u2 = g.sites[i], g.sites[j]
        d = idx(u1, u2)
        radius = d / (2 * beta)
        advice.append(SmallBetaAdvice(
            (i, j), d, d * (1 + 1 / beta), cycle,
            bool(_points_at(g, idx, u1, u2, radius, radius, eps)),
        ))
    return advice


def weighted_chain_check(g: WeightedGraph, betas=(1.0, 1.5, 2.0), idx: DistanceIndex | None = None,
                         eps: float = EPS_WEIGHT, threads: int = 1, variant=Variant.CLOSED) -> ChainReport:
    """
    Check MST <= RNG <= G_b' <= G_b <= GG <= DG over the sites for betas in [1, 2].

    RNG through GG are built in `variant`; MST is compared with the open RNG
    and DG with the closed Gabriel graph.
    """
    variant = as_variant(variant)
    betas = sorted(float(b) for b in betas)
    if any(b < 1 or b > 2 for b in betas):
        raise ValueError(f"Chain betas must lie in [1, 2], got {betas}")
    idx = idx or apsp(g)
    report = ChainReport(f"Weighted chain on {len(g.sites)} sites")
    if len(g.sites) < 2:
        return report

    def skeleton(beta, lens_variant):
        return weighted_beta_skeleton(g, beta, lens_variant, idx=idx, eps=eps, threads=threads).edges

    tree = graph_mst(g, idx).edges
    open_relative = skeleton(2.0, Variant.OPEN)
    closed_gabriel = skeleton(1.0, Variant.CLOSED)
    triangulation = graph_delaunay(g, idx, eps).edges
    skeletons = {b: skeleton(b, variant) for b in sorted(set(betas) | {1.0, 2.0})}
    chain = betas or [1.0, 2.0]

    report.require('MST', tree, 'RNG open', open_relative)
    report.require(f"RNG {variant}", skeletons[2.0], f"G_{chain[-1]:g}", skeletons[chain[-1]])
    for low, high in zip(chain[:-1], chain[1:]):
        report.require(f"G_{high:g}", skeletons[high], f"G_{low:g}", skeletons[low])
    report.require(f"G_{chain[0]:g}", skeletons[chain[0]], f"GG {variant}", skeletons[1.0])
    report.require('GG closed', closed_gabriel, 'DG', triangulation)
    return report
