"""
Beta-skeletons under l_1 and l_infinity.

In these metrics lens centres are not unique, so an edge exists iff some lens
of the generator pair's family is empty. Everything is computed in the frame
where discs are axis-aligned squares (see metric.chebyshev_frame). In that
frame, for a pair with span D along its longer axis and rise h <= D along the
other (the slide axis):

- beta < 1: the single lens is the rectangle with the generators as opposite
  corners, independent of beta;
- 1 <= beta < 2: lenses are [0, D] x [max(a, g) - beta*D/2, min(a, g) + beta*D/2]
  over the admissible centre offsets a, g with |a - g| <= (beta - 1) D;
- beta >= 2: the single lens [0, D] x [h - D, D].

Two sweeps compute the skeletons: a quadratic left-to-right sweep for beta < 1
and a stabbing-tree sweep over candidate edges for beta >= 1.
"""
import itertools
import logging
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.spatial import cKDTree

from skeletons.exceptions import DegenerateGenerators, InvalidCandidates, UnsupportedMetric
from skeletons.services.interval_tree import StabbingTree
from skeletons.services.lenses import (
    EPS_GEOM, FORM_DISCS, Lens, check_beta, lens_contains, rectangle_lens,
)
from skeletons.services.metric import (
    MetricSpec, Point2, check_point, chebyshev_frame, distance, from_chebyshev_frame,
)
from skeletons.services.planar import CHAIN_BETAS, emst
from skeletons.services.skeleton_graph import (
    ChainReport, PointSet, SkeletonGraph, Variant, as_variant, edge_key, format_beta,
)

logger = logging.getLogger(__name__)

METHOD_EXHAUSTIVE = 'exhaustive'
METHOD_PRUNED = 'pruned'

# Event order within equal sweep keys
_FIRST, _SECOND, _EXIT = 0, 1, 2
_POINT, _INSERT, _REMOVE = 'point', 'insert', 'remove'


def _rectilinear(metric: MetricSpec | None) -> MetricSpec:
    metric = metric or MetricSpec.l1()
    if not metric.is_rectilinear:
        raise UnsupportedMetric(f"Expected l1 or linf, got {metric.label}")
    return metric


@dataclass(frozen=True)
class RotatedFrame:
    """Bijection into the frame where the metric's discs are axis-aligned squares."""
    metric: MetricSpec = MetricSpec.l1()

    def forward(self, coords) -> np.ndarray:
        return chebyshev_frame(self.metric, coords)

    def inverse(self, coords) -> np.ndarray:
        return from_chebyshev_frame(self.metric, coords)


@dataclass(frozen=True)
class PairFrame:
    """Local coordinates of one generator pair inside the square-disc frame."""
    axis: int
    origin: tuple
    t_sign: float
    s_sign: float
    span: float
    rise: float

    @classmethod
    def of(cls, a, b) -> 'PairFrame':
        delta = (b[0] - a[0], b[1] - a[1])
        axis = 0 if abs(delta[0]) >= abs(delta[1]) else 1
        t, s = delta[axis], delta[1 - axis]
        return cls(
            axis, (float(a[0]), float(a[1])),
            1.0 if t >= 0 else -1.0, 1.0 if s >= 0 else -1.0,
            abs(float(t)), abs(float(s)),
        )

    def to_local(self, coords):
        coords = np.atleast_2d(coords)
        t = self.t_sign * (coords[:, self.axis] - self.origin[self.axis])
        s = self.s_sign * (coords[:, 1 - self.axis] - self.origin[1 - self.axis])
        return t, s

    def to_frame(self, t, s) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        s = np.asarray(s, dtype=float)
        out = np.empty(np.broadcast(t, s).shape + (2,))
        out[..., self.axis] = self.origin[self.axis] + self.t_sign * t
        out[..., 1 - self.axis] = self.origin[1 - self.axis] + self.s_sign * s
        return out


def center_ranges(span: float, rise: float, beta: float):
    """Admissible slide offsets of c1 and c2 for 1 <= beta <= 2."""
    half = beta * span / 2
    short = (2 - beta) * span / 2
    alpha = (max(-half, rise - short), min(half, rise + short))
    gamma = (max(-short, rise - half), min(short, rise + half))
    return alpha, gamma


def _offsets_fit(p0, p1, q0, q1, x, y, separation, tol) -> bool:
    """Some p in [p0, p1] with p >= x and q in [q0, q1] with q <= y, |p - q| <= separation."""
    low = max(p0, x)
    high = min(q1, y)
    if low > p1 or high < q0:
        return False
    gap = max(0.0, low - high, q0 - p1)
    return gap <= separation + tol


def family_admits_empty_lens(span: float, rise: float, beta: float, below: float, above: float,
                             variant=Variant.CLOSED, tol: float = 0.0) -> bool:
    """
    Decide whether some lens of the family avoids every blocker.

    `below` is the highest blocker slide offset at or under the band midpoint
    and `above` the lowest one over it, both relative to the lower generator
    (use -inf / inf when absent). Only blockers whose span coordinate lies in
    the lens span range are meaningful.
    """
    closed = as_variant(variant) is Variant.CLOSED
    if beta >= 2:
        low, high = rise - span, span
        if closed:
            return low > below + tol and high < above - tol
        return low >= below - tol and high <= above + tol

    half = beta * span / 2
    separation = (beta - 1) * span
    (a0, a1), (g0, g1) = center_ranges(span, rise, beta)
    shift = tol if closed else -tol
    x = below + half + shift
    y = above - half - shift
    return (
        _offsets_fit(a0, a1, g0, g1, x, y, separation, tol)
        or _offsets_fit(g0, g1, a0, a1, x, y, separation, tol)
    )


def _blocker_bounds(frame_pair: PairFrame, others_frame: np.ndarray, closed: bool, tol: float):
    """Nearest blockers under and over the band midpoint, in local slide offsets."""
    t, s = frame_pair.to_local(others_frame)
    if closed:
        in_span = (t >= -tol) & (t <= frame_pair.span + tol)
    else:
        in_span = (t > tol) & (t < frame_pair.span - tol)
    s = s[in_span]
    middle = frame_pair.rise / 2
    lower = s[s <= middle]
    upper = s[s > middle]
    below = float(lower.max()) if lower.size else -math.inf
    above = float(upper.min()) if upper.size else math.inf
    return below, above


def is_side_parallel(pair: PairFrame, tol: float) -> bool:
    """Whether the generators lie on a line parallel to a disc side."""
    return pair.rise <= tol


def side_parallel_admits_empty_lens(pair: PairFrame, others_frame: np.ndarray, beta: float,
                                    variant=Variant.CLOSED, tol: float = 0.0) -> bool:
    """
    Family test for a pair parallel to a disc side, against explicit blockers.

    Points strictly between the generators on their line lie in every closed
    family lens. At beta = 1 an open lens can sit on either side of that line
    with those points on its boundary, so both placements are tried.
    """
    closed = as_variant(variant) is Variant.CLOSED
    t, s = pair.to_local(others_frame)
    if closed:
        in_span = (t >= -tol) & (t <= pair.span + tol)
    else:
        in_span = (t > tol) & (t < pair.span - tol)
    s = s[in_span]
    on_line = np.abs(s) <= tol
    if closed and on_line.any():
        return False
    lower = s[s < -tol]
    upper = s[s > tol]
    below = float(lower.max()) if lower.size else -math.inf
    above = float(upper.min()) if upper.size else math.inf
    if not on_line.any():
        return family_admits_empty_lens(pair.span, pair.rise, beta, below, above, variant, tol)
    return (
        family_admits_empty_lens(pair.span, pair.rise, beta, 0.0, above, variant, tol)
        or family_admits_empty_lens(pair.span, pair.rise, beta, below, 0.0, variant, tol)
    )


# =============================================================================
# Lens families
# =============================================================================


@dataclass
class LensFamilyL1:
    """Representative lenses of a generator pair under l_1 or l_infinity."""
    v1: Point2
    v2: Point2
    beta: float
    metric: MetricSpec
    representatives: list = field(default_factory=list)

    @property
    def frame(self) -> PairFrame:
        a, b = chebyshev_frame(self.metric, np.array([self.v1, self.v2]))
        return PairFrame.of(a, b)

    @property
    def covers_beta_two_lens(self) -> bool:
        """Whether the minimal lenses of a 1 < beta < 2 family sweep out the whole beta = 2 lens."""
        pair = self.frame
        return self.beta >= 2 or pair.rise >= (self.beta - 1) * pair.span - EPS_GEOM * pair.span


def _discs_lens(metric: MetricSpec, pair: PairFrame, v1, v2, beta, c1_local, c2_local, radius) -> Lens:
    centers = from_chebyshev_frame(metric, pair.to_frame([c1_local[0], c2_local[0]], [c1_local[1], c2_local[1]]))
    c1 = Point2(float(centers[0, 0]), float(centers[0, 1]))
    c2 = Point2(float(centers[1, 0]), float(centers[1, 1]))
    return Lens(metric, FORM_DISCS, v1, v2, beta, c1, c2, radius)


def small_beta_discs(metric: MetricSpec, v1, v2, beta: float) -> Lens:
    """The two discs of radius d/(2 beta) through both generators whose intersection is the rectangle."""
    a, b = chebyshev_frame(metric, np.array([v1, v2]))
    pair = PairFrame.of(a, b)
    radius = pair.span / (2 * beta)
    return _discs_lens(metric, pair, v1, v2, beta, (radius, pair.rise - radius), (pair.span - radius, radius), radius)


def canonical_lenses_l1(v1, v2, beta, metric: MetricSpec | None = None) -> LensFamilyL1:
    """
    Representatives of the lens family of (v1, v2).

    beta < 1 gives the rectangle, beta >= 2 the beta = 2 lens (c1 = v2,
    c2 = v1, radius d). For 1 <= beta < 2 the lowest and highest minimal
    lenses are returned (one lens when they coincide).
    """
    metric = _rectilinear(metric)
    v1 = check_point(v1)
    v2 = check_point(v2)
    if v1 == v2:
        raise DegenerateGenerators(f"Generators coincide at {v1}")
    beta = check_beta(beta)
    family = LensFamilyL1(v1, v2, beta, metric)

    if beta < 1:
        family.representatives.append(rectangle_lens(metric, v1, v2, beta))
        return family
    d = distance(metric, v1, v2)
    if beta >= 2:
        family.representatives.append(Lens(metric, FORM_DISCS, v1, v2, beta, v2, v1, d))
        return family

    pair = family.frame
    span, rise = pair.span, pair.rise
    half = beta * span / 2
    short = (2 - beta) * span / 2
    (a0, a1), (g0, g1) = center_ranges(span, rise, beta)
    separation = min(beta - 1, 1.0) * span
    widest = max(min(separation, a1 - g0), min(separation, g1 - a0))

    # (lowest alpha, highest alpha, gamma = alpha - offset) for each orientation
    placements = []
    low, high = max(a0, g0 + widest), min(a1, g1 + widest)
    if low <= high + EPS_GEOM * span:
        placements.append((low, high, widest))
    low, high = max(a0, g0 - widest), min(a1, g1 - widest)
    if low <= high + EPS_GEOM * span:
        placements.append((low, high, -widest))

    def lens_at(alpha, offset):
        gamma = alpha - offset
        return _discs_lens(metric, pair, v1, v2, beta, (half, alpha), (short, gamma), d * beta / 2)

    # lo = max(alpha, gamma) - half: choose the extreme placements by lo
    candidates = []
    for low, high, offset in placements:
        for alpha in (low, high):
            candidates.append((max(alpha, alpha - offset) - half, alpha, offset))
    candidates.sort()
    lowest = candidates[0]
    highest = candidates[-1]
    family.representatives.append(lens_at(lowest[1], lowest[2]))
    if highest[0] - lowest[0] > EPS_GEOM * span:
        family.representatives.append(lens_at(highest[1], highest[2]))
    return family


# =============================================================================
# Rectangle sweep: 0 < beta < 1
# =============================================================================


def _rectangle_edge(frame: np.ndarray, i: int, j: int, closed: bool, eps: float) -> bool:
    low = np.minimum(frame[i], frame[j])
    high = np.maximum(frame[i], frame[j])
    tol = eps * float(np.max(high - low))
    mask = np.ones(len(frame), dtype=bool)
    mask[[i, j]] = False
    others = frame[mask]
    if closed:
        inside = np.all((others >= low - tol) & (others <= high + tol), axis=1)
    else:
        inside = np.all((others > low + tol) & (others < high - tol), axis=1)
    return not inside.any()


def sweep_small_beta(ps, variant=Variant.CLOSED, metric: MetricSpec | None = None,
                     eps: float = EPS_GEOM) -> SkeletonGraph:
    """
    Rectangle skeleton, equal to G_beta for every 0 < beta < 1, in O(n^2).

    Points are swept by increasing u. Every swept point keeps the list of
    later points ordered by w; a new point either appears in a list, which
    makes it a neighbour and removes everything beyond it on its side, or has
    already been removed. Because removals only cut a list from its far ends,
    each list is kept as its surviving w-window.
    """
    metric = _rectilinear(metric)
    ps = ps if isinstance(ps, PointSet) else PointSet(ps)
    closed = as_variant(variant) is Variant.CLOSED
    n = len(ps)
    frame = chebyshev_frame(metric, ps.coords)
    order = np.lexsort((frame[:, 1], frame[:, 0]))
    ws = frame[order, 1]
    window_low = np.full(n, -math.inf)
    window_high = np.full(n, math.inf)
    edges = set()

    for position in range(1, n):
        w = ws[position]
        low = window_low[:position]
        high = window_high[:position]
        earlier = ws[:position]
        if closed:
            present = (low < w) & (w < high)
            rising = present & (w >= earlier)
            falling = present & (w <= earlier)
        else:
            present = (low <= w) & (w <= high)
            rising = present & (w > earlier)
            falling = present & (w < earlier)
        for hit in np.flatnonzero(present):
            edges.add(edge_key(order[hit], order[position]))
        high[rising] = w
        low[falling] = w

    # Points sharing a u coordinate break the sweep order; decide their pairs directly
    values, counts = np.unique(frame[:, 0], return_counts=True)
    tied = np.flatnonzero(np.isin(frame[:, 0], values[counts > 1]))
    if tied.size:
        logger.debug(f"Re-deciding pairs of {tied.size} points with shared sweep coordinate")
        tied_set = set(int(k) for k in tied)
        for i in sorted(tied_set):
            for j in range(n):
                if j == i or (j in tied_set and j < i):
                    continue
                key = edge_key(i, j)
                if _rectangle_edge(frame, key[0], key[1], closed, eps):
                    edges.add(key)
                else:
                    edges.discard(key)

    return SkeletonGraph(n, frozenset(edges), 0.5, metric.label, as_variant(variant), 'sweep-small')


# =============================================================================
# Candidates and the stabbing-tree sweep: beta >= 1
# =============================================================================


def l1_delaunay_candidates(ps, metric: MetricSpec | None = None, method: str = METHOD_EXHAUSTIVE,
                           eps: float = EPS_GEOM) -> list[tuple[int, int]]:
    """
    Pairs admitting an empty open square disc touching both points.

    This is the open beta = 1 family skeleton, which contains every closed or
    open G_beta for beta >= 1. The exhaustive method scans every pair against
    every point (O(n^3)); the pruned method starts from the open rectangle
    skeleton, which contains the answer, and checks each pair against the
    points near it only.
    """
    metric = _rectilinear(metric)
    ps = ps if isinstance(ps, PointSet) else PointSet(ps)
    n = len(ps)
    frame = chebyshev_frame(metric, ps.coords)

    if method == METHOD_EXHAUSTIVE:
        pairs = list(itertools.combinations(range(n), 2))
        neighbourhoods = None
    elif method == METHOD_PRUNED:
        pairs = sorted(sweep_small_beta(ps, Variant.OPEN, metric, eps).edges)
        if not pairs:
            return []
        tree = cKDTree(frame)
        index = np.array(pairs)
        mids = (frame[index[:, 0]] + frame[index[:, 1]]) / 2
        radii = np.max(np.abs(frame[index[:, 0]] - frame[index[:, 1]]), axis=1) * (1 + 1e-6)
        neighbourhoods = tree.query_ball_point(mids, r=radii, p=np.inf)
    else:
        raise ValueError(f"Unknown candidate method: {method}")

    candidates = []
    everyone = np.arange(n)
    for position, (i, j) in enumerate(pairs):
        pair = PairFrame.of(frame[i], frame[j])
        nearby = everyone if neighbourhoods is None else np.asarray(neighbourhoods[position], dtype=int)
        nearby = nearby[(nearby != i) & (nearby != j)]
        tol = eps * pair.span
        if is_side_parallel(pair, tol):
            admits = side_parallel_admits_empty_lens(pair, frame[nearby], 1.0, Variant.OPEN, tol)
        else:
            below, above = _blocker_bounds(pair, frame[nearby], False, tol)
            admits = family_admits_empty_lens(pair.span, pair.rise, 1.0, below, above, Variant.OPEN, tol)
        if admits:
            candidates.append((i, j))
    logger.debug(f"{method} l1 candidates: {len(candidates)} of {len(pairs)} pairs")
    return candidates


def _checked_candidates(candidates, n: int) -> list[tuple[int, int]]:
    pairs = set()
    for pair in candidates:
        i, j = int(pair[0]), int(pair[1])
        if not (0 <= i < n and 0 <= j < n) or i == j:
            raise InvalidCandidates(f"Candidate edge ({i}, {j}) invalid for {n} sites")
        pairs.add(edge_key(i, j))
    return sorted(pairs)


def _sweep_blockers(frame, axis, pairs, geometry, keys, closed, eps, below, above):
    """
    Two sweeps along the slide axis for the lenses in `keys`.

    Each lens is inserted at its band midpoint over the span-axis rank range of
    the points it could contain. Going up, the first other point stabbing it
    is its lowest blocker over the midpoint; going down, its highest blocker
    at or under the midpoint. A lens leaves the sweep where the beta = 2 lens
    ends, since no family lens reaches further.
    """
    n = len(frame)
    span_values = frame[:, axis]
    slide_values = frame[:, 1 - axis]
    order = np.lexsort((np.arange(n), span_values))
    rank = np.empty(n, dtype=int)
    rank[order] = np.arange(n)
    sorted_span = span_values[order]

    ranges = {}
    for k in keys:
        i, j = pairs[k]
        tol = eps * geometry[k].span
        t_low = min(span_values[i], span_values[j])
        t_high = max(span_values[i], span_values[j])
        if closed:
            first = int(np.searchsorted(sorted_span, t_low - tol, side='left'))
            last = int(np.searchsorted(sorted_span, t_high + tol, side='right')) - 1
        else:
            first = int(np.searchsorted(sorted_span, t_low + tol, side='right'))
            last = int(np.searchsorted(sorted_span, t_high - tol, side='left')) - 1
        ranges[k] = (first, last)

    for direction in (1, -1):
        # Points exactly at a midpoint belong to the downward sweep
        point_order, insert_order = (_FIRST, _SECOND) if direction > 0 else (_SECOND, _FIRST)
        events = [(direction * slide_values[v], point_order, _POINT, v) for v in range(n)]
        for k in keys:
            i, j = pairs[k]
            pair = geometry[k]
            s_i, s_j = slide_values[i], slide_values[j]
            middle = (s_i + s_j) / 2
            tol = eps * pair.span
            if direction > 0:
                end = min(s_i, s_j) + pair.span + tol
            else:
                end = max(s_i, s_j) - pair.span - tol
            events.append((direction * middle, insert_order, _INSERT, k))
            events.append((direction * end, _EXIT, _REMOVE, k))
        events.sort(key=lambda event: (event[0], event[1]))

        tree = StabbingTree(n)
        target = above if direction > 0 else below
        for _, _, kind, ident in events:
            if kind == _INSERT:
                first, last = ranges[ident]
                if first <= last:
                    tree.insert(ident, first, last)
            elif kind == _REMOVE:
                tree.remove(ident)
            else:
                for k in tree.stab(rank[ident]):
                    if ident in pairs[k]:
                        continue
                    target[k] = slide_values[ident]
                    tree.remove(k)


def sweep_large_beta(ps, beta, candidates=None, variant=Variant.CLOSED,
                     metric: MetricSpec | None = None, eps: float = EPS_GEOM) -> SkeletonGraph:
    """
    G_beta for beta >= 1 over candidate edges.

    Four sweeps (up and down, for each choice of the longer axis) find every
    candidate lens family's nearest blockers; the family test then decides
    whether an empty lens fits between them. Pairs parallel to a disc side
    skip the sweeps and are tested against every point.
    """
    metric = _rectilinear(metric)
    ps = ps if isinstance(ps, PointSet) else PointSet(ps)
    beta = check_beta(beta)
    if beta < 1:
        raise ValueError(f"sweep_large_beta needs beta >= 1, got {beta}")
    variant = as_variant(variant)
    n = len(ps)
    if candidates is None:
        candidates = l1_delaunay_candidates(ps, metric, eps=eps)
    pairs = _checked_candidates(candidates, n)
    frame = chebyshev_frame(metric, ps.coords)
    geometry = [PairFrame.of(frame[i], frame[j]) for i, j in pairs]
    below = [-math.inf] * len(pairs)
    above = [math.inf] * len(pairs)
    closed = variant is Variant.CLOSED

    # Pairs parallel to a disc side are decided directly against every point
    edges = set()
    parallel = set()
    for k, (i, j) in enumerate(pairs):
        pair = geometry[k]
        if not is_side_parallel(pair, eps * pair.span):
            continue
        parallel.add(k)
        mask = np.ones(n, dtype=bool)
        mask[[i, j]] = False
        if side_parallel_admits_empty_lens(pair, frame[mask], beta, variant, eps * pair.span):
            edges.add((i, j))

    for axis in (0, 1):
        keys = [k for k, pair in enumerate(geometry) if pair.axis == axis and k not in parallel]
        if keys:
            _sweep_blockers(frame, axis, pairs, geometry, keys, closed, eps, below, above)

    for k, (i, j) in enumerate(pairs):
        if k in parallel:
            continue
        pair = geometry[k]
        base = min(frame[i][1 - pair.axis], frame[j][1 - pair.axis])
        if family_admits_empty_lens(pair.span, pair.rise, beta, below[k] - base, above[k] - base,
                                    variant, eps * pair.span):
            edges.add((i, j))
    logger.debug(f"Large-beta sweep {metric.label} beta={format_beta(beta)}: {len(edges)} of {len(pairs)} candidates")
    return SkeletonGraph(n, frozenset(edges), beta, metric.label, variant, 'sweep-large')


# =============================================================================
# Brute force over lens families
# =============================================================================


def _refine(values) -> list[float]:
    """Sorted distinct values plus the midpoints between neighbours."""
    points = sorted(set(float(v) for v in values if math.isfinite(v)))
    mids = [(a + b) / 2 for a, b in zip(points[:-1], points[1:])]
    return sorted(points + mids)


def _family_center_offsets(pair: PairFrame, beta: float, blocker_slides: np.ndarray):
    """
    Centre offsets (alpha, gamma) covering every emptiness pattern of the family.

    Emptiness only changes where a lens side meets a blocker or where alpha
    and gamma swap roles, so those critical values, the range ends and the
    midpoints between them are enough.
    """
    span, rise = pair.span, pair.rise
    half = beta * span / 2
    separation = (beta - 1) * span
    (a0, a1), (g0, g1) = center_ranges(span, rise, beta)
    critical = [s + half for s in blocker_slides] + [s - half for s in blocker_slides]
    shifted = [c + sign * separation for c in critical + [a0, a1, g0, g1] for sign in (-1, 1)]
    alphas = _refine(v for v in [a0, a1] + critical + shifted + [g0, g1] if a0 <= v <= a1)

    offsets = []
    for alpha in alphas:
        low = max(g0, alpha - separation)
        high = min(g1, alpha + separation)
        if low > high:
            continue
        gammas = _refine(v for v in [low, high, alpha] + critical if low <= v <= high)
        offsets.extend((alpha, gamma) for gamma in gammas)
    return offsets


def _pair_is_edge_by_membership(metric, frame, coords, i, j, beta, variant, eps) -> bool:
    v1 = Point2(*map(float, coords[i]))
    v2 = Point2(*map(float, coords[j]))
    mask = np.ones(len(coords), dtype=bool)
    mask[[i, j]] = False
    others = coords[mask]
    if not len(others):
        return True

    if beta == 0:
        return not lens_contains(rectangle_lens(metric, v1, v2), others, variant, eps).any()
    if beta < 1:
        return not lens_contains(small_beta_discs(metric, v1, v2, beta), others, variant, eps).any()
    d = distance(metric, v1, v2)
    if beta >= 2:
        lens = Lens(metric, FORM_DISCS, v1, v2, beta, v2, v1, d)
        return not lens_contains(lens, others, variant, eps).any()

    pair = PairFrame.of(frame[i], frame[j])
    tol = eps * pair.span
    t, s = pair.to_local(frame[mask])
    nearby = s[(t >= -tol) & (t <= pair.span + tol)]
    offsets = _family_center_offsets(pair, beta, nearby)
    if not offsets:
        return False
    offsets = np.array(offsets)
    half = beta * pair.span / 2
    short = (2 - beta) * pair.span / 2
    c1 = from_chebyshev_frame(metric, pair.to_frame(np.full(len(offsets), half), offsets[:, 0]))
    c2 = from_chebyshev_frame(metric, pair.to_frame(np.full(len(offsets), short), offsets[:, 1]))
    radius = beta * d / 2
    d1 = metric.norm(others[None, :, 0] - c1[:, None, 0], others[None, :, 1] - c1[:, None, 1])
    d2 = metric.norm(others[None, :, 0] - c2[:, None, 0], others[None, :, 1] - c2[:, None, 1])
    if as_variant(variant) is Variant.CLOSED:
        inside = (d1 <= radius + tol) & (d2 <= radius + tol)
    else:
        inside = (d1 < radius - tol) & (d2 < radius - tol)
    return bool((~inside.any(axis=1)).any())


def beta_skeleton_l1_bruteforce(ps, beta, variant=Variant.CLOSED, metric: MetricSpec | None = None,
                                eps: float = EPS_GEOM) -> SkeletonGraph:
    """
    Reference l_1/l_infinity skeleton: real lenses, tested point by point.

    Lenses are built from disc centres in the original plane and membership is
    evaluated with the metric itself, independently of the sweeps' interval
    reasoning.
    """
    metric = _rectilinear(metric)
    ps = ps if isinstance(ps, PointSet) else PointSet(ps)
    beta = check_beta(beta)
    variant = as_variant(variant)
    coords = ps.coords
    frame = chebyshev_frame(metric, coords)
    edges = frozenset(
        (i, j) for i, j in itertools.combinations(range(len(ps)), 2)
        if _pair_is_edge_by_membership(metric, frame, coords, i, j, beta, variant, eps)
    )
    return SkeletonGraph(len(ps), edges, beta, metric.label, variant, 'brute')


def l1_skeleton(ps, beta, variant=Variant.CLOSED, metric: MetricSpec | None = None,
                candidate_method: str = METHOD_EXHAUSTIVE, eps: float = EPS_GEOM) -> SkeletonGraph:
    """Sweep-based l_1/l_infinity skeleton for any beta >= 0."""
    metric = _rectilinear(metric)
    beta = check_beta(beta)
    if beta < 1:
        graph = sweep_small_beta(ps, variant, metric, eps)
        graph.beta = beta
        return graph
    candidates = l1_delaunay_candidates(ps, metric, candidate_method, eps)
    return sweep_large_beta(ps, beta, candidates, variant, metric, eps)


# =============================================================================
# Validation suites
# =============================================================================


def l1_chain_check(ps, betas=CHAIN_BETAS, variant=Variant.CLOSED, metric: MetricSpec | None = None,
                   eps: float = EPS_GEOM) -> ChainReport:
    """
    Check MST <= G_2 (open) and G_b' <= G_b for consecutive betas in [1, 2],
    with G_1 inside the candidate set.
    """
    metric = _rectilinear(metric)
    ps = ps if isinstance(ps, PointSet) else PointSet(ps)
    betas = sorted(float(b) for b in betas)
    if any(b < 1 or b > 2 for b in betas):
        raise ValueError(f"Chain betas must lie in [1, 2], got {betas}")
    report = ChainReport(f"{metric.label} chain on {len(ps)} points")
    if len(ps) < 2:
        return report
    candidates = l1_delaunay_candidates(ps, metric, eps=eps)
    skeletons = {b: sweep_large_beta(ps, b, candidates, variant, metric, eps).edges for b in betas}
    relative = sweep_large_beta(ps, 2.0, candidates, Variant.OPEN, metric, eps).edges

    report.require('MST', emst(ps, metric).edges, 'G_2 open', relative)
    for low, high in zip(betas[:-1], betas[1:]):
        report.require(f"G_{high:g}", skeletons[high], f"G_{low:g}", skeletons[low])
    if betas:
        report.require(f"G_{betas[0]:g}", skeletons[betas[0]], 'candidates', candidates)
    return report


def l1_collapse_check(ps, small_betas=(0.1, 0.5, 0.9), large_betas=(2.0, 3.0, 10.0),
                      variant=Variant.CLOSED, metric: MetricSpec | None = None,
                      eps: float = EPS_GEOM) -> ChainReport:
    """Check that every 0 < beta < 1 gives the rectangle skeleton and every beta >= 2 the beta = 2 one."""
    metric = _rectilinear(metric)
    ps = ps if isinstance(ps, PointSet) else PointSet(ps)
    report = ChainReport(f"{metric.label} collapse on {len(ps)} points")
    if len(ps) < 2:
        return report
    rectangles = sweep_small_beta(ps, variant, metric, eps).edges
    for beta in small_betas:
        report.require_equal(f"brute G_{beta:g}", beta_skeleton_l1_bruteforce(ps, beta, variant, metric, eps).edges,
                             'rectangle sweep', rectangles)
    candidates = l1_delaunay_candidates(ps, metric, eps=eps)
    reference = sweep_large_beta(ps, 2.0, candidates, variant, metric, eps).edges
    for beta in large_betas:
        report.require_equal(f"sweep G_{beta:g}", sweep_large_beta(ps, beta, candidates, variant, metric, eps).edges,
                             'sweep G_2', reference)
    return report


def l1_oracle_check(ps, betas=(0.5, 1.0, 1.5, 2.0, 3.0), variant=Variant.CLOSED,
                    metric: MetricSpec | None = None, eps: float = EPS_GEOM) -> ChainReport:
    """Sweeps against the membership brute force, edge for edge."""
    metric = _rectilinear(metric)
    ps = ps if isinstance(ps, PointSet) else PointSet(ps)
    report = ChainReport(f"{metric.label} sweep vs brute force on {len(ps)} points")
    for beta in betas:
        report.require_equal(
            f"sweep G_{beta:g}", l1_skeleton(ps, beta, variant, metric, eps=eps).edges,
            f"brute G_{beta:g}", beta_skeleton_l1_bruteforce(ps, beta, variant, metric, eps).edges,
        )
    return report
