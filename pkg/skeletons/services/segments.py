"""
Beta-skeletons of disjoint segment sites in the Euclidean plane.

Segments s1, s2 are joined iff for some generator points q on s1 and w on s2
the lens N(q, w, beta) meets no other segment. The generator pairs are
sampled on the grid t = k/m (k = 0..m) of the parameter square, so grids of
resolution m are contained in those of resolution 2m. Each sample is decided
exactly: a disc cuts a segment in a parameter interval given by a quadratic.

Reported edges carry the (t1, t2) of their first empty lens in row-major
order; absent edges may be false negatives at coarse resolutions.
"""
import itertools
import logging
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq

from skeletons.exceptions import ResolutionTooSmall, SegmentsIntersect
from skeletons.services.lenses import EPS_GEOM, FORM_DISCS, ROOT_XTOL, Lens, check_beta, lens_construct
from skeletons.services.metric import MetricSpec, Point2, check_point
from skeletons.services.parallel import map_pairs
from skeletons.services.skeleton_graph import (
    ChainReport, SkeletonGraph, Variant, as_variant, format_beta,
)

logger = logging.getLogger(__name__)

DEFAULT_RESOLUTION = 64
SEGMENTS_METRIC = 'segments'


@dataclass(frozen=True)
class Segment:
    """Closed segment q(t) = (1 - t) p1 + t p2, t in [0, 1]."""
    p1: Point2
    p2: Point2

    def __post_init__(self):
        object.__setattr__(self, 'p1', check_point(self.p1))
        object.__setattr__(self, 'p2', check_point(self.p2))
        if self.p1 == self.p2:
            raise ValueError(f"Segment has zero length at {self.p1}")

    @property
    def length(self) -> float:
        return math.hypot(self.p2.x - self.p1.x, self.p2.y - self.p1.y)

    def at(self, t) -> np.ndarray:
        """Points q(t) for a scalar or an array of parameters."""
        t = np.asarray(t, dtype=float)[..., None]
        return (1 - t) * np.array(self.p1) + t * np.array(self.p2)

    def point(self, t: float) -> Point2:
        x, y = self.at(t)
        return Point2(float(x), float(y))


def _cross(o, a, b) -> float:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def point_segment_distance(points, s: Segment) -> np.ndarray:
    """Euclidean distance from each row of `points` to the closed segment."""
    points = np.atleast_2d(np.asarray(points, dtype=float))
    start = np.array(s.p1)
    direction = np.array(s.p2) - start
    t = np.clip(((points - start) @ direction) / (direction @ direction), 0.0, 1.0)
    nearest = start + t[..., None] * direction
    return np.hypot(*(points - nearest).T)


def segments_distance(s: Segment, other: Segment) -> float:
    """Distance between two closed segments, 0 when they cross."""
    a, b, c, d = s.p1, s.p2, other.p1, other.p2
    d1, d2 = _cross(c, d, a), _cross(c, d, b)
    d3, d4 = _cross(a, b, c), _cross(a, b, d)
    if ((d1 > 0) != (d2 > 0)) and ((d3 > 0) != (d4 > 0)) and 0 not in (d1, d2, d3, d4):
        return 0.0
    return float(min(
        point_segment_distance([a, b], other).min(),
        point_segment_distance([c, d], s).min(),
    ))


class SegmentSet:
    """Indexed, pairwise disjoint segment sites."""

    def __init__(self, segments, eps: float = EPS_GEOM):
        self.segments = [s if isinstance(s, Segment) else Segment(*s) for s in segments]
        scale = max((s.length for s in self.segments), default=1.0)
        for i, j in itertools.combinations(range(len(self.segments)), 2):
            if segments_distance(self.segments[i], self.segments[j]) <= eps * scale:
                raise SegmentsIntersect(f"Segments {i} and {j} touch or cross")

    @classmethod
    def from_json(cls, rows) -> 'SegmentSet':
        return cls([Segment(tuple(p1), tuple(p2)) for p1, p2 in rows])

    def to_json(self) -> list:
        return [[list(s.p1), list(s.p2)] for s in self.segments]

    @classmethod
    def random(cls, count: int, seed: int, max_length: float = 0.3, attempts: int = 1000) -> 'SegmentSet':
        """Disjoint random segments in the unit square, drawn by rejection."""
        rng = np.random.default_rng(seed)
        chosen = []
        for _ in range(attempts):
            if len(chosen) == count:
                break
            start = rng.random(2)
            angle = rng.random() * 2 * np.pi
            length = max_length * (0.2 + 0.8 * rng.random())
            end = np.clip(start + length * np.array([np.cos(angle), np.sin(angle)]), 0.0, 1.0)
            candidate = Segment(tuple(start), tuple(end))
            if all(segments_distance(candidate, s) > 1e-3 for s in chosen):
                chosen.append(candidate)
        if len(chosen) < count:
            raise SegmentsIntersect(f"Could only place {len(chosen)} of {count} disjoint segments")
        return cls(chosen)

    def __len__(self):
        return len(self.segments)

    def __getitem__(self, index) -> Segment:
        return self.segments[index]

    def __iter__(self):
        return iter(self.segments)


def _disc_interval(s: Segment, centers: np.ndarray, radius: np.ndarray):
    """Parameter roots (low, high) of |q(t) - c| = r, NaN where the line misses the disc."""
    start = np.array(s.p1)
    direction = np.array(s.p2) - start
    offset = start - centers
    a = direction @ direction
    b = 2 * (offset @ direction)
    c = np.einsum('...i,...i->...', offset, offset) - radius * radius
    disc = b * b - 4 * a * c
    root = np.sqrt(np.where(disc >= 0, disc, np.nan))
    return (-b - root) / (2 * a), (-b + root) / (2 * a)


def _hits(s: Segment, c1, c2, radius, tol, closed: bool) -> np.ndarray:
    """Vectorized: does the segment meet both discs at a common parameter?"""
    shift = tol if closed else -tol
    low1, high1 = _disc_interval(s, c1, radius + shift)
    low2, high2 = _disc_interval(s, c2, radius + shift)
    with np.errstate(invalid='ignore'):
        low = np.fmax(low1, low2)
        high = np.fmin(high1, high2)
        if closed:
            hit = np.maximum(low, 0.0) <= np.minimum(high, 1.0)
        else:
            hit = (low < high) & (low < 1.0) & (high > 0.0)
    missing = np.isnan(low1) | np.isnan(low2)
    return hit & ~missing


def segment_intersects_lens(s: Segment, lens: Lens, variant=Variant.CLOSED, eps: float = EPS_GEOM) -> bool:
    """
    Exact test whether some point of `s` lies in both discs of a Euclidean lens.

    >>> lens = lens_construct(MetricSpec.euclidean(), (0, 0), (2, 0), 1)
    >>> segment_intersects_lens(Segment((1, -1), (1, 1)), lens)
    True
    """
    if lens.form != FORM_DISCS or not lens.metric.is_euclidean:
        raise ValueError(f"Expected a Euclidean two-disc lens, got {lens.form} under {lens.metric.label}")
    closed = as_variant(variant) is Variant.CLOSED
    hit = _hits(
        s, np.array(lens.c1), np.array(lens.c2), np.asarray(lens.radius, dtype=float),
        lens.tolerance(eps), closed,
    )
    return bool(hit)


def _grid(m: int) -> np.ndarray:
    return np.arange(m + 1) / m


def _lens_discs(q: np.ndarray, w: np.ndarray, beta: float):
    """Centres and radius of the Euclidean lenses N(q, w, beta), vectorized over generator pairs."""
    delta = w - q
    d = np.hypot(delta[..., 0], delta[..., 1])
    if beta >= 1:
        c1 = q + (beta / 2) * delta
        c2 = w - (beta / 2) * delta
        return c1, c2, beta * d / 2, d
    radius = d / (2 * beta)
    height = np.sqrt(np.maximum(radius * radius - d * d / 4, 0.0))
    normal = np.stack([-delta[..., 1], delta[..., 0]], axis=-1) / d[..., None]
    mid = (q + w) / 2
    return mid + height[..., None] * normal, mid - height[..., None] * normal, radius, d


@dataclass
class ParamSquareCover:
    """Which samples (t1, t2) of the parameter square have a lens meeting another segment."""
    pair: tuple
    resolution: int
    covered: np.ndarray

    @property
    def samples(self) -> np.ndarray:
        return _grid(self.resolution)

    def first_uncovered(self) -> tuple[float, float] | None:
        """Row-major first empty-lens sample."""
        free = np.argwhere(~self.covered)
        if not len(free):
            return None
        k1, k2 = free[0]
        grid = self.samples
        return float(grid[k1]), float(grid[k2])

    @property
    def fully_covered(self) -> bool:
        return bool(self.covered.all())


def param_square_cover(ss: SegmentSet, i: int, j: int, beta, variant=Variant.CLOSED,
                       resolution: int = DEFAULT_RESOLUTION, eps: float = EPS_GEOM) -> ParamSquareCover:
    """Cover of the (resolution + 1)^2 parameter grid for segments i and j."""
    if resolution < 2:
        raise ResolutionTooSmall(f"Grid resolution must be >= 2, got {resolution}")
    beta = check_beta(beta)
    if beta in (0.0, math.inf):
        raise ValueError(f"Segment skeletons need 0 < beta < inf, got {beta}")
    closed = as_variant(variant) is Variant.CLOSED
    grid = _grid(resolution)
    q = ss[i].at(grid)[:, None, :]
    w = ss[j].at(grid)[None, :, :]
    c1, c2, radius, d = _lens_discs(q, w, beta)
    tol = eps * d
    covered = np.zeros((resolution + 1, resolution + 1), dtype=bool)
    for k, other in enumerate(ss):
        if k in (i, j):
            continue
        covered |= _hits(other, c1, c2, radius, tol, closed)
    return ParamSquareCover((i, j), resolution, covered)


def segment_beta_skeleton(ss: SegmentSet, beta, variant=Variant.CLOSED, resolution: int = DEFAULT_RESOLUTION,
                          eps: float = EPS_GEOM, threads: int = 1) -> SkeletonGraph:
    """Grid-sampled segment skeleton; witnesses map each edge to its (t1, t2)."""
    if resolution < 2:
        raise ResolutionTooSmall(f"Grid resolution must be >= 2, got {resolution}")
    beta = check_beta(beta)
    variant = as_variant(variant)
    pairs = list(itertools.combinations(range(len(ss)), 2))

    def decide(pair):
        return param_square_cover(ss, pair[0], pair[1], beta, variant, resolution, eps).first_uncovered()

    witnesses = {
        pair: witness
        for pair, witness in zip(pairs, map_pairs(decide, pairs, threads))
        if witness is not None
    }
    logger.debug(f"Segment skeleton beta={format_beta(beta)} m={resolution}: {len(witnesses)} edges")
    return SkeletonGraph(len(ss), frozenset(witnesses), beta, SEGMENTS_METRIC, variant, 'segments',
                         witnesses=witnesses)


def witness_lens(ss: SegmentSet, pair: tuple, witness: tuple, beta: float) -> Lens:
    i, j = pair
    t1, t2 = witness
    return lens_construct(MetricSpec.euclidean(), ss[i].point(t1), ss[j].point(t2), beta)


def invalid_witnesses(ss: SegmentSet, graph: SkeletonGraph, eps: float = EPS_GEOM) -> list[tuple]:
    """Edges whose stored witness lens meets a third segment under the scalar exact test."""
    bad = []
    for pair, witness in sorted(graph.witnesses.items()):
        lens = witness_lens(ss, pair, witness, graph.beta)
        if any(
            segment_intersects_lens(s, lens, graph.variant, eps)
            for k, s in enumerate(ss) if k not in pair
        ):
            bad.append(pair)
    return bad


@dataclass
class RefinementReport:
    """Edge changes between two grid resolutions."""
    coarse: int
    fine: int
    lost: list = field(default_factory=list)
    gained: list = field(default_factory=list)

    @property
    def monotone(self) -> bool:
        return not self.lost


def refinement_report(ss: SegmentSet, beta, variant=Variant.CLOSED, resolution: int = DEFAULT_RESOLUTION,
                      factor: int = 2, eps: float = EPS_GEOM, threads: int = 1) -> RefinementReport:
    """Compare the skeleton at `resolution` with the one at `factor` times finer."""
    coarse = segment_beta_skeleton(ss, beta, variant, resolution, eps, threads)
    fine = segment_beta_skeleton(ss, beta, variant, resolution * factor, eps, threads)
    report = RefinementReport(
        resolution, resolution * factor,
        lost=sorted(coarse.edges - fine.edges), gained=sorted(fine.edges - coarse.edges),
    )
    if report.lost:
        logger.warning(f"Refinement {resolution}->{resolution * factor} lost {len(report.lost)} boundary edges")
    return report


def chain_check_segments(ss: SegmentSet, betas=(1.0, 1.5, 2.0), resolution: int = DEFAULT_RESOLUTION,
                         variant=Variant.CLOSED, eps: float = EPS_GEOM, threads: int = 1) -> ChainReport:
    """
    Check G_b' <= G_b for consecutive betas at a fixed grid, with RNG = G_2
    and GG = G_1, and that every b' witness also certifies the b edge.
    """
    betas = sorted(float(b) for b in betas)
    if any(b < 1 or b > 2 for b in betas):
        raise ValueError(f"Chain betas must lie in [1, 2], got {betas}")
    report = ChainReport(f"Segment chain on {len(ss)} segments, m={resolution}")
    if len(ss) < 2:
        return report
    chain = sorted(set(betas) | {1.0, 2.0})
    skeletons = {b: segment_beta_skeleton(ss, b, variant, resolution, eps, threads) for b in chain}

    for low, high in zip(chain[:-1], chain[1:]):
        upper = skeletons[high]
        report.require(_segment_name(high), upper.edges, _segment_name(low), skeletons[low].edges)
        certified = [
            pair for pair, witness in upper.witnesses.items()
            if not any(
                segment_intersects_lens(s, witness_lens(ss, pair, witness, low), variant, eps)
                for k, s in enumerate(ss) if k not in pair
            )
        ]
        report.require(f"{_segment_name(high)} witnesses", upper.edges, f"certified at beta={low:g}", certified)

    bad = invalid_witnesses(ss, skeletons[1.0], eps)
    if bad:
        report.notes.append(f"{len(bad)} invalid GG witnesses: {bad}")
    return report


def _segment_name(beta: float) -> str:
    if beta == 2.0:
        return 'RNG'
    if beta == 1.0:
        return 'GG'
    return f"G_{beta:g}"


@dataclass(frozen=True)
class TangentDisc:
    center: Point2
    radius: float
    touch1: Point2
    touch2: Point2


def _nearest_on(s: Segment, point: np.ndarray) -> np.ndarray:
    start = np.array(s.p1)
    direction = np.array(s.p2) - start
    t = float(np.clip((point - start) @ direction / (direction @ direction), 0.0, 1.0))
    return start + t * direction


def _shrink_toward(fixed: np.ndarray, center: np.ndarray, radius: float, target: Segment) -> float:
    """Smallest homothety factor about `fixed` for which the disc still reaches `target`."""

    def gap(factor):
        scaled = fixed + factor * (center - fixed)
        return float(point_segment_distance([scaled], target)[0]) - factor * radius

    if gap(1.0) >= 0:
        return 1.0
    low = 1e-12
    if gap(low) <= 0:
        return low
    return brentq(gap, low, 1.0, xtol=ROOT_XTOL)


def gabriel_tangent_disc(s1: Segment, s2: Segment, v1, v2) -> TangentDisc:
    """
    Disc inside the diameter disc of v1 in s1 and v2 in s2, tangent to both segments.

    The diameter disc is shrunk about v1 until it only touches s2, then about
    that touching point until it only touches s1.
    """
    v1 = np.array(check_point(v1))
    v2 = np.array(check_point(v2))
    center = (v1 + v2) / 2
    radius = float(np.hypot(*(v2 - v1))) / 2

    factor = _shrink_toward(v1, center, radius, s2)
    center = v1 + factor * (center - v1)
    radius *= factor
    touch2 = _nearest_on(s2, center)

    factor = _shrink_toward(touch2, center, radius, s1)
    center = touch2 + factor * (center - touch2)
    radius *= factor
    touch1 = _nearest_on(s1, center)
    return TangentDisc(
        Point2(float(center[0]), float(center[1])), radius,
        Point2(float(touch1[0]), float(touch1[1])), Point2(float(touch2[0]), float(touch2[1])),
    )


def homothety_spot_check(ss: SegmentSet, graph: SkeletonGraph, eps: float = EPS_GEOM) -> list[tuple]:
    """
    For every beta = 1 witness, check that the tangent disc stays inside the
    witness disc and meets no third segment. Returns the failing pairs.
    """
    if graph.beta != 1.0:
        raise ValueError(f"Spot check needs a beta = 1 skeleton, got beta={graph.beta}")
    closed = graph.variant is Variant.CLOSED
    failures = []
    for pair, witness in sorted(graph.witnesses.items()):
        i, j = pair
        lens = witness_lens(ss, pair, witness, 1.0)
        disc = gabriel_tangent_disc(ss[i], ss[j], lens.v1, lens.v2)
        tol = lens.tolerance(eps)
        offset = math.hypot(disc.center.x - lens.c1.x, disc.center.y - lens.c1.y)
        inside = offset + disc.radius <= lens.radius + tol
        for k, s in enumerate(ss):
            if k in pair:
                continue
            gap = float(point_segment_distance([disc.center], s)[0])
            if (gap <= disc.radius + tol) if closed else (gap < disc.radius - tol):
                inside = False
        if not inside:
            failures.append(pair)
    if failures:
        logger.warning(f"Homothety spot check failed for {len(failures)} pairs")
    return failures
