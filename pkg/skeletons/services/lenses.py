"""
Lens construction and membership.

A lens is the region between two generators whose emptiness decides an edge:
- beta = 0: the segment between the generators
- 0 < beta < 1: intersection of the two discs of radius d/(2 beta) through both generators
- 1 <= beta < inf: intersection of the discs of radius beta*d/2 centred at
  c1 = v1 + (beta/2)(v2 - v1) and c2 = v2 + (beta/2)(v1 - v2)
- beta = inf: the strip bounded by the perpendiculars through the generators

l_1 and l_infinity lenses are not unique; their families live in
skeletons.services.l1, which builds the rectangle form defined here.
"""
import logging
import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from skeletons.exceptions import DegenerateGenerators, UnsupportedMetric
from skeletons.services.metric import (
    MetricSpec, Point2, check_point, chebyshev_frame, distance, distances_to,
)
from skeletons.services.skeleton_graph import Variant, as_variant

logger = logging.getLogger(__name__)

EPS_GEOM = 1e-9
LIMIT_BETA = 1e6
ROOT_XTOL = 1e-12

FORM_SEGMENT = 'segment'
FORM_DISCS = 'two_discs'
FORM_STRIP = 'strip'
FORM_RECTANGLE = 'rectangle'


@dataclass(frozen=True)
class Lens:
    """A concrete lens for one generator pair."""
    metric: MetricSpec
    form: str
    v1: Point2
    v2: Point2
    beta: float
    c1: Point2 | None = None
    c2: Point2 | None = None
    radius: float | None = None

    @property
    def generator_distance(self) -> float:
        return distance(self.metric, self.v1, self.v2)

    def tolerance(self, eps: float = EPS_GEOM) -> float:
        """Absolute tolerance: eps relative to the generator distance."""
        return eps * self.generator_distance


def check_beta(beta) -> float:
    beta = float(beta)
    if math.isnan(beta) or beta < 0:
        raise ValueError(f"beta must be >= 0, got {beta}")
    return beta


def _generators(v1, v2) -> tuple[Point2, Point2]:
    v1 = check_point(v1)
    v2 = check_point(v2)
    if v1 == v2:
        raise DegenerateGenerators(f"Generators coincide at {v1}")
    return v1, v2


def _small_beta_center(metric: MetricSpec, v1: Point2, v2: Point2, radius: float) -> Point2:
    """
    Centre left of v1->v2 at metric distance `radius` from both generators.

    Walks the equidistance curve by the perpendicular offset s from the
    Euclidean midpoint; for each s the parallel coordinate is found by root
    finding, then s itself is solved for the requested radius.
    """
    mid = np.array([(v1.x + v2.x) / 2, (v1.y + v2.y) / 2])
    delta = np.array([v2.x - v1.x, v2.y - v1.y])
    length = float(np.hypot(*delta))
    along = delta / length
    normal = np.array([-along[1], along[0]])
    xtol = ROOT_XTOL * length

    def on_curve(s):
        def gap(a):
            point = mid + a * along + s * normal
            return distance(metric, point, v1) - distance(metric, point, v2)

        if gap(0.0) == 0.0:
            return mid + s * normal
        span = length + abs(s)
        while gap(-span) >= 0 or gap(span) <= 0:
            span *= 2
        a = brentq(gap, -span, span, xtol=xtol)
        return mid + a * along + s * normal

    def excess(s):
        return distance(metric, on_curve(s), v1) - radius

    upper = max(length, radius)
    while excess(upper) < 0:
        upper *= 2
    s = brentq(excess, 0.0, upper, xtol=xtol)
    c = on_curve(s)
    return Point2(float(c[0]), float(c[1]))


def lens_construct(metric: MetricSpec, v1, v2, beta) -> Lens:
    """
    Build the lens of (v1, v2) for `beta` under an l_p metric.

    >>> lens_construct(MetricSpec.euclidean(), (0, 0), (2, 0), 3).c2
    Point2(x=-1.0, y=0.0)
    """
    if metric.is_rectilinear:
        raise UnsupportedMetric(
            f"{metric.label} lenses are not unique; use skeletons.services.l1.canonical_lenses_l1"
        )
    v1, v2 = _generators(v1, v2)
    beta = check_beta(beta)
    if beta == 0:
        return Lens(metric, FORM_SEGMENT, v1, v2, beta)
    if beta == math.inf:
        return Lens(metric, FORM_STRIP, v1, v2, beta)

    d = distance(metric, v1, v2)
    if beta >= 1:
        half = beta / 2
        c1 = Point2(v1.x + half * (v2.x - v1.x), v1.y + half * (v2.y - v1.y))
        c2 = Point2(v2.x + half * (v1.x - v2.x), v2.y + half * (v1.y - v2.y))
        return Lens(metric, FORM_DISCS, v1, v2, beta, c1, c2, beta * d / 2)

    radius = d / (2 * beta)
    mid_x, mid_y = (v1.x + v2.x) / 2, (v1.y + v2.y) / 2
    if metric.is_euclidean:
        height = math.sqrt(max(radius * radius - d * d / 4, 0.0))
        ux, uy = (v2.x - v1.x) / d, (v2.y - v1.y) / d
        c1 = Point2(mid_x - uy * height, mid_y + ux * height)
    else:
        c1 = _small_beta_center(metric, v1, v2, radius)
    # Point reflection through the midpoint is an isometry of every norm
    c2 = Point2(2 * mid_x - c1.x, 2 * mid_y - c1.y)
    return Lens(metric, FORM_DISCS, v1, v2, beta, c1, c2, radius)


def rectangle_lens(metric: MetricSpec, v1, v2, beta: float = 0.0) -> Lens:
    """Rectangle lens of an l_1/l_infinity pair: axis-aligned box in the square-disc frame."""
    v1, v2 = _generators(v1, v2)
    return Lens(metric, FORM_RECTANGLE, v1, v2, check_beta(beta))


def _segment_parameters(lens: Lens, coords: np.ndarray):
    """Projection parameter along v1->v2 and Euclidean distance to the supporting line."""
    dx, dy = lens.v2.x - lens.v1.x, lens.v2.y - lens.v1.y
    length_sq = dx * dx + dy * dy
    rx = coords[:, 0] - lens.v1.x
    ry = coords[:, 1] - lens.v1.y
    t = (rx * dx + ry * dy) / length_sq
    perpendicular = np.abs(rx * dy - ry * dx) / math.sqrt(length_sq)
    return t, perpendicular


def lens_contains(lens: Lens, coords, variant=Variant.CLOSED, eps: float = EPS_GEOM) -> np.ndarray:
    """
    Vectorized membership of the rows of `coords` in `lens`.

    Points within the tolerance of the boundary count as inside for the closed
    variant and outside for the open one.
    """
    coords = np.atleast_2d(np.asarray(coords, dtype=float))
    variant = as_variant(variant)
    closed = variant is Variant.CLOSED
    tol = lens.tolerance(eps)

    if lens.form == FORM_DISCS:
        d1 = distances_to(lens.metric, coords, lens.c1)
        d2 = distances_to(lens.metric, coords, lens.c2)
        if closed:
            limit = lens.radius + tol
            return (d1 <= limit) & (d2 <= limit)
        limit = lens.radius - tol
        return (d1 < limit) & (d2 < limit)

    if lens.form in (FORM_SEGMENT, FORM_STRIP):
        t, perpendicular = _segment_parameters(lens, coords)
        if closed:
            inside = (t >= -eps) & (t <= 1 + eps)
        else:
            inside = (t > eps) & (t < 1 - eps)
        if lens.form == FORM_SEGMENT:
            inside &= perpendicular <= tol
        return inside

    if lens.form == FORM_RECTANGLE:
        frame = chebyshev_frame(lens.metric, coords)
        corners = chebyshev_frame(lens.metric, np.array([lens.v1, lens.v2]))
        low = corners.min(axis=0)
        high = corners.max(axis=0)
        if closed:
            return np.all((frame >= low - tol) & (frame <= high + tol), axis=1)
        return np.all((frame > low + tol) & (frame < high - tol), axis=1)

    raise ValueError(f"Unknown lens form: {lens.form}")


def point_in_lens(lens: Lens, q, variant=Variant.CLOSED, eps: float = EPS_GEOM) -> bool:
    """Membership of a single point."""
    return bool(lens_contains(lens, [check_point(q)], variant, eps)[0])


def limit_membership(metric: MetricSpec, v1, v2, beta, q, variant=Variant.CLOSED,
                     approximate: bool = False, eps: float = EPS_GEOM) -> bool:
    """
    Membership in the beta -> 0 or beta -> infinity limit lens.

    beta = 0 gives the metric segment: the straight segment for l_p and the
    rectangle for l_1/l_infinity. beta = infinity gives the Euclidean strip
    for every metric; with `approximate=True` the closed lens at a very large
    beta is used instead (for l_1/l_infinity every beta >= 2 lens is the same,
    so the beta = 2 lens).
    """
    v1, v2 = _generators(v1, v2)
    beta = check_beta(beta)
    if beta not in (0.0, math.inf):
        raise ValueError(f"limit_membership needs beta 0 or inf, got {beta}")

    if beta == 0:
        if metric.is_rectilinear:
            return point_in_lens(rectangle_lens(metric, v1, v2), q, variant, eps)
        return point_in_lens(Lens(metric, FORM_SEGMENT, v1, v2, 0.0), q, variant, eps)

    if approximate:
        if metric.is_rectilinear:
            d = distance(metric, v1, v2)
            lens = Lens(metric, FORM_DISCS, v1, v2, 2.0, v2, v1, d)
        else:
            lens = lens_construct(metric, v1, v2, LIMIT_BETA)
        return point_in_lens(lens, q, variant, eps)
    return point_in_lens(Lens(metric, FORM_STRIP, v1, v2, math.inf), q, variant, eps)
