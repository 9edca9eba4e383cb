"""
Tests for skeletons/services/lenses.py
"""
import math

import numpy as np
import pytest

from skeletons.exceptions import DegenerateGenerators, UnsupportedMetric
from skeletons.services.l1 import canonical_lenses_l1, small_beta_discs
from skeletons.services.lenses import (
    FORM_DISCS,
    FORM_RECTANGLE,
    FORM_SEGMENT,
    FORM_STRIP,
    Lens,
    lens_construct,
    lens_contains,
    limit_membership,
    point_in_lens,
    rectangle_lens,
)
from skeletons.services.metric import MetricSpec, Point2, distance
from skeletons.services.skeleton_graph import Variant


class TestLensConstruct:
    """Tests for lens_construct under l_p metrics."""

    def test_beta_two_centres_on_generators(self, euclidean):
        lens = lens_construct(euclidean, (0, 0), (2, 0), 2)
        assert lens.form == FORM_DISCS
        assert tuple(lens.c1) == pytest.approx((2, 0))
        assert tuple(lens.c2) == pytest.approx((0, 0))
        assert lens.radius == pytest.approx(2)

    def test_beta_one_is_diameter_disc(self, euclidean):
        lens = lens_construct(euclidean, (0, 0), (2, 0), 1)
        assert tuple(lens.c1) == pytest.approx((1, 0))
        assert tuple(lens.c2) == pytest.approx((1, 0))
        assert lens.radius == pytest.approx(1)

    def test_beta_three(self, euclidean):
        lens = lens_construct(euclidean, (0, 0), (2, 0), 3)
        assert tuple(lens.c1) == pytest.approx((3, 0))
        assert tuple(lens.c2) == pytest.approx((-1, 0))
        assert lens.radius == pytest.approx(3)

    def test_beta_half_centres_above_and_below(self, euclidean):
        lens = lens_construct(euclidean, (0, 0), (2, 0), 0.5)
        assert tuple(lens.c1) == pytest.approx((1, math.sqrt(3)))
        assert tuple(lens.c2) == pytest.approx((1, -math.sqrt(3)))
        assert lens.radius == pytest.approx(2)

    def test_small_beta_generators_on_both_boundaries(self):
        metric = MetricSpec.lp(3)
        lens = lens_construct(metric, (0, 0), (2, 0), 0.5)
        assert lens.radius == pytest.approx(2)
        assert tuple(lens.c1) == pytest.approx((1, 7 ** (1 / 3)), abs=1e-7)
        for center in (lens.c1, lens.c2):
            for generator in ((0, 0), (2, 0)):
                assert distance(metric, center, generator) == pytest.approx(2, abs=1e-7)

    def test_large_beta_centre_distances(self):
        metric = MetricSpec.lp(1.5)
        v1, v2, beta = (0.3, -1.0), (2.0, 0.7), 2.6
        lens = lens_construct(metric, v1, v2, beta)
        d = distance(metric, v1, v2)
        assert distance(metric, lens.c1, v1) == pytest.approx(beta * d / 2)
        assert distance(metric, lens.c1, v2) == pytest.approx((beta - 2) * d / 2)

    def test_limit_forms(self, euclidean):
        assert lens_construct(euclidean, (0, 0), (1, 0), 0).form == FORM_SEGMENT
        assert lens_construct(euclidean, (0, 0), (1, 0), math.inf).form == FORM_STRIP

    def test_coincident_generators(self, euclidean):
        with pytest.raises(DegenerateGenerators):
            lens_construct(euclidean, (1, 1), (1, 1), 1)

    def test_negative_beta(self, euclidean):
        with pytest.raises(ValueError):
            lens_construct(euclidean, (0, 0), (1, 0), -0.5)

    def test_rectilinear_metric_is_refused(self):
        with pytest.raises(UnsupportedMetric):
            lens_construct(MetricSpec.l1(), (0, 0), (1, 0), 1)


class TestPointInLens:
    """Tests for lens membership."""

    def test_closed_interior_point(self, euclidean):
        lens = lens_construct(euclidean, (0, 0), (2, 0), 1)
        assert point_in_lens(lens, (1, 0.5), Variant.CLOSED)

    def test_open_boundary_point_excluded(self, euclidean):
        lens = lens_construct(euclidean, (0, 0), (2, 0), 1)
        assert not point_in_lens(lens, (1, 1), Variant.OPEN)
        assert point_in_lens(lens, (1, 1), Variant.CLOSED)

    def test_just_outside_beta_two_lens(self, euclidean):
        lens = lens_construct(euclidean, (0, 0), (2, 0), 2)
        assert not point_in_lens(lens, (1, 1.74), Variant.CLOSED)

    def test_generators_in_closed_not_open(self, euclidean):
        lens = lens_construct(euclidean, (0, 0), (2, 0), 1.5)
        assert point_in_lens(lens, (0, 0), Variant.CLOSED)
        assert not point_in_lens(lens, (0, 0), Variant.OPEN)

    def test_vectorized(self, euclidean):
        lens = lens_construct(euclidean, (0, 0), (2, 0), 1)
        inside = lens_contains(lens, np.array([[1, 0], [1, 0.99], [1, 1.01], [3, 0]]))
        assert inside.tolist() == [True, True, False, False]

    def test_rectangle_lens_l1(self):
        lens = rectangle_lens(MetricSpec.l1(), (0, 0), (3, 1))
        assert lens.form == FORM_RECTANGLE
        assert point_in_lens(lens, (1, 0.5))
        assert point_in_lens(lens, (2, 0))
        assert not point_in_lens(lens, (-0.5, 0))
        assert not point_in_lens(lens, (1, 2))

    def test_rectangle_sides_have_unit_slope(self):
        """The l1 rectangle is the 45 degree box of the generators, not their bounding box."""
        lens = rectangle_lens(MetricSpec.l1(), (0, 0), (3, 1))
        assert point_in_lens(lens, (2.5, 0.5))
        assert point_in_lens(lens, (0.5, -0.5))
        assert not point_in_lens(lens, (3, 0))
        assert not point_in_lens(lens, (0, 1))


class TestLimitMembership:
    """Tests for the beta = 0 and beta = infinity limits."""

    def test_zero_limit_midpoint(self, euclidean):
        assert limit_membership(euclidean, (0, 0), (2, 0), 0, (1, 0))

    def test_zero_limit_off_segment(self, euclidean):
        assert not limit_membership(euclidean, (0, 0), (2, 0), 0, (1, 0.1))

    def test_infinite_limit_strip(self, euclidean):
        assert limit_membership(euclidean, (0, 0), (2, 0), math.inf, (1, 100))
        assert not limit_membership(euclidean, (0, 0), (2, 0), math.inf, (3, 0))

    def test_approximate_infinite_limit(self, euclidean):
        assert limit_membership(euclidean, (0, 0), (2, 0), math.inf, (1, 100), approximate=True)
        assert not limit_membership(euclidean, (0, 0), (2, 0), math.inf, (3, 0), approximate=True)

    def test_l1_zero_limit_is_rectangle(self, l1_metric):
        assert limit_membership(l1_metric, (0, 0), (3, 1), 0, (2, 0))
        assert not limit_membership(l1_metric, (0, 0), (3, 1), 0, (1, 2))

    def test_finite_beta_refused(self, euclidean):
        with pytest.raises(ValueError):
            limit_membership(euclidean, (0, 0), (2, 0), 1, (1, 0))


METRICS = [MetricSpec.l1(), MetricSpec.euclidean(), MetricSpec.linf()]


def generator_pair(rng):
    v1 = rng.uniform(0, 1, size=2)
    angle = rng.uniform(0, 2 * math.pi)
    v2 = v1 + rng.uniform(0.5, 1.5) * np.array([math.cos(angle), math.sin(angle)])
    return Point2(*v1), Point2(*v2)


def lens_for(metric, v1, v2, beta):
    """A concrete lens for any metric; for l_1/l_infinity and beta >= 1 the one centred on the segment."""
    if not metric.is_rectilinear:
        return lens_construct(metric, v1, v2, beta)
    if beta < 1:
        return rectangle_lens(metric, v1, v2, beta)
    half = beta / 2
    c1 = Point2(v1.x + half * (v2.x - v1.x), v1.y + half * (v2.y - v1.y))
    c2 = Point2(v2.x + half * (v1.x - v2.x), v2.y + half * (v1.y - v2.y))
    return Lens(metric, FORM_DISCS, v1, v2, beta, c1, c2, beta * distance(metric, v1, v2) / 2)


def around_pair(rng, v1, v2, count):
    """Uniform points in a box around the pair, twice the generator distance wide."""
    scale = math.dist(v1, v2)
    middle = np.array([(v1.x + v2.x) / 2, (v1.y + v2.y) / 2])
    return middle + scale * rng.uniform(-1, 1, size=(count, 2))


def along_pair(v1, v2, t, h):
    """Points at parameter t along v1->v2 and offset h (in generator distances) across it."""
    direction = np.array([v2.x - v1.x, v2.y - v1.y])
    normal = np.array([-direction[1], direction[0]])
    return np.array([v1.x, v1.y]) + np.outer(t, direction) + np.outer(h, normal)


class TestLensInvariants:
    """Symmetry, limits and nesting of lenses under l_1, l_2 and l_infinity."""

    @pytest.mark.parametrize('metric', METRICS, ids=lambda m: m.label)
    @pytest.mark.parametrize('beta', [0.5, 1.0, 1.5, 2.0])
    @pytest.mark.parametrize('variant', [Variant.OPEN, Variant.CLOSED])
    def test_symmetric_in_generators(self, metric, beta, variant):
        rng = np.random.default_rng(11)
        for _ in range(5):
            v1, v2 = generator_pair(rng)
            samples = around_pair(rng, v1, v2, 400)
            forward = lens_contains(lens_for(metric, v1, v2, beta), samples, variant)
            backward = lens_contains(lens_for(metric, v2, v1, beta), samples, variant)
            assert np.array_equal(forward, backward)

    def test_euclidean_small_beta_approaches_segment(self, euclidean):
        rng = np.random.default_rng(3)
        v1, v2 = generator_pair(rng)
        t = np.concatenate([rng.uniform(0.01, 0.99, 50), rng.uniform(-0.5, -0.01, 25), rng.uniform(1.01, 1.5, 25)])
        h = np.where(rng.random(100) < 0.5, 0.0, rng.choice([-1, 1], 100) * rng.uniform(1e-3, 1, 100))
        samples = along_pair(v1, v2, t, h)
        lens = lens_construct(euclidean, v1, v2, 1e-6)
        expected = [limit_membership(euclidean, v1, v2, 0, q) for q in samples]
        assert lens_contains(lens, samples).tolist() == expected

    def test_euclidean_large_beta_approaches_strip(self, euclidean):
        rng = np.random.default_rng(4)
        v1, v2 = generator_pair(rng)
        t = np.concatenate([rng.uniform(0.01, 0.99, 50), rng.uniform(-0.5, -0.01, 25), rng.uniform(1.01, 1.5, 25)])
        h = rng.uniform(-3, 3, 100)
        samples = along_pair(v1, v2, t, h)
        lens = lens_construct(euclidean, v1, v2, 1e6)
        expected = [limit_membership(euclidean, v1, v2, math.inf, q) for q in samples]
        assert lens_contains(lens, samples).tolist() == expected

    @pytest.mark.parametrize('metric', [MetricSpec.l1(), MetricSpec.linf()], ids=lambda m: m.label)
    def test_rectilinear_limits(self, metric):
        rng = np.random.default_rng(5)
        v1, v2 = generator_pair(rng)
        samples = around_pair(rng, v1, v2, 300)
        small = lens_contains(small_beta_discs(metric, v1, v2, 1e-6), samples)
        large = lens_contains(canonical_lenses_l1(v1, v2, 1e6, metric).representatives[0], samples)
        assert small.tolist() == [limit_membership(metric, v1, v2, 0, q) for q in samples]
        assert large.tolist() == [limit_membership(metric, v1, v2, math.inf, q, approximate=True) for q in samples]

    @pytest.mark.parametrize('metric', METRICS, ids=lambda m: m.label)
    @pytest.mark.parametrize('beta, wider', [(1.0, 1.25), (1.25, 1.75), (1.5, 2.0), (1.0, 2.0)])
    def test_nested_between_one_and_two(self, metric, beta, wider):
        rng = np.random.default_rng(6)
        for _ in range(5):
            v1, v2 = generator_pair(rng)
            samples = around_pair(rng, v1, v2, 600)
            inner = lens_contains(lens_for(metric, v1, v2, beta), samples, eps=0.0)
            outer = lens_contains(lens_for(metric, v1, v2, wider), samples)
            assert inner.any()
            assert not (inner & ~outer).any()
