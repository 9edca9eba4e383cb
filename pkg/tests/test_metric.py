"""
Tests for skeletons/services/metric.py
"""
import math

import numpy as np
import pytest

from skeletons.services.metric import (
    MetricSpec,
    Point2,
    check_point,
    chebyshev_frame,
    distance,
    distances_to,
    from_chebyshev_frame,
    pairwise_distances,
)


class TestMetricSpec:
    """Tests for MetricSpec construction and labels."""

    def test_labels(self):
        assert MetricSpec.euclidean().label == 'lp:2'
        assert MetricSpec.lp(3).label == 'lp:3'
        assert MetricSpec.l1().label == 'l1'
        assert MetricSpec.linf().label == 'linf'

    @pytest.mark.parametrize('p', [1.0, 0.5, math.inf])
    def test_lp_rejects_p_outside_open_range(self, p):
        with pytest.raises(ValueError):
            MetricSpec.lp(p)

    def test_unknown_kind(self):
        with pytest.raises(ValueError):
            MetricSpec('chebyshev')

    def test_rectilinear(self):
        assert MetricSpec.l1().is_rectilinear
        assert MetricSpec.linf().is_rectilinear
        assert not MetricSpec.euclidean().is_rectilinear


class TestDistance:
    """Tests for distance and its vectorized forms."""

    def test_euclidean_pythagorean_triple(self):
        assert distance(MetricSpec.euclidean(), (0, 0), (3, 4)) == pytest.approx(5.0)

    def test_l1_coordinate_sum(self):
        assert distance(MetricSpec.l1(), (0, 0), (3, 4)) == pytest.approx(7.0)

    def test_linf_max_coordinate(self):
        assert distance(MetricSpec.linf(), (0, 0), (3, 4)) == pytest.approx(4.0)

    def test_lp3_diagonal(self):
        assert distance(MetricSpec.lp(3), (0, 0), (1, 1)) == pytest.approx(2 ** (1 / 3), abs=1e-6)

    def test_large_p_does_not_overflow(self):
        d = distance(MetricSpec.lp(500), (0, 0), (1e3, 1e3))
        assert math.isfinite(d)
        assert d == pytest.approx(1e3 * 2 ** (1 / 500))

    def test_symmetric_and_zero_on_diagonal(self):
        metric = MetricSpec.lp(1.5)
        assert distance(metric, (1, 2), (4, -1)) == pytest.approx(distance(metric, (4, -1), (1, 2)))
        assert distance(metric, (1, 2), (1, 2)) == 0.0

    def test_distances_to_matches_scalar(self):
        metric = MetricSpec.lp(3)
        coords = np.array([[0.0, 0.0], [1.0, 2.0], [-3.0, 0.5]])
        result = distances_to(metric, coords, (1, 1))
        expected = [distance(metric, row, (1, 1)) for row in coords]
        assert np.allclose(result, expected)

    def test_pairwise_distances_symmetric(self):
        coords = np.random.default_rng(0).random((6, 2))
        matrix = pairwise_distances(MetricSpec.l1(), coords)
        assert matrix.shape == (6, 6)
        assert np.allclose(matrix, matrix.T)
        assert np.allclose(np.diag(matrix), 0.0)


class TestCheckPoint:
    """Tests for point validation."""

    def test_returns_point2(self):
        assert check_point([1, 2]) == Point2(1.0, 2.0)

    @pytest.mark.parametrize('bad', [(math.nan, 0), (0, math.inf)])
    def test_rejects_non_finite(self, bad):
        with pytest.raises(ValueError):
            check_point(bad)


class TestChebyshevFrame:
    """Tests for the square-disc frame of l1 and linf."""

    def test_l1_distance_becomes_max_norm(self):
        metric = MetricSpec.l1()
        a, b = chebyshev_frame(metric, np.array([[0.0, 0.0], [3.0, 1.0]]))
        assert np.max(np.abs(b - a)) == pytest.approx(distance(metric, (0, 0), (3, 1)))

    def test_round_trip(self):
        coords = np.array([[0.5, -2.0], [3.0, 1.0]])
        for metric in (MetricSpec.l1(), MetricSpec.linf()):
            assert np.allclose(from_chebyshev_frame(metric, chebyshev_frame(metric, coords)), coords)

    def test_lp_has_no_frame(self):
        with pytest.raises(ValueError):
            chebyshev_frame(MetricSpec.euclidean(), [[0, 0]])
