"""
Pytest configuration and shared fixtures for testing.
"""
import json

import pytest

from skeletons.services.metric import MetricSpec
from skeletons.services.segments import SegmentSet
from skeletons.services.skeleton_graph import PointSet
from skeletons.services.weighted import WeightedGraph


@pytest.fixture
def euclidean():
    return MetricSpec.euclidean()


@pytest.fixture
def l1_metric():
    return MetricSpec.l1()


@pytest.fixture
def gabriel_triangle():
    """Flat triangle whose apex lies inside the diameter disc of the base."""
    return PointSet([(0, 0), (2, 0), (1, 0.1)])


@pytest.fixture
def unit_square():
    return PointSet([(0, 0), (1, 0), (1, 1), (0, 1)])


@pytest.fixture
def weighted_triangle():
    """Triangle with unit weights, every vertex a site."""
    return WeightedGraph(3, [0, 1, 2], [(0, 1, 1.0), (1, 2, 1.0), (0, 2, 1.0)])


@pytest.fixture
def weighted_path():
    """Path a-b-c with unit weights, every vertex a site."""
    return WeightedGraph(3, [0, 1, 2], [(0, 1, 1.0), (1, 2, 1.0)])


@pytest.fixture
def weighted_square():
    """4-cycle with unit weights, every vertex a site."""
    return WeightedGraph(4, [0, 1, 2, 3], [(0, 1, 1.0), (1, 2, 1.0), (2, 3, 1.0), (3, 0, 1.0)])


@pytest.fixture
def three_segments():
    """Three short segments far from each other."""
    return SegmentSet([
        ((0, 0), (0.2, 0)),
        ((5, 0), (5.2, 0)),
        ((2.5, 4), (2.7, 4)),
    ])


@pytest.fixture
def points_file(tmp_path, gabriel_triangle):
    """The flat triangle as a points text file."""
    path = tmp_path / 'points.txt'
    path.write_text('# flat triangle\n0 0\n2 0\n1 0.1\n')
    return path


@pytest.fixture
def triangle_graph_file(tmp_path, weighted_triangle):
    path = tmp_path / 'triangle.json'
    path.write_text(json.dumps(weighted_triangle.to_json()))
    return path
