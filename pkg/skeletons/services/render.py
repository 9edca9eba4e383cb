"""
SVG scenes of sites, skeleton edges and lens outlines.

Output is deterministic: coordinates are formatted with six significant
digits, elements are emitted in input order and disc outlines are sampled at
a fixed angular step. The y axis is flipped so the picture is upright.
"""
import logging
import math
from dataclasses import dataclass, field

import numpy as np
from django.template.loader import render_to_string

from skeletons.exceptions import EmptyScene
from skeletons.services.lenses import FORM_DISCS, FORM_RECTANGLE, Lens
from skeletons.services.metric import Point2, chebyshev_frame, from_chebyshev_frame
from skeletons.services.segments import SegmentSet
from skeletons.services.skeleton_graph import SkeletonGraph
from skeletons.services.weighted import WeightedGraph

logger = logging.getLogger(__name__)

SVG_SAMPLES = 256
MARGIN = 0.05
TEMPLATE_NAME = 'skeletons/scene.svg'
CANVAS_SIZE = 800


def _fmt(value: float) -> str:
    text = f"{value:.6g}"
    return '0' if text == '-0' else text


@dataclass
class EdgeLayer:
    """Straight edges drawn under one styling tag."""
    tag: str
    lines: list = field(default_factory=list)


@dataclass
class Scene:
    """Everything one picture shows; all coordinates in the plane of the sites."""
    points: list = field(default_factory=list)
    segments: list = field(default_factory=list)
    graph_lines: list = field(default_factory=list)
    layers: list = field(default_factory=list)
    outlines: list = field(default_factory=list)

    @property
    def empty(self) -> bool:
        return not (self.points or self.segments or self.graph_lines)

    def add_edges(self, tag: str, anchors, graph: SkeletonGraph):
        """Add a layer joining anchors[i] and anchors[j] for every edge (i, j)."""
        layer = EdgeLayer(tag)
        for i, j in graph.sorted_edges():
            layer.lines.append((Point2(*anchors[i]), Point2(*anchors[j])))
        self.layers.append(layer)
        return layer

    def add_lens(self, lens: Lens, samples: int = SVG_SAMPLES):
        self.outlines.extend(lens_outlines(lens, samples))

    @classmethod
    def for_points(cls, points, graph: SkeletonGraph | None = None, tag: str = 'skeleton') -> 'Scene':
        scene = cls(points=[Point2(float(x), float(y)) for x, y in points])
        if graph is not None:
            scene.add_edges(tag, scene.points, graph)
        return scene

    @classmethod
    def for_segments(cls, ss: SegmentSet, graph: SkeletonGraph | None = None, tag: str = 'skeleton') -> 'Scene':
        """Segment sites; edges join witness generators when known, midpoints otherwise."""
        scene = cls(segments=[(s.p1, s.p2) for s in ss])
        if graph is not None:
            layer = EdgeLayer(tag)
            for i, j in graph.sorted_edges():
                t1, t2 = graph.witnesses.get((i, j), (0.5, 0.5))
                layer.lines.append((ss[i].point(t1), ss[j].point(t2)))
            scene.layers.append(layer)
        return scene

    @classmethod
    def for_graph(cls, g: WeightedGraph, graph: SkeletonGraph | None = None, tag: str = 'skeleton') -> 'Scene':
        """Embedded weighted graph; vertices without coordinates go on a circle."""
        positions = {}
        for v in range(g.n_vertices):
            if v in g.coordinates:
                positions[v] = Point2(*map(float, g.coordinates[v]))
            else:
                angle = 2 * math.pi * v / g.n_vertices
                positions[v] = Point2(math.cos(angle), math.sin(angle))
        scene = cls(
            points=[positions[s] for s in g.sites],
            graph_lines=[(positions[a], positions[b]) for a, b, _ in g.edges],
        )
        if graph is not None:
            scene.add_edges(tag, scene.points, graph)
        return scene


def disc_outline(metric, center, radius: float, samples: int = SVG_SAMPLES) -> list[Point2]:
    """Boundary of a metric disc, sampled at `samples` equally spaced angles."""
    angles = 2 * np.pi * np.arange(samples) / samples
    dx, dy = np.cos(angles), np.sin(angles)
    scale = radius / metric.norm(dx, dy)
    return [Point2(float(center[0] + s * x), float(center[1] + s * y)) for s, x, y in zip(scale, dx, dy)]


def lens_outlines(lens: Lens, samples: int = SVG_SAMPLES) -> list[list[Point2]]:
    """Closed polylines for a lens: both discs, or the rectangle's corners."""
    if lens.form == FORM_DISCS:
        return [
            disc_outline(lens.metric, lens.c1, lens.radius, samples),
            disc_outline(lens.metric, lens.c2, lens.radius, samples),
        ]
    if lens.form == FORM_RECTANGLE:
        corners = chebyshev_frame(lens.metric, np.array([lens.v1, lens.v2]))
        low, high = corners.min(axis=0), corners.max(axis=0)
        box = np.array([[low[0], low[1]], [high[0], low[1]], [high[0], high[1]], [low[0], high[1]]])
        return [[Point2(float(x), float(y)) for x, y in from_chebyshev_frame(lens.metric, box)]]
    raise ValueError(f"Cannot outline a {lens.form} lens")


def _bounds(scene: Scene):
    coords = list(scene.points)
    for pair in scene.segments + scene.graph_lines:
        coords.extend(pair)
    for layer in scene.layers:
        for pair in layer.lines:
            coords.extend(pair)
    for outline in scene.outlines:
        coords.extend(outline)
    array = np.array(coords, dtype=float)
    if not np.all(np.isfinite(array)):
        raise ValueError("Scene geometry must be finite")
    return array.min(axis=0), array.max(axis=0)


def render_scene(scene: Scene) -> str:
    """
    Standalone SVG 1.1 document for the scene.

    The view box is fitted to all geometry with a 5% margin on every side.
    """
    if scene.empty:
        raise EmptyScene("Nothing to render: the scene has no sites")
    low, high = _bounds(scene)
    span = float(max(high[0] - low[0], high[1] - low[1])) or 1.0
    margin = MARGIN * span
    width = float(high[0] - low[0]) + 2 * margin
    height = float(high[1] - low[1]) + 2 * margin

    def xy(point):
        return _fmt(point[0]), _fmt(-point[1])

    def line(pair):
        (x1, y1), (x2, y2) = xy(pair[0]), xy(pair[1])
        return {'x1': x1, 'y1': y1, 'x2': x2, 'y2': y2}

    context = {
        'view_box': ' '.join(_fmt(v) for v in (low[0] - margin, -high[1] - margin, width, height)),
        'width': CANVAS_SIZE,
        'height': max(1, round(CANVAS_SIZE * height / width)),
        'marker_radius': _fmt(span / 200),
        'graph_lines': [line(pair) for pair in scene.graph_lines],
        'segments': [line(pair) for pair in scene.segments],
        'layers': [{'tag': layer.tag, 'lines': [line(pair) for pair in layer.lines]} for layer in scene.layers],
        'outlines': [' '.join(','.join(xy(p)) for p in outline) for outline in scene.outlines],
        'markers': [dict(zip(('cx', 'cy'), xy(p))) for p in scene.points],
    }
    logger.debug(f"Rendering {len(scene.points)} markers, {sum(len(layer.lines) for layer in scene.layers)} edges")
    return render_to_string(TEMPLATE_NAME, context)
