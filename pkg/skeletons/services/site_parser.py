"""
Site and edge-list file formats.

Points: UTF-8 text with one "x y" pair per line and '#' comments, or JSON
(a list of [x, y] pairs, detected by the .json extension or a leading '[').

    >>> parse_points_text("# triangle\\n0 0\\n2 0\\n1 0.1\\n").coords.tolist()
    [[0.0, 0.0], [2.0, 0.0], [1.0, 0.1]]

Segments: JSON list of [[x1, y1], [x2, y2]]. Graphs: JSON object
{"vertices": n, "sites": [...], "edges": [[a, b, w], ...]}.

Edge lists: "i j" lines sorted lexicographically, preceded by '#' header lines
"# key: value" that record how the edges were computed.

    >>> parse_edge_list("# beta: 1\\n0 2\\n1 2\\n").metadata
    {'beta': '1'}

Metric selectors:

    >>> parse_selector('lp:3')
    Selector(kind='lp', p=3.0)
"""
import json
import os
import tempfile
from dataclasses import dataclass, field
from pathlib import Path

from pyparsing import (
    CaselessKeyword,
    Literal,
    ParseException,
    Regex,
    Suppress,
    Word,
    alphanums,
    nums,
    pyparsing_common,
    rest_of_line,
)

from skeletons.exceptions import DegenerateGenerators, SegmentsIntersect, SiteParseError
from skeletons.services.metric import MetricSpec
from skeletons.services.segments import SegmentSet
from skeletons.services.skeleton_graph import PointSet, SkeletonGraph, edge_key, format_beta
from skeletons.services.weighted import WeightedGraph

SELECTOR_GRAPH = 'graph'
SELECTOR_SEGMENTS = 'segments'


def _build_grammars():
    """Build the line grammars: point rows, edge rows, header rows and metric selectors."""
    number = pyparsing_common.fnumber
    point_row = number + number

    index = Word(nums).set_parse_action(lambda t: int(t[0]))
    edge_row = index + index

    key = Word(alphanums + '_-')
    header_row = Suppress('#') + key + Suppress(':') + rest_of_line.copy().set_parse_action(lambda t: t[0].strip())

    # lp:<p> | l1 | linf | graph | segments
    lp = (CaselessKeyword('lp') + Suppress(Literal(':')) + Regex(r'[+]?(\d+(\.\d*)?|\.\d+)([eE][+-]?\d+)?|inf'))
    lp.set_parse_action(lambda t: ('lp', float(t[1])))
    named = (
        CaselessKeyword('l1') | CaselessKeyword('linf')
        | CaselessKeyword(SELECTOR_GRAPH) | CaselessKeyword(SELECTOR_SEGMENTS)
    ).set_parse_action(lambda t: (t[0].lower(), None))
    selector = lp | named
    return point_row, edge_row, header_row, selector


_point_row, _edge_row, _header_row, _selector = _build_grammars()


@dataclass(frozen=True)
class Selector:
    """What kind of sites a run works on, and under which metric."""
    kind: str
    p: float | None = None

    @property
    def metric(self) -> MetricSpec | None:
        """Plane metric for point sites; None for graphs and segments."""
        if self.kind == 'lp':
            return MetricSpec.lp(self.p)
        if self.kind == 'l1':
            return MetricSpec.l1()
        if self.kind == 'linf':
            return MetricSpec.linf()
        return None

    @property
    def is_points(self) -> bool:
        return self.kind in ('lp', 'l1', 'linf')

    @property
    def is_rectilinear(self) -> bool:
        return self.kind in ('l1', 'linf')

    @property
    def label(self) -> str:
        return f"lp:{self.p:g}" if self.kind == 'lp' else self.kind


def parse_selector(text: str) -> Selector:
    try:
        kind, p = _selector.parse_string(text.strip(), parse_all=True)[0]
    except ParseException as exc:
        raise SiteParseError(f"Unknown metric selector {text!r}: expected lp:<p>, l1, linf, graph or segments") from exc
    return Selector(kind, p)


def _content_lines(text: str):
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split('#', 1)[0].strip()
        if line:
            yield number, line


def parse_points_text(text: str) -> PointSet:
    rows = []
    for number, line in _content_lines(text):
        try:
            x, y = _point_row.parse_string(line, parse_all=True)
        except ParseException as exc:
            raise SiteParseError(f"Line {number}: expected 'x y', got {line!r}", line=number) from exc
        rows.append((float(x), float(y)))
    try:
        return PointSet(rows)
    except (ValueError, DegenerateGenerators) as exc:
        raise SiteParseError(str(exc)) from exc


def _load_json(text: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise SiteParseError(f"Invalid JSON: {exc.msg}", line=exc.lineno) from exc


def parse_points_json(text: str) -> PointSet:
    data = _load_json(text)
    if isinstance(data, dict):
        data = data.get('points')
    if not isinstance(data, list):
        raise SiteParseError("Expected a JSON list of [x, y] pairs")
    try:
        return PointSet([(float(x), float(y)) for x, y in data])
    except (TypeError, ValueError, DegenerateGenerators) as exc:
        raise SiteParseError(f"Bad point entry: {exc}") from exc


def _is_json(path: Path, text: str) -> bool:
    return path.suffix.lower() == '.json' or text.lstrip()[:1] in ('[', '{')


def load_points(path) -> PointSet:
    path = Path(path)
    text = _read(path)
    return parse_points_json(text) if _is_json(path, text) else parse_points_text(text)


def load_segments(path) -> SegmentSet:
    data = _load_json(_read(Path(path)))
    try:
        return SegmentSet.from_json(data)
    except SegmentsIntersect as exc:
        raise SiteParseError(str(exc)) from exc
    except (TypeError, ValueError) as exc:
        raise SiteParseError(f"Expected a JSON list of [[x1, y1], [x2, y2]] segments: {exc}") from exc


def load_graph(path) -> WeightedGraph:
    data = _load_json(_read(Path(path)))
    try:
        return WeightedGraph.from_json(data)
    except (KeyError, TypeError, ValueError) as exc:
        raise SiteParseError(f"Expected {{vertices, sites, edges}} graph JSON: {exc}") from exc


def _read(path: Path) -> str:
    try:
        return path.read_text(encoding='utf-8')
    except (OSError, UnicodeDecodeError) as exc:
        raise SiteParseError(f"Cannot read {path}: {exc}") from exc


# =============================================================================
# Edge lists
# =============================================================================


@dataclass
class EdgeList:
    edges: list = field(default_factory=list)
    metadata: dict = field(default_factory=dict)

    @property
    def edge_set(self) -> frozenset:
        return frozenset(self.edges)


def parse_edge_list(text: str) -> EdgeList:
    result = EdgeList()
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith('#'):
            try:
                key, value = _header_row.parse_string(line, parse_all=True)
            except ParseException:
                continue
            result.metadata[key] = value
            continue
        try:
            i, j = _edge_row.parse_string(line, parse_all=True)
        except ParseException as exc:
            raise SiteParseError(f"Line {number}: expected 'i j', got {line!r}", line=number) from exc
        if i == j:
            raise SiteParseError(f"Line {number}: self-loop {i} {j}", line=number)
        result.edges.append(edge_key(i, j))
    return result


def read_edge_list(path) -> EdgeList:
    return parse_edge_list(_read(Path(path)))


def format_edge_list(graph: SkeletonGraph, algorithm: str = '', extra: dict | None = None) -> str:
    """Header lines, then one sorted "i j" line per edge."""
    header = {
        'beta': format_beta(graph.beta),
        'metric': graph.metric,
        'variant': str(graph.variant),
        'algorithm': algorithm or graph.producer,
        'sites': str(graph.n_sites),
    }
    if graph.partial:
        header['undefined'] = ' '.join(f"{i}-{j}" for i, j in graph.undefined_pairs)
    header.update(extra or {})
    lines = [f"# {key}: {value}" for key, value in header.items()]
    lines.extend(f"{i} {j}" for i, j in graph.sorted_edges())
    return '\n'.join(lines) + '\n'


def write_atomic(path, text: str):
    """Write `text` to a temp file next to `path`, then rename it into place."""
    path = Path(path)
    directory = path.parent if str(path.parent) else Path('.')
    directory.mkdir(parents=True, exist_ok=True)
    handle = tempfile.NamedTemporaryFile('w', encoding='utf-8', dir=directory, prefix=f".{path.name}.",
                                         suffix='.tmp', delete=False)
    try:
        with handle:
            handle.write(text)
        os.replace(handle.name, path)
    except BaseException:
        if os.path.exists(handle.name):
            os.unlink(handle.name)
        raise
