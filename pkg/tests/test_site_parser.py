"""
Tests for skeletons/services/site_parser.py
"""
import json
import math

import pytest

from skeletons.exceptions import SiteParseError
from skeletons.services.metric import MetricSpec
from skeletons.services.planar import gabriel_graph
from skeletons.services.site_parser import (
    Selector,
    format_edge_list,
    load_graph,
    load_points,
    load_segments,
    parse_edge_list,
    parse_points_json,
    parse_points_text,
    parse_selector,
    read_edge_list,
    write_atomic,
)
from skeletons.services.weighted import weighted_beta_skeleton


class TestSelectors:
    """Tests for parse_selector."""

    def test_lp(self):
        selector = parse_selector('lp:3')
        assert selector == Selector('lp', 3.0)
        assert selector.metric == MetricSpec.lp(3)
        assert selector.is_points
        assert not selector.is_rectilinear

    def test_lp_decimal_and_infinite(self):
        assert parse_selector('lp:1.5').p == 1.5
        assert math.isinf(parse_selector('lp:inf').p)

    @pytest.mark.parametrize('text, kind', [('l1', 'l1'), ('LINF', 'linf'), ('graph', 'graph'), (' segments ', 'segments')])
    def test_named(self, text, kind):
        assert parse_selector(text).kind == kind

    def test_rectilinear(self):
        assert parse_selector('l1').is_rectilinear
        assert parse_selector('linf').metric == MetricSpec.linf()

    def test_graph_has_no_metric(self):
        selector = parse_selector('graph')
        assert selector.metric is None
        assert not selector.is_points
        assert selector.label == 'graph'

    @pytest.mark.parametrize('text', ['l2', 'lp', 'lp:', 'lp:x', 'euclid'])
    def test_unknown(self, text):
        with pytest.raises(SiteParseError):
            parse_selector(text)


class TestPoints:
    """Tests for the point formats."""

    def test_text_with_comments(self):
        ps = parse_points_text("# sites\n0 0\n\n2 0  # right\n1 0.1\n")
        assert ps.coords.tolist() == [[0.0, 0.0], [2.0, 0.0], [1.0, 0.1]]

    def test_scientific_notation(self):
        assert parse_points_text("1e-3 -2.5E2\n").coords.tolist() == [[0.001, -250.0]]

    def test_bad_line_reports_number(self):
        with pytest.raises(SiteParseError) as info:
            parse_points_text("0 0\n1 one\n")
        assert info.value.line == 2

    def test_three_numbers(self):
        with pytest.raises(SiteParseError):
            parse_points_text("0 0 0\n")

    def test_duplicates(self):
        with pytest.raises(SiteParseError):
            parse_points_text("0 0\n0 0\n")

    def test_json_list(self):
        assert len(parse_points_json('[[0, 0], [1, 2]]')) == 2

    def test_json_object(self):
        assert len(parse_points_json('{"points": [[0, 0], [1, 2], [3, 3]]}')) == 3

    def test_json_bad_entry(self):
        with pytest.raises(SiteParseError):
            parse_points_json('[[0, 0], [1]]')

    def test_json_syntax_error_line(self):
        with pytest.raises(SiteParseError) as info:
            parse_points_json('[\n[0, 0],\n[1, 2\n')
        assert info.value.line is not None

    def test_load_text_file(self, points_file):
        assert len(load_points(points_file)) == 3

    def test_load_json_detected_by_content(self, tmp_path):
        path = tmp_path / 'sites.dat'
        path.write_text('[[0, 0], [1, 1]]')
        assert len(load_points(path)) == 2

    def test_missing_file(self, tmp_path):
        with pytest.raises(SiteParseError):
            load_points(tmp_path / 'missing.txt')


class TestOtherSites:
    """Tests for segment and graph files."""

    def test_segments(self, tmp_path, three_segments):
        path = tmp_path / 'segments.json'
        path.write_text(json.dumps(three_segments.to_json()))
        assert len(load_segments(path)) == 3

    def test_crossing_segments(self, tmp_path):
        path = tmp_path / 'segments.json'
        path.write_text('[[[0, 0], [1, 1]], [[0, 1], [1, 0]]]')
        with pytest.raises(SiteParseError):
            load_segments(path)

    def test_malformed_segments(self, tmp_path):
        path = tmp_path / 'segments.json'
        path.write_text('[[0, 0]]')
        with pytest.raises(SiteParseError):
            load_segments(path)

    def test_graph(self, triangle_graph_file):
        g = load_graph(triangle_graph_file)
        assert g.n_vertices == 3
        assert g.sites == (0, 1, 2)

    def test_graph_missing_key(self, tmp_path):
        path = tmp_path / 'graph.json'
        path.write_text('{"vertices": 3, "edges": []}')
        with pytest.raises(SiteParseError):
            load_graph(path)

    def test_graph_bad_weight(self, tmp_path):
        path = tmp_path / 'graph.json'
        path.write_text('{"vertices": 2, "sites": [0, 1], "edges": [[0, 1, -1]]}')
        with pytest.raises(SiteParseError):
            load_graph(path)


class TestEdgeLists:
    """Tests for edge list reading and writing."""

    def test_parse(self):
        edges = parse_edge_list("# beta: 1.5\n# metric: lp:2\n2 0\n1 2\n")
        assert edges.edges == [(0, 2), (1, 2)]
        assert edges.metadata == {'beta': '1.5', 'metric': 'lp:2'}
        assert edges.edge_set == frozenset({(0, 2), (1, 2)})

    def test_free_comment_ignored(self):
        assert parse_edge_list("# hand edited\n0 1\n").metadata == {}

    def test_bad_row(self):
        with pytest.raises(SiteParseError) as info:
            parse_edge_list("0 1\n1 x\n")
        assert info.value.line == 2

    def test_self_loop(self):
        with pytest.raises(SiteParseError):
            parse_edge_list("3 3\n")

    def test_format(self, gabriel_triangle):
        text = format_edge_list(gabriel_graph(gabriel_triangle))
        assert text == (
            "# beta: 1\n# metric: lp:2\n# variant: closed\n# algorithm: gabriel\n# sites: 3\n"
            "0 2\n1 2\n"
        )

    def test_format_overrides(self, gabriel_triangle):
        text = format_edge_list(gabriel_graph(gabriel_triangle), algorithm='brute', extra={'seed': '7'})
        assert "# algorithm: brute\n" in text
        assert "# seed: 7\n" in text

    def test_format_partial_run(self, weighted_triangle):
        graph = weighted_beta_skeleton(weighted_triangle, 2.8)
        assert "# undefined: 0-1 0-2 1-2\n" in format_edge_list(graph)

    def test_written_file_reads_back(self, tmp_path, gabriel_triangle):
        graph = gabriel_graph(gabriel_triangle)
        path = tmp_path / 'edges.txt'
        write_atomic(path, format_edge_list(graph))
        edges = read_edge_list(path)
        assert edges.edge_set == graph.edges
        assert edges.metadata['variant'] == 'closed'


class TestWriteAtomic:
    """Tests for write_atomic."""

    def test_creates_directories(self, tmp_path):
        path = tmp_path / 'nested' / 'out.txt'
        write_atomic(path, 'hello\n')
        assert path.read_text() == 'hello\n'

    def test_replaces_and_leaves_no_temp_files(self, tmp_path):
        path = tmp_path / 'out.txt'
        path.write_text('old')
        write_atomic(path, 'new')
        assert path.read_text() == 'new'
        assert [p.name for p in tmp_path.iterdir()] == ['out.txt']
