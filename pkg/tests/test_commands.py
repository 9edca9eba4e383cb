"""
Tests for the skeleton management commands.
"""
import json
import math
from io import StringIO

import pytest
from django.core.management import call_command
from django.core.management.base import CommandError

from skeletons.models import BenchSample, SkeletonRun
from skeletons.services.site_parser import load_graph, load_points, load_segments, read_edge_list


def run(name, *args, **options):
    out, err = StringIO(), StringIO()
    call_command(name, *args, stdout=out, stderr=err, **options)
    return out.getvalue(), err.getvalue()


def edge_lines(text):
    return [line for line in text.splitlines() if line and not line.startswith('#')]


@pytest.fixture
def two_points_file(tmp_path):
    path = tmp_path / 'two.txt'
    path.write_text('0 0\n1 0\n')
    return path


class TestComputeSkeleton:
    """Tests for compute_skeleton."""

    def test_gabriel_triangle(self, points_file):
        out, _ = run('compute_skeleton', str(points_file), metric='lp:2', beta=1)
        assert edge_lines(out) == ['0 2', '1 2']
        assert '# beta: 1' in out
        assert '# algorithm: brute' in out

    def test_two_points(self, two_points_file):
        out, _ = run('compute_skeleton', str(two_points_file), beta=1.7)
        assert edge_lines(out) == ['0 1']

    def test_l1_sweep(self, points_file):
        out, _ = run('compute_skeleton', str(points_file), metric='l1', beta=1.5)
        assert '# algorithm: sweep' in out
        assert '# metric: l1' in out

    def test_weighted_open_beta_two(self, triangle_graph_file):
        out, _ = run('compute_skeleton', str(triangle_graph_file), metric='graph', beta=2, variant='open')
        assert edge_lines(out) == ['0 1', '0 2', '1 2']

    def test_segments_record_resolution(self, tmp_path, three_segments):
        path = tmp_path / 'segments.json'
        path.write_text(json.dumps(three_segments.to_json()))
        out, _ = run('compute_skeleton', str(path), metric='segments', beta=1, resolution=8)
        assert '# resolution: 8' in out
        assert len(edge_lines(out)) == 3

    def test_output_and_svg(self, tmp_path, points_file):
        output = tmp_path / 'edges.txt'
        svg = tmp_path / 'edges.svg'
        run('compute_skeleton', str(points_file), output=str(output), svg=str(svg))
        assert read_edge_list(output).edges == [(0, 2), (1, 2)]
        assert svg.read_text().count('<circle ') == 3

    def test_parse_error(self, tmp_path):
        path = tmp_path / 'bad.txt'
        path.write_text('0 0\n1 zero\n')
        with pytest.raises(CommandError) as info:
            run('compute_skeleton', str(path))
        assert info.value.returncode == 2
        assert 'Line 2' in str(info.value)

    def test_config_error(self, points_file):
        with pytest.raises(CommandError) as info:
            run('compute_skeleton', str(points_file), algorithm='sweep')
        assert info.value.returncode == 3

    def test_beta_above_bound(self, triangle_graph_file):
        with pytest.raises(CommandError) as info:
            run('compute_skeleton', str(triangle_graph_file), metric='graph', beta=2.8)
        assert info.value.returncode == 4

    def test_allow_partial(self, triangle_graph_file):
        out, err = run('compute_skeleton', str(triangle_graph_file), metric='graph', beta=2.8, allow_partial=True)
        assert edge_lines(out) == []
        assert '# undefined: 0-1 0-2 1-2' in out
        assert 'Partial result' in err

    def test_save(self, db, points_file):
        run('compute_skeleton', str(points_file), save=True)
        saved = SkeletonRun.objects.get()
        assert saved.command == 'compute'
        assert saved.status == 'completed'
        assert (saved.site_count, saved.edge_count) == (3, 2)


class TestValidateSkeleton:
    """Tests for validate_skeleton."""

    def test_random_points_pass(self):
        out, _ = run('validate_skeleton', random=50, seed=7, metric='lp:2')
        assert 'VIOLATED' not in out
        assert 'checks passed' in out

    def test_file(self, points_file):
        out, _ = run('validate_skeleton', str(points_file))
        assert 'VIOLATED' not in out

    def test_random_l1(self):
        out, _ = run('validate_skeleton', random=12, seed=1, metric='l1')
        assert 'checks passed' in out

    def test_random_graph(self):
        out, _ = run('validate_skeleton', random=10, seed=2, metric='graph')
        assert 'beta bound' in out

    def test_stored_edges_round_trip(self, tmp_path, points_file):
        edges = tmp_path / 'edges.txt'
        run('compute_skeleton', str(points_file), output=str(edges))
        out, _ = run('validate_skeleton', str(points_file), edges=str(edges))
        assert 'stored edges <= recomputed edges: ok' in out

    def test_hand_edited_edges(self, tmp_path, points_file):
        edges = tmp_path / 'edges.txt'
        run('compute_skeleton', str(points_file), output=str(edges))
        edges.write_text(edges.read_text() + '0 1\n')
        out = StringIO()
        with pytest.raises(CommandError) as info:
            call_command('validate_skeleton', str(points_file), edges=str(edges), stdout=out, stderr=StringIO())
        assert info.value.returncode == 1
        assert 'violating edge 0 1' in out.getvalue()

    def test_equilateral_triangle(self, tmp_path):
        path = tmp_path / 'triangle.txt'
        path.write_text(f"0 0\n2 0\n1 {math.sqrt(3)!r}\n")
        out, _ = run('validate_skeleton', str(path))
        lines = out.splitlines()
        assert 'VIOLATED' not in out
        assert any(line.startswith('MST <= RNG open: ok') for line in lines)
        # one circle-based check per variant, from the oracle suite
        assert sum(line.startswith('circle G_1 ') for line in lines) == 2

    def test_needs_input(self):
        with pytest.raises(CommandError) as info:
            run('validate_skeleton')
        assert info.value.returncode == 2

    def test_save_report(self, db, tmp_path, points_file):
        report = tmp_path / 'report.txt'
        run('validate_skeleton', str(points_file), report=str(report), save=True)
        assert report.read_text().startswith('# validate_skeleton lp:2')
        assert SkeletonRun.objects.get().command == 'validate'


class TestRenderSkeleton:
    """Tests for render_skeleton."""

    @pytest.fixture
    def edges_file(self, tmp_path, points_file):
        path = tmp_path / 'edges.txt'
        run('compute_skeleton', str(points_file), output=str(path))
        return path

    def test_render(self, tmp_path, points_file, edges_file):
        svg = tmp_path / 'out.svg'
        run('render_skeleton', str(points_file), edges=str(edges_file), output=str(svg))
        text = svg.read_text()
        assert text.count('<circle ') == 3
        assert text.count('<line class="edge"') == 2

    def test_lenses(self, tmp_path, points_file, edges_file):
        svg = tmp_path / 'out.svg'
        run('render_skeleton', str(points_file), edges=str(edges_file), output=str(svg), lenses=True)
        assert svg.read_text().count('<polygon class="lens"') == 4

    def test_l1_rectangles(self, tmp_path, points_file):
        edges = tmp_path / 'edges.txt'
        svg = tmp_path / 'out.svg'
        run('compute_skeleton', str(points_file), metric='l1', beta=0.5, output=str(edges))
        run('render_skeleton', str(points_file), edges=str(edges), output=str(svg), lenses=True)
        assert svg.read_text().count('<polygon class="lens"') == len(read_edge_list(edges).edges)

    def test_edge_beyond_sites(self, tmp_path, points_file):
        edges = tmp_path / 'edges.txt'
        edges.write_text('0 7\n')
        with pytest.raises(CommandError) as info:
            run('render_skeleton', str(points_file), edges=str(edges), output=str(tmp_path / 'out.svg'))
        assert info.value.returncode == 2


class TestBenchSkeleton:
    """Tests for bench_skeleton."""

    def test_small_ladder(self):
        out, _ = run('bench_skeleton', ladder='2,4')
        lines = out.splitlines()
        assert lines[0] == 'n,seconds,ratio'
        assert lines[1].startswith('2,')
        assert lines[1].endswith(',')
        assert lines[2].startswith('4,')

    def test_large_ladder(self, tmp_path):
        output = tmp_path / 'large.csv'
        run('bench_skeleton', algorithm='large', ladder='10,20', output=str(output))
        assert len(output.read_text().splitlines()) == 3

    def test_small_needs_small_beta(self):
        with pytest.raises(CommandError) as info:
            run('bench_skeleton', ladder='4', beta=1.5)
        assert info.value.returncode == 3

    def test_euclidean_refused(self):
        with pytest.raises(CommandError) as info:
            run('bench_skeleton', ladder='4', metric='lp:2')
        assert info.value.returncode == 3

    def test_bad_ladder(self):
        with pytest.raises(CommandError):
            run('bench_skeleton', ladder='1,x')

    def test_save(self, db):
        run('bench_skeleton', algorithm='brute', ladder='5,10', save=True)
        saved = SkeletonRun.objects.get()
        assert saved.command == 'bench'
        assert saved.algorithm == 'brute'
        assert list(BenchSample.objects.values_list('n', flat=True)) == [5, 10]


class TestGenerateSites:
    """Tests for generate_sites."""

    def test_points_text(self, tmp_path):
        path = tmp_path / 'points.txt'
        run('generate_sites', str(path), count=20, seed=3)
        assert len(load_points(path)) == 20

    def test_points_json(self, tmp_path):
        path = tmp_path / 'points.json'
        run('generate_sites', str(path), count=5)
        assert len(json.loads(path.read_text())) == 5

    def test_deterministic(self, tmp_path):
        first, second = tmp_path / 'a.txt', tmp_path / 'b.txt'
        run('generate_sites', str(first), count=10, seed=1)
        run('generate_sites', str(second), count=10, seed=1)
        assert first.read_text() == second.read_text()

    def test_segments(self, tmp_path):
        path = tmp_path / 'segments.json'
        run('generate_sites', str(path), kind='segments', count=5)
        assert len(load_segments(path)) == 5

    def test_graph(self, tmp_path):
        path = tmp_path / 'graph.json'
        run('generate_sites', str(path), kind='graph', count=12, sites=4)
        g = load_graph(path)
        assert (g.n_vertices, len(g.sites)) == (12, 4)

    def test_bad_count(self, tmp_path):
        with pytest.raises(CommandError):
            run('generate_sites', str(tmp_path / 'x.txt'), count=0)
