"""
Management command to write deterministic random site files.

Usage:
    # 100 points in the unit square, one "x y" pair per line
    python manage.py generate_sites points.txt --count 100 --seed 7

    # Disjoint segments
    python manage.py generate_sites segments.json --kind segments --count 20

    # 2-edge-connected weighted graph on 30 vertices with 8 sites
    python manage.py generate_sites graph.json --kind graph --count 30 --sites 8
"""
import json

from skeletons.management.base import SkeletonCommand
from skeletons.services.segments import SegmentSet
from skeletons.services.site_parser import write_atomic
from skeletons.services.skeleton_graph import PointSet
from skeletons.services.weighted import WeightedGraph

KIND_POINTS = 'points'
KIND_SEGMENTS = 'segments'
KIND_GRAPH = 'graph'


def format_points(ps: PointSet, as_json: bool = False) -> str:
    rows = [[float(x), float(y)] for x, y in ps.coords]
    if as_json:
        return json.dumps(rows) + '\n'
    return ''.join(f"{x!r} {y!r}\n" for x, y in rows)


class Command(SkeletonCommand):
    help = 'Write random point, segment or weighted-graph sites'
    command_name = 'generate'

    def add_arguments(self, parser):
        parser.add_argument('output', type=str, help='File to write')
        parser.add_argument(
            '--kind',
            type=str,
            choices=(KIND_POINTS, KIND_SEGMENTS, KIND_GRAPH),
            default=KIND_POINTS,
            help='Site kind (default: points)'
        )
        parser.add_argument('--count', type=int, default=50, help='Points, segments or graph vertices (default: 50)')
        parser.add_argument('--sites', type=int, help='Graph sites (default: min(8, count))')
        parser.add_argument('--seed', type=int, default=0, help='Random seed (default: 0)')

    def run(self, **options):
        kind = options['kind']
        count = options['count']
        seed = options['seed']
        output = options['output']
        if count < 1:
            raise ValueError(f"--count must be positive, got {count}")

        if kind == KIND_GRAPH:
            sites = options.get('sites') or min(8, count)
            text = json.dumps(WeightedGraph.random(count, sites, seed).to_json()) + '\n'
        elif kind == KIND_SEGMENTS:
            text = json.dumps(SegmentSet.random(count, seed).to_json()) + '\n'
        else:
            text = format_points(PointSet.random(count, seed), as_json=output.lower().endswith('.json'))

        write_atomic(output, text)
        self.stdout.write(self.style.SUCCESS(f"Wrote {count} {kind} to {output}"))
