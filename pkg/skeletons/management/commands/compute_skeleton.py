"""
Management command to compute a beta-skeleton of a sites file.

Usage:
    # Gabriel graph of a points file
    python manage.py compute_skeleton points.txt --metric lp:2 --beta 1

    # l1 sweep, written to a file with a picture
    python manage.py compute_skeleton points.txt --metric l1 --beta 1.5 --output edges.txt --svg edges.svg

    # Weighted graph, keeping pairs above their lens bound out of the result
    python manage.py compute_skeleton graph.json --metric graph --beta 2.8 --allow-partial
"""
from skeletons.management.base import SkeletonCommand
from skeletons.services.dispatch import compute, load_sites
from skeletons.services.render import render_scene
from skeletons.services.run_config import ALGORITHMS
from skeletons.services.site_parser import SELECTOR_SEGMENTS, format_edge_list, write_atomic


class Command(SkeletonCommand):
    help = 'Compute the beta-skeleton of point, segment or weighted-graph sites'
    command_name = 'compute'

    def add_arguments(self, parser):
        parser.add_argument('input', type=str, help='Sites file')
        parser.add_argument(
            '--metric',
            type=str,
            default='lp:2',
            help='lp:<p>, l1, linf, graph or segments (default: lp:2)'
        )
        parser.add_argument('--beta', type=float, default=1.0, help='Skeleton parameter (default: 1)')
        parser.add_argument(
            '--variant',
            type=str,
            default='closed',
            help='open or closed lenses (default: closed)'
        )
        parser.add_argument(
            '--algorithm',
            type=str,
            default='auto',
            help=f"One of {', '.join(ALGORITHMS)} (default: auto)"
        )
        parser.add_argument('--resolution', type=int, help='Parameter grid resolution for segment sites')
        parser.add_argument('--output', type=str, help='Edge list file (default: stdout)')
        parser.add_argument('--svg', type=str, help='Also render the skeleton to this SVG file')
        parser.add_argument(
            '--allow-partial',
            action='store_true',
            help='Weighted graphs: leave out pairs whose lens is undefined instead of failing'
        )
        parser.add_argument('--save', action='store_true', help='Save the run to the database')

    def run(self, **options):
        cfg = self.build_config(options)
        sites = load_sites(cfg.selector, cfg.input_path)
        graph = compute(cfg, sites, strict=not options['allow_partial'])
        extra = {'resolution': str(cfg.effective_resolution)} if cfg.selector.kind == SELECTOR_SEGMENTS else None
        text = format_edge_list(graph, cfg.effective_algorithm, extra)

        if cfg.output:
            write_atomic(cfg.output, text)
            self.stdout.write(self.style.SUCCESS(f"Wrote {len(graph)} edges to {cfg.output}"))
        else:
            self.stdout.write(text, ending='')

        if cfg.svg:
            write_atomic(cfg.svg, render_scene(sites.scene(graph)))
            self.stdout.write(self.style.SUCCESS(f"Wrote {cfg.svg}"))

        if graph.partial:
            self.stderr.write(self.style.WARNING(
                f"Partial result: {len(graph.undefined_pairs)} pairs have no well-defined lens"
            ))

        if options['save']:
            self.save_run(
                cfg, 'partial' if graph.partial else 'completed',
                site_count=len(sites), edge_count=len(graph),
            )
