"""
Management command to run the inclusion-chain, collapse and oracle suites.

Usage:
    # Chain and oracle checks on a points file
    python manage.py validate_skeleton points.txt --metric lp:2

    # 50 random points, 100 seeds starting at 7
    python manage.py validate_skeleton --random 50 --seed 7 --seeds 100 --metric lp:2

    # Compare a stored edge list with a recomputation
    python manage.py validate_skeleton points.txt --edges edges.txt

Exits with code 1 when any check is violated.
"""
from skeletons.exceptions import SiteParseError
from skeletons.management.base import SkeletonCommand
from skeletons.services.dispatch import Sites, compute, load_sites, validation_suite
from skeletons.services.run_config import RunConfig
from skeletons.services.segments import SegmentSet
from skeletons.services.site_parser import (
    SELECTOR_GRAPH, SELECTOR_SEGMENTS, parse_selector, read_edge_list, write_atomic,
)
from skeletons.services.skeleton_graph import ChainReport, PointSet
from skeletons.services.weighted import WeightedGraph

GRAPH_SITES = 8


class Command(SkeletonCommand):
    help = 'Validate skeleton inclusion chains, collapses and oracle equivalences'
    command_name = 'validate'

    def add_arguments(self, parser):
        parser.add_argument('input', nargs='?', type=str, help='Sites file (omit with --random)')
        parser.add_argument('--random', type=int, help='Generate this many random sites instead of reading a file')
        parser.add_argument('--seed', type=int, default=0, help='First random seed (default: 0)')
        parser.add_argument('--seeds', type=int, default=1, help='Number of consecutive seeds (default: 1)')
        parser.add_argument(
            '--metric',
            type=str,
            default='lp:2',
            help='lp:<p>, l1, linf, graph or segments (default: lp:2)'
        )
        parser.add_argument('--betas', type=str, help='Comma-separated chain betas in [1, 2]')
        parser.add_argument('--variant', type=str, default='closed', help='open or closed (default: closed)')
        parser.add_argument('--resolution', type=int, help='Parameter grid resolution for segment sites')
        parser.add_argument('--edges', type=str, help='Edge list to compare with a recomputation')
        parser.add_argument('--report', type=str, help='Write the report to this file (default: stdout)')
        parser.add_argument('--save', action='store_true', help='Save the run to the database')

    def run(self, **options):
        cfg = self.build_config(options)
        betas = self._parse_betas(options.get('betas'))
        if not cfg.input_path and options.get('random') is None:
            raise SiteParseError("Give a sites file or --random N")

        report = ChainReport(f"validate_skeleton {cfg.selector.label}")
        site_count = 0
        if options.get('random') is not None:
            for seed in range(options['seed'], options['seed'] + options['seeds']):
                sites = self._random_sites(cfg, options['random'], seed)
                site_count = len(sites)
                report.merge(validation_suite(cfg, sites, betas), prefix=f"seed {seed}: ")
        else:
            sites = load_sites(cfg.selector, cfg.input_path)
            site_count = len(sites)
            report.merge(validation_suite(cfg, sites, betas))
            if options.get('edges'):
                self._round_trip(cfg, sites, options['edges'], report)

        text = '\n'.join(report.lines()) + '\n'
        if options.get('report'):
            write_atomic(options['report'], text)
            self.stdout.write(f"Report written to {options['report']}")
        else:
            self.stdout.write(text, ending='')

        if options['save']:
            self.save_run(
                cfg, 'completed' if report.ok else 'violations',
                site_count=site_count, violation_count=report.violation_count, report=text,
            )
        if not report.ok:
            self.stderr.write(self.style.ERROR(f"{report.violation_count} violating edges"))
            self.violations(report.violation_count)
        self.stdout.write(self.style.SUCCESS(f"All {len(report.checks)} checks passed"))

    def _parse_betas(self, text):
        if not text:
            return None
        try:
            return tuple(float(part) for part in text.split(','))
        except ValueError as exc:
            raise ValueError(f"--betas must be comma-separated numbers, got {text!r}") from exc

    def _random_sites(self, cfg: RunConfig, count: int, seed: int) -> Sites:
        if cfg.selector.kind == SELECTOR_GRAPH:
            return Sites(cfg.selector, graph=WeightedGraph.random(count, min(GRAPH_SITES, count), seed))
        if cfg.selector.kind == SELECTOR_SEGMENTS:
            return Sites(cfg.selector, segments=SegmentSet.random(count, seed))
        return Sites(cfg.selector, points=PointSet.random(count, seed))

    def _round_trip(self, cfg: RunConfig, sites: Sites, path: str, report: ChainReport):
        """Recompute with the settings recorded in the edge list header and compare."""
        stored = read_edge_list(path)
        header = stored.metadata
        selector = parse_selector(header.get('metric', cfg.selector.label))
        replay = RunConfig(
            command=cfg.command,
            selector=selector,
            input_path=cfg.input_path,
            beta=float(header.get('beta', cfg.beta if cfg.beta is not None else 1.0)),
            variant=header.get('variant', cfg.variant),
            algorithm=header['algorithm'] if header.get('algorithm') in ('brute', 'sweep') else 'auto',
            resolution=int(header['resolution']) if 'resolution' in header else cfg.resolution,
            threads=cfg.threads,
            eps_geom=cfg.eps_geom,
            eps_weight=cfg.eps_weight,
            default_resolution=cfg.default_resolution,
        )
        recomputed = compute(replay, sites, strict=False)
        report.require_equal('stored edges', stored.edge_set, 'recomputed edges', recomputed.edges)
