"""
Management command to time the l1 skeleton algorithms over a ladder of sizes.

Usage:
    # Small-beta rectangle sweep on 2000, 4000 and 8000 points
    python manage.py bench_skeleton --algorithm small

    # Large-beta sweep stage only (candidate generation is not timed)
    python manage.py bench_skeleton --algorithm large --ladder 10000,20000,40000 --output large.csv --save

Prints CSV rows "n,seconds,ratio"; ratio is the time over the previous rung's time.
"""
import csv
import io
import logging
import time

from django.db import transaction

from skeletons.management.base import SkeletonCommand
from skeletons.models import BenchSample
from skeletons.services.l1 import (
    METHOD_PRUNED, beta_skeleton_l1_bruteforce, l1_delaunay_candidates, sweep_large_beta, sweep_small_beta,
)
from skeletons.services.site_parser import write_atomic
from skeletons.services.skeleton_graph import PointSet, Variant

logger = logging.getLogger(__name__)

BENCH_SMALL = 'small'
BENCH_LARGE = 'large'
BENCH_BRUTE = 'brute'
DEFAULT_LADDERS = {
    BENCH_SMALL: (2000, 4000, 8000),
    BENCH_LARGE: (10000, 20000, 40000),
    BENCH_BRUTE: (50, 100, 200),
}
DEFAULT_BETAS = {
    BENCH_SMALL: 0.5,
    BENCH_LARGE: 1.5,
    BENCH_BRUTE: 1.5,
}


class Command(SkeletonCommand):
    help = 'Time an l1 skeleton algorithm on random points of increasing size'
    command_name = 'bench'

    def add_arguments(self, parser):
        parser.add_argument(
            '--algorithm',
            type=str,
            choices=sorted(DEFAULT_LADDERS),
            default=BENCH_SMALL,
            help='small (beta < 1 sweep), large (beta >= 1 sweep) or brute (default: small)'
        )
        parser.add_argument('--ladder', type=str, help='Comma-separated point counts')
        parser.add_argument('--beta', type=float, help='Skeleton parameter (default depends on the algorithm)')
        parser.add_argument('--metric', type=str, default='l1', help='l1 or linf (default: l1)')
        parser.add_argument('--seed', type=int, default=0, help='Random seed for every rung (default: 0)')
        parser.add_argument('--output', type=str, help='CSV file (default: stdout)')
        parser.add_argument('--save', action='store_true', help='Save the run and its samples to the database')

    def run(self, **options):
        algorithm = options['algorithm']
        ladder = self._parse_ladder(options.get('ladder')) or DEFAULT_LADDERS[algorithm]
        beta = options.get('beta')
        cfg = self.build_config({
            **options,
            'algorithm': None,
            'beta': DEFAULT_BETAS[algorithm] if beta is None else beta,
        })
        if not cfg.selector.is_rectilinear:
            raise ValueError(f"bench_skeleton times the l1/linf algorithms, got {cfg.selector.label}")
        if algorithm == BENCH_SMALL and not cfg.beta < 1:
            raise ValueError(f"The small-beta sweep needs beta < 1, got {cfg.beta:g}")
        if algorithm == BENCH_LARGE and cfg.beta < 1:
            raise ValueError(f"The large-beta sweep needs beta >= 1, got {cfg.beta:g}")

        rows = []
        previous = None
        for n in ladder:
            seconds = self._time(algorithm, cfg, PointSet.random(n, options['seed']))
            ratio = seconds / previous if previous else None
            rows.append((n, seconds, ratio))
            previous = seconds
            logger.info(f"bench {algorithm} n={n}: {seconds:.4f}s")

        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator='\n')
        writer.writerow(['n', 'seconds', 'ratio'])
        for n, seconds, ratio in rows:
            writer.writerow([n, f"{seconds:.6f}", '' if ratio is None else f"{ratio:.3f}"])
        text = buffer.getvalue()

        if cfg.output:
            write_atomic(cfg.output, text)
            self.stdout.write(self.style.SUCCESS(f"Wrote {len(rows)} rows to {cfg.output}"))
        else:
            self.stdout.write(text, ending='')

        if options['save']:
            self._save(cfg, algorithm, rows, text)

    def _parse_ladder(self, text):
        if not text:
            return None
        try:
            ladder = tuple(int(part) for part in text.split(','))
        except ValueError as exc:
            raise ValueError(f"--ladder must be comma-separated integers, got {text!r}") from exc
        if any(n < 2 for n in ladder):
            raise ValueError(f"Every ladder size must be at least 2, got {text!r}")
        return ladder

    def _time(self, algorithm: str, cfg, ps: PointSet) -> float:
        variant = Variant(cfg.variant)
        metric = cfg.selector.metric
        if algorithm == BENCH_SMALL:
            start = time.perf_counter()
            sweep_small_beta(ps, variant, metric, cfg.eps_geom)
            return time.perf_counter() - start
        if algorithm == BENCH_LARGE:
            candidates = l1_delaunay_candidates(ps, metric, method=METHOD_PRUNED, eps=cfg.eps_geom)
            start = time.perf_counter()
            sweep_large_beta(ps, cfg.beta, candidates, variant, metric, cfg.eps_geom)
            return time.perf_counter() - start
        start = time.perf_counter()
        beta_skeleton_l1_bruteforce(ps, cfg.beta, variant, metric, cfg.eps_geom)
        return time.perf_counter() - start

    @transaction.atomic
    def _save(self, cfg, algorithm: str, rows: list, text: str):
        run = self.save_run(cfg, 'completed', site_count=rows[-1][0], report=text, algorithm=algorithm)
        BenchSample.objects.bulk_create([
            BenchSample(run=run, n=n, seconds=seconds, ratio=ratio) for n, seconds, ratio in rows
        ])
