"""
Management command to draw sites and a stored edge list as SVG.

Usage:
    # Picture of a computed skeleton
    python manage.py render_skeleton points.txt --edges edges.txt --output skeleton.svg

    # With the lens of every edge outlined
    python manage.py render_skeleton points.txt --edges edges.txt --output skeleton.svg --lenses
"""
import logging

from skeletons.exceptions import SiteParseError
from skeletons.management.base import SkeletonCommand
from skeletons.services.dispatch import load_sites
from skeletons.services.l1 import canonical_lenses_l1
from skeletons.services.lenses import FORM_DISCS, FORM_RECTANGLE, lens_construct
from skeletons.services.render import render_scene
from skeletons.services.site_parser import read_edge_list, write_atomic
from skeletons.services.skeleton_graph import SkeletonGraph

logger = logging.getLogger(__name__)

DRAWABLE_FORMS = (FORM_DISCS, FORM_RECTANGLE)


class Command(SkeletonCommand):
    help = 'Render sites and a stored edge list to SVG'
    command_name = 'render'

    def add_arguments(self, parser):
        parser.add_argument('input', type=str, help='Sites file')
        parser.add_argument('--edges', type=str, required=True, help='Edge list written by compute_skeleton')
        parser.add_argument('--output', type=str, required=True, help='SVG file to write')
        parser.add_argument(
            '--metric',
            type=str,
            help='lp:<p>, l1, linf, graph or segments (default: from the edge list header, else lp:2)'
        )
        parser.add_argument('--lenses', action='store_true', help='Outline the lens of every point-site edge')

    def run(self, **options):
        stored = read_edge_list(options['edges'])
        header = stored.metadata
        options = {
            **options,
            'metric': options.get('metric') or header.get('metric') or 'lp:2',
            'beta': header.get('beta'),
            'variant': header.get('variant'),
        }
        cfg = self.build_config(options)
        sites = load_sites(cfg.selector, cfg.input_path)

        n = len(sites)
        for i, j in stored.edges:
            if j >= n:
                raise SiteParseError(f"Edge {i} {j} refers to a site beyond the {n} in {cfg.input_path}")

        graph = SkeletonGraph(
            n_sites=n,
            beta=cfg.beta if cfg.beta is not None else 1.0,
            variant=cfg.variant,
            metric=cfg.selector.label,
            edges=set(stored.edges),
            producer=header.get('algorithm', 'stored'),
        )
        scene = sites.scene(graph)
        if options['lenses']:
            self._outline_lenses(scene, cfg, sites, graph)

        write_atomic(cfg.output, render_scene(scene))
        self.stdout.write(self.style.SUCCESS(f"Wrote {len(graph)} edges to {cfg.output}"))

    def _outline_lenses(self, scene, cfg, sites, graph):
        if sites.points is None:
            self.stderr.write(self.style.WARNING("Lens outlines are only drawn for point sites"))
            return
        metric = cfg.selector.metric
        for i, j in graph.sorted_edges():
            v1, v2 = sites.points[i], sites.points[j]
            if metric.is_rectilinear:
                lenses = canonical_lenses_l1(v1, v2, graph.beta, metric).representatives
            else:
                lenses = [lens_construct(metric, v1, v2, graph.beta)]
            for lens in lenses:
                if lens.form in DRAWABLE_FORMS:
                    scene.add_lens(lens, self.proxiskel.get('SVG_SAMPLES', 256))
                else:
                    logger.debug(f"No outline for the {lens.form} lens of {i} {j}")
