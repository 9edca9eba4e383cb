"""
Route a RunConfig to the loader, skeleton builder and validation suite for its sites.
"""
import logging
from dataclasses import dataclass

from skeletons.exceptions import NoCycle
from skeletons.services import l1, planar, segments, weighted
from skeletons.services.render import Scene
from skeletons.services.segments import SegmentSet
from skeletons.services.run_config import ALGORITHM_SWEEP, RunConfig
from skeletons.services.site_parser import (
    SELECTOR_GRAPH, SELECTOR_SEGMENTS, Selector, load_graph, load_points, load_segments,
)
from skeletons.services.skeleton_graph import ChainReport, PointSet, SkeletonGraph, Variant
from skeletons.services.weighted import WeightedGraph

logger = logging.getLogger(__name__)


@dataclass
class Sites:
    """Loaded input: exactly one of the three site kinds."""
    selector: Selector
    points: PointSet | None = None
    segments: SegmentSet | None = None
    graph: WeightedGraph | None = None

    def __len__(self):
        if self.points is not None:
            return len(self.points)
        if self.segments is not None:
            return len(self.segments)
        return len(self.graph.sites)

    def scene(self, skeleton: SkeletonGraph | None = None) -> Scene:
        if self.points is not None:
            return Scene.for_points(self.points.coords, skeleton)
        if self.segments is not None:
            return Scene.for_segments(self.segments, skeleton)
        return Scene.for_graph(self.graph, skeleton)


def load_sites(selector: Selector, path) -> Sites:
    if selector.kind == SELECTOR_GRAPH:
        return Sites(selector, graph=load_graph(path))
    if selector.kind == SELECTOR_SEGMENTS:
        return Sites(selector, segments=load_segments(path))
    return Sites(selector, points=load_points(path))


def compute(cfg: RunConfig, sites: Sites, beta: float | None = None, strict: bool = True) -> SkeletonGraph:
    """Skeleton for the configured metric, variant and algorithm."""
    beta = cfg.beta if beta is None else beta
    variant = Variant(cfg.variant)
    selector = cfg.selector
    logger.info(f"Computing {selector.label} skeleton beta={beta:g} {variant} on {len(sites)} sites")

    if selector.kind == SELECTOR_GRAPH:
        return weighted.weighted_beta_skeleton(
            sites.graph, beta, variant, strict=strict, eps=cfg.eps_weight, threads=cfg.threads,
        )
    if selector.kind == SELECTOR_SEGMENTS:
        return segments.segment_beta_skeleton(
            sites.segments, beta, variant, cfg.effective_resolution, cfg.eps_geom, cfg.threads,
        )
    metric = selector.metric
    if selector.is_rectilinear:
        if cfg.effective_algorithm == ALGORITHM_SWEEP:
            return l1.l1_skeleton(sites.points, beta, variant, metric, eps=cfg.eps_geom)
        return l1.beta_skeleton_l1_bruteforce(sites.points, beta, variant, metric, cfg.eps_geom)
    return planar.beta_skeleton_bruteforce(sites.points, metric, beta, variant, cfg.eps_geom, cfg.threads)


def validation_suite(cfg: RunConfig, sites: Sites, betas=None) -> ChainReport:
    """Chain, collapse and oracle checks applicable to the sites' kind."""
    selector = cfg.selector
    variant = Variant(cfg.variant)
    report = ChainReport(f"Validation of {len(sites)} {selector.label} sites")

    if selector.kind == SELECTOR_GRAPH:
        chain_betas = betas or (1.0, 1.5, 2.0)
        report.merge(weighted.weighted_chain_check(
            sites.graph, chain_betas, eps=cfg.eps_weight, threads=cfg.threads, variant=variant,
        ))
        try:
            bound = weighted.beta_bound(sites.graph)
            if bound < 2:
                report.notes.append(f"beta bound {bound:g} below 2")
            else:
                report.notes.append(f"beta bound {bound:g}")
        except NoCycle as exc:
            report.notes.append(f"beta bound undefined for {len(exc.pairs)} site pairs without a cycle")
        return report

    if selector.kind == SELECTOR_SEGMENTS:
        m = cfg.effective_resolution
        chain_betas = betas or (1.0, 1.5, 2.0)
        report.merge(segments.chain_check_segments(
            sites.segments, chain_betas, m, variant, cfg.eps_geom, cfg.threads,
        ))
        gabriel = segments.segment_beta_skeleton(sites.segments, 1.0, variant, m, cfg.eps_geom, cfg.threads)
        report.require('GG witnesses', gabriel.edges, 'valid witnesses',
                       gabriel.edges - set(segments.invalid_witnesses(sites.segments, gabriel, cfg.eps_geom)))
        return report

    metric = selector.metric
    if selector.is_rectilinear:
        report.merge(l1.l1_chain_check(sites.points, betas or planar.CHAIN_BETAS, variant, metric, cfg.eps_geom))
        report.merge(l1.l1_collapse_check(sites.points, variant=variant, metric=metric, eps=cfg.eps_geom))
        report.merge(l1.l1_oracle_check(sites.points, variant=variant, metric=metric, eps=cfg.eps_geom))
        return report

    if metric.is_euclidean:
        chain_betas = betas or planar.CHAIN_BETAS
        report.merge(planar.inclusion_chain_check(sites.points, chain_betas, variant, cfg.threads))
    report.merge(planar.lp_oracle_check(sites.points, metric, eps=cfg.eps_geom, threads=cfg.threads))
    return report
