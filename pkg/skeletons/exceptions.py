"""
Exceptions raised by the skeleton services.

Validation outcomes (inclusion violations, oracle mismatches) are reported as
data in ChainReport objects and never raised.
"""


class SkeletonError(Exception):
    """Base class for every error raised by the skeleton services."""
    pass


class DegenerateGenerators(SkeletonError):
    """Raised when two generators (or two input sites) coincide."""
    pass


class UnsupportedMetric(SkeletonError):
    """Raised when an operation is asked to run under a metric it does not support."""
    pass


class CollinearInput(SkeletonError):
    """Raised when a triangulation is requested for collinear points."""
    pass


class InvalidCandidates(SkeletonError):
    """Raised when a candidate edge refers to a site that does not exist."""
    pass


class DisconnectedGraph(SkeletonError):
    """Raised when a weighted graph is not connected."""
    pass


class BetaOutOfRange(SkeletonError):
    """Raised when beta exceeds the lens validity bound of one or more site pairs."""

    def __init__(self, message, pairs=None):
        super().__init__(message)
        self.pairs = list(pairs or [])


class NoCycle(SkeletonError):
    """Raised when site pairs have no two edge-disjoint connecting paths."""

    def __init__(self, message, pairs=None):
        super().__init__(message)
        self.pairs = list(pairs or [])


class ResolutionTooSmall(SkeletonError):
    """Raised when a segment grid resolution is below 2."""
    pass


class SegmentsIntersect(SkeletonError):
    """Raised when segment sites touch or cross each other."""
    pass


class EmptyScene(SkeletonError):
    """Raised when asked to render a scene with nothing in it."""
    pass


class SiteParseError(SkeletonError):
    """Raised when a sites or edge-list file cannot be parsed."""

    def __init__(self, message, line=None):
        super().__init__(message)
        self.line = line


class ConfigError(SkeletonError):
    """Raised when run options are inconsistent with each other."""
    pass
