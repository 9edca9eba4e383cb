"""
Options of one command run, checked for consistency before any work starts.
"""
import math
from dataclasses import dataclass

from skeletons.exceptions import ConfigError, SiteParseError
from skeletons.services.lenses import EPS_GEOM
from skeletons.services.segments import DEFAULT_RESOLUTION
from skeletons.services.site_parser import SELECTOR_GRAPH, SELECTOR_SEGMENTS, Selector, parse_selector
from skeletons.services.skeleton_graph import Variant
from skeletons.services.weighted import EPS_WEIGHT

COMMANDS = ('compute', 'validate', 'render', 'bench')
ALGORITHM_AUTO = 'auto'
ALGORITHM_BRUTE = 'brute'
ALGORITHM_SWEEP = 'sweep'
ALGORITHMS = (ALGORITHM_AUTO, ALGORITHM_BRUTE, ALGORITHM_SWEEP)


@dataclass
class RunConfig:
    command: str
    selector: Selector
    input_path: str | None = None
    beta: float | None = None
    variant: str = Variant.CLOSED.value
    algorithm: str = ALGORITHM_AUTO
    resolution: int | None = None
    output: str | None = None
    svg: str | None = None
    seed: int | None = None
    threads: int = 1
    eps_geom: float = EPS_GEOM
    eps_weight: float = EPS_WEIGHT
    default_resolution: int = DEFAULT_RESOLUTION

    @classmethod
    def from_options(cls, command: str, options: dict, settings: dict | None = None) -> 'RunConfig':
        """
        Build from management-command options and the PROXISKEL settings dict.

        An unknown metric selector is a configuration problem here, not a parse
        error of the input file.
        """
        settings = settings or {}
        try:
            selector = parse_selector(options.get('metric') or 'lp:2')
        except SiteParseError as exc:
            raise ConfigError(str(exc)) from exc
        beta = options.get('beta')
        return cls(
            command=command,
            selector=selector,
            input_path=options.get('input'),
            beta=None if beta is None else float(beta),
            variant=(options.get('variant') or Variant.CLOSED.value).lower(),
            algorithm=(options.get('algorithm') or ALGORITHM_AUTO).lower(),
            resolution=options.get('resolution'),
            output=options.get('output'),
            svg=options.get('svg'),
            seed=options.get('seed'),
            threads=int(settings.get('THREADS', 1)),
            eps_geom=float(settings.get('EPS_GEOM', EPS_GEOM)),
            eps_weight=float(settings.get('EPS_WEIGHT', EPS_WEIGHT)),
            default_resolution=int(settings.get('SEGMENT_RESOLUTION', DEFAULT_RESOLUTION)),
        )

    def validate(self) -> 'RunConfig':
        """Raise ConfigError when the selectors contradict each other."""
        if self.command not in COMMANDS:
            raise ConfigError(f"Unknown command {self.command!r}")
        if self.selector.kind == 'lp' and not (1 < self.selector.p < math.inf):
            raise ConfigError(f"lp metric needs 1 < p < inf, got {self.selector.p:g}")
        if self.variant not in (Variant.OPEN.value, Variant.CLOSED.value):
            raise ConfigError(f"Variant must be open or closed, got {self.variant!r}")
        if self.algorithm not in ALGORITHMS:
            raise ConfigError(f"Algorithm must be one of {', '.join(ALGORITHMS)}, got {self.algorithm!r}")
        if self.algorithm == ALGORITHM_SWEEP and not self.selector.is_rectilinear:
            raise ConfigError(f"The sweep algorithm needs l1 or linf, got {self.selector.label}")
        if self.resolution is not None and self.selector.kind != SELECTOR_SEGMENTS:
            raise ConfigError("A grid resolution only applies to segment sites")
        if self.beta is not None:
            if math.isnan(self.beta) or self.beta < 0:
                raise ConfigError(f"beta must be >= 0, got {self.beta}")
            if self.selector.kind == SELECTOR_GRAPH and self.beta < 1:
                raise ConfigError(f"Weighted graph skeletons need beta >= 1, got {self.beta:g}")
        if self.threads < 1:
            raise ConfigError(f"PROXISKEL_THREADS must be >= 1, got {self.threads}")
        return self

    @property
    def effective_algorithm(self) -> str:
        """'auto' resolves to the sweep for l1/linf and brute force otherwise."""
        if self.algorithm != ALGORITHM_AUTO:
            return self.algorithm
        return ALGORITHM_SWEEP if self.selector.is_rectilinear else ALGORITHM_BRUTE

    @property
    def effective_resolution(self) -> int:
        return self.resolution if self.resolution is not None else self.default_resolution
