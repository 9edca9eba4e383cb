"""
Shared data types: point sets, skeleton graphs and inclusion-chain reports.
"""
import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable

import numpy as np

from skeletons.exceptions import DegenerateGenerators
from skeletons.services.metric import Point2, check_point

logger = logging.getLogger(__name__)


class Variant(str, Enum):
    """Whether lens boundaries belong to the lens."""
    OPEN = 'open'
    CLOSED = 'closed'

    def __str__(self):
        return self.value


def as_variant(value) -> Variant:
    """Accept a Variant or its string value."""
    if isinstance(value, Variant):
        return value
    return Variant(str(value).lower())


def edge_key(i: int, j: int) -> tuple[int, int]:
    """Normalize an undirected edge to (min, max)."""
    i, j = int(i), int(j)
    return (i, j) if i < j else (j, i)


def format_beta(beta: float) -> str:
    return 'inf' if beta == float('inf') else f"{beta:g}"


class PointSet:
    """
    Ordered planar point sites; the index of a point is its site id.

    Exact duplicates are rejected with DegenerateGenerators.
    """

    def __init__(self, points: Iterable):
        rows = [check_point(p) for p in points]
        self.coords = np.array(rows, dtype=float).reshape(-1, 2)
        if len(self.coords) > 1:
            unique = np.unique(self.coords, axis=0)
            if len(unique) != len(self.coords):
                raise DegenerateGenerators("Point set contains coincident points")

    @classmethod
    def random(cls, n: int, seed: int) -> 'PointSet':
        """Uniform random points in the unit square."""
        rng = np.random.default_rng(seed)
        return cls(rng.random((n, 2)))

    def __len__(self):
        return len(self.coords)

    def __getitem__(self, index) -> Point2:
        x, y = self.coords[index]
        return Point2(float(x), float(y))

    def __iter__(self):
        for index in range(len(self)):
            yield self[index]

    def __repr__(self):
        return f"PointSet(n={len(self)})"


@dataclass
class SkeletonGraph:
    """An undirected proximity graph on indexed sites."""
    n_sites: int
    edges: frozenset
    beta: float
    metric: str
    variant: Variant
    producer: str
    witnesses: dict = field(default_factory=dict)
    undefined_pairs: list = field(default_factory=list)

    def __post_init__(self):
        normalized = set()
        for i, j in self.edges:
            if i == j:
                raise ValueError(f"Self-loop on site {i}")
            if not (0 <= i < self.n_sites and 0 <= j < self.n_sites):
                raise ValueError(f"Edge ({i}, {j}) outside 0..{self.n_sites - 1}")
            normalized.add(edge_key(i, j))
        self.edges = frozenset(normalized)
        self.variant = as_variant(self.variant)

    @property
    def partial(self) -> bool:
        """True when some pairs could not be decided (lens undefined)."""
        return bool(self.undefined_pairs)

    def sorted_edges(self) -> list[tuple[int, int]]:
        return sorted(self.edges)

    def __len__(self):
        return len(self.edges)

    def __contains__(self, pair):
        return edge_key(*pair) in self.edges

    def describe(self) -> str:
        return (
            f"{self.producer} beta={format_beta(self.beta)} metric={self.metric} "
            f"variant={self.variant} n={self.n_sites} edges={len(self.edges)}"
        )


@dataclass
class InclusionCheck:
    """One leg of an inclusion chain: every edge of `subset` must be in `superset`."""
    subset: str
    superset: str
    checked: int
    violations: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations


@dataclass
class ChainReport:
    """Outcome of an inclusion-chain or equivalence validation."""
    title: str
    checks: list = field(default_factory=list)
    notes: list = field(default_factory=list)

    def require(self, subset_name: str, subset: Iterable, superset_name: str, superset: Iterable):
        """Record the check edges(subset) within edges(superset)."""
        sub = {edge_key(*e) for e in subset}
        sup = {edge_key(*e) for e in superset}
        missing = sorted(sub - sup)
        if missing:
            logger.warning(f"{self.title}: {subset_name} not within {superset_name}: {len(missing)} edges")
        self.checks.append(InclusionCheck(subset_name, superset_name, len(sub), missing))

    def require_equal(self, left_name: str, left: Iterable, right_name: str, right: Iterable):
        """Record inclusion both ways."""
        left = list(left)
        right = list(right)
        self.require(left_name, left, right_name, right)
        self.require(right_name, right, left_name, left)

    def merge(self, other: 'ChainReport', prefix: str = ''):
        for check in other.checks:
            self.checks.append(InclusionCheck(
                f"{prefix}{check.subset}", f"{prefix}{check.superset}",
                check.checked, list(check.violations),
            ))
        self.notes.extend(other.notes)

    @property
    def ok(self) -> bool:
        return all(check.ok for check in self.checks)

    @property
    def violation_count(self) -> int:
        return sum(len(check.violations) for check in self.checks)

    def lines(self) -> list[str]:
        """Human-readable report lines, one per check."""
        out = [f"# {self.title}"]
        for check in self.checks:
            status = 'ok' if check.ok else 'VIOLATED'
            out.append(
                f"{check.subset} <= {check.superset}: {status} "
                f"({check.checked} edges checked, {len(check.violations)} violations)"
            )
            for i, j in check.violations:
                out.append(f"  violating edge {i} {j}")
        for note in self.notes:
            out.append(f"note: {note}")
        return out
