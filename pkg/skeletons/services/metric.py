"""
Plane metrics used by the skeleton computations.

Three kinds are supported: l_p with 1 < p < infinity, l_1 and l_infinity.
Norms are evaluated with numpy so the same code serves single points and
whole coordinate arrays.
"""
import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

KIND_LP = 'lp'
KIND_L1 = 'l1'
KIND_LINF = 'linf'


class Point2(NamedTuple):
    """A point of the plane."""
    x: float
    y: float


def check_point(point) -> Point2:
    """Return `point` as a Point2, rejecting NaN and infinite coordinates."""
    x, y = float(point[0]), float(point[1])
    if not (math.isfinite(x) and math.isfinite(y)):
        raise ValueError(f"Point coordinates must be finite, got ({x}, {y})")
    return Point2(x, y)


@dataclass(frozen=True)
class MetricSpec:
    """Which plane metric is in force."""
    kind: str
    p: float | None = None

    def __post_init__(self):
        if self.kind == KIND_LP:
            if self.p is None or not (1.0 < float(self.p) < math.inf):
                raise ValueError(f"l_p metric needs 1 < p < inf, got p={self.p}")
            object.__setattr__(self, 'p', float(self.p))
        elif self.kind in (KIND_L1, KIND_LINF):
            object.__setattr__(self, 'p', None)
        else:
            raise ValueError(f"Unknown metric kind: {self.kind!r}")

    @classmethod
    def lp(cls, p: float) -> 'MetricSpec':
        return cls(KIND_LP, p)

    @classmethod
    def euclidean(cls) -> 'MetricSpec':
        return cls(KIND_LP, 2.0)

    @classmethod
    def l1(cls) -> 'MetricSpec':
        return cls(KIND_L1)

    @classmethod
    def linf(cls) -> 'MetricSpec':
        return cls(KIND_LINF)

    @property
    def is_euclidean(self) -> bool:
        return self.kind == KIND_LP and self.p == 2.0

    @property
    def is_rectilinear(self) -> bool:
        """True for l_1 and l_infinity, whose discs are squares."""
        return self.kind in (KIND_L1, KIND_LINF)

    @property
    def label(self) -> str:
        if self.kind == KIND_LP:
            return f"lp:{self.p:g}"
        return self.kind

    def norm(self, dx, dy):
        """Norm of the displacement (dx, dy); accepts scalars or numpy arrays."""
        ax = np.abs(dx)
        ay = np.abs(dy)
        if self.kind == KIND_L1:
            return ax + ay
        if self.kind == KIND_LINF:
            return np.maximum(ax, ay)
        if self.p == 2.0:
            return np.hypot(ax, ay)
        # Scale by the larger component so large p does not overflow
        scale = np.maximum(ax, ay)
        safe = np.where(scale > 0, scale, 1.0)
        ratio = (ax / safe) ** self.p + (ay / safe) ** self.p
        return np.where(scale > 0, scale * ratio ** (1.0 / self.p), 0.0)

    def __str__(self):
        return self.label


def distance(metric: MetricSpec, a, b) -> float:
    """
    Distance between two points under `metric`.

    >>> distance(MetricSpec.euclidean(), (0, 0), (3, 4))
    5.0
    >>> distance(MetricSpec.l1(), (0, 0), (3, 4))
    7.0
    """
    return float(metric.norm(b[0] - a[0], b[1] - a[1]))


def distances_to(metric: MetricSpec, coords: np.ndarray, center) -> np.ndarray:
    """Distances from every row of `coords` (n x 2) to `center`."""
    coords = np.asarray(coords, dtype=float)
    return metric.norm(coords[:, 0] - center[0], coords[:, 1] - center[1])


def chebyshev_frame(metric: MetricSpec, coords) -> np.ndarray:
    """
    Map coordinates into the frame where `metric` discs are axis-aligned squares.

    For l_1 this is u = x + y, w = x - y, and l_1 distance becomes the max-norm.
    l_infinity is already the max-norm: rotating it by 45 degrees and halving
    turns it into l_1, whose own rotation brings it back, so the frame is the
    identity.
    """
    coords = np.asarray(coords, dtype=float)
    if metric.kind == KIND_L1:
        return np.stack([coords[..., 0] + coords[..., 1], coords[..., 0] - coords[..., 1]], axis=-1)
    if metric.kind == KIND_LINF:
        return coords.copy()
    raise ValueError(f"{metric.label} has no square discs")


def from_chebyshev_frame(metric: MetricSpec, coords) -> np.ndarray:
    """Inverse of chebyshev_frame."""
    coords = np.asarray(coords, dtype=float)
    if metric.kind == KIND_L1:
        return np.stack([(coords[..., 0] + coords[..., 1]) / 2, (coords[..., 0] - coords[..., 1]) / 2], axis=-1)
    if metric.kind == KIND_LINF:
        return coords.copy()
    raise ValueError(f"{metric.label} has no square discs")


def pairwise_distances(metric: MetricSpec, coords: np.ndarray) -> np.ndarray:
    """Full n x n distance matrix."""
    coords = np.asarray(coords, dtype=float)
    dx = coords[:, 0][:, None] - coords[:, 0][None, :]
    dy = coords[:, 1][:, None] - coords[:, 1][None, :]
    return metric.norm(dx, dy)
