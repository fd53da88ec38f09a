"""Computable metric spaces: points, exact distances, membership, lattice regions.

Every space here is a concrete metric space with closed-form distances.
Unbounded spaces are the normal case; bounded regions only appear when a
caller restricts enumeration by a radius.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence, Tuple

import numpy as np

from .errors import BudgetExceededError, InvalidPointError

DEFAULT_POINT_BUDGET = 10_000_000


@dataclass(frozen=True)
class Point:
    """A point of some space: a chart index plus chart-local coordinates.

    Product-space points instead carry a (left, right) pair in ``parts``.
    """

    chart: int = 0
    coords: Tuple[float, ...] = ()
    parts: Optional[Tuple["Point", "Point"]] = None

    @staticmethod
    def of(*coords: float) -> "Point":
        return Point(0, tuple(float(c) for c in coords))

    @staticmethod
    def in_chart(chart: int, coords: Sequence[float]) -> "Point":
        return Point(chart, tuple(float(c) for c in coords))

    @staticmethod
    def pair(left: "Point", right: "Point") -> "Point":
        return Point(parts=(left, right))

    def to_json(self):
        if self.parts is not None:
            return {"pair": [self.parts[0].to_json(), self.parts[1].to_json()]}
        return [self.chart, *self.coords]

    @staticmethod
    def from_json(obj) -> "Point":
        if isinstance(obj, dict) and "pair" in obj:
            l, r = obj["pair"]
            return Point.pair(Point.from_json(l), Point.from_json(r))
        return Point(int(obj[0]), tuple(float(c) for c in obj[1:]))


def _as_array(p: Point) -> np.ndarray:
    return np.asarray(p.coords, dtype=float)


class Space:
    """Base class; subclasses provide the metric and the discretization."""

    def distance(self, p: Point, q: Point) -> float:
        raise NotImplementedError

    def contains(self, p: Point, tol: float = 1e-9) -> bool:
        raise NotImplementedError

    def origin(self) -> Point:
        raise NotImplementedError

    def chart_dim(self, chart: int) -> int:
        raise NotImplementedError

    def _check(self, p: Point) -> None:
        if p.parts is not None:
            raise InvalidPointError(f"pair point given to {type(self).__name__}")
        try:
            dim = self.chart_dim(p.chart)
        except (IndexError, ValueError):
            raise InvalidPointError(f"chart {p.chart} invalid for {type(self).__name__}")
        if dim != len(p.coords):
            raise InvalidPointError(
                f"chart {p.chart} expects {dim} coords, got {len(p.coords)}"
            )

    def lattice_region(
        self,
        center: Point,
        radius: float,
        spacing: float,
        budget: int = DEFAULT_POINT_BUDGET,
    ) -> list:
        """Grid points (step ``spacing``, anchored at each chart origin) that lie
        in the space within ``radius`` of ``center``, in deterministic order."""
        if radius <= 0:
            raise ValueError("radius must be positive")
        if not (0 < spacing <= radius):
            raise ValueError("spacing must satisfy 0 < spacing <= radius")
        pts = self._lattice(center, radius, spacing, budget)
        pts.sort(key=lambda p: (p.chart, p.coords))
        return pts

    def _lattice(self, center, radius, spacing, budget) -> list:
        raise NotImplementedError

    def sample_point(self, rng: np.random.Generator, radius: float,
                     center: Optional[Point] = None) -> Point:
        raise NotImplementedError


def _axis_grid(lo: float, hi: float, spacing: float) -> np.ndarray:
    """Multiples of spacing (anchored at 0) inside [lo, hi]."""
    k_lo = math.ceil(lo / spacing - 1e-12)
    k_hi = math.floor(hi / spacing + 1e-12)
    if k_hi < k_lo:
        return np.empty(0)
    return np.arange(k_lo, k_hi + 1) * spacing


def _box_grid(center: np.ndarray, radius: float, spacing: float, budget: int):
    """Cartesian grid covering the ball's bounding box; budget-checked."""
    axes = [_axis_grid(c - radius, c + radius, spacing) for c in center]
    total = 1
    for a in axes:
        total *= max(len(a), 1)
    if total > budget:
        raise BudgetExceededError(
            f"lattice region of ~{total} points exceeds budget {budget}",
            requested=total, budget=budget)
    if any(len(a) == 0 for a in axes):
        return np.empty((0, len(center)))
    mesh = np.meshgrid(*axes, indexing="ij")
    return np.stack([m.ravel() for m in mesh], axis=-1)


@dataclass(frozen=True)
class Euclidean(Space):
    dim: int

    def chart_dim(self, chart):
        if chart != 0:
            raise InvalidPointError("Euclidean space has a single chart 0")
        return self.dim

    def origin(self):
        return Point(0, (0.0,) * self.dim)

    def distance(self, p, q):
        self._check(p); self._check(q)
        return float(np.linalg.norm(_as_array(p) - _as_array(q)))

    def contains(self, p, tol=1e-9):
        return p.parts is None and p.chart == 0 and len(p.coords) == self.dim

    def _lattice(self, center, radius, spacing, budget):
        self._check(center)
        c = _as_array(center)
        grid = _box_grid(c, radius, spacing, budget)
        if len(grid) == 0:
            return []
        keep = np.linalg.norm(grid - c, axis=1) <= radius + 1e-9
        return [Point(0, tuple(row)) for row in grid[keep]]

    def sample_point(self, rng, radius, center=None):
        c = _as_array(center) if center is not None else np.zeros(self.dim)
        while True:
            x = c + rng.uniform(-radius, radius, size=self.dim)
            if np.linalg.norm(x - c) <= radius:
                return Point(0, tuple(x))


@dataclass(frozen=True)
class IntegerLattice(Space):
    """Z^q with the Euclidean metric."""

    dim: int

    def chart_dim(self, chart):
        if chart != 0:
            raise InvalidPointError("lattice has a single chart 0")
        return self.dim

    def origin(self):
        return Point(0, (0.0,) * self.dim)

    def distance(self, p, q):
        self._check(p); self._check(q)
        return float(np.linalg.norm(_as_array(p) - _as_array(q)))

    def contains(self, p, tol=1e-9):
        if p.parts is not None or p.chart != 0 or len(p.coords) != self.dim:
            return False
        return all(abs(c - round(c)) <= tol for c in p.coords)

    def _lattice(self, center, radius, spacing, budget):
        step = max(1, round(spacing))
        c = _as_array(center)
        grid = _box_grid(c, radius, float(step), budget)
        if len(grid) == 0:
            return []
        keep = np.linalg.norm(grid - c, axis=1) <= radius + 1e-9
        return [Point(0, tuple(row)) for row in grid[keep]]

    def sample_point(self, rng, radius, center=None):
        c = _as_array(center) if center is not None else np.zeros(self.dim)
        while True:
            x = np.round(c + rng.uniform(-radius, radius, size=self.dim))
            if np.linalg.norm(x - c) <= radius:
                return Point(0, tuple(x))


@dataclass(frozen=True)
class HalfLine(Space):
    """[low, oo) with the line metric."""

    low: float = 0.0

    def chart_dim(self, chart):
        if chart != 0:
            raise InvalidPointError("half-line has a single chart 0")
        return 1

    def origin(self):
        return Point(0, (self.low,))

    def distance(self, p, q):
        self._check(p); self._check(q)
        return abs(p.coords[0] - q.coords[0])

    def contains(self, p, tol=1e-9):
        return (p.parts is None and p.chart == 0 and len(p.coords) == 1
                and p.coords[0] >= self.low - tol)

    def _lattice(self, center, radius, spacing, budget):
        self._check(center)
        c = center.coords[0]
        # grid anchored at `low`
        lo = max(self.low, c - radius)
        xs = self.low + _axis_grid(lo - self.low, c + radius - self.low, spacing)
        if len(xs) > budget:
            raise BudgetExceededError("half-line lattice exceeds budget",
                                      requested=len(xs), budget=budget)
        return [Point(0, (float(x),)) for x in xs]

    def sample_point(self, rng, radius, center=None):
        c = center.coords[0] if center is not None else self.low
        lo = max(self.low, c - radius)
        return Point(0, (float(rng.uniform(lo, c + radius)),))


@dataclass(frozen=True)
class Halfplane(Space):
    """{(x, y) : y >= 0} with the Euclidean metric."""

    def chart_dim(self, chart):
        if chart != 0:
            raise InvalidPointError("half-plane has a single chart 0")
        return 2

    def origin(self):
        return Point(0, (0.0, 0.0))

    def distance(self, p, q):
        self._check(p); self._check(q)
        return float(np.linalg.norm(_as_array(p) - _as_array(q)))

    def contains(self, p, tol=1e-9):
        return (p.parts is None and p.chart == 0 and len(p.coords) == 2
                and p.coords[1] >= -tol)

    def _lattice(self, center, radius, spacing, budget):
        self._check(center)
        c = _as_array(center)
        grid = _box_grid(c, radius, spacing, budget)
        if len(grid) == 0:
            return []
        keep = (np.linalg.norm(grid - c, axis=1) <= radius + 1e-9) & (grid[:, 1] >= -1e-9)
        return [Point(0, tuple(row)) for row in grid[keep]]

    def sample_point(self, rng, radius, center=None):
        c = _as_array(center) if center is not None else np.zeros(2)
        while True:
            x = c + rng.uniform(-radius, radius, size=2)
            if x[1] >= 0 and np.linalg.norm(x - c) <= radius:
                return Point(0, tuple(x))


@dataclass(frozen=True)
class BaseSetSpec:
    """Subset of the unit circle used as the base of a cone.

    kinds: "full_sphere", "finite_angles" (angles in radians),
    "cantor_arc" (middle-thirds set on the arc [0, 1] radian, truncated at
    `levels` refinement steps; representatives are the 2^levels left
    endpoints of the surviving intervals).
    """

    kind: str
    angles: Tuple[float, ...] = ()
    levels: int = 0

    @staticmethod
    def full_sphere() -> "BaseSetSpec":
        return BaseSetSpec("full_sphere")

    @staticmethod
    def finite_angles(angles: Iterable[float]) -> "BaseSetSpec":
        return BaseSetSpec("finite_angles", angles=tuple(float(a) for a in angles))

    @staticmethod
    def cantor_arc(levels: int) -> "BaseSetSpec":
        return BaseSetSpec("cantor_arc", levels=int(levels))

    def base_angles(self) -> np.ndarray:
        if self.kind == "finite_angles":
            return np.asarray(sorted(self.angles), dtype=float)
        if self.kind == "cantor_arc":
            # left endpoints of the level-k middle-thirds intervals, as
            # parameters in [0, 1] mapped to an arc of 1 radian
            lefts = [0.0]
            width = 1.0
            for _ in range(self.levels):
                width /= 3.0
                lefts = [x for l in lefts for x in (l, l + 2 * width)]
            return np.asarray(sorted(lefts), dtype=float)
        raise ValueError(f"no finite representative set for kind {self.kind!r}")

    def base_points(self) -> np.ndarray:
        """Unit vectors in R^2, one per representative angle."""
        th = self.base_angles()
        return np.stack([np.cos(th), np.sin(th)], axis=-1)


@dataclass(frozen=True)
class Cone(Space):
    """{t*a : t >= 0, a in base} in R^dim with the ambient Euclidean metric."""

    dim: int
    base: BaseSetSpec

    def __post_init__(self):
        if self.base.kind != "full_sphere" and self.dim != 2:
            raise ValueError("finite base sets are only supported in dimension 2")

    def chart_dim(self, chart):
        if chart != 0:
            raise InvalidPointError("cone has a single chart 0")
        return self.dim

    def origin(self):
        return Point(0, (0.0,) * self.dim)

    def distance(self, p, q):
        self._check(p); self._check(q)
        return float(np.linalg.norm(_as_array(p) - _as_array(q)))

    def contains(self, p, tol=1e-9):
        if p.parts is not None or p.chart != 0 or len(p.coords) != self.dim:
            return False
        if self.base.kind == "full_sphere":
            return True
        x = _as_array(p)
        r = float(np.linalg.norm(x))
        if r <= tol:
            return True
        rays = self.base.base_points()
        # distance from x to the closed ray {t*a : t >= 0}, computed as the
        # residual norm (no r^2 - proj^2 cancellation)
        proj = np.clip(rays @ x, 0.0, None)
        resid = np.linalg.norm(x[None, :] - proj[:, None] * rays, axis=1)
        return bool(np.min(resid) <= tol * max(1.0, r))

    def _lattice(self, center, radius, spacing, budget):
        # ray-aligned grid: multiples of `spacing` along each base ray
        self._check(center)
        if self.base.kind == "full_sphere":
            c = _as_array(center)
            grid = _box_grid(c, radius, spacing, budget)
            if len(grid) == 0:
                return []
            keep = np.linalg.norm(grid - c, axis=1) <= radius + 1e-9
            return [Point(0, tuple(row)) for row in grid[keep]]
        c = _as_array(center)
        c_norm = float(np.linalg.norm(c))
        t_max = c_norm + radius
        rays = self.base.base_points()
        n_steps = int(math.floor(t_max / spacing + 1e-12)) + 1
        if n_steps * len(rays) > budget:
            raise BudgetExceededError("cone lattice exceeds budget",
                                      requested=n_steps * len(rays), budget=budget)
        ts = np.arange(n_steps) * spacing
        out = []
        seen_origin = False
        for a in rays:
            pts = ts[:, None] * a[None, :]
            keep = np.linalg.norm(pts - c, axis=1) <= radius + 1e-9
            for t, ok in zip(ts, keep):
                if not ok:
                    continue
                if t == 0.0:
                    if seen_origin:
                        continue
                    seen_origin = True
                out.append(Point(0, tuple(t * a)))
        return out

    def sample_point(self, rng, radius, center=None):
        if self.base.kind == "full_sphere":
            return Euclidean(self.dim).sample_point(rng, radius, center)
        rays = self.base.base_points()
        c = _as_array(center) if center is not None else np.zeros(self.dim)
        c_norm = float(np.linalg.norm(c))
        while True:
            a = rays[rng.integers(len(rays))]
            t = rng.uniform(0.0, c_norm + radius)
            x = t * a
            if np.linalg.norm(x - c) <= radius:
                return Point(0, tuple(x))


def _gap_sum(n: int, m: int) -> float:
    """(n+1) + (n+2) + ... + m for n < m."""
    return (m * (m + 1) - n * (n + 1)) / 2.0


class _ChainSpace(Space):
    """Common machinery for block-chain spaces: block n at chart n, anchored
    at c_n, with cross-block distance d(x,c_n) + d(y,c_m) + sum of gaps."""

    max_chart: int = 10_000  # structural sanity bound, not a metric feature

    def chart_dim(self, chart):
        if not (0 <= chart <= self.max_chart):
            raise InvalidPointError(f"chart {chart} out of range")
        return self._block_dim(chart)

    def _block_dim(self, n: int) -> int:
        raise NotImplementedError

    def _inner_distance(self, n: int, a: np.ndarray, b: np.ndarray) -> float:
        raise NotImplementedError

    def _anchor_distance(self, n: int, a: np.ndarray) -> float:
        """Distance from a point (offset coords) to the block anchor c_n."""
        return self._inner_distance(n, a, np.zeros(self._block_dim(n)))

    def distance(self, p, q):
        self._check(p); self._check(q)
        if p.chart == q.chart:
            return self._inner_distance(p.chart, _as_array(p), _as_array(q))
        lo, hi = (p, q) if p.chart < q.chart else (q, p)
        return (self._anchor_distance(lo.chart, _as_array(lo))
                + self._anchor_distance(hi.chart, _as_array(hi))
                + _gap_sum(lo.chart, hi.chart))

    def origin(self):
        return Point(0, (0.0,) * self._block_dim(0))

    def _block_offset_grid(self, n: int, spacing: float) -> np.ndarray:
        raise NotImplementedError

    def _block_member(self, n: int, a: np.ndarray, tol: float) -> bool:
        raise NotImplementedError

    def contains(self, p, tol=1e-9):
        if p.parts is not None or not (0 <= p.chart <= self.max_chart):
            return False
        if len(p.coords) != self._block_dim(p.chart):
            return False
        return self._block_member(p.chart, _as_array(p), tol)

    def _lattice(self, center, radius, spacing, budget):
        self._check(center)
        out = []
        total = 0
        n = 0
        while n <= self.max_chart:
            # cheapest possible distance from center to block n
            if n == center.chart:
                min_d = 0.0
            else:
                lo, hi = min(n, center.chart), max(n, center.chart)
                min_d = _gap_sum(lo, hi)
                if center.chart < n:
                    min_d += self._anchor_distance(center.chart, _as_array(center))
            if min_d > radius:
                if n > center.chart:
                    break
                n += 1
                continue
            grid = self._block_offset_grid(n, spacing)
            total += len(grid)
            if total > budget:
                raise BudgetExceededError("chain lattice exceeds budget",
                                          requested=total, budget=budget)
            for row in grid:
                p = Point(n, tuple(row))
                if self.distance(p, center) <= radius + 1e-9:
                    out.append(p)
            n += 1
        return out

    def sample_point(self, rng, radius, center=None):
        center = center if center is not None else self.origin()
        for _ in range(10_000):
            lo = max(0, center.chart - int(radius))
            n = int(rng.integers(lo, center.chart + int(radius) + 1))
            if n > self.max_chart:
                continue
            a = self._sample_block_offset(rng, n)
            p = Point(n, tuple(a))
            if self.distance(p, center) <= radius:
                return p
        raise RuntimeError("failed to sample a chain point within radius")

    def _sample_block_offset(self, rng, n: int) -> np.ndarray:
        raise NotImplementedError


@dataclass(frozen=True)
class ChainRects(_ChainSpace):
    """Disjoint rectangles P_n: P_{2m} is 1 x 2^m, P_{2m+1} is 2^m x 1,
    max metric inside each block, anchors at the centers, triangular gaps."""

    def extents(self, n: int) -> Tuple[float, float]:
        m, r = divmod(n, 2)
        return (1.0, 2.0 ** m) if r == 0 else (2.0 ** m, 1.0)

    def _block_dim(self, n):
        return 2

    def _inner_distance(self, n, a, b):
        return float(np.max(np.abs(a - b)))

    def _block_member(self, n, a, tol):
        w, h = self.extents(n)
        return abs(a[0]) <= w / 2 + tol and abs(a[1]) <= h / 2 + tol

    def _block_offset_grid(self, n, spacing):
        w, h = self.extents(n)
        xs = _axis_grid(-w / 2, w / 2, spacing)
        ys = _axis_grid(-h / 2, h / 2, spacing)
        mesh = np.meshgrid(xs, ys, indexing="ij")
        return np.stack([m.ravel() for m in mesh], axis=-1)

    def _sample_block_offset(self, rng, n):
        w, h = self.extents(n)
        return np.array([rng.uniform(-w / 2, w / 2), rng.uniform(-h / 2, h / 2)])


def _e3_epoch(n: int) -> int:
    """k with 2^{k^2} <= n < 2^{(k+1)^2}; by convention k=0 for n = 0."""
    if n <= 0:
        return 0
    k = 0
    while 2.0 ** ((k + 1) ** 2) <= n:
        k += 1
    return k


def e3_multiplier(role: str, n: int) -> int:
    """Stretch factor applied when mapping segment n to segment n+1."""
    k = _e3_epoch(n)
    if role == "f":
        return 1 if k % 2 == 0 else 2
    if role == "g":
        return 2 if k % 2 == 0 else 1
    raise ValueError("role must be 'f' or 'g'")


@dataclass(frozen=True)
class ChainSegments(_ChainSpace):
    """Disjoint real segments, anchors at left endpoints, triangular gaps.

    Segment lengths follow the epoch-parity doubling rule for the given
    role ('f' or 'g'); lengths are tracked via exact log2 exponents.
    """

    role: str = "f"

    def log2_length(self, n: int) -> int:
        e = 0
        for i in range(n):
            e += e3_multiplier(self.role, i) - 1  # multiplier 2 adds one bit
        return e

    def length(self, n: int) -> float:
        return 2.0 ** self.log2_length(n)

    def _block_dim(self, n):
        return 1

    def _inner_distance(self, n, a, b):
        return float(abs(a[0] - b[0]))

    def _block_member(self, n, a, tol):
        return -tol <= a[0] <= self.length(n) + tol

    def _block_offset_grid(self, n, spacing):
        xs = _axis_grid(0.0, self.length(n), spacing)
        return xs[:, None]

    def _sample_block_offset(self, rng, n):
        return np.array([rng.uniform(0.0, self.length(n))])


@dataclass(frozen=True)
class SpineBlocks(_ChainSpace):
    """Half-line spine with a Euclidean block R^{2^k} attached at integer k.

    Chart 0 is the spine (1-D coordinate t >= 0); chart k+1 is the block of
    dimension 2^k anchored at spine position k, with distances measured
    along the space: |t - k| + |x|, or |x| + |k - l| + |y| across blocks.
    """

    max_level: int = 12

    @property
    def max_chart(self):  # type: ignore[override]
        return self.max_level + 1

    def _block_dim(self, chart):
        return 1 if chart == 0 else 2 ** (chart - 1)

    def _spine_pos(self, chart: int) -> float:
        return float(chart - 1)

    def distance(self, p, q):
        self._check(p); self._check(q)
        if p.chart == q.chart:
            return float(np.linalg.norm(_as_array(p) - _as_array(q)))
        if p.chart == 0 or q.chart == 0:
            s, b = (p, q) if p.chart == 0 else (q, p)
            return (abs(s.coords[0] - self._spine_pos(b.chart))
                    + float(np.linalg.norm(_as_array(b))))
        return (float(np.linalg.norm(_as_array(p)))
                + abs(self._spine_pos(p.chart) - self._spine_pos(q.chart))
                + float(np.linalg.norm(_as_array(q))))

    def _block_member(self, n, a, tol):
        if n == 0:
            return a[0] >= -tol
        return True

    def _block_offset_grid(self, n, spacing):
        if n == 0:
            return _axis_grid(0.0, 64.0, spacing)[:, None]
        if self._block_dim(n) > 3:
            raise BudgetExceededError(
                f"grid in a {self._block_dim(n)}-dimensional block is not enumerable")
        xs = _axis_grid(-8.0, 8.0, spacing)
        mesh = np.meshgrid(*([xs] * self._block_dim(n)), indexing="ij")
        return np.stack([m.ravel() for m in mesh], axis=-1)

    def _lattice(self, center, radius, spacing, budget):
        self._check(center)
        out = []
        for chart in range(self.max_chart + 1):
            dim = self._block_dim(chart)
            if dim > 3:
                # high-dimensional blocks are only reachable through the
                # structured spike construction, never through grids
                continue
            anchor = Point(chart, (0.0,) * dim)
            # skip blocks that cannot intersect the region
            if self.distance(anchor, center) - radius > 16 * radius:
                continue
            grid = self._block_offset_grid(chart, spacing)
            if len(out) + len(grid) > budget:
                raise BudgetExceededError("spine lattice exceeds budget")
            for row in grid:
                p = Point(chart, tuple(row))
                if self.distance(p, center) <= radius + 1e-9:
                    out.append(p)
        return out

    def _sample_block_offset(self, rng, n):
        dim = self._block_dim(n)
        return rng.uniform(-2.0, 2.0, size=dim)

    def sample_point(self, rng, radius, center=None):
        center = center if center is not None else self.origin()
        for _ in range(10_000):
            chart = int(rng.integers(0, min(self.max_chart, 4) + 1))
            a = self._sample_block_offset(rng, chart)
            if chart == 0:
                a = np.abs(a[:1])
            p = Point(chart, tuple(a))
            if self.distance(p, center) <= radius:
                return p
        raise RuntimeError("failed to sample a spine point")

    def origin(self):
        return Point(0, (0.0,))


@dataclass(frozen=True)
class Product(Space):
    """Product of two spaces with the max metric."""

    left: Space
    right: Space

    def chart_dim(self, chart):
        raise InvalidPointError("product points carry parts, not charts")

    def _check(self, p):
        if p.parts is None:
            raise InvalidPointError("product-space point must carry parts")

    def origin(self):
        return Point.pair(self.left.origin(), self.right.origin())

    def distance(self, p, q):
        self._check(p); self._check(q)
        return max(self.left.distance(p.parts[0], q.parts[0]),
                   self.right.distance(p.parts[1], q.parts[1]))

    def contains(self, p, tol=1e-9):
        return (p.parts is not None
                and self.left.contains(p.parts[0], tol)
                and self.right.contains(p.parts[1], tol))

    def _lattice(self, center, radius, spacing, budget):
        self._check(center)
        # max metric: the region is the product of the factor regions
        lpts = self.left.lattice_region(center.parts[0], radius, spacing, budget)
        rpts = self.right.lattice_region(center.parts[1], radius, spacing, budget)
        if len(lpts) * len(rpts) > budget:
            raise BudgetExceededError("product lattice exceeds budget",
                                      requested=len(lpts) * len(rpts), budget=budget)
        return [Point.pair(a, b) for a in lpts for b in rpts]

    def lattice_region(self, center, radius, spacing, budget=DEFAULT_POINT_BUDGET):
        if radius <= 0:
            raise ValueError("radius must be positive")
        if not (0 < spacing <= radius):
            raise ValueError("spacing must satisfy 0 < spacing <= radius")
        return self._lattice(center, radius, spacing, budget)

    def sample_point(self, rng, radius, center=None):
        cl = center.parts[0] if center is not None else None
        cr = center.parts[1] if center is not None else None
        return Point.pair(self.left.sample_point(rng, radius, cl),
                          self.right.sample_point(rng, radius, cr))


# module-level operation aliases matching the library surface

def distance(space: Space, p: Point, q: Point) -> float:
    return space.distance(p, q)


def contains(space: Space, p: Point, tol: float = 1e-9) -> bool:
    return space.contains(p, tol)


def lattice_region(space: Space, center: Point, radius: float, spacing: float,
                   budget: int = DEFAULT_POINT_BUDGET) -> list:
    return space.lattice_region(center, radius, spacing, budget)
