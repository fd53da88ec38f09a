"""Packing/spanning counts of pseudoorbit families, growth-rate fits, the
triple-limit emulation for coarse entropy, and box-counting dimension.

Counting strategies:

* FULL_ENUM:   exhaustive grid pseudoorbit family, greedy counters under
               the max-over-steps orbit distance (lower AND upper semantics
               on that family).
* FINAL_TERM:  realized final-term sets on a spacing-R grid; a grid with
               step R is automatically R-separated, so the greedy scan
               degenerates to counting (lower bound).
* ORBIT_IMAGE: true orbits of a gridded first-step ball, greedy-separated
               under the orbit distance (lower bound; resolves spaces where
               separation happens before the final step).
* LADDER:      the vertical-ladder family for the conjugated doubling map
               on the half-plane (lower bound, closed form).
* SHADOW_HULL: ellipsoid hull cover for expanding linear maps (upper bound).
* CODED:       block-coding partition count for Lipschitz maps (upper
               bound, up to an undetermined constant that cancels in slopes).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from .errors import BudgetExceededError
from .maps import (ConjugatedDoubling, Homothety, Identity, Iterate, Linear,
                   MapDescriptor)
from .orbits import (DEFAULT_ORBIT_BUDGET, PseudoOrbit, enumerate_pseudoorbits,
                     final_terms_lower, orbit_distance, shadow_hull,
                     spine_spike_count)
from .spaces import (ChainRects, ChainSegments, Cone, Euclidean, Halfplane,
                     Point, Space, SpineBlocks, _axis_grid)

STRATEGIES = ("FULL_ENUM", "FINAL_TERM", "ORBIT_IMAGE", "LADDER",
              "SHADOW_HULL", "CODED")
STABILIZATION_TOL = 0.02           # nats per R-doubling
OSCILLATION_RESIDUAL = 0.1
INFINITY_SLOPE_FACTOR = 0.5 * math.log(2.0)  # flag when slope(delta) >= this * delta


# ---------------------------------------------------------------------------
# greedy packing / covering


def greedy_separated(items: Sequence, R: float, dist: Callable) -> list:
    """First-fit greedy R-separated subset: scan in order, keep an item iff
    it is at distance >= R from every kept item. Output is maximal."""
    if R <= 0:
        raise ValueError("R must be positive")
    kept = []
    for it in items:
        if all(dist(it, k) >= R for k in kept):
            kept.append(it)
    return kept


def greedy_spanning(items: Sequence, R: float, dist: Callable) -> list:
    """First-fit greedy R-spanning subset: keep an item iff no kept item is
    already within distance < R; every input ends up covered."""
    if R <= 0:
        raise ValueError("R must be positive")
    kept = []
    for it in items:
        if not any(dist(it, k) < R for k in kept):
            kept.append(it)
    return kept


def _cell_key(coords: Tuple[float, ...], cell: float) -> Tuple[int, ...]:
    return tuple(int(math.floor(c / cell)) for c in coords)


def _hashed_greedy(coords: Sequence[Tuple[float, ...]], R: float) -> List[int]:
    """Greedy scan for Euclidean point clouds with a cell hash (cell size R:
    any pair closer than R shares or neighbors a cell). Returns kept indices."""
    buckets: Dict[Tuple[int, ...], List[int]] = {}
    kept: List[int] = []
    if not coords:
        return kept
    dim = len(coords[0])
    offsets = [()]
    for _ in range(dim):
        offsets = [o + (d,) for o in offsets for d in (-1, 0, 1)]
    r2 = R * R
    for i, p in enumerate(coords):
        key = _cell_key(p, R)
        ok = True
        for off in offsets:
            nb = tuple(k + d for k, d in zip(key, off))
            for j in buckets.get(nb, ()):
                q = coords[j]
                if sum((a - b) ** 2 for a, b in zip(p, q)) < r2:
                    ok = False
                    break
            if not ok:
                break
        if ok:
            kept.append(i)
            buckets.setdefault(key, []).append(i)
    return kept


# ---------------------------------------------------------------------------
# count records


@dataclass
class CountRecord:
    n: int
    delta: float
    R: float
    strategy: str
    separated_lower: Optional[float] = None
    spanning_upper: Optional[float] = None

    def csv_row(self) -> str:
        sep = "" if self.separated_lower is None else f"{self.separated_lower:g}"
        span = "" if self.spanning_upper is None else f"{self.spanning_upper:g}"
        return f"{self.n},{self.delta:g},{self.R:g},{self.strategy},{sep},{span}"


CSV_HEADER = "n,delta,R,strategy,separated_lower,spanning_upper"


# ---------------------------------------------------------------------------
# strategy implementations


def _full_enum_family(mapd, x0, n, delta, spacing, budget):
    return enumerate_pseudoorbits(mapd, x0, n, delta, spacing, budget)


def _orbit_sep_ge(space: Space, a: PseudoOrbit, b: PseudoOrbit, R: float) -> bool:
    """orbit_distance(a, b) >= R, with early exit."""
    for p, q in zip(a.points, b.points):
        if space.distance(p, q) >= R:
            return True
    return False


def _greedy_separated_orbits(space, family, R) -> int:
    kept: List[PseudoOrbit] = []
    for orb in family:
        if all(_orbit_sep_ge(space, orb, k, R) for k in kept):
            kept.append(orb)
    return len(kept)


def _greedy_spanning_orbits(space, family, R) -> int:
    kept: List[PseudoOrbit] = []
    for orb in family:
        if all(_orbit_sep_ge(space, orb, k, R) for k in kept):
            kept.append(orb)
    return len(kept)


def _linear_grid_count(mapd, x0, n, delta, R, budget) -> int:
    """Number of spacing-R grid points in the reachable final-term region of
    an invertible linear map (or the B(2 delta) ball for the identity).
    Such a grid is automatically R-separated."""
    space = mapd.domain
    if isinstance(mapd, Identity):
        q = space.chart_dim(0)
        c = np.asarray(x0.coords)
        axes = [_axis_grid(c[i] - 2 * delta, c[i] + 2 * delta, R) for i in range(q)]
        total = 1
        for ax in axes:
            total *= max(len(ax), 1)
        if total > budget:
            raise BudgetExceededError("final-term grid exceeds budget",
                                      requested=total, budget=budget)
        mesh = np.meshgrid(*axes, indexing="ij")
        grid = np.stack([m.ravel() for m in mesh], axis=-1)
        return int(np.sum(np.linalg.norm(grid - c, axis=1) <= 2 * delta + 1e-9))
    if isinstance(mapd, Homothety):
        q = space.chart_dim(0)
        mapd = Linear(space, tuple(tuple(mapd.lam if i == j else 0.0
                                         for j in range(q)) for i in range(q)))
    if not isinstance(mapd, Linear):
        raise ValueError(f"FINAL_TERM counting does not support {type(mapd).__name__}")
    a = mapd.mat()
    fwd = np.linalg.matrix_power(a, n - 1)
    inv = np.linalg.inv(fwd)
    c0 = np.asarray(x0.coords)
    center_src = a @ c0
    center_img = fwd @ center_src
    q = len(c0)
    if q == 1:
        m = abs(fwd[0, 0]) * delta + delta
        lo, hi = center_img[0] - m, center_img[0] + m
        return int(math.floor(hi / R + 1e-12) - math.ceil(lo / R - 1e-12) + 1)
    half = delta * np.linalg.norm(fwd, axis=1) + 1e-12
    axes = [_axis_grid(center_img[i] - half[i], center_img[i] + half[i], R)
            for i in range(q)]
    total = 1
    for ax in axes:
        total *= max(len(ax), 1)
    if total > budget:
        raise BudgetExceededError("final-term grid exceeds budget",
                                  requested=total, budget=budget)
    mesh = np.meshgrid(*axes, indexing="ij")
    grid = np.stack([m.ravel() for m in mesh], axis=-1)
    pre = (grid - center_img) @ inv.T
    return int(np.sum(np.linalg.norm(pre, axis=1) <= delta + 1e-9))


def _cone_final_term_count(mapd: Homothety, x0, n, delta, R, spacing, budget) -> int:
    """Greedy R-separated count over a ray-aligned grid of the reachable
    cone region B(lam^{n-1} delta) (realized lower-bound family)."""
    space = mapd.domain
    rays = space.base.base_points()
    t_max = (mapd.lam ** (n - 1)) * delta
    step = spacing if spacing is not None else R / 2.0
    ts = _axis_grid(0.0, t_max, step)
    if len(ts) * len(rays) > budget:
        raise BudgetExceededError("cone final-term grid exceeds budget",
                                  requested=len(ts) * len(rays), budget=budget)
    coords: List[Tuple[float, float]] = []
    seen_origin = False
    for ai in range(len(rays)):
        ax, ay = rays[ai]
        for t in ts:
            if t == 0.0:
                if seen_origin:
                    continue
                seen_origin = True
            coords.append((t * ax, t * ay))
    return len(_hashed_greedy(coords, R))


def _ladder_count(mapd: ConjugatedDoubling, x0, n, delta, R) -> int:
    """Closed-form separated count of the vertical-ladder family: final
    terms fill [-e^t - 1, e^t + 1] x {t} with t = (n-2) delta; a spacing-R
    grid on that segment is R-separated and each point is realized."""
    if delta < 1.0:
        raise ValueError("the ladder family needs delta >= 1")
    if n < 2:
        raise ValueError("the ladder family needs n >= 2")
    t = (n - 2) * delta
    half = math.exp(t) + 1.0
    return 2 * int(math.floor(half / R + 1e-12)) + 1


def ladder_family(mapd: ConjugatedDoubling, n: int, delta: float,
                  spacing: float) -> List[PseudoOrbit]:
    """Materialized ladder pseudoorbits for small-scale verification."""
    t = (n - 2) * delta
    x0 = Point.of(0.0, 0.0)
    rungs = [Point.of(0.0, i * delta) for i in range(n - 1)]
    fam = []
    for x in _axis_grid(-1.0, 1.0, spacing):
        branch = Point.of(float(x), t)
        final = mapd.apply(branch, check=False)
        fam.append(PseudoOrbit((*rungs, branch, final), delta, mapd))
    return fam


def _orbit_image_family(mapd, x0, n, delta, spacing, budget,
                        restrict_chart: bool = True) -> List[PseudoOrbit]:
    """True orbits of a gridded first-step ball around f(x0)."""
    space = mapd.domain
    image = mapd.apply(x0, check=False)
    candidates = space.lattice_region(image, delta, spacing, budget)
    if restrict_chart and candidates and any(c.chart != image.chart for c in candidates):
        candidates = [c for c in candidates if c.chart == image.chart]
    fam = []
    for x1 in candidates:
        pts = [x0, x1]
        cur = x1
        for _ in range(n - 1):
            cur = mapd.apply(cur, check=False)
            pts.append(cur)
        fam.append(PseudoOrbit(tuple(pts), delta, mapd))
    return fam


def _orbit_image_count(mapd, x0, n, delta, R, spacing, budget) -> int:
    family = _orbit_image_family(mapd, x0, n, delta, spacing, budget)
    if not family:
        return 0
    space = mapd.domain
    charts = [tuple(p.chart for p in orb.points) for orb in family]
    same_track = all(c == charts[0] for c in charts)
    chainlike = isinstance(space, (ChainRects, ChainSegments))
    if same_track and (chainlike or isinstance(space, (Euclidean, Halfplane))):
        mats = np.array([[p.coords for p in orb.points] for orb in family])
        kept = np.empty((0,) + mats.shape[1:])
        count = 0
        for i in range(len(family)):
            if len(kept):
                diff = np.abs(kept - mats[i])
                if chainlike:
                    dmax = diff.reshape(len(kept), -1).max(axis=1)
                else:
                    dmax = np.linalg.norm(diff, axis=2).max(axis=1)
                if not np.all(dmax >= R):
                    continue
            kept = np.concatenate([kept, mats[i:i + 1]])
            count += 1
        return count
    return _greedy_separated_orbits(space, family, R)


def count_separated(mapd: MapDescriptor, x0: Point, n: int, R: float,
                    delta: float, strategy: str, spacing: Optional[float] = None,
                    budget: int = DEFAULT_ORBIT_BUDGET) -> CountRecord:
    """Certified lower bound on the maximal R-separated pseudoorbit count."""
    space = mapd.domain
    if strategy == "FULL_ENUM":
        fam = _full_enum_family(mapd, x0, n, delta,
                                spacing if spacing is not None else delta, budget)
        cnt = _greedy_separated_orbits(space, fam, R)
    elif strategy == "FINAL_TERM":
        if isinstance(mapd, Identity) and isinstance(space, SpineBlocks):
            cnt = spine_spike_count(space, n, delta, R)
        elif isinstance(mapd, Homothety) and isinstance(space, Cone) \
                and space.base.kind != "full_sphere":
            cnt = _cone_final_term_count(mapd, x0, n, delta, R, spacing, budget)
        else:
            cnt = _linear_grid_count(mapd, x0, n, delta, R, budget)
    elif strategy == "ORBIT_IMAGE":
        cnt = _orbit_image_count(mapd, x0, n, delta, R,
                                 spacing if spacing is not None else delta, budget)
    elif strategy == "LADDER":
        if not isinstance(mapd, ConjugatedDoubling):
            raise ValueError("LADDER applies only to the conjugated doubling map")
        cnt = _ladder_count(mapd, x0, n, delta, R)
    else:
        raise ValueError(f"strategy {strategy!r} has no lower-bound semantics")
    return CountRecord(n, delta, R, strategy, separated_lower=max(cnt, 1))


def count_spanning(mapd: MapDescriptor, x0: Point, n: int, R: float,
                   delta: float, strategy: str, spacing: Optional[float] = None,
                   budget: int = DEFAULT_ORBIT_BUDGET,
                   lam: Optional[float] = None) -> CountRecord:
    """Upper bound on the minimal R-spanning pseudoorbit count (strategy
    semantics: FULL_ENUM bounds the grid family; SHADOW_HULL and CODED bound
    the full continuum family)."""
    space = mapd.domain
    if strategy == "FULL_ENUM":
        fam = _full_enum_family(mapd, x0, n, delta,
                                spacing if spacing is not None else delta, budget)
        cnt = _greedy_spanning_orbits(space, fam, R)
    elif strategy == "SHADOW_HULL":
        hull = shadow_hull(mapd, x0, n, delta, lam)
        S = R - 2 * delta / (hull.lam - 1.0)
        if S <= 0:
            raise ValueError("R too small: need R > 2 delta/(lambda - 1)")
        cnt = hull.box_cover_count(S)
    elif strategy == "CODED":
        if lam is None and isinstance(mapd, Linear):
            ev = mapd.eigenvalues()
            lam = float(np.max(np.abs(ev))) if ev is not None else None
        if lam is None or lam <= 1.0:
            raise ValueError("CODED needs a declared Lipschitz constant lambda > 1")
        q = space.chart_dim(0)
        S = 2 * delta / (lam - 1.0)
        m = int(math.floor(math.log(R / (2 * S)) / math.log(lam))) if R > 2 * S else 0
        if m < 1:
            raise ValueError("R too small for block coding: need R > 2 S lambda")
        k = math.ceil(n / m)
        cnt = float((2.0 ** q * lam ** (m * q)) ** k)  # existential constant C := 1
    else:
        raise ValueError(f"strategy {strategy!r} has no upper-bound semantics")
    return CountRecord(n, delta, R, strategy, spanning_upper=cnt)


# ---------------------------------------------------------------------------
# growth-rate fitting and the triple-limit schedule


def fit_growth_rate(ns: Sequence[int], counts: Sequence[float]) -> Tuple[float, float]:
    """Least-squares slope of log(count) against n; residual is the RMS
    deviation of the fit."""
    if len(ns) < 3:
        raise ValueError("need at least 3 records to fit a growth rate")
    x = np.asarray(ns, dtype=float)
    y = np.log(np.maximum(np.asarray(counts, dtype=float), 1.0))
    slope, intercept = np.polyfit(x, y, 1)
    resid = float(np.sqrt(np.mean((y - (slope * x + intercept)) ** 2)))
    return float(slope), resid


def _limsup_slope(ns: Sequence[int], counts: Sequence[float]) -> Tuple[float, float]:
    """Slope estimate honoring the limsup: when the fit residual betrays
    oscillation, take the max slope over trailing windows of length >= 5."""
    slope, resid = fit_growth_rate(ns, counts)
    if resid <= OSCILLATION_RESIDUAL or len(ns) < 5:
        return slope, resid
    best = slope
    for start in range(1, len(ns) - 4):
        s, _ = fit_growth_rate(ns[start:], counts[start:])
        best = max(best, s)
    return best, resid


@dataclass
class ScheduleCell:
    delta: float
    r_values: Tuple[float, ...]
    n_values: Tuple[int, ...]
    strategy: str
    spacing: Optional[float] = None
    upper_strategy: Optional[str] = None
    lam: Optional[float] = None


@dataclass
class CellFit:
    delta: float
    R: float
    slope_lower: Optional[float]
    slope_upper: Optional[float]
    residual_lower: Optional[float]
    residual_upper: Optional[float]
    fit_window: Tuple[int, int]


@dataclass
class EntropyEstimate:
    grid: List[CellFit]
    records: List[CountRecord]
    per_delta: Dict[float, float]          # stabilized slope per delta
    per_delta_stable: Dict[float, bool]
    extrapolated_value: float               # math.inf when flagged
    infinity_flag: bool
    lower_only: bool
    errors: List[str] = field(default_factory=list)

    def to_json(self):
        return {
            "grid": [{"delta": c.delta, "R": c.R, "slope_lower": c.slope_lower,
                      "slope_upper": c.slope_upper,
                      "residual_lower": c.residual_lower,
                      "residual_upper": c.residual_upper,
                      "fit_window": list(c.fit_window)} for c in self.grid],
            "per_delta": {str(k): v for k, v in self.per_delta.items()},
            "per_delta_stable": {str(k): v for k, v in self.per_delta_stable.items()},
            "extrapolated_value": ("+INFINITY" if self.infinity_flag
                                    else self.extrapolated_value),
            "infinity_flag": self.infinity_flag,
            "lower_only": self.lower_only,
            "errors": self.errors,
        }

    def csv_lines(self) -> List[str]:
        return [CSV_HEADER] + [r.csv_row() for r in self.records]


def estimate_entropy(mapd: MapDescriptor, x0: Point,
                     schedule: Sequence[ScheduleCell],
                     budget: int = DEFAULT_ORBIT_BUDGET) -> EntropyEstimate:
    """Emulate the triple limit in its defining order: slope in n first,
    then R-stabilization within each delta, then the largest delta."""
    deltas = [c.delta for c in schedule]
    if sorted(deltas) != deltas or len(set(deltas)) != len(deltas):
        raise ValueError("schedule deltas must be strictly increasing")
    grid: List[CellFit] = []
    records: List[CountRecord] = []
    per_delta: Dict[float, float] = {}
    per_delta_stable: Dict[float, bool] = {}
    errors: List[str] = []
    lower_only = True
    for cell in schedule:
        rs = list(cell.r_values)
        if sorted(rs) != rs or len(set(rs)) != len(rs):
            raise ValueError("R values must be strictly increasing")
        slopes: List[float] = []
        for R in rs:
            try:
                recs = [count_separated(mapd, x0, n, R, cell.delta, cell.strategy,
                                        cell.spacing, budget)
                        for n in cell.n_values]
            except BudgetExceededError as exc:
                errors.append(f"delta={cell.delta} R={R}: {exc}")
                continue
            records.extend(recs)
            slope_l, resid_l = _limsup_slope([r.n for r in recs],
                                             [r.separated_lower for r in recs])
            slope_u = resid_u = None
            if cell.upper_strategy is not None:
                urecs = [count_spanning(mapd, x0, n, R, cell.delta,
                                        cell.upper_strategy, cell.spacing, budget,
                                        cell.lam)
                         for n in cell.n_values]
                records.extend(urecs)
                slope_u, resid_u = _limsup_slope([r.n for r in urecs],
                                                 [r.spanning_upper for r in urecs])
                lower_only = False
            grid.append(CellFit(cell.delta, R, slope_l, slope_u, resid_l,
                                resid_u, (min(cell.n_values), max(cell.n_values))))
            slopes.append(slope_l)
        if not slopes:
            continue
        stabilized = slopes[-1]
        stable = len(slopes) == 1
        for i in range(len(slopes) - 1, 0, -1):
            if abs(slopes[i] - slopes[i - 1]) < STABILIZATION_TOL:
                stabilized = slopes[i]
                stable = True
                break
        per_delta[cell.delta] = stabilized
        per_delta_stable[cell.delta] = stable
    if not per_delta:
        raise BudgetExceededError("every schedule cell exceeded its budget; " +
                                  "; ".join(errors))
    infinity = False
    ds = sorted(per_delta)
    if len(ds) >= 3:
        infinity = all(per_delta[d] >= INFINITY_SLOPE_FACTOR * d for d in ds[-3:])
    extrapolated = math.inf if infinity else per_delta[ds[-1]]
    return EntropyEstimate(grid, records, per_delta, per_delta_stable,
                           extrapolated, infinity, lower_only, errors)


# ---------------------------------------------------------------------------
# products


@dataclass
class ProductCountRecord:
    n: int
    delta: float
    R: float
    separated_lower: int
    spanning_upper: int
    left_separated: int
    right_separated: int
    left_spanning: int
    right_spanning: int


def count_product(fam_left: Sequence[PseudoOrbit], fam_right: Sequence[PseudoOrbit],
                  R: float, budget: int = DEFAULT_ORBIT_BUDGET) -> ProductCountRecord:
    """Greedy counts for the product family (max metric) plus the factor
    counts, for auditing the product inequalities."""
    if not fam_left or not fam_right:
        raise ValueError("need nonempty factor families")
    n = fam_left[0].length
    delta = fam_left[0].delta
    if any(o.length != n for o in fam_left) or any(o.length != n for o in fam_right):
        raise ValueError("factor families must share the orbit length")
    if any(o.delta != delta for o in fam_left) or any(o.delta != delta
                                                      for o in fam_right):
        raise ValueError("factor families must share delta")
    if len(fam_left) * len(fam_right) > budget:
        raise BudgetExceededError("product family exceeds budget",
                                  requested=len(fam_left) * len(fam_right),
                                  budget=budget)
    dl = _distance_matrix(fam_left)
    dr = _distance_matrix(fam_right)
    pairs = [(i, j) for i in range(len(fam_left)) for j in range(len(fam_right))]

    def pdist(a, b):
        return max(dl[a[0], b[0]], dr[a[1], b[1]])

    sep = len(greedy_separated(pairs, R, pdist))
    span = len(greedy_spanning(pairs, R, pdist))
    lsep = len(greedy_separated(range(len(fam_left)), R, lambda a, b: dl[a, b]))
    rsep = len(greedy_separated(range(len(fam_right)), R, lambda a, b: dr[a, b]))
    lspan = len(greedy_spanning(range(len(fam_left)), R, lambda a, b: dl[a, b]))
    rspan = len(greedy_spanning(range(len(fam_right)), R, lambda a, b: dr[a, b]))
    return ProductCountRecord(n, delta, R, sep, span, lsep, rsep, lspan, rspan)


def _distance_matrix(family: Sequence[PseudoOrbit]) -> np.ndarray:
    m = np.zeros((len(family), len(family)))
    for i in range(len(family)):
        for j in range(i + 1, len(family)):
            d = orbit_distance(family[i], family[j])
            m[i, j] = m[j, i] = d
    return m


# ---------------------------------------------------------------------------
# box-counting dimension


@dataclass
class DimensionEstimate:
    scales: List[Tuple[float, int]]
    fitted_dimension: float
    fit_residual: float

    def to_json(self):
        return {"scales": self.scales, "fitted_dimension": self.fitted_dimension,
                "fit_residual": self.fit_residual}


def bcd_estimate(space: Space, region_radius: float, epsilons: Sequence[float],
                 spacing_rule: Optional[Callable[[float], float]] = None,
                 center: Optional[Point] = None,
                 budget: int = DEFAULT_ORBIT_BUDGET) -> DimensionEstimate:
    """Box-counting dimension of the bounded region via greedy spanning-net
    counts at each scale and a log-log least-squares fit."""
    eps = list(epsilons)
    if sorted(eps, reverse=True) != eps:
        raise ValueError("epsilons must be decreasing")
    if spacing_rule is None:
        spacing_rule = lambda e: e / 4.0
    center = center if center is not None else space.origin()
    scales: List[Tuple[float, int]] = []
    for e in eps:
        spacing = spacing_rule(e)
        if e < 2 * spacing:
            raise ValueError("need epsilon >= 2 * spacing at every scale")
        pts = space.lattice_region(center, region_radius, spacing, budget)
        coords = [p.coords for p in pts]
        count = len(_hashed_greedy(coords, e))
        scales.append((float(e), count))
    x = -np.log([s[0] for s in scales])
    y = np.log([max(s[1], 1) for s in scales])
    slope, intercept = np.polyfit(x, y, 1)
    resid = float(np.sqrt(np.mean((y - (slope * x + intercept)) ** 2)))
    return DimensionEstimate(scales, max(float(slope), 0.0), resid)
