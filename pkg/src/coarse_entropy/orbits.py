"""Construction, validation, enumeration and transforms of delta-pseudoorbits."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np

from .errors import BudgetExceededError, SpaceMismatchError
from .maps import (ChainLinear, Compose, ConjugatedDoubling, Homothety,
                   Identity, Iterate, Linear, MapDescriptor)
from .spaces import (Cone, Euclidean, Halfplane, Point, Space, SpineBlocks,
                     _axis_grid)

VALIDATE_TOL = 1e-9
DEFAULT_ORBIT_BUDGET = 10_000_000


@dataclass(frozen=True)
class PseudoOrbit:
    """A finite sequence (x_0, ..., x_n) claimed to satisfy
    d(f(x_i), x_{i+1}) <= delta at every step."""

    points: Tuple[Point, ...]
    delta: float
    map: MapDescriptor

    def __post_init__(self):
        if len(self.points) == 0:
            raise ValueError("a pseudoorbit needs at least one point")
        if self.delta <= 0:
            raise ValueError("delta must be positive")

    @property
    def length(self) -> int:
        return len(self.points) - 1

    def to_json(self):
        return {"delta": self.delta, "points": [p.to_json() for p in self.points]}


@dataclass
class ValidationResult:
    ok: bool
    first_violation_index: Optional[int] = None
    violation_distance: Optional[float] = None

    def __bool__(self):
        return self.ok


def validate(orbit: PseudoOrbit) -> ValidationResult:
    """Check every step of the orbit against its delta bound."""
    space = orbit.map.domain
    pts = orbit.points
    for p in pts:
        if not space.contains(p, tol=1e-7):
            return ValidationResult(False, None)
    for i in range(len(pts) - 1):
        d = space.distance(orbit.map.apply(pts[i], check=False), pts[i + 1])
        if d > orbit.delta + VALIDATE_TOL:
            return ValidationResult(False, i, d)
    return ValidationResult(True)


def orbit_distance(a: PseudoOrbit, b: PseudoOrbit) -> float:
    """Max over indices of the pointwise distance."""
    if len(a.points) != len(b.points):
        raise ValueError("orbits must have equal length")
    space = a.map.domain
    return max(space.distance(p, q) for p, q in zip(a.points, b.points))


def enumerate_pseudoorbits(mapd: MapDescriptor, x0: Point, n: int, delta: float,
                           spacing: float,
                           budget: int = DEFAULT_ORBIT_BUDGET) -> List[PseudoOrbit]:
    """Exhaustive grid family: every successor of x_i is a lattice point
    within delta of f(x_i). Deterministic depth-first order."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if spacing > delta:
        raise ValueError("spacing must not exceed delta")
    space = mapd.domain
    out: List[PseudoOrbit] = []

    def extend(prefix: List[Point]) -> None:
        if len(prefix) == n + 1:
            if len(out) >= budget:
                raise BudgetExceededError("pseudoorbit family exceeds budget",
                                          requested=len(out) + 1, budget=budget)
            out.append(PseudoOrbit(tuple(prefix), delta, mapd))
            return
        image = mapd.apply(prefix[-1], check=False)
        for succ in space.lattice_region(image, delta, spacing, budget):
            prefix.append(succ)
            extend(prefix)
            prefix.pop()

    extend([x0])
    return out


@dataclass
class FinalTermSet:
    """Set of final terms of length-n pseudoorbits from x0.

    LOWER sets are realized: ``reconstruct`` rebuilds an explicit valid
    pseudoorbit ending at any listed point. UPPER sets describe a hull that
    provably contains every final term.
    """

    points: List[Point]
    n: int
    delta: float
    provenance: str  # "LOWER" or "UPPER"
    min_pairwise: Optional[float] = None
    reconstruct: Optional[Callable[[Point], PseudoOrbit]] = None


def _linear_powers(mapd: Linear, n: int):
    a = mapd.mat()
    fwd = np.linalg.matrix_power(a, n)
    inv = np.linalg.inv(fwd)
    return a, fwd, inv


def final_terms_lower(mapd: MapDescriptor, x0: Point, n: int, delta: float,
                      spacing: float,
                      budget: int = DEFAULT_ORBIT_BUDGET) -> FinalTermSet:
    """Grid discretization of the reachable final-term set
    f^{n-1}(B(f(x0), delta)), each point realized by an explicit pseudoorbit.

    Supported maps: Identity (accumulates the two free delta-steps),
    invertible Linear on Euclidean-like spaces, Homothety on cones and
    Euclidean spaces, and the spine-spike construction for the identity on
    SpineBlocks (see spine_spikes)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    space = mapd.domain

    if isinstance(mapd, Identity) and isinstance(space, SpineBlocks):
        return spine_spikes(space, mapd, x0, n, delta, min_radius=spacing)

    if isinstance(mapd, Identity):
        # z in B(x0, 2*delta): first step reaches B(x0, delta), last step adds delta
        pts = space.lattice_region(x0, 2 * delta, spacing, budget)

        def rebuild_id(z: Point) -> PseudoOrbit:
            cz = np.asarray(z.coords); c0 = np.asarray(x0.coords)
            gap = float(np.linalg.norm(cz - c0))
            y = z if gap <= delta else Point(
                z.chart, tuple(c0 + (cz - c0) * (delta / gap)))
            return PseudoOrbit((x0,) + (y,) * (n - 1) + (z,), delta, mapd)

        return FinalTermSet(pts, n, delta, "LOWER", min_pairwise=spacing,
                            reconstruct=rebuild_id)

    if isinstance(mapd, Homothety):
        lam = mapd.lam
        scale = lam ** (n - 1)
        if isinstance(space, Cone) and space.base.kind != "full_sphere":
            if any(c != 0.0 for c in x0.coords):
                raise ValueError("cone final-term sets require x0 at the apex")
            rays = space.base.base_points()
            t_max = scale * delta + delta
            ts = _axis_grid(0.0, t_max, spacing)
            if len(ts) * len(rays) > budget:
                raise BudgetExceededError("cone final-term grid exceeds budget")
            pts = []
            seen_origin = False
            for a in rays:
                for t in ts:
                    if t == 0.0:
                        if seen_origin:
                            continue
                        seen_origin = True
                    pts.append(Point(0, tuple(t * a)))

            def rebuild_cone(z: Point) -> PseudoOrbit:
                cz = np.asarray(z.coords)
                t = float(np.linalg.norm(cz))
                a = cz / t if t > 0 else rays[0]
                w = min(t, scale * delta)
                y = (w / scale) * a
                chain = [Point(0, tuple((lam ** j) * y)) for j in range(n - 1)]
                return PseudoOrbit((x0, *chain, z), delta, mapd)

            return FinalTermSet(pts, n, delta, "LOWER", reconstruct=rebuild_cone)
        # Euclidean homothety behaves like the 1-D linear case per axis
        mapd = Linear(space, tuple(tuple(lam if i == j else 0.0
                                         for j in range(space.chart_dim(0)))
                                   for i in range(space.chart_dim(0))))

    if isinstance(mapd, Linear):
        a, fwd, inv = _linear_powers(mapd, n - 1)
        c0 = np.asarray(x0.coords)
        center_src = a @ c0  # f(x0), the center of the first-step ball
        center_img = fwd @ center_src
        q = len(c0)
        if q == 1:
            m = abs(fwd[0, 0]) * delta
            lo, hi = center_img[0] - m - delta, center_img[0] + m + delta
            xs = _axis_grid(lo, hi, spacing)
            if len(xs) > budget:
                raise BudgetExceededError("final-term grid exceeds budget")
            pts = [Point(0, (float(x),)) for x in xs]

            def rebuild_1d(z: Point) -> PseudoOrbit:
                w = min(max(z.coords[0], center_img[0] - m), center_img[0] + m)
                y = float(inv[0, 0] * w)
                chain = [x0]
                cur = y
                for _ in range(n - 1):
                    chain.append(Point(0, (cur,)))
                    cur = float(a[0, 0] * cur)
                chain.append(z)
                return PseudoOrbit(tuple(chain), delta, mapd)

            return FinalTermSet(pts, n, delta, "LOWER", min_pairwise=spacing,
                                reconstruct=rebuild_1d)
        # multi-d: grid the exact image ellipsoid (no extra delta-slack)
        half = delta * np.linalg.norm(fwd, axis=1) + 1e-12
        axes = [_axis_grid(center_img[i] - half[i], center_img[i] + half[i], spacing)
                for i in range(q)]
        total = 1
        for ax in axes:
            total *= max(len(ax), 1)
        if total > budget:
            raise BudgetExceededError("final-term grid exceeds budget",
                                      requested=total, budget=budget)
        mesh = np.meshgrid(*axes, indexing="ij")
        grid = np.stack([mm.ravel() for mm in mesh], axis=-1)
        pre = (grid - center_img) @ inv.T
        keep = np.linalg.norm(pre, axis=1) <= delta + 1e-9
        pts = [Point(0, tuple(row)) for row in grid[keep]]

        def rebuild_nd(z: Point) -> PseudoOrbit:
            y = inv @ (np.asarray(z.coords) - center_img) + center_src
            chain = [x0]
            cur = y
            for _ in range(n - 1):
                chain.append(Point(0, tuple(cur)))
                cur = a @ cur
            chain.append(z)
            return PseudoOrbit(tuple(chain), delta, mapd)

        return FinalTermSet(pts, n, delta, "LOWER", min_pairwise=spacing,
                            reconstruct=rebuild_nd)

    raise ValueError(f"final_terms_lower does not support {type(mapd).__name__}")


def spine_spikes(space: SpineBlocks, mapd: MapDescriptor, x0: Point, n: int,
                 delta: float, min_radius: float = 0.0,
                 materialize_budget: int = 200_000) -> FinalTermSet:
    """Axis-spike final terms for the identity on a spine-with-blocks space:
    one point per coordinate direction of each reachable block, at the
    largest radius a length-n delta-pseudoorbit can reach."""
    reach = n * delta
    pts: List[Point] = []
    total = 0
    for k in range(space.max_level + 1):
        rho = reach - k
        if rho <= max(min_radius, 0.0):
            continue
        dim = 2 ** k
        total += dim * dim  # coords storage cost
        if total > materialize_budget:
            raise BudgetExceededError("spine spike materialization exceeds budget")
        for i in range(dim):
            coords = [0.0] * dim
            coords[i] = rho
            pts.append(Point(k + 1, tuple(coords)))

    def rebuild_spike(z: Point) -> PseudoOrbit:
        k = z.chart - 1
        rho = float(np.linalg.norm(np.asarray(z.coords)))
        direction = np.asarray(z.coords) / rho
        chain = [x0]
        for i in range(1, n + 1):
            arc = min(i * delta, k + rho)
            if arc <= k:
                chain.append(Point(0, (arc,)))
            else:
                chain.append(Point(k + 1, tuple((arc - k) * direction)))
        return PseudoOrbit(tuple(chain), delta, mapd)

    return FinalTermSet(pts, n, delta, "LOWER", reconstruct=rebuild_spike)


def spine_spike_count(space: SpineBlocks, n: int, delta: float, R: float) -> int:
    """Closed-form size of an R-separated set of spike final terms: blocks
    whose spike radius rho_k = n*delta - k is at least R/sqrt(2) contribute
    all 2^k directions (pairwise distances are then >= R)."""
    reach = n * delta
    count = 0
    for k in range(space.max_level + 1):
        rho = reach - k
        if rho >= R / math.sqrt(2.0):
            count += 2 ** k
    return count


@dataclass
class EllipsoidHull:
    """f^n(B(center_src, r)) for an expanding linear map: every final term of
    a valid delta-pseudoorbit lies inside (shadowing bound r = delta/(lam-1))."""

    center: np.ndarray
    forward: np.ndarray        # A^n
    inverse: np.ndarray        # A^{-n}
    radius: float              # pre-image ball radius delta/(lam-1)
    n: int
    delta: float
    lam: float
    provenance: str = "UPPER"

    def contains(self, p: Point, tol: float = 1e-7) -> bool:
        z = np.asarray(p.coords) - self.center
        return float(np.linalg.norm(self.inverse @ z)) <= self.radius + tol

    def half_widths(self) -> np.ndarray:
        return self.radius * np.linalg.norm(self.forward, axis=1)

    def box_cover_count(self, S: float) -> int:
        """Number of S-boxes needed to cover the hull's bounding box."""
        if S <= 0:
            raise ValueError("box size must be positive")
        return int(np.prod([max(1, math.ceil(2 * h / S))
                            for h in self.half_widths()]))


def shadow_hull(mapd: MapDescriptor, x0: Point, n: int, delta: float,
                lam: Optional[float] = None) -> EllipsoidHull:
    """Upper-bound hull for final terms of expanding linear maps."""
    if not isinstance(mapd, Linear):
        raise ValueError("shadow hulls exist only for linear maps")
    if lam is None:
        lam = mapd.expansion_lambda()
    if lam is None:
        raise ValueError("non-triangular matrix: declare the expansion lambda")
    if lam <= 1.0:
        raise ValueError("map must be expanding (lambda > 1)")
    a = mapd.mat()
    fwd = np.linalg.matrix_power(a, n)
    inv = np.linalg.inv(fwd)
    center = fwd @ np.asarray(x0.coords)
    return EllipsoidHull(center, fwd, inv, delta / (lam - 1.0), n, delta, lam)


def subsample(orbit: PseudoOrbit, k: int, L: Callable[[float], float]) -> PseudoOrbit:
    """Every k-th point as an eta_k-pseudoorbit of the k-th iterate, with
    eta_k = delta + L(delta) + ... + L^{k-1}(delta)."""
    if k < 1:
        raise ValueError("k must be >= 1")
    if orbit.length % k != 0:
        raise ValueError("orbit length must be divisible by k")
    if L is None:
        raise ValueError("subsampling requires a control function for the base map")
    eta = 0.0
    t = orbit.delta
    for _ in range(k):
        eta += t
        t = L(t)
    base = orbit.map
    iterated = Iterate(base, k) if k > 1 else base
    return PseudoOrbit(orbit.points[::k], eta, iterated)


def push_forward(orbit: PseudoOrbit, cert) -> PseudoOrbit:
    """Image of the orbit under a controlled map phi that semiconjugates the
    orbit's map f to a codomain map g up to closeness K: the image is an
    (L(delta) + K)-pseudoorbit of g."""
    if cert.K_close is None:
        raise ValueError("certificate declares no closeness budget K_close")
    g = getattr(cert, "conjugated_map", None)
    if g is None:
        raise ValueError("certificate must carry the codomain map (conjugated_map)")
    new_delta = cert.L(orbit.delta) + cert.K_close
    pts = tuple(cert.phi.apply(p, check=False) for p in orbit.points)
    return PseudoOrbit(pts, new_delta, g)
