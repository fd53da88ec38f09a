"""Self-maps and cross-space maps with exact closed-form evaluation."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Dict, Optional, Tuple

import numpy as np

from .errors import InvalidPointError, SpaceMismatchError
from .spaces import (ChainRects, ChainSegments, Cone, Euclidean, HalfLine,
                     Halfplane, Point, Product, Space, e3_multiplier)


class MapDescriptor:
    """Base class. ``domain`` and ``codomain`` are Space instances;
    self-maps have codomain == domain."""

    domain: Space
    codomain: Space

    def apply(self, p: Point, check: bool = True) -> Point:
        if check and not self.domain.contains(p):
            raise InvalidPointError(f"point {p} is not in the domain")
        q = self._apply(p)
        return q

    def _apply(self, p: Point) -> Point:
        raise NotImplementedError


@dataclass(frozen=True)
class Identity(MapDescriptor):
    domain: Space

    @property
    def codomain(self):
        return self.domain

    def _apply(self, p):
        return p


@dataclass(frozen=True)
class Linear(MapDescriptor):
    """x -> M x on a Euclidean-like chart-0 space."""

    domain: Space
    matrix: Tuple[Tuple[float, ...], ...]

    @property
    def codomain(self):
        return self.domain

    def mat(self) -> np.ndarray:
        return np.asarray(self.matrix, dtype=float)

    def _apply(self, p):
        return Point(0, tuple(self.mat() @ np.asarray(p.coords)))

    def eigenvalues(self) -> Optional[np.ndarray]:
        """Exact eigenvalues for diagonal/triangular matrices, else None."""
        m = self.mat()
        if np.allclose(m, np.triu(m)) or np.allclose(m, np.tril(m)):
            return np.diagonal(m).copy()
        return None

    def expansion_lambda(self) -> Optional[float]:
        ev = self.eigenvalues()
        if ev is None:
            return None
        return float(np.min(np.abs(ev)))

    def big_lambda(self) -> Optional[float]:
        """|product of eigenvalues of modulus > 1|."""
        ev = self.eigenvalues()
        if ev is None:
            return None
        prod = 1.0
        for v in ev:
            if abs(v) > 1.0:
                prod *= abs(v)
        return prod


def linear_1d(domain: Space, a: float) -> Linear:
    return Linear(domain, ((float(a),),))


@dataclass(frozen=True)
class Homothety(MapDescriptor):
    """x -> lam * x; preserves rays, so cones are closed under it."""

    domain: Space
    lam: float

    @property
    def codomain(self):
        return self.domain

    def _apply(self, p):
        return Point(p.chart, tuple(self.lam * c for c in p.coords))


@dataclass(frozen=True)
class ChainLinear(MapDescriptor):
    """Maps block P_n onto P_{n+1} linearly, preserving axis directions and
    sending anchor to anchor."""

    domain: Space  # ChainRects or ChainSegments

    @property
    def codomain(self):
        return self.domain

    def _apply(self, p):
        sp = self.domain
        n = p.chart
        if isinstance(sp, ChainRects):
            w0, h0 = sp.extents(n)
            w1, h1 = sp.extents(n + 1)
            return Point(n + 1, (p.coords[0] * w1 / w0, p.coords[1] * h1 / h0))
        if isinstance(sp, ChainSegments):
            mult = e3_multiplier(sp.role, n)
            return Point(n + 1, (p.coords[0] * mult,))
        raise SpaceMismatchError("ChainLinear requires a chain space")


def _phi_e1(x: float, y: float) -> Tuple[float, float]:
    ey = math.exp(y)
    if -ey <= x <= ey:
        return (x * math.exp(-y), y)
    if x > ey:
        return (x - ey + 1.0, y)
    return (x + ey - 1.0, y)


def _phi_inv_e1(x: float, y: float) -> Tuple[float, float]:
    ey = math.exp(y)
    if -1.0 <= x <= 1.0:
        return (x * ey, y)
    if x > 1.0:
        return (x + ey - 1.0, y)
    return (x - ey + 1.0, y)


@dataclass(frozen=True)
class ConjugatedDoubling(MapDescriptor):
    """g = phi o f o phi^{-1} on the half-plane, where f(x,y) = (2x,y) and
    phi squeezes [-e^y, e^y] x {y} onto [-1, 1] x {y}."""

    domain: Halfplane = field(default_factory=Halfplane)

    @property
    def codomain(self):
        return self.domain

    def _apply(self, p):
        x, y = p.coords
        u, _ = _phi_inv_e1(x, y)
        return Point(0, _phi_e1(2.0 * u, y))

    @staticmethod
    def phi(p: Point) -> Point:
        return Point(0, _phi_e1(p.coords[0], p.coords[1]))

    @staticmethod
    def phi_inv(p: Point) -> Point:
        return Point(0, _phi_inv_e1(p.coords[0], p.coords[1]))


@dataclass(frozen=True)
class Laurent1D(MapDescriptor):
    """x -> sum of c_e * x^e over the (possibly negative) exponents e."""

    domain: Space
    coeffs: Tuple[Tuple[int, float], ...]  # ((exponent, coefficient), ...)
    codomain_space: Optional[Space] = None

    @staticmethod
    def make(domain: Space, coeffs: Dict[int, float],
             codomain: Optional[Space] = None) -> "Laurent1D":
        items = tuple(sorted((int(e), float(c)) for e, c in coeffs.items()))
        return Laurent1D(domain, items, codomain)

    @property
    def codomain(self):
        return self.codomain_space if self.codomain_space is not None else self.domain

    def _apply(self, p):
        x = p.coords[0]
        y = 0.0
        for e, c in self.coeffs:
            y += c * x ** e
        return Point(0, (y,))


def power_map(exponent: int, low: float = 2.0) -> Laurent1D:
    """x -> x^exponent on [low, oo); low >= 2 keeps the half-line invariant."""
    if low < 2.0:
        raise ValueError("power maps are only provided on half-lines [a, oo), a >= 2")
    return Laurent1D.make(HalfLine(low), {int(exponent): 1.0})


@dataclass(frozen=True)
class LinearCross(MapDescriptor):
    """x -> M x between two chart-0 spaces; M may be rectangular."""

    domain: Space
    codomain: Space
    matrix: Tuple[Tuple[float, ...], ...]

    def _apply(self, p):
        m = np.asarray(self.matrix, dtype=float)
        return Point(0, tuple(m @ np.asarray(p.coords)))


@dataclass(frozen=True)
class Affine1D(MapDescriptor):
    """x -> a x + b, optionally between different 1-D spaces."""

    domain: Space
    a: float
    b: float
    codomain_space: Optional[Space] = None

    @property
    def codomain(self):
        return self.codomain_space if self.codomain_space is not None else self.domain

    def _apply(self, p):
        return Point(0, (self.a * p.coords[0] + self.b,))


@dataclass(frozen=True)
class Iterate(MapDescriptor):
    base: MapDescriptor
    k: int

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("iteration count must be >= 1")

    @property
    def domain(self):
        return self.base.domain

    @property
    def codomain(self):
        return self.base.codomain

    def _apply(self, p):
        q = p
        for _ in range(self.k):
            q = self.base.apply(q, check=False)
        return q


@dataclass(frozen=True)
class ProductMap(MapDescriptor):
    left: MapDescriptor
    right: MapDescriptor

    @property
    def domain(self):
        return Product(self.left.domain, self.right.domain)

    @property
    def codomain(self):
        return Product(self.left.codomain, self.right.codomain)

    def _apply(self, p):
        return Point.pair(self.left.apply(p.parts[0], check=False),
                          self.right.apply(p.parts[1], check=False))


@dataclass(frozen=True)
class Compose(MapDescriptor):
    outer: MapDescriptor
    inner: MapDescriptor

    @property
    def domain(self):
        return self.inner.domain

    @property
    def codomain(self):
        return self.outer.codomain

    def _apply(self, p):
        return self.outer.apply(self.inner.apply(p, check=False), check=False)


@dataclass(frozen=True)
class ControlWitness:
    """Declared control data for a map: an increasing control function L
    bounding image distances, and/or a Lipschitz constant."""

    L: Optional[Callable[[float], float]] = None
    lipschitz_lambda: Optional[float] = None


@dataclass(frozen=True)
class ControlReport:
    violations: Tuple[Tuple[Point, Point, float, float], ...]
    max_ratio: float
    samples: int


def apply(mapd: MapDescriptor, p: Point) -> Point:
    return mapd.apply(p)


def iterate_apply(mapd: MapDescriptor, k: int, p: Point) -> Point:
    if k < 1:
        raise ValueError("k must be >= 1")
    q = p
    for _ in range(k):
        if not mapd.domain.contains(q):
            raise InvalidPointError("intermediate point left the domain")
        q = mapd.apply(q, check=False)
    return q


def verify_control(mapd: MapDescriptor, witness: ControlWitness,
                   region_radius: float, samples: int, seed: int) -> ControlReport:
    """Sample member pairs within the region and test d(fx, fx') <= L(d(x, x'))."""
    if witness.L is None:
        raise ValueError("witness must declare a control function L")
    if samples < 1:
        raise ValueError("samples must be >= 1")
    rng = np.random.default_rng(seed)
    space = mapd.domain
    cod = mapd.codomain
    violations = []
    max_ratio = 0.0
    for _ in range(samples):
        x = space.sample_point(rng, region_radius)
        x2 = space.sample_point(rng, region_radius)
        d_src = space.distance(x, x2)
        d_img = cod.distance(mapd.apply(x, check=False), mapd.apply(x2, check=False))
        bound = witness.L(d_src)
        if bound > 0:
            max_ratio = max(max_ratio, d_img / bound)
        elif d_img > 0:
            max_ratio = math.inf
        if d_img > bound + 1e-9:
            violations.append((x, x2, d_src, d_img))
    return ControlReport(tuple(violations), max_ratio, samples)
