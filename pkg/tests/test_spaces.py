import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from coarse_entropy.errors import BudgetExceededError
from coarse_entropy.spaces import (BaseSetSpec, ChainRects, ChainSegments,
                                   Cone, Euclidean, HalfLine, Halfplane,
                                   IntegerLattice, Point, Product,
                                   SpineBlocks, e3_multiplier)

SPACES = [
    Euclidean(1),
    Euclidean(3),
    IntegerLattice(2),
    HalfLine(2.0),
    Halfplane(),
    ChainRects(),
    ChainSegments("f"),
    SpineBlocks(max_level=3),
    Cone(2, BaseSetSpec.cantor_arc(3)),
    Product(Euclidean(1), HalfLine(0.0)),
]


def _points(space, seed, count=3, radius=50.0):
    rng = np.random.default_rng(seed)
    return [space.sample_point(rng, radius) for _ in range(count)]


@pytest.mark.parametrize("space", SPACES, ids=lambda s: type(s).__name__)
@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 10_000))
def test_metric_axioms(space, seed):
    """Identity, symmetry and the triangle inequality on sampled members."""
    x, y, z = _points(space, seed)
    assert space.distance(x, x) == 0.0
    dxy = space.distance(x, y)
    assert dxy >= 0.0
    assert dxy == pytest.approx(space.distance(y, x))
    assert dxy <= space.distance(x, z) + space.distance(z, y) + 1e-9


@pytest.mark.parametrize("space", SPACES, ids=lambda s: type(s).__name__)
def test_sampled_points_are_members(space):
    rng = np.random.default_rng(7)
    for _ in range(20):
        assert space.contains(space.sample_point(rng, 30.0))


def test_lattice_anchored_at_chart_origin():
    # grid coordinates are multiples of the spacing regardless of the center
    space = Euclidean(1)
    pts = space.lattice_region(Point.of(0.3), 1.0, 0.5, 1000)
    for p in pts:
        assert p.coords[0] / 0.5 == pytest.approx(round(p.coords[0] / 0.5))
    assert pts == sorted(pts, key=lambda p: (p.chart, p.coords))


def test_lattice_regions_nest():
    space = Euclidean(2)
    center = Point.of(1.0, -2.0)
    small = set(space.lattice_region(center, 2.0, 0.5, 10_000))
    large = set(space.lattice_region(center, 4.0, 0.5, 10_000))
    assert small <= large


def test_lattice_region_budget():
    with pytest.raises(BudgetExceededError):
        Euclidean(3).lattice_region(Point.of(0, 0, 0), 50.0, 0.1, 100)


def test_lattice_points_lie_in_region():
    for space in SPACES:
        center = space.origin()
        for p in space.lattice_region(center, 5.0, 1.0, 100_000):
            assert space.contains(p)
            assert space.distance(center, p) <= 5.0 + 1e-9


def test_integer_lattice_membership():
    space = IntegerLattice(2)
    assert space.contains(Point.of(3.0, -1.0))
    assert not space.contains(Point.of(0.5, 0.0))


def test_halfline_membership():
    space = HalfLine(2.0)
    assert space.contains(Point.of(2.0))
    assert not space.contains(Point.of(1.0))


def test_product_max_metric():
    space = Product(Euclidean(1), Euclidean(1))
    p = Point.pair(Point.of(0.0), Point.of(0.0))
    q = Point.pair(Point.of(3.0), Point.of(-7.0))
    assert space.distance(p, q) == pytest.approx(7.0)


def test_chain_rects_extents():
    ch = ChainRects()
    # blocks alternate between 1 x 2^m and 2^m x 1
    assert ch.extents(0) == (1.0, 1.0)
    assert ch.extents(2) == (1.0, 2.0)
    assert ch.extents(3) == (2.0, 1.0)
    assert ch.extents(6) == (1.0, 8.0)


def test_chain_within_block_is_max_metric():
    ch = ChainRects()
    p = Point.in_chart(4, (0.5, 0.25))
    q = Point.in_chart(4, (-0.5, -0.25))
    assert ch.distance(p, q) == pytest.approx(1.0)


def test_chain_cross_block_distance_grows_with_separation():
    ch = ChainRects()
    anchors = [Point.in_chart(k, (0.0, 0.0)) for k in range(6)]
    gaps = [ch.distance(anchors[0], a) for a in anchors]
    assert gaps == sorted(gaps)
    assert gaps[1] > 0


def test_e3_multiplier_epoch_structure():
    # multiplier is 2 inside a factor's active epochs and 1 outside, and the
    # two roles are never active simultaneously
    for n in range(1, 60):
        mf, mg = e3_multiplier("f", n), e3_multiplier("g", n)
        assert {mf, mg} <= {1, 2}
        assert not (mf == 2 and mg == 2)
    assert any(e3_multiplier("f", n) == 2 for n in range(1, 60))
    assert any(e3_multiplier("g", n) == 2 for n in range(1, 60))


def test_spine_blocks_geometry():
    sp = SpineBlocks(max_level=3)
    # spike tips in different level-k blocks are joined through the spine
    a = Point.in_chart(2, (1.0, 0.0))   # block at spine position 1
    b = Point.in_chart(3, (0.0, 0.0, 0.0, 1.0))  # block at spine position 2
    d = sp.distance(a, b)
    assert d == pytest.approx(1.0 + 1.0 + 1.0)  # down, along, up


def test_cone_same_ray_distance():
    cone = Cone(2, BaseSetSpec.cantor_arc(2))
    a = cone.base.base_points()[0]
    p = Point.of(*(2.0 * a))
    q = Point.of(*(5.0 * a))
    assert cone.distance(p, q) == pytest.approx(3.0)


def test_cone_membership_is_ray_restricted():
    cone = Cone(2, BaseSetSpec.cantor_arc(2))
    a = cone.base.base_points()[0]
    assert cone.contains(Point.of(*(3.0 * a)))
    # rotate off every base direction
    theta = 0.5
    rot = np.array([[math.cos(theta), -math.sin(theta)],
                    [math.sin(theta), math.cos(theta)]])
    assert not cone.contains(Point.of(*(3.0 * (rot @ a))))


def test_cantor_arc_count_and_spread():
    base = BaseSetSpec.cantor_arc(4)
    pts = base.base_points()
    assert len(pts) == 16
    norms = np.linalg.norm(pts, axis=1)
    assert np.allclose(norms, 1.0)


def test_point_json_round_trip():
    p = Point.in_chart(3, (1.5, -2.0))
    assert Point.from_json(p.to_json()) == p
    pair = Point.pair(Point.of(1.0), p)
    assert Point.from_json(pair.to_json()) == pair
