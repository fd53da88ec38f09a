import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from coarse_entropy.errors import InvalidPointError
from coarse_entropy.maps import (Affine1D, ChainLinear, Compose,
                                 ConjugatedDoubling, ControlWitness, Homothety,
                                 Identity, Iterate, Laurent1D, Linear,
                                 ProductMap, iterate_apply, linear_1d,
                                 power_map, verify_control)
from coarse_entropy.spaces import (ChainRects, ChainSegments, Euclidean,
                                   HalfLine, Halfplane, Point, Product)


def test_linear_apply_and_eigen_helpers():
    f = Linear(Euclidean(2), ((2.0, 1.0), (0.0, 3.0)))
    q = f.apply(Point.of(1.0, 1.0))
    assert q.coords == (3.0, 3.0)
    assert list(f.eigenvalues()) == [2.0, 3.0]
    assert f.expansion_lambda() == 2.0
    assert f.big_lambda() == 6.0


def test_big_lambda_ignores_contracting_directions():
    f = Linear(Euclidean(3), ((2.0, 0, 0), (0, 0.5, 0), (0, 0, 1.0)))
    assert f.big_lambda() == 2.0


def test_nontriangular_eigenvalues_declined():
    f = Linear(Euclidean(2), ((0.0, 1.0), (1.0, 0.0)))
    assert f.eigenvalues() is None


def test_apply_rejects_nonmembers():
    f = power_map(2)
    with pytest.raises(InvalidPointError):
        f.apply(Point.of(1.0))


def test_iterate_apply_flags_escape():
    # x - 10 leaves [2, oo) after one step from x = 5
    f = Affine1D(HalfLine(2.0), 1.0, -10.0)
    with pytest.raises(InvalidPointError):
        iterate_apply(f, 2, Point.of(5.0))


def test_iterate_and_compose_agree():
    f = linear_1d(Euclidean(1), 3.0)
    p = Point.of(2.0)
    assert Iterate(f, 2).apply(p) == Compose(f, f).apply(p)


def test_product_map_acts_coordinatewise():
    f = linear_1d(Euclidean(1), 2.0)
    g = Identity(Euclidean(1))
    fg = ProductMap(f, g)
    out = fg.apply(Point.pair(Point.of(3.0), Point.of(5.0)))
    assert out.parts[0].coords == (6.0,)
    assert out.parts[1].coords == (5.0,)


def test_laurent_evaluates_negative_exponents():
    f = Laurent1D.make(HalfLine(2.0), {2: 1.0, -1: 1.0})
    assert f.apply(Point.of(2.0)).coords[0] == pytest.approx(4.5)


def test_chain_linear_maps_block_onto_next():
    ch = ChainRects()
    f = ChainLinear(ch)
    corner = Point.in_chart(2, (0.5, 1.0))     # corner of the 1 x 2 block
    out = f.apply(corner)
    assert out.chart == 3
    w, h = ch.extents(3)
    assert abs(out.coords[0]) == pytest.approx(w / 2)
    assert abs(out.coords[1]) == pytest.approx(h / 2)


def test_chain_linear_segments_multiplier():
    seg = ChainSegments("f")
    f = ChainLinear(seg)
    p = Point.in_chart(0, (0.5,))
    q = f.apply(p)
    assert q.chart == 1
    assert q.coords[0] in (0.5, 1.0)  # multiplier is 1 or 2 at this epoch


@settings(max_examples=60, deadline=None)
@given(x=st.floats(-50, 50), y=st.floats(0, 20))
def test_conjugated_doubling_is_phi_f_phi_inverse(x, y):
    hp = Halfplane()
    g = ConjugatedDoubling(hp)
    p = Point.of(x, y)
    u = ConjugatedDoubling.phi_inv(p)
    doubled = Point.of(2.0 * u.coords[0], u.coords[1])
    expected = ConjugatedDoubling.phi(doubled)
    got = g.apply(p, check=False)
    assert got.coords[0] == pytest.approx(expected.coords[0], abs=1e-9)
    assert got.coords[1] == y


@settings(max_examples=60, deadline=None)
@given(x=st.floats(-50, 50), y=st.floats(0, 20))
def test_phi_inverts_phi_inv(x, y):
    p = Point.of(x, y)
    back = ConjugatedDoubling.phi(ConjugatedDoubling.phi_inv(p))
    assert back.coords[0] == pytest.approx(x, abs=1e-7)


def test_verify_control_accepts_true_lipschitz_bound():
    f = Linear(Euclidean(2), ((2.0, 0.0), (0.0, 3.0)))
    rep = verify_control(f, ControlWitness(L=lambda t: 3.0 * t),
                         region_radius=100.0, samples=300, seed=11)
    assert not rep.violations
    assert rep.max_ratio <= 1.0 + 1e-9


def test_verify_control_finds_violations_of_undersized_bound():
    f = Linear(Euclidean(2), ((2.0, 0.0), (0.0, 3.0)))
    rep = verify_control(f, ControlWitness(L=lambda t: 1.5 * t),
                         region_radius=100.0, samples=300, seed=11)
    assert rep.violations
    assert rep.max_ratio > 1.0


def test_verify_control_is_seed_deterministic():
    f = Homothety(Euclidean(2), 2.0)
    a = verify_control(f, ControlWitness(L=lambda t: 2.0 * t), 50.0, 100, 3)
    b = verify_control(f, ControlWitness(L=lambda t: 2.0 * t), 50.0, 100, 3)
    assert a.max_ratio == b.max_ratio


def test_power_map_domain_guard():
    with pytest.raises(ValueError):
        power_map(2, low=1.0)
