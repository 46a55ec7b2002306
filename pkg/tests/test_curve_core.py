from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gcval.curve_core import (
    CoordinateChange,
    Point,
    WeierstrassModel,
    add,
    apply_change,
    assert_infinite_order,
    derive,
    integralize_at,
    map_point,
    mul,
    neg,
    on_curve,
)
from gcval.errors import InputError, SingularCurveError, TorsionPointError

E_MORDELL = WeierstrassModel(0, 0, 0, 0, 1)   # y^2 = x^3 + 1
E37 = WeierstrassModel(0, 0, 1, -1, 0)        # rank 1, generator (0, 0)


def test_derive_hand_values():
    d = derive(E_MORDELL)
    assert (d.b2, d.b4, d.b6, d.b8) == (0, 0, 4, 0)
    assert (d.c4, d.c6, d.delta, d.j) == (0, -864, -432, 0)
    # identity instance: 1728*delta = c4^3 - c6^2
    assert 1728 * (-432) == 0 - (-864) ** 2
    # cross-check: delta = -27 b6^2 here
    assert d.delta == -27 * d.b6 ** 2


def test_singular_curve_rejected():
    with pytest.raises(SingularCurveError):
        WeierstrassModel(1, 0, 0, 0, 0)  # b-quantities (1,0,0,0): delta = 0


def test_identity_change_is_noop():
    c = CoordinateChange.identity()
    assert apply_change(E37, c) == E37
    assert map_point(c, Point(0, 0)) == Point(0, 0)


def test_scaling_change_divides_invariants():
    c = CoordinateChange(u=3)
    d0 = derive(E37)
    d1 = derive(apply_change(E37, c))
    assert d1.delta == d0.delta / 3 ** 12
    assert d1.c4 == d0.c4 / 3 ** 4
    assert d1.j == d0.j


def test_translation_moves_points():
    moved = map_point(CoordinateChange(1, 1, 0, 0), Point(2, 3))
    assert moved == Point(1, 3)


small = st.integers(min_value=-4, max_value=4)
units = st.sampled_from([1, -1, 2, 3, Fraction(1, 2), Fraction(-2, 3)])


@settings(max_examples=60)
@given(u=units, r=small, s=small, t=small)
def test_change_round_trip(u, r, s, t):
    c = CoordinateChange(u, r, s, t)
    back = c.compose(c.inverse())
    assert back.is_identity()
    assert apply_change(apply_change(E37, c), c.inverse()) == E37
    p = Point(0, 0)
    assert map_point(c.inverse(), map_point(c, p)) == p


@settings(max_examples=60)
@given(u=units, r=small, s=small, t=small)
def test_derived_quantities_transform(u, r, s, t):
    c = CoordinateChange(u, r, s, t)
    d0 = derive(E37)
    d1 = derive(apply_change(E37, c))
    assert d1.b2 == (d0.b2 + 12 * r) / u ** 2
    assert d1.b4 == (d0.b4 + r * d0.b2 + 6 * r * r) / u ** 4
    assert d1.b6 == (d0.b6 + 2 * r * d0.b4 + r * r * d0.b2 + 4 * r ** 3) / u ** 6
    assert d1.b8 == (d0.b8 + 3 * r * d0.b6 + 3 * r * r * d0.b4
                     + r ** 3 * d0.b2 + 3 * r ** 4) / u ** 8
    assert d1.c4 == d0.c4 / u ** 4
    assert d1.c6 == d0.c6 / u ** 6
    assert d1.delta == d0.delta / u ** 12


def test_doubling_hand_value():
    # tangent at (2, 3) on y^2 = x^3 + 1: lambda = 2, [2]P = (0, 1)
    assert mul(E_MORDELL, 2, Point(2, 3)) == Point(0, 1)


def test_mul_basics():
    p = Point(2, 3)
    assert mul(E_MORDELL, 1, p) == p
    assert mul(E_MORDELL, 0, p).is_infinity
    for n in (0, 1, 5, -3):
        assert mul(E_MORDELL, n, Point()).is_infinity


def test_negation_formula():
    p = Point(0, 0)
    q = neg(E37, p)
    assert q == Point(0, -1)  # -(x, y) = (x, -y - a1 x - a3)
    assert add(E37, p, q).is_infinity


def test_off_curve_rejected():
    with pytest.raises(InputError):
        add(E37, Point(1, 1), Point(0, 0))


def test_group_law_small_multiples_37a():
    p = Point(0, 0)
    multiples = {n: mul(E37, n, p) for n in range(1, 6)}
    assert multiples[2] == Point(1, 0)
    assert multiples[3] == Point(-1, -1)
    assert multiples[4] == Point(2, -3)
    assert multiples[5] == Point(Fraction(1, 4), Fraction(-5, 8))
    # [m+n]P == [m]P + [n]P
    for m in range(1, 5):
        for n in range(1, 5):
            assert mul(E37, m + n, p) == add(E37, multiples[m], multiples[n])


def test_torsion_guard():
    with pytest.raises(TorsionPointError):
        assert_infinite_order(E_MORDELL, Point(2, 3))  # 6-torsion
    assert_infinite_order(E37, Point(0, 0))


def test_integralize_at():
    model = WeierstrassModel(0, 0, 0, Fraction(1, 25), Fraction(2, 125))
    fixed, change = integralize_at(model, 5)
    assert all(v.denominator % 5 != 0 for v in fixed.coefficients())
    assert change.u == Fraction(1, 5)
    again, change2 = integralize_at(fixed, 5)
    assert again == fixed and change2.is_identity()


def test_on_curve_example():
    assert on_curve(E_MORDELL, Point(2, 3))  # 9 = 8 + 1
    assert not on_curve(E_MORDELL, Point(2, 4))
