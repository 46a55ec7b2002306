from fractions import Fraction

import pytest

from gcval.curve_core import Point, WeierstrassModel, mul
from gcval.divpoly import (
    phi2_x,
    psi2_squared_x,
    psi2_value,
    psi3_value,
    psi_sequence,
)
from gcval.errors import InputError, TwoTorsionError

E_MORDELL = WeierstrassModel(0, 0, 0, 0, 1)
E37 = WeierstrassModel(0, 0, 1, -1, 0)
P_M = Point(2, 3)
P37 = Point(0, 0)


def test_base_values_hand_computed():
    seq = psi_sequence(E_MORDELL, P_M, 4)
    assert seq.psi(1) == 1
    assert seq.psi(2) == 6          # 2y + a1 x + a3
    assert seq.psi(3) == 72         # 3x^4 + b2 x^3 + 3 b4 x^2 + 3 b6 x + b8
    assert seq.psi(4) == 2592
    assert seq.phi(1) == 2          # phi_1 = x
    assert seq.phi(2) == 0          # x^4 - b4 x^2 - 2 b6 x - b8 at x = 2


def test_psi2_squared_closed_form():
    # 4x^3 + b2 x^2 + 2 b4 x + b6 = 36 = psi_2(P)^2
    assert psi2_squared_x(E_MORDELL, 2) == 36
    assert psi2_value(E_MORDELL, P_M) ** 2 == 36


def test_psi3_value_matches_table():
    assert psi3_value(E_MORDELL, P_M) == 72


def test_phi2_matches_group_law():
    # x([2]P) = phi_2 / psi_2^2 whenever [2]P is affine; here phi_2 = 0
    assert mul(E_MORDELL, 2, P_M) == Point(0, 1)
    assert phi2_x(E_MORDELL, 2) == 0


def test_two_torsion_rejected():
    e = WeierstrassModel(0, 0, 0, -1, 0)  # (1, 0) is 2-torsion
    with pytest.raises(TwoTorsionError):
        psi_sequence(e, Point(1, 0), 3)


def test_bad_inputs():
    with pytest.raises(InputError):
        psi_sequence(E37, P37, 0)
    with pytest.raises(InputError):
        psi_sequence(E37, Point(), 3)
    with pytest.raises(InputError):
        psi_sequence(E37, Point(1, 1), 3)


def test_x_of_multiple_identity_37a():
    seq = psi_sequence(E37, P37, 20)
    for n in range(1, 21):
        q = mul(E37, n, P37)
        assert not q.is_infinity
        assert q.x * seq.psi_squared(n) == seq.phi(n)


def test_torsion_vanishing():
    # (2, 3) has order 6 on y^2 = x^3 + 1, so psi_6 vanishes there
    seq = psi_sequence(E_MORDELL, P_M, 6)
    assert seq.psi(6) == 0
    assert seq.psi(5) != 0


def test_elliptic_divisibility_relation():
    seq = psi_sequence(E37, P37, 24)
    for m in range(2, 13):
        for n in range(1, m):
            lhs = seq.psi(m + n) * seq.psi(m - n)
            rhs = (seq.psi(m + 1) * seq.psi(m - 1) * seq.psi(n) ** 2
                   - seq.psi(n + 1) * seq.psi(n - 1) * seq.psi(m) ** 2)
            assert lhs == rhs, (m, n)


def test_phi_recurrence_definition():
    seq = psi_sequence(E37, P37, 12)
    x = P37.x
    for n in range(2, 13):
        assert seq.phi(n) == x * seq.psi(n) ** 2 - seq.psi(n - 1) * seq.psi(n + 1)


def test_rational_point_with_denominators():
    q = Point(Fraction(1, 4), Fraction(-5, 8))  # [5] of the 37a generator
    seq = psi_sequence(E37, q, 8)
    for n in range(1, 9):
        r = mul(E37, n, q)
        assert r.x * seq.psi_squared(n) == seq.phi(n)
