from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from bsl.errors import BetaZero
from bsl.moebius import (
    INF, DiskMoebius, RealMoebius, chordal_distance, classify, clockwise_angle,
    get_precision, horoball_diameter, in_arc, isometric_circle, phi, phi_inv, to_disk,
)

PREC = get_precision(256)
TAU10 = 10 * PREC.tolerance

small = st.integers(-6, 6)


@st.composite
def sl2z(draw):
    """Random products of the standard generators, kept exact."""
    S, T = RealMoebius(0, -1, 1, 0), RealMoebius(1, 1, 0, 1)
    M = RealMoebius.identity()
    for _ in range(draw(st.integers(0, 8))):
        M = M @ (S if draw(st.booleans()) else RealMoebius(1, draw(small), 0, 1))
    return M @ T


def test_action_on_extended_reals():
    T2 = RealMoebius(1, 2, 0, 1)
    assert T2(3) == 5
    assert T2(INF) is INF
    S = RealMoebius(0, -1, 1, 0)
    assert S(0) is INF
    assert S(INF) == 0
    assert S(Fraction(1, 2)) == -2


def test_canonical_sign():
    M = RealMoebius(-1, 0, -2, -1)
    assert M.entries == (1, 0, 2, 1)
    assert RealMoebius(-1, -3, 0, -1) == RealMoebius(1, 3, 0, 1)


@given(sl2z(), sl2z(), st.fractions(max_denominator=50))
def test_composition_is_action(M, N, x):
    assert (M @ N)(x) == M(N(x))
    assert (M @ M.inverse()).is_identity()
    assert M.det() == 1


def test_classify():
    assert classify(RealMoebius(1, 1, 0, 1)) == "parabolic"
    assert classify(RealMoebius(0, -1, 1, 0)) == "elliptic"
    assert classify(RealMoebius(2, 1, 1, 1)) == "hyperbolic"
    assert classify(RealMoebius.identity()) == "identity"


@pytest.mark.parametrize("M, T, expected", [
    (RealMoebius(0, -1, 1, 0), 1, 1),
    (RealMoebius(1, 0, 2, 1), 1, Fraction(1, 4)),
    (RealMoebius(2, 1, 3, 2), 2, Fraction(1, 18)),
])
def test_horoball_diameter_values(M, T, expected):
    assert horoball_diameter(M, T) == expected


def test_horoball_diameter_fixing_infinity():
    assert horoball_diameter(RealMoebius(1, 5, 0, 1)) is INF
    with pytest.raises(ValueError):
        horoball_diameter(RealMoebius.identity(), 0)


@given(sl2z(), st.sampled_from([Fraction(1, 2), 1, 3]))
def test_horoball_diameter_against_sampled_images(M, T):
    """The top of the image of ``Im z = T`` is reached at ``x = -d/c``."""
    if M.c == 0:
        return
    ctx = PREC.ctx
    x0 = -PREC.mpf(Fraction(M.d, M.c))
    heights = []
    for k in range(-200, 201):
        z = ctx.mpc(x0 + ctx.mpf(k) / 400, PREC.mpf(T))
        a, b, c, d = (PREC.mpf(e) for e in M.entries)
        heights.append(((a * z + b) / (c * z + d)).imag)
    assert abs(max(heights) - PREC.mpf(horoball_diameter(M, T))) <= TAU10


@given(sl2z())
def test_isometric_circle_identities(M):
    F = to_disk(M, PREC)
    if abs(F.beta) < TAU10:
        return
    I, J = isometric_circle(F), isometric_circle(F.inverse())
    assert abs(I.radius - J.radius) <= TAU10
    ctx = PREC.ctx
    for k in range(8):
        w = I.center + I.radius * ctx.expj(2 * ctx.pi * k / 8)
        assert abs(abs(F.derivative(w)) - 1) <= TAU10
        assert J.residual(F(w)) <= TAU10


def test_isometric_circle_of_rotation():
    F = DiskMoebius(PREC.ctx.mpc(0, 1), PREC.ctx.mpc(0))
    with pytest.raises(BetaZero):
        isometric_circle(F)


@given(st.fractions(min_value=-50, max_value=50, max_denominator=100))
def test_cayley_round_trip(x):
    w = phi(x, PREC)
    assert abs(abs(w) - 1) <= TAU10
    assert abs(phi_inv(w, PREC) - PREC.mpf(x)) <= TAU10 * (1 + x * x)


def test_cayley_infinity():
    assert phi(INF, PREC) == 1
    assert phi_inv(1, PREC) is INF


@given(st.fractions(max_denominator=40), st.fractions(max_denominator=40))
def test_clockwise_angle_is_decreasing(x, y):
    if x == y:
        return
    lo, hi = sorted((x, y))
    assert clockwise_angle(hi, PREC) < clockwise_angle(lo, PREC)
    assert chordal_distance(x, y, PREC) == chordal_distance(y, x, PREC)


def test_arcs_are_right_open():
    assert in_arc(INF, INF, 1)
    assert not in_arc(1, INF, 1)
    assert in_arc(5, INF, 1)
    assert in_arc(-5, -1, INF)
    assert not in_arc(0, -1, INF)


def test_precision_tolerance():
    p = get_precision(128)
    assert p.tolerance == p.ctx.mpf(2) ** -64
    assert p.doubled().bits == 256
    assert get_precision(128, 40).tolerance == p.ctx.mpf(2) ** -40
