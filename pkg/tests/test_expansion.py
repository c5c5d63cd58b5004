import itertools
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from bsl.errors import BacktrackingWord, NearBoundaryAmbiguity, PrecisionExhausted
from bsl.exact import surd
from bsl.expansion import (
    bs_step, check_admissible, cylinder, decode, expand, iter_expansion, left_extreme,
    locate, right_extreme,
)
from bsl.harness.alpha import alpha_for
from bsl.moebius import INF, get_precision

GOLDEN = surd(Fraction(1, 2), Fraction(1, 2), 5)

surds = st.builds(
    lambda p, q, n, r: surd(Fraction(p, r), Fraction(q, r), n),
    st.integers(-9, 9), st.integers(-9, 9).filter(bool),
    st.sampled_from([2, 3, 5, 6, 7, 10, 11, 13]), st.integers(1, 9),
)


def test_golden_mean_is_periodic(modular):
    word = expand(modular, GOLDEN, 16)
    assert word == ("a", "B", "A", "b") * 4


def test_sqrt2(modular):
    assert expand(modular, surd(0, 1, 2), 9) == ("a", "B", "a") * 3


@given(x=surds)
def test_shift_conjugacy_exact(modular, x):
    P = modular
    word = expand(P, x, 30)
    assert expand(P, bs_step(P, x), 29) == word[1:]


@given(x=surds)
def test_no_backtracking(modular, x):
    P = modular
    word = expand(P, x, 60)
    for u, v in zip(word, word[1:]):
        assert v != P.hat(u)


def test_shift_conjugacy_hexagon(hexagon):
    for text in ("sqrt:2", "sqrt:3", "(1+sqrt:5)/2", "-sqrt:7"):
        x = alpha_for(hexagon, text)
        word = expand(hexagon, x, 40)
        y = bs_step(hexagon, x)
        assert expand(hexagon, y, 39) == word[1:]


def test_expansion_point_lies_in_every_cylinder(modular, hexagon):
    for P in (modular, hexagon):
        x = alpha_for(P, "sqrt:3")
        word = expand(P, x, 30)
        for n in range(1, 31):
            assert cylinder(P, word[:n]).contains(x)


def test_cylinders_nest_and_shrink(modular):
    prec = get_precision(256)
    x = alpha_for(modular, "sqrt:7")
    word = expand(modular, x, 200)
    prev = None
    for n in range(1, 201):
        cyl = cylinder(modular, word[:n])
        d = cyl.diameter(prec)
        if prev is not None:
            assert d <= prev
        prev = d
    assert prev < 1e-6


def test_vertex_is_ambiguous(modular, hexagon):
    with pytest.raises(NearBoundaryAmbiguity):
        locate(modular, 1)
    assert locate(modular, 1, strict=False) == "b"
    v = hexagon.vertices[2]
    with pytest.raises(NearBoundaryAmbiguity):
        locate(hexagon, v)


def test_near_vertex_after_a_few_steps(modular):
    # 3/2 is a parabolic point: its orbit reaches a vertex
    with pytest.raises(NearBoundaryAmbiguity) as info:
        expand(modular, Fraction(3, 2), 10)
    assert info.value.distance == 0


def test_low_precision_runs_out(hexagon):
    low = hexagon.with_precision(get_precision(64))
    x = alpha_for(low, "sqrt:2")
    with pytest.raises((PrecisionExhausted, NearBoundaryAmbiguity)):
        expand(low, x, 500)


def test_backtracking_rejected(modular):
    with pytest.raises(BacktrackingWord) as info:
        check_admissible(modular, "abBa")
    assert info.value.position == 1
    with pytest.raises(ValueError):
        check_admissible(modular, "ax")


def test_extreme_continuations(modular, hexagon):
    for P in (modular, hexagon):
        for a in P.letters:
            outer = cylinder(P, (a,))
            assert P.same_point(cylinder(P, (a, left_extreme(P, a))).inf, outer.inf)
            assert P.same_point(cylinder(P, (a, right_extreme(P, a))).sup, outer.sup)


def test_children_tile_the_parent(modular):
    a = "b"
    children = [b for b in modular.letters if b != modular.hat(a)]
    arcs = sorted((cylinder(modular, (a, b)) for b in children), key=lambda c: -c.inf)
    parent = cylinder(modular, (a,))
    assert arcs[0].inf == parent.inf
    assert arcs[-1].sup == parent.sup
    for left, right in zip(arcs, arcs[1:]):
        assert left.sup == right.inf


def test_decode_round_trip(hexagon):
    x = alpha_for(hexagon, "(1+sqrt:13)/3")
    word = expand(hexagon, x, 150)
    found = decode(hexagon, word, resolution=hexagon.precision.ctx.mpf(10) ** -20)
    assert abs(found.point - x) <= found.error * 10


def test_infinity_expands(modular):
    with pytest.raises(NearBoundaryAmbiguity):
        expand(modular, INF, 1)
    assert expand(modular, INF, 3, strict=False) == ("a", "a", "a")


def test_lazy_iteration(modular):
    letters = list(itertools.islice(iter_expansion(modular, GOLDEN), 8))
    assert letters == list("aBAbaBAb")
