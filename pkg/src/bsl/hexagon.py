"""A non-arithmetic lattice: the free group on three parabolics pairing adjacent
sides of an ideal hexagon.

Vertices ``v0 = INF, v1, ..., v5`` sit on the circle at clockwise angles
``0, g1/2, g1, g1 + g2/2, g1 + g2, (g1 + g2 + 2pi)/2``.  The odd vertices bisect
the gaps, so the two sides at ``v_{2j+1}`` are mirror images under the ray
through that vertex and the parabolic fixing it pairs them, which makes the
hexagon a Dirichlet domain centred at ``i``.  The remaining vertex cycle
``v0 -> v2 -> v4`` is parabolic for every choice of gaps.

The gaps are fixed by asking ``tr(G_a G_b) = -15/2`` and ``tr(G_b G_c) = -11/2``.
Traces of elements of an arithmetic non-cocompact group are algebraic integers,
so either value rules arithmeticity out.
"""

from __future__ import annotations

import json
from fractions import Fraction
from importlib import resources

from mpmath.ctx_mp import MPContext

__all__ = ["TARGET_TRACES", "solve_gaps", "hexagon_group_data", "load_hexagon_data"]

TARGET_TRACES = (Fraction(-15, 2), Fraction(-11, 2))


def _mat_mul(x, y):
    return [[x[0][0] * y[0][0] + x[0][1] * y[1][0], x[0][0] * y[0][1] + x[0][1] * y[1][1]],
            [x[1][0] * y[0][0] + x[1][1] * y[1][0], x[1][0] * y[0][1] + x[1][1] * y[1][1]]]


def _parabolic(p, shift):
    """``A T_shift A^{-1}`` with ``A = [[p, -1], [1, 0]]``, a parabolic fixing p."""
    return [[1 - shift * p, shift * p * p], [-shift, 1 + shift * p]]


def _conj(p):
    return [[p, -1], [1, 0]]


def _build(ctx, g1, g2):
    cot = lambda t: ctx.cot(t / 2)
    t = [g1 / 2, g1, g1 + g2 / 2, g1 + g2, (g1 + g2 + 2 * ctx.pi) / 2]
    v = [None] + [cot(x) for x in t]
    # each pairing is the parabolic at v_{2j+1} sending v_{2j} to v_{2j+2}
    s_a = 1 / (v[1] - v[2])
    s_b = 1 / (v[3] - v[4]) - 1 / (v[3] - v[2])
    s_c = -1 / (v[5] - v[4])
    Ga, Gb, Gc = _parabolic(v[1], s_a), _parabolic(v[3], s_b), _parabolic(v[5], s_c)
    return v, (Ga, Gb, Gc), (s_a, s_b, s_c)


def _trace(m):
    return m[0][0] + m[1][1]


def solve_gaps(bits: int = 1800):
    ctx = MPContext()
    ctx.prec = bits
    ta, tb = (ctx.mpf(x.numerator) / x.denominator for x in TARGET_TRACES)

    def equations(g1, g2):
        _, (Ga, Gb, Gc), _ = _build(ctx, g1, g2)
        return [_trace(_mat_mul(Ga, Gb)) - ta, _trace(_mat_mul(Gb, Gc)) - tb]

    g1, g2 = ctx.findroot(equations, (ctx.mpf("1.5"), ctx.mpf("2.5")))
    return ctx, g1, g2


def hexagon_group_data(digits: int = 500) -> dict:
    """Group-file dictionary with entries printed to ``digits`` significant digits."""
    ctx, g1, g2 = solve_gaps(int(digits * 3.33) + 128)
    v, (Ga, Gb, Gc), shifts = _build(ctx, g1, g2)
    fmt = lambda x: ctx.nstr(x, digits, min_fixed=-ctx.inf, max_fixed=ctx.inf)
    inv = lambda m: [[m[1][1], -m[0][1]], [-m[1][0], m[0][0]]]
    flat = lambda m: [fmt(m[0][0]), fmt(m[0][1]), fmt(m[1][0]), fmt(m[1][1])]
    gens = {"a": Ga, "A": inv(Ga), "b": Gb, "B": inv(Gb), "c": Gc, "C": inv(Gc)}
    order = ["A", "a", "B", "b", "C", "c"]
    pairs = {"a": "A", "A": "a", "b": "B", "B": "b", "c": "C", "C": "c"}
    # cusps v1, v3, v5 are fixed by the pairings; v2 stands for the cycle {v0, v2, v4}
    cycle = _mat_mul(_mat_mul(Ga, Gc), Gb)
    cusps = []
    for p, P in ((v[1], Ga), (v[3], Gb), (v[5], Gc), (v[2], cycle)):
        A = _conj(p)
        Ai = [[0, 1], [-1, p]]
        T = _mat_mul(_mat_mul(Ai, P), A)
        cusps.append({"A": flat(A), "mu": fmt(abs(T[0][1] / T[0][0]))})
    return {
        "name": "hexagon",
        "d": 3,
        "precision_bits": 256,
        "arithmetic": "mp",
        "letters": [{"label": x, "inverse": pairs[x], "generator_halfplane": flat(gens[x])}
                    for x in order],
        "cusps": cusps,
        "ambient_generators": [],
    }


def load_hexagon_data() -> dict:
    text = resources.files("bsl.data").joinpath("hexagon.json").read_text(encoding="utf-8")
    return json.loads(text)


if __name__ == "__main__":
    print(json.dumps(hexagon_group_data(), indent=2))
