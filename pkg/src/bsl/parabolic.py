"""Parabolic fixed points: reduced forms, pruned enumeration, empirical constants.

Every parabolic point of the ambient lattice is ``G_w zeta`` for an admissible
word ``w`` and a polygon vertex ``zeta`` that is not an endpoint of ``[hat w_last]``;
that pair is its reduced form.  The enumeration walks the tree of admissible
words depth-first and prunes a subtree once a lower bound for the denominators
of all points below it exceeds ``Q``.

Pruning bound.  Below the node ``u`` (last letter ``b``) the points are ``G_u q``
with ``q`` a parabolic point inside the arc ``J`` complementary to ``[hat b]``,
other than its endpoints.  Split ``J`` at its angular midpoint ``q_m``.  For the
half ending at the vertex ``e`` write ``q = X_e r`` with ``X_e = B A_k`` sending
``INF`` to ``e``; then ``D(G_u q) = |z_2| |c' r + d'|`` where ``(c', d')`` is the
bottom row of ``G_u X_e`` and ``|z_2| >= delta_e`` is the denominator of ``r`` in
the frame of ``e``.  The linear factor is smallest at ``r_m = X_e^{-1} q_m``
because the pole of ``G_u`` lies outside ``J``.  Hence
``D >= min_e delta_e |c' r_m + d'|``, which grows linearly along cuspidal
branches where cruder norm bounds stall.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Iterable, Sequence

import numpy as np

from .errors import BudgetExceeded, InsufficientData
from .expansion import check_admissible
from .moebius import INF, RealMoebius, clockwise_angle, phi_inv
from .polygon import LabelledPolygon

__all__ = [
    "ReducedForm", "EnumeratedPoint", "Enumeration", "enumerate_points", "reduced_form",
    "ConstantsEstimate", "estimate_constants", "separation_constant", "kappa1_constant",
    "kappa2_constant", "DirichletResult", "dirichlet_check", "write_jsonl", "frame_minimum",
]

_SLACK = 1 + 1e-9


@dataclass(frozen=True)
class ReducedForm:
    word: tuple
    vertex: int

    def map(self, P: LabelledPolygon) -> RealMoebius:
        return P.word_map(self.word)

    def point(self, P: LabelledPolygon):
        return self.map(P)(P.vertices[self.vertex])


@dataclass
class EnumeratedPoint:
    point: Any
    D: Any
    form: ReducedForm
    cusp: int
    G: RealMoebius = field(repr=False)

    def to_json(self, P: LabelledPolygon) -> dict:
        return {
            "point": _decimal(self.point, P),
            "D": _decimal(self.D, P),
            "word": list(self.form.word),
            "vertex": P.letters[self.form.vertex],
        }


@dataclass
class Enumeration:
    Q: Any
    window: tuple
    points: list
    complete: bool = True
    nodes: int = 0
    duplicates: int = 0
    focus: tuple | None = None

    def __len__(self):
        return len(self.points)

    def __iter__(self):
        return iter(self.points)


def _decimal(x, P: LabelledPolygon, digits: int = 40) -> str:
    if x is INF:
        return "inf"
    if isinstance(x, int) or (isinstance(x, Fraction) and x.denominator == 1):
        return str(int(x))
    return P.precision.ctx.nstr(P.precision.mpf(x), digits)


def reduced_form(P: LabelledPolygon, word: Sequence[str], vertex: int) -> ReducedForm:
    """Strip trailing letters while the vertex is an endpoint of ``[hat b_m]``.

    ``G_b`` carries the endpoints of ``[hat b]`` to those of ``[b]``, so each step
    keeps the point and shortens the word by one letter.
    """
    word = list(check_admissible(P, word))
    while word and vertex in P.arc_vertex_indices(P.hat(word[-1])):
        image = P.generators[word[-1]](P.vertices[vertex])
        vertex = P.vertex_index(image)
        word.pop()
    return ReducedForm(tuple(word), vertex)


def frame_minimum(P: LabelledPolygon, index: int, depth: int = 3, safety=0.5):
    """Lower estimate for ``|c(X_e^{-1} Y)|`` over parabolic points ``Y(INF) != e``.

    Searched over reduced forms of length at most ``depth`` and scaled by ``safety``.
    """
    X, _ = P.vertex_representation(index)
    Xi = X.inverse()
    best = None
    for w in _words(P, depth):
        G = P.word_map(w)
        excluded = set(P.arc_vertex_indices(P.hat(w[-1]))) if w else set()
        for i in range(len(P.vertices)):
            if i in excluded:
                continue
            Y, _ = P.vertex_representation(i)
            c = abs((Xi @ G @ Y).c)
            if c == 0 or (not P.exact and c <= P.precision.tolerance):
                continue
            best = c if best is None else min(best, c)
    return float(best) * safety


def _words(P: LabelledPolygon, depth: int):
    out = [()]
    frontier = [()]
    for _ in range(depth):
        nxt = [w + (b,) for w in frontier for b in P.letters if not w or b != P.hat(w[-1])]
        out += nxt
        frontier = nxt
    return out


class _Pruner:
    """Per-letter data for the denominator bound of the module docstring."""

    def __init__(self, P: LabelledPolygon, safety=0.5):
        prec = P.precision
        ctx = prec.ctx
        deltas = {}
        self.data = {}
        for b in P.letters:
            left, right = P.arc(P.hat(b))
            t0 = clockwise_angle(right, prec)
            span = (clockwise_angle(left, prec) - t0) % (2 * ctx.pi)
            qm = phi_inv(ctx.expj(-(t0 + span / 2)), prec)
            halves = []
            for e in P.arc_vertex_indices(P.hat(b)):
                if e not in deltas:
                    deltas[e] = frame_minimum(P, e, safety=safety)
                X, _ = P.vertex_representation(e)
                rm = float(X.inverse()(qm))
                xa, xb, xc, xd = (float(v) for v in X.entries)
                # delta |c' rm + d'| = |c_G * u + d_G * v| with (u, v) below
                halves.append((deltas[e] * (xa * rm + xb), deltas[e] * (xc * rm + xd)))
            self.data[b] = halves

    def bound(self, gc: float, gd: float, b: str) -> float:
        return min(abs(gc * u + gd * v) for u, v in self.data[b])


def _f(x):
    if x is INF:
        return math.inf
    return float(x)


def _intervals(inf, sup, lo, hi):
    """Closure of the clockwise arc from ``inf`` to ``sup`` intersected with [lo, hi]."""
    if inf is INF:
        pieces = [(_f(sup), math.inf)]
    elif sup is INF:
        pieces = [(-math.inf, _f(inf))]
    else:
        x, y = _f(inf), _f(sup)
        pieces = [(y, x)] if x >= y else [(-math.inf, x), (y, math.inf)]
    out = []
    for a, b in pieces:
        a, b = max(a, lo), min(b, hi)
        if a <= b:
            out.append((a, b))
    return out


def _dist(alpha: float, intervals) -> float:
    best = math.inf
    for a, b in intervals:
        if a <= alpha <= b:
            return 0.0
        best = min(best, abs(alpha - a), abs(alpha - b))
    return best


def _key(P: LabelledPolygon, x):
    if P.exact:
        return x
    return P.precision.ctx.nstr(x, max(15, P.precision.tolerance_exp * 3 // 10))


def _fmap(g, x):
    """Float image of the extended real ``x`` (a float or INF) under the tuple ``g``."""
    a, b, c, d = g
    if x is INF:
        return INF if c == 0 else a / c
    den = c * x + d
    if den == 0:
        return INF
    return (a * x + b) / den


def enumerate_points(P: LabelledPolygon, Q, window=None, focus=None,
                     budget: int | None = None, safety=0.5) -> Enumeration:
    """All parabolic points with ``0 < D <= Q`` inside ``window``.

    ``window`` defaults to the hull of the finite vertices.  ``focus`` is an
    optional ``(alpha, exponent, theta)``: subtrees where every point has
    ``D**exponent * |alpha - p| > theta`` are skipped, so only points meeting that
    test are guaranteed.  ``budget`` caps the number of visited nodes.

    Cylinders and bounds are screened in double precision with a relative slack;
    emitted points are checked at full precision.
    """
    if Q <= 0:
        raise ValueError("Q must be positive")
    if window is None:
        window = P.finite_vertex_hull()
    wlo, whi = window
    lo, hi = _f(wlo), _f(whi)
    pad = 1e-9 * (1 + abs(lo) + abs(hi))
    lo, hi = lo - pad, hi + pad
    exact = P.exact
    if exact:
        Qx = Q
        one = 1
    else:
        prec = P.precision
        wlo, whi = prec.mpf(wlo), prec.mpf(whi)
        Qx = prec.mpf(Q) * (1 + prec.tolerance)
        tiny = prec.tolerance
        one = prec.mpf(1)
    Qf = float(Q) * _SLACK
    if focus is not None:
        f_alpha, f_exp, f_theta = float(focus[0]), focus[1], float(focus[2]) * _SLACK
    pruner = _Pruner(P, safety)
    reps = []
    for i in range(len(P.vertices)):
        X, k = P.vertex_representation(i)
        reps.append((i, X.a, X.c, k))
    gens = {b: P.generators[b].entries for b in P.letters}
    farc = {b: tuple(v if v is INF else float(v) for v in P.arc(b)) for b in P.letters}
    skips = {b: P.arc_vertex_indices(P.hat(b)) for b in P.letters}
    hats = {b: P.hat(b) for b in P.letters}
    order = tuple(reversed(P.letters))

    found = {}
    result = Enumeration(Q, (window[0], window[1]), [], focus=focus)
    stack = [((), (one, 0 * one, 0 * one, one))]
    while stack:
        word, g = stack.pop()
        result.nodes += 1
        if budget is not None and result.nodes > budget:
            result.complete = False
            result.points = sorted(found.values(), key=lambda e: _f(e.point))
            raise BudgetExceeded(f"node budget {budget} exhausted", partial=result)
        ga, gb, gc, gd = g
        skip = skips[word[-1]] if word else ()
        for i, xa, xc, k in reps:
            if i in skip:
                continue
            c = gc * xa + gd * xc
            D = abs(c)
            if D == 0 or D > Qx or (not exact and D <= tiny):
                continue
            a = ga * xa + gb * xc
            p = Fraction(a, c) if exact else a / c
            if p < wlo or p > whi:
                continue
            key = _key(P, p)
            if key in found:
                result.duplicates += 1
                continue
            found[key] = EnumeratedPoint(p, D, ReducedForm(word, i), k, RealMoebius(*g))
        gf = tuple(float(v) for v in g)
        last_hat = hats[word[-1]] if word else None
        for b in order:
            if b == last_hat:
                continue
            left, right = farc[b]
            pieces = _intervals(_fmap(gf, left), _fmap(gf, right), lo, hi)
            if not pieces:
                continue
            h = gens[b]
            cc = gc * h[0] + gd * h[2]
            cd = gc * h[1] + gd * h[3]
            lb = pruner.bound(float(cc), float(cd), b)
            if lb > Qf:
                continue
            if focus is not None and lb ** f_exp * _dist(f_alpha, pieces) > f_theta:
                continue
            stack.append((word + (b,), (ga * h[0] + gb * h[2], ga * h[1] + gb * h[3], cc, cd)))
    result.points = sorted(found.values(), key=lambda e: _f(e.point))
    return result


def write_jsonl(P: LabelledPolygon, enumeration: Enumeration, stream) -> None:
    for e in enumeration.points:
        stream.write(json.dumps(e.to_json(P)) + "\n")


# ---------------------------------------------------------------------------
# constants
# ---------------------------------------------------------------------------

def separation_constant(points: Sequence[EnumeratedPoint], P: LabelledPolygon | None = None):
    """``max 1/(|z - z'| D D')`` over distinct pairs, with the maximising pair.

    Pairs are screened in floating point on the sorted list: for each point the
    scan stops once no partner can beat the running maximum.  Given the polygon,
    the winning pair is re-evaluated at full precision.
    """
    if len(points) < 2:
        return 0.0, None
    z = np.array([_f(e.point) for e in points])
    D = np.array([float(e.D) for e in points])
    order = np.argsort(z, kind="stable")
    z, D = z[order], D[order]
    dmax = D.max()
    gaps = np.diff(z)
    vals = 1.0 / (gaps * D[:-1] * D[1:])
    best_i = int(np.argmax(vals))
    best, pair = float(vals[best_i]), (best_i, best_i + 1)
    n = len(z)
    for i in range(n - 1):
        reach = 1.0 / (best * D[i] * dmax)
        j = i + 2
        while j < n and z[j] - z[i] < reach:
            v = 1.0 / ((z[j] - z[i]) * D[i] * D[j])
            if v > best:
                best, pair = v, (i, j)
                reach = 1.0 / (best * D[i] * dmax)
            j += 1
    first, second = points[order[pair[0]]], points[order[pair[1]]]
    if P is not None:
        gap = abs(_exact_diff(P, first.point, second.point))
        best = float(P.precision.mpf(1 / (gap * first.D * second.D)))
    return best, (first, second)


def kappa1_constant(P: LabelledPolygon, points: Iterable[EnumeratedPoint]):
    """``min |zeta_0 - G^{-1} INF|`` over reduced forms with a nonempty word."""
    best = math.inf
    for e in points:
        if not e.form.word:
            continue
        zeta = P.vertices[e.form.vertex]
        pole = e.G.inverse()(INF)
        if zeta is INF or pole is INF:
            continue
        best = min(best, abs(_f(zeta) - _f(pole)))
    return best


def _extension_vectors(P: LabelledPolygon, depth: int):
    """Cusp vectors of ``G_v X_zeta`` for the comparison points behind kappa2.

    Returns, per last letter ``b`` and base vertex ``i``, the list of first
    columns that may be compared against ``G X_i``.
    """
    reps = [P.vertex_representation(i)[0] for i in range(len(P.vertices))]
    table = {}
    for b in P.letters:
        for i in range(len(P.vertices)):
            if i in P.arc_vertex_indices(P.hat(b)):
                continue
            zeta0 = P.vertices[i]
            cols = []
            for j, Y in enumerate(reps):  # part (1): other vertices
                if j != i:
                    cols.append((Y.a, Y.c))
            for v in _words(P, depth):
                if not v or v[0] == P.hat(b):
                    continue
                Gv = P.word_map(v)
                for j, Y in enumerate(reps):
                    if P.same_point(Gv(P.vertices[j]), zeta0):
                        continue
                    Z = Gv @ Y
                    cols.append((Z.a, Z.c))
            table[(b, i)] = np.array([[float(x), float(y)] for x, y in cols])
    return table


def kappa2_constant(P: LabelledPolygon, points: Iterable[EnumeratedPoint], depth: int = 1):
    """``min D(G zeta_0) / D(G G_v zeta)`` over reduced forms and the comparison
    points of both parts, with extensions ``v`` of length up to ``depth``."""
    table = _extension_vectors(P, depth)
    groups = {}
    for e in points:
        if not e.form.word:
            continue
        key = (e.form.word[-1], e.form.vertex)
        groups.setdefault(key, []).append((float(e.G.c), float(e.G.d), float(e.D)))
    best = math.inf
    for key, rows in groups.items():
        arr = np.array(rows)
        cols = table[key]
        denoms = np.abs(arr[:, :2] @ cols.T)
        with np.errstate(divide="ignore"):
            ratios = arr[:, 2:3] / denoms
        ratios[denoms < 1e-12] = np.inf
        best = min(best, float(ratios.min()))
    return best


@dataclass
class ConstantsEstimate:
    Q: Any
    S0: float
    kappa1: float
    kappa2: float
    epsilon0: float | None = None
    M: float | None = None
    n_points: int = 0
    epsilon0_witnesses: list = field(default_factory=list)

    def to_dict(self):
        return {
            "Q": float(self.Q), "S0": self.S0, "kappa1": self.kappa1, "kappa2": self.kappa2,
            "epsilon0": self.epsilon0, "M": None if self.M is None else float(self.M),
            "n_points": self.n_points,
            "epsilon0_witnesses": self.epsilon0_witnesses,
        }


def estimate_constants(P: LabelledPolygon, Q, alphas: Sequence | None = None, window=None,
                       theta: float = 1.0, r_max: int = 400) -> ConstantsEstimate:
    """Empirical S0, kappa1, kappa2 at bound ``Q`` and, given a sample of
    ``alphas``, epsilon0 and the Dirichlet constant M.

    epsilon0 is the smallest ``D^2 |alpha - p|`` over enumerated points (below
    ``theta``) that are not convergents of their alpha, so the inclusion holds
    for every ``eps`` up to it; it is capped at ``theta``.
    """
    enum = enumerate_points(P, Q, window)
    if len(enum) < 100:
        raise InsufficientData(f"only {len(enum)} points with D <= {Q}")
    S0, _ = separation_constant(enum.points, P)
    est = ConstantsEstimate(Q, S0, kappa1_constant(P, enum.points),
                            kappa2_constant(P, enum.points), n_points=len(enum))
    if alphas:
        from .harness.alpha import alpha_for
        from .harness.theorem import good_approximation_misses
        eps0 = theta
        deficiency = 0.0
        for alpha in alphas:
            alpha = alpha_for(P, alpha)
            misses = good_approximation_misses(P, alpha, Q, theta, r_max=r_max)
            for value, point in misses:
                if value < eps0:
                    eps0 = value
                est.epsilon0_witnesses.append((str(alpha), _decimal(point, P, 20), value))
            res = dirichlet_check(P, alpha, Q, M=4 * float(P.mu) + 4)
            if res.best is not None:
                deficiency = max(deficiency, res.best_value)
        est.epsilon0 = eps0
        est.M = deficiency
    return est


# ---------------------------------------------------------------------------
# Dirichlet
# ---------------------------------------------------------------------------

@dataclass
class DirichletResult:
    ok: bool
    alpha: Any
    Q: Any
    M: Any
    best: EnumeratedPoint | None
    best_value: float | None   # D Q |alpha - p|, to be compared with M

    def to_dict(self, P: LabelledPolygon):
        return {
            "ok": self.ok, "Q": float(self.Q), "M": float(self.M),
            "best_point": None if self.best is None else _decimal(self.best.point, P, 30),
            "best_D": None if self.best is None else _decimal(self.best.D, P, 30),
            "best_value": self.best_value,
        }


def dirichlet_check(P: LabelledPolygon, alpha, Q, M, radius=8) -> DirichletResult:
    """Look for a point with ``D <= Q`` and ``|alpha - p| <= M / (D Q)``.

    Failing that, the focus threshold is relaxed until some candidate shows up so
    the report can name the best one.
    """
    a = float(alpha)
    window = (_window_end(P, a - radius), _window_end(P, a + radius))
    theta = float(M) / float(Q)
    for _ in range(12):
        enum = enumerate_points(P, Q, window, focus=(a, 1, theta))
        best, best_value = None, None
        for e in enum.points:
            value = float(e.D) * float(Q) * float(abs(_exact_diff(P, alpha, e.point)))
            if best_value is None or value < best_value:
                best, best_value = e, value
        if best is not None:
            ok = best_value <= float(M) * _SLACK
            return DirichletResult(ok, alpha, Q, M, best, best_value)
        theta *= 4
    return DirichletResult(False, alpha, Q, M, None, None)


def _window_end(P: LabelledPolygon, x: float):
    return Fraction(x).limit_denominator(1 << 20) if P.exact else P.precision.mpf(x)


def _exact_diff(P: LabelledPolygon, alpha, p):
    """``alpha - p`` exactly when both are exact, else at working precision."""
    if P.exact and not hasattr(alpha, "context"):
        return alpha - p
    return P.precision.mpf(alpha) - P.precision.mpf(p)
