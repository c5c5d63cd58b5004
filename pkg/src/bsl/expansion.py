"""The Bowen-Series boundary map, boundary expansions, cylinders and decoding.

A boundary point in ``[a]`` is sent to ``G_a^{-1}`` of itself; the sequence of arcs
visited is its expansion.  In floating-point mode every orbit point is recomputed
from the original input through the composed inverse, and a running error bound
decides when the next letter can no longer be trusted.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Iterable, Iterator, Sequence

from .errors import (
    BacktrackingWord, NearBoundaryAmbiguity, PrecisionExhausted, ResolutionNotReached,
)
from .exact import QuadraticIrrational
from .moebius import INF, RealMoebius, chordal_distance, clockwise_angle, in_arc, phi_inv
from .polygon import LabelledPolygon

__all__ = [
    "check_admissible", "locate", "bs_step", "iter_expansion", "expand",
    "CylinderArc", "cylinder", "decode", "DecodedPoint", "left_extreme", "right_extreme",
]


def check_admissible(P: LabelledPolygon, word: Sequence[str]) -> tuple:
    """Return ``word`` as a tuple, raising BacktrackingWord at the first ``a, hat a`` pair."""
    word = tuple(word)
    for k, a in enumerate(word):
        if a not in P.generators:
            raise ValueError(f"unknown letter {a!r}")
        if k and word[k - 1] == P.hat(a):
            raise BacktrackingWord(word, k - 1)
    return word


def _is_exact_point(x) -> bool:
    return x is INF or isinstance(x, (int, Fraction, QuadraticIrrational))


def locate(P: LabelledPolygon, xi, strict: bool = True, slack=None) -> str:
    """The letter whose right-open arc contains ``xi``.

    With ``strict`` the call refuses points within ``max(tau, slack)`` (chordal) of
    a vertex, since the answer there depends on rounding.
    """
    if strict:
        if P.exact and _is_exact_point(xi):
            i = P.vertex_index(xi)
            if i is not None:
                raise NearBoundaryAmbiguity(f"{xi!r} is the vertex {i}", distance=0)
        else:
            dist = P.nearest_vertex_distance(xi)
            limit = P.precision.tolerance if slack is None else max(P.precision.tolerance, slack)
            if dist <= limit:
                raise NearBoundaryAmbiguity(
                    f"point within {P.precision.ctx.nstr(dist, 5)} of a vertex", distance=dist)
    return P.letter_of(xi)


def bs_step(P: LabelledPolygon, xi, strict: bool = True):
    a = locate(P, xi, strict)
    return P.generators[P.hat(a)](xi)


def _chordal_derivative(M: RealMoebius, x, prec):
    """Scale factor of ``M`` at ``x`` for the chordal metric."""
    a, b, c, d = M.entries
    if x is INF:
        return 1 / (a * a + c * c)
    return (1 + x * x) / ((a * x + b) ** 2 + (c * x + d) ** 2)


def iter_expansion(P: LabelledPolygon, xi, strict: bool = True) -> Iterator[str]:
    """Lazily yield the expansion letters of ``xi``.

    Exact points on an exact polygon are iterated exactly.  Otherwise the k-th
    orbit point is ``M_k(xi)`` with ``M_k`` the composed inverse, and the bound
    ``e_k = s^2 delta_0 + 16 k eps |M_k| s`` is kept alongside, where ``s^2`` is the
    chordal derivative of ``M_k`` at ``xi`` (the second term bounds the angle by
    which rounding of ``M_k`` turns the image vector).  NearBoundaryAmbiguity
    fires when a vertex is within ``max(tau, e_k)`` and PrecisionExhausted when
    ``e_k`` exceeds a quarter of the smallest arc.
    """
    if P.exact and _is_exact_point(xi):
        x = xi
        while True:
            a = locate(P, x, strict)
            yield a
            x = P.generators[P.hat(a)](x)

    prec = P.precision
    x0 = xi if xi is INF else prec.mpf(xi)
    inverses = {a: P.generators[P.hat(a)].to_precision(prec) for a in P.letters}
    smallest_arc = min(chordal_distance(*P.arc(a), prec) for a in P.letters)
    delta0 = 4 * prec.eps
    M = RealMoebius.identity().to_precision(prec)
    k = 0
    while True:
        x = M(x0)
        der = _chordal_derivative(M, x0, prec)
        norm = prec.ctx.sqrt(sum(e * e for e in M.entries))
        err = der * delta0 + 16 * (k + 1) * prec.eps * norm * prec.ctx.sqrt(der)
        if err > smallest_arc / 4:
            raise PrecisionExhausted(
                f"error bound {prec.ctx.nstr(err, 3)} after {k} letters", depth=k, bits=prec.bits)
        try:
            a = locate(P, x, strict, slack=err)
        except NearBoundaryAmbiguity as exc:
            exc.depth = k
            raise
        yield a
        M = inverses[a] @ M
        k += 1


def expand(P: LabelledPolygon, xi, n: int, strict: bool = True) -> tuple:
    """First ``n`` letters of the expansion of ``xi``."""
    out = []
    if n <= 0:
        return ()
    for a in iter_expansion(P, xi, strict):
        out.append(a)
        if len(out) == n:
            break
    return tuple(out)


@dataclass(frozen=True)
class CylinderArc:
    """Right-open arc ``[inf, sup)`` of points whose expansion starts with ``word``."""

    word: tuple
    inf: Any
    sup: Any
    map: RealMoebius

    def contains(self, x) -> bool:
        return in_arc(x, self.inf, self.sup)

    def angular_length(self, prec):
        ctx = prec.ctx
        return (clockwise_angle(self.sup, prec) - clockwise_angle(self.inf, prec)) % (2 * ctx.pi)

    def diameter(self, prec):
        """Chordal distance between the endpoints."""
        return chordal_distance(self.inf, self.sup, prec)

    def midpoint(self, prec):
        ctx = prec.ctx
        t = clockwise_angle(self.inf, prec) + self.angular_length(prec) / 2
        return phi_inv(ctx.expj(-t), prec)


def cylinder(P: LabelledPolygon, word: Sequence[str]) -> CylinderArc:
    """``G_{a_0..a_{n-1}} [a_n]`` for a nonempty admissible word."""
    word = check_admissible(P, word)
    if not word:
        raise ValueError("cylinder of the empty word is the whole circle")
    G = P.word_map(word[:-1])
    left, right = P.arc(word[-1])
    return CylinderArc(word, G(left), G(right), G @ P.generators[word[-1]])


def left_extreme(P: LabelledPolygon, a: str) -> str:
    """Letter following ``a`` whose cylinder starts where that of ``a`` starts."""
    return P.letter_at(P.o(P.hat(a)) + 1)


def right_extreme(P: LabelledPolygon, a: str) -> str:
    """Letter following ``a`` whose cylinder ends where that of ``a`` ends."""
    return P.letter_at(P.o(P.hat(a)) - 1)


@dataclass(frozen=True)
class DecodedPoint:
    point: Any
    error: Any
    depth: int
    word: tuple


def decode(P: LabelledPolygon, letters: Iterable[str], resolution=None,
           n_max: int = 10_000) -> DecodedPoint:
    """Midpoint of the first cylinder whose angular length drops below ``resolution``."""
    prec = P.precision
    if resolution is None:
        resolution = prec.tolerance
    word = []
    length = None
    for a in letters:
        if word and word[-1] == P.hat(a):
            raise BacktrackingWord(word + [a], len(word) - 1)
        word.append(a)
        cyl = cylinder(P, word)
        length = cyl.angular_length(prec)
        if length < resolution:
            return DecodedPoint(cyl.midpoint(prec), length / 2, len(word), tuple(word))
        if len(word) >= n_max:
            break
    raise ResolutionNotReached(n_max, length)
