"""Cuspidal words, the cuspidal acceleration, geometric lengths and convergents.

A word is right cuspidal when every step satisfies ``o(a_{k+1}) = o(hat a_k) - 1``
and left cuspidal for ``+1``; its prefix cylinders then share one endpoint, the
anchor.  The acceleration cuts an expansion greedily into maximal cuspidal words
``W_0 * W_1 * ...`` and each word contributes the convergent ``G_{W_0..W_{r-1}} xi_{W_r}``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Any, Iterable, Iterator, Sequence

from .errors import SuspectedParabolicPoint, VertexNotResolved
from .expansion import check_admissible, iter_expansion
from .moebius import INF, RealMoebius
from .polygon import LabelledPolygon

__all__ = [
    "CuspType", "CuspidalWord", "cuspidal_type", "anchor", "accelerate",
    "geometric_length", "vertex_representatives", "denominator",
    "ConvergentRecord", "convergents", "DEFAULT_MAX_RUN",
]

DEFAULT_MAX_RUN = 10_000


class CuspType(enum.Enum):
    R = "R"
    L = "L"
    SINGLE = "single-letter"
    NOT_CUSPIDAL = "not-cuspidal"


def _step(P: LabelledPolygon, a: str, b: str) -> int:
    """``o(b) - o(hat a)`` reduced to -1, +1 or something else (returned as 0)."""
    n = len(P.letters)
    diff = (P.o(b) - P.o(P.hat(a))) % n
    if diff == n - 1:
        return -1
    if diff == 1:
        return 1
    return 0


def cuspidal_type(P: LabelledPolygon, word: Sequence[str]) -> CuspType:
    word = check_admissible(P, word)
    if not word:
        raise ValueError("empty word")
    if len(word) == 1:
        return CuspType.SINGLE
    steps = {_step(P, a, b) for a, b in zip(word, word[1:])}
    if steps == {-1}:
        return CuspType.R
    if steps == {1}:
        return CuspType.L
    return CuspType.NOT_CUSPIDAL


def anchor(P: LabelledPolygon, word: Sequence[str], kind: CuspType | None = None):
    """Common endpoint of the prefix cylinders: ``xi^L`` of the first letter for
    left words, ``xi^R`` otherwise (single letters included)."""
    kind = kind or cuspidal_type(P, word)
    if kind is CuspType.NOT_CUSPIDAL:
        raise ValueError(f"{''.join(word)} is not cuspidal")
    left, right = P.arc(word[0])
    return left if kind is CuspType.L else right


@dataclass
class CuspidalWord:
    letters: tuple
    kind: CuspType
    start: int = 0
    _length: Any = field(default=None, repr=False)

    def __len__(self):
        return len(self.letters)

    def anchor(self, P: LabelledPolygon):
        return anchor(P, self.letters, self.kind)

    def length(self, P: LabelledPolygon):
        if self._length is None:
            self._length = geometric_length(P, self.letters, kind=self.kind)
        return self._length


def accelerate(P: LabelledPolygon, letters: Iterable[str],
               max_run: int = DEFAULT_MAX_RUN) -> Iterator[CuspidalWord]:
    """Greedy decomposition into maximal cuspidal words.

    Each word is emitted once the first letter that cannot extend it has been
    read; that letter starts the next word.  An unfinished trailing word of a
    finite input is dropped because its maximality is unknown.
    """
    it = iter(letters)
    try:
        current = [next(it)]
    except StopIteration:
        return
    kind = CuspType.SINGLE
    start = 0
    for pos, b in enumerate(it, start=1):
        prev = current[-1]
        if b == P.hat(prev):
            check_admissible(P, (prev, b))
        step = _step(P, prev, b)
        want = {CuspType.R: -1, CuspType.L: 1}.get(kind)
        if step != 0 and (want is None or step == want):
            current.append(b)
            kind = CuspType.R if step == -1 else CuspType.L
            if len(current) > max_run:
                raise SuspectedParabolicPoint(len(current), start)
            continue
        yield CuspidalWord(tuple(current), kind, start)
        current, kind, start = [b], CuspType.SINGLE, pos


def vertex_representatives(P: LabelledPolygon, index: int, count: int = 3):
    """Distinct matrices ``X = B A_k`` with ``X(INF)`` the given vertex.

    The first is the cached search result; the others are ``X T_mu`` and
    ``C X`` with ``C`` the parabolic vertex-cycle element fixing the vertex.
    """
    X, k = P.vertex_representation(index)
    mu = P.cusp(k).mu
    out = [(X, k), (X @ RealMoebius.translation(mu), k)]
    a = P.letters[(index - 1) % len(P.letters)]
    cyc = _vertex_cycle(P, a)
    out.append((P.word_map(cyc) @ X, k))
    out.append((X @ RealMoebius.translation(-2 * mu), k))
    return out[:count]


def _vertex_cycle(P: LabelledPolygon, a: str):
    word = [a]
    while True:
        nxt = P.letter_at(P.o(P.hat(word[-1])) - 1)
        if nxt == a:
            return word
        word.append(nxt)


def geometric_length(P: LabelledPolygon, word: Sequence[str], kind: CuspType | None = None,
                     representation=None):
    """Horizontal distance between ``s_{a_0}`` and ``G_{a_0..a_{n-1}} s_{a_n}``
    after the anchor is sent to infinity by ``(B A_k)^{-1}``."""
    word = tuple(word)
    kind = kind or cuspidal_type(P, word)
    if kind is CuspType.SINGLE:
        return 0
    if kind is CuspType.NOT_CUSPIDAL:
        raise ValueError(f"{''.join(word)} is not cuspidal")
    xi = anchor(P, word, kind)
    idx = P.vertex_index(xi)
    if idx is None:
        raise VertexNotResolved(f"anchor {xi!r} is not a polygon vertex")
    X, _ = representation or P.vertex_representation(idx)
    M = X.inverse()
    side = 0 if kind is CuspType.R else 1  # endpoint of each side other than the anchor
    e0 = P.arc(word[0])[side]
    e1 = P.word_map(word[:-1])(P.arc(word[-1])[side])
    u0, u1 = M(e0), M(e1)
    if u0 is INF or u1 is INF:
        raise VertexNotResolved("side endpoint collides with the anchor")
    return abs(u0 - u1)


def denominator(P: LabelledPolygon, G: RealMoebius, k: int):
    """``|c(G A_k)|``; zero exactly when ``G z_k`` is infinity."""
    return abs((G @ P.cusp(k).A).c)


@dataclass
class ConvergentRecord:
    r: int
    prefix: tuple
    word: CuspidalWord
    point: Any
    D: Any
    length: Any
    cusp: int
    vertex: int

    @property
    def letters(self):
        return self.word.letters


def convergents(P: LabelledPolygon, alpha, r_max: int | None = None, strict: bool = True,
                max_run: int = DEFAULT_MAX_RUN) -> Iterator[ConvergentRecord]:
    """Yield records for r = 0, 1, ..., r_max (unbounded when r_max is None)."""
    prefix = []
    G = RealMoebius.identity()
    if not P.exact:
        G = G.to_precision(P.precision)
    words = accelerate(P, iter_expansion(P, alpha, strict), max_run)
    for r, W in enumerate(words):
        if r_max is not None and r > r_max:
            return
        xi = W.anchor(P)
        idx = P.vertex_index(xi)
        X, k = P.vertex_representation(idx)
        N = G @ X
        yield ConvergentRecord(r, tuple(prefix), W, G(xi), abs(N.c), W.length(P), k, idx)
        prefix.extend(W.letters)
        G = G @ P.word_map(W.letters)
