"""Classical continued fractions and the two classical approximation laws.

The oracle here never touches the polygon code: it works with the Gauss map
in exact arithmetic and enumerates candidate fractions through the
Stern-Brocot tree.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from ..errors import RationalDetected
from ..exact import QuadraticIrrational

__all__ = [
    "ClassicalCF", "classical_cf", "stern_brocot_candidates", "farey",
    "ClassicalReport", "check_classical_bounds",
]


@dataclass
class ClassicalCF:
    a0: int
    quotients: list
    convergents: list          # p_n / q_n for n = 0..len(quotients)
    guard_terms: int | None = None

    def __str__(self):
        return f"[{self.a0}; {', '.join(map(str, self.quotients))}]"


def _convergents(a0, quotients):
    p_prev, p = 1, a0
    q_prev, q = 0, 1
    out = [Fraction(p, q)]
    for a in quotients:
        p_prev, p = p, a * p + p_prev
        q_prev, q = q, a * q + q_prev
        out.append(Fraction(p, q))
    return out


def _exact_cf(x, n_max):
    a0 = math.floor(x)
    quotients = []
    rest = x - a0
    while len(quotients) < n_max:
        if rest == 0:
            raise RationalDetected(a0, quotients)
        x = 1 / rest
        a = math.floor(x)
        quotients.append(a)
        rest = x - a
    return a0, quotients


def classical_cf(alpha, n_max: int) -> ClassicalCF:
    """``alpha = a0 + [a1, a2, ...]`` up to ``n_max`` partial quotients.

    Exact input (int, Fraction, QuadraticIrrational) is expanded exactly.  A
    binary float is bracketed by the two rationals one ulp away and only the
    quotients shared by both are kept; their count is reported as guard terms.
    """
    if isinstance(alpha, (int, Fraction, QuadraticIrrational)):
        a0, qs = _exact_cf(alpha, n_max)
        return ClassicalCF(a0, qs, _convergents(a0, qs))
    ctx = alpha.context
    mid = _dyadic(alpha)
    ulp = Fraction(2) ** (-ctx.prec) * max(1, abs(mid)) * 4
    terms = []
    for bound in (mid - ulp, mid + ulp):
        try:
            a0, qs = _exact_cf(bound, n_max + 1)
        except RationalDetected as exc:
            a0, qs = exc.a0, exc.quotients
        terms.append([a0] + qs)
    common = []
    for x, y in zip(*terms):
        if x != y:
            break
        common.append(x)
    # the last shared quotient may still be cut short
    common = common[:-1] if len(common) > 1 else common
    a0, qs = common[0], common[1:n_max + 1]
    if len(qs) < n_max:
        raise RationalDetected(a0, qs)
    return ClassicalCF(a0, qs, _convergents(a0, qs), guard_terms=len(common) - 1)


def _dyadic(x) -> Fraction:
    """The exact rational value of a binary float."""
    man, exp = x.context.mpf(x).man_exp
    return Fraction(int(man)) * Fraction(2) ** int(exp)


def stern_brocot_candidates(alpha, q_max: int, bound=Fraction(1, 2)):
    """All reduced p/q with ``q <= q_max`` and ``q^2 |alpha - p/q| < bound`` (bound <= 1/2).

    Depth-first walk of the Stern-Brocot tree between consecutive integers; the
    subtree below the pair ``a/b < c/d`` holds fractions strictly between them
    with denominators at least ``b + d``, so it is skipped once that exceeds
    ``q_max`` or ``alpha`` is at least ``bound/(b+d)^2`` away from the interval.
    """
    n = math.floor(alpha)
    found = []
    for k in range(n - 1, n + 3):
        if abs(alpha - k) < bound:
            found.append(Fraction(k))
    for k in range(n - 1, n + 2):
        stack = [(k, 1, k + 1, 1)]
        while stack:
            a, b, c, d = stack.pop()
            q = b + d
            if q > q_max:
                continue
            lo, hi = Fraction(a, b), Fraction(c, d)
            if alpha <= lo:
                gap = lo - alpha
            elif alpha >= hi:
                gap = alpha - hi
            else:
                gap = 0
            if gap * q * q >= bound:
                continue
            p = a + c
            x = Fraction(p, q)
            if q * q * abs(alpha - x) < bound:
                found.append(x)
            stack.append((a, b, p, q))
            stack.append((p, q, c, d))
    return sorted(set(found))


def farey(n: int):
    """Farey sequence of order n on [0, 1] by the next-term recurrence."""
    a, b, c, d = 0, 1, 1, n
    out = [Fraction(0)]
    while c <= n:
        k = (n + b) // d
        a, b, c, d = c, d, k * c - a, k * d - b
        out.append(Fraction(a, b))
    return out


@dataclass
class ClassicalReport:
    alpha: object
    cf: ClassicalCF | None
    bound_rows: list = field(default_factory=list)    # (n, p/q, value, lo, hi, ok)
    stray: list = field(default_factory=list)         # good fractions that are not convergents
    q_max: int = 0
    error: str | None = None

    @property
    def ok(self) -> bool:
        return self.error is None and not self.stray and all(r[-1] for r in self.bound_rows)

    def to_dict(self):
        return {
            "alpha": str(self.alpha), "ok": self.ok, "error": self.error,
            "cf": None if self.cf is None else str(self.cf), "q_max": self.q_max,
            "bounds": [{"n": n, "convergent": str(c), "value": float(v),
                        "lower": str(lo), "upper": str(hi), "ok": ok}
                       for n, c, v, lo, hi, ok in self.bound_rows],
            "non_convergent_good_fractions": [str(x) for x in self.stray],
        }


def check_classical_bounds(alpha, n_max: int, q_max: int | None = None) -> ClassicalReport:
    """Both classical laws for ``alpha`` in exact arithmetic.

    ``1/(2 + a_{n+1}) <= q_n^2 |alpha - p_n/q_n| <= 1/a_{n+1}`` for ``n < n_max``, and
    every p/q with ``q <= q_max`` and ``q^2 |alpha - p/q| < 1/2`` is a convergent.
    ``q_max`` defaults to ``q_{n_max}``.  A binary float is taken at its exact
    dyadic value.
    """
    if not isinstance(alpha, (int, Fraction, QuadraticIrrational)):
        alpha = _dyadic(alpha)
    try:
        cf = classical_cf(alpha, n_max + 1)
    except RationalDetected as exc:
        return ClassicalReport(alpha, None, error=str(exc))
    report = ClassicalReport(alpha, cf)
    for n in range(n_max):
        c = cf.convergents[n]
        a_next = cf.quotients[n]
        value = c.denominator ** 2 * abs(alpha - c)
        lo, hi = Fraction(1, 2 + a_next), Fraction(1, a_next)
        report.bound_rows.append((n, c, value, lo, hi, lo <= value <= hi))
    if q_max is None:
        q_max = cf.convergents[n_max].denominator
    report.q_max = q_max
    convergents = set(cf.convergents)
    last_q = cf.convergents[-1].denominator
    for x in stern_brocot_candidates(alpha, q_max):
        if x not in convergents and x.denominator <= last_q:
            report.stray.append(x)
        elif x not in convergents:
            # beyond the computed expansion: extend it before judging
            if x not in _more_convergents(alpha, len(cf.quotients) + 40):
                report.stray.append(x)
    return report


def _more_convergents(alpha, n):
    try:
        return set(classical_cf(alpha, n).convergents)
    except RationalDetected as exc:
        return set(_convergents(exc.a0, exc.quotients))
