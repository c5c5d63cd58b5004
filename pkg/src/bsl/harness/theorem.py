"""Numerical checks of the two-sided approximation theorem.

Part 1 compares ``D^2 |alpha - zeta_r|`` with ``1/(|W_r| + 2mu)`` and ``1/|W_r|``.
Part 2 enumerates parabolic points independently and asks that every point
with ``D^2 |alpha - p| < eps`` be one of the convergents.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Sequence

from ..cuspidal import convergents
from ..errors import (
    NearBoundaryAmbiguity, PrecisionExhausted, SuspectedParabolicPoint, VertexNotResolved,
)
from ..exact import QuadraticIrrational
from ..moebius import INF
from ..parabolic import enumerate_points
from .alpha import alpha_for, format_alpha

__all__ = [
    "Part1Row", "Part2Row", "AlphaReport", "TheoremReport", "check_theorem",
    "convergent_points", "good_approximation_misses", "part2_window",
]

_RETRYABLE = (NearBoundaryAmbiguity, PrecisionExhausted)
_MAX_DOUBLINGS = 2


@dataclass
class Part1Row:
    r: int
    word: str
    kind: str
    length: Any
    D: Any
    point: Any
    value: Any
    lower: Any
    upper: Any
    lower_ok: bool
    upper_ok: bool

    @property
    def ok(self):
        return self.lower_ok and self.upper_ok


@dataclass
class Part2Row:
    point: Any
    D: Any
    value: Any
    matched: bool
    r: int | None


@dataclass
class AlphaReport:
    alpha: Any
    label: str
    part1: list = field(default_factory=list)
    part2: list = field(default_factory=list)
    error: str | None = None
    bits: int = 0
    skipped_infinite: int = 0

    @property
    def part1_ok(self):
        return self.error is None and all(row.ok for row in self.part1)

    @property
    def part2_ok(self):
        return self.error is None and all(row.matched for row in self.part2)

    @property
    def ok(self):
        return self.part1_ok and self.part2_ok


def _num(x, ctx, digits=20):
    if x is INF:
        return "inf"
    if isinstance(x, (int, Fraction)):
        return str(x)
    if isinstance(x, QuadraticIrrational):
        x = x.to_mpf(ctx)
    return ctx.nstr(x, digits)


@dataclass
class TheoremReport:
    group: str
    eps: Any
    Q: Any
    mu: Any
    alphas: list = field(default_factory=list)
    ctx: Any = field(default=None, repr=False)

    @property
    def part1_ok(self):
        return all(a.part1_ok for a in self.alphas)

    @property
    def part2_ok(self):
        return all(a.part2_ok for a in self.alphas)

    @property
    def ok(self):
        return self.part1_ok and self.part2_ok

    def to_dict(self):
        ctx = self.ctx
        return {
            "group": self.group, "eps": float(self.eps), "Q": float(self.Q),
            "mu": _num(self.mu, ctx), "ok": self.ok,
            "part1_ok": self.part1_ok, "part2_ok": self.part2_ok,
            "alphas": [
                {
                    "alpha": a.label, "ok": a.ok, "error": a.error, "bits": a.bits,
                    "skipped_infinite": a.skipped_infinite,
                    "part1": [
                        {"r": row.r, "word": row.word, "type": row.kind,
                         "length": _num(row.length, ctx), "D": _num(row.D, ctx),
                         "point": _num(row.point, ctx, 30), "value": _num(row.value, ctx),
                         "lower": _num(row.lower, ctx), "upper": _num(row.upper, ctx),
                         "lower_ok": row.lower_ok, "upper_ok": row.upper_ok}
                        for row in a.part1
                    ],
                    "part2": [
                        {"point": _num(row.point, ctx, 30), "D": _num(row.D, ctx),
                         "value": _num(row.value, ctx), "matched": row.matched, "r": row.r}
                        for row in a.part2
                    ],
                }
                for a in self.alphas
            ],
        }

    def to_json(self):
        return json.dumps(self.to_dict(), indent=2)

    def to_text(self):
        ctx = self.ctx
        out = [f"group {self.group}  mu={_num(self.mu, ctx, 8)}  eps={float(self.eps)}  "
               f"Q={float(self.Q)}"]
        for a in self.alphas:
            out.append(f"alpha {a.label}: {'PASS' if a.ok else 'FAIL'}"
                       + (f"  error: {a.error}" if a.error else ""))
            out.append(f"  {'r':>4} {'|W|':>10} {'D':>14} {'D^2|a-z|':>10} "
                       f"{'lower':>10} {'upper':>10}  ok")
            for row in a.part1:
                out.append(f"  {row.r:>4} {_num(row.length, ctx, 6):>10} {_num(row.D, ctx, 8):>14} "
                           f"{_num(row.value, ctx, 6):>10} {_num(row.lower, ctx, 6):>10} "
                           f"{_num(row.upper, ctx, 6):>10}  {'y' if row.ok else 'n'}")
            for row in a.part2:
                tag = f"zeta_{row.r}" if row.matched else "NOT A CONVERGENT"
                out.append(f"  part2 {_num(row.point, ctx, 16)}  D={_num(row.D, ctx, 8)}  "
                           f"value={_num(row.value, ctx, 6)}  {tag}")
        out.append(f"part 1: {'PASS' if self.part1_ok else 'FAIL'}   "
                   f"part 2: {'PASS' if self.part2_ok else 'FAIL'}")
        return "\n".join(out)


def _value(P, alpha, point, D):
    """``D^2 |alpha - point|`` exactly on exact data, else at working precision."""
    if P.exact and not hasattr(alpha, "context"):
        return D * D * abs(alpha - point)
    prec = P.precision
    return prec.mpf(D) ** 2 * abs(prec.mpf(alpha) - prec.mpf(point))


def _threshold(P, x):
    """``x`` in the arithmetic of ``P``; decimal floats are read as their literal."""
    if isinstance(x, float):
        x = Fraction(str(x))
    return x if P.exact else P.precision.mpf(x)


def convergent_points(P, alpha, Q, r_limit: int = 400, tail: int = 6):
    """Records with ``|W_r| > 0`` until ``tail`` consecutive ones have ``D > Q``.

    Returns (records, stop reason).  Denominators of convergents are not
    monotone, so a run of large ones is required before stopping.
    """
    records, run = [], 0
    try:
        for rec in convergents(P, alpha, r_limit):
            if rec.length == 0:
                continue
            records.append(rec)
            run = run + 1 if rec.D > Q else 0
            if run >= tail:
                return records, "tail"
    except (PrecisionExhausted, NearBoundaryAmbiguity, SuspectedParabolicPoint) as exc:
        return records, type(exc).__name__
    return records, "r_limit"


def part2_window(alpha, radius=8):
    a = float(alpha)
    return Fraction(a - radius).limit_denominator(1 << 20), Fraction(a + radius).limit_denominator(1 << 20)


def _match(P, point, records):
    for rec in records:
        if P.same_point(point, rec.point):
            return rec.r
    return None


def good_approximation_misses(P, alpha, Q, theta, r_max: int = 400, radius=8):
    """``(value, point)`` for enumerated points with ``D <= Q`` and value below
    ``theta`` that are not convergents with ``|W_r| > 0``."""
    alpha = alpha_for(P, alpha)
    theta = _threshold(P, theta)
    records, _ = convergent_points(P, alpha, Q, r_max)
    enum = enumerate_points(P, Q, part2_window(alpha, radius), focus=(alpha, 2, theta))
    misses = []
    for e in enum.points:
        value = _value(P, alpha, e.point, e.D)
        if value < theta and _match(P, e.point, records) is None:
            misses.append((float(value), e.point))
    return sorted(misses, key=lambda t: t[0])


def _check_one(P, alpha, label, r_max, eps, Q, radius, tau10):
    rep = AlphaReport(alpha, label, bits=P.precision.bits)
    mu = P.mu
    taken = 0
    for rec in convergents(P, alpha):
        if taken >= r_max:
            break
        if rec.length == 0:
            continue
        if rec.D == 0:
            rep.skipped_infinite += 1
            continue
        taken += 1
        value = _value(P, alpha, rec.point, rec.D)
        length = rec.length
        lower = 1 / (length + 2 * mu) if P.exact else 1 / (P.precision.mpf(length) + 2 * mu)
        upper = 1 / length if P.exact else 1 / P.precision.mpf(length)
        if P.exact and not hasattr(alpha, "context"):
            lower, upper = Fraction(lower), Fraction(upper)
            lo_ok, up_ok = value >= lower, value <= upper
        else:
            lo_ok, up_ok = value >= lower - tau10, value <= upper + tau10
        rep.part1.append(Part1Row(rec.r, "".join(rec.letters), rec.word.kind.name, length,
                                  rec.D, rec.point, value, lower, upper, lo_ok, up_ok))
    if eps is not None and Q is not None:
        eps = _threshold(P, eps)
        records, _ = convergent_points(P, alpha, Q)
        enum = enumerate_points(P, Q, part2_window(alpha, radius), focus=(alpha, 2, eps))
        for e in enum.points:
            value = _value(P, alpha, e.point, e.D)
            if value < eps:
                r = _match(P, e.point, records)
                rep.part2.append(Part2Row(e.point, e.D, value, r is not None, r))
    return rep


def check_theorem(P, alphas: Sequence, r_max: int = 25, eps=None, Q=None,
                  radius=8) -> TheoremReport:
    """Run both parts for each alpha; errors are recorded per alpha.

    Part 1 takes the first ``r_max`` records with ``|W_r| > 0`` (records with
    ``zeta_r = INF`` cannot be measured and are counted separately).  Part 2 runs
    when both ``eps`` and ``Q`` are given.  Ambiguity and precision errors are
    retried at doubled precision, twice at most.
    """
    report = TheoremReport(P.name, eps if eps is not None else 0, Q if Q is not None else 0,
                           P.mu, ctx=P.precision.ctx)
    for raw in alphas:
        label = raw if isinstance(raw, str) else format_alpha(raw)
        poly = P
        for attempt in range(_MAX_DOUBLINGS + 1):
            alpha = alpha_for(poly, raw)
            tau10 = 10 * poly.precision.tolerance
            try:
                rep = _check_one(poly, alpha, label, r_max, eps, Q, radius, tau10)
                break
            except _RETRYABLE as exc:
                if poly.exact or attempt == _MAX_DOUBLINGS:
                    rep = AlphaReport(alpha, label, error=f"{type(exc).__name__}: {exc}",
                                      bits=poly.precision.bits)
                    break
                poly = poly.with_precision(poly.precision.doubled())
            except (SuspectedParabolicPoint, VertexNotResolved) as exc:
                rep = AlphaReport(alpha, label, error=f"{type(exc).__name__}: {exc}",
                                  bits=poly.precision.bits)
                break
        report.alphas.append(rep)
    return report
