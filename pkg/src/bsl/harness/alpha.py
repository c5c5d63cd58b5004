"""Reproducible irrational inputs.

Accepted forms: decimal strings (``"1.4142"``, kept as exact rationals), ``"sqrt:N"``
and ``"(p+q*sqrt:N)/r"`` (signs and the division optional).
"""

from __future__ import annotations

import re
from fractions import Fraction

from ..exact import QuadraticIrrational, surd
from ..moebius import Precision

__all__ = ["parse_alpha", "alpha_for", "format_alpha", "random_surds"]

_SURD = re.compile(
    r"""^\(?\s*(?:(?P<p>[+-]?\d+)\s*(?P<sign>[+-])\s*)?
        (?:(?P<q>\d+)\s*\*\s*)?sqrt:(?P<n>\d+)\s*\)?
        \s*(?:/\s*(?P<r>\d+))?$""",
    re.VERBOSE,
)


def parse_alpha(text: str):
    """Exact value of an alpha string: a Fraction or a QuadraticIrrational."""
    text = text.strip()
    m = _SURD.match(text.replace(" ", ""))
    if m:
        p = int(m["p"]) if m["p"] else 0
        q = int(m["q"]) if m["q"] else 1
        if m["sign"] == "-":
            q = -q
        r = int(m["r"]) if m["r"] else 1
        if r == 0:
            raise ValueError("zero denominator")
        if text.startswith("-") and not m["p"]:
            q = -q
        return surd(Fraction(p, r), Fraction(q, r), int(m["n"]))
    if text.lstrip("+-").startswith("sqrt:"):
        sign = -1 if text.startswith("-") else 1
        return surd(0, sign, int(text.lstrip("+-")[5:]))
    try:
        return Fraction(text)
    except ValueError:
        raise ValueError(f"cannot parse alpha {text!r}") from None


def alpha_for(P, value):
    """The value in the arithmetic of polygon ``P``: exact values stay exact on
    exact polygons and are rounded to the working precision otherwise."""
    if isinstance(value, str):
        value = parse_alpha(value)
    if P.exact and isinstance(value, (int, Fraction, QuadraticIrrational)):
        return value
    return P.precision.mpf(value)


def format_alpha(value) -> str:
    if isinstance(value, QuadraticIrrational):
        a, b = value.a, value.b
        den = a.denominator * b.denominator // _gcd(a.denominator, b.denominator)
        p, q = a * den, b * den
        sign = "+" if q >= 0 else "-"
        return f"({p}{sign}{abs(q)}*sqrt:{value.n})/{den}"
    if isinstance(value, Fraction):
        return str(value)
    return str(value)


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a


def random_surds(rng, count: int, n_max: int = 60, coef: int = 9, lo=None, hi=None):
    """``count`` distinct irrational surds ``(p + q sqrt n)/r`` with small coefficients,
    optionally restricted to ``lo < value < hi``."""
    out, seen = [], set()
    while len(out) < count:
        n = rng.randrange(2, n_max)
        p = rng.randrange(-coef, coef + 1)
        q = rng.choice([x for x in range(-coef, coef + 1) if x])
        r = rng.randrange(1, coef + 1)
        x = surd(Fraction(p, r), Fraction(q, r), n)
        if not isinstance(x, QuadraticIrrational) or x in seen:
            continue
        if (lo is not None and x <= lo) or (hi is not None and x >= hi):
            continue
        seen.add(x)
        out.append(x)
    return out
