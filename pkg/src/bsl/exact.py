"""Exact arithmetic in real quadratic fields.

Quadratic irrationals are the reproducible irrational inputs of the package:
the modular preset runs its dynamics on them with integer matrices, so no
rounding ever enters the classical checks.
"""

from fractions import Fraction
from math import isqrt
from numbers import Rational

import mpmath


def _frac(x):
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, Rational):
        return Fraction(x.numerator, x.denominator)
    raise TypeError(f"not a rational: {x!r}")


def _sign(x):
    return (x > 0) - (x < 0)


def is_square(n: int) -> bool:
    return n >= 0 and isqrt(n) ** 2 == n


def surd(a, b, n):
    """``a + b*sqrt(n)`` as a :class:`QuadraticIrrational`, or a Fraction when rational."""
    a, b = _frac(a), _frac(b)
    if b == 0:
        return a
    if is_square(n):
        return a + b * isqrt(n)
    return QuadraticIrrational(a, b, n)


class QuadraticIrrational:
    """The real number ``a + b*sqrt(n)`` with rational a, b and non-square n > 1."""

    __slots__ = ("a", "b", "n")

    def __init__(self, a, b, n: int):
        if n <= 1 or is_square(n):
            raise ValueError(f"sqrt({n}) is rational")
        self.a = _frac(a)
        self.b = _frac(b)
        self.n = int(n)

    # ---- coercion -------------------------------------------------------
    def _parts(self, other):
        if isinstance(other, QuadraticIrrational):
            if other.n != self.n:
                raise ValueError(f"mixed fields sqrt({self.n}) and sqrt({other.n})")
            return other.a, other.b
        if isinstance(other, (int, Fraction)):
            return _frac(other), Fraction(0)
        return None

    # ---- arithmetic -----------------------------------------------------
    def __add__(self, other):
        p = self._parts(other)
        if p is None:
            return NotImplemented
        return surd(self.a + p[0], self.b + p[1], self.n)

    __radd__ = __add__

    def __neg__(self):
        return QuadraticIrrational(-self.a, -self.b, self.n)

    def __pos__(self):
        return self

    def __sub__(self, other):
        p = self._parts(other)
        if p is None:
            return NotImplemented
        return surd(self.a - p[0], self.b - p[1], self.n)

    def __rsub__(self, other):
        p = self._parts(other)
        if p is None:
            return NotImplemented
        return surd(p[0] - self.a, p[1] - self.b, self.n)

    def __mul__(self, other):
        p = self._parts(other)
        if p is None:
            return NotImplemented
        c, d = p
        return surd(self.a * c + self.b * d * self.n, self.a * d + self.b * c, self.n)

    __rmul__ = __mul__

    def conjugate(self):
        return QuadraticIrrational(self.a, -self.b, self.n)

    def norm(self) -> Fraction:
        return self.a * self.a - self.b * self.b * self.n

    def reciprocal(self):
        nm = self.norm()
        return QuadraticIrrational(self.a / nm, -self.b / nm, self.n)

    def __truediv__(self, other):
        if isinstance(other, QuadraticIrrational):
            return self * other.reciprocal()
        p = self._parts(other)
        if p is None:
            return NotImplemented
        return QuadraticIrrational(self.a / p[0], self.b / p[0], self.n)

    def __rtruediv__(self, other):
        p = self._parts(other)
        if p is None:
            return NotImplemented
        return self.reciprocal() * p[0]

    def __abs__(self):
        return -self if self.sign() < 0 else self

    # ---- order ----------------------------------------------------------
    def sign(self) -> int:
        sa, sb = _sign(self.a), _sign(self.b)
        if sa == 0 or sa == sb:
            return sb
        # opposite signs; never equal since sqrt(n) is irrational
        return sa if self.a * self.a > self.b * self.b * self.n else sb

    def _cmp(self, other):
        diff = self - other
        if diff is NotImplemented:
            return NotImplemented
        return diff.sign() if isinstance(diff, QuadraticIrrational) else _sign(diff)

    def __lt__(self, other):
        c = self._cmp(other)
        return c if c is NotImplemented else c < 0

    def __le__(self, other):
        c = self._cmp(other)
        return c if c is NotImplemented else c <= 0

    def __gt__(self, other):
        c = self._cmp(other)
        return c if c is NotImplemented else c > 0

    def __ge__(self, other):
        c = self._cmp(other)
        return c if c is NotImplemented else c >= 0

    def __eq__(self, other):
        if isinstance(other, QuadraticIrrational):
            return (self.a, self.b, self.n) == (other.a, other.b, other.n)
        return False

    def __hash__(self):
        return hash((self.a, self.b, self.n))

    def __floor__(self) -> int:
        scale = 1 << 64
        root = Fraction(isqrt(self.n * scale * scale), scale)
        k = int((self.a + self.b * root) // 1)
        while self < k:
            k -= 1
        while self >= k + 1:
            k += 1
        return k

    def __float__(self):
        # the two parts can nearly cancel, so work with enough bits to cover them
        size = max(abs(x.numerator).bit_length() + x.denominator.bit_length()
                   for x in (self.a, self.b))
        ctx = mpmath.mp.clone()
        ctx.prec = 2 * size + 80
        return float(self.to_mpf(ctx))

    def to_mpf(self, ctx):
        return (ctx.mpf(self.a.numerator) / self.a.denominator
                + ctx.mpf(self.b.numerator) / self.b.denominator * ctx.sqrt(self.n))

    def __repr__(self):
        return f"QuadraticIrrational({self.a}, {self.b}, {self.n})"

    def __str__(self):
        return f"{self.a} + {self.b}*sqrt({self.n})"
