"""Möbius transformations of the upper half-plane and of the unit disc.

Scalars are either exact (``int``, ``Fraction``, :class:`~bsl.exact.QuadraticIrrational`)
or mpmath floats bound to a :class:`Precision`.  A single polygon never mixes the
two kinds inside its matrices, so the formulas below are written once and work
for both.

Boundary points are extended reals: a scalar or the :data:`INF` marker.  The disc
picture is reached through :func:`phi`, which sends ``INF`` to ``1``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Any

from mpmath.ctx_mp import MPContext

from .errors import BetaZero
from .exact import QuadraticIrrational

__all__ = [
    "INF", "Precision", "get_precision", "DEFAULT_PRECISION",
    "RealMoebius", "DiskMoebius", "IsometricCircle",
    "apply", "compose", "inverse", "to_disk", "phi", "phi_inv",
    "isometric_circle", "horoball_diameter", "classify",
    "chordal_distance", "clockwise_angle", "in_arc", "is_exact",
]


class _Infinity:
    """The point at infinity of the extended real line."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "INF"

    def __reduce__(self):
        return (_Infinity, ())


INF = _Infinity()


class Precision:
    """Working precision in bits plus the tolerance used by every geometric predicate.

    The tolerance defaults to ``2**-(bits // 2)``.  Each instance owns its own
    mpmath context so precisions never leak between polygons.
    """

    def __init__(self, bits: int = 256, tolerance_exp: int | None = None):
        if bits < 53:
            raise ValueError("precision below 53 bits is not supported")
        self.bits = int(bits)
        self.tolerance_exp = int(tolerance_exp) if tolerance_exp else self.bits // 2
        self.ctx = MPContext()
        self.ctx.prec = self.bits
        self.tolerance = self.ctx.ldexp(1, -self.tolerance_exp)
        self.eps = self.ctx.ldexp(1, -self.bits)

    def __repr__(self):
        return f"Precision(bits={self.bits}, tolerance=2**-{self.tolerance_exp})"

    def __eq__(self, other):
        return (isinstance(other, Precision)
                and (self.bits, self.tolerance_exp) == (other.bits, other.tolerance_exp))

    def __hash__(self):
        return hash((self.bits, self.tolerance_exp))

    def doubled(self) -> "Precision":
        return get_precision(2 * self.bits)

    def mpf(self, x):
        """Round any supported scalar to this precision."""
        ctx = self.ctx
        if x is INF:
            return ctx.inf
        if isinstance(x, Fraction):
            return ctx.mpf(x.numerator) / x.denominator
        if isinstance(x, QuadraticIrrational):
            return x.to_mpf(ctx)
        return ctx.mpf(x)

    def mpc(self, x):
        if isinstance(x, (Fraction, QuadraticIrrational)):
            return self.ctx.mpc(self.mpf(x))
        return self.ctx.mpc(x)


@lru_cache(maxsize=None)
def get_precision(bits: int = 256, tolerance_exp: int | None = None) -> Precision:
    return Precision(bits, tolerance_exp)


DEFAULT_PRECISION = get_precision(256)


def is_exact(x) -> bool:
    return isinstance(x, (int, Fraction, QuadraticIrrational))


def _div(p, q):
    if isinstance(p, (int, Fraction)) and isinstance(q, (int, Fraction)):
        return Fraction(p) / q
    return p / q


def _neg(x):
    return -x


# ---------------------------------------------------------------------------
# half-plane model
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class RealMoebius:
    """``z -> (a z + b) / (c z + d)`` with ad - bc = 1, stored with canonical sign.

    The sign is fixed so that c > 0, or c == 0 and a > 0; ``M`` and ``-M`` act
    identically, so the canonical form makes equality of group elements
    deterministic.
    """

    a: Any
    b: Any
    c: Any
    d: Any

    def __post_init__(self):
        if self.c < 0 or (self.c == 0 and self.a < 0):
            for name in ("a", "b", "c", "d"):
                object.__setattr__(self, name, _neg(getattr(self, name)))

    @classmethod
    def identity(cls):
        return cls(1, 0, 0, 1)

    @classmethod
    def translation(cls, t):
        return cls(1, t, 0, 1)

    @property
    def entries(self):
        return (self.a, self.b, self.c, self.d)

    def det(self):
        return self.a * self.d - self.b * self.c

    def trace(self):
        return self.a + self.d

    def __call__(self, z):
        a, b, c, d = self.a, self.b, self.c, self.d
        if z is INF:
            return INF if c == 0 else _div(a, c)
        den = c * z + d
        if den == 0:
            return INF
        return _div(a * z + b, den)

    def __matmul__(self, other: "RealMoebius") -> "RealMoebius":
        a1, b1, c1, d1 = self.entries
        a2, b2, c2, d2 = other.entries
        return RealMoebius(a1 * a2 + b1 * c2, a1 * b2 + b1 * d2,
                           c1 * a2 + d1 * c2, c1 * b2 + d1 * d2)

    def inverse(self) -> "RealMoebius":
        return RealMoebius(self.d, -self.b, -self.c, self.a)

    @property
    def pole(self):
        """``M^{-1}(INF)``, the point sent to infinity."""
        return self.inverse()(INF)

    def derivative(self, x):
        den = self.c * x + self.d
        return _div(1, den * den)

    def is_exact(self) -> bool:
        return all(isinstance(e, (int, Fraction)) for e in self.entries)

    def to_precision(self, prec: Precision) -> "RealMoebius":
        return RealMoebius(*(prec.mpf(e) for e in self.entries))

    def max_abs_entry(self):
        return max(abs(e) for e in self.entries)

    def is_identity(self, tol=0) -> bool:
        return (abs(self.b) <= tol and abs(self.c) <= tol
                and abs(self.a - 1) <= tol and abs(self.d - 1) <= tol)

    def close_to(self, other: "RealMoebius", tol=0) -> bool:
        """Projective equality within ``tol`` (entrywise, both signs tried)."""
        same = all(abs(x - y) <= tol for x, y in zip(self.entries, other.entries))
        flip = all(abs(x + y) <= tol for x, y in zip(self.entries, other.entries))
        return same or flip

    def __eq__(self, other):
        if not isinstance(other, RealMoebius):
            return NotImplemented
        return self.entries == other.entries

    def __hash__(self):
        return hash(self.entries)

    def __repr__(self):
        return "RealMoebius({}, {}, {}, {})".format(*map(_short, self.entries))


def _short(x):
    if isinstance(x, (int, Fraction)):
        return str(x)
    try:
        return x.context.nstr(x, 12)
    except AttributeError:
        return repr(x)


def apply(M, z):
    return M(z)


def compose(M1, M2):
    return M1 @ M2


def inverse(M):
    return M.inverse()


def classify(M: RealMoebius, tol=0) -> str:
    """'identity', 'parabolic', 'elliptic' or 'hyperbolic' from |trace| against 2."""
    if M.is_identity(tol):
        return "identity"
    t = abs(M.trace())
    if abs(t - 2) <= tol:
        return "parabolic"
    return "elliptic" if t < 2 else "hyperbolic"


def horoball_diameter(G: RealMoebius, T=1):
    """Euclidean diameter of ``G({Im z > T})``; ``INF`` when G fixes infinity."""
    if T <= 0:
        raise ValueError("T must be positive")
    if G.c == 0:
        return INF
    return _div(1, T * G.c * G.c)


# ---------------------------------------------------------------------------
# disc model
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class IsometricCircle:
    center: Any
    radius: Any

    def residual(self, w):
        return abs(abs(w - self.center) - self.radius)

    def contains(self, w):
        """True when ``w`` lies strictly inside the circle."""
        return abs(w - self.center) < self.radius


@dataclass(frozen=True, eq=False)
class DiskMoebius:
    """``w -> (alpha w + conj(beta)) / (beta w + conj(alpha))`` with |alpha|^2 - |beta|^2 = 1."""

    alpha: Any
    beta: Any

    def det(self):
        return abs(self.alpha) ** 2 - abs(self.beta) ** 2

    def __call__(self, w):
        al, be = self.alpha, self.beta
        return (al * w + be.conjugate()) / (be * w + al.conjugate())

    def __matmul__(self, other: "DiskMoebius") -> "DiskMoebius":
        a1, b1, a2, b2 = self.alpha, self.beta, other.alpha, other.beta
        return DiskMoebius(a1 * a2 + b1.conjugate() * b2, b1 * a2 + a1.conjugate() * b2)

    def inverse(self) -> "DiskMoebius":
        return DiskMoebius(self.alpha.conjugate(), -self.beta)

    def derivative(self, w):
        den = self.beta * w + self.alpha.conjugate()
        return 1 / (den * den)

    def isometric_circle(self) -> IsometricCircle:
        return isometric_circle(self)


def isometric_circle(F: DiskMoebius) -> IsometricCircle:
    """Circle of centre ``-conj(alpha)/beta`` and radius ``1/|beta|``, where |F'| = 1."""
    if F.beta == 0:
        raise BetaZero("beta = 0: the map fixes the origin")
    return IsometricCircle(-F.alpha.conjugate() / F.beta, 1 / abs(F.beta))


def to_disk(M: RealMoebius, prec: Precision = DEFAULT_PRECISION) -> DiskMoebius:
    """Conjugate ``M`` by ``phi(z) = (z - i)/(z + i)``."""
    a, b, c, d = (prec.mpf(e) for e in M.entries)
    ctx = prec.ctx
    alpha = ctx.mpc(a + d, b - c) / 2
    beta = ctx.mpc(a - d, b + c) / 2
    return DiskMoebius(alpha, beta)


def phi(z, prec: Precision = DEFAULT_PRECISION):
    """Cayley map from the closed upper half-plane to the closed disc."""
    ctx = prec.ctx
    if z is INF:
        return ctx.mpc(1)
    z = prec.mpc(z)
    return (z - ctx.j) / (z + ctx.j)


def phi_inv(w, prec: Precision = DEFAULT_PRECISION):
    """Inverse Cayley map; points of the unit circle come back as reals (or ``INF``)."""
    ctx = prec.ctx
    w = ctx.mpc(w)
    if abs(w - 1) <= prec.eps * 4:
        return INF
    z = ctx.j * (1 + w) / (1 - w)
    if abs(abs(w) - 1) <= prec.tolerance:
        return z.real
    return z


def chordal_distance(x, y, prec: Precision = DEFAULT_PRECISION):
    """``|phi(x) - phi(y)|`` for extended reals, without leaving the real line."""
    if x is INF and y is INF:
        return prec.ctx.mpf(0)
    if x is INF:
        x, y = y, x
    xm = prec.mpf(x)
    ctx = prec.ctx
    if y is INF:
        return 2 / ctx.sqrt(1 + xm * xm)
    ym = prec.mpf(y)
    return 2 * abs(xm - ym) / ctx.sqrt((1 + xm * xm) * (1 + ym * ym))


def clockwise_angle(x, prec: Precision = DEFAULT_PRECISION):
    """The parameter t in [0, 2pi) with ``phi(x) = exp(-i t)``; decreasing in x, 0 at INF."""
    ctx = prec.ctx
    if x is INF:
        return ctx.mpf(0)
    return 2 * ctx.atan2(1, prec.mpf(x))


def _before(x, y) -> bool:
    """Strict clockwise order starting at INF: INF first, then decreasing reals."""
    if y is INF:
        return False
    if x is INF:
        return True
    return x > y


def in_arc(x, left, right) -> bool:
    """Membership of ``x`` in the right-open clockwise arc ``[left, right)``."""
    if left is right or (left is not INF and right is not INF and left == right):
        return True
    start_le_x = not _before(x, left)
    x_lt_end = _before(x, right)
    if _before(left, right):
        return start_le_x and x_lt_end
    return start_le_x or x_lt_end
