"""Labelled ideal polygons: side pairings, boundary arcs, cyclic order, cusp data.

A polygon is described by its half-plane generators ``G_a`` (one per letter,
letters listed clockwise starting from the anchor letter with ``o = 0``).  Sides,
arcs and vertices are derived: the side ``s_a`` is the perpendicular bisector of
``i`` and ``G_a(i)``, which is the image under ``phi^{-1}`` of the isometric
circle of ``F_{a^}``, and ``[a]`` is the boundary arc cut off by ``s_a`` on the
side away from ``i``.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from math import isqrt
from pathlib import Path
from typing import Any, Sequence

from .errors import ParseError, ValidationError, VertexNotResolved
from .exact import surd
from .moebius import (
    DEFAULT_PRECISION, INF, Precision, RealMoebius, chordal_distance, classify,
    clockwise_angle, get_precision, in_arc, is_exact, phi, to_disk,
)

__all__ = [
    "CuspDatum", "Check", "ValidationReport", "LabelledPolygon", "validate",
    "preset_modular", "load_group", "save_group", "group_from_dict", "group_to_dict",
]


@dataclass(frozen=True)
class CuspDatum:
    """Representative ``z_k = A_k(INF)`` of a cusp of the ambient lattice.

    ``mu`` is the translation length of the primitive parabolic of
    ``A_k^{-1} Gamma A_k`` fixing infinity; the horoball is ``A_k({Im z > 1})``.
    """

    index: int
    A: RealMoebius
    mu: Any

    @property
    def point(self):
        return self.A(INF)

    def parabolic(self) -> RealMoebius:
        return self.A @ RealMoebius.translation(self.mu) @ self.A.inverse()


@dataclass
class Check:
    name: str
    passed: bool
    residual: Any = 0
    detail: str = ""
    required: bool = True


@dataclass
class ValidationReport:
    checks: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks if c.required)

    def failures(self):
        return [c for c in self.checks if c.required and not c.passed]

    def add(self, name, passed, residual=0, detail="", required=True):
        self.checks.append(Check(name, bool(passed), residual, detail, required))

    def to_dict(self):
        return {
            "ok": self.ok,
            "checks": [
                {"name": c.name, "passed": c.passed, "required": c.required,
                 "residual": _fmt(c.residual), "detail": c.detail}
                for c in self.checks
            ],
        }

    def __str__(self):
        lines = []
        for c in self.checks:
            flag = "PASS" if c.passed else ("FAIL" if c.required else "WARN")
            lines.append(f"{flag:4}  {c.name:28} residual={_fmt(c.residual)}  {c.detail}")
        lines.append("overall: " + ("PASS" if self.ok else "FAIL"))
        return "\n".join(lines)


def _fmt(x):
    if isinstance(x, (int, Fraction)):
        return str(x)
    try:
        return x.context.nstr(x, 6)
    except AttributeError:
        return str(x)


def _bisector_endpoints(G: RealMoebius, prec: Precision, exact: bool):
    """Boundary endpoints of the perpendicular bisector of ``i`` and ``G(i)``."""
    a, b, c, d = G.entries
    n2 = c * c + d * d
    if exact:
        u, v = Fraction(a * c + b * d) / n2, Fraction(G.det()) / n2
    else:
        a, b, c, d = (prec.mpf(e) for e in (a, b, c, d))
        n2 = c * c + d * d
        u, v = (a * c + b * d) / n2, (a * d - b * c) / n2
    # horocyclic condition v (x^2 + 1) = (x - u)^2 + v^2
    qa, qb, qc = v - 1, 2 * u, v - u * u - v * v
    vertical = qa == 0 if exact else abs(qa) <= prec.tolerance
    if vertical:
        return INF, -qc / qb
    disc = qb * qb - 4 * qa * qc
    if exact:
        p, q = disc.numerator, disc.denominator
        base, spread = -qb / (2 * qa), Fraction(1) / (2 * qa * q)
        return surd(base, -spread, p * q), surd(base, spread, p * q)
    root = prec.ctx.sqrt(disc)
    return (-qb - root) / (2 * qa), (-qb + root) / (2 * qa)


def _arc_from_side(e1, e2):
    """Clockwise (L, R) of the arc cut off by the geodesic e1-e2 away from ``i``."""
    if e2 is INF:
        e1, e2 = e2, e1
    if e1 is INF:
        return (INF, e2) if e2 > 0 else (e2, INF)
    lo, hi = (e1, e2) if e1 < e2 else (e2, e1)
    if lo * hi + 1 < 0:  # i lies under the semicircle
        return lo, hi
    return hi, lo


class LabelledPolygon:
    """Ideal polygon with labelled side pairings, plus ambient-lattice cusp data.

    ``letters`` is the clockwise order of the arcs; ``o(letters[i]) = i``.
    """

    def __init__(self, name: str, letters: Sequence[str], inverse: dict,
                 generators: dict, cusps: Sequence[CuspDatum],
                 precision: Precision = DEFAULT_PRECISION,
                 ambient_generators: Sequence[RealMoebius] = (),
                 exact: bool | None = None):
        self.name = name
        self.letters = tuple(letters)
        self.inverse_of = dict(inverse)
        self.precision = precision
        if exact is None:
            exact = all(G.is_exact() for G in generators.values())
        self.exact = exact
        if not exact:
            generators = {k: G.to_precision(precision) for k, G in generators.items()}
            cusps = [CuspDatum(c.index, c.A.to_precision(precision), precision.mpf(c.mu))
                     for c in cusps]
            ambient_generators = [M.to_precision(precision) for M in ambient_generators]
        self.generators = dict(generators)
        self.cusps = tuple(cusps)
        self.ambient_generators = tuple(ambient_generators)
        self.d = len(self.letters) // 2
        self._order = {a: i for i, a in enumerate(self.letters)}
        self._disk = None
        self._vertex_reps = {}
        self._min_norm = None

        self.raw_sides = {}
        self.raw_arcs = {}
        for a in self.letters:
            e1, e2 = _bisector_endpoints(self.generators[a], precision, exact)
            self.raw_sides[a] = (e1, e2)
            self.raw_arcs[a] = _arc_from_side(e1, e2)
        self._snap_vertices()

    # ---- derived geometry -----------------------------------------------
    def _snap_vertices(self):
        """Share endpoints between clockwise-adjacent arcs when they agree within tolerance."""
        n = len(self.letters)
        self.cyclic_residuals = []
        for i, a in enumerate(self.letters):
            nxt = self.letters[(i + 1) % n]
            self.cyclic_residuals.append(self.distance(self.raw_arcs[a][1], self.raw_arcs[nxt][0]))
        self.snapped = all(r <= self.tolerance for r in self.cyclic_residuals)
        if self.snapped:
            verts = [self.raw_arcs[a][0] for a in self.letters]
            self.arcs = {a: (verts[i], verts[(i + 1) % n]) for i, a in enumerate(self.letters)}
        else:
            self.arcs = dict(self.raw_arcs)
        self.vertices = tuple(self.arcs[a][0] for a in self.letters)

    @property
    def tolerance(self):
        return 0 if self.exact else self.precision.tolerance

    def distance(self, x, y):
        """Chordal distance, exactly zero for equal exact points."""
        if x is y or (self.exact and x is not INF and y is not INF and x == y):
            return 0
        return chordal_distance(x, y, self.precision)

    def same_point(self, x, y) -> bool:
        if self.exact:
            if x is INF or y is INF:
                return x is y
            return x == y
        return self.distance(x, y) <= self.precision.tolerance

    def hat(self, a: str) -> str:
        return self.inverse_of[a]

    def o(self, a: str) -> int:
        return self._order[a]

    def letter_at(self, index: int) -> str:
        return self.letters[index % len(self.letters)]

    def arc(self, a: str):
        """(xi^L, xi^R) of the right-open arc [a]."""
        return self.arcs[a]

    def side(self, a: str):
        return self.arcs[a]

    def in_arc(self, a: str, x) -> bool:
        left, right = self.arcs[a]
        return in_arc(x, left, right)

    def letter_of(self, x) -> str:
        for a in self.letters:
            if self.in_arc(a, x):
                return a
        raise AssertionError(f"{x!r} is not covered by any arc")

    def vertex_index(self, x):
        for i, v in enumerate(self.vertices):
            if self.same_point(x, v):
                return i
        return None

    def nearest_vertex_distance(self, x):
        return min(self.distance(x, v) for v in self.vertices)

    def word_map(self, word: Sequence[str]) -> RealMoebius:
        M = RealMoebius.identity()
        for a in word:
            M = M @ self.generators[a]
        return M

    @property
    def mu(self):
        return max(c.mu for c in self.cusps)

    def finite_vertex_hull(self):
        finite = [v for v in self.vertices if v is not INF]
        return min(finite), max(finite)

    def disk_generators(self):
        if self._disk is None:
            self._disk = {a: to_disk(G, self.precision) for a, G in self.generators.items()}
        return self._disk

    def to_float(self, x):
        return self.precision.mpf(x)

    # ---- vertices as cusp images ----------------------------------------
    def vertex_representation(self, index: int, max_depth: int = 6):
        """``(X, k)`` with ``X = B A_k`` for some B in the lattice and ``X(INF)`` the vertex.

        Found by breadth-first search over words in the pairings and the stored
        ambient generators; the result is cached per vertex.
        """
        if index in self._vertex_reps:
            return self._vertex_reps[index]
        target = self.vertices[index]
        gens = [self.generators[a] for a in self.letters]
        for M in self.ambient_generators:
            gens += [M, M.inverse()]
        seen = set()
        frontier = deque([(RealMoebius.identity(), 0)])
        while frontier:
            B, depth = frontier.popleft()
            for cusp in self.cusps:
                X = B @ cusp.A
                if self.same_point(X(INF), target):
                    return self._vertex_reps.setdefault(index, (X, cusp.index))
            if depth == max_depth:
                continue
            for g in gens:
                nb = B @ g
                key = self._matrix_key(nb)
                if key not in seen:
                    seen.add(key)
                    frontier.append((nb, depth + 1))
        raise VertexNotResolved(
            f"vertex {index} is not B*A_k(INF) for any word of length <= {max_depth}")

    def _matrix_key(self, M):
        if self.exact:
            return M.entries
        ctx = self.precision.ctx
        return tuple(ctx.nstr(e, 25) for e in M.entries)

    def cusp(self, k: int) -> CuspDatum:
        for c in self.cusps:
            if c.index == k:
                return c
        raise KeyError(k)

    def vertex_vector(self, index: int):
        """First column of ``B A_k`` for the vertex: the cusp vector (a, c)."""
        X, _ = self.vertex_representation(index)
        return X.a, X.c

    def min_cusp_vector_norm(self, depth: int = 3, safety=Fraction(1, 2)):
        """Lower bound for ``|| G A_k e_1 ||`` over the lattice, for pruning.

        The minimum is searched over reduced forms of length at most ``depth``
        and multiplied by ``safety``.
        """
        if self._min_norm is not None:
            return self._min_norm
        prec = self.precision
        best = None
        words = [()]
        frontier = [()]
        for _ in range(depth):
            nxt = []
            for w in frontier:
                for b in self.letters:
                    if w and b == self.hat(w[-1]):
                        continue
                    nxt.append(w + (b,))
            words += nxt
            frontier = nxt
        for w in words:
            N = self.word_map(w)
            excluded = set(self.arc_vertex_indices(self.hat(w[-1]))) if w else set()
            for i in range(len(self.vertices)):
                if i in excluded:
                    continue
                va, vc = self.vertex_vector(i)
                x, y = N.a * va + N.b * vc, N.c * va + N.d * vc
                norm = prec.ctx.sqrt(prec.mpf(x * x + y * y))
                best = norm if best is None else min(best, norm)
        self._min_norm = best * prec.mpf(safety)
        return self._min_norm

    def arc_vertex_indices(self, a: str):
        i = self.o(a)
        return i, (i + 1) % len(self.letters)

    def with_precision(self, precision: Precision) -> "LabelledPolygon":
        """The same polygon rebuilt at another precision (from the file data when known)."""
        if precision == self.precision:
            return self
        source = getattr(self, "_source", None)
        if source is not None:
            return group_from_dict(source, precision)
        return LabelledPolygon(self.name, self.letters, self.inverse_of, self.generators,
                               self.cusps, precision, self.ambient_generators, self.exact)

    def __repr__(self):
        return f"LabelledPolygon({self.name!r}, d={self.d}, exact={self.exact}, {self.precision})"


# ---------------------------------------------------------------------------
# validation
# ---------------------------------------------------------------------------

def _cycle_word(P: LabelledPolygon, a: str, step: int):
    """Letters following o(a_{k+1}) = o(hat a_k) + step from ``a`` until ``a`` returns."""
    word = [a]
    for _ in range(2 * len(P.letters) + 2):
        nxt = P.letter_at(P.o(P.hat(word[-1])) + step)
        if nxt == a:
            return word
        word.append(nxt)
    return None


def validate(P: LabelledPolygon) -> ValidationReport:
    """Check every structural invariant of the labelled polygon; never raises."""
    rep = ValidationReport()
    prec = P.precision
    ctx = prec.ctx
    tol = prec.tolerance
    letters = P.letters

    bad = [a for a in letters if P.hat(a) == a or P.hat(P.hat(a)) != a]
    rep.add("involution", not bad and len(letters) % 2 == 0 and len(letters) >= 4,
            detail=f"bad letters {bad}" if bad else f"{len(letters)} letters")

    worst = max(abs(prec.mpf(P.generators[a].det()) - 1) for a in letters)
    disk = P.disk_generators()
    worst_disk = max(abs(F.det() - 1) for F in disk.values())
    rep.add("determinant", worst <= tol and worst_disk <= tol, max(worst, worst_disk))

    worst = 0
    for a in letters:
        prod = (P.generators[a] @ P.generators[P.hat(a)]).to_precision(prec)
        worst = max(worst, *(abs(x - y) for x, y in zip(prod.entries, (1, 0, 0, 1))))
    rep.add("inverse_pairs", worst <= tol, worst)

    ok, worst, note = True, ctx.inf, ""
    for a in letters:
        F = disk[a]
        if F.beta == 0:
            ok, note = False, f"beta=0 for {a}"
            continue
        circ = F.isometric_circle()
        margin = abs(circ.center) - circ.radius
        worst = min(worst, margin)
        ok = ok and margin > tol
    rep.add("origin_outside_isometric_circles", ok, worst, note)

    worst, ok = 0, True
    for a in letters:
        circ = disk[P.hat(a)].isometric_circle()
        left, right = P.raw_arcs[a]
        for e in (left, right):
            worst = max(worst, circ.residual(phi(e, prec)))
        t0, t1 = clockwise_angle(left, prec), clockwise_angle(right, prec)
        span = (t1 - t0) % (2 * ctx.pi)
        mid = ctx.expj(-(t0 + span / 2))
        ok = ok and circ.contains(mid)
    rep.add("arcs_are_isometric_discs", ok and worst <= tol, worst,
            "[a] = U_{F_hat a} on the circle")

    worst = 0
    for a in letters:
        G = P.generators[a]
        images = [G(e) for e in P.raw_arcs[P.hat(a)]]
        targets = list(P.raw_arcs[a])
        r = min(max(P.distance(images[0], targets[0]), P.distance(images[1], targets[1])),
                max(P.distance(images[0], targets[1]), P.distance(images[1], targets[0])))
        worst = max(worst, r)
    rep.add("pairing", worst <= tol, worst, "F_a(s_hat a) = s_a")

    worst = max(P.cyclic_residuals)
    rep.add("cyclic_order", P.snapped, worst, "xi^R_a = xi^L_b whenever o(b) = o(a) + 1")

    total = sum(((clockwise_angle(P.arcs[a][1], prec) - clockwise_angle(P.arcs[a][0], prec))
                 % (2 * ctx.pi)) for a in letters)
    residual = abs(total - 2 * ctx.pi)
    distinct = len({_vertex_key(P, v) for v in P.vertices}) == len(letters)
    rep.add("partition", residual <= 10 * tol and distinct and P.snapped, residual,
            "arc lengths sum to 2pi, vertices distinct")

    on_circle = max(abs(abs(phi(v, prec)) - 1) for v in P.vertices)
    rep.add("ideal_vertices", on_circle <= tol, on_circle)

    ok, detail = True, ""
    if P.snapped:
        for a in letters:
            G = P.generators[a]
            comp = P.arcs[P.hat(a)]
            samples = _complement_samples(P, comp)
            for x in samples:
                y = G(x)
                near_end = min(P.distance(y, e) for e in P.arcs[a]) <= tol
                if not (P.in_arc(a, y) or (not P.exact and near_end)):
                    ok, detail = False, f"F_{a} sends {x!r} outside [{a}]"
    else:
        ok, detail = False, "arcs not snapped"
    rep.add("boundary_action", ok, detail=detail or "F_a(circle minus [hat a]) = [a]")

    ok, worst, detail = True, 0, ""
    for a in letters:
        word = _cycle_word(P, a, -1)
        if word is None:
            ok, detail = False, f"no cycle from {a}"
            continue
        M = P.word_map(word)
        kind = classify(M.to_precision(prec), tol * 2 ** 8)
        fixed = M(P.arcs[a][1])
        res = P.distance(fixed, P.arcs[a][1])
        worst = max(worst, res, abs(abs(prec.mpf(M.trace())) - 2))
        if kind != "parabolic" or res > tol:
            ok, detail = False, f"cycle {''.join(word)} is {kind}"
    rep.add("vertex_cycles_parabolic", ok, worst, detail)

    ok = all(abs(prec.mpf(c.A.det()) - 1) <= tol and c.mu > 0 for c in P.cusps) and P.cusps
    rep.add("cusp_data", bool(ok), detail=f"{len(P.cusps)} cusps")

    ok, detail, worst = True, "", 0
    for c in P.cusps:
        i = P.vertex_index(c.point)
        if i is None:
            continue
        a = P.letters[(i - 1) % len(P.letters)]
        word = _cycle_word(P, a, -1)
        if word is None:
            continue
        Pk = (c.A.inverse() @ P.word_map(word) @ c.A).to_precision(prec)
        shift = Pk.b / Pk.a
        ratio = abs(shift) / prec.mpf(c.mu)
        m = ctx.nint(ratio)
        res = max(abs(ratio - m), abs(Pk.c), abs(abs(Pk.a) - 1))
        worst = max(worst, res)
        if m < 1 or res > tol * 2 ** 8:
            ok, detail = False, f"cusp {c.index}: translation ratio {ctx.nstr(ratio, 8)}"
    rep.add("cusp_widths", ok, worst, detail or "vertex-cycle translations are multiples of mu_k")

    rep.add("infinity_is_vertex", any(v is INF for v in P.vertices), required=False,
            detail="bounded cylinders away from INF")
    return rep


def _vertex_key(P, v):
    if v is INF:
        return "inf"
    return str(v) if P.exact else P.precision.ctx.nstr(v, 20)


def _complement_samples(P, arc):
    """A few points of the closed complement of the right-open arc."""
    left, right = arc
    out = [right]
    for v in P.vertices:
        if not in_arc(v, left, right):
            out.append(v)
    if P.exact:
        return out
    prec = P.precision
    ctx = prec.ctx
    t0, t1 = clockwise_angle(right, prec), clockwise_angle(left, prec)
    span = (t1 - t0) % (2 * ctx.pi)
    from .moebius import phi_inv
    for j in range(1, 8):
        x = phi_inv(ctx.expj(-(t0 + span * j / 8)), prec)
        if x is not INF:
            out.append(x)
    return out


# ---------------------------------------------------------------------------
# presets and files
# ---------------------------------------------------------------------------

def preset_modular(precision: Precision | None = None) -> LabelledPolygon:
    """PSL(2,Z) as ambient lattice over its free subgroup Gamma(2).

    Pairings ``z -> z + 2`` and ``z -> z / (2z + 1)``; the ideal quadrilateral has
    vertices -1, 0, 1 and infinity, and all arithmetic is exact.
    """
    gens = {
        "a": RealMoebius(1, 2, 0, 1),
        "b": RealMoebius(1, 0, 2, 1),
        "B": RealMoebius(1, 0, -2, 1),
        "A": RealMoebius(1, -2, 0, 1),
    }
    inverse = {"a": "A", "A": "a", "b": "B", "B": "b"}
    cusps = [CuspDatum(1, RealMoebius.identity(), 1)]
    ambient = [RealMoebius(0, -1, 1, 0), RealMoebius(1, 1, 0, 1)]
    return LabelledPolygon("modular", ("a", "b", "B", "A"), inverse, gens, cusps,
                           precision or DEFAULT_PRECISION, ambient, exact=True)


def _parse_number(text, where):
    if isinstance(text, bool) or not isinstance(text, (str, int)):
        raise ParseError(f"expected a decimal string, got {text!r}", field=where)
    try:
        return Fraction(str(text).strip())
    except (ValueError, ZeroDivisionError):
        raise ParseError(f"not a decimal number: {text!r}", field=where) from None


def _parse_matrix(entries, where):
    if not isinstance(entries, list) or len(entries) != 4:
        raise ParseError("expected four entries [a, b, c, d]", field=where)
    return [_parse_number(e, f"{where}[{i}]") for i, e in enumerate(entries)]


def _as_exact(x: Fraction):
    return x.numerator if x.denominator == 1 else x


def group_from_dict(data: dict, precision: Precision | None = None) -> LabelledPolygon:
    """Build (without validating) a polygon from the parsed group-file object."""
    if not isinstance(data, dict):
        raise ParseError("top level must be an object")
    for key in ("letters", "cusps"):
        if key not in data:
            raise ParseError("missing required field", field=key)
    bits = data.get("precision_bits", 256)
    if not isinstance(bits, int) or bits < 53:
        raise ParseError("precision_bits must be an integer >= 53", field="precision_bits")
    prec = precision or get_precision(bits)

    raw_letters = data["letters"]
    if not isinstance(raw_letters, list) or not raw_letters:
        raise ParseError("letters must be a non-empty list", field="letters")
    labels, inverse, matrices = [], {}, {}
    for i, entry in enumerate(raw_letters):
        where = f"letters[{i}]"
        if not isinstance(entry, dict):
            raise ParseError("letter entry must be an object", field=where)
        for key in ("label", "inverse", "generator_halfplane"):
            if key not in entry:
                raise ParseError("missing field", field=f"{where}.{key}")
        label = str(entry["label"])
        if label in inverse:
            raise ParseError(f"duplicate label {label!r}", field=f"{where}.label")
        labels.append(label)
        inverse[label] = str(entry["inverse"])
        matrices[label] = _parse_matrix(entry["generator_halfplane"], f"{where}.generator_halfplane")
    for i, label in enumerate(labels):
        inv = inverse[label]
        where = f"letters[{i}].inverse"
        if inv not in inverse:
            raise ParseError(f"inverse {inv!r} is not a listed label", field=where)
        if inv == label or inverse[inv] != label:
            raise ParseError(f"inverse map is not a fixed-point-free involution at {label!r}",
                             field=where)
    d = data.get("d", len(labels) // 2)
    if not isinstance(d, int) or 2 * d != len(labels):
        raise ParseError(f"d={d!r} does not match {len(labels)} letters", field="d")

    cusps_raw = data["cusps"]
    if not isinstance(cusps_raw, list) or not cusps_raw:
        raise ParseError("cusps must be a non-empty list", field="cusps")
    cusp_entries = []
    for k, entry in enumerate(cusps_raw):
        where = f"cusps[{k}]"
        if not isinstance(entry, dict) or "A" not in entry or "mu" not in entry:
            raise ParseError("cusp needs fields A and mu", field=where)
        cusp_entries.append((_parse_matrix(entry["A"], f"{where}.A"),
                             _parse_number(entry["mu"], f"{where}.mu")))
    ambient_raw = data.get("ambient_generators", [])
    if not isinstance(ambient_raw, list):
        raise ParseError("ambient_generators must be a list", field="ambient_generators")
    ambient_entries = [_parse_matrix(m, f"ambient_generators[{i}]")
                       for i, m in enumerate(ambient_raw)]

    mode = data.get("arithmetic", "auto")
    if mode not in ("auto", "exact", "mp"):
        raise ParseError("arithmetic must be 'auto', 'exact' or 'mp'", field="arithmetic")
    everything = [x for m in matrices.values() for x in m]
    everything += [x for m, _ in cusp_entries for x in m] + [x for m in ambient_entries for x in m]
    integral = all(x.denominator == 1 for x in everything)
    exact = integral if mode == "auto" else mode == "exact"

    def build(entries):
        if exact:
            return RealMoebius(*(_as_exact(x) for x in entries))
        return RealMoebius(*(prec.mpf(x) for x in entries))

    gens = {label: build(m) for label, m in matrices.items()}
    cusps = [CuspDatum(k + 1, build(m), _as_exact(mu) if exact else prec.mpf(mu))
             for k, (m, mu) in enumerate(cusp_entries)]
    ambient = [build(m) for m in ambient_entries]
    P = LabelledPolygon(str(data.get("name", "group")), labels, inverse, gens, cusps,
                        prec, ambient, exact=exact)
    P._source = data
    return P


def load_group(path, precision: Precision | None = None) -> LabelledPolygon:
    """Read, build and validate a group file; invalid polygons raise ValidationError."""
    text = Path(path).read_text(encoding="utf-8")
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, line=exc.lineno) from None
    try:
        P = group_from_dict(data, precision)
    except ParseError as exc:
        if exc.line is None and exc.field:
            exc.line = _line_of(text, exc.field)
            exc.args = (f"[line {exc.line}, field {exc.field!r}] " + str(exc).split("] ", 1)[-1],)
        raise
    report = validate(P)
    if not report.ok:
        raise ValidationError(report)
    return P


def _line_of(text, field_path):
    """Best-effort line of the innermost key named in ``field_path``."""
    key = field_path.split(".")[-1].split("[")[0]
    for n, line in enumerate(text.splitlines(), 1):
        if f'"{key}"' in line:
            return n
    return None


def _num_str(x, P: LabelledPolygon):
    if isinstance(x, (int, Fraction)):
        if isinstance(x, Fraction) and x.denominator != 1:
            return f"{x.numerator}/{x.denominator}"
        return str(int(x))
    digits = int(P.precision.bits * 0.30103) + 8
    return P.precision.ctx.nstr(x, digits, strip_zeros=False, min_fixed=-1, max_fixed=1)


def group_to_dict(P: LabelledPolygon) -> dict:
    return {
        "name": P.name,
        "d": P.d,
        "precision_bits": P.precision.bits,
        "arithmetic": "exact" if P.exact else "mp",
        "letters": [
            {"label": a, "inverse": P.hat(a),
             "generator_halfplane": [_num_str(e, P) for e in P.generators[a].entries]}
            for a in P.letters
        ],
        "cusps": [{"A": [_num_str(e, P) for e in c.A.entries], "mu": _num_str(c.mu, P)}
                  for c in P.cusps],
        "ambient_generators": [[_num_str(e, P) for e in M.entries]
                               for M in P.ambient_generators],
    }


def save_group(P: LabelledPolygon, path) -> None:
    Path(path).write_text(json.dumps(group_to_dict(P), indent=2) + "\n", encoding="utf-8")
