"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Frozen values were produced by the calibration runs described next to them.
"""

import random
import time
from fractions import Fraction

import mpmath
from bsl.cuspidal import (
    CuspType, accelerate, anchor, cuspidal_type, geometric_length, vertex_representatives,
)
from bsl.expansion import bs_step, cylinder, expand
from bsl.harness.alpha import alpha_for, parse_alpha, random_surds
from bsl.harness.classical import check_classical_bounds, farey
from bsl.harness.theorem import check_theorem
from bsl.moebius import chordal_distance, in_arc, isometric_circle, to_disk
from bsl.parabolic import dirichlet_check, estimate_constants, enumerate_points

# Smallest D^2 |alpha - p| over non-convergent points p (D <= 150) for 700 seeded
# surds in (-3, 3): seeds 1001 (coefficients up to 9) and 1002 (up to 30).
HEXAGON_EPSILON0 = 0.2009
# max 1/(|z - z'| D D') over the points with D <= 200 in the vertex hull.
HEXAGON_S0 = 1.0341050460805126
MODULAR_S0 = 1.0
MODULAR_EPS = 0.4

SEED = 4242

RESULTS = {}


def report(name, ok, detail):
    line = f"criterion {name}: {'PASS' if ok else 'FAIL'}  {detail}"
    RESULTS[name] = line
    print(line)
    return ok


def _sample(offset, count=20):
    return random_surds(random.Random(SEED + offset), count, lo=-3, hi=3)


# ---------------------------------------------------------------------------


def _decimals():
    ctx = mpmath.mp.clone()
    ctx.dps = 90
    values = [ctx.sqrt(p) for p in (2, 3, 5, 7, 11, 13, 17, 19)]
    values += [ctx.cbrt(2), ctx.cbrt(3), ctx.e, ctx.pi, ctx.log(2), ctx.zeta(3),
               ctx.euler, ctx.catalan, ctx.phi, ctx.sqrt(ctx.pi), ctx.exp(ctx.pi), ctx.ln(10)]
    return [parse_alpha(ctx.nstr(v, 80)) for v in values]


def test_criterion_1_classical_laws():
    start = time.perf_counter()
    alphas = random_surds(random.Random(SEED), 30, n_max=200, coef=40) + _decimals()
    assert len(alphas) == 50
    failures = []
    for x in alphas:
        rep = check_classical_bounds(x, 25, q_max=10 ** 4)
        if not rep.ok or len(rep.bound_rows) != 25:
            failures.append((str(x)[:30], rep.error, rep.stray))
    elapsed = time.perf_counter() - start
    ok = not failures and elapsed < 10
    report("1", ok, f"50 alphas, 25 exact bounds each, q <= 10^4; {len(failures)} failures; "
                    f"{elapsed:.1f} s (limit 10 s)")
    assert not failures, failures
    assert elapsed < 10


def _part1(P, offset):
    start = time.perf_counter()
    rep = check_theorem(P, _sample(offset), r_max=25)
    rows = sum(len(a.part1) for a in rep.alphas)
    short = [a.label for a in rep.alphas if len(a.part1) < 25]
    errors = [(a.label, a.error) for a in rep.alphas if a.error]
    bad = [(a.label, row.r, row.word, str(row.length), float(row.value))
           for a in rep.alphas for row in a.part1 if not row.ok]
    elapsed = time.perf_counter() - start
    ok = rep.part1_ok and not short and not errors and elapsed < 60
    detail = (f"{P.name}: {rows} rows, {len(bad)} violations, {len(errors)} errors "
              f"(first: {bad[:1]}); {elapsed:.1f} s (limit 60 s)")
    return ok, detail, bad, errors


def test_criterion_2_theorem_part1_modular(modular):
    ok, detail, bad, errors = _part1(modular, 1)
    report("2 (modular)", ok, detail)
    assert not errors
    assert not bad, bad[:5]


def test_criterion_2_theorem_part1_general(hexagon):
    ok, detail, bad, errors = _part1(hexagon, 2)
    report("2 (hexagon)", ok, detail)
    assert ok, (bad[:5], errors)


def _part2(P, eps, offset):
    rep = check_theorem(P, _sample(offset), r_max=1, eps=eps, Q=300)
    misses = [(a.label, str(row.point)[:12], round(float(row.value), 4))
              for a in rep.alphas for row in a.part2 if not row.matched]
    errors = [(a.label, a.error) for a in rep.alphas if a.error]
    checked = sum(len(a.part2) for a in rep.alphas)
    return checked, misses, errors


def test_criterion_3_theorem_part2_modular(modular):
    start = time.perf_counter()
    checked, misses, errors = _part2(modular, MODULAR_EPS, 3)
    elapsed = time.perf_counter() - start
    ok = not misses and not errors and elapsed < 60
    report("3 (modular, eps=0.4)", ok,
           f"{checked} good approximations, {len(misses)} not convergents "
           f"(first: {misses[:2]}); {elapsed:.1f} s")
    assert not errors
    assert not misses, misses


def test_criterion_3_theorem_part2_general(hexagon):
    start = time.perf_counter()
    checked, misses, errors = _part2(hexagon, HEXAGON_EPSILON0, 4)
    elapsed = time.perf_counter() - start
    ok = not misses and not errors and elapsed < 60
    report("3 (hexagon, eps=eps0)", ok,
           f"eps0={HEXAGON_EPSILON0}: {checked} good approximations, {len(misses)} not "
           f"convergents, {len(errors)} errors; {elapsed:.1f} s (limit 60 s)")
    assert ok, (misses, errors)


def test_criterion_4_farey_oracle(modular):
    bad = []
    for Q in range(1, 51):
        enum = enumerate_points(modular, Q, (0, 1))
        pts = [e.point for e in enum.points]
        if set(pts) != set(farey(Q)) or len(pts) != len(farey(Q)) or not enum.complete:
            bad.append(Q)
        elif any(Fraction(e.point).denominator != e.D for e in enum.points):
            bad.append(Q)
    report("4", not bad, f"Q = 1..50 on [0, 1]; mismatches at {bad or 'none'}")
    assert not bad


def _dynamics(P, alphas, steps, letters):
    violations = []
    for x in alphas:
        word = expand(P, x, steps + letters)
        for u, v in zip(word, word[1:]):
            if v == P.hat(u):
                violations.append(("backtrack", str(x)))
        y = x
        for k in range(steps):
            if expand(P, y, letters) != word[k:k + letters]:
                violations.append(("shift", str(x), k))
                break
            y = bs_step(P, y)
        words = list(accelerate(P, word))
        joined = tuple(a for w in words for a in w.letters)
        if word[:len(joined)] != joined:
            violations.append(("faithful", str(x)))
        for w, nxt in zip(words, words[1:]):
            if cuspidal_type(P, w.letters) is not w.kind:
                violations.append(("type", str(x)))
            if cuspidal_type(P, w.letters + (nxt.letters[0],)) is not CuspType.NOT_CUSPIDAL:
                violations.append(("maximal", str(x)))
    return violations


def _nesting(P, alphas, depth):
    violations = []
    prec = P.precision
    for x in alphas:
        word = expand(P, x, depth)
        parent, last = None, None
        G = P.word_map(())
        for n in range(1, depth + 1):
            left, right = P.arc(word[n - 1])
            cyl = (G(left), G(right))
            G = G @ P.generators[word[n - 1]]
            if parent is not None:
                inside = (in_arc(cyl[0], *parent) and
                          (in_arc(cyl[1], *parent) or P.same_point(cyl[1], parent[1])))
                if not inside:
                    violations.append(("nesting", str(x), n))
            diam = cylinder(P, word[:n]).diameter(prec) if n in (1, depth) else None
            d = chordal_distance(cyl[0], cyl[1], prec)
            if diam is not None and abs(diam - d) > prec.tolerance:
                violations.append(("cylinder", str(x), n))
            if last is not None and d > last:
                violations.append(("shrinking", str(x), n))
            parent, last = cyl, d
        if not last < 1e-6:
            violations.append(("diameter", str(x), float(last)))
    return violations


def test_criterion_5_dynamics(modular, hexagon):
    alphas = random_surds(random.Random(SEED + 5), 100)
    violations = _dynamics(modular, alphas, 40, 40)
    violations += _dynamics(hexagon, [alpha_for(hexagon, x) for x in alphas[:10]], 40, 40)
    violations += _nesting(modular, alphas, 200)
    report("5", not violations,
           f"100 points x 40 shifts (modular, exact) + 10 (hexagon); nesting and "
           f"shrinking to depth 200; {len(violations)} violations")
    assert not violations, violations[:5]


def _random_words(P, rng, count, max_len):
    out = []
    for _ in range(count):
        w = []
        for _ in range(rng.randint(1, max_len)):
            choices = [a for a in P.letters if not w or a != P.hat(w[-1])]
            w.append(rng.choice(choices))
        out.append(tuple(w))
    return out


def test_criterion_6_geometry(modular, hexagon):
    rng = random.Random(SEED + 6)
    worst = {"isometric": 0, "horoball": 0, "length": 0}
    for P in (modular, hexagon):
        prec = P.precision
        ctx = prec.ctx
        tol = 10 * prec.tolerance
        words = [(a,) for a in P.letters] + _random_words(P, rng, 100, 8)
        for w in words:
            F = to_disk(P.word_map(w), prec)
            if abs(F.beta) <= tol:
                continue
            I, J = isometric_circle(F), isometric_circle(F.inverse())
            err = abs(I.radius - J.radius)
            for k in range(6):
                z = I.center + I.radius * ctx.expj(2 * ctx.pi * k / 6)
                err = max(err, J.residual(F(z)))
            worst["isometric"] = max(worst["isometric"], err / tol)

        for e in enumerate_points(P, 12).points[:40]:
            X, k = P.vertex_representation(e.form.vertex)
            N = (e.G @ X).to_precision(prec)
            a, b, c, d = N.entries
            x0 = -d / c
            top = max((((a * z + b) / (c * z + d)).imag)
                      for z in (ctx.mpc(x0 + ctx.mpf(j) / 1000, 1) for j in range(-500, 501)))
            worst["horoball"] = max(worst["horoball"], abs(top - 1 / (c * c)) / tol)

        for text in ("sqrt:2", "sqrt:3", "(1+sqrt:5)/2", "(2-sqrt:7)/3"):
            x = alpha_for(P, text)
            for w in accelerate(P, expand(P, x, 80)):
                if w.kind is CuspType.SINGLE:
                    continue
                idx = P.vertex_index(anchor(P, w.letters))
                lengths = [geometric_length(P, w.letters, representation=r)
                           for r in vertex_representatives(P, idx, 3)]
                spread = prec.mpf(max(lengths) - min(lengths))
                worst["length"] = max(worst["length"], spread / tol)
    ok = all(v <= 1 for v in worst.values())
    report("6", ok, "worst residual / 10 tau: " +
           ", ".join(f"{k} {float(v):.2e}" for k, v in worst.items()))
    assert ok


def test_criterion_7_constants(modular, hexagon):
    lines, ok = [], True
    for P, S0 in ((modular, MODULAR_S0), (hexagon, HEXAGON_S0)):
        est = estimate_constants(P, 200)
        good = est.kappa1 > 0 and est.kappa2 > 0 and est.S0 <= S0 * (1 + 1e-12)
        ok = ok and good
        lines.append(f"{P.name}: kappa1={est.kappa1:.4f} kappa2={est.kappa2:.4f} "
                     f"S0={est.S0:.6f} (frozen {S0:.6f})")
    rng = random.Random(SEED + 7)
    misses = []
    for x in random_surds(rng, 100, lo=-3, hi=3):
        Q = rng.randint(1, 1000)
        res = dirichlet_check(modular, x, Q, 1)
        if not res.ok:
            misses.append((str(x), Q))
    ok = ok and not misses
    lines.append(f"dirichlet M=1: {len(misses)} failures in 100")
    report("7", ok, "; ".join(lines))
    assert ok, misses
