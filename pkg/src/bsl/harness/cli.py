"""Command line entry point ``bsl``.

Every command exits with status 0 exactly when what it checks holds; plain
computations (expand, enumerate, render, ...) exit 0 unless they raise.
"""

from __future__ import annotations

import itertools
import json
import sys
from fractions import Fraction

import click

from ..cuspidal import accelerate, convergents
from ..errors import BSLError
from ..expansion import iter_expansion
from ..moebius import INF, get_precision
from ..parabolic import enumerate_points, estimate_constants, write_jsonl
from ..polygon import group_from_dict, load_group, preset_modular, validate
from .alpha import alpha_for, parse_alpha
from .classical import check_classical_bounds
from .render import render_ford
from .theorem import check_theorem


class _State:
    def __init__(self, bits, tolerance_exp, as_json):
        self.bits = bits
        self.tolerance_exp = tolerance_exp
        self.as_json = as_json

    @property
    def precision(self):
        if self.bits is None and self.tolerance_exp is None:
            return None
        return get_precision(self.bits or 256, self.tolerance_exp)

    def group(self, name):
        prec = self.precision
        if name == "modular":
            return preset_modular(prec)
        if name == "hexagon":
            from ..hexagon import load_hexagon_data
            return group_from_dict(load_hexagon_data(), prec)
        return load_group(name, prec)

    def emit(self, data, text):
        click.echo(json.dumps(data, indent=2) if self.as_json else text)


def _num(P, x, digits=20):
    if x is INF:
        return "inf"
    if isinstance(x, (int, Fraction)):
        return str(x)
    return P.precision.ctx.nstr(P.precision.mpf(x), digits)


def _window(text):
    try:
        lo, hi = (Fraction(s.strip()) for s in text.split(","))
    except ValueError:
        raise click.BadParameter("expected LO,HI") from None
    if not lo < hi:
        raise click.BadParameter("LO must be below HI")
    return lo, hi


def _point(P, text):
    if text.strip().lower() in ("inf", "infinity"):
        return INF
    try:
        return alpha_for(P, text)
    except ValueError as exc:
        raise click.BadParameter(str(exc)) from None


group_option = click.option("--group", "group_name", default="modular", show_default=True,
                            help="'modular', 'hexagon' or a group file.")


@click.group()
@click.option("--precision", "bits", type=click.IntRange(min=53), default=None,
              help="Working precision in bits (default 256).")
@click.option("--tolerance-exp", type=int, default=None,
              help="Tolerance is 2**-E (default bits/2).")
@click.option("--json", "as_json", is_flag=True, help="Machine-readable output.")
@click.pass_context
def main(ctx, bits, tolerance_exp, as_json):
    """Bowen-Series expansions and cusp approximation for Fuchsian lattices."""
    ctx.obj = _State(bits, tolerance_exp, as_json)


def _run(fn):
    """Turn package errors into a message and exit status 2."""
    try:
        return fn()
    except BSLError as exc:
        click.echo(f"error: {type(exc).__name__}: {exc}", err=True)
        sys.exit(2)


@main.command("validate")
@group_option
@click.pass_obj
def validate_cmd(state, group_name):
    """Check every structural requirement of a group."""
    P = _run(lambda: state.group(group_name))
    report = validate(P)
    state.emit(report.to_dict(), str(report))
    sys.exit(0 if report.ok else 1)


@main.command("expand")
@group_option
@click.option("--alpha", required=True, help="Boundary point (decimal, surd or inf).")
@click.option("--depth", type=click.IntRange(min=1), default=30, show_default=True)
@click.option("--lenient", is_flag=True, help="Do not stop near arc endpoints.")
@click.pass_obj
def expand_cmd(state, group_name, alpha, depth, lenient):
    """Print the first letters of the boundary expansion."""
    P = _run(lambda: state.group(group_name))
    xi = _point(P, alpha)
    letters, error = [], None
    try:
        for a in itertools.islice(iter_expansion(P, xi, strict=not lenient), depth):
            letters.append(a)
    except BSLError as exc:
        error = f"{type(exc).__name__}: {exc}"
    state.emit({"alpha": alpha, "letters": letters, "error": error},
               " ".join(letters) + (f"\nstopped: {error}" if error else ""))
    sys.exit(1 if error else 0)


@main.command("accelerate")
@group_option
@click.option("--alpha", required=True)
@click.option("--depth", type=click.IntRange(min=1), default=60, show_default=True,
              help="Number of expansion letters to decompose.")
@click.pass_obj
def accelerate_cmd(state, group_name, alpha, depth):
    """Split the expansion into maximal cuspidal words."""
    P = _run(lambda: state.group(group_name))
    xi = _point(P, alpha)

    def go():
        letters = list(itertools.islice(iter_expansion(P, xi), depth))
        return list(accelerate(P, letters))

    words = _run(go)
    rows = [{"start": w.start, "word": "".join(w.letters), "type": w.kind.value}
            for w in words]
    text = "\n".join(f"{r['start']:>5}  {r['type']:<13} {r['word']}" for r in rows)
    state.emit({"alpha": alpha, "words": rows}, text)


@main.command("convergents")
@group_option
@click.option("--alpha", required=True)
@click.option("--rmax", type=click.IntRange(min=0), default=10, show_default=True)
@click.pass_obj
def convergents_cmd(state, group_name, alpha, rmax):
    """Tabulate accelerated convergents with denominators and lengths."""
    P = _run(lambda: state.group(group_name))
    a = _point(P, alpha)
    records = _run(lambda: list(convergents(P, a, rmax)))
    rows = []
    for rec in records:
        value = None
        if rec.D != 0 and rec.point is not INF:
            value = _num(P, rec.D ** 2 * abs(P.precision.mpf(a) - P.precision.mpf(rec.point))
                         if not P.exact else rec.D ** 2 * abs(a - rec.point), 8)
        rows.append({"r": rec.r, "word": "".join(rec.letters), "type": rec.word.kind.value,
                     "length": _num(P, rec.length, 10), "D": _num(P, rec.D),
                     "point": _num(P, rec.point, 30), "value": value})
    lines = [f"{'r':>3}  {'type':<13} {'|W|':>12} {'D':>22}  {'D^2|a-z|':>10}  zeta  word"]
    for r in rows:
        lines.append(f"{r['r']:>3}  {r['type']:<13} {r['length']:>12} {r['D']:>22}  "
                     f"{str(r['value']):>10}  {r['point']}  {r['word']}")
    state.emit({"alpha": alpha, "rows": rows}, "\n".join(lines))


@main.command("check-classical")
@click.option("--alpha", "alphas", multiple=True, required=True)
@click.option("--n", "n_max", type=click.IntRange(min=1), default=25, show_default=True)
@click.option("--qmax", type=click.IntRange(min=1), default=None,
              help="Stern-Brocot bound (default q_n).")
@click.pass_obj
def check_classical_cmd(state, alphas, n_max, qmax):
    """Both classical approximation laws in exact arithmetic."""
    reports = []
    for text in alphas:
        try:
            value = parse_alpha(text)
        except ValueError as exc:
            raise click.BadParameter(str(exc)) from None
        reports.append((text, check_classical_bounds(value, n_max, qmax)))
    ok = all(r.ok for _, r in reports)
    lines = []
    for text, r in reports:
        status = "PASS" if r.ok else "FAIL"
        detail = r.error or (f"{len(r.bound_rows)} bounds, q <= {r.q_max}, "
                             f"{len(r.stray)} non-convergent good fractions")
        lines.append(f"{status}  {text}  {detail}")
    state.emit({"ok": ok, "alphas": [dict(r.to_dict(), input=t) for t, r in reports]},
               "\n".join(lines))
    sys.exit(0 if ok else 1)


@main.command("check-theorem")
@group_option
@click.option("--alpha", "alphas", multiple=True, required=True)
@click.option("--rmax", type=click.IntRange(min=1), default=25, show_default=True)
@click.option("--eps", type=float, default=None,
              help="Part 2 threshold (0.4 for modular; otherwise required for part 2).")
@click.option("--qmax", type=float, default=None, help="Part 2 denominator bound.")
@click.pass_obj
def check_theorem_cmd(state, group_name, alphas, rmax, eps, qmax):
    """Two-sided bounds on the convergents and inclusion of good approximations."""
    P = _run(lambda: state.group(group_name))
    if eps is None and qmax is not None and group_name == "modular":
        eps = 0.4
    report = check_theorem(P, list(alphas), r_max=rmax, eps=eps, Q=qmax)
    state.emit(report.to_dict(), report.to_text())
    sys.exit(0 if report.ok else 1)


@main.command("enumerate")
@group_option
@click.option("--qmax", type=float, required=True)
@click.option("--window", default=None, help="LO,HI (default: hull of finite vertices).")
@click.option("-o", "--output", type=click.File("w"), default="-")
@click.pass_obj
def enumerate_cmd(state, group_name, qmax, window, output):
    """Parabolic points with D <= Q as JSON lines."""
    P = _run(lambda: state.group(group_name))
    win = _window(window) if window else None
    Q = Fraction(str(qmax)) if P.exact else P.precision.mpf(qmax)
    enum = _run(lambda: enumerate_points(P, Q, win))
    write_jsonl(P, enum, output)


@main.command("render")
@group_option
@click.option("--qmax", type=float, required=True)
@click.option("--viewport", default=None, help="LO,HI[,YMAX] in half-plane units.")
@click.option("-o", "--output", type=click.File("w"), default="-")
@click.pass_obj
def render_cmd(state, group_name, qmax, viewport, output):
    """SVG of the horoballs with D <= Q."""
    P = _run(lambda: state.group(group_name))
    view = None
    if viewport:
        try:
            view = tuple(float(s) for s in viewport.split(","))
        except ValueError:
            raise click.BadParameter("expected LO,HI[,YMAX]") from None
        if len(view) not in (2, 3):
            raise click.BadParameter("expected LO,HI[,YMAX]")
    try:
        svg = render_ford(P, qmax, view)
    except ValueError as exc:
        raise click.BadParameter(str(exc)) from None
    output.write(svg)


@main.command("constants")
@group_option
@click.option("--qmax", type=float, default=100, show_default=True)
@click.option("--window", default=None)
@click.option("--alpha", "alphas", multiple=True, help="Sample for epsilon0 and M.")
@click.option("--theta", type=float, default=1.0, show_default=True)
@click.pass_obj
def constants_cmd(state, group_name, qmax, window, alphas, theta):
    """Empirical S0, kappa1, kappa2 and, given alphas, epsilon0 and M."""
    P = _run(lambda: state.group(group_name))
    win = _window(window) if window else None
    Q = Fraction(str(qmax)) if P.exact else P.precision.mpf(qmax)
    est = _run(lambda: estimate_constants(P, Q, list(alphas) or None, win, theta))
    data = est.to_dict()
    text = "\n".join(f"{k:>10}: {v}" for k, v in data.items() if k != "epsilon0_witnesses")
    state.emit(data, text)


if __name__ == "__main__":
    main()
