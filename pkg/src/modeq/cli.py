"""Command-line front end.

Exit codes: 0 success, 1 golden mismatch, 2 usage error or unknown name,
3 local exponent data violating the coprimality condition, 4 any other
library error.  ``MODEQ_ORDER`` overrides the default working order.
"""

from __future__ import annotations

import json
import os
import sys
from fractions import Fraction
from functools import wraps

import click
import sympy

from . import golden as golden_mod
from .errors import ConditionHViolated, InhomogeneousInput, ModeqError, UnknownGenerator
from .groups import basis as basis_of
from .groups import CharacterLabel, context, dims as dims_of, generator_series, space
from .local import QFamily, _rational_sqrt, apparent_obstruction, construct_Q, indicial as indicial_of, jet_of
from .mode import (ModeProblem, SingularitySpec, certify as certify_problem, default_order,
                   frobenius_plus, nonapparent_infinity, quasiform_to_mode)
from .qseries import FracQSeries
from .quasi import depth1_decompose, extremal_form, from_polys, wronskian as wronskian_of
from .symring import Inhomogeneous, ParamField, WeightedPoly, weight_of

DEFAULT_ORDER = 20
PHI_NAMES = {"phi", "M2star", "E2"}


def _order(value: str | None, minimum: int = 4) -> Fraction:
    text = value or os.environ.get("MODEQ_ORDER") or str(DEFAULT_ORDER)
    try:
        order = Fraction(text)
    except ValueError:
        raise click.BadParameter(f"order {text!r} is not a rational p/q") from None
    if order < minimum:
        raise click.BadParameter(f"order must be at least {minimum}")
    return order


def _rat(text: str, name: str = "value") -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise click.BadParameter(f"{name} {text!r} is not a rational p/q") from None


def _emit(obj, fmt: str, output: str | None, pretty: str | None = None) -> None:
    text = json.dumps(obj, indent=2, sort_keys=False) if fmt == "json" else (pretty or _pretty(obj))
    if output:
        with open(output, "w") as fh:
            fh.write(text + "\n")
    else:
        click.echo(text)


def _pretty(obj, indent: int = 0) -> str:
    pad = "  " * indent
    if isinstance(obj, dict):
        lines = []
        for k, v in obj.items():
            if isinstance(v, (dict, list)) and v and not _flat(v):
                lines.append(f"{pad}{k}:")
                lines.append(_pretty(v, indent + 1))
            else:
                lines.append(f"{pad}{k}: {_flat_text(v)}")
        return "\n".join(lines)
    if isinstance(obj, list):
        return "\n".join(_pretty(v, indent) if isinstance(v, dict) else f"{pad}- {_flat_text(v)}" for v in obj)
    return pad + str(obj)


def _flat(v) -> bool:
    return isinstance(v, list) and all(not isinstance(x, (dict, list)) for x in v)


def _flat_text(v) -> str:
    if isinstance(v, list):
        return ", ".join(str(x) for x in v)
    return str(v)


def _series_obj(s: FracQSeries) -> dict:
    obj = s.to_json_obj()
    obj["text"] = repr(s)
    return obj


def handle_errors(fn):
    @wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except UnknownGenerator as exc:
            click.echo(f"error: UnknownGenerator: {exc}", err=True)
            sys.exit(2)
        except ConditionHViolated as exc:
            click.echo(f"error: ConditionHViolated: {exc}", err=True)
            sys.exit(3)
        except ModeqError as exc:
            click.echo(f"error: {type(exc).__name__}: {exc}", err=True)
            sys.exit(4)
    return wrapper


# ------------------------------------------------------------------ parsing

def form_expression(group: str, text: str, params: tuple[str, ...] = ()) -> tuple[WeightedPoly, WeightedPoly]:
    """Parse ``phi*A + B`` written in named forms or generator symbols.

    ``phi`` may be written ``phi``, ``M2star`` or (on SL2Z) ``E2``; it may
    appear at most linearly.  Names in ``params`` are treated as scalars.
    Returns the generator polynomials ``(A, B)``.
    """
    ctx = context(group)
    K = ParamField(params)
    names = set(ctx.forms) | {n for n, _ in ctx.gens} | {"phi"}
    syms = {n: sympy.Symbol(n) for n in names | set(params)}
    try:
        expr = sympy.expand(sympy.sympify(text, locals=syms))
    except (sympy.SympifyError, SyntaxError, TypeError) as exc:
        raise click.BadParameter(f"cannot parse {text!r}: {exc}") from None
    unknown = {str(s) for s in expr.free_symbols} - names - set(params)
    if unknown:
        raise UnknownGenerator(", ".join(sorted(unknown)))
    phi = sympy.Symbol("_phi")
    phi_names = PHI_NAMES if ctx.name == "SL2Z" else PHI_NAMES - {"E2"}
    expr = sympy.expand(expr.subs({syms[n]: phi for n in phi_names if n in syms}))
    form_syms = sorted((s for s in expr.free_symbols if str(s) in names), key=str)
    poly = sympy.Poly(expr, phi, *form_syms)
    if poly.degree(phi) > 1:
        raise ModeqError("expressions of depth above one are not supported")
    parts = [WeightedPoly(ctx.gens, K), WeightedPoly(ctx.gens, K)]
    for monom, coeff in poly.terms():
        p = WeightedPoly.const(ctx.gens, K, K(coeff))
        for g, e in zip(form_syms, monom[1:]):
            if e:
                p = p * _symbol_poly(ctx, str(g)) ** e
        parts[1 - monom[0]] = parts[1 - monom[0]] + p
    return parts[0], parts[1]


def _symbol_poly(ctx, name: str) -> WeightedPoly:
    if name in dict(ctx.gens):
        return ctx.gen_poly(name)
    form = ctx.form(name)
    if form.poly is None:
        raise UnknownGenerator(f"{name} is not expressible in the generators of {ctx.name}")
    return form.poly


def _weight(p1: WeightedPoly, p0: WeightedPoly) -> int:
    ws = set()
    for p, shift in ((p1, 2), (p0, 0)):
        if p.is_zero():
            continue
        w = weight_of(p)
        if w is Inhomogeneous:
            raise InhomogeneousInput("expression is not homogeneous")
        ws.add(w + shift)
    if len(ws) != 1:
        raise InhomogeneousInput("expression is not homogeneous")
    return ws.pop()


def _character_of(ctx, p1: WeightedPoly, p0: WeightedPoly) -> CharacterLabel:
    chars = {ctx.monomial_character(e) for p in (p1, p0) for e in p.terms}
    if len(chars) > 1:
        raise ModeqError("expression mixes characters")
    return CharacterLabel(ctx.name, chars.pop() if chars else 0)


def _spec(kinf, krho1, krho2, interior) -> SingularitySpec:
    pts = []
    for item in interior:
        try:
            t, kappa = item.split(":")
        except ValueError:
            raise click.BadParameter(f"interior point {item!r} must be t:kappa") from None
        pts.append((t, _rat(kappa, "kappa")))
    return SingularitySpec(_rat(kinf, "kinf"), _rat(krho1, "krho1"), _rat(krho2, "krho2"), tuple(pts))


def _family(group, r, s, t, interior_params) -> QFamily:
    rows = []
    for item in interior_params:
        parts = item.split(":")
        if len(parts) != 3:
            raise click.BadParameter(f"interior parameters {item!r} must be t:r1:r2")
        rows.append(tuple(_rat(x, "interior parameter") for x in parts))
    return QFamily(group, _rat(r, "r"), _rat(s, "s"), _rat(t, "t"), tuple(rows))


# ------------------------------------------------------------------ commands

common_group = click.option("--group", "-g", required=True, help="SL2Z, G2plus or G3plus.")
common_format = click.option("--format", "fmt", type=click.Choice(["json", "pretty"]), default="json")
common_output = click.option("--output", "-o", default=None, help="Write to this file instead of stdout.")
common_order = click.option("--order", default=None, help="Working order (rational); default $MODEQ_ORDER or 20.")


@click.group()
@click.version_option(package_name="artifact")
def main():
    """Exact computations with quasimodular forms and modular ODEs."""


@main.command()
@common_group
@click.option("--name", required=True)
@common_order
@common_format
@common_output
@handle_errors
def expand(group, name, order, fmt, output):
    """q-expansion of a named form or generator."""
    s = generator_series(group, name, _order(order, minimum=1))
    _emit({"group": context(group).name, "name": name, "series": _series_obj(s)}, fmt, output, repr(s))


@main.command()
@common_group
@click.option("--weight", "-k", type=int, required=True)
@click.option("--character", "-c", default=None)
@click.option("--depth", type=int, default=0)
@common_format
@common_output
@handle_errors
def dims(group, weight, character, depth, fmt, output):
    """Dimension of a space of modular or depth-one quasimodular forms."""
    sp = space(group, weight, character, depth)
    _emit({"space": str(sp), "dimension": dims_of(sp)}, fmt, output, f"{sp}: {dims_of(sp)}")


@main.command()
@common_group
@click.option("--weight", "-k", type=int, required=True)
@click.option("--character", "-c", default=None)
@click.option("--depth", type=int, default=0)
@common_order
@common_format
@common_output
@handle_errors
def basis(group, weight, character, depth, order, fmt, output):
    """Echelon basis of a space."""
    sp = space(group, weight, character, depth)
    b = basis_of(sp, _order(order))
    _emit({"space": str(sp), "basis": [_series_obj(s) for s in b]}, fmt, output,
          "\n".join(repr(s) for s in b) or "(zero space)")


@main.command()
@common_group
@click.option("--weight", "-k", type=int, required=True)
@click.option("--character", "-c", default=None)
@common_order
@common_format
@common_output
@handle_errors
def extremal(group, weight, character, order, fmt, output):
    """Monic extremal depth-one form."""
    d = extremal_form(space(group, weight, character, 1), _order(order))
    obj = {"space": str(d.space), "series": _series_obj(d.f), "valuation": str(d.f.valuation()),
           "phi_part": str(d.coords1), "modular_part": str(d.coords0)}
    _emit(obj, fmt, output, f"{d}\n{d.f!r}")


def _depth1_from_expr(group, text, order):
    ctx = context(group)
    p1, p0 = form_expression(ctx.name, text)
    k = _weight(p1, p0)
    ch = _character_of(ctx, p1, p0)
    return from_polys(ctx.name, k, ch, p1, p0, order)


@main.command()
@common_group
@click.option("--form", "form_text", required=True, help="Depth-one expression, e.g. 'E2*E4 + E6'.")
@common_order
@common_format
@common_output
@handle_errors
def wronskian(group, form_text, order, fmt, output):
    """Wronskian of a depth-one form and its generator polynomial."""
    d = _depth1_from_expr(group, form_text, _order(order))
    w = wronskian_of(d)
    obj = {"weight": w.weight, "character": str(w.character), "polynomial": str(w.coords),
           "series": _series_obj(w.W)}
    _emit(obj, fmt, output, f"W = {w.coords}")


@main.command()
@common_group
@click.option("--form", "form_text", required=True)
@common_order
@common_format
@common_output
@handle_errors
def decompose(group, form_text, order, fmt, output):
    """Recover ``phi*f1 + f0`` from the q-expansion of an expression."""
    d0 = _depth1_from_expr(group, form_text, _order(order))
    d = depth1_decompose(d0.f, group, d0.weight, d0.character)
    obj = {"weight": d.weight, "character": str(d.character), "phi_part": str(d.coords1),
           "modular_part": str(d.coords0)}
    _emit(obj, fmt, output, str(d))


q_options = [
    click.option("--r", default="0"), click.option("--s", default="0"), click.option("--t", default="0"),
    click.option("--interior-params", "interior_params", multiple=True, help="t:r1:r2 per interior point."),
]


def with_q(fn):
    for opt in reversed(q_options):
        fn = opt(fn)
    return fn


@main.command("mode-solve")
@common_group
@with_q
@click.option("--kappa", default=None, help="Exponent at infinity; default sqrt(r).")
@common_order
@common_format
@common_output
@handle_errors
def mode_solve(group, r, s, t, interior_params, kappa, order, fmt, output):
    """Frobenius solution ``y_+`` at the cusp."""
    order = _order(order)
    fam = _family(group, r, s, t, interior_params)
    Q = fam.series(order + 1)
    kap = _rat(kappa, "kappa") if kappa is not None else _sqrt(_rat(r, "r"))
    y = frobenius_plus(Q, kap, order)
    na = nonapparent_infinity(Q, kap)
    obj = {"Q": str(fam), "kappa": str(kap), "y_plus": _series_obj(y.coeffs),
           "residual_order": str(y.residual_order), "infinity_nonapparent": na.nonapparent,
           "obstruction": None if na.obstruction is None else str(na.obstruction)}
    _emit(obj, fmt, output, f"y_+ = {y.coeffs!r}")


def _sqrt(x: Fraction) -> Fraction:
    root = _rational_sqrt(x)
    if root is None:
        raise click.BadParameter(f"r={x} is not a rational square; pass --kappa")
    return root


spec_options = [
    click.option("--kinf", required=True, help="kappa at infinity."),
    click.option("--krho1", "--ki", "krho1", default="1/2", help="kappa at rho1 (i for SL2Z)."),
    click.option("--krho2", "--krho", "krho2", default="1/2", help="kappa at rho2 (rho for SL2Z)."),
    click.option("--interior", multiple=True, help="t:kappa per interior point."),
]


def with_spec(fn):
    for opt in reversed(spec_options):
        fn = opt(fn)
    return fn


@main.command()
@common_group
@with_spec
@click.option("--r2", "r2_values", multiple=True, help="r2 for each interior point (else solved).")
@click.option("--root", type=int, default=0, help="Which solution of the apparentness condition.")
@common_order
@common_format
@common_output
@handle_errors
def certify(group, kinf, krho1, krho2, interior, r2_values, root, order, fmt, output):
    """Certify that ``F*y_+`` is quasimodular for the given local exponents."""
    spec = _spec(kinf, krho1, krho2, interior)
    sols = construct_Q(group, spec)
    fam = sols.solutions[root] if sols.solutions else None
    if fam is None:
        raise ModeqError("no rational Q satisfies the apparentness condition")
    if r2_values:
        rows = tuple((tj, r1, _rat(r2, "r2")) for (tj, r1, _), r2 in zip(fam.interior, r2_values))
        fam = QFamily(fam.group, fam.r, fam.s, fam.t, rows)
    explicit = None if order is None and "MODEQ_ORDER" not in os.environ else _order(order)
    work = explicit or Fraction(default_order(group, spec))
    cert = certify_problem(ModeProblem(group, fam.series(work + 2), spec, fam), work)
    obj = cert.to_json_obj()
    obj["Q"] = str(fam)
    _emit(obj, fmt, output, f"l = {cert.ell}, delta = {cert.delta}\nF*y_+ = phi*({cert.g1_poly}) + ({cert.g0_poly})")


@main.command("to-mode")
@common_group
@click.option("--form", "form_text", default=None, help="Depth-one expression.")
@click.option("--weight", "-k", type=int, default=None, help="Use the extremal form of this weight.")
@click.option("--character", "-c", default=None)
@common_order
@common_format
@common_output
@handle_errors
def to_mode(group, form_text, weight, character, order, fmt, output):
    """``Q = D_q^2 g2 / g2`` for ``g2 = f/sqrt(W_f)``."""
    order = _order(order)
    if form_text:
        d = _depth1_from_expr(group, form_text, order)
    elif weight is not None:
        d = extremal_form(space(group, weight, character, 1), order)
    else:
        raise click.UsageError("pass --form or --weight")
    Q, g2 = quasiform_to_mode(d)
    _emit({"Q": _series_obj(Q), "g2": _series_obj(g2)}, fmt, output, f"Q = {Q!r}")


point_option = click.option("--point", type=click.Choice(["rho1", "rho2", "interior"]), required=True)


@main.command()
@common_group
@point_option
@click.option("--t", "t_value", default=None, help="Interior parameter (rational or a symbol name).")
@click.option("--form", "form_text", required=True, help="Polynomial in generators or named forms.")
@click.option("--nmax", type=int, default=4)
@common_format
@common_output
@handle_errors
def jet(group, point, t_value, form_text, nmax, fmt, output):
    """Reduced jet of a modular form at an elliptic or interior point."""
    params = (t_value,) if t_value and t_value.isidentifier() else ()
    p1, p0 = form_expression(group, form_text, params)
    if not p1.is_zero():
        raise ModeqError("jets are taken of modular forms (no phi)")
    j = jet_of(p0, weight_of(p0), point, nmax, group, t_value)
    obj = {"group": j.group, "point": point, "weight": j.weight,
           "coefficients": {str(n): str(c) for n, c in j.items()}}
    _emit(obj, fmt, output, str(j))


def _q_jet(group, point, t_value, r, s, t, interior_params, nmax):
    fam = _family(group, r, s, t, interior_params)
    return fam, fam.jet(point, nmax, t_value)


@main.command()
@common_group
@point_option
@click.option("--at-t", "t_value", default=None, help="Interior point parameter.")
@with_q
@common_format
@common_output
@handle_errors
def indicial(group, point, t_value, r, s, t, interior_params, fmt, output):
    """Local exponents of ``Q`` at a point."""
    fam, j = _q_jet(group, point, t_value, r, s, t, interior_params, 0)
    res = indicial_of(j)
    obj = {"Q": str(fam), "a_minus2": str(res.a_minus2), "roots": [str(x) for x in res.roots],
           "kappa": str(res.kappa)}
    _emit(obj, fmt, output)


@main.command()
@common_group
@point_option
@click.option("--at-t", "t_value", default=None)
@click.option("--kappa", required=True)
@with_q
@common_format
@common_output
@handle_errors
def apparent(group, point, t_value, kappa, r, s, t, interior_params, fmt, output):
    """Obstruction to ``Q`` being apparent at a point."""
    kap = _rat(kappa, "kappa")
    fam, j = _q_jet(group, point, t_value, r, s, t, interior_params, max(int(2 * kap) - 2, 0))
    rep = apparent_obstruction(j, kap)
    obj = {"Q": str(fam), "kappa": str(kap), "local_exponents": [str(x) for x in rep.local_exponents],
           "c": [str(c) for c in rep.c_coeffs], "obstruction": str(rep.obstruction), "apparent": rep.apparent}
    _emit(obj, fmt, output)


@main.command("construct-q")
@common_group
@with_spec
@common_format
@common_output
@handle_errors
def construct_q(group, kinf, krho1, krho2, interior, fmt, output):
    """All ``Q`` with the prescribed local exponents."""
    res = construct_Q(group, _spec(kinf, krho1, krho2, interior))
    obj = {"group": res.group, "solutions": [str(f) for f in res.solutions],
           "obstruction_polynomial": None if res.polynomial is None else str(res.polynomial.as_expr()),
           "degree": res.degree, "unresolved_factors": [str(f) for f, _ in res.unresolved]}
    _emit(obj, fmt, output)


@main.command("paper-examples")
@click.option("--filter", "filter_", default=None, help="Substring of a case id, or a group name.")
@click.option("--golden-dir", default=None, type=click.Path(exists=True, file_okay=False))
@handle_errors
def paper_examples(filter_, golden_dir):
    """Re-run every stored worked example; exit 1 on any mismatch."""
    results = golden_mod.run_all(golden_dir, filter_)
    for res in results:
        click.echo(res.line())
    failed = [r for r in results if not r.passed]
    click.echo(f"{len(results) - len(failed)}/{len(results)} passed")
    sys.exit(1 if failed else 0)


if __name__ == "__main__":
    main()
