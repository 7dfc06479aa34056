"""Depth-one quasimodular forms: decomposition, Wronskian, extremal forms.

A depth-one form of weight ``k`` is ``f = phi*f1 + f0`` with ``f1`` modular
of weight ``k-2`` and ``f0`` modular of weight ``k``, both in the same
character.  Its Wronskian

    W = -f^2 + A * (f1 * D_q f - D_q f1 * f)

is modular of weight ``2k`` in the squared character.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import (InsufficientPrecision, ModeqError, NoExtremal, NonUniqueExtremal,
                     NotInSpace, NotQuasimodular)
from .groups import (CharacterLabel, Membership, SpaceSpec, context, dims, membership,
                     monomials, parse_character, space, space_data)
from .linalg import nullspace, solve_columns
from .qseries import FracQSeries, Scalar, to_fraction
from .symring import ParamField, WeightedPoly


@dataclass
class Depth1Form:
    group: str
    weight: int
    character: CharacterLabel
    f: FracQSeries
    f1: FracQSeries
    f0: FracQSeries
    coords1: WeightedPoly
    coords0: WeightedPoly

    @property
    def space(self) -> SpaceSpec:
        return space(self.group, self.weight, self.character, 1)

    def scaled(self, c: Scalar) -> "Depth1Form":
        c = to_fraction(c)
        return Depth1Form(self.group, self.weight, self.character, self.f * c, self.f1 * c,
                          self.f0 * c, self.coords1 * c, self.coords0 * c)

    def __str__(self) -> str:
        return f"phi*({self.coords1}) + ({self.coords0})"


def from_polys(group: str, weight: int, character, p1: WeightedPoly | None,
               p0: WeightedPoly | None, order: Scalar) -> Depth1Form:
    """Depth-one form ``phi*p1 + p0`` given by generator polynomials."""
    ctx = context(group)
    order = to_fraction(order)
    zero = WeightedPoly(ctx.gens, ParamField())
    p1 = zero if p1 is None else p1
    p0 = zero if p0 is None else p0
    f1 = ctx.poly_series(p1, order)
    f0 = ctx.poly_series(p0, order)
    f = ctx.phi(order) * f1 + f0
    return Depth1Form(ctx.name, weight, parse_character(ctx.name, character), f, f1, f0, p1, p0)


def depth1_decompose(f: FracQSeries, group: str, k: int, char, order: Scalar | None = None) -> Depth1Form:
    """Split ``f`` as ``phi*f1 + f0`` inside the depth-one space."""
    sp = space(group, k, char, 1)
    try:
        m = membership(f, sp, order)
    except NotInSpace as exc:
        raise NotQuasimodular(str(exc)) from None
    ctx = context(sp.group)
    p1, p0 = m.poly(1), m.poly(0)
    T = f.trunc
    return Depth1Form(sp.group, k, sp.character, f, ctx.poly_series(p1, T), ctx.poly_series(p0, T), p1, p0)


@dataclass
class WronskianResult:
    W: FracQSeries
    weight: int
    character: CharacterLabel
    coords: WeightedPoly
    membership: Membership


def wronskian_bilinear(a: Depth1Form, b: Depth1Form) -> FracQSeries:
    """Symmetric bilinear form whose diagonal is the Wronskian."""
    A = context(a.group).anomaly
    cross = a.f1 * b.f.dq() - a.f1.dq() * b.f + b.f1 * a.f.dq() - b.f1.dq() * a.f
    return -(a.f * b.f) + cross * Fraction(A, 2)


def wronskian_series(d: Depth1Form) -> FracQSeries:
    A = context(d.group).anomaly
    return -(d.f * d.f) + (d.f1 * d.f.dq() - d.f1.dq() * d.f) * A


def expected_wronskian_valuation(v_f: Fraction, v_f1: Fraction | None) -> Fraction:
    """Vanishing order of W at the cusp; ``v_f1=None`` means ``f1 = 0``."""
    if v_f1 is None or v_f <= v_f1:
        return 2 * v_f
    return v_f + v_f1


def wronskian(d: Depth1Form, order: Scalar | None = None) -> WronskianResult:
    W = wronskian_series(d)
    sp = space(d.group, 2 * d.weight, d.character ** 2)
    m = membership(W, sp, order)
    v1 = None if d.f1.is_zero() else d.f1.valuation()
    expected = expected_wronskian_valuation(d.f.valuation(), v1)
    if W.is_zero() or W.valuation() != expected:
        raise ModeqError(f"Wronskian vanishing order {W.valuation() if not W.is_zero() else 'inf'} "
                         f"differs from the predicted {expected}")
    return WronskianResult(W, 2 * d.weight, sp.character, m.poly(0), m)


def parametric_wronskian(base: Depth1Form, direction: Depth1Form, param: str = "a") -> WeightedPoly:
    """Generator polynomial of ``W(base + a*direction)`` with ``a`` symbolic."""
    K = ParamField((param,))
    a = K.gen(param)
    sp = space(base.group, 2 * base.weight, base.character ** 2)
    pieces = [wronskian_bilinear(base, base), wronskian_bilinear(base, direction) * 2,
              wronskian_bilinear(direction, direction)]
    total = WeightedPoly(context(base.group).gens, K)
    for j, piece in enumerate(pieces):
        total = total + membership(piece, sp).poly(0).with_field(K) * a ** j
    return total


def extremal_form(sp: SpaceSpec, order: Scalar) -> Depth1Form:
    """Monic element of vanishing order ``dims(sp) - 1`` with its decomposition."""
    order = to_fraction(order)
    n = dims(sp)
    if n == 0:
        raise NoExtremal(f"{sp} is zero")
    if order <= n - 1:
        raise InsufficientPrecision(f"need order > {n - 1} to see the extremal vanishing order")
    data = space_data(sp, order)
    rows = [[s.coefficient(j) for s in data.series] for j in range(n - 1)]
    null = nullspace(rows, n)
    if len(null) > 1:
        raise NonUniqueExtremal(f"{sp}: {len(null)} independent forms vanish to order {n - 1}")
    if not null:
        raise NoExtremal(f"{sp}: nothing vanishes to order {n - 1}")
    vec = null[0]
    f = FracQSeries.zero(order)
    for c, s in zip(vec, data.series):
        if c:
            f = f + s * c
    if f.is_zero() or f.valuation() != n - 1:
        raise NoExtremal(f"{sp}: candidate vanishes beyond order {n - 1}")
    lead = f.leading_coefficient()
    vec = [c / lead for c in vec]
    ctx = context(sp.group)
    p1 = WeightedPoly(ctx.gens, ParamField())
    p0 = WeightedPoly(ctx.gens, ParamField())
    for c, (p, e) in zip(vec, data.labels):
        term = WeightedPoly.monomial(ctx.gens, ParamField(), e, c)
        if p:
            p1 = p1 + term
        else:
            p0 = p0 + term
    f1 = ctx.poly_series(p1, order)
    f0 = ctx.poly_series(p0, order)
    return Depth1Form(sp.group, sp.weight, sp.character, f / lead, f1, f0, p1, p0)


def extremal(sp: SpaceSpec, order: Scalar) -> FracQSeries:
    return extremal_form(sp, order).f


def quasimodular_coordinates(f: FracQSeries, group: str, k: int, char, depth: int,
                             order: Scalar | None = None) -> dict[int, WeightedPoly]:
    """Coordinates of ``f`` in ``sum_j phi^j M_{k-2j}`` for ``j <= depth``.

    Returns a map from the power of phi to its modular coefficient.
    """
    ctx = context(group)
    ch = parse_character(ctx.name, char)
    order = to_fraction(f.trunc if order is None else order)
    n = int(order)
    phi = ctx.phi(order)
    labels, cols = [], []
    for j in range(depth + 1):
        for e in monomials(ctx.name, k - 2 * j, ch):
            s = ctx.poly_series(WeightedPoly.monomial(ctx.gens, ParamField(), e), order)
            for _ in range(j):
                s = s * phi
            labels.append((j, e))
            cols.append(s.coefficient_list(n))
    if n < len(labels) + 10:
        raise InsufficientPrecision("not enough coefficients for a reliable solve")
    sol = solve_columns(cols, f.coefficient_list(n))
    if sol is None:
        raise NotQuasimodular(f"series is not in the depth-{depth} space of weight {k}")
    out = {j: WeightedPoly(ctx.gens, ParamField()) for j in range(depth + 1)}
    for c, (j, e) in zip(sol, labels):
        out[j] = out[j] + WeightedPoly.monomial(ctx.gens, ParamField(), e, c)
    return out
