"""Modular ODEs ``D_q^2 y = Q y`` seen from the cusp.

Covers the Frobenius solution at infinity, the test for an apparent cusp,
the weight ``l``, multiplier ``F`` and character ``delta`` attached to a
set of local exponents, and certification that ``F * y_+`` is a depth-one
quasimodular form.

Interior singular points are stored with the parameter ``t`` of the local
relation (``E4^3 - t*E6^2``, ``M4m^2 - t*M2m^4``, ``M1^6 - t*M3^2``).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

from .errors import (CertificationFailed, ConditionHViolated, DegenerateParameter,
                     ExponentMismatch, InsufficientPrecision, NotInSpace, WronskianNotSquareCompatible,
                     ZeroSeries)
from .groups import CharacterLabel, context, dims, membership, space
from .qseries import FracQSeries, Scalar, series_pow_frac, to_fraction
from .quasi import Depth1Form, wronskian_series
from .symring import ParamField, WeightedPoly

HALF = Fraction(1, 2)

# Cusp form vanishing exactly at infinity, by group.
CUSP_FORM = {"SL2Z": "Delta", "G2plus": "M8", "G3plus": "M6"}


def _half_integer(x, name: str, minimum: Fraction) -> Fraction:
    x = to_fraction(x)
    if (2 * x).denominator != 1 or x < minimum:
        raise ConditionHViolated(f"{name}={x} must be a half-integer >= {minimum}")
    return x


def interior_poly(group: str, t) -> WeightedPoly:
    """Generator polynomial vanishing simply at the interior point with parameter ``t``."""
    ctx = context(group)
    K = ParamField() if isinstance(t, (int, Fraction)) else ParamField(tuple(str(s) for s in _free(t)))
    odd = ctx.gen_poly(ctx.odd_generator, K)
    even = ctx.gen_poly(ctx.even_generator, K)
    t = K(t)
    if ctx.name == "SL2Z":
        return even ** 3 - odd ** 2 * t
    if ctx.name == "G2plus":
        return odd ** 2 - even ** 4 * t
    return even ** 6 - odd ** 2 * t


def _free(t) -> list:
    expr = t.as_expr() if hasattr(t, "as_expr") else t
    return sorted(expr.free_symbols, key=str)


def recipe_parameter(group: str, t: Scalar) -> Fraction:
    """The same interior point expressed in the cusp-side recipe coordinates.

    SL2Z uses ``E6^2 - t'E4^3``, G2plus ``M4^2 - t'M8`` and G3plus
    ``M2m^3 - t'M6m``.
    """
    t = to_fraction(t)
    g = context(group).name
    if g == "SL2Z":
        return 1 / t
    if g == "G2plus":
        return Fraction(256) / (1 - t)
    return 108 * t / (t - 1)


@dataclass(frozen=True)
class SingularitySpec:
    kappa_inf: Fraction
    kappa_rho1: Fraction = HALF
    kappa_rho2: Fraction = HALF
    interior: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "kappa_inf", _half_integer(self.kappa_inf, "kappa_inf", Fraction(0)))
        object.__setattr__(self, "kappa_rho1", _half_integer(self.kappa_rho1, "kappa_rho1", HALF))
        object.__setattr__(self, "kappa_rho2", _half_integer(self.kappa_rho2, "kappa_rho2", HALF))
        pts = []
        for t, kappa in self.interior:
            if isinstance(t, str):
                try:
                    t = Fraction(t)
                except ValueError:
                    pass
            if not hasattr(t, "as_expr") and not isinstance(t, str):
                t = to_fraction(t)
                if t in (0, 1):
                    raise DegenerateParameter(f"interior parameter t={t} is a cusp or elliptic value")
            pts.append((t, _half_integer(kappa, "kappa_j", HALF)))
        ts = [p[0] for p in pts]
        if len(set(map(str, ts))) != len(ts):
            raise DegenerateParameter("interior parameters must be pairwise distinct")
        object.__setattr__(self, "interior", tuple(pts))

    def check(self, group: str) -> None:
        """Raise ConditionHViolated unless ``2*kappa`` is prime to each elliptic order."""
        ctx = context(group)
        for pt, kappa in zip(ctx.elliptic, (self.kappa_rho1, self.kappa_rho2)):
            if math.gcd(int(2 * kappa), pt.order) != 1:
                raise ConditionHViolated(
                    f"gcd(2*kappa_{pt.label}={2 * kappa}, {pt.order}) != 1 on {ctx.name}")

    def to_json_obj(self) -> dict:
        return {"kappa_inf": str(self.kappa_inf), "kappa_rho1": str(self.kappa_rho1),
                "kappa_rho2": str(self.kappa_rho2),
                "interior": [[str(t), str(k)] for t, k in self.interior]}

    @classmethod
    def from_json_obj(cls, obj: dict) -> "SingularitySpec":
        return cls(Fraction(obj["kappa_inf"]), Fraction(obj.get("kappa_rho1", "1/2")),
                   Fraction(obj.get("kappa_rho2", "1/2")),
                   tuple((Fraction(t), Fraction(k)) for t, k in obj.get("interior", [])))


@dataclass
class ModeProblem:
    group: str
    Q_series: FracQSeries
    spec: SingularitySpec | None = None
    Q_family: Any = None

    def __post_init__(self):
        self.group = context(self.group).name
        if self.spec is not None:
            check_exponent_at_infinity(self.Q_series, self.spec.kappa_inf)


@dataclass
class FrobeniusSolution:
    exponent: Fraction
    coeffs: FracQSeries
    residual_order: Fraction

    @property
    def series(self) -> FracQSeries:
        return self.coeffs


def check_exponent_at_infinity(Q: FracQSeries, kappa: Scalar) -> None:
    kappa = to_fraction(kappa)
    if not Q.is_zero() and Q.valuation() < 0:
        raise ExponentMismatch("Q has a pole at infinity")
    if Q.grid_den != 1:
        raise ExponentMismatch("Q must be a power series in integral powers of q")
    if Q.coefficient(0) != kappa ** 2:
        raise ExponentMismatch(f"Q(infinity)={Q.coefficient(0)} but kappa^2={kappa ** 2}")


def _Q_coeffs(Q: FracQSeries, count: int) -> list[Fraction]:
    if Q.trunc < count:
        raise InsufficientPrecision(f"Q known only to O(q^{Q.trunc}), need {count} coefficients")
    return Q.coefficient_list(count)


def frobenius_plus(Q: FracQSeries, kappa: Scalar, order: Scalar) -> FrobeniusSolution:
    """Solution ``q^kappa (1 + sum c_n q^n)`` up to ``O(q^order)``."""
    kappa = to_fraction(kappa)
    order = to_fraction(order)
    check_exponent_at_infinity(Q, kappa)
    if order < kappa + 1:
        raise InsufficientPrecision(f"order must be at least kappa+1={kappa + 1}")
    count = math.ceil(order - kappa)
    q = _Q_coeffs(Q, count)
    c = [Fraction(1)]
    for n in range(1, count):
        acc = sum((q[n - j] * c[j] for j in range(n) if q[n - j]), Fraction(0))
        c.append(acc / (n * (2 * kappa + n)))
    y = FracQSeries.from_coefficients(c, trunc=count).shift(kappa).truncate(order)
    residual = y.dq().dq() - Q.truncate(count) * y
    if not residual.is_zero():
        raise ExponentMismatch("Frobenius recursion left a nonzero residual")
    return FrobeniusSolution(kappa, y, y.trunc)


@dataclass
class NonApparency:
    nonapparent: bool
    obstruction: Fraction | None
    c_hat: list[Fraction] = field(default_factory=list)

    def __bool__(self) -> bool:
        return self.nonapparent


def nonapparent_infinity(Q: FracQSeries, kappa: Scalar, order: Scalar | None = None) -> NonApparency:
    """Try the second solution ``q^-kappa (1 + ...)``; a nonzero obstruction means log terms."""
    kappa = to_fraction(kappa)
    check_exponent_at_infinity(Q, kappa)
    if (2 * kappa).denominator != 1:
        raise ExponentMismatch(f"2*kappa={2 * kappa} is not an integer")
    if kappa == 0:
        return NonApparency(True, None, [Fraction(1)])
    N = int(2 * kappa)
    q = _Q_coeffs(Q, N + 1)
    c = [Fraction(1)]
    for n in range(1, N):
        acc = sum((q[n - j] * c[j] for j in range(n)), Fraction(0))
        c.append(acc / (n * (n - N)))
    obstruction = sum((q[N - j] * c[j] for j in range(N)), Fraction(0))
    return NonApparency(obstruction != 0, obstruction, c)


def ell_of(group: str, spec: SingularitySpec) -> int:
    ctx = context(group)
    c_inf, c1, c2, c_int = ctx.ell_coeffs
    ell = (-1 + c_inf * spec.kappa_inf + c1 * (spec.kappa_rho1 - HALF) + c2 * (spec.kappa_rho2 - HALF)
           + c_int * sum((k - HALF for _, k in spec.interior), Fraction(0)))
    if ell.denominator != 1:
        raise ConditionHViolated(f"weight l={ell} is not an integer")
    return int(ell)


def delta_of(group: str, ell: int) -> CharacterLabel:
    g = context(group).name
    if g == "SL2Z":
        return CharacterLabel(g, 0)
    if g == "G2plus":
        if ell % 2 == 0:
            raise ConditionHViolated(f"l={ell} must be odd on G2plus")
        return CharacterLabel(g, 0 if ell % 8 in (1, 7) else 1)
    table = {1: 0, 11: 0, 2: 1, 4: 1, 5: 2, 7: 2, 8: 3, 10: 3}
    if ell % 12 not in table:
        raise ConditionHViolated(f"l={ell} is divisible by 3 on G3plus")
    return CharacterLabel(g, table[ell % 12])


def predicted_d(group: str, ell: int) -> str:
    """Constant relating the second solution to ``z*y_+``, tabulated per group."""
    g = context(group).name
    delta = delta_of(g, ell)
    if g == "SL2Z":
        return "1"
    if g == "G2plus":
        return "√2" if delta.index == 0 else "-√2"
    return ("√3", "i√3", "-√3", "-i√3")[delta.index]


def F_factors(group: str, spec: SingularitySpec) -> list[tuple[str, WeightedPoly | None, Fraction]]:
    """Factors ``(name, poly, exponent)`` of ``F``; ``poly`` is None for the cusp form."""
    ctx = context(group)
    out: list[tuple[str, WeightedPoly | None, Fraction]] = [
        (CUSP_FORM[ctx.name], None, spec.kappa_inf),
        (ctx.odd_generator, ctx.gen_poly(ctx.odd_generator), spec.kappa_rho1 - HALF),
        (ctx.even_generator, ctx.gen_poly(ctx.even_generator), spec.kappa_rho2 - HALF),
    ]
    for t, kappa in spec.interior:
        if not isinstance(t, (int, Fraction)):
            raise ValueError("interior parameters must be exact rationals to expand F")
        out.append((f"F[t={t}]", interior_poly(ctx.name, t) / (1 - t), kappa - HALF))
    return out


def F_series(group: str, spec: SingularitySpec, order: Scalar) -> FracQSeries:
    ctx = context(group)
    order = to_fraction(order)
    F = FracQSeries.constant(1, order)
    for name, poly, e in F_factors(ctx.name, spec):
        if e == 0:
            continue
        base = ctx.forms[name].recipe(order) if poly is None else ctx.poly_series(poly, order)
        F = F * series_pow_frac(base, e)
    return F.truncate(order)


def ell_F_delta(group: str, spec: SingularitySpec, order: Scalar) -> tuple[int, FracQSeries, CharacterLabel]:
    spec.check(group)
    ell = ell_of(group, spec)
    delta = delta_of(group, ell)
    return ell, F_series(group, spec, order), delta


def default_order(group: str, spec: SingularitySpec) -> int:
    ell = ell_of(group, spec)
    delta = delta_of(group, ell)
    g = context(group).name
    d = dims(space(g, ell + 1, delta)) + (dims(space(g, ell - 1, delta)) if ell >= 1 else 0)
    return max(math.ceil(2 * spec.kappa_inf) + d + 10, 20)


def _poly_json(p: WeightedPoly) -> list:
    return [[list(e), ParamField.render(c)] for e, c in p.sorted_terms()]


@dataclass
class Certificate:
    group: str
    ell: int
    delta: CharacterLabel
    F: FracQSeries
    y_plus: FrobeniusSolution
    g1: FracQSeries
    g0: FracQSeries
    g1_poly: WeightedPoly
    g0_poly: WeightedPoly
    predicted_d: str
    order: Fraction
    infinity_nonapparent: bool = True

    @property
    def y_hat(self) -> FracQSeries:
        return (self.F * self.y_plus.coeffs).truncate(self.order)

    def to_json_obj(self) -> dict:
        return {
            "group": self.group,
            "ell": self.ell,
            "delta": str(self.delta),
            "F": self.F.to_json_obj(),
            "y_plus": self.y_plus.coeffs.to_json_obj(),
            "g1": self.g1.to_json_obj(),
            "g0": self.g0.to_json_obj(),
            "coords": {"g1": _poly_json(self.g1_poly), "g0": _poly_json(self.g0_poly),
                       "g1_text": str(self.g1_poly), "g0_text": str(self.g0_poly)},
            "predicted_d": self.predicted_d,
            "order": str(self.order),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj(), indent=2)


def certify(problem: ModeProblem, order: Scalar | None = None) -> Certificate:
    """Solve ``F*y_+ = phi*g1 + g0`` with ``g1, g0`` modular of weights ``l-1, l+1``."""
    spec = problem.spec
    if spec is None:
        raise ConditionHViolated("certification needs the local exponent data")
    g = context(problem.group).name
    spec.check(g)
    ell = ell_of(g, spec)
    delta = delta_of(g, ell)
    order = to_fraction(default_order(g, spec) if order is None else order)
    kappa = spec.kappa_inf
    y = frobenius_plus(problem.Q_series, kappa, order)
    F = F_series(g, spec, order)
    y_hat = (F * y.coeffs).truncate(order)
    if y_hat.grid_den != 1 or (not y_hat.is_zero() and y_hat.valuation() < 0):
        raise CertificationFailed("F*y_+ is not a power series in q")
    sp = space(g, ell + 1, delta, 1)
    try:
        m = membership(y_hat, sp, order)
    except NotInSpace as exc:
        raise CertificationFailed(f"F*y_+ is not quasimodular of weight {ell + 1}: {exc}") from None
    ctx = context(g)
    p1, p0 = m.poly(1), m.poly(0)
    return Certificate(g, ell, delta, F, y, ctx.poly_series(p1, order), ctx.poly_series(p0, order),
                       p1, p0, predicted_d(g, ell), order,
                       nonapparent_infinity(problem.Q_series, kappa).nonapparent)


def quasiform_to_mode(d: Depth1Form) -> tuple[FracQSeries, FracQSeries]:
    """``Q = D_q^2 g2 / g2`` for ``g2 = f / sqrt(W)``, scaled so ``W`` is monic."""
    W = wronskian_series(d)
    if W.is_zero():
        raise WronskianNotSquareCompatible("Wronskian vanishes to the working precision")
    try:
        root = series_pow_frac(W / W.leading_coefficient(), Fraction(-1, 2))
    except ZeroSeries as exc:
        raise WronskianNotSquareCompatible(str(exc)) from None
    g2 = d.f * root
    Q = g2.dq().dq() / g2
    return Q, g2
