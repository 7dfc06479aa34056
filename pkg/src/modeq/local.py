"""Local analysis at points of the upper half-plane.

Around a point ``z0`` a form of weight ``k`` has the expansion
``sum_n theta^[n] f(z0) / n! * x^n`` once the weight-``k`` automorphy factor
is stripped, where ``x`` is a rescaled local coordinate.  Reducing each
coefficient by what is known at ``z0`` (a generator vanishes at an elliptic
point, or ``odd^2`` is a multiple of an even monomial at an interior point)
gives a :class:`Jet`.  Jets multiply like power series, so quotients of
forms are handled by series division.

Jets of ``Q`` give the indicial equation ``alpha^2 - alpha - a_{-2} = 0``
and the obstruction to the point being apparent.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Sequence

import sympy

from .errors import (DegenerateParameter, InhomogeneousInput, IndicialMismatch,
                     InsufficientPrecision, NotSimpleZero, UnsupportedArity)
from .groups import _CHAR_ORDER, CharacterLabel, context, parse_character
from .qseries import FracQSeries, Scalar, to_fraction
from .symring import Inhomogeneous, LocalValue, ParamField, Relation, WeightedPoly, weight_of

POINT_KINDS = ("rho1", "rho2", "interior")

# Scale relating r1 to the leading Laurent coefficient at an interior point.
INTERIOR_SCALE = {"SL2Z": 1728, "G2plus": 256, "G3plus": 108}


# ---------------------------------------------------------------- derivatives

def theta_iter(g: WeightedPoly, k: int, n: int, group: str) -> WeightedPoly:
    """``theta^[n] g`` for ``g`` homogeneous of weight ``k``."""
    return theta_sequence(g, k, n, group)[n]


def theta_sequence(g: WeightedPoly, k: int, n: int, group: str) -> list[WeightedPoly]:
    ctx = context(group)
    w = weight_of(g)
    if w is Inhomogeneous or (not g.is_zero() and w != k):
        raise InhomogeneousInput(f"{g} is not homogeneous of weight {k}")
    images = {s: ctx.serre[s].with_field(g.field) for s in g.names}
    M = ctx.M_form.with_field(g.field)
    out = [g]
    if n >= 1:
        out.append(g.derivation(images))
    for m in range(1, n):
        nxt = out[m].derivation(images) + M * out[m - 1] * Fraction(m * (k + m - 1), ctx.anomaly)
        out.append(nxt)
    return out


# ---------------------------------------------------------------- points

def _param(t) -> tuple[ParamField, object]:
    """Coerce an interior parameter to ``(field, element)``."""
    if isinstance(t, str):
        try:
            return ParamField(), ParamField()(Fraction(t))
        except ValueError:
            K = ParamField((t,)) if t.isidentifier() else ParamField(tuple(str(s) for s in sympy.sympify(t).free_symbols))
            return K, K(t)
    if isinstance(t, (int, Fraction)):
        return ParamField(), ParamField()(t)
    expr = t.as_expr() if hasattr(t, "as_expr") else sympy.sympify(t)
    names = tuple(sorted(str(s) for s in expr.free_symbols))
    K = ParamField(names)
    return K, K(expr)


def interior_relation(group: str, t) -> Relation:
    """Relation holding at the interior point with parameter ``t``."""
    ctx = context(group)
    K, tv = _param(t)
    if tv == K.zero or tv == K.one:
        raise DegenerateParameter(f"t={t} is not an interior point")
    odd = ctx.odd_generator
    even = ctx.gen_poly(ctx.even_generator, K)
    if ctx.name == "SL2Z":
        rep = even ** 3 * (1 / tv)
    elif ctx.name == "G2plus":
        rep = even ** 4 * tv
    else:
        rep = even ** 6 * (1 / tv)
    return Relation.square(odd, rep, f"interior t={ParamField.render(tv)}")


def point_relation(group: str, point: str, t=None) -> Relation:
    ctx = context(group)
    if point == "rho1":
        return Relation.zero(ctx.odd_generator)
    if point == "rho2":
        return Relation.zero(ctx.even_generator)
    if point == "interior":
        if t is None:
            raise ValueError("an interior point needs its parameter t")
        return interior_relation(ctx.name, t)
    raise ValueError(f"unknown point kind {point!r}; expected one of {POINT_KINDS}")


def elliptic_order(group: str, point: str) -> int:
    ctx = context(group)
    return {"rho1": ctx.elliptic[0].order, "rho2": ctx.elliptic[1].order}[point]


# ---------------------------------------------------------------- jets

@dataclass
class Jet:
    group: str
    point: str
    t: object
    weight: int
    n0: int
    nmax: int
    coeffs: dict[int, LocalValue]
    relation: Relation = field(repr=False, default=None)

    def _zero(self) -> LocalValue:
        gens = context(self.group).gens
        return LocalValue.const(gens, ParamField(), 0, self.relation)

    def __getitem__(self, n: int) -> LocalValue:
        if n > self.nmax:
            raise InsufficientPrecision(f"jet known only up to x^{self.nmax}")
        return self.coeffs.get(n) or self._zero()

    def items(self) -> Iterator[tuple[int, LocalValue]]:
        for n in range(self.n0, self.nmax + 1):
            yield n, self[n]

    def valuation(self) -> int:
        for n in range(self.n0, self.nmax + 1):
            if n in self.coeffs and not self.coeffs[n].is_zero():
                return n
        return self.nmax + 1

    def _like(self, weight: int, n0: int, nmax: int, coeffs: dict) -> "Jet":
        coeffs = {n: c for n, c in coeffs.items() if not c.is_zero()}
        return Jet(self.group, self.point, self.t, weight, n0, nmax, coeffs, self.relation)

    def __add__(self, other: "Jet") -> "Jet":
        if self.weight != other.weight:
            raise InhomogeneousInput("jets of different weights cannot be added")
        lo, hi = min(self.n0, other.n0), min(self.nmax, other.nmax)
        return self._like(self.weight, lo, hi, {n: self[n] + other[n] for n in range(lo, hi + 1)})

    def __neg__(self) -> "Jet":
        return self._like(self.weight, self.n0, self.nmax, {n: -c for n, c in self.coeffs.items()})

    def __sub__(self, other: "Jet") -> "Jet":
        return self + (-other)

    def scale(self, c) -> "Jet":
        return self._like(self.weight, self.n0, self.nmax, {n: v * c for n, v in self.coeffs.items()})

    def __mul__(self, other: "Jet") -> "Jet":
        va, vb = self.valuation(), other.valuation()
        hi = min(self.nmax + vb, other.nmax + va)
        out = {}
        for n in range(va + vb, hi + 1):
            acc = None
            for i in range(va, n - vb + 1):
                a, b = self.coeffs.get(i), other.coeffs.get(n - i)
                if a is None or b is None:
                    continue
                acc = a * b if acc is None else acc + a * b
            if acc is not None:
                out[n] = acc
        return self._like(self.weight + other.weight, va + vb, hi, out)

    def inverse(self) -> "Jet":
        v = self.valuation()
        if v > self.nmax:
            raise ZeroDivisionError("jet vanishes to its known order")
        lead = self.coeffs[v]
        hi = self.nmax - 2 * v
        b: dict[int, LocalValue] = {-v: 1 / lead}
        for m in range(1, hi + v + 1):
            acc = None
            for i in range(1, m + 1):
                a = self.coeffs.get(v + i)
                if a is None or (-v + m - i) not in b:
                    continue
                term = a * b[-v + m - i]
                acc = term if acc is None else acc + term
            if acc is not None:
                b[-v + m] = -(acc / lead)
        return self._like(-self.weight, -v, hi, b)

    def __truediv__(self, other: "Jet") -> "Jet":
        return self * other.inverse()

    def truncate(self, nmax: int) -> "Jet":
        return self._like(self.weight, self.n0, min(nmax, self.nmax),
                          {n: c for n, c in self.coeffs.items() if n <= nmax})

    def __str__(self) -> str:
        parts = [f"[{n}] {c}" for n, c in sorted(self.coeffs.items())]
        return f"Jet({self.group}, {self.point}, weight {self.weight}, n<={self.nmax}): " + (
            "; ".join(parts) if parts else "0")


def poly_jet(g: WeightedPoly, k: int, point: str, nmax: int, group: str, t=None,
             relation: Relation | None = None) -> Jet:
    """Jet of a homogeneous polynomial: ``a_n = theta^[n] g (z0) / n!``."""
    ctx = context(group)
    rel = relation or point_relation(ctx.name, point, t)
    seq = theta_sequence(g, k, max(nmax, 0), ctx.name)
    coeffs = {}
    fact = 1
    for n, p in enumerate(seq):
        if n:
            fact *= n
        val = LocalValue(p * Fraction(1, fact), None, rel)
        if not val.is_zero():
            coeffs[n] = val
    return Jet(ctx.name, point, t, k, 0, nmax, coeffs, rel)


Factors = Sequence[tuple[WeightedPoly, int]]


def _as_factors(den) -> list[tuple[WeightedPoly, int]]:
    if den is None:
        return []
    if isinstance(den, WeightedPoly):
        return [(den, 1)]
    return [(p, int(e)) for p, e in den]


def jet_of(gexpr, k: int, point: str, nmax: int, group: str, t=None) -> Jet:
    """Jet of a polynomial or a quotient ``(numerator, denominator factors)``.

    ``gexpr`` is a WeightedPoly or a pair ``(N, D)`` where ``D`` is a
    polynomial or a list of ``(factor, power)``.  ``k`` is the weight of the
    whole expression.  A denominator factor vanishing at the point must
    vanish simply.
    """
    ctx = context(group)
    rel = point_relation(ctx.name, point, t)
    if isinstance(gexpr, WeightedPoly):
        return poly_jet(gexpr, k, point, nmax, ctx.name, t, rel)
    num, den = gexpr
    factors = _as_factors(den)
    v_den = 0
    for p, e in factors:
        wp = weight_of(p)
        if wp is Inhomogeneous:
            raise InhomogeneousInput(f"denominator factor {p} is not homogeneous")
        j = poly_jet(p, wp, point, 1, ctx.name, t, rel)
        if j[0].is_zero():
            if j[1].is_zero():
                raise NotSimpleZero(f"{p} does not vanish simply at this point")
            v_den += e
    depth = nmax + 2 * v_den
    D = None
    for p, e in factors:
        jp = poly_jet(p, weight_of(p), point, depth, ctx.name, t, rel)
        for _ in range(e):
            D = jp if D is None else D * jp
    wn = weight_of(num)
    if wn is Inhomogeneous:
        raise InhomogeneousInput(f"numerator {num} is not homogeneous")
    if num.is_zero():
        wn = k + (D.weight if D is not None else 0)
    N = poly_jet(num, wn, point, depth, ctx.name, t, rel)
    J = N if D is None else N / D
    if J.weight != k:
        raise InhomogeneousInput(f"quotient has weight {J.weight}, expected {k}")
    return J.truncate(nmax)


def vanishing_law_holds(jet: Jet, character=None) -> bool:
    """At an elliptic point of order ``e``: ``a_n = 0`` unless ``k + 2n = s mod 2e``.

    An integer ``character`` is a character index, not a sign.

    ``s`` is 0 for the trivial character.  A character of order ``m`` with
    index ``j`` moves it to ``2e*j/m``, since the stabilizer then acts by a
    root of unity instead of by 1.
    """
    if jet.point == "interior":
        return True
    e = elliptic_order(jet.group, jet.point)
    shift = 0
    if character is not None:
        ch = (CharacterLabel(jet.group, character) if isinstance(character, int)
              else parse_character(jet.group, character))
        shift = 2 * e * ch.index // _CHAR_ORDER[jet.group]
    return all(c.is_zero() or (jet.weight + 2 * n - shift) % (2 * e) == 0 for n, c in jet.coeffs.items())


# ---------------------------------------------------------------- indicial data

@dataclass
class IndicialRoots:
    a_minus2: object
    roots: tuple
    kappa: object


def _scalar(v: LocalValue):
    return v.coefficient()


def _to_sympy(x):
    if isinstance(x, Fraction):
        return sympy.Rational(x.numerator, x.denominator)
    return x.as_expr() if hasattr(x, "as_expr") else sympy.sympify(x)


def indicial(jet: Jet) -> IndicialRoots:
    """Roots of ``alpha^2 - alpha - a_{-2} = 0`` for the jet of ``Q``."""
    if jet.valuation() < -2:
        raise IndicialMismatch(f"pole of order {-jet.valuation()} exceeds 2")
    a = _scalar(jet[-2]) if jet.n0 <= -2 else ParamField().zero
    try:
        ar = ParamField.as_rational(a)
    except (TypeError, ValueError):
        ar = None
    if ar is not None:
        disc = 1 + 4 * ar
        kappa = _rational_sqrt(disc)
        if kappa is not None:
            kappa = kappa / 2
            return IndicialRoots(ar, (Fraction(1, 2) - kappa, Fraction(1, 2) + kappa), kappa)
        a = ar
    s = _to_sympy(a)
    kap = sympy.sqrt(1 + 4 * s) / 2
    return IndicialRoots(a, (sympy.Rational(1, 2) - kap, sympy.Rational(1, 2) + kap), kap)


def _rational_sqrt(x: Fraction) -> Fraction | None:
    if x < 0:
        return None
    n, d = x.numerator, x.denominator
    rn, rd = sympy.integer_nthroot(n, 2), sympy.integer_nthroot(d, 2)
    if rn[1] and rd[1]:
        return Fraction(int(rn[0]), int(rd[0]))
    return None


@dataclass
class ApparencyReport:
    kappa: Fraction
    local_exponents: tuple[Fraction, Fraction]
    c_coeffs: list[LocalValue]
    obstruction: LocalValue
    apparent: bool


def apparent_obstruction(jet: Jet, kappa: Scalar) -> ApparencyReport:
    """Run the Frobenius recursion from ``1/2 - kappa`` and return the obstruction."""
    kappa = to_fraction(kappa)
    N = 2 * kappa
    if N.denominator != 1 or N < 1:
        raise IndicialMismatch(f"2*kappa={N} must be a positive integer")
    N = int(N)
    alpha = Fraction(1, 2) - kappa
    expected = alpha * (alpha - 1)
    if jet[-2] != expected:
        raise IndicialMismatch(f"a_(-2)={jet[-2]} but kappa={kappa} needs {expected}")
    if jet.nmax < N - 2:
        raise InsufficientPrecision(f"jet known to x^{jet.nmax}, need x^{N - 2}")
    c = [LocalValue.const(context(jet.group).gens, ParamField(), 1, jet.relation)]
    for n in range(1, N):
        acc = c[0] * 0
        for j in range(n):
            acc = acc + jet[n - j - 2] * c[j]
        c.append(acc / (n * (n - N)))
    obstruction = c[0] * 0
    for j in range(N):
        obstruction = obstruction + jet[N - j - 2] * c[j]
    return ApparencyReport(kappa, (alpha, Fraction(1, 2) + kappa), c, obstruction, obstruction.is_zero())


# ---------------------------------------------------------------- Q families

@dataclass
class QFamily:
    """``Q`` as a combination of fixed weight-4 quotients with parameters.

    ``interior`` holds ``(t_j, r1_j, r2_j)`` with ``t_j`` in the local
    orientation of :func:`interior_relation`.
    """

    group: str
    r: object
    s: object
    t: object
    interior: tuple = ()

    def __post_init__(self):
        self.group = context(self.group).name
        ts = [str(x[0]) for x in self.interior]
        if len(set(ts)) != len(ts):
            raise DegenerateParameter("interior parameters must be pairwise distinct")
        for tj, _, _ in self.interior:
            K, tv = _param(tj)
            if tv == K.zero or tv == K.one:
                raise DegenerateParameter(f"t={tj} is not an interior point")

    @property
    def field(self) -> ParamField:
        K = ParamField()
        for x in self._params():
            K = K.union(_param(x)[0])
        return K

    def _params(self) -> list:
        out = [self.r, self.s, self.t]
        for row in self.interior:
            out.extend(row)
        return out

    def _pieces(self, K: ParamField) -> tuple[WeightedPoly, WeightedPoly, WeightedPoly, WeightedPoly]:
        """``(weight-4 form, cusp form, even generator, odd generator)``."""
        ctx = context(self.group)
        odd = ctx.gen_poly(ctx.odd_generator, K)
        even = ctx.gen_poly(ctx.even_generator, K)
        if self.group == "SL2Z":
            return even, (even ** 3 - odd ** 2) * Fraction(1, 1728), even, odd
        if self.group == "G2plus":
            return even ** 2, (even ** 4 - odd ** 2) * Fraction(1, 256), even, odd
        return even ** 4, (even ** 6 - odd ** 2) * Fraction(1, 108), even, odd

    def interior_form(self, tj, K: ParamField | None = None) -> WeightedPoly:
        ctx = context(self.group)
        Kt, tv = _param(tj)
        K = Kt if K is None else K.union(Kt)
        tv = K(tv.as_expr() if hasattr(tv, "as_expr") else tv)
        odd = ctx.gen_poly(ctx.odd_generator, K)
        even = ctx.gen_poly(ctx.even_generator, K)
        if self.group == "SL2Z":
            return even ** 3 - odd ** 2 * tv
        if self.group == "G2plus":
            return odd ** 2 - even ** 4 * tv
        return even ** 6 - odd ** 2 * tv

    def terms(self) -> list[tuple[object, WeightedPoly, list[tuple[WeightedPoly, int]]]]:
        """``(coefficient, numerator, denominator factors)`` for each piece of ``Q``."""
        K = self.field
        base, cusp, even, odd = self._pieces(K)
        out = [(K(_to_sympy(self.r)), base, []),
               (K(_to_sympy(self.s)), cusp, [(even, 2)]),
               (K(_to_sympy(self.t)), base * cusp, [(odd, 2)])]
        for tj, r1, r2 in self.interior:
            F = self.interior_form(tj, K)
            out.append((K(_to_sympy(r1)), base * cusp ** 2, [(F, 2)]))
            out.append((K(_to_sympy(r2)), base * cusp, [(F, 1)]))
        return out

    def jet(self, point: str, nmax: int, t=None) -> Jet:
        total = None
        for c, num, den in self.terms():
            if c == 0:
                continue
            j = jet_of((num * c, den), 4, point, nmax, self.group, t)
            total = j if total is None else total + j
        if total is None:
            total = jet_of(self._pieces(self.field)[0] * 0, 4, point, nmax, self.group, t)
        return total

    def series(self, order: Scalar) -> FracQSeries:
        ctx = context(self.group)
        order = to_fraction(order)
        out = FracQSeries.zero(order)
        for c, num, den in self.terms():
            c = ParamField.as_rational(c)
            if c == 0:
                continue
            num = num.map_coeffs(ParamField.as_rational).with_field(ParamField())
            s = ctx.poly_series(num, order)
            for p, e in den:
                p = p.with_field(ParamField()) if p.field.params else p
                ps = ctx.poly_series(p, order)
                for _ in range(e):
                    s = s / ps
            out = out + s * c
        return out.truncate(order)

    def __str__(self) -> str:
        names = {"SL2Z": ("E4", "Delta/E4^2", "E4*Delta/E6^2", "E4*Delta^2/F{j}^2", "E4*Delta/F{j}"),
                 "G2plus": ("M4", "M8/M4", "M4*M8/(M4^2-256*M8)", "M4*M8^2/F{j}^2", "M4*M8/F{j}"),
                 "G3plus": ("M4", "M6/M2", "M4*M6/M3^2", "M4*M6^2/F{j}^2", "M4*M6/F{j}")}[self.group]
        parts = [(self.r, names[0]), (self.s, names[1]), (self.t, names[2])]
        for j, (tj, r1, r2) in enumerate(self.interior, 1):
            parts.append((r1, names[3].format(j=j)))
            parts.append((r2, names[4].format(j=j)))
        text = " + ".join(f"({ParamField.render(_param(c)[1])})*{n}" for c, n in parts
                          if str(c) not in ("0", "0/1")) or "0"
        fdefs = []
        shape = {"SL2Z": "E4^3 - ({t})*E6^2", "G2plus": "M4m^2 - ({t})*M4^2", "G3plus": "M1^6 - ({t})*M3^2"}
        for j, (tj, _, _) in enumerate(self.interior, 1):
            fdefs.append(f"F{j} = " + shape[self.group].format(t=ParamField.render(_param(tj)[1])))
        return "Q = " + text + ("; " + ", ".join(fdefs) if fdefs else "")


def indicial_parameters(group: str, spec) -> dict:
    """``r, s, t`` and the ``r1_j`` fixed by the prescribed local exponents."""
    ctx = context(group)
    g = ctx.name
    q = lambda k: k * k - Fraction(1, 4)
    k1, k2 = spec.kappa_rho1, spec.kappa_rho2
    if g == "SL2Z":
        s, t = -192 * q(k2), 432 * q(k1)
    elif g == "G2plus":
        s, t = -16 * q(k2), 64 * q(k1)
    else:
        s, t = -3 * q(k2), 27 * q(k1)
    C = INTERIOR_SCALE[g]
    r1 = []
    for tj, kj in spec.interior:
        K, tv = _param(tj)
        r1.append(tv * (C * C * q(kj)))
    return {"r": spec.kappa_inf ** 2, "s": s, "t": t, "r1": r1}


@dataclass
class QConstruction:
    group: str
    spec: object
    solutions: list[QFamily]
    polynomial: object = None
    degree: int = 0
    unresolved: list = field(default_factory=list)

    def __iter__(self):
        return iter(self.solutions)

    def __len__(self) -> int:
        return len(self.solutions)


def obstruction_polynomial(group: str, spec, param: str = "r2") -> tuple[sympy.Poly, QFamily]:
    """``P1(r2)``: the apparentness condition at the single interior point."""
    if len(spec.interior) != 1:
        raise UnsupportedArity("the obstruction polynomial is built for one interior point")
    pars = indicial_parameters(group, spec)
    (tj, kj), = spec.interior
    Kt, tv = _param(tj)
    K = Kt.union(ParamField((param,)))
    fam = QFamily(group, pars["r"], pars["s"], pars["t"], ((tv, pars["r1"][0], K.gen(param)),))
    N = int(2 * kj)
    jet = fam.jet("interior", N - 2, tv)
    rep = apparent_obstruction(jet, kj)
    coef = _to_sympy(rep.obstruction.coefficient()) if not rep.obstruction.is_zero() else sympy.Integer(0)
    num, _ = sympy.fraction(sympy.together(coef))
    sym = sympy.Symbol(param)
    return sympy.Poly(num, sym), fam


def construct_Q(group: str, spec) -> QConstruction:
    """Every ``Q`` with the prescribed local exponents that is apparent inside ``H``."""
    spec.check(group)
    g = context(group).name
    if len(spec.interior) >= 2:
        raise UnsupportedArity("at most one interior singular point is supported")
    for tj, _ in spec.interior:
        K, tv = _param(tj)
        if tv == K.zero or tv == K.one:
            raise DegenerateParameter(f"t={tj} is not an interior point")
    pars = indicial_parameters(g, spec)
    if not spec.interior:
        return QConstruction(g, spec, [QFamily(g, pars["r"], pars["s"], pars["t"])], None, 0)
    P, fam = obstruction_polynomial(g, spec)
    sym = P.gens[0]
    (tj, _), = spec.interior
    solutions, unresolved = [], []
    _, factors = sympy.factor_list(P.as_expr(), sym)
    for fac, mult in factors:
        fp = sympy.Poly(fac, sym)
        if fp.degree() == 0:
            continue
        if fp.degree() == 1:
            a1, a0 = fp.all_coeffs()
            root = sympy.simplify(-a0 / a1)
            for _ in range(mult):
                solutions.append(QFamily(g, pars["r"], pars["s"], pars["t"],
                                         ((tj, pars["r1"][0], _from_sympy(root)),)))
        else:
            unresolved.append((fac, mult))
    return QConstruction(g, spec, solutions, P, P.degree(), unresolved)


def _from_sympy(x):
    x = sympy.nsimplify(x) if not x.free_symbols else x
    if x.is_Rational:
        return Fraction(int(x.p), int(x.q))
    return x
