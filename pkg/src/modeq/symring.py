"""Weighted polynomials in modular-form generators with parametric coefficients.

Coefficients live in a :class:`ParamField`, the field of rational functions
over Q in a declared list of free parameters.  Sympy's sparse rational
function field does the gcd work; everything else here is hand rolled.

:class:`LocalValue` models the value of a quotient of generator polynomials
at a chosen point.  A :class:`Relation` says what is known about that point:
one generator vanishes (an elliptic point) or the square of the "odd"
generator equals a polynomial in the others (a non-elliptic point where a
given form vanishes).
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from typing import Callable, Iterable, Mapping, Sequence

import sympy
from sympy import QQ
from sympy.polys.fields import FracElement, field

from .errors import GeneratorMismatch
from .qseries import FracQSeries, to_fraction

GenTable = tuple  # tuple of (symbol, weight) pairs


class _Inhomogeneous:
    """Marker returned by :func:`weight_of` for mixed-weight polynomials."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "Inhomogeneous"


Inhomogeneous = _Inhomogeneous()


@lru_cache(maxsize=None)
def _frac_field(params: tuple[str, ...]):
    return field(list(params), QQ)[0]


class ParamField:
    """Q(p1, ..., pn) for the declared parameter names."""

    __slots__ = ("params", "K")

    def __init__(self, params: Iterable[str] = ()):
        self.params = tuple(params)
        if len(set(self.params)) != len(self.params):
            raise ValueError("parameter names must be distinct")
        self.K = _frac_field(self.params)

    def __eq__(self, other):
        return isinstance(other, ParamField) and self.params == other.params

    def __hash__(self):
        return hash(self.params)

    def __repr__(self):
        return f"ParamField({', '.join(self.params) or 'Q'})"

    @property
    def zero(self):
        return self.K.zero

    @property
    def one(self):
        return self.K.one

    def gen(self, name: str):
        try:
            return self.K.gens[self.params.index(name)]
        except ValueError:
            raise KeyError(f"{name!r} is not a parameter of {self}") from None

    def __call__(self, x):
        """Coerce ints, Fractions, strings and foreign field elements."""
        if isinstance(x, FracElement):
            if x.field is self.K:
                return x
            return self.K.from_expr(x.as_expr())
        if isinstance(x, str):
            try:
                return self.K(QQ(Fraction(x).numerator, Fraction(x).denominator))
            except ValueError:
                return self.parse(x)
        if isinstance(x, sympy.Basic):
            return self.K.from_expr(x)
        f = to_fraction(x)
        return self.K(QQ(f.numerator, f.denominator))

    def parse(self, text: str):
        names = {p: sympy.Symbol(p) for p in self.params}
        return self.K.from_expr(sympy.sympify(text, locals=names))

    def union(self, other: "ParamField") -> "ParamField":
        extra = [p for p in other.params if p not in self.params]
        return self if not extra else ParamField(self.params + tuple(extra))

    @staticmethod
    def of(x) -> "ParamField":
        """Smallest field holding the scalar ``x``."""
        if isinstance(x, (int, Fraction)):
            return ParamField()
        if hasattr(x, "field") and hasattr(x.field, "symbols"):
            return ParamField(tuple(str(s) for s in x.field.symbols))
        if isinstance(x, sympy.Basic):
            return ParamField(tuple(sorted(str(s) for s in x.free_symbols)))
        return ParamField()

    @staticmethod
    def as_rational(x) -> Fraction:
        """The rational value of a constant element, else ValueError."""
        if isinstance(x, Fraction):
            return x
        if isinstance(x, int):
            return Fraction(x)
        if not (x.numer.is_ground and x.denom.is_ground):
            raise ValueError(f"{x} depends on parameters")
        n = x.numer.LC if x.numer else 0
        d = x.denom.LC
        return Fraction(int(n.numerator), int(n.denominator)) / Fraction(int(d.numerator), int(d.denominator))

    @staticmethod
    def render(x) -> str:
        s = str(x.as_expr()).replace("**", "^")
        return s


def _render_coeff(c) -> str:
    s = ParamField.render(c)
    body = s[1:] if s.startswith("-") else s
    if body.replace("/", "").isdigit() or not any(ch in body for ch in "+-/ "):
        return s
    return f"({s})"


class WeightedPoly:
    """Polynomial in weighted generators with ParamField coefficients.

    ``terms`` maps exponent vectors to nonzero field elements.
    """

    __slots__ = ("gens", "field", "terms")

    def __init__(self, gens: GenTable, field: ParamField, terms: Mapping[tuple, object] | None = None):
        self.gens = tuple((str(n), int(w)) for n, w in gens)
        self.field = field
        clean = {}
        for e, c in (terms or {}).items():
            c = field(c)
            if c:
                clean[tuple(e)] = c
        self.terms = clean

    # ------------------------------------------------------------ factories
    @classmethod
    def const(cls, gens: GenTable, field: ParamField, c) -> "WeightedPoly":
        return cls(gens, field, {(0,) * len(gens): c})

    @classmethod
    def gen(cls, gens: GenTable, field: ParamField, name: str) -> "WeightedPoly":
        names = [n for n, _ in gens]
        if name not in names:
            raise GeneratorMismatch(f"{name!r} is not among generators {names}")
        e = tuple(int(n == name) for n in names)
        return cls(gens, field, {e: 1})

    @classmethod
    def monomial(cls, gens: GenTable, field: ParamField, exps: Sequence[int], c=1) -> "WeightedPoly":
        return cls(gens, field, {tuple(exps): c})

    # ------------------------------------------------------------ helpers
    @property
    def names(self) -> tuple[str, ...]:
        return tuple(n for n, _ in self.gens)

    @property
    def weights(self) -> tuple[int, ...]:
        return tuple(w for _, w in self.gens)

    def _new(self, terms) -> "WeightedPoly":
        out = WeightedPoly.__new__(WeightedPoly)
        out.gens, out.field = self.gens, self.field
        out.terms = {e: c for e, c in terms.items() if c}
        return out

    def _coerce(self, other) -> "WeightedPoly":
        return self._pair(other)[1]

    def _pair(self, other) -> tuple["WeightedPoly", "WeightedPoly"]:
        """Both operands over a common parameter field."""
        if isinstance(other, WeightedPoly):
            if other.gens != self.gens:
                raise GeneratorMismatch(f"generator tables differ: {self.names} vs {other.names}")
            if other.field != self.field:
                return _unify(self, other)
            return self, other
        K = self.field.union(ParamField.of(other))
        a = self if K == self.field else self.with_field(K)
        return a, WeightedPoly.const(self.gens, K, other)

    def with_field(self, field: ParamField) -> "WeightedPoly":
        return WeightedPoly(self.gens, field, {e: field(c) for e, c in self.terms.items()})

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(not any(e) for e in self.terms)

    def monomial_weight(self, e: Sequence[int]) -> int:
        return sum(a * w for a, (_, w) in zip(e, self.gens))

    def weight_of(self):
        return weight_of(self)

    def degree_in(self, name: str) -> int:
        i = self.names.index(name)
        return max((e[i] for e in self.terms), default=0)

    # ----------------------------------------------------------- arithmetic
    def __add__(self, other) -> "WeightedPoly":
        a, other = self._pair(other)
        out = dict(a.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, a.field.zero) + c
        return a._new(out)

    __radd__ = __add__

    def __neg__(self) -> "WeightedPoly":
        return self._new({e: -c for e, c in self.terms.items()})

    def __sub__(self, other) -> "WeightedPoly":
        a, b = self._pair(other)
        return a + (-b)

    def __rsub__(self, other) -> "WeightedPoly":
        a, b = self._pair(other)
        return b - a

    def __mul__(self, other) -> "WeightedPoly":
        a, other = self._pair(other)
        out: dict = {}
        zero = a.field.zero
        for e1, c1 in a.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(x + y for x, y in zip(e1, e2))
                out[e] = out.get(e, zero) + c1 * c2
        return a._new(out)

    __rmul__ = __mul__

    def __truediv__(self, other) -> "WeightedPoly":
        if isinstance(other, WeightedPoly):
            if not other.is_constant() or other.is_zero():
                raise TypeError("WeightedPoly can only be divided by nonzero constants; use LocalValue")
            other = other.terms[(0,) * len(self.gens)]
        c = self.field(other)
        if not c:
            raise ZeroDivisionError("division by zero")
        return self * (1 / c)

    def __pow__(self, n: int) -> "WeightedPoly":
        if not isinstance(n, int) or n < 0:
            raise ValueError("only nonnegative integer powers")
        result = WeightedPoly.const(self.gens, self.field, 1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other) -> bool:
        if isinstance(other, WeightedPoly):
            if self.gens != other.gens:
                return False
            a, b = _unify(self, other)
            return (a - b).is_zero()
        try:
            return (self - other).is_zero()
        except (TypeError, ValueError):
            return NotImplemented

    def __hash__(self):
        return hash((self.gens, frozenset(self.terms)))

    # ------------------------------------------------------------ calculus
    def diff(self, name: str) -> "WeightedPoly":
        i = self.names.index(name)
        out = {}
        for e, c in self.terms.items():
            if e[i]:
                e2 = list(e)
                e2[i] -= 1
                out[tuple(e2)] = c * e[i]
        return self._new(out)

    def derivation(self, images: Mapping[str, "WeightedPoly"]) -> "WeightedPoly":
        """Apply the derivation sending each generator to ``images[name]``."""
        total = WeightedPoly(self.gens, self.field)
        for name in self.names:
            d = self.diff(name)
            if not d.is_zero():
                total = total + d * images[name]
        return total

    def substitute(self, values: Mapping[str, "WeightedPoly"]) -> "WeightedPoly":
        """Replace generators by polynomials (same table)."""
        total = WeightedPoly(self.gens, self.field)
        cache: dict = {}
        for e, c in self.terms.items():
            term = WeightedPoly.const(self.gens, self.field, c)
            keep = [0] * len(e)
            for i, (name, a) in enumerate(zip(self.names, e)):
                if a and name in values:
                    key = (name, a)
                    if key not in cache:
                        cache[key] = values[name] ** a
                    term = term * cache[key]
                else:
                    keep[i] = a
            total = total + term * WeightedPoly.monomial(self.gens, self.field, keep)
        return total

    def map_coeffs(self, fn: Callable) -> "WeightedPoly":
        return self._new({e: self.field(fn(c)) for e, c in self.terms.items()})

    def evaluate_series(self, series: Mapping[str, FracQSeries], trunc) -> FracQSeries:
        """q-expansion, given expansions of the generators.

        Coefficients must be rational constants.
        """
        total = FracQSeries.zero(trunc)
        powers: dict = {}
        for e, c in self.terms.items():
            term = FracQSeries.constant(ParamField.as_rational(c), trunc)
            for name, a in zip(self.names, e):
                if a:
                    if (name, a) not in powers:
                        powers[(name, a)] = series[name] ** a
                    term = term * powers[(name, a)]
            total = total + term
        return total

    # ------------------------------------------------------------ rendering
    def sorted_terms(self) -> list[tuple[tuple, object]]:
        """Terms in descending grevlex order on exponent vectors."""
        def key(item):
            e = item[0]
            return (sum(e), tuple(-x for x in reversed(e)))
        return sorted(self.terms.items(), key=key, reverse=True)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for e, c in self.sorted_terms():
            mono = "*".join(n if a == 1 else f"{n}^{a}" for n, a in zip(self.names, e) if a)
            cs = _render_coeff(c)
            if not mono:
                parts.append(cs)
            elif cs == "1":
                parts.append(mono)
            elif cs == "-1":
                parts.append("-" + mono)
            else:
                parts.append(f"{cs}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")

    __repr__ = __str__


def weight_of(a: WeightedPoly):
    """Common weight of all monomials, ``Inhomogeneous`` if they differ.

    The zero polynomial and constants have weight 0.
    """
    ws = {a.monomial_weight(e) for e in a.terms}
    if not ws:
        return 0
    if len(ws) > 1:
        return Inhomogeneous
    return ws.pop()


# --------------------------------------------------------------------------
# univariate helpers over the parameter field


def _uni_trim(p: dict) -> dict:
    return {k: v for k, v in p.items() if v}


def _uni_divmod(a: dict, b: dict) -> tuple[dict, dict]:
    a = dict(a)
    db = max(b)
    lb = b[db]
    q: dict = {}
    while a and max(a) >= db:
        da = max(a)
        f = a[da] / lb
        q[da - db] = f
        for k, v in b.items():
            a[k + da - db] = a.get(k + da - db, 0) - f * v
        a = _uni_trim(a)
    return q, a


def _uni_gcd(a: dict, b: dict) -> dict:
    a, b = _uni_trim(a), _uni_trim(b)
    while b:
        _, r = _uni_divmod(a, b)
        a, b = b, r
    if not a:
        return a
    lead = a[max(a)]
    return {k: v / lead for k, v in a.items()}


class Relation:
    """What is known at the evaluation point.

    ``kind`` is ``"zero"`` (generator ``symbol`` vanishes), ``"square"``
    (``symbol**2`` equals ``replacement``, a polynomial free of ``symbol``)
    or ``"none"`` (a generic point, nothing is reduced).
    """

    __slots__ = ("kind", "symbol", "replacement", "label")

    def __init__(self, kind: str, symbol: str | None = None,
                 replacement: WeightedPoly | None = None, label: str = ""):
        if kind not in ("zero", "square", "none"):
            raise ValueError(f"unknown relation kind {kind!r}")
        if kind == "square":
            if replacement is None or replacement.degree_in(symbol) != 0:
                raise ValueError("square relation needs a replacement free of the eliminated symbol")
        self.kind, self.symbol, self.replacement, self.label = kind, symbol, replacement, label

    @classmethod
    def zero(cls, symbol: str, label: str = "") -> "Relation":
        return cls("zero", symbol, label=label or f"{symbol} = 0")

    @classmethod
    def square(cls, symbol: str, replacement: WeightedPoly, label: str = "") -> "Relation":
        return cls("square", symbol, replacement, label or f"{symbol}^2 -> {replacement}")

    @classmethod
    def none(cls) -> "Relation":
        return cls("none", label="generic point")

    def __repr__(self):
        return f"Relation({self.label})"

    def reduce(self, p: WeightedPoly) -> WeightedPoly:
        if self.kind == "none":
            return p
        i = p.names.index(self.symbol)
        if self.kind == "zero":
            return p._new({e: c for e, c in p.terms.items() if e[i] == 0})
        rep = self.replacement
        if rep.field != p.field:
            rep = rep.with_field(p.field)
        out = WeightedPoly(p.gens, p.field)
        kept: dict = {}
        powers = {0: WeightedPoly.const(p.gens, p.field, 1)}
        for e, c in p.terms.items():
            j, parity = divmod(e[i], 2)
            if j == 0:
                kept[e] = kept.get(e, p.field.zero) + c
                continue
            if j not in powers:
                powers[j] = rep ** j
            e2 = list(e)
            e2[i] = parity
            out = out + powers[j] * WeightedPoly.monomial(p.gens, p.field, e2, c)
        return out + p._new(kept)


class LocalValue:
    """Value of ``num/den`` at a point described by a :class:`Relation`.

    The canonical representative has a numerator reduced by the relation
    and a denominator free of the eliminated symbol; common univariate
    factors are cancelled and the denominator is made monic.
    """

    __slots__ = ("num", "den", "relation")

    def __init__(self, num: WeightedPoly, den: WeightedPoly | None = None, relation: Relation | None = None):
        relation = relation or Relation.none()
        if den is None:
            den = WeightedPoly.const(num.gens, num.field, 1)
        num, den = _unify(num, den)
        if relation.kind == "square" and relation.replacement.field != num.field:
            fld = relation.replacement.field.union(num.field)
            num, den = num.with_field(fld), den.with_field(fld)
        self.relation = relation
        self.num, self.den = self._canonical(relation.reduce(num), relation.reduce(den))

    @classmethod
    def const(cls, gens: GenTable, field: ParamField, c, relation: Relation | None = None) -> "LocalValue":
        return cls(WeightedPoly.const(gens, field, c), None, relation)

    def _canonical(self, num: WeightedPoly, den: WeightedPoly):
        rel = self.relation
        if den.is_zero():
            raise ZeroDivisionError("denominator vanishes at this point")
        if num.is_zero():
            return num, WeightedPoly.const(num.gens, num.field, 1)
        if rel.kind == "square" and den.degree_in(rel.symbol) > 0:
            i = den.names.index(rel.symbol)
            conj = den._new({e: (-c if e[i] % 2 else c) for e, c in den.terms.items()})
            num = rel.reduce(num * conj)
            den = rel.reduce(den * conj)
            if den.is_zero():
                raise ZeroDivisionError("denominator is a zero divisor modulo the point relation")
        free = [n for n in num.names if not (rel.kind in ("zero", "square") and n == rel.symbol)]
        if len(free) == 1:
            num, den = _cancel_univariate(num, den, free[0], rel.symbol if rel.kind == "square" else None)
        lead = den.sorted_terms()[0][1]
        inv = 1 / lead
        return num * inv, den * inv

    # --------------------------------------------------------- arithmetic
    def _lift(self, other) -> "LocalValue":
        if isinstance(other, LocalValue):
            if other.num.gens != self.num.gens:
                raise GeneratorMismatch("generator tables differ")
            return other
        if isinstance(other, WeightedPoly):
            return LocalValue(other, None, self.relation)
        return LocalValue.const(self.num.gens, self.num.field, other, self.relation)

    def __add__(self, other) -> "LocalValue":
        o = self._lift(other)
        if o.den == self.den:
            return LocalValue(self.num + o.num, self.den, self.relation)
        return LocalValue(self.num * o.den + o.num * self.den, self.den * o.den, self.relation)

    __radd__ = __add__

    def __neg__(self) -> "LocalValue":
        return LocalValue(-self.num, self.den, self.relation)

    def __sub__(self, other) -> "LocalValue":
        return self + (-self._lift(other))

    def __rsub__(self, other) -> "LocalValue":
        return self._lift(other) - self

    def __mul__(self, other) -> "LocalValue":
        o = self._lift(other)
        return LocalValue(self.num * o.num, self.den * o.den, self.relation)

    __rmul__ = __mul__

    def __truediv__(self, other) -> "LocalValue":
        o = self._lift(other)
        if o.is_zero():
            raise ZeroDivisionError("division by a value that vanishes at this point")
        return LocalValue(self.num * o.den, self.den * o.num, self.relation)

    def __rtruediv__(self, other) -> "LocalValue":
        return self._lift(other) / self

    def __pow__(self, n: int) -> "LocalValue":
        if n < 0:
            return LocalValue.const(self.num.gens, self.num.field, 1, self.relation) / (self ** -n)
        return LocalValue(self.num ** n, self.den ** n, self.relation)

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def __eq__(self, other) -> bool:
        try:
            return (self - self._lift(other)).is_zero()
        except (TypeError, ValueError):
            return NotImplemented

    def __hash__(self):
        return hash((str(self.num), str(self.den)))

    def weight_of(self):
        wn, wd = weight_of(self.num), weight_of(self.den)
        if wn is Inhomogeneous or wd is Inhomogeneous:
            return Inhomogeneous
        if self.num.is_zero():
            return Inhomogeneous
        return wn - wd

    def scalar_part(self):
        """``(c, exps)`` with self = c * monomial(exps), for single-term values."""
        if len(self.num.terms) != 1 or len(self.den.terms) != 1:
            raise ValueError(f"{self} is not a single monomial")
        (en, cn), = self.num.terms.items()
        (ed, cd), = self.den.terms.items()
        return cn / cd, tuple(a - b for a, b in zip(en, ed))

    def coefficient(self):
        """The field element ``c`` when ``self == c * monomial`` (zero gives 0)."""
        if self.is_zero():
            return self.num.field.zero
        return self.scalar_part()[0]

    def __str__(self) -> str:
        if self.den.is_constant():
            return str(self.num)
        return f"({self.num})/({self.den})"

    __repr__ = __str__


def _unify(a: WeightedPoly, b: WeightedPoly) -> tuple[WeightedPoly, WeightedPoly]:
    if a.gens != b.gens:
        raise GeneratorMismatch("generator tables differ")
    if a.field != b.field:
        f = a.field.union(b.field)
        return a.with_field(f), b.with_field(f)
    return a, b


def _cancel_univariate(num: WeightedPoly, den: WeightedPoly, var: str, odd: str | None):
    """Cancel the gcd in ``var`` of the numerator parts and the denominator."""
    names = num.names
    iv = names.index(var)
    io = names.index(odd) if odd else None

    def split(p):
        parts: dict = {}
        for e, c in p.terms.items():
            par = e[io] if io is not None else 0
            parts.setdefault(par, {})[e[iv]] = c
        return parts

    n_parts = split(num)
    d_parts = split(den)
    if set(d_parts) - {0}:
        return num, den
    g = d_parts.get(0, {})
    for part in n_parts.values():
        g = _uni_gcd(g, part)
        if len(g) == 1 and max(g) == 0:
            return num, den
    if not g or (len(g) == 1 and max(g) == 0):
        return num, den

    def rebuild(parts):
        out = {}
        for par, uni in parts.items():
            q, r = _uni_divmod(uni, g)
            assert not r
            for k, c in q.items():
                e = [0] * len(names)
                e[iv] = k
                if io is not None:
                    e[io] = par
                out[tuple(e)] = c
        return num._new(out)

    return rebuild(n_parts), rebuild(d_parts)


def poly_arith(a, b, op: str):
    """Dispatch ``add``, ``mul`` or ``div`` on WeightedPoly/LocalValue operands."""
    if op == "add":
        return a + b
    if op == "mul":
        return a * b
    if op == "div":
        if isinstance(a, WeightedPoly) and isinstance(b, WeightedPoly) and not b.is_constant():
            return LocalValue(a, b)
        return a / b
    raise ValueError(f"unknown op {op!r}")
