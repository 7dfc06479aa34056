"""Truncated q-series with rational exponents on a fixed grid.

A :class:`FracQSeries` stores the coefficients of ``q^(n/N)`` for integer
``n`` together with a rational truncation ``T``: the series is known modulo
``O(q^T)``.  Precision is tracked pessimistically, so arithmetic never
claims more coefficients than its inputs justify.

>>> a = FracQSeries.from_coefficients([1, -24], trunc=2)
>>> b = FracQSeries.from_coefficients([1, 240], trunc=2)
>>> a * b
1 + 216*q + O(q^2)
"""

from __future__ import annotations

import json
import math
from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Union

from .errors import DivisionByZeroSeries, InsufficientPrecision, NonMonicBase, ZeroSeries

Scalar = Union[int, Fraction]


def to_fraction(x) -> Fraction:
    """Coerce ints, Fractions and ``"p/q"`` strings to a Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    if hasattr(x, "numerator") and hasattr(x, "denominator"):
        return Fraction(int(x.numerator), int(x.denominator))
    raise TypeError(f"cannot interpret {x!r} as an exact rational")


def _is_scalar(x) -> bool:
    return isinstance(x, (int, Fraction)) and not isinstance(x, bool)


class FracQSeries:
    """Series ``sum c_n q^(n/N) + O(q^T)`` with exact rational coefficients.

    The constructor canonicalizes: zero coefficients and terms at or beyond
    the truncation are dropped, and ``N`` is reduced to the smallest grid
    that still hosts every stored exponent.
    """

    __slots__ = ("grid_den", "coeffs", "trunc")

    def __init__(self, grid_den: int, coeffs: Mapping[int, Scalar], trunc: Scalar):
        if grid_den <= 0:
            raise ValueError("grid_den must be positive")
        trunc = to_fraction(trunc)
        limit = trunc * grid_den
        clean = {}
        for n, c in coeffs.items():
            c = to_fraction(c)
            if c and n < limit:
                clean[int(n)] = c
        g = grid_den
        for n in clean:
            g = math.gcd(g, n)
            if g == 1:
                break
        if not clean:
            g = grid_den
        if g > 1:
            clean = {n // g: c for n, c in clean.items()}
            grid_den //= g
        self.grid_den = grid_den
        self.coeffs = dict(sorted(clean.items()))
        self.trunc = trunc

    # ------------------------------------------------------------------ build
    @classmethod
    def from_coefficients(cls, values: Iterable[Scalar], trunc: Scalar | None = None,
                          start: int = 0, grid_den: int = 1) -> "FracQSeries":
        """Series whose i-th value multiplies ``q^((start+i)/grid_den)``.

        Without an explicit ``trunc`` the series is known up to the first
        exponent past the supplied values.
        """
        values = list(values)
        if trunc is None:
            trunc = Fraction(start + len(values), grid_den)
        return cls(grid_den, {start + i: v for i, v in enumerate(values)}, trunc)

    @classmethod
    def constant(cls, c: Scalar, trunc: Scalar) -> "FracQSeries":
        return cls(1, {0: c}, trunc)

    @classmethod
    def zero(cls, trunc: Scalar) -> "FracQSeries":
        return cls(1, {}, trunc)

    @classmethod
    def monomial(cls, exponent: Scalar, trunc: Scalar, coeff: Scalar = 1) -> "FracQSeries":
        e = to_fraction(exponent)
        return cls(e.denominator, {e.numerator: coeff}, trunc)

    # ------------------------------------------------------------- inspection
    def items(self) -> Iterator[tuple[Fraction, Fraction]]:
        """Yield ``(exponent, coefficient)`` pairs in increasing exponent."""
        for n, c in self.coeffs.items():
            yield Fraction(n, self.grid_den), c

    def coefficient(self, exponent: Scalar) -> Fraction:
        e = to_fraction(exponent)
        if e >= self.trunc:
            raise InsufficientPrecision(f"coefficient of q^{e} requested but series is O(q^{self.trunc})")
        n = e * self.grid_den
        if n.denominator != 1:
            return Fraction(0)
        return self.coeffs.get(int(n), Fraction(0))

    def coefficient_list(self, count: int, start: int = 0) -> list[Fraction]:
        """Integer-exponent coefficients ``q^start .. q^(start+count-1)``."""
        return [self.coefficient(start + i) for i in range(count)]

    def is_zero(self) -> bool:
        """True when no nonzero coefficient is known below the truncation."""
        return not self.coeffs

    def valuation(self) -> Fraction:
        if not self.coeffs:
            raise ZeroSeries(f"series vanishes to its truncation O(q^{self.trunc})")
        return Fraction(next(iter(self.coeffs)), self.grid_den)

    def leading_coefficient(self) -> Fraction:
        if not self.coeffs:
            raise ZeroSeries(f"series vanishes to its truncation O(q^{self.trunc})")
        return next(iter(self.coeffs.values()))

    def _val_or_trunc(self) -> Fraction:
        return self.valuation() if self.coeffs else self.trunc

    def _regrid(self, m: int) -> dict[int, Fraction]:
        s = m // self.grid_den
        return {n * s: c for n, c in self.coeffs.items()}

    # ------------------------------------------------------------- arithmetic
    def truncate(self, trunc: Scalar) -> "FracQSeries":
        """Forget everything from ``q^trunc`` on (never extends precision)."""
        return FracQSeries(self.grid_den, self.coeffs, min(self.trunc, to_fraction(trunc)))

    def scale(self, c: Scalar) -> "FracQSeries":
        c = to_fraction(c)
        return FracQSeries(self.grid_den, {n: c * v for n, v in self.coeffs.items()}, self.trunc)

    def shift(self, exponent: Scalar) -> "FracQSeries":
        """Multiply by ``q^exponent`` exactly."""
        e = to_fraction(exponent)
        m = math.lcm(self.grid_den, e.denominator)
        off = int(e * m)
        return FracQSeries(m, {n + off: c for n, c in self._regrid(m).items()}, self.trunc + e)

    def __neg__(self) -> "FracQSeries":
        return self.scale(-1)

    def __add__(self, other) -> "FracQSeries":
        if _is_scalar(other):
            other = FracQSeries.constant(other, self.trunc)
        if not isinstance(other, FracQSeries):
            return NotImplemented
        m = math.lcm(self.grid_den, other.grid_den)
        out = self._regrid(m)
        for n, c in other._regrid(m).items():
            out[n] = out.get(n, 0) + c
        return FracQSeries(m, out, min(self.trunc, other.trunc))

    __radd__ = __add__

    def __sub__(self, other) -> "FracQSeries":
        if _is_scalar(other):
            return self + (-to_fraction(other))
        if not isinstance(other, FracQSeries):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "FracQSeries":
        return (-self) + other

    def __mul__(self, other) -> "FracQSeries":
        if _is_scalar(other):
            return self.scale(other)
        if not isinstance(other, FracQSeries):
            return NotImplemented
        trunc = min(self.trunc + other._val_or_trunc(), other.trunc + self._val_or_trunc())
        m = math.lcm(self.grid_den, other.grid_den)
        limit = trunc * m
        a = list(self._regrid(m).items())
        b = list(other._regrid(m).items())
        out: dict[int, Fraction] = {}
        for i, ai in a:
            for j, bj in b:
                k = i + j
                if k >= limit:
                    break
                out[k] = out.get(k, 0) + ai * bj
        return FracQSeries(m, out, trunc)

    __rmul__ = __mul__

    def __truediv__(self, other) -> "FracQSeries":
        if _is_scalar(other):
            if other == 0:
                raise DivisionByZeroSeries("division by the scalar 0")
            return self.scale(1 / to_fraction(other))
        if not isinstance(other, FracQSeries):
            return NotImplemented
        return series_div(self, other)

    def __rtruediv__(self, other) -> "FracQSeries":
        if _is_scalar(other):
            rel = self.trunc - self._val_or_trunc()
            return series_div(FracQSeries.constant(other, rel), self)
        return NotImplemented

    def __pow__(self, e) -> "FracQSeries":
        return series_pow_frac(self, e)

    def dq(self) -> "FracQSeries":
        """The operator ``q d/dq``."""
        return series_dq(self)

    def subs_power(self, m: Scalar) -> "FracQSeries":
        """Substitute ``q -> q^m`` for a positive rational ``m``."""
        m = to_fraction(m)
        if m <= 0:
            raise ValueError("substitution exponent must be positive")
        grid = self.grid_den * m.denominator
        return FracQSeries(grid, {n * m.numerator: c for n, c in self.coeffs.items()}, self.trunc * m)

    # ------------------------------------------------------------ comparison
    def __eq__(self, other) -> bool:
        if not isinstance(other, FracQSeries):
            return NotImplemented
        return (self.grid_den, self.coeffs, self.trunc) == (other.grid_den, other.coeffs, other.trunc)

    def __hash__(self):
        return hash((self.grid_den, tuple(self.coeffs.items()), self.trunc))

    def agrees_with(self, other: "FracQSeries", order: Scalar) -> bool:
        """Both series are known to ``order`` and coincide below it."""
        order = to_fraction(order)
        if self.trunc < order or other.trunc < order:
            raise InsufficientPrecision(f"cannot compare to O(q^{order})")
        return (self - other).truncate(order).is_zero()

    # --------------------------------------------------------- serialization
    def to_json_obj(self) -> dict:
        return {
            "grid_den": self.grid_den,
            "trunc": str(self.trunc),
            "coeffs": [[n, str(c)] for n, c in self.coeffs.items()],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj())

    @classmethod
    def from_json_obj(cls, obj: Mapping) -> "FracQSeries":
        return cls(int(obj["grid_den"]), {int(n): Fraction(c) for n, c in obj["coeffs"]}, Fraction(obj["trunc"]))

    @classmethod
    def from_json(cls, text: str) -> "FracQSeries":
        return cls.from_json_obj(json.loads(text))

    def __repr__(self) -> str:
        parts = []
        for e, c in self.items():
            if e == 0:
                mono = ""
            elif e == 1:
                mono = "q"
            elif e.denominator == 1:
                mono = f"q^{e}"
            else:
                mono = f"q^({e})"
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                cs = str(c) if c.denominator == 1 else f"({c})" if c > 0 else f"-({-c})"
                parts.append(f"{cs}*{mono}")
        t = self.trunc
        tail = f"O(q^{t})" if t.denominator == 1 else f"O(q^({t}))"
        body = " + ".join(parts + [tail])
        return body.replace("+ -", "- ")


def series_add(a: FracQSeries, b: FracQSeries) -> FracQSeries:
    return a + b


def series_mul(a: FracQSeries, b: FracQSeries) -> FracQSeries:
    return a * b


def series_div(a: FracQSeries, b: FracQSeries) -> FracQSeries:
    """Quotient ``a/b``; Laurent tails are allowed in the result."""
    if b.is_zero():
        raise DivisionByZeroSeries(f"divisor vanishes to its truncation O(q^{b.trunc})")
    vb = b.valuation()
    b0 = b.leading_coefficient()
    va = a._val_or_trunc()
    trunc = min(a.trunc - vb, b.trunc - 2 * vb + va)
    m = math.lcm(a.grid_den, b.grid_den, vb.denominator)
    shift_b = int(vb * m)
    beta = {n - shift_b: c / b0 for n, c in b._regrid(m).items()}
    alpha = {n - shift_b: c / b0 for n, c in a._regrid(m).items()}
    if not alpha:
        return FracQSeries(m, {}, trunc)
    lo = min(alpha)
    hi = math.ceil(trunc * m)
    tail = [(k, c) for k, c in beta.items() if k > 0]
    out: dict[int, Fraction] = {}
    for n in range(lo, hi):
        acc = alpha.get(n, Fraction(0))
        for k, bk in tail:
            if n - k < lo:
                break
            cn = out.get(n - k)
            if cn:
                acc -= bk * cn
        if acc:
            out[n] = acc
    return FracQSeries(m, out, trunc)


def series_dq(a: FracQSeries) -> FracQSeries:
    return FracQSeries(a.grid_den, {n: c * Fraction(n, a.grid_den) for n, c in a.coeffs.items()}, a.trunc)


def series_pow_frac(a: FracQSeries, e: Scalar) -> FracQSeries:
    """``a**e`` by the binomial series around the leading term.

    Fractional exponents need a leading coefficient of 1; integer
    exponents accept any nonzero leading coefficient.
    """
    e = to_fraction(e)
    if a.is_zero():
        if e > 0:
            return FracQSeries(1, {}, e * a.trunc)
        raise ZeroSeries("nonpositive power of a series that vanishes to its truncation")
    v = a.valuation()
    c = a.leading_coefficient()
    factor = Fraction(1)
    if c != 1:
        if e.denominator != 1:
            raise NonMonicBase(f"leading coefficient {c} is not 1; fractional power {e} is ambiguous")
        factor = c ** int(e)
    rel = a.trunc - v
    n_grid = a.grid_den
    h = {n - int(v * n_grid): x / c for n, x in a.coeffs.items()}
    hk = [(k, x) for k, x in h.items() if k > 0]
    count = math.ceil(rel * n_grid)
    g = [Fraction(1)] + [Fraction(0)] * max(count - 1, 0)
    ep1 = e + 1
    for n in range(1, count):
        acc = Fraction(0)
        for k, x in hk:
            if k > n:
                break
            gn = g[n - k]
            if gn:
                acc += (ep1 * k - n) * x * gn
        g[n] = acc / n
    ev = e * v
    m = math.lcm(n_grid, ev.denominator)
    s = m // n_grid
    off = int(ev * m)
    coeffs = {off + n * s: factor * x for n, x in enumerate(g) if x}
    return FracQSeries(m, coeffs, ev + rel)


def v_infinity(f: FracQSeries) -> Fraction:
    """Order of vanishing at the cusp (least exponent with nonzero coefficient)."""
    return f.valuation()
