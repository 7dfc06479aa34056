"""Modular forms on SL(2,Z), the Fricke groups of levels 2 and 3, and friends.

Every group carries a quasimodular weight-2 form ``phi`` (E2 or its level-N
analogue ``M2star``) with an integer anomaly ``A``: in q-normalized form
``D_q f - (k/A) phi f`` is modular of weight ``k+2`` whenever ``f`` is
modular of weight ``k``.  The ring of modular forms (all characters) is
freely generated by two forms, and the Serre derivative of each generator
is a polynomial in the generators.

Characters are small integers:

* SL2Z: always 0;
* G2plus: 0 for the Atkin-Lehner eigenvalue +1 and 1 for -1;
* G3plus: ``m`` for chi^m, where chi(S) = chi(R) = -i.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Sequence

from .errors import InsufficientPrecision, NotInSpace, UnknownGenerator, UnsupportedSpace
from .linalg import rref, solve_columns
from .qseries import FracQSeries, Scalar, to_fraction
from .symring import ParamField, WeightedPoly

MAIN_GROUPS = ("SL2Z", "G2plus", "G3plus")
AUX_GROUPS = ("Gamma0_2", "Gamma0_3", "Gamma1_3")

#: extra coefficients beyond the dimension used when testing membership
MEMBERSHIP_MARGIN = 10

_ALIASES = {g.lower(): g for g in MAIN_GROUPS + AUX_GROUPS}
_ALIASES.update({"sl2": "SL2Z", "g2": "G2plus", "g3": "G3plus", "gamma0(2)": "Gamma0_2",
                 "gamma0(3)": "Gamma0_3", "gamma1(3)": "Gamma1_3"})


def group_id(name: str) -> str:
    """Canonical group label from a case-insensitive spelling."""
    try:
        return _ALIASES[name.strip().lower()]
    except KeyError:
        raise UnsupportedSpace(f"unknown group {name!r}") from None


# ---------------------------------------------------------------------------
# characters


_CHAR_ORDER = {"SL2Z": 1, "G2plus": 2, "G3plus": 4, "Gamma0_2": 1, "Gamma0_3": 1, "Gamma1_3": 1}


@dataclass(frozen=True)
class CharacterLabel:
    group: str
    index: int

    def __post_init__(self):
        object.__setattr__(self, "index", self.index % _CHAR_ORDER[self.group])

    def __mul__(self, other: "CharacterLabel") -> "CharacterLabel":
        if other.group != self.group:
            raise UnsupportedSpace("characters of different groups")
        return CharacterLabel(self.group, self.index + other.index)

    def __pow__(self, n: int) -> "CharacterLabel":
        return CharacterLabel(self.group, self.index * n)

    def __str__(self) -> str:
        if self.group == "G2plus":
            return "+" if self.index == 0 else "-"
        if self.group == "G3plus":
            return f"chi^{self.index}"
        return "trivial"

    @property
    def sign(self) -> int:
        """Atkin-Lehner sign for G2plus, and for even-weight G3plus characters."""
        if self.group == "G2plus":
            return 1 - 2 * self.index
        if self.group == "G3plus":
            if self.index % 2:
                raise ValueError("odd characters of G3plus have no sign")
            return 1 - self.index
        return 1


def trivial(group: str) -> CharacterLabel:
    return CharacterLabel(group_id(group), 0)


def parse_character(group: str, label) -> CharacterLabel:
    """Accepts ``+``/``-``, ``+1``/``-1``, ``chi``, ``chi^m``, ``chibar``, ``trivial``."""
    g = group_id(group)
    if isinstance(label, CharacterLabel):
        return label
    if label is None:
        return CharacterLabel(g, 0)
    if isinstance(label, int):
        if g == "G2plus" and label in (1, -1):
            return CharacterLabel(g, 0 if label == 1 else 1)
        return CharacterLabel(g, label)
    s = str(label).strip().lower().replace(" ", "")
    if s in ("", "trivial", "1", "+", "+1", "plus", "chi^0", "chi0"):
        return CharacterLabel(g, 0)
    if s in ("-", "-1", "minus"):
        return CharacterLabel(g, 1 if g == "G2plus" else 2)
    if g == "G3plus":
        if s in ("chi", "chi^1"):
            return CharacterLabel(g, 1)
        if s in ("chibar", "chi^3", "conj(chi)"):
            return CharacterLabel(g, 3)
        if s.startswith("chi^") and s[4:].isdigit():
            return CharacterLabel(g, int(s[4:]))
    raise UnsupportedSpace(f"unknown character {label!r} for {g}")


@dataclass(frozen=True)
class SpaceSpec:
    group: str
    weight: int
    character: CharacterLabel
    depth_bound: int = 0

    def __post_init__(self):
        g = group_id(self.group)
        object.__setattr__(self, "group", g)
        object.__setattr__(self, "character", parse_character(g, self.character))
        if self.depth_bound not in (0, 1):
            raise UnsupportedSpace("only depth 0 and depth 1 spaces are supported")
        if g == "G3plus" and (self.weight - self.character.index) % 2:
            raise UnsupportedSpace(f"weight {self.weight} and character {self.character} have different parity")

    def with_weight(self, k: int, depth_bound: int | None = None) -> "SpaceSpec":
        d = self.depth_bound if depth_bound is None else depth_bound
        return SpaceSpec(self.group, k, self.character, d)

    def __str__(self) -> str:
        head = "M~^{<=1}" if self.depth_bound else "M"
        return f"{head}_{self.weight}({self.group}, {self.character})"


def space(group: str, weight: int, character=None, depth_bound: int = 0) -> SpaceSpec:
    g = group_id(group)
    return SpaceSpec(g, weight, parse_character(g, character), depth_bound)


# ---------------------------------------------------------------------------
# q-expansions


def _sigma_table(power: int, count: int) -> list[int]:
    sig = [0] * count
    for d in range(1, count):
        dp = d ** power
        for m in range(d, count, d):
            sig[m] += dp
    return sig


def _ceil(order: Fraction) -> int:
    return max(math.ceil(order), 0)


@lru_cache(maxsize=None)
def eisenstein(k: int, order: Fraction) -> FracQSeries:
    """Normalized Eisenstein series E_k for k in {2, 4, 6}."""
    const = {2: -24, 4: 240, 6: -504}[k]
    n = _ceil(order)
    sig = _sigma_table(k - 1, n)
    vals = [1] + [const * s for s in sig[1:]]
    return FracQSeries.from_coefficients(vals[:n], trunc=order)


@lru_cache(maxsize=None)
def euler_product(count: int) -> tuple[int, ...]:
    """Coefficients of prod_{n>=1} (1 - q^n) below q^count, factor by factor."""
    c = [0] * count
    if count:
        c[0] = 1
    for n in range(1, count):
        for i in range(count - 1, n - 1, -1):
            c[i] -= c[i - n]
    return tuple(c)


def eta_quotient(powers: dict[int, int], order: Scalar) -> FracQSeries:
    """``prod_d eta(d z)^{r_d}`` to ``O(q^order)``."""
    order = to_fraction(order)
    lead = Fraction(sum(d * r for d, r in powers.items()), 24)
    rel = order - lead
    n = _ceil(rel) + 1
    base = FracQSeries.from_coefficients(euler_product(n), trunc=n)
    total = FracQSeries.constant(1, rel)
    for d, r in sorted(powers.items()):
        if r:
            total = total * base.subs_power(d).truncate(rel) ** r
    return total.shift(lead).truncate(order)


def _e_at(k: int, mult: int, order: Fraction) -> FracQSeries:
    """E_k(mult * z)."""
    inner = Fraction(_ceil(order / mult) + 1)
    return eisenstein(k, inner).subs_power(mult).truncate(order)


def _m1_series(order: Fraction) -> FracQSeries:
    n = _ceil(order)
    vals = [0] * n
    if n:
        vals[0] = 1
    for d in range(1, n):
        chi = (0, 1, -1)[d % 3]
        if chi:
            for m in range(d, n, d):
                vals[m] += 6 * chi
    return FracQSeries.from_coefficients(vals, trunc=order)


def _m3_series(order: Fraction) -> FracQSeries:
    return eta_quotient({1: 9, 3: -3}, order) - 27 * eta_quotient({1: -3, 3: 9}, order)


# ---------------------------------------------------------------------------
# group contexts


@dataclass(frozen=True)
class NamedForm:
    name: str
    weight: int
    character: int
    poly: WeightedPoly | None
    recipe: Callable[[Fraction], FracQSeries]
    description: str
    quasimodular: bool = False


@dataclass(frozen=True)
class EllipticPoint:
    label: str
    location: str
    order: int
    vanishing: str


@dataclass(frozen=True)
class Geometry:
    genus: int
    cusps: int
    elliptic_orders: tuple[int, ...]


@dataclass(frozen=True)
class GroupContext:
    name: str
    anomaly: int
    gens: tuple
    gen_forms: dict
    serre: dict
    M_form: WeightedPoly
    geometry: Geometry
    elliptic: tuple
    ell_coeffs: tuple
    forms: dict = field(repr=False)
    odd_generator: str = ""
    even_generator: str = ""

    @property
    def field(self) -> ParamField:
        return ParamField()

    def gen_poly(self, sym: str, fld: ParamField | None = None) -> WeightedPoly:
        return WeightedPoly.gen(self.gens, fld or ParamField(), sym)

    def form(self, name: str) -> NamedForm:
        try:
            return self.forms[name]
        except KeyError:
            raise UnknownGenerator(f"{name!r} is not a named form of {self.name}; "
                                   f"known: {', '.join(self.forms)}") from None

    def phi(self, order: Scalar) -> FracQSeries:
        return generator_series(self.name, "M2star", order)

    def monomial_character(self, exps: Sequence[int]) -> int:
        if self.name == "SL2Z":
            return 0
        return sum(exps) % _CHAR_ORDER[self.name]

    def poly_series(self, p: WeightedPoly, order: Scalar) -> FracQSeries:
        """q-expansion of a generator polynomial with rational coefficients."""
        order = to_fraction(order)
        ser = {sym: generator_series(self.name, self.gen_forms[sym], order) for sym in p.names}
        return p.evaluate_series(ser, order)

    def serre_derivative(self, f: FracQSeries, k: int) -> FracQSeries:
        """``D_q f - (k/A) phi f`` as a series."""
        return f.dq() - self.phi(f.trunc) * f * Fraction(k, self.anomaly)


def _build_sl2z() -> GroupContext:
    K = ParamField()
    gens = (("e4", 4), ("e6", 6))
    e4, e6 = (WeightedPoly.gen(gens, K, s) for s, _ in gens)
    forms = {
        "E2": NamedForm("E2", 2, 0, None, lambda T: eisenstein(2, T), "1 - 24 sum sigma_1(n) q^n", True),
        "E4": NamedForm("E4", 4, 0, e4, lambda T: eisenstein(4, T), "1 + 240 sum sigma_3(n) q^n"),
        "E6": NamedForm("E6", 6, 0, e6, lambda T: eisenstein(6, T), "1 - 504 sum sigma_5(n) q^n"),
        "Delta": NamedForm("Delta", 12, 0, (e4 ** 3 - e6 ** 2) * Fraction(1, 1728),
                           lambda T: eta_quotient({1: 24}, T), "eta(z)^24"),
    }
    forms["M2star"] = NamedForm("M2star", 2, 0, None, forms["E2"].recipe, "E2", True)
    return GroupContext(
        name="SL2Z", anomaly=12, gens=gens, gen_forms={"e4": "E4", "e6": "E6"},
        serre={"e4": e6 * Fraction(-1, 3), "e6": e4 ** 2 * Fraction(-1, 2)},
        M_form=e4 * Fraction(-1, 12),
        geometry=Geometry(0, 1, (2, 3)),
        elliptic=(EllipticPoint("rho1", "i", 2, "e6"), EllipticPoint("rho2", "exp(2 pi i/3)", 3, "e4")),
        ell_coeffs=(12, 6, 4, 12), forms=forms, odd_generator="e6", even_generator="e4",
    )


def _build_g2plus() -> GroupContext:
    K = ParamField()
    gens = (("m2", 2), ("m4m", 4))
    m2, m4m = (WeightedPoly.gen(gens, K, s) for s, _ in gens)
    f = Fraction
    forms = {
        "M2star": NamedForm("M2star", 2, 0, None,
                            lambda T: (2 * _e_at(2, 2, T) + eisenstein(2, T)) / 3,
                            "(2 E2(2z) + E2(z))/3", True),
        "M2": NamedForm("M2", 2, 1, m2, lambda T: 2 * _e_at(2, 2, T) - eisenstein(2, T),
                        "2 E2(2z) - E2(z)"),
        "M4minus": NamedForm("M4minus", 4, 1, m4m, lambda T: (4 * _e_at(4, 2, T) - eisenstein(4, T)) / 3,
                             "(4 E4(2z) - E4(z))/3"),
        "M4": NamedForm("M4", 4, 0, m2 ** 2, lambda T: (4 * _e_at(4, 2, T) + eisenstein(4, T)) / 5,
                        "(4 E4(2z) + E4(z))/5"),
        "M6": NamedForm("M6", 6, 0, m2 * m4m, lambda T: (8 * _e_at(6, 2, T) + eisenstein(6, T)) / 9,
                        "(8 E6(2z) + E6(z))/9"),
        "M8": NamedForm("M8", 8, 0, (m2 ** 4 - m4m ** 2) * f(1, 256),
                        lambda T: eta_quotient({1: 8, 2: 8}, T), "eta(z)^8 eta(2z)^8"),
    }
    forms["M2minus"] = NamedForm("M2minus", 2, 1, m2, forms["M2"].recipe, forms["M2"].description)
    forms["M4plus"] = NamedForm("M4plus", 4, 0, m2 ** 2, forms["M4"].recipe, forms["M4"].description)
    _add_sl2z_aux(forms)
    return GroupContext(
        name="G2plus", anomaly=8, gens=gens, gen_forms={"m2": "M2", "m4m": "M4minus"},
        serre={"m2": m4m * f(-1, 4), "m4m": m2 ** 3 * f(-1, 2)},
        M_form=m2 ** 2 * f(-1, 8),
        geometry=Geometry(0, 1, (2, 4)),
        elliptic=(EllipticPoint("rho1", "i/sqrt(2)", 2, "m4m"), EllipticPoint("rho2", "(1+i)/2", 4, "m2")),
        ell_coeffs=(8, 4, 2, 8), forms=forms, odd_generator="m4m", even_generator="m2",
    )


def _build_g3plus() -> GroupContext:
    K = ParamField()
    gens = (("m1", 1), ("m3", 3))
    m1, m3 = (WeightedPoly.gen(gens, K, s) for s, _ in gens)
    f = Fraction
    m6 = (m1 ** 6 - m3 ** 2) * f(1, 108)
    forms = {
        "M2star": NamedForm("M2star", 2, 0, None,
                            lambda T: (3 * _e_at(2, 3, T) + eisenstein(2, T)) / 4,
                            "(3 E2(3z) + E2(z))/4", True),
        "M1": NamedForm("M1", 1, 1, m1, _m1_series, "sum over m,n of q^(m^2+mn+n^2)"),
        "M3": NamedForm("M3", 3, 1, m3, _m3_series, "eta(z)^9/eta(3z)^3 - 27 eta(3z)^9/eta(z)^3"),
        "M2": NamedForm("M2", 2, 2, m1 ** 2, lambda T: (3 * _e_at(2, 3, T) - eisenstein(2, T)) / 2,
                        "(3 E2(3z) - E2(z))/2"),
        "M4": NamedForm("M4", 4, 0, m1 ** 4, lambda T: (9 * _e_at(4, 3, T) + eisenstein(4, T)) / 10,
                        "(9 E4(3z) + E4(z))/10"),
        "M6": NamedForm("M6", 6, 2, m6, lambda T: eta_quotient({1: 6, 3: 6}, T), "eta(z)^6 eta(3z)^6"),
        "M8": NamedForm("M8", 8, 0, m1 ** 2 * m6,
                        lambda T: (3 * _e_at(2, 3, T) - eisenstein(2, T)) * eta_quotient({1: 6, 3: 6}, T) / 2,
                        "(3 E2(3z) - E2(z)) eta(z)^6 eta(3z)^6 / 2"),
        "M12": NamedForm("M12", 12, 0, m6 ** 2, lambda T: eta_quotient({1: 12, 3: 12}, T),
                         "eta(z)^12 eta(3z)^12"),
    }
    forms["M2minus"] = NamedForm("M2minus", 2, 2, m1 ** 2, forms["M2"].recipe, forms["M2"].description)
    forms["M4plus"] = NamedForm("M4plus", 4, 0, m1 ** 4, forms["M4"].recipe, forms["M4"].description)
    forms["M6minus"] = NamedForm("M6minus", 6, 2, m6, forms["M6"].recipe, forms["M6"].description)
    _add_sl2z_aux(forms)
    return GroupContext(
        name="G3plus", anomaly=6, gens=gens, gen_forms={"m1": "M1", "m3": "M3"},
        serre={"m1": m3 * f(-1, 6), "m3": m1 ** 5 * f(-1, 2)},
        M_form=m1 ** 4 * f(-1, 6),
        geometry=Geometry(0, 1, (2, 6)),
        elliptic=(EllipticPoint("rho1", "i/sqrt(3)", 2, "m3"), EllipticPoint("rho2", "(3+sqrt(-3))/6", 6, "m1")),
        ell_coeffs=(6, 3, 1, 6), forms=forms, odd_generator="m3", even_generator="m1",
    )


def _add_sl2z_aux(forms: dict) -> None:
    """Level-one series are handy for comparisons; they carry no polynomial."""
    for k in (2, 4, 6):
        name = f"E{k}"
        forms.setdefault(name, NamedForm(name, k, 0, None, (lambda kk: lambda T: eisenstein(kk, T))(k),
                                         f"level-one Eisenstein series E{k}", k == 2))
    forms.setdefault("Delta", NamedForm("Delta", 12, 0, None, lambda T: eta_quotient({1: 24}, T), "eta(z)^24"))


_CONTEXTS: dict[str, GroupContext] = {}


def context(group: str) -> GroupContext:
    g = group_id(group)
    if g not in MAIN_GROUPS:
        raise UnsupportedSpace(f"{g} has no group context (dimension formulas only)")
    if g not in _CONTEXTS:
        _CONTEXTS[g] = {"SL2Z": _build_sl2z, "G2plus": _build_g2plus, "G3plus": _build_g3plus}[g]()
    return _CONTEXTS[g]


@lru_cache(maxsize=None)
def _generator_series_cached(group: str, name: str, order: Fraction) -> FracQSeries:
    ctx = context(group)
    return ctx.form(name).recipe(order).truncate(order)


def generator_series(group: str, name: str, order: Scalar) -> FracQSeries:
    """q-expansion of a named form of ``group`` to ``O(q^order)``."""
    return _generator_series_cached(group_id(group), name, to_fraction(order))


# ---------------------------------------------------------------------------
# dimensions

_GEOMETRY = {
    "SL2Z": Geometry(0, 1, (2, 3)),
    "Gamma0_2": Geometry(0, 2, (2,)),
    "G2plus": Geometry(0, 1, (2, 4)),
    "Gamma0_3": Geometry(0, 2, (3,)),
    "G3plus": Geometry(0, 1, (2, 6)),
}


def _riemann_roch(geom: Geometry, k: int) -> int:
    """Dimension of weight-k forms (k even, k >= 0) on a group with cusps."""
    if k < 0 or k % 2:
        return 0
    total = (k - 1) * (geom.genus - 1) + geom.cusps * k // 2
    for e in geom.elliptic_orders:
        total += (k * (e - 1)) // (2 * e)
    return total


def _dim_modular(group: str, k: int, char: int) -> int:
    if k < 0:
        return 0
    if group in ("SL2Z", "Gamma0_2", "Gamma0_3"):
        return _riemann_roch(_GEOMETRY[group], k)
    if group == "Gamma1_3":
        return 1 + k // 3
    if group == "G2plus":
        full = _riemann_roch(_GEOMETRY["G2plus"], k)
        return full if char == 0 else _riemann_roch(_GEOMETRY["Gamma0_2"], k) - full
    if group == "G3plus":
        if k % 2 == 0:
            if char % 2:
                return 0
            full = _riemann_roch(_GEOMETRY["G3plus"], k)
            return full if char == 0 else _riemann_roch(_GEOMETRY["Gamma0_3"], k) - full
        if char % 2 == 0:
            return 0
        # multiplication by M1 identifies odd-weight spaces with even ones
        if k % 3:
            return _dim_modular("G3plus", k - 1, 0 if char == 1 else 2)
        return _dim_modular("G3plus", k + 1, 2 if char == 1 else 0)
    raise UnsupportedSpace(f"no dimension formula for {group}")


def dims(sp: SpaceSpec) -> int:
    """Dimension of a modular (depth 0) or depth-1 quasimodular space."""
    if sp.weight < 0:
        return 0
    c = sp.character.index
    total = _dim_modular(sp.group, sp.weight, c)
    if sp.depth_bound == 1:
        total += _dim_modular(sp.group, sp.weight - 2, c)
    return total


# ---------------------------------------------------------------------------
# bases and membership


def monomials(group: str, k: int, char) -> list[tuple[int, int]]:
    """Exponent vectors of generator monomials of weight ``k`` in a character."""
    g = group_id(group)
    if k < 0:
        return []
    if g in ("SL2Z",):
        return [(a, b) for b in range(k // 6 + 1) for a in [(k - 6 * b) // 4] if 4 * a + 6 * b == k]
    if g in ("G2plus", "Gamma0_2"):
        out = [(a, b) for b in range(k // 4 + 1) for a in [(k - 4 * b) // 2] if 2 * a + 4 * b == k]
        if g == "G2plus":
            ci = parse_character(g, char).index
            out = [(a, b) for a, b in out if (a + b) % 2 == ci]
        return out
    if g in ("G3plus", "Gamma0_3", "Gamma1_3"):
        out = [(k - 3 * b, b) for b in range(k // 3 + 1)]
        if g == "G3plus":
            ci = parse_character(g, char).index
            out = [(a, b) for a, b in out if (a + b) % 4 == ci]
        elif g == "Gamma0_3":
            out = [(a, b) for a, b in out if (a + b) % 2 == 0]
        return out
    raise UnsupportedSpace(f"no generators for {g}")


def _ambient_context(group: str) -> GroupContext:
    g = group_id(group)
    return context({"Gamma0_2": "G2plus", "Gamma0_3": "G3plus", "Gamma1_3": "G3plus"}.get(g, g))


@dataclass
class SpaceData:
    """Spanning data for a modular or depth-1 space.

    ``labels[i]`` is ``(phi_power, exps)``; ``series[i]`` its expansion.
    """

    space: SpaceSpec
    order: Fraction
    labels: list
    series: list
    echelon: list = field(default_factory=list)

    def polys(self) -> list[WeightedPoly]:
        ctx = _ambient_context(self.space.group)
        return [WeightedPoly.monomial(ctx.gens, ParamField(), e) for _, e in self.labels]


@lru_cache(maxsize=None)
def space_data(sp: SpaceSpec, order: Fraction) -> SpaceData:
    ctx = _ambient_context(sp.group)
    labels = []
    if sp.depth_bound == 1:
        labels += [(1, e) for e in monomials(sp.group, sp.weight - 2, sp.character)]
    labels += [(0, e) for e in monomials(sp.group, sp.weight, sp.character)]
    expected = dims(sp)
    if len(labels) != expected:
        raise UnsupportedSpace(f"{sp}: {len(labels)} generator monomials but dimension {expected}")
    phi = ctx.phi(order)
    series = []
    for p, e in labels:
        s = ctx.poly_series(WeightedPoly.monomial(ctx.gens, ParamField(), e), order)
        series.append(phi * s if p else s)
    data = SpaceData(sp, order, labels, series)
    data.echelon = _echelon(series, order)
    return data


def _echelon(series: Sequence[FracQSeries], order: Fraction) -> list[FracQSeries]:
    n = _ceil(order)
    rows = [s.coefficient_list(n) for s in series]
    red, _ = rref(rows)
    if len(red) != len(series):
        raise InsufficientPrecision("spanning set is dependent on the available coefficients")
    return [FracQSeries.from_coefficients(r, trunc=order) for r in red]


def basis(sp: SpaceSpec, order: Scalar) -> list[FracQSeries]:
    """q-echelon basis: increasing leading exponents, leading coefficients 1."""
    order = to_fraction(order)
    if sp.depth_bound == 0 and order < dims(sp):
        raise InsufficientPrecision(f"order {order} below dimension {dims(sp)}")
    return list(space_data(sp, order).echelon)


@dataclass
class Membership:
    space: SpaceSpec
    coords: list[Fraction]
    echelon_coords: list[Fraction]
    labels: list

    def poly(self, phi_power: int = 0) -> WeightedPoly:
        """The part with the given power of phi as a generator polynomial."""
        ctx = _ambient_context(self.space.group)
        out = WeightedPoly(ctx.gens, ParamField())
        for c, (p, e) in zip(self.coords, self.labels):
            if p == phi_power:
                out = out + WeightedPoly.monomial(ctx.gens, ParamField(), e, c)
        return out


def _integer_coeffs(f: FracQSeries, n: int) -> list[Fraction]:
    for e, c in f.items():
        if e >= n:
            break
        if e < 0 or e.denominator != 1:
            raise NotInSpace(f"term {c} q^{e} is not on the integral grid")
    return f.coefficient_list(n)


def membership(f: FracQSeries, sp: SpaceSpec, order: Scalar | None = None) -> Membership:
    """Exact coordinates of ``f`` in ``sp``; NotInSpace if inconsistent.

    Uses every coefficient of ``f`` below ``order`` (default: all known).
    """
    order = to_fraction(f.trunc if order is None else order)
    d = dims(sp)
    if order < d + MEMBERSHIP_MARGIN:
        raise InsufficientPrecision(f"order {order} < dims {d} + margin {MEMBERSHIP_MARGIN}")
    if f.trunc < order:
        raise InsufficientPrecision(f"series known only to O(q^{f.trunc}), need {order}")
    n = _ceil(order)
    target = _integer_coeffs(f, n)
    data = space_data(sp, Fraction(n))
    cols = [s.coefficient_list(n) for s in data.series]
    sol = solve_columns(cols, target)
    if sol is None:
        raise NotInSpace(f"series is not in {sp} (checked {n} coefficients)")
    ech = solve_columns([s.coefficient_list(n) for s in data.echelon], target)
    return Membership(sp, sol, ech, list(data.labels))


def v_infinity(f: FracQSeries) -> Fraction:
    return f.valuation()
