"""Acceptance criteria 1-9, one test each, each printing a PASS/FAIL line.

Reference values come from ``oracles`` (divisor sums, eta products, lattice
sums, plain list arithmetic); the package supplies only the computation
under test.
"""

import random
import time
from fractions import Fraction
from math import gcd

import pytest
import sympy

import oracles as o
from modeq.golden import load_cases, run_case
from modeq.groups import CharacterLabel, context, dims, membership, monomials, space
from modeq.local import (QFamily, apparent_obstruction, construct_Q, indicial, indicial_parameters,
                         poly_jet, vanishing_law_holds)
from modeq.mode import ModeProblem, SingularitySpec, certify, default_order, quasiform_to_mode
from modeq.qseries import FracQSeries
from modeq.quasi import (expected_wronskian_valuation, extremal, extremal_form, from_polys,
                         parametric_wronskian, wronskian)
from modeq.symring import ParamField, WeightedPoly

H = Fraction(1, 2)
GROUPS = ("SL2Z", "G2plus", "G3plus")
CUSP_ETA = {"SL2Z": {1: 24}, "G2plus": {1: 8, 2: 8}, "G3plus": {1: 6, 3: 6}}
BASE, CUSP, ODD, EVEN = (
    {"SL2Z": "E4", "G2plus": "M4", "G3plus": "M4"},
    {"SL2Z": "Delta", "G2plus": "M8", "G3plus": "M6"},
    {"SL2Z": "E6", "G2plus": "M4minus", "G3plus": "M3"},
    {"SL2Z": "E4", "G2plus": "M2", "G3plus": "M1"},
)


@pytest.fixture
def report(capsys):
    def emit(n: int, title: str, failures: list[str], t0: float):
        status = "PASS" if not failures else "FAIL"
        with capsys.disabled():
            print(f"\n{status} criterion {n}: {title} ({time.perf_counter() - t0:.1f}s)")
            for f in failures:
                print(f"    {f}")
        assert not failures, failures
    return emit


def product(group: str, terms, n: int) -> list[Fraction]:
    out = [Fraction(0)] * n
    for c, factors in terms:
        p = [Fraction(1)] + [Fraction(0)] * (n - 1)
        for name, e in factors.items():
            p = o.mul(p, o.power(o.named(group, name, n), e))
        out = o.add(out, p, coeffs=[1, c])
    return out


def oracle_Q(group: str, r, s, t, n: int) -> list[Fraction]:
    """r*base + s*cusp/even^2 + t*base*cusp/odd^2 on oracle series."""
    base, cusp = o.named(group, BASE[group], n), o.named(group, CUSP[group], n)
    odd, even = o.named(group, ODD[group], n), o.named(group, EVEN[group], n)
    terms = [o.mul(cusp, o.inverse(o.power(even, 2))), o.mul(o.mul(base, cusp), o.inverse(o.power(odd, 2)))]
    return o.add(base, *terms, coeffs=[r, s, t])


# group, (r, t), kappa_inf, stated y_+ coefficients, scale, phi part, modular part
IDENTITIES = {
    "sl2z-11088": ("SL2Z", (H / 2, 864), H, [1, 462, 247494, 132490928], 11088,
                   [(1, {"E4": 1, "E6": 1})], [(6, {"E4": 3}), (-7, {"E6": 2})]),
    "g2plus-1120": ("G2plus", (H / 2, 128), H, [1, 70, 5926, 503696, 42822181], 1120,
                    [(1, {"M6": 1})], [(-1, {"M4": 2}), (1280, {"M8": 1})]),
    "g2plus-19008": ("G2plus", (1, 128), 1, [1, Fraction(176, 3), Fraction(13706, 3), Fraction(1151072, 3)], 19008,
                     [(-1, {"M2": 1, "M4": 2}), (384, {"M2": 1, "M8": 1})],
                     [(1, {"M2": 1, "M4": 1, "M6": 1}), (-288, {"M4minus": 1, "M8": 1})]),
    "g3plus-2": ("G3plus", (0, 54), 0, [1, 54, 1944], 2, [(3, {"M1": 1})], [(-1, {"M3": 1})]),
    "g3plus-360": ("G3plus", (H / 2, 54), H, [1, 30, 1119, 42077, 1582920], 360,
                   [(1, {"M1": 1, "M3": 1})], [(3, {"M1": 6}), (-4, {"M3": 2})]),
    "g3plus-18144": ("G3plus", (1, 54), 1, [1, 26, 888, 32818, 1231645], 18144,
                     [(3, {"M1": 7}), (-9, {"M1": 1, "M3": 2})], [(-1, {"M1": 6, "M3": 1}), (7, {"M3": 3})]),
    "g3plus-2138400": ("G3plus", (Fraction(9, 4), 54), Fraction(3, 2),
                       [1, 27, Fraction(4131, 5), Fraction(146031, 5), Fraction(5426163, 5)], 2138400,
                       [(1, {"M1": 7, "M3": 1}), (35, {"M1": 1, "M3": 3})],
                       [(3, {"M1": 12}), (-19, {"M1": 6, "M3": 2}), (-20, {"M3": 4})]),
}


def check_identity(key: str, n: int = 13) -> list[str]:
    """Exact check of ``scale * F * y_+ = phi*A + B`` through q^(n-1), twice.

    Reference route: Q, F, phi, A, B from reference expansions and y_+ from a
    list Frobenius recursion.  Package route: certify on the same Q.
    """
    group, (r, t), kinf, stated_y, scale, A, B = IDENTITIES[key]
    fails = []
    m = n + 4
    Q = oracle_Q(group, r, 0, t, m)
    y = o.frobenius(Q, kinf, m)
    if y[: len(stated_y)] != [Fraction(c) for c in stated_y]:
        fails.append(f"{key}: oracle y_+ {y[:len(stated_y)]} differs from stated values")
    _, cusp_part = o.eta_product({d: int(e * kinf) for d, e in CUSP_ETA[group].items()}, m)
    F = o.mul(cusp_part, o.named(group, ODD[group], m))
    shift = int(2 * kinf)
    lhs = [Fraction(0)] * shift + [scale * c for c in o.mul(F, y)]
    rhs = o.add(o.mul(o.named(group, o.PHI[group], m), product(group, A, m)), product(group, B, m))
    if lhs[:n] != rhs[:n]:
        fails.append(f"{key}: oracle identity fails")

    spec = SingularitySpec(kinf, Fraction(3, 2), H)
    order = Fraction(max(default_order(group, spec), n + 4))
    fam = QFamily(group, Fraction(r), 0, Fraction(t))
    Qs = FracQSeries.from_coefficients(oracle_Q(group, r, 0, t, int(order) + 2))
    if not fam.series(order).agrees_with(Qs, order):
        fails.append(f"{key}: package Q differs from oracle Q")
    cert = certify(ModeProblem(group, Qs, spec, fam), order)
    got_y = [cert.y_plus.coeffs.coefficient(kinf + j) for j in range(n)]
    if got_y != y[:n]:
        fails.append(f"{key}: certified y_+ differs from oracle")
    got = [(cert.y_hat * scale).coefficient(j) for j in range(n)]
    if got != rhs[:n]:
        fails.append(f"{key}: certified F*y_+ identity fails")
    return fails


def test_criterion_1_level_one_identity(report):
    t0 = time.perf_counter()
    fails = check_identity("sl2z-11088")
    res = run_case(load_cases(filter="sl2z-e6-11088")[0])
    fails += [] if res.passed else [res.line()]
    report(1, "SL2Z 11088 identity and y_+ = q^(1/2)(1+462q+...)", fails, t0)


def test_criterion_2_level_two_identities(report):
    t0 = time.perf_counter()
    fails = check_identity("g2plus-1120") + check_identity("g2plus-19008")
    for case in load_cases(filter="G2plus"):
        if case["kind"] == "identity":
            res = run_case(case)
            fails += [] if res.passed else [res.line()]
    report(2, "G2plus 1120 and 19008 identities", fails, t0)


def test_criterion_3_level_three_identities(report):
    t0 = time.perf_counter()
    fails = []
    for key in ("g3plus-2", "g3plus-360", "g3plus-18144", "g3plus-2138400"):
        fails += check_identity(key)
    for case in load_cases(filter="G3plus"):
        if case["kind"] == "identity":
            res = run_case(case)
            fails += [] if res.passed else [res.line()]
    report(3, "G3plus identities for k = 0, 1, 2, 3", fails, t0)


def test_criterion_4_wronskian_pin(report):
    t0 = time.perf_counter()
    fails = []
    ctx = context("SL2Z")
    e4, e6 = ctx.gen_poly("e4"), ctx.gen_poly("e6")
    W = parametric_wronskian(from_polys("SL2Z", 6, None, e4, None, 20),
                             from_polys("SL2Z", 6, None, None, e6, 20), "a")
    K = ParamField(("a",))
    a = K.gen("a")
    expected = (WeightedPoly.const(ctx.gens, K, -1 - 6 * a) * e4 ** 3
                - WeightedPoly.const(ctx.gens, K, a * a - 4 * a) * e6 ** 2)
    if W != expected:
        fails.append(f"W = {W}")
    n = 20
    E2, E4, E6 = (o.eisenstein(k, n) for k in (2, 4, 6))
    for av in (Fraction(-2), Fraction(1, 3), Fraction(7)):
        f = o.add(o.mul(E2, E4), E6, coeffs=[1, av])
        direct = o.add(o.mul(f, f), o.mul(E4, o.dq(f)), o.mul(o.dq(E4), f), coeffs=[-1, 12, -12])
        closed = o.add(o.power(E4, 3), o.power(E6, 2), coeffs=[-1 - 6 * av, -(av * av - 4 * av)])
        if direct != closed:
            fails.append(f"oracle W mismatch at a = {av}")
    report(4, "W(E2E4 + aE6) = (-1-6a)E4^3 - (a^2-4a)E6^2 in a, to q^20", fails, t0)


def fl(x: Fraction) -> int:
    return x.numerator // x.denominator


def paper_dims() -> list[tuple[str, int, int]]:
    """(label, package value, stated value) for weights up to 48."""
    rows = []
    for k in range(0, 49, 2):
        h = Fraction(k, 2)
        rows.append((f"Gamma0(2) k={k}", dims(space("Gamma0_2", k)), 1 + k // 4))
        rows.append((f"G2+ k={k}", dims(space("G2plus", k, "+")), int(1 - h + k // 4 + fl(Fraction(3 * k, 8)))))
        rows.append((f"G2- k={k}", dims(space("G2plus", k, "-")), int(h - fl(Fraction(3 * k, 8)))))
        rows.append((f"Gamma0(3) k={k}", dims(space("Gamma0_3", k)), 1 + k // 3))
        rows.append((f"G3+ k={k}", dims(space("G3plus", k, "+")),
                     int(1 - h + k // 4 + fl(Fraction(5 * k, 12)))))
        rows.append((f"G3- k={k}", dims(space("G3plus", k, "-")),
                     int(h + k // 3 - k // 4 - fl(Fraction(5 * k, 12)))))
        if k >= 2:
            plus2 = {0: 1 + k // 4, 2: (k + 2) // 4, 6: (k + 2) // 4, 4: k // 4}[k % 8]
            minus2 = {0: k // 4, 2: (k + 2) // 4, 6: (k + 2) // 4, 4: 1 + k // 4}[k % 8]
            plus3 = {0: 1 + k // 3, 2: (k + 1) // 3, 8: (k + 1) // 3, 4: (k - 1) // 3, 6: k // 3,
                     10: (k + 2) // 3}[k % 12]
            minus3 = {0: k // 3, 2: (k + 1) // 3, 8: (k + 1) // 3, 4: (k + 2) // 3, 6: 1 + k // 3,
                      10: (k - 1) // 3}[k % 12]
            rows.append((f"G2+ depth 1 k={k}", dims(space("G2plus", k, "+", 1)), plus2))
            rows.append((f"G2- depth 1 k={k}", dims(space("G2plus", k, "-", 1)), minus2))
            rows.append((f"G3+ depth 1 k={k}", dims(space("G3plus", k, "+", 1)), plus3))
            rows.append((f"G3- depth 1 k={k}", dims(space("G3plus", k, "-", 1)), minus3))
    for k in range(0, 49):
        rows.append((f"Gamma1(3) k={k}", dims(space("Gamma1_3", k)), 1 + k // 3))
    for k in range(1, 49, 2):
        chi = {1: (k + 5) // 6, 3: (k + 3) // 6, 9: (k + 3) // 6, 5: (k + 1) // 6, 11: (k + 1) // 6,
               7: (k - 1) // 6}[k % 12]
        chibar = {1: (k - 1) // 6, 3: (k + 3) // 6, 9: (k + 3) // 6, 5: (k + 1) // 6, 11: (k + 1) // 6,
                  7: (k + 5) // 6}[k % 12]
        rows.append((f"G3 chi k={k}", dims(space("G3plus", k, "chi")), chi))
        rows.append((f"G3 chibar k={k}", dims(space("G3plus", k, "chibar")), chibar))
    return rows


def test_criterion_5_dimension_tables(report):
    t0 = time.perf_counter()
    fails = [f"{label}: {got} != {want}" for label, got, want in paper_dims() if got != want]
    report(5, "dimension formulas and tables for weights <= 48", fails, t0)


def closure_cases():
    """(label, group, weight, character, cusp eta powers for the divisor, divide by M2, Q terms)."""
    for k in (1, 2, 3):
        h2 = Fraction(k, 2) ** 2
        sign = "+" if k % 2 == 0 else "-"
        yield (f"G2 (i) k={k}", "G2plus", 4 * k, sign, {1: 4 * k, 2: 4 * k}, False,
               [(h2, "M4", None)])
        yield (f"G2 (ii) k={k}", "G2plus", 4 * k + 2, sign, {1: 4 * k, 2: 4 * k}, True,
               [(h2, "M4", None), (-32, "M8", "M4")])
        chi = CharacterLabel("G3plus", k)
        yield (f"G3 (i) k={k}", "G3plus", 3 * k, chi, {1: 3 * k, 3: 3 * k}, False,
               [(h2, "M4", None)])
        yield (f"G3 (ii) k={k}", "G3plus", 3 * k + 2, chi, {1: 3 * k, 3: 3 * k}, True,
               [(h2, "M4", None), (-18, "M6", "M2")])


def closure_residual(group, weight, ch, eta, with_m2, qterms, n=15):
    """Largest exponent below ``n`` where ``D^2 y - Q y`` fails, or None."""
    m = n + 2
    f = extremal(space(group, weight, ch, 1), Fraction(m + 6))
    v = f.valuation()
    lead, body = o.eta_product(eta, m)
    den = o.mul(body, o.named(group, "M2", m)) if with_m2 else body
    a = v - lead
    fs = [f.coefficient(v + j) for j in range(m)]
    y = o.mul(fs, o.inverse(den))
    Q = [Fraction(0)] * m
    for c, num, over in qterms:
        term = o.named(group, num, m)
        if over:
            term = o.mul(term, o.inverse(o.named(group, over, m)))
        Q = o.add(Q, term, coeffs=[1, c])
    bad = None
    for j in range(m):
        if a + j >= n:
            break
        res = (a + j) ** 2 * y[j] - sum((Q[i] * y[j - i] for i in range(j + 1)), Fraction(0))
        if res != 0:
            bad = a + j
            break
    return bad


def test_criterion_6_extremal_mode_closure(report):
    t0 = time.perf_counter()
    fails = []
    for label, group, weight, ch, eta, with_m2, qterms in closure_cases():
        bad = closure_residual(group, weight, ch, eta, with_m2, qterms)
        if bad is not None:
            fails.append(f"{label}: residual nonzero at q^{bad}")
    report(6, "extremal forms over eta products solve the stated MODEs to O(q^15)", fails, t0)


def elliptic_failures() -> list[str]:
    fails = []
    for g in GROUPS:
        for pt in context(g).elliptic:
            for kappa in (H, Fraction(1), Fraction(3, 2), Fraction(2), Fraction(5, 2)):
                if int(2 * kappa) % pt.order == 0:
                    continue
                spec = SingularitySpec(0, kappa if pt.label == "rho1" else H, kappa if pt.label == "rho2" else H)
                pars = indicial_parameters(g, spec)
                fam = (QFamily(g, "r", pars["s"], "t") if pt.label == "rho2"
                       else QFamily(g, "r", "s", pars["t"]))
                rep = apparent_obstruction(fam.jet(pt.label, max(int(2 * kappa) - 2, 0)), kappa)
                if not rep.obstruction.is_zero():
                    fails.append(f"{g} {pt.label} kappa={kappa}: obstruction {rep.obstruction}")
    return fails


INDICIAL = {
    ("SL2Z", "rho1"): "t/432", ("SL2Z", "rho2"): "-s/192",
    ("G2plus", "rho1"): "t/64", ("G2plus", "rho2"): "-s/16",
    ("G3plus", "rho1"): "t/27", ("G3plus", "rho2"): "-s/3",
    ("SL2Z", "interior"): "r1/(1728**2*tj)", ("G2plus", "interior"): "r1/(256**2*tj)",
    ("G3plus", "interior"): "r1/(108**2*tj)",
}


def indicial_failures() -> list[str]:
    fails = []
    for (g, point), text in INDICIAL.items():
        if point == "interior":
            jet = QFamily(g, "r", "s", "t", (("tj", "r1", "r2"),)).jet(point, 0, "tj")
        else:
            jet = QFamily(g, "r", "s", "t").jet(point, 0)
        got = sympy.sympify(str(indicial(jet).a_minus2.as_expr()))
        if sympy.simplify(got - sympy.sympify(text)) != 0:
            fails.append(f"{g} {point}: a_-2 = {got}, expected {text}")
    return fails


def test_criterion_7_apparentness(report):
    t0 = time.perf_counter()
    fails = elliptic_failures()
    res = construct_Q("SL2Z", SingularitySpec(0, H, H, ((Fraction(3, 7), 1),)))
    roots = sorted(sol.interior[0][2] for sol in res)
    if res.degree != 2 or roots != [Fraction(-4608, 7), Fraction(-576)] or res.unresolved:
        fails.append(f"interior roots {roots}, degree {res.degree}")
    a = Fraction(1)
    if Fraction(-1728) * (1 + 31 * a) / (12 * (1 + 6 * a)) not in roots:
        fails.append("a-parameterization root missing")
    fails += indicial_failures()
    report(7, "elliptic auto-apparentness, interior roots at t1 = 3/7, indicial closed forms", fails, t0)


SERRE = {
    "SL2Z": [("E4", 4, [(Fraction(-1, 3), {"E6": 1})]), ("E6", 6, [(Fraction(-1, 2), {"E4": 2})])],
    "G2plus": [("M2", 2, [(Fraction(-1, 4), {"M4minus": 1})]), ("M4minus", 4, [(Fraction(-1, 2), {"M2": 3})])],
    "G3plus": [("M1", 1, [(Fraction(-1, 6), {"M3": 1})]), ("M3", 3, [(Fraction(-1, 2), {"M1": 5})])],
}
M_FORM = {"SL2Z": [(Fraction(-1, 12), {"E4": 1})], "G2plus": [(Fraction(-1, 8), {"M2": 2})],
          "G3plus": [(Fraction(-1, 6), {"M1": 4})]}


def test_criterion_8_serre_tables(report):
    t0 = time.perf_counter()
    n = 31
    fails = []
    for g in GROUPS:
        ctx = context(g)
        A = o.ANOMALY[g]
        phi = o.named(g, o.PHI[g], n)
        syms = {form: sym for sym, form in o.GENERATORS[g].items()}
        for form, w, rhs in SERRE[g]:
            lhs = o.theta_serre(o.named(g, form, n), w, phi, A)
            if lhs != product(g, rhs, n):
                fails.append(f"{g}: theta {form} differs from stated identity")
            table = {e: ParamField.as_rational(c) for e, c in ctx.serre[syms[form]].terms.items()}
            if o.evaluate(g, table, n) != lhs:
                fails.append(f"{g}: package table for {form} differs from expansion")
        mf = o.add(o.dq(phi), o.mul(phi, phi), coeffs=[1, Fraction(-1, A)])
        if mf != product(g, M_FORM[g], n):
            fails.append(f"{g}: D phi - phi^2/A differs from stated form")
        table = {e: ParamField.as_rational(c) for e, c in ctx.M_form.terms.items()}
        if o.evaluate(g, table, n) != mf:
            fails.append(f"{g}: package M form differs from expansion")
    report(8, "Serre derivative tables and M forms against expansions to q^30", fails, t0)


def random_series(rng: random.Random, n: int, den: int) -> FracQSeries:
    vals = [Fraction(rng.randint(-9, 9), rng.randint(1, 4)) for _ in range(n)]
    return FracQSeries.from_coefficients(vals, Fraction(n, den), 0, den)


def series_laws(rng) -> list[str]:
    fails = []
    for _ in range(20):
        den = rng.choice([1, 2])
        a, b, c = (random_series(rng, 8, den) for _ in range(3))
        if not ((a * b) * c == a * (b * c) and a * (b + c) == a * b + a * c and a * b == b * a):
            fails.append("ring law")
        if (a * b).dq() != a.dq() * b + a * b.dq():
            fails.append("Leibniz")
    return fails


def membership_round_trips(rng) -> list[str]:
    fails = []
    sp = space("G2plus", 12, "+", 1)
    ctx = context("G2plus")
    labels = [(1, e) for e in monomials("G2plus", 10, "+")] + [(0, e) for e in monomials("G2plus", 12, "+")]
    phi = ctx.phi(24)
    for _ in range(5):
        cs = [Fraction(rng.randint(-30, 30)) for _ in labels]
        f = FracQSeries.zero(24)
        for c, (p, e) in zip(cs, labels):
            s = ctx.poly_series(WeightedPoly.monomial(ctx.gens, ctx.field, e), 24)
            f = f + (phi * s if p else s) * c
        if membership(f, sp).coords != cs:
            fails.append("membership round trip")
    return fails


def wronskian_law(rng) -> list[str]:
    fails = []
    branches = set()
    SL = context("SL2Z")
    e4, e6 = SL.gen_poly("e4"), SL.gen_poly("e6")
    forms = [extremal_form(space("SL2Z", 6, None, 1), 24), from_polys("SL2Z", 4, None, None, e4, 24)]
    for _ in range(6):
        forms.append(from_polys("SL2Z", 6, None, e4 * rng.randint(-5, 5), e6 * rng.randint(1, 5), 24))
    for d in forms:
        v1 = None if d.f1.is_zero() else d.f1.valuation()
        branches.add("f1=0" if v1 is None else ("vf>vf1" if d.f.valuation() > v1 else "vf<=vf1"))
        if wronskian(d).W.valuation() != expected_wronskian_valuation(d.f.valuation(), v1):
            fails.append("Wronskian valuation law")
    if branches != {"f1=0", "vf>vf1", "vf<=vf1"}:
        fails.append(f"branches covered: {sorted(branches)}")
    return fails


def vanishing_laws(rng) -> list[str]:
    fails = []
    for g in GROUPS:
        ctx = context(g)
        for pt in ("rho1", "rho2"):
            for _ in range(4):
                k, ch = rng.randint(1, 12), rng.randint(0, 3)
                mons = monomials(g, k, CharacterLabel(g, ch))
                if not mons:
                    continue
                p = WeightedPoly(ctx.gens, ctx.field, {e: Fraction(rng.randint(1, 5)) for e in mons})
                if not vanishing_law_holds(poly_jet(p, k, pt, 8, g), ctx.monomial_character(mons[0])):
                    fails.append(f"vanishing law {g} {pt} k={k}")
    return fails


def certification_round_trips(rng, per_group: int = 10) -> list[str]:
    """construct Q, certify, rebuild Q from the certified quasimodular form."""
    fails = []
    for g in GROUPS:
        e1, e2 = (p.order for p in context(g).elliptic)
        halves = [Fraction(n, 2) for n in range(1, 6)]
        k1s = [k for k in halves if gcd(int(2 * k), e1) == 1]
        k2s = [k for k in halves if gcd(int(2 * k), e2) == 1]
        for _ in range(per_group):
            spec = SingularitySpec(Fraction(rng.randint(0, 5), 2), rng.choice(k1s), rng.choice(k2s))
            fam, = construct_Q(g, spec)
            order = Fraction(default_order(g, spec))
            cert = certify(ModeProblem(g, fam.series(order + 2), spec, fam), order)
            d = from_polys(g, cert.ell + 1, cert.delta, cert.g1_poly, cert.g0_poly, order)
            Q, _ = quasiform_to_mode(d)
            if not Q.agrees_with(fam.series(order), Q.trunc):
                fails.append(f"round trip {g} {spec}")
    return fails


def test_criterion_9_property_suites(report):
    t0 = time.perf_counter()
    rng = random.Random(20240601)
    fails = (series_laws(rng) + membership_round_trips(rng) + wronskian_law(rng) + vanishing_laws(rng)
             + certification_round_trips(rng))
    report(9, "ring laws, Leibniz, membership, Wronskian law, vanishing law, 10 round trips per group",
           fails, t0)
