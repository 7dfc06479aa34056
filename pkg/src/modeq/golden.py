"""Reproduce the worked examples stored as JSON under ``golden/v1``.

Two kinds of case exist.  An ``identity`` case fixes ``y_+`` coefficients
and an identity ``scale * F * y_+ = phi * A + B`` where ``A`` and ``B`` are
sums of products of named forms.  An ``extremal`` case asserts that
``F * y_+`` is the monic extremal form of the stated weight and character.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Iterable

from .errors import ModeqError
from .groups import context, parse_character, space
from .local import QFamily
from .mode import ModeProblem, SingularitySpec, certify, default_order
from .qseries import FracQSeries
from .quasi import extremal
from .symring import ParamField, WeightedPoly

GOLDEN_DIR = Path(__file__).parent / "golden" / "v1"


@dataclass
class GoldenResult:
    id: str
    group: str
    passed: bool
    failures: list[str] = field(default_factory=list)
    seconds: float = 0.0

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        text = f"{status} {self.id} ({self.group}, {self.seconds:.2f}s)"
        return text if self.passed else text + ": " + "; ".join(self.failures)


def load_cases(golden_dir: str | Path | None = None, filter: str | None = None) -> list[dict]:
    root = Path(golden_dir) if golden_dir else GOLDEN_DIR
    cases = []
    for path in sorted(root.glob("*.json")):
        data = json.loads(path.read_text())
        data.setdefault("id", path.stem)
        if filter and filter.lower() not in data["id"].lower() and filter.lower() != data["group"].lower():
            continue
        cases.append(data)
    return cases


def _product_poly(group: str, terms: Iterable) -> WeightedPoly:
    ctx = context(group)
    total = WeightedPoly(ctx.gens, ParamField())
    for coeff, factors in terms:
        p = WeightedPoly.const(ctx.gens, ParamField(), Fraction(coeff))
        for name, e in factors.items():
            form = ctx.form(name)
            if form.poly is None:
                raise ModeqError(f"{name} has no generator polynomial")
            p = p * form.poly ** int(e)
        total = total + p
    return total


def _product_series(group: str, terms: Iterable, order: Fraction) -> FracQSeries:
    """The same sum computed from each named form's own q-expansion recipe."""
    ctx = context(group)
    total = FracQSeries.zero(order)
    for coeff, factors in terms:
        s = FracQSeries.constant(Fraction(coeff), order)
        for name, e in factors.items():
            s = s * ctx.form(name).recipe(order) ** int(e)
        total = total + s
    return total


def problem_of(case: dict, order: Fraction) -> ModeProblem:
    q = case["Q"]
    fam = QFamily(case["group"], Fraction(q["r"]), Fraction(q["s"]), Fraction(q["t"]))
    spec = SingularitySpec.from_json_obj(case["spec"])
    return ModeProblem(case["group"], fam.series(order + 2), spec, fam)


def run_case(case: dict) -> GoldenResult:
    t0 = time.perf_counter()
    group = context(case["group"]).name
    fails: list[str] = []
    try:
        spec = SingularitySpec.from_json_obj(case["spec"])
        order = Fraction(max(default_order(group, spec), int(Fraction(case.get("min_order", "13")))))
        cert = certify(problem_of(case, order), order)
        exp = case["expect"]
        if cert.ell != exp["ell"]:
            fails.append(f"ell {cert.ell} != {exp['ell']}")
        if cert.delta != parse_character(group, exp["delta"]):
            fails.append(f"delta {cert.delta} != {exp['delta']}")
        if case["kind"] == "identity":
            fails.extend(_check_identity(group, cert, exp, order))
        elif case["kind"] == "extremal":
            ex = exp["extremal"]
            f = extremal(space(group, ex["weight"], ex["character"], 1), order)
            yh = cert.y_hat
            if not (yh / yh.leading_coefficient()).agrees_with(f, order):
                fails.append("F*y_+ is not the extremal form")
        else:
            fails.append(f"unknown case kind {case['kind']!r}")
    except ModeqError as exc:
        fails.append(f"{type(exc).__name__}: {exc}")
    return GoldenResult(case["id"], group, not fails, fails, time.perf_counter() - t0)


def _check_identity(group: str, cert, exp: dict, order: Fraction) -> list[str]:
    fails = []
    y = exp["y_plus"]
    kappa = Fraction(y["exponent"])
    ys = cert.y_plus.coeffs
    for n, c in enumerate(y["coefficients"]):
        got = ys.coefficient(kappa + n)
        if got != Fraction(c):
            fails.append(f"y_+ coefficient of q^{kappa + n}: {got} != {c}")
    scale = Fraction(exp["scale"])
    A = _product_poly(group, exp["phi_part"])
    B = _product_poly(group, exp["modular_part"])
    if cert.g1_poly * scale != A:
        fails.append(f"phi part {cert.g1_poly * scale} != {A}")
    if cert.g0_poly * scale != B:
        fails.append(f"modular part {cert.g0_poly * scale} != {B}")
    ctx = context(group)
    rhs = ctx.phi(order) * _product_series(group, exp["phi_part"], order) + _product_series(
        group, exp["modular_part"], order)
    if not (cert.y_hat * scale).agrees_with(rhs, order):
        fails.append("series identity fails")
    return fails


def run_all(golden_dir: str | Path | None = None, filter: str | None = None) -> list[GoldenResult]:
    return [run_case(c) for c in load_cases(golden_dir, filter)]
