"""Solve y'' = -4 pi^2 Q y at the cusp for Q = E4/4 + 864 E4 Delta/E6^2 and
certify that Delta^(1/2) E6 y_+ is a depth-one quasimodular form."""

from fractions import Fraction

from modeq.local import QFamily
from modeq.mode import ModeProblem, SingularitySpec, certify

H = Fraction(1, 2)

fam = QFamily("SL2Z", Fraction(1, 4), 0, 864)
spec = SingularitySpec(H, Fraction(3, 2), H)
order = Fraction(14)
cert = certify(ModeProblem("SL2Z", fam.series(order + 2), spec, fam), order)

print(fam)
print("y_+    =", cert.y_plus.coeffs.truncate(5))
print("ell    =", cert.ell, " character:", cert.delta)
print("F*y_+  = E2 *", cert.g1_poly, "+", cert.g0_poly)
print("scaled = E2 *", cert.g1_poly * 11088, "+", cert.g0_poly * 11088)
