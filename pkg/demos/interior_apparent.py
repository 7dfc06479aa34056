"""Place an apparent singularity at an interior point of SL(2,Z)\\H.

With kappa_inf = 0 and a point where E4^3 = (3/7) E6^2 carrying exponents
-1/2, 3/2, the obstruction is quadratic in the free parameter r2."""

from fractions import Fraction

from modeq.local import apparent_obstruction, construct_Q, indicial
from modeq.mode import SingularitySpec

H = Fraction(1, 2)
t1 = Fraction(3, 7)
res = construct_Q("SL2Z", SingularitySpec(0, H, H, ((t1, 1),)))
print("obstruction polynomial:", res.polynomial.as_expr(), "= 0")
for fam in res:
    jet = fam.jet("interior", 0, t1)
    print(fam)
    print("    exponents", ", ".join(map(str, indicial(jet).roots)), " apparent:", apparent_obstruction(jet, 1).apparent)
