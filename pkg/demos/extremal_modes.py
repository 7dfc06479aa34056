"""Extremal depth-one forms on the Fricke groups of level 2 and 3 and the
second-order equations they satisfy after dividing by their Wronskian root."""

from fractions import Fraction

from modeq.errors import NotInSpace
from modeq.groups import CharacterLabel, membership, space
from modeq.mode import quasiform_to_mode
from modeq.quasi import extremal_form

ORDER = Fraction(24)

for group, weight, ch in [("G2plus", 4, "-"), ("G2plus", 8, "+"), ("G3plus", 3, "chi"), ("G3plus", 6, "chi^2")]:
    d = extremal_form(space(group, weight, ch, 1), ORDER)
    Q, _ = quasiform_to_mode(d)
    # Q is a weight-4 form when the Wronskian is a pure power of the cusp form
    sp = space(group, 4, CharacterLabel(group, 0))
    try:
        coords = membership(Q, sp).poly(0)
    except NotInSpace:
        coords = "meromorphic"
    print(f"{group} weight {weight} ({ch}): f = {d.f.truncate(d.f.valuation() + 3)}")
    print(f"    Q = {coords}")
