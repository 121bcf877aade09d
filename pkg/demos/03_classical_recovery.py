"""
Classical games are a special case
==================================

When utilities only look at the strategy profile, the belief machinery
reduces to ordinary game theory.  The prisoner's dilemma keeps its unique
equilibrium and cooperation is never rationalizable.
"""

from fractions import Fraction

from lbgames import (
    build_characteristic_structure,
    find_nash,
    is_nash,
    prisoners_dilemma,
    search_rationalizable,
)
from lbgames.checker import expected_utility

pd = prisoners_dilemma()
print("(d,d) is Nash:", is_nash(pd, {"A": {"d": 1}, "B": {"d": 1}}))
print("(c,c) is Nash:", is_nash(pd, {"A": {"c": 1}, "B": {"c": 1}}))
print("feasible supports:", [v.support for v in find_nash(pd).feasible])

# Expected utility against a uniform opponent, inside the characteristic structure
half = Fraction(1, 2)
M = build_characteristic_structure(pd.form, {"A": {"c": half, "d": half}, "B": {"c": half, "d": half}})
for s in ("c", "d"):
    print(f"EU_A({s}) against a coin flip: {expected_utility(pd, M, '(c,c)', 'A', s)}")

print("A:d", search_rationalizable(pd, "A", "d", 1).verdict)
print("A:c", search_rationalizable(pd, "A", "c", 4).verdict)
