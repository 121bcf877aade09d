"""
The surprise proposal
=====================

Bob wants to surprise Alice.  His payoff depends on what Alice believes,
so no mixed profile is an equilibrium, yet both of Bob's choices survive
common belief of rationality.
"""

from lbgames import find_nash, holds, parse_formula, render_formula, surprise_proposal
from lbgames.checker import counterfactual_utility
from lbgames.repro import surprise_witness_structure, single_state

game = surprise_proposal()
form = game.form
print("players:", form.players, "strategies:", dict(form.strategies))

# Bob's utility guards, printed in the concrete formula syntax
for g in game.utility["B"].guards:
    print(f"  u_B = {str(g.value):>2}  if  {render_formula(g.guard, form)}")

# Bob proposes and Alice saw it coming: no surprise, payoff 0
M = single_state(form, ("only", "p"))
print("u_B at a predictable proposal:", counterfactual_utility(game, M, "w0", "B", "p"))

# Nash equilibrium: every support profile fails
report = find_nash(game)
for v in report.verdicts:
    print("  support of Bob", v.support[1], "feasible" if v.feasible else "infeasible")
print(report.summary())

# A four-state world where Bob proposes at some states and not at others.
# Alice is always wrong about him, and that is what keeps him rational.
W = surprise_witness_structure()
cb_rat = parse_formula("CB RAT", form)
for st in W.states:
    print(f"  {st.id}: Bob plays {st.profile['B']}, CB RAT holds: {holds(W, st.id, cb_rat, game)}")
