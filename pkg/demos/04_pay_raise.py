"""
Asking for a raise
==================

Bob's happiness with a raise of k depends on the lowest raise r he thought
possible: u_B = k + f(k - r).  Alice's preferences come in three flavors.
"""

from fractions import Fraction

from lbgames import pay_raise
from lbgames.checker import counterfactual_utility
from lbgames.repro import pay_raise_point
from lbgames.solve import rationalizable_set

game = pay_raise("absolute", n_steps=6)
M = pay_raise_point(game.form, 5, [2, 3, 5])
print("k=5 with r=2:", counterfactual_utility(game, M, "x5", "B", "only"))

# Loss aversion: disappointments weigh three times as much
averse = pay_raise("absolute", alpha=1, beta=3, n_steps=6)
M = pay_raise_point(averse.form, 1, [3])
print("k=1 with r=3, beta=3:", counterfactual_utility(averse, M, "actual", "B", "only"))

# A guilty Alice pays dearly for undershooting Bob's expectations
guilt = pay_raise("guilt", n_steps=6)
M = pay_raise_point(guilt.form, 1, [3])
print("guilt, k=1 with r=3:", counterfactual_utility(guilt, M, "actual", "A", "s1"))

# An empathetic Alice shares Bob's joy at a cost delta per unit of raise
# with r held fixed her utility is (2 - delta)k - r, so delta = 2 is the tipping point
for delta in (Fraction(1, 2), Fraction(5, 2)):
    emp = pay_raise("empathetic", delta=delta, n_steps=6)
    witnessed = [s for (p, s), w in rationalizable_set(emp, max_states=2).items()
                 if p == "A" and w.found]
    print(f"empathetic, delta={delta}: rationalizable raises {witnessed}")
