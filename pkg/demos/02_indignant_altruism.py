"""
Indignant altruism
==================

Alice and Bob play a prisoner's dilemma, except that defecting loses its
appeal when the other player expects it.  Below we check that the game
has no Nash equilibrium and that each strategy is still rationalizable.
"""

from lbgames import ModelChecker, find_nash, indignant_altruism, parse_formula, rationalizable_set
from lbgames.checker import expected_utility
from lbgames.repro import w4_structure

game = indignant_altruism()

report = find_nash(game)
print("Nash search:", report.method, "-", report.summary())

# The reference witness: four states, each player sure of their own move
# and wrongly sure that the other expects the opposite.
W = w4_structure()
mc = ModelChecker(W, game)
for f in ("RAT", "CB RAT", "B[B] play(A,d)"):
    states = sorted(mc.ids_of(mc.ext(parse_formula(f, game.form))), key=W.ids.index)
    print(f"  [[{f}]] = {states}")

for s in ("c", "d"):
    print(f"  EU_A({s}) at alpha = {expected_utility(game, W, 'alpha', 'A', s)}")

# Automatic search finds witnesses of at most four states for every strategy
for (p, s), w in rationalizable_set(game, max_states=4).items():
    print(f"  {p} plays {s}: {w.verdict} ({len(w.structure)} states, {w.examined} examined)")
