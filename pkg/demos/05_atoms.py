"""
Beyond strategies: extra atoms
==============================

Utilities can mention facts that are not moves.  Alice returning a library
book cares whether she believes she will do it tomorrow; a road-tripper can
only tell prices apart up to a coarse partition.
"""

from lbgames import library_book, roadtrip, search_rationalizable
from lbgames.checker import counterfactual_utility
from lbgames.game import DEFAULT_ROADTRIP_PARTITION, price_cell_atom
from lbgames.repro import single_state

book = library_book()
for move, atoms in (("return", []), ("wait", ["tomorrow"]), ("wait", [])):
    M = single_state(book.form, [move], atoms)
    print(f"{move:>6} with atoms {atoms}: u_A = {counterfactual_utility(book, M, 'w0', 'A', move)}")
for s in book.form.strategies["A"]:
    print(f"  {s}: {search_rationalizable(book, 'A', s, 2).verdict}")

trip = roadtrip()
for price in (295, 305, 20000, 20050):
    cell = price_cell_atom(DEFAULT_ROADTRIP_PARTITION, price)
    M = single_state(trip.form, ["buy"], [cell])
    print(f"price {price:>5} -> {cell:<13} u = {counterfactual_utility(trip, M, 'w0', 'A', 'buy')}")
