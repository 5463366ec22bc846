"""
Ultra-discrete equations
========================

Closed-form solutions of y(x+1) = c y(x) and y(x+1) + y(x-1) = c y(x),
checked by their residual on [-20, 20].
"""

from tropical_nevanlinna import delta_fixture, make_exponential, solve_first_order, solve_second_order
from tropical_nevanlinna.special_functions import event_census

# one event per unit interval and c = 2 gives e_2 back
sol = solve_first_order(2.0, [(0.0, 1.0)], normalization="classic")
print("c=2, first order:", sol.basis, "e_2(3.5) =", make_exponential(2.0)(3.5), sol.assembled(3.5))

# |c| > 2: a forward and a backward exponential
sol = solve_second_order(3.0, forward=[(0.0, 1.0)], backward=[(0.4, 2.0)])
res, sup = sol.residual()
print(f"c=3: residual {res:.2e} against sup|y| {sup:.2e}")

# |c| < 2 with c = -1: a 3-periodic solution made of small tents
d = delta_fixture()
census = event_census(d, 0.0, 3.0)
print("c=-1 fixture on [0, 3): poles", census["poles"], "roots", census["roots"])
sol = solve_second_order(-1.0, trig_terms=[("delta", 0.0, 1.0), (1, 0.25, 0.5)])
print(f"c=-1 with a trig term: residual {sol.residual()[0]:.2e}")
