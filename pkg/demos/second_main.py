"""
The second main inequality on small instances
=============================================

An affine fixture where every term can be written down, a pair of negative
targets that breaks the stated bound, and the extra term that repairs it.
"""

import numpy as np

from tropical_nevanlinna import constant, linear, make_pi
from tropical_nevanlinna.inequalities import (
    SmtInstance,
    negative_target_term,
    second_main_terms,
    verify_second_main,
)

r = np.array([5.0, 10.0, 50.0])

# f(x) = x + 1 with the single target 0
c = 1.0
inst = SmtInstance(linear(1.0, 1.0), c, [0.0], R=100.0)
for name, value in second_main_terms(inst, r).items():
    print(f"{name:>15}: {np.round(value, 6)}")
rep = verify_second_main(inst, r)
print("lhs (r+1)/2 :", rep.lhs)
print("rhs r + c/2 :", rep.rhs)

# f = -1 with targets -3, -5: qT = 0 but the right-hand side is -1
bad = SmtInstance(constant(-1.0), 1.0, [-3.0, -5.0], R=60.0)
stated = verify_second_main(bad, r)
fixed = verify_second_main(bad, r, corrected=True)
print("stated   :", stated.passed, "slack", stated.slack)
print("corrected:", fixed.passed, "slack", fixed.slack, "extra term", negative_target_term(bad.targets))

# a periodic example where nothing is negative passes as stated
ok = SmtInstance(-make_pi(-1, -1), 0.5, [-1.0, -0.5], R=60.0)
print("-pi, targets -1, -0.5:", verify_second_main(ok, [5.0, 20.0, 60.0]).passed)
