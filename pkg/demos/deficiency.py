"""
Counting against characteristic for e_{-1/2}
============================================

Compares N(r, -max(e, -1)) with T(r, e) for e = e_{-1/2}. The level -1 sits
below every pole value of e, so the two grow together and the ratio stays
near 1.
"""

import numpy as np

from tropical_nevanlinna import characteristic_value, counting, make_exponential, tropical_max
from tropical_nevanlinna.special_functions import event_census

e = make_exponential(-0.5)
lifted = tropical_max(e, -1.0)

# roots of max(e, -1) are the poles counted by N; their weights double every step left
census = event_census(-lifted, -6.5, 0.0)
print("poles of -max(e, -1) on [-6.5, 0]:", census["poles"])

r = np.linspace(20.0, 60.0, 9)
ratio = counting(-lifted, r) / characteristic_value(e, r)
for ri, q in zip(r, ratio):
    print(f"r={ri:5.1f}  N/T = {q:.9f}")
