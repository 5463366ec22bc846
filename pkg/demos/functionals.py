"""
Proximity, counting and characteristic functions
================================================

Tabulates m, N and T for a few functions and writes two SVG plots next to
this script.
"""

from pathlib import Path

import numpy as np

from tropical_nevanlinna import characteristic, characteristic_value, linear, make_exponential, make_pi
from tropical_nevanlinna.svg import Series, function_samples, line_chart

out = Path(__file__).with_name("out")
out.mkdir(exist_ok=True)

# an affine function: T stays at the intercept until r = beta/alpha, then grows like r/2
f = linear(2.0, 3.0)
for r in (0.5, 1.0, 1.5, 2.0, 5.0):
    s = characteristic(f, r)
    print(f"2x+3   r={r:4}  m={s.m:7.3f}  N={s.N:7.3f}  T={s.T:7.3f}")

# -pi has a unit pole at every integer, so N(r) is close to r^2/2
g = -make_pi(-1, -1)
for r in (10.0, 50.0, 200.0):
    s = characteristic(g, r)
    print(f"-pi    r={r:5}  N={s.N:10.2f}  r^2/2={r * r / 2:10.2f}")

# e_{-1/2} alternates sign and its kinks get steeper away from the origin
e = make_exponential(-0.5)
x, y = function_samples(e, -6.0, 6.0)
(out / "e_minus_half.svg").write_text(line_chart([Series(x, y, "e_{-1/2}")], "e_{-1/2}(x)", "x", "y"))

radii = np.geomspace(1.0, 40.0, 60)
chart = line_chart(
    [Series(radii, characteristic_value(make_exponential(2.0), radii), "T(r, e_2)")],
    "characteristic of e_2",
    "r",
    "T",
    log_y=True,
)
(out / "T_e2.svg").write_text(chart)
print(f"plots in {out}")
