"""Derivatives in e, their universal bounds, and the (e1, e2) upper bounds.

Run: python demos/derivatives_and_bounds.py
"""

import numpy as np

from symentropy import DivergentIntegral, dH, dQ
from symentropy import identities as ids

e = np.array([1.0, 0.25])          # x = (1/2, 1/2)
print("dH/de2      ", dH(e, (2,)))      # 2
print("d2H/de1^2   ", dH(e, (1, 1)))    # -2/3
print("dQ/de2      ", dQ(e, (2,)))      # 2/3

# at e = (1, 0) the point x = (1, 0) sits on the boundary and dH/de2 blows up
try:
    dH(np.array([1.0, 0.0]), (2,))
except DivergentIntegral as err:
    print("divergent:", err.as_record())

# upper bounds from e1, e2 alone, attained at the canonical set
e1, e2, d = 1.0, 0.25, 3
a, b = ids.canonical_majorant(e1, e2, d)
bounds = ids.hq_upper_bounds(e1, e2, d)
print("\ncanonical set", ids.canonical_set(e1, e2, d), " a, b =", a, b)
print("H bound", bounds.H_bound, " Q bound", bounds.Q_bound)

# a random x with the same e1 never exceeds them
rng = np.random.default_rng(0)
x = rng.dirichlet(np.ones(d))
print("upper-bound check at", x, "->", ids.check_upper_bounds(x).passed)
