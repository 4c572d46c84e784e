"""Haar-basis Monte Carlo for Q and the Levy-Khintchine reconstruction.

Run: python demos/haar_and_lk.py
"""

import numpy as np

from symentropy import bernstein as bp
from symentropy import entropy_e, subentropy_e
from symentropy.haar import HaarConfig, estimate_Q

est = estimate_Q(HaarConfig(3, (0.5, 0.3, 0.2), 20000, 1))
print("implied Q   ", est.implied_Q, "+/-", est.std_error)
print("reference Q ", est.reference_Q, " z =", est.z_score)

e = np.array([1.0, 0.3, 0.02])
print("\nH:", bp.lk_reconstruct_H(e), "vs", entropy_e(e))
print("Q:", bp.lk_reconstruct_Q(e), "vs", subentropy_e(e))

# Pick property: Im H and Im Q stay positive in the upper half plane
r = bp.pick_sweep(3, 2, bp.pick_grid(20, np.random.default_rng(0)))
print("\nPick sweep passed:", r.passed, " smallest Im part", -r.max_residual)
