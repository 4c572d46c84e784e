"""Entropy and subentropy from e-coordinates, by every evaluator.

Run: python demos/evaluators.py
"""

import numpy as np

from symentropy import (elementary_symmetric, entropy_contour, entropy_direct, entropy_e,
                        entropy_e_log_form, subentropy_contour, subentropy_direct, subentropy_e)

x = np.array([0.5, 0.3, 0.2])
e = elementary_symmetric(x)
print("x =", x)
print("e =", e)

# four routes to H, three to Q
print("H direct    ", entropy_direct(x))
print("H half-axis ", entropy_e(e))
print("H log form  ", entropy_e_log_form(e))
print("H contour   ", entropy_contour(e))
print("Q direct    ", subentropy_direct(x))
print("Q half-axis ", subentropy_e(e))
print("Q contour   ", subentropy_contour(e))

# the half-axis forms also accept e-points whose polynomial has complex roots
e_cone = np.array([1.0, 0.3])
print("\ne =", e_cone, "(complex roots)")
print("H =", entropy_e(e_cone), " Q =", subentropy_e(e_cone))
