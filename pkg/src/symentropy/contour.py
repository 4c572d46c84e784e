"""Contour-integral oracle for H and Q.

For a circle that encloses every root ``x_j`` of ``p`` but not the origin,

    H = -(1 / 2 pi i) oint z ln z p'(z) / p(z) dz
    Q = -(1 / 2 pi i) oint z^d ln z / p(z) dz

The integrands are analytic and periodic in the angle, so the uniform
trapezoidal rule converges geometrically.  Only real positive roots are
supported; this module exists to cross-check the half-axis evaluators.
"""

from dataclasses import dataclass

import numpy as np

from .errors import ContourViolation
from .sympoly import as_sympoly, horner, p_coeffs, roots_from_symmetric

# roots closer than this to the circle are rejected
ROOT_CLEARANCE = 1e-6
AUTO_START_NODES = 256
AUTO_MAX_NODES = 2 ** 22
AUTO_TOL = 1e-13


@dataclass(frozen=True)
class ContourSpec:
    """A circle ``|z - center| = radius`` sampled at ``nodes`` equispaced angles."""

    center: float
    radius: float
    nodes: int = 512

    def __post_init__(self):
        if not (self.center > 0 and self.radius > 0):
            raise ContourViolation("center and radius must be positive")
        if self.radius >= self.center:
            raise ContourViolation("the circle meets the closed negative real axis (radius >= center)")
        if self.nodes < 16:
            raise ContourViolation("at least 16 nodes are required")


@dataclass(frozen=True)
class ContourResult:
    value: float
    imag_residual: float
    nodes: int


def auto_contour(roots, nodes=AUTO_START_NODES):
    """Default circle through ``x_min / 2`` and ``x_max + x_min / 2``."""
    lo, hi = float(np.min(roots)), float(np.max(roots))
    return ContourSpec(center=0.5 * (lo + hi), radius=0.5 * (hi - lo) + 0.5 * lo, nodes=nodes)


def _positive_roots(e):
    rs = roots_from_symmetric(e)
    if rs.classification != "all-real-nonnegative":
        raise ContourViolation("p has complex roots; no admissible contour")
    roots = rs.real_roots()
    if np.any(roots <= 0):
        raise ContourViolation("p has a root at 0, which a contour excluding the origin cannot enclose")
    return roots


def _check_encloses(roots, c):
    dist = np.abs(roots - c.center)
    if np.any(dist > c.radius - ROOT_CLEARANCE):
        raise ContourViolation(
            f"a root lies outside or within {ROOT_CLEARANCE:g} of the circle "
            f"(center {c.center:g}, radius {c.radius:g})")


def _trapezoid(e, c, which, shift=0.0):
    coeffs = p_coeffs(e)
    d = e.size
    theta = 2 * np.pi * (np.arange(c.nodes) + shift) / c.nodes
    w = np.exp(1j * theta)
    z = c.center + c.radius * w
    pz = horner(coeffs, z)
    if which == "H":
        dcoeffs = coeffs[:-1] * np.arange(d, 0, -1)
        f = z * np.log(z) * horner(dcoeffs, z) / pz
    else:
        f = z ** d * np.log(z) / pz
    # dz = i R e^{i theta} dtheta; the i cancels the 1/(2 pi i)
    return -(c.radius / c.nodes) * np.sum(f * w)


def _evaluate(e, c, which):
    e = as_sympoly(e)
    roots = _positive_roots(e)
    if c is not None:
        _check_encloses(roots, c)
        v = _trapezoid(e, c, which)
        return ContourResult(float(v.real), float(abs(v.imag)), c.nodes)
    c = auto_contour(roots)
    _check_encloses(roots, c)
    v = _trapezoid(e, c, which)
    n = c.nodes
    while n < AUTO_MAX_NODES:
        # doubling the nodes only needs the midpoints of the current rule
        mid = _trapezoid(e, ContourSpec(c.center, c.radius, n), which, shift=0.5)
        w = 0.5 * (v + mid)
        n *= 2
        if abs(w - v) <= AUTO_TOL * max(1.0, abs(w)):
            return ContourResult(float(w.real), float(abs(w.imag)), n)
        v = w
    return ContourResult(float(v.real), float(abs(v.imag)), n)


def entropy_contour_result(e, c=None):
    """H by the trapezoidal rule; ``c=None`` picks the circle and node count automatically."""
    return _evaluate(e, c, "H")


def subentropy_contour_result(e, c=None):
    """Q by the trapezoidal rule, with the same conventions as :func:`entropy_contour_result`."""
    return _evaluate(e, c, "Q")


def entropy_contour(e, c=None):
    """Real part of the contour value of H (see :func:`entropy_contour_result`)."""
    return entropy_contour_result(e, c).value


def subentropy_contour(e, c=None):
    """Real part of the contour value of Q."""
    return subentropy_contour_result(e, c).value
