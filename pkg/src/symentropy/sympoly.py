"""Conversions between probabilities and their elementary symmetric polynomials.

Two coordinate systems are used throughout the package:

* x-coordinates: a vector ``x`` of ``d`` non-negative reals;
* e-coordinates: ``e = (e_1, ..., e_d)`` with ``e_k`` the k-th elementary
  symmetric polynomial of ``x``.

Any non-negative ``e`` is accepted, including points that do not come from
non-negative ``x`` (their "roots" are then complex-conjugate pairs).  No
normalisation ``e_1 = 1`` is imposed.
"""

from dataclasses import dataclass
from math import comb, factorial

import numpy as np

from .errors import ConvergenceFailure, DomainViolation

MAX_DIM = 32

_EPS = np.finfo(float).eps


def as_prob_vector(x):
    """Validate ``x`` as a non-negative real vector and return a float array."""
    arr = np.asarray(x, dtype=float)
    if arr.ndim != 1 or arr.size < 1:
        raise DomainViolation("x must be a non-empty 1-d vector")
    if arr.size > MAX_DIM:
        raise DomainViolation(f"dimension {arr.size} exceeds the supported maximum {MAX_DIM}")
    if not np.all(np.isfinite(arr)):
        raise DomainViolation("x has non-finite entries")
    if np.any(arr < 0):
        raise DomainViolation("x has negative entries")
    return arr


def as_sympoly(e):
    """Validate a real e-point (all ``e_k >= 0``) and return a float array."""
    arr = np.asarray(e, dtype=float)
    if arr.ndim != 1 or arr.size < 1:
        raise DomainViolation("e must be a non-empty 1-d vector")
    if arr.size > MAX_DIM:
        raise DomainViolation(f"dimension {arr.size} exceeds the supported maximum {MAX_DIM}")
    if not np.all(np.isfinite(arr)):
        raise DomainViolation("e has non-finite entries")
    if np.any(arr < 0):
        raise DomainViolation("e has negative entries; the domain is e_k >= 0")
    return arr


def as_complex_sympoly(e):
    """Validate a complexified e-point used for upper-half-plane checks.

    At most one coordinate may carry an imaginary part, which must be
    positive; the others must be real and non-negative, and ``e_1 = 1``.
    Returns ``(array, k)`` with ``k`` the 1-based index of the complex
    coordinate, or ``None`` when every coordinate is real.
    """
    arr = np.asarray(e, dtype=complex)
    if arr.ndim != 1 or arr.size < 1:
        raise DomainViolation("e must be a non-empty 1-d vector")
    if arr.size > MAX_DIM:
        raise DomainViolation(f"dimension {arr.size} exceeds the supported maximum {MAX_DIM}")
    if not np.all(np.isfinite(arr)):
        raise DomainViolation("e has non-finite entries")
    if arr[0] != 1:
        raise DomainViolation("complex e-points require e_1 = 1")
    imag = arr.imag
    nz = np.flatnonzero(imag != 0)
    if nz.size > 1:
        raise DomainViolation("at most one coordinate may be complex")
    if nz.size == 1 and imag[nz[0]] <= 0:
        raise DomainViolation("the complex coordinate must lie in the upper half-plane")
    real_mask = imag == 0
    if np.any(arr.real[real_mask] < 0):
        raise DomainViolation("real coordinates must be non-negative")
    return arr, (int(nz[0]) + 1 if nz.size else None)


def elementary_symmetric(x):
    """Elementary symmetric polynomials ``(e_1, ..., e_d)`` of ``x``.

    Built from the coefficients of ``prod_j (t + x_j)``, one factor at a
    time.  Every step adds non-negative terms, so there is no cancellation.

    >>> elementary_symmetric([0.6, 0.4])
    array([1.  , 0.24])
    """
    x = as_prob_vector(x)
    coeffs = np.zeros(x.size + 1)
    coeffs[0] = 1.0
    for n, v in enumerate(x, start=1):
        coeffs[1:n + 1] = coeffs[1:n + 1] + v * coeffs[0:n]
    return coeffs[1:]


def trailing_zeros(e):
    """Number of trailing exact zeros in ``e``."""
    nz = np.flatnonzero(np.asarray(e) != 0)
    return len(e) if nz.size == 0 else len(e) - 1 - int(nz[-1])


def q_coeffs(e):
    """Coefficients (highest power first) of ``q(t) = t^d + e_1 t^{d-1} + ... + e_d``."""
    return np.concatenate(([1.0], np.asarray(e)))


def p_coeffs(e):
    """Coefficients (highest power first) of ``p(z) = z^d - e_1 z^{d-1} + ... + (-1)^d e_d``."""
    e = np.asarray(e)
    signs = (-1.0) ** np.arange(1, e.size + 1)
    return np.concatenate(([1.0], signs * e))


def horner(coeffs, z):
    """Evaluate a polynomial given highest-power-first ``coeffs`` at ``z``."""
    z = np.asarray(z)
    acc = np.zeros_like(z, dtype=np.result_type(z, np.asarray(coeffs), float))
    acc = acc + coeffs[0]
    for c in coeffs[1:]:
        acc = acc * z + c
    return acc


def q_eval(e, tau):
    """``q(tau) = tau^d + e_1 tau^{d-1} + ... + e_d``; roots are ``-x_j``."""
    return horner(q_coeffs(e), tau)


def p_eval(e, z):
    """``p(z) = z^d - e_1 z^{d-1} + ... + (-1)^d e_d``; roots are ``x_j``."""
    return horner(p_coeffs(e), z)


@dataclass(frozen=True)
class RootSet:
    """Roots of ``p`` for a given e-point.

    ``roots`` lists all ``d`` roots (clusters collapsed onto their mean and
    repeated by multiplicity).  ``classification`` is ``"all-real-nonnegative"``
    or ``"conjugate-pairs"``.
    """

    roots: np.ndarray
    multiplicities: tuple
    classification: str

    @property
    def distinct(self):
        out, i = [], 0
        for m in self.multiplicities:
            out.append(self.roots[i])
            i += m
        return np.array(out)

    def real_roots(self):
        if self.classification != "all-real-nonnegative":
            raise DomainViolation("roots are not all real and non-negative")
        return np.sort(self.roots.real)


def _aberth(coeffs, tol, max_iter):
    d = coeffs.size - 1
    scale = 1.0 + np.max(np.abs(coeffs[1:]))
    angles = 2 * np.pi * np.arange(d) / d + 0.4
    z = scale * np.exp(1j * angles)
    dcoeffs = coeffs[:-1] * np.arange(d, 0, -1)
    abs_coeffs = np.abs(coeffs)
    done = np.zeros(d, dtype=bool)
    for _ in range(max_iter):
        pz = horner(coeffs, z)
        dpz = horner(dcoeffs, z)
        # |p(z)| at the rounding level of Horner's scheme: cannot improve further
        bound = 4 * d * _EPS * horner(abs_coeffs, np.abs(z))
        done |= np.abs(pz) <= bound
        diff = z[:, None] - z[None, :]
        np.fill_diagonal(diff, 1.0)
        inv = 1.0 / diff
        np.fill_diagonal(inv, 0.0)
        with np.errstate(divide="ignore", invalid="ignore"):
            ratio = pz / dpz
            step = ratio / (1.0 - ratio * inv.sum(axis=1))
        step = np.where(done | ~np.isfinite(step), 0.0, step)
        z = z - step
        done |= np.abs(step) < tol * (1.0 + np.abs(z))
        if done.all():
            return z
    raise ConvergenceFailure(f"Aberth iteration did not converge in {max_iter} iterations")


def _deriv_coeffs(coeffs, order):
    c = np.asarray(coeffs, dtype=float)
    for _ in range(order):
        n = c.size - 1
        c = c[:-1] * np.arange(n, 0, -1)
    return c


def _multiple_root_radius(coeffs, c, s):
    """Spread expected for an s-fold root at ``c`` perturbed by rounding in ``p``.

    Solves ``|delta|^s |p^(s)(c)| / s! = noise`` where ``noise`` is the
    rounding level of Horner evaluation near ``c``.
    """
    d = coeffs.size - 1
    noise = 8 * d * _EPS * abs(horner(np.abs(coeffs), abs(c)))
    lead = abs(horner(_deriv_coeffs(coeffs, s), c)) / factorial(s)
    if lead == 0.0:
        return np.inf
    return 2.0 * (noise / lead) ** (1.0 / s)


def _cluster(z, coeffs):
    """Group roots into clusters whose spread is consistent with a multiple root."""
    remaining = list(range(z.size))
    clusters = []
    while remaining:
        i = remaining[0]
        near = np.argsort(np.abs(z[remaining] - z[i]), kind="stable")
        chosen = [remaining[near[0]]]
        for s in range(len(remaining), 1, -1):
            idx = [remaining[j] for j in near[:s]]
            sub = z[idx]
            diam = np.max(np.abs(sub[:, None] - sub[None, :]))
            if diam <= _multiple_root_radius(coeffs, np.mean(sub), s):
                chosen = idx
                break
        clusters.append(chosen)
        remaining = [j for j in remaining if j not in chosen]
    return clusters


def _polish_cluster(coeffs, c, s, steps=4):
    """Newton on ``p^(s-1)``, which has a simple root at an s-fold root of ``p``."""
    f = _deriv_coeffs(coeffs, s - 1)
    df = _deriv_coeffs(coeffs, s)
    for _ in range(steps):
        den = horner(df, c)
        if den == 0:
            break
        c = c - horner(f, c) / den
    return c


def roots_from_symmetric(e, tol=1e-12, max_iter=200):
    """All ``d`` roots of ``p(z) = z^d - e_1 z^{d-1} + ... + (-1)^d e_d``.

    Uses simultaneous (Aberth-Ehrlich) iteration.  Trailing zero ``e_k``
    give exact roots at 0 and are deflated first.  Nearly coincident roots
    are collapsed onto a single polished value and reported with their
    multiplicity.

    Raises ``ConvergenceFailure`` if the iteration cap is hit and
    ``DomainViolation`` if a real root is below ``-tol``.
    """
    e = as_sympoly(e)
    n_zero = trailing_zeros(e)
    core = e[:e.size - n_zero]
    means, mult, is_real = [], [], []
    if core.size:
        coeffs = p_coeffs(core)
        z = _aberth(coeffs, tol, max_iter) if core.size > 1 else np.array([complex(core[0])])
        scale = max(1.0, float(np.max(np.abs(z))))
        clusters = _cluster(z, coeffs)
        mult = [len(c) for c in clusters]
        means = np.array([np.mean(z[c]) if len(c) == 1 else _polish_cluster(coeffs, np.mean(z[c]), len(c))
                          for c in clusters])
        imag_tol = np.array([max(tol * scale, 64 * _EPS * scale,
                                 _multiple_root_radius(coeffs, mu, m) if m > 1 else 0.0)
                             for mu, m in zip(means, mult)])
        is_real = np.abs(means.imag) <= imag_tol
        # p has real coefficients, so a non-real root must have its conjugate in
        # the set; an unpaired root with a small imaginary part is a noisy real root
        for i in np.flatnonzero(~is_real):
            partner = np.abs(means - np.conj(means[i]))
            partner[i] = np.inf
            if partner.min() > 0.5 * abs(means[i].imag):
                is_real[i] = True
        means = np.where(is_real, means.real + 0j, means)
        if np.any(is_real & (means.real < -tol * scale)):
            raise DomainViolation("p has a real negative root; e is not a valid e-point")
        means = np.where(is_real & (means.real < 0), 0j, means)
        means, mult, is_real = list(means), list(mult), list(is_real)
    if n_zero:
        means.append(0j)
        mult.append(n_zero)
        is_real.append(True)

    means = np.array(means, dtype=complex)
    order = np.lexsort((means.imag, means.real))
    means = means[order]
    mult = tuple(int(mult[i]) for i in order)
    roots = np.repeat(means, mult)
    classification = "all-real-nonnegative" if all(is_real) else "conjugate-pairs"
    return RootSet(roots=roots, multiplicities=mult, classification=classification)


def binom(n, k):
    return comb(n, k) if 0 <= k <= n else 0
