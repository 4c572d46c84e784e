"""Entropy and subentropy evaluated directly from probabilities.

Subentropy is the (d-1)-th divided difference of ``g(t) = -t^d ln t`` over
the d points ``x_j``.  When points (nearly) coincide the naive formula
cancels catastrophically, so entries of the divided-difference tableau that
live inside a cluster of close points are evaluated from a Taylor expansion
of ``g`` about the cluster centre instead of by subtraction.
"""

from dataclasses import dataclass
from math import factorial

import numpy as np

from .sympoly import as_prob_vector

# consecutive sorted points closer than this (relative to max(x)) are clustered
CLUSTER_GAP = 0.05
# a cluster is only expanded about its centre c if its half-width is below this fraction of c
CLUSTER_RATIO = 0.25
_TAYLOR_MAX_TERMS = 200


@dataclass(frozen=True)
class EntropyPair:
    H: float
    Q: float


def entropy_direct(x):
    """Shannon entropy ``-sum x_j ln x_j`` in nats, with ``0 ln 0 = 0``."""
    x = as_prob_vector(x)
    pos = x[x > 0]
    return float(-np.sum(pos * np.log(pos))) + 0.0


def _harmonic(n):
    return sum(1.0 / j for j in range(1, n + 1))


def _g_taylor_scaled(d, c, n_terms):
    """``c^k g^(k)(c) / (k! c^d)`` for ``g(t) = -t^d ln t`` and k = 0 .. n_terms-1.

    Scaling by ``c^k`` keeps every coefficient O(1) however small ``c`` is.
    """
    out = np.empty(n_terms)
    lc = np.log(c)
    hd = _harmonic(d)
    for k in range(n_terms):
        if k <= d:
            # falling factorial d!/(d-k)! over k! is binom(d, k)
            b = factorial(d) // (factorial(d - k) * factorial(k))
            out[k] = -b * (lc + hd - _harmonic(d - k))
        else:
            j = k - d
            # d/dt^j ln t = (-1)^(j-1) (j-1)! t^-j
            out[k] = -factorial(d) * (-1) ** (j - 1) * factorial(j - 1) / factorial(k)
    return out


def _complete_homogeneous(y, n_terms):
    """``h_0 .. h_{n_terms-1}`` of the variables ``y``."""
    h = np.zeros(n_terms)
    h[0] = 1.0
    for v in y:
        for m in range(1, n_terms):
            h[m] = h[m] + v * h[m - 1]
    return h


def _cluster_dd(d, pts):
    """Divided difference of g over ``pts`` (all close to their centre) via Taylor series."""
    c = 0.5 * (pts.min() + pts.max())
    y = pts - c
    order = pts.size - 1
    rho = np.max(np.abs(y)) / c if c > 0 else 0.0
    # terms decay roughly like rho^j; pick enough for double precision
    n_extra = 8 if rho == 0 else int(min(_TAYLOR_MAX_TERMS, 8 + 40 / max(-np.log10(rho), 1e-3)))
    n_terms = order + n_extra + 1
    coeffs = _g_taylor_scaled(d, c, n_terms)
    # expand in the relative offsets y / c; the divided difference carries c^(d - order)
    h = _complete_homogeneous(y / c, n_extra + 1)
    return float(c ** (d - order) * np.dot(coeffs[order:order + n_extra + 1], h))


def _split(xs, idx, labels):
    """Accept ``idx`` as one cluster if a Taylor expansion about its centre converges fast."""
    pts = xs[idx]
    c = 0.5 * (pts[0] + pts[-1])
    if idx.size == 1:
        return
    if pts[0] == 0 and pts[-1] == 0:
        labels[idx] = idx[0]
        return
    if pts[0] > 0 and (pts[-1] - pts[0]) / 2 <= CLUSTER_RATIO * c:
        labels[idx] = idx[0]
        return
    cut = int(np.argmax(np.diff(pts))) + 1
    _split(xs, idx[:cut], labels)
    _split(xs, idx[cut:], labels)


def _clusters(xs):
    """Cluster ids for sorted points; equal ids mark one contiguous cluster."""
    labels = np.arange(xs.size)
    scale = xs[-1]
    if scale == 0:
        return np.zeros(xs.size, dtype=int)
    start = 0
    for i in range(1, xs.size + 1):
        if i == xs.size or xs[i] - xs[i - 1] > CLUSTER_GAP * scale:
            _split(xs, np.arange(start, i), labels)
            start = i
    return labels


def subentropy_direct(x):
    """Subentropy ``-sum_i x_i^d ln x_i / prod_{j != i} (x_i - x_j)`` in nats.

    Coincident and nearly coincident values are handled through confluent
    divided differences, which realise the limit of the formula.
    """
    x = as_prob_vector(x)
    d = x.size
    xs = np.sort(x)
    labels = _clusters(xs)

    def g(t):
        return -t ** d * np.log(t) if t > 0 else 0.0

    # table[i] holds [x_i .. x_{i+order}] g for the current order
    table = np.array([g(t) for t in xs])
    for order in range(1, d):
        new = np.empty(d - order)
        for i in range(d - order):
            j = i + order
            if labels[i] == labels[j]:
                if xs[j] == 0:
                    # all-zero cluster: lower derivatives of t^d ln t vanish at 0
                    new[i] = 0.0
                else:
                    new[i] = _cluster_dd(d, xs[i:j + 1])
            else:
                new[i] = (table[i + 1] - table[i]) / (xs[j] - xs[i])
        table = new
    return float(table[0]) + 0.0


def entropy_pair(x):
    """Both direct evaluations bundled as an :class:`EntropyPair`."""
    return EntropyPair(H=entropy_direct(x), Q=subentropy_direct(x))
