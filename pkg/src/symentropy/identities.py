"""Machine checks of the identities, bounds and inequalities satisfied by H and Q.

Each ``check_*`` function examines one input and returns a
:class:`VerificationReport`.  Residuals are non-negative numbers where 0
means "exactly satisfied": for an equality ``a = b`` the residual is
``|a - b| / max(1, |a|, |b|)``; for an inequality ``a <= b`` it is
``max(0, a - b) / max(1, |a|, |b|)``.  A report passes when its largest
residual is below the tolerance registered for that identity.  Sign checks
(Pick, complete monotonicity) register tolerance 0 and use minus the
smallest signed margin as residual, so they pass only with strict signs.

Bound checks that rely on the c-coefficients are only meaningful at
e-points coming from non-negative ``x`` (they fail on parts of the extended
cone), so callers should feed them such points.
"""

from dataclasses import dataclass, field
from itertools import combinations_with_replacement
from math import comb, factorial, log, sqrt
from typing import NamedTuple

import numpy as np

from .direct import entropy_direct, subentropy_direct
from .errors import DomainViolation, NotComparable
from .halfaxis import derivative_complex, dH, dQ, entropy_e, subentropy_e
from .quadrature import DEFAULT_CONFIG
from .sympoly import as_prob_vector, as_sympoly, elementary_symmetric

REGISTRY_VERSION = "1.0"

# identity name -> (tolerance, default samples per dimension)
TOLERANCES = {
    "sum_identities": (1e-8, 100),
    "derivative_bounds": (1e-8, 100),
    "de1_bound": (1e-8, 100),
    "hq_duality": (1e-8, 100),
    "index_sum": (1e-8, 100),
    "reduction": (1e-8, 100),
    "hq_difference": (1e-8, 100),
    "scaling": (1e-8, 100),
    "schur": (1e-10, 50),
    "bipartite": (1e-8, 50),
    "majorant_dominance": (1e-10, 100),
    "bound_attainment": (1e-10, 50),
    "pick": (0.0, 50),
    "complete_monotonicity": (0.0, 20),
    "lk_reconstruction": (1e-4, 20),
}

# complex-step size; the derivative is Im f(e + i h u_l) / h with no cancellation
_CS_STEP = 1e-20


@dataclass
class VerificationReport:
    identity_name: str
    samples: int
    max_residual: float
    passed: bool
    worst_witness: dict
    tolerance: float
    registry_version: str = REGISTRY_VERSION
    inconclusive: int = 0
    notes: dict = field(default_factory=dict)
    cases: int = 0

    def to_dict(self):
        return {
            "identity_name": self.identity_name,
            "samples": self.samples,
            "cases": self.cases,
            "max_residual": self.max_residual,
            "pass": self.passed,
            "worst_witness": self.worst_witness,
            "tolerance": self.tolerance,
            "registry_version": self.registry_version,
            "inconclusive": self.inconclusive,
            "notes": self.notes,
        }


@dataclass
class BoundReport:
    """A bound, the configuration attaining it (if known) and the slack.

    For an upper bound ``slack = bound - actual``; for a lower bound
    ``slack = actual - bound``.  Either way a valid bound has ``slack >= 0``.
    """

    bound_value: float
    attained_at: object
    slack: float
    actual: float = float("nan")
    extra: dict = field(default_factory=dict)


def make_report(name, residuals, witnesses, tol=None, inconclusive=0, notes=None):
    """Reduce the residuals of one sample to a report (first worst case wins ties)."""
    if tol is None:
        tol = TOLERANCES[name][0]
    residuals = [float(r) for r in residuals]
    if residuals:
        i = int(np.argmax(residuals))
        worst, witness = residuals[i], witnesses[i]
    else:
        worst, witness = 0.0, {}
    passed = not residuals or worst < tol
    return VerificationReport(name, 1, worst, bool(passed), witness, tol,
                              inconclusive=inconclusive, notes=notes or {}, cases=len(residuals))


def merge_reports(reports):
    """Associative merge of reports for the same identity (max of residuals)."""
    first = reports[0]
    worst = first
    for r in reports[1:]:
        if r.max_residual > worst.max_residual:
            worst = r
    return VerificationReport(
        first.identity_name, sum(r.samples for r in reports), worst.max_residual,
        all(r.passed for r in reports), worst.worst_witness, first.tolerance,
        inconclusive=sum(r.inconclusive for r in reports), notes=worst.notes,
        cases=sum(r.cases for r in reports))


def _eq(a, b):
    return abs(a - b) / max(1.0, abs(a), abs(b))


def _le(a, b):
    return max(0.0, a - b) / max(1.0, abs(a), abs(b))


def _lst(v):
    return [float(t) for t in np.asarray(v, dtype=float)]


def _cs(which, e, l, k=None, cfg=DEFAULT_CONFIG):
    """Complex-step derivative in ``e_l`` of H, Q, or a first derivative."""
    z = np.asarray(e, dtype=complex).copy()
    z[l - 1] += 1j * _CS_STEP
    return derivative_complex(z, which, k, cfg, imag_step=_CS_STEP)


# ---------------------------------------------------------------------------
# coefficient bounds

def c_bound(d, k, e1):
    """Lower bound ``c_{d,k}`` on ``dH/de_k`` over real x with first moment ``e1``.

    >>> c_bound(2, 2, 1.0)
    2.0
    """
    if d < 2:
        raise DomainViolation("c_bound needs d >= 2")
    if k < 2 or k > d:
        raise DomainViolation("c_bound needs 2 <= k <= d")
    if e1 <= 0:
        raise DomainViolation("c_bound needs e1 > 0")
    return d ** (k - 1) / ((d - k + 1) * comb(d - 1, k - 2) * e1 ** (k - 1))


def derivative_bound(func, d, m, K, e1):
    """Lower bound on ``(-1)^(m-1)`` times an m-th derivative with index sum K.

    An m-th derivative of H at x equals ``(m-1)!`` times a first derivative
    (index K) at the point where every ``x_i`` is repeated m times, which has
    dimension ``m d`` and first moment ``m e1``; Q uses ``m+1`` repetitions
    and the factor ``m!``.  The factorials only sharpen the bound, so the
    conservative form ``c_{md,K}(m e1)`` is used.
    """
    reps = m if func == "H" else m + 1
    return c_bound(reps * d, K, reps * e1)


def check_sum_identities(e, cfg=DEFAULT_CONFIG):
    """``H = e1 + sum k e_k dH/de_k`` and ``Q = e1 + sum e_k dH/de_k``.

    Terms with ``e_k = 0`` are dropped (they vanish).  The restatement in
    ``f_k = e_k^(1/k)`` is evaluated through the chain rule and compared with
    the e-form sum.
    """
    e = as_sympoly(e)
    H, Q = entropy_e(e, cfg), subentropy_e(e, cfg)
    grads = {k: dH(e, (k,), cfg) for k in range(1, e.size + 1) if e[k - 1] > 0}
    s_h = e[0] + sum(k * e[k - 1] * g for k, g in grads.items()) if e[0] > 0 else 0.0
    s_q = e[0] + sum(e[k - 1] * g for k, g in grads.items()) if e[0] > 0 else 0.0
    # f_k dH/df_k with dH/df_k = dH/de_k * k f_k^(k-1)
    f = {k: e[k - 1] ** (1.0 / k) for k in grads}
    s_f = e[0] + sum(f[k] * grads[k] * k * f[k] ** (k - 1) for k in grads) if e[0] > 0 else 0.0
    res = [_eq(H, s_h), _eq(Q, s_q), _eq(s_f, s_h)]
    wit = {"e": _lst(e), "H": H, "Q": Q, "H_sum": s_h, "Q_sum": s_q, "f_sum": s_f}
    return make_report("sum_identities", [max(res)], [wit])


def check_derivative_bounds(e, max_m=2, cfg=DEFAULT_CONFIG):
    """Signs and c-coefficient lower bounds of derivatives up to order ``max_m``.

    Every distinct index multiset gives the same value for a given (m, K), so
    one representative multiset per (m, K) is evaluated.
    """
    e = as_sympoly(e)
    d = e.size
    if e[-1] <= 0:
        raise DomainViolation("derivative bounds need e_d > 0")
    residuals, witnesses = [], []
    for m in range(1, max_m + 1):
        seen = set()
        for idx in combinations_with_replacement(range(1, d + 1), m):
            K = sum(idx)
            if K in seen or K < 2:
                continue
            seen.add(K)
            sign = (-1) ** (m - 1)
            for func, fn in (("H", dH), ("Q", dQ)):
                val = sign * fn(e, idx, cfg)
                bound = derivative_bound(func, d, m, K, e[0])
                residuals.append(_le(bound, val))
                witnesses.append({"e": _lst(e), "function": func, "index": list(idx),
                                  "value": val, "bound": bound})
    return make_report("derivative_bounds", residuals, witnesses)


def check_de1_bound(e, cfg=DEFAULT_CONFIG):
    """``dH/de_1 <= -1`` whenever ``e_1 >= 1``."""
    e = as_sympoly(e)
    if e[0] < 1:
        return make_report("de1_bound", [], [])
    g = dH(e, (1,), cfg)
    return make_report("de1_bound", [_le(g, -1.0)], [{"e": _lst(e), "dH_de1": g}])


def check_HQ_duality(e, cfg=DEFAULT_CONFIG):
    """``-dQ/de_k = d^2 H / de_l de_m`` for every ``k = l + m``.

    Both sides are also formed by complex-step differentiation of the Q and
    first-derivative integrands, which does not use the closed-form
    higher-order integrands.
    """
    e = as_sympoly(e)
    d = e.size
    if e[-1] <= 0:
        raise DomainViolation("duality check needs e_d > 0")
    residuals, witnesses = [], []
    for k in range(2, d + 1):
        dq_formula = dQ(e, (k,), cfg)
        dq_cs = _cs("Q", e, k, cfg=cfg)
        for l in range(1, k // 2 + 1):
            m = k - l
            d2_formula = dH(e, (l, m), cfg)
            d2_cs = _cs("dH", e, l, m, cfg)
            r = max(_eq(-dq_formula, d2_formula), _eq(-dq_cs, d2_cs), _eq(dq_cs, dq_formula),
                    _eq(d2_cs, d2_formula))
            residuals.append(r)
            witnesses.append({"e": _lst(e), "k": k, "l": l, "m": m, "minus_dQ": -dq_formula,
                              "d2H": d2_formula, "minus_dQ_cs": -dq_cs, "d2H_cs": d2_cs})
    return make_report("hq_duality", residuals, witnesses)


def check_index_sum(e, cfg=DEFAULT_CONFIG):
    """Second derivatives depend only on the index sum.

    Every pair ``(l, m)`` is differentiated by complex step and the spread
    within each index sum K is compared, together with the closed form.
    """
    e = as_sympoly(e)
    d = e.size
    if e[-1] <= 0:
        raise DomainViolation("index-sum check needs e_d > 0")
    groups = {}
    for l in range(1, d + 1):
        for m in range(l, d + 1):
            groups.setdefault(l + m, []).append((l, m))
    residuals, witnesses = [], []
    for K, pairs in groups.items():
        closed = dH(e, pairs[0], cfg)
        vals = [_cs("dH", e, l, m, cfg) for l, m in pairs]
        r = max(_eq(v, closed) for v in vals)
        residuals.append(r)
        witnesses.append({"e": _lst(e), "K": K, "pairs": [list(p) for p in pairs],
                          "values": vals, "closed_form": closed})
    return make_report("index_sum", residuals, witnesses)


def check_reduction(x, m, cfg=DEFAULT_CONFIG):
    """m-th derivatives as first derivatives at the m-fold repeated point.

    ``(-1)^(m-1) d^m H(e(x)) = (m-1)! dH/de_K`` at the e-point of x with every
    entry repeated m times.
    """
    x = as_prob_vector(x)
    if np.any(x <= 0):
        raise DomainViolation("reduction check needs strictly positive x")
    d = x.size
    e = elementary_symmetric(x)
    et = elementary_symmetric(np.repeat(x, m))
    residuals, witnesses = [], []
    for K in range(m, m * d + 1):
        if K < 2:
            continue
        idx = _index_with_sum(m, K, d)
        lhs = (-1) ** (m - 1) * dH(e, idx, cfg)
        rhs = factorial(m - 1) * dH(et, (K,), cfg)
        residuals.append(_eq(lhs, rhs))
        witnesses.append({"x": _lst(x), "m": m, "index": list(idx), "lhs": lhs, "rhs": rhs})
    return make_report("reduction", residuals, witnesses)


def _index_with_sum(m, K, d):
    """A multi-index of length m with entries in 1..d summing to K."""
    idx = [1] * m
    rest = K - m
    for j in range(m):
        add = min(rest, d - 1)
        idx[j] += add
        rest -= add
    return tuple(sorted(idx))


# ---------------------------------------------------------------------------
# H - Q lower bound, canonical set, upper bounds

def hq_difference_bound(e, H=None, Q=None, cfg=DEFAULT_CONFIG):
    """Lower bound ``sum_{k>=2} d^(k-1) e_k / (C(d-1,k-1) e_1^(k-1))`` on ``H - Q``.

    ``extra["first_term"]`` holds the weaker bound ``d e_2 / ((d-1) e_1)``.
    """
    e = as_sympoly(e)
    d = e.size
    if H is None:
        H = entropy_e(e, cfg)
    if Q is None:
        Q = subentropy_e(e, cfg)
    if e[0] == 0:
        if np.any(e != 0):
            raise DomainViolation("the H - Q bound needs e_1 > 0")
        bound = first = 0.0
    else:
        bound = sum(d ** (k - 1) * e[k - 1] / (comb(d - 1, k - 1) * e[0] ** (k - 1))
                    for k in range(2, d + 1))
        first = d * e[1] / ((d - 1) * e[0]) if d >= 2 else 0.0
    actual = H - Q
    return BoundReport(bound, None, actual - bound, actual, {"first_term": first})


def check_hq_difference(e, cfg=DEFAULT_CONFIG):
    br = hq_difference_bound(e, cfg=cfg)
    r = max(_le(br.bound_value, br.actual), _le(br.extra["first_term"], br.actual))
    return make_report("hq_difference", [r], [{"e": _lst(e), "H_minus_Q": br.actual,
                                                "bound": br.bound_value}])


def canonical_majorant(e1, e2, d):
    """The canonical set ``(a, ..., a, b)`` with prescribed ``e1``, ``e2``.

    ``a`` is the smaller root of ``d(d-1)/2 a^2 - (d-1) e1 a + e2 = 0`` and
    ``b = e1 - (d-1) a``.  Among x with these e1, e2 this set has the largest
    e_k for every k.

    >>> canonical_majorant(1.0, 0.24, 2)
    (0.4, 0.6)
    """
    if d < 2:
        raise DomainViolation("canonical set needs d >= 2")
    if e1 < 0 or e2 < 0:
        raise DomainViolation("e1 and e2 must be non-negative")
    disc = (d - 1) ** 2 * e1 ** 2 - 2 * e2 * d * (d - 1)
    scale = (d - 1) ** 2 * e1 ** 2
    if disc < 0:
        # values a few ulps below zero come from rounding at the uniform point
        if disc < -1e-12 * max(scale, 1e-300):
            raise DomainViolation(
                f"no real canonical set: (d-1)^2 e1^2 < 2 d (d-1) e2 for e1={e1}, e2={e2}, d={d}")
        disc = 0.0
    den = (d - 1) * e1 + sqrt(disc)
    # 2 e2 / ((d-1) e1 + sqrt(disc)) is the small root without cancellation
    a = 2 * e2 / den if den > 0 else 0.0
    b = e1 - (d - 1) * a
    return float(a), float(b)


def canonical_set(e1, e2, d):
    a, b = canonical_majorant(e1, e2, d)
    return np.array([a] * (d - 1) + [b])


def check_majorant_dominance(x):
    """The canonical set with the same e1, e2 dominates every e_k of x."""
    x = as_prob_vector(x)
    d = x.size
    e = elementary_symmetric(x)
    if d < 2:
        return make_report("majorant_dominance", [0.0], [{"x": _lst(x)}])
    f = elementary_symmetric(canonical_set(e[0], e[1], d))
    res = [_le(ek, fk) for ek, fk in zip(e, f)]
    return make_report("majorant_dominance", [max(res)],
                       [{"x": _lst(x), "e": _lst(e), "f": _lst(f)}])


class UpperBounds(NamedTuple):
    H_bound: float
    Q_bound: float
    HU_bound: float


def hq_upper_bounds(e1, e2, d):
    """Tightest upper bounds on H and Q given ``e1``, ``e2`` and ``d``.

    Both are attained at the canonical set; Q is evaluated there with the
    divided-difference evaluator.  ``HU_bound`` is the diagonal case of the
    Hellmund-Uhlmann bound ``-e1 ln e1 + ln(d) sqrt(2 d e2 / (d-1))``,
    reported for comparison only.
    """
    x = canonical_set(e1, e2, d)
    hb = entropy_direct(x)
    qb = subentropy_direct(x)
    hu = (-e1 * log(e1) if e1 > 0 else 0.0) + log(d) * sqrt(2 * d * e2 / (d - 1))
    return UpperBounds(hb, qb, hu)


def check_bound_attainment(e1, e2, d, cfg=DEFAULT_CONFIG):
    """The half-axis H and Q at the canonical set reproduce the bounds."""
    x = canonical_set(e1, e2, d)
    b = hq_upper_bounds(e1, e2, d)
    e = elementary_symmetric(x)
    H, Q = entropy_e(e, cfg), subentropy_e(e, cfg)
    r = max(_eq(H, b.H_bound), _eq(Q, b.Q_bound))
    return make_report("bound_attainment", [r], [{"e1": e1, "e2": e2, "d": d, "H": H, "Q": Q,
                                                   "H_bound": b.H_bound, "Q_bound": b.Q_bound}])


def check_upper_bounds(x):
    """H(x) and Q(x) never exceed the bounds computed from e1, e2 of x."""
    x = as_prob_vector(x)
    e = elementary_symmetric(x)
    b = hq_upper_bounds(e[0], e[1], x.size)
    H, Q = entropy_direct(x), subentropy_direct(x)
    r = max(_le(H, b.H_bound), _le(Q, b.Q_bound))
    return make_report("bound_attainment", [r], [{"x": _lst(x), "H": H, "Q": Q,
                                                   "H_bound": b.H_bound, "Q_bound": b.Q_bound}])


# ---------------------------------------------------------------------------
# Schur concavity, bipartite systems, scaling

def majorizes(x, y, tol=1e-12):
    """True if ``x`` majorizes ``y`` (equal sums, dominating sorted partial sums)."""
    x, y = np.sort(np.asarray(x, float))[::-1], np.sort(np.asarray(y, float))[::-1]
    if x.size != y.size:
        return False
    scale = max(1.0, float(np.sum(x)))
    if abs(x.sum() - y.sum()) > tol * scale:
        return False
    return bool(np.all(np.cumsum(x) >= np.cumsum(y) - tol * scale))


def robin_hood(x, rng, transfers=3):
    """Move mass from richer to poorer entries; the result is majorized by ``x``."""
    y = np.array(x, dtype=float)
    for _ in range(transfers):
        i, j = rng.choice(y.size, size=2, replace=False)
        if y[i] < y[j]:
            i, j = j, i
        gap = y[i] - y[j]
        t = rng.uniform(0, gap / 2)
        y[i] -= t
        y[j] += t
    return y


def check_schur_concavity(x, y):
    """H and Q do not increase when moving up the majorization order."""
    x, y = as_prob_vector(x), as_prob_vector(y)
    if not majorizes(x, y):
        if majorizes(y, x):
            x, y = y, x
        else:
            raise NotComparable("neither vector majorizes the other")
    hx, hy = entropy_direct(x), entropy_direct(y)
    qx, qy = subentropy_direct(x), subentropy_direct(y)
    r = max(_le(hx, hy), _le(qx, qy))
    return make_report("schur", [r], [{"x": _lst(x), "y": _lst(y), "H": [hx, hy], "Q": [qx, qy]}])


def check_bipartite(joint, cfg=DEFAULT_CONFIG):
    """Marginal versus joint: ``H(A) <= H(AB)``, ``Q(A) <= Q(AB)`` and derivative ordering.

    For the derivatives, ``(-1)^(m-1)`` times an m-th derivative (m = 1, 2)
    at the marginal e-point is at least its value at the joint e-point.  The
    derivatives are decreasing in every ``e_k`` (complete monotonicity) and
    ``e^A_k <= e^AB_k``, so this is the direction that holds.
    """
    J = np.asarray(joint, dtype=float)
    if J.ndim != 2 or np.any(J < 0) or not np.all(np.isfinite(J)):
        raise DomainViolation("joint must be a non-negative finite matrix")
    pa = J.sum(axis=1)
    pab = J.ravel()
    hA, hAB = entropy_direct(pa), entropy_direct(pab)
    qA, qAB = subentropy_direct(pa), subentropy_direct(pab)
    residuals = [_le(hA, hAB), _le(qA, qAB)]
    witnesses = [{"joint": J.tolist(), "what": "H", "A": hA, "AB": hAB},
                 {"joint": J.tolist(), "what": "Q", "A": qA, "AB": qAB}]
    eA, eAB = elementary_symmetric(pa), elementary_symmetric(pab)
    dA = pa.size
    if eA[-1] > 0:
        for m in (1, 2):
            for K in range(max(2, m), m * dA + 1):
                idx = _index_with_sum(m, K, dA)
                for func, fn in (("H", dH), ("Q", dQ)):
                    s = (-1) ** (m - 1)
                    a, b = s * fn(eA, idx, cfg), s * fn(eAB, idx, cfg)
                    residuals.append(_le(b, a))
                    witnesses.append({"joint": J.tolist(), "what": f"d{func}{list(idx)}",
                                      "A": a, "AB": b})
    return make_report("bipartite", residuals, witnesses)


def check_scaling(x, theta, cfg=DEFAULT_CONFIG):
    """The five scaling relations for ``theta >= 1``.

    x-scaling is checked as the exact identities
    ``F(theta x) = theta F(x) - theta e1 ln theta`` (F = H, Q), which imply
    ``Q(theta x) <= theta Q(x)``, ``H(theta x) <= theta H(x)`` and
    ``Q(theta x) - theta Q(x) = H(theta x) - theta H(x)``; e-scaling
    (every e_k multiplied by theta) gives ``Q(theta e) <= theta Q(e)`` and
    ``H(theta e) <= theta H(e)``.

    For the last one, with ``xi = q - tau^d`` the half-axis integrands give
    ``theta H(e) - H(theta e) = theta (theta-1) int xi (d q - tau q') /
    (q (tau^d + theta xi))`` and ``d q - tau q' = sum k e_k tau^(d-k) >= 0``,
    so H grows at most linearly along rays in e-space (``H(2, 0.5) < 2 ln 2``).
    """
    if theta < 1:
        raise DomainViolation("scaling relations need theta >= 1")
    x = as_prob_vector(x)
    e = elementary_symmetric(x)
    e1 = e[0]
    shift = theta * e1 * log(theta)
    hx, qx = entropy_direct(x), subentropy_direct(x)
    htx, qtx = entropy_direct(theta * x), subentropy_direct(theta * x)
    he, qe = entropy_e(e, cfg), subentropy_e(e, cfg)
    hte, qte = entropy_e(theta * e, cfg), subentropy_e(theta * e, cfg)
    rel = {
        "Q_x_identity": _eq(qtx, theta * qx - shift),
        "H_x_identity": _eq(htx, theta * hx - shift),
        "Q_x": _le(qtx, theta * qx),
        "H_x": _le(htx, theta * hx),
        "HQ_equality": _eq(qtx - theta * qx, htx - theta * hx),
        "Q_e": _le(qte, theta * qe),
        "H_e": _le(hte, theta * he),
    }
    worst = max(rel, key=rel.get)
    return make_report("scaling", [rel[worst]], [{"x": _lst(x), "theta": theta,
                                                  "relation": worst}])

