"""Entropy, subentropy and their e-derivatives as integrals over [0, inf).

With ``q(tau) = tau^d + e_1 tau^{d-1} + ... + e_d`` (roots ``-x_j``):

    H = int_0^inf [ -tau q'/q - e_1/(tau+1) + d ] dtau
      = int_0^inf [ ln q + (e_1 - d) ln tau - e_1 ln(tau+1) ] dtau
    Q = int_0^inf [ -tau^d/q - e_1/(tau+1) + 1 ] dtau

and for a multi-index ``(k_1, ..., k_m)`` with ``K = sum k_j``

    d^m H = (-1)^(m-1) (m-1)! int tau^(md-K) / q^m
    d^m Q = (-1)^(m-1) m!     int tau^((m+1)d-K) / q^(m+1)

except for the first derivatives in ``e_1``, which need a ``1/(tau+1)``
regulariser at infinity.

Every rational integrand is assembled in coefficient space first, so the
large cancellations between its terms at large ``tau`` happen exactly on
polynomial coefficients instead of on rounded function values.  Trailing
zero ``e_k`` (exact zeros among the ``x_j``) are removed beforehand; H, Q
and all finite derivatives are unchanged by that reduction.
"""

from math import factorial

import numpy as np

from .errors import DivergentIntegral, DomainViolation
from .quadrature import DEFAULT_CONFIG, integrate_halfline
from .sympoly import as_complex_sympoly, as_sympoly


def _trim(e):
    nz = np.flatnonzero(e != 0)
    return e[:nz[-1] + 1] if nz.size else e[:0]


def _rational(num, den):
    """Vectorised ``num(tau) / den(tau)`` (coefficients highest power first).

    For ``tau > 1`` both polynomials are evaluated in ``s = 1/tau`` so that
    nothing overflows for large degrees.
    """
    num = np.trim_zeros(np.asarray(num), "f")
    den = np.asarray(den)
    dn, dd = num.size - 1, den.size - 1
    num_r, den_r = num[::-1], den[::-1]

    def f(tau):
        out = np.empty(tau.shape, dtype=np.result_type(num, den, float))
        small = tau <= 1.0
        t = tau[small]
        out[small] = np.polyval(num, t) / np.polyval(den, t)
        s = 1.0 / tau[~small]
        out[~small] = s ** (dd - dn) * np.polyval(num_r, s) / np.polyval(den_r, s)
        return out

    if num.size == 0:
        return lambda tau: np.zeros(tau.shape)
    return f


def _q(e):
    return np.concatenate(([1.0], e))


def _h_numerator(e):
    """Numerator of the H integrand over ``q(tau) (tau + 1)``; degree d - 1."""
    d = e.size
    ext = np.concatenate((e, [0.0]))
    j = np.arange(1, d + 1)
    return (j + 1) * ext[1:] + j * e - e[0] * e


def _q_numerator(e):
    """Numerator of the Q integrand over ``q(tau) (tau + 1)``; degree d - 1."""
    ext = np.concatenate((e, [0.0]))
    return ext[1:] + e - e[0] * e


def _wrap(f, post):
    return f if post is None else (lambda tau: post(f(tau)))


def _h_value(e, cfg, post=None):
    den = np.polymul(_q(e), [1.0, 1.0])
    f = _rational(_h_numerator(e), den)
    return integrate_halfline(_wrap(f, post), cfg, what="H half-axis").value


def _q_value(e, cfg, post=None):
    den = np.polymul(_q(e), [1.0, 1.0])
    f = _rational(_q_numerator(e), den)
    return integrate_halfline(_wrap(f, post), cfg, what="Q half-axis").value


def _power_value(e, p, n, cfg, what, post=None):
    """``int tau^p / q^n`` for a trimmed e-point; ``p >= 0`` required."""
    den = np.array([1.0])
    for _ in range(n):
        den = np.polymul(den, _q(e))
    num = np.zeros(p + 1)
    num[0] = 1.0
    return integrate_halfline(_wrap(_rational(num, den), post), cfg, what=what).value


def _dh1_value(e, k, cfg, post=None):
    """First derivative of H in ``e_k`` at a trimmed (possibly complex) e-point."""
    d = e.size
    if k == 1:
        num = np.concatenate(([1.0 - e[0]], -e[1:]))
        f = _rational(num, np.polymul(_q(e), [1.0, 1.0]))
        shift = 1.0 if post is None else 0.0
        return integrate_halfline(_wrap(f, post), cfg, what="dH/de_1").value - shift
    return _power_value(e, d - k, 1, cfg, f"dH({k},)", post)


def _dq1_value(e, k, cfg, post=None):
    """First derivative of Q in ``e_k`` at a trimmed (possibly complex) e-point."""
    d = e.size
    if k == 1:
        q2 = np.polymul(_q(e), _q(e))
        lead = np.zeros(2 * d + 1, dtype=q2.dtype)
        lead[0], lead[1] = 1.0, 1.0
        f = _rational(lead - q2, np.polymul(q2, [1.0, 1.0]))
        return integrate_halfline(_wrap(f, post), cfg, what="dQ/de_1").value
    return _power_value(e, 2 * d - k, 2, cfg, f"dQ({k},)", post)


def entropy_e(e, cfg=DEFAULT_CONFIG):
    """Entropy as a function of the elementary symmetric polynomials.

    >>> round(entropy_e([1.0, 0.25]), 10) == round(np.log(2), 10)
    True
    """
    e = _trim(as_sympoly(e))
    if e.size == 0:
        return 0.0
    return float(_h_value(e, cfg))


def _log1p(w):
    """``log(1 + w)`` accurate for small ``w``, real or complex (principal branch)."""
    if not np.iscomplexobj(w):
        return np.log1p(w)
    x, y = w.real, w.imag
    return 0.5 * np.log1p(2 * x + x * x + y * y) + 1j * np.arctan2(y, 1.0 + x)


def _e1_tail(e1, s):
    """``log1p(e1 s) - e1 log1p(s)``; a power series where the two terms cancel."""
    if e1 == 1:
        return np.zeros(s.shape)
    out = np.log1p(e1 * s) - e1 * np.log1p(s)
    small = (s < 0.1) & (abs(e1) * s < 0.1)
    if small.any():
        t = s[small]
        acc = np.zeros(t.shape)
        for n in range(2, 22):
            acc += (-1) ** (n + 1) * (e1 ** n - e1) * t ** n / n
        out[small] = acc
    return out


def _log_form_integrand(e):
    d = e.size
    e1 = e[0]
    low = np.concatenate(([1.0], e))
    rest = e[:0:-1]  # e_d .. e_2, so that R(s) = s^2 polyval(rest, s) = sum_{k>=2} e_k s^k

    def f(tau):
        out = np.empty(tau.shape, dtype=e.dtype if np.iscomplexobj(e) else float)
        small = tau <= 1.0
        t = tau[small]
        out[small] = np.log(np.polyval(low, t)) + (e1 - d) * np.log(t) - e1 * np.log1p(t)
        s = 1.0 / tau[~small]
        # ln q - d ln tau - e1 ln(1 + s) = log1p(e1 s + R) - e1 log1p(s), split so
        # that nothing cancels as s -> 0
        R = s * s * np.polyval(rest, s) if d > 1 else np.zeros(s.shape)
        out[~small] = _e1_tail(e1.real, s) + _log1p(R / (1.0 + e1 * s))
        return out

    return f


def entropy_e_log_form(e, cfg=DEFAULT_CONFIG):
    """Entropy from the integrated-by-parts (logarithmic) half-axis integrand."""
    e = _trim(as_sympoly(e))
    if e.size == 0:
        return 0.0
    return float(integrate_halfline(_log_form_integrand(e), cfg, what="H log-form").value)


def subentropy_e(e, cfg=DEFAULT_CONFIG):
    """Subentropy as a function of the elementary symmetric polynomials."""
    e = _trim(as_sympoly(e))
    if e.size == 0:
        return 0.0
    return float(_q_value(e, cfg))


def halfaxis_results(e, cfg=DEFAULT_CONFIG):
    """Full quadrature results (value, error estimate, panels) for H, its log form and Q."""
    e = _trim(as_sympoly(e))
    if e.size == 0:
        return {}
    den = np.polymul(_q(e), [1.0, 1.0])
    return {
        "H": integrate_halfline(_rational(_h_numerator(e), den), cfg, what="H half-axis"),
        "H_log_form": integrate_halfline(_log_form_integrand(e), cfg, what="H log-form"),
        "Q": integrate_halfline(_rational(_q_numerator(e), den), cfg, what="Q half-axis"),
    }


def as_multi_index(idx, d):
    """Validate a derivative multi-index against dimension ``d``; returns a tuple."""
    if isinstance(idx, (int, np.integer)):
        idx = (int(idx),)
    idx = tuple(int(k) for k in idx)
    if not idx:
        raise DomainViolation("multi-index must be non-empty")
    if any(k < 1 or k > d for k in idx):
        raise DomainViolation(f"multi-index entries must lie in 1..{d}")
    return idx


def dH(e, idx, cfg=DEFAULT_CONFIG):
    """Mixed partial derivative of H with respect to ``e_{k_1} ... e_{k_m}``.

    Raises :class:`DivergentIntegral` when the integrand is not integrable
    at 0 (e.g. ``d H / d e_d`` at ``e_d = 0``).
    """
    e = as_sympoly(e)
    idx = as_multi_index(idx, e.size)
    m, K = len(idx), sum(idx)
    e = _trim(e)
    d = e.size
    sign = (-1) ** (m - 1)
    if m == 1 and K == 1:
        if d == 0:
            raise DivergentIntegral("dH/de_1 diverges when every e_k is zero", sign=1)
        return float(_dh1_value(e, 1, cfg))
    p = m * d - K
    if p < 0:
        raise DivergentIntegral(
            f"derivative {idx} of H diverges: integrand ~ tau^{p} at 0", sign=sign)
    return float(sign * factorial(m - 1) * _power_value(e, p, m, cfg, f"dH{idx}"))


def dQ(e, idx, cfg=DEFAULT_CONFIG):
    """Mixed partial derivative of Q with respect to ``e_{k_1} ... e_{k_m}``.

    ``d Q / d e_1`` is the regularised integral
    ``int [tau^(2d-1)/q^2 - 1/(tau+1)]``, obtained by differentiating the
    Q integrand under the integral sign.
    """
    e = as_sympoly(e)
    idx = as_multi_index(idx, e.size)
    m, K = len(idx), sum(idx)
    e = _trim(e)
    d = e.size
    sign = (-1) ** (m - 1)
    if m == 1 and K == 1:
        if d == 0:
            raise DivergentIntegral("dQ/de_1 diverges when every e_k is zero", sign=1)
        return float(_dq1_value(e, 1, cfg))
    p = (m + 1) * d - K
    if p < 0:
        raise DivergentIntegral(
            f"derivative {idx} of Q diverges: integrand ~ tau^{p} at 0", sign=sign)
    return float(sign * factorial(m) * _power_value(e, p, m + 1, cfg, f"dQ{idx}"))


def derivative_complex(e, which, k=None, cfg=DEFAULT_CONFIG, imag_step=None):
    """H, Q or a first derivative evaluated at an arbitrary complex e-point.

    No domain checks are made; this is the building block for complex-step
    differentiation (``Im f(e + i h u_l) / h``), which gives derivatives in
    ``e_l`` that are independent of the closed-form higher-order integrands.
    ``which`` is one of ``"H"``, ``"Q"``, ``"dH"``, ``"dQ"``.

    With ``imag_step=h`` only ``Im f / h`` is integrated (as a real
    function), so the quadrature error is controlled on the derivative
    itself rather than on the much larger real part; a float is returned.
    """
    e = _trim(np.asarray(e, dtype=complex))
    post = None if imag_step is None else (lambda v: v.imag / imag_step)
    if which == "H":
        v = _h_value(e, cfg, post)
    elif which == "Q":
        v = _q_value(e, cfg, post)
    elif which == "dH":
        v = _dh1_value(e, k, cfg, post)
    elif which == "dQ":
        v = _dq1_value(e, k, cfg, post)
    else:
        raise ValueError(f"unknown quantity {which!r}")
    return complex(v) if post is None else float(v)


def entropy_e_complex(e, cfg=DEFAULT_CONFIG):
    """Analytic continuation of H to one complex ``e_k`` (``e_1 = 1``).

    Uses the logarithmic integrand with the principal branch; ``Im q > 0``
    on the positive axis keeps ``q`` away from the cut.
    """
    e, _ = as_complex_sympoly(e)
    e = _trim(e)
    return complex(integrate_halfline(_log_form_integrand(e), cfg, what="H complex").value)


def subentropy_e_complex(e, cfg=DEFAULT_CONFIG):
    """Analytic continuation of Q to one complex ``e_k`` (``e_1 = 1``)."""
    e, _ = as_complex_sympoly(e)
    e = _trim(e)
    den = np.polymul(np.concatenate(([1.0], e)), [1.0, 1.0])
    f = _rational(_q_numerator(e), den)
    return complex(integrate_halfline(f, cfg, what="Q complex").value)
