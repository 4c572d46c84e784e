"""Bernstein-function structure of H and Q in e-coordinates.

With ``e_1 = 1`` fixed, H and Q are Bernstein functions of
``(e_2, ..., e_d)`` and admit a Levy-Khintchine representation whose
measure lives on a 2D surface parameterised by ``tau = t_{d-1}/t_d`` and
``t_d`` (with ``t_{d-i} = tau^i t_d``):

    H(1, e_2, ..., e_d) = int dtau int dt_d  w_H(tau, t_d) (1 - exp(-sum_i e_i t_i))

with ``w_H = exp(-t_d (tau^d + tau^(d-1))) / t_d`` and
``w_Q = tau^d exp(-t_d (tau^d + tau^(d-1)))``.  Integrating ``t_d`` out
(Frullani) recovers the logarithmic half-axis integrand, which is how the
weights were derived.  This module evaluates the densities, reconstructs H
and Q from them, and runs finite-difference complete-monotonicity and Pick
(upper half-plane) checks.
"""

from dataclasses import dataclass
from math import comb, erfc, exp, pi, sqrt

import numpy as np

from .errors import DomainViolation
from .halfaxis import dH, dQ, entropy_e, entropy_e_complex, subentropy_e, subentropy_e_complex
from .identities import make_report
from .quadrature import QuadratureConfig, integrate_halfline
from .sympoly import as_sympoly

LK_CONFIG = QuadratureConfig(rel_tol=1e-8, abs_tol=1e-10, max_subdivisions=400)
_EPS = np.finfo(float).eps

# inner t_d integral: composite Gauss-Legendre in v = ln t_d
_GL_X, _GL_W = np.polynomial.legendre.leggauss(10)
_V_BELOW = 36.0   # exp(-36) ~ 2e-16: contributions below this are dropped
_V_ABOVE = 4.0    # exp(-e^4) ~ 2e-24
_LAG_X, _LAG_W = np.polynomial.laguerre.laggauss(80)


@dataclass(frozen=True)
class LKSurfacePoint:
    """A point of the 2D support: ``r = t_{d-1}/t_d`` and ``t_d``."""

    r: float
    t_d: float

    def __post_init__(self):
        if not (self.r > 0 and self.t_d > 0):
            raise DomainViolation("surface coordinates must be positive")

    def coordinates(self, d):
        """``(t_2, ..., t_d)`` with ``t_{d-i} = r^i t_d``."""
        i = np.arange(d - 2, -1, -1)
        return self.r ** i * self.t_d


def _erfcx(x):
    """Scaled complementary error function ``exp(x^2) erfc(x)`` for ``x >= 0``."""
    if x < 26.0:
        return exp(x * x) * erfc(x)
    # asymptotic series; at x >= 26 four terms reach double precision
    y = 1.0 / (2 * x * x)
    return (1 - y + 3 * y ** 2 - 15 * y ** 3 + 105 * y ** 4) / (x * sqrt(pi))


def phi2(t):
    """``int_0^inf exp(-(tau^2 + tau) t) dtau = sqrt(pi/t)/2 * erfcx(sqrt(t)/2)``."""
    return 0.5 * sqrt(pi / t) * _erfcx(0.5 * sqrt(t))


def lk_density_H(p, d):
    """Levy density of H at a surface point (2D weight over ``(r, t_d)``).

    For ``d = 2`` the surface collapses to ``t_2`` and the 1D density
    ``phi2(t_2) / t_2`` is returned.
    """
    if d < 2:
        raise DomainViolation("densities need d >= 2")
    if d == 2:
        return phi2(p.t_d) / p.t_d
    return exp(-p.t_d * (p.r ** d + p.r ** (d - 1))) / p.t_d


def lk_density_Q(p, d):
    """Levy density of Q; the 2D weight is ``r^d`` times the exponential factor.

    For ``d = 2`` this is ``int tau^2 exp(-(tau^2 + tau) t_2) dtau``.
    """
    if d < 2:
        raise DomainViolation("densities need d >= 2")
    if d == 2:
        return _tau2_moment(p.t_d)
    return p.r ** d * exp(-p.t_d * (p.r ** d + p.r ** (d - 1)))


def _tau2_moment(t):
    """``int tau^2 exp(-(tau^2 + tau) t) dtau`` from ``phi2`` by integration by parts.

    ``int (2 tau + 1) E = 1/t`` and ``int (1 - t tau (2 tau + 1)) E = 0``
    with ``E = exp(-(tau^2 + tau) t)``.  The recursion cancels for large t,
    where Gauss-Laguerre on ``t^-3 int s^2 e^-s exp(-s^2/t) ds`` is used.
    """
    if t > 30.0:
        return float(np.sum(_LAG_W * _LAG_X ** 2 * np.exp(-_LAG_X ** 2 / t))) / t ** 3
    m0 = phi2(t)
    m1 = (1.0 / t - m0) / 2.0
    return (m0 / t - m1) / 2.0


def density_grid(d, n, lo=1e-3, hi=1e3):
    """Rows ``(r, t_d, weight_H, weight_Q)`` on an ``n x n`` log-spaced grid."""
    axis = np.geomspace(lo, hi, n)
    rows = []
    for r in axis:
        for t in axis:
            p = LKSurfacePoint(float(r), float(t))
            rows.append((float(r), float(t), lk_density_H(p, d), lk_density_Q(p, d)))
    return rows


def _inner(a, b, with_t):
    """``int_0^inf t^s exp(-b t) (1 - exp(-a t)) dv`` over ``v = ln t``, s = 0 or 1.

    Composite Gauss-Legendre on a v-range that starts where ``max(a, b) t``
    is negligible and ends where ``exp(-b t)`` has underflowed.  Vectorised
    over the arrays ``a`` and ``b``.
    """
    hi = _V_ABOVE - np.log(b)
    lo = -np.log(np.maximum(a, b)) - _V_BELOW
    span = hi - lo
    n_pan = int(np.ceil(span.max() / 0.75))
    width = span / n_pan
    centers = lo[:, None] + width[:, None] * (np.arange(n_pan)[None, :] + 0.5)
    v = centers[:, :, None] + 0.5 * width[:, None, None] * _GL_X
    t = np.exp(v)
    g = np.exp(-b[:, None, None] * t) * -np.expm1(-a[:, None, None] * t)
    if with_t:
        g = g * t
    return 0.5 * width * np.einsum("ijk,k->i", g, _GL_W)


def _reconstruct(e, which, cfg):
    e = as_sympoly(e)
    if abs(e[0] - 1.0) > 1e-12:
        raise DomainViolation("the Levy-Khintchine reconstruction needs e_1 = 1")
    d = e.size
    if not np.any(e[1:] > 0):
        return 0.0
    tail = e[1:]  # e_2 .. e_d

    def f(tau):
        out = np.zeros(tau.shape)
        # exponent sum_i e_i t_i = a t_d and weight exponent b t_d on the surface
        a = np.polyval(tail, tau)
        b = tau ** (d - 1) * (tau + 1.0)
        ok = (a > 0) & (b > 0)
        if ok.any():
            if which == "H":
                # weight exp(-b t)/t: dt/t = dv
                out[ok] = _inner(a[ok], b[ok], with_t=False)
            else:
                # weight tau^d exp(-b t): dt = t dv
                out[ok] = tau[ok] ** d * _inner(a[ok], b[ok], with_t=True)
        return out

    return float(integrate_halfline(f, cfg, what=f"LK reconstruction of {which}").value)


def lk_reconstruct_H(e, cfg=LK_CONFIG):
    """H rebuilt from its Levy density (requires ``e_1 = 1``)."""
    return _reconstruct(e, "H", cfg)


def lk_reconstruct_Q(e, cfg=LK_CONFIG):
    """Q rebuilt from its Levy density (requires ``e_1 = 1``)."""
    return _reconstruct(e, "Q", cfg)


def lk_affine_constants(d, k, S=1e14, cfg=LK_CONFIG):
    """Affine part ``a + b s`` of the Levy-Khintchine representation along ``e_k``.

    ``a`` is the value at ``e = (1, 0, ..., 0)`` (half-axis and reconstructed);
    ``b`` is the slope at infinity, bounded above by the derivative at a large
    ``e_k = S`` because a Bernstein function is concave.  Returns a dict of
    the four numbers (all should vanish).
    """
    base = np.zeros(d)
    base[0] = 1.0
    far = base.copy()
    far[k - 1] = S
    return {
        "a_H": abs(entropy_e(base)) + abs(lk_reconstruct_H(base, cfg)),
        "a_Q": abs(subentropy_e(base)) + abs(lk_reconstruct_Q(base, cfg)),
        "b_H": dH(far, (k,)),
        "b_Q": dQ(far, (k,)),
    }


CM_CONFIG = QuadratureConfig(rel_tol=1e-13, abs_tol=1e-15, max_subdivisions=400)
# differences below this multiple of eps * scale * 2^j cannot be resolved
NOISE_FACTOR = 1e3


def check_complete_monotonicity(f, point, k, orders=4, h=None, name="complete_monotonicity",
                                label=None):
    """Finite-difference sign test of complete monotonicity of ``f`` along ``e_k``.

    The j-th forward difference with step ``h`` must satisfy
    ``(-1)^j Delta^j f >= 0`` for j = 0 .. orders.  Differences smaller than
    the rounding floor ``1e3 eps 2^j max|f|`` are counted as inconclusive
    rather than failed.
    """
    if orders > 6:
        raise DomainViolation("orders above 6 are not resolvable in double precision")
    e = np.array(as_sympoly(point), dtype=float)
    if h is None:
        h = 1e-2 * (1.0 + e[k - 1])
    vals = []
    for i in range(orders + 1):
        z = e.copy()
        z[k - 1] += i * h
        vals.append(float(f(z)))
    vals = np.array(vals)
    scale = max(float(np.max(np.abs(vals))), np.finfo(float).tiny)
    residuals, witnesses, inconclusive = [], [], 0
    diff = vals.copy()
    for j in range(orders + 1):
        delta = diff[0]
        floor = NOISE_FACTOR * _EPS * 2 ** j * scale
        if abs(delta) <= floor:
            inconclusive += 1
        else:
            margin = (-1) ** j * delta / scale
            residuals.append(-margin)
            witnesses.append({"function": label, "e": [float(v) for v in e], "k": k, "h": h,
                              "order": j, "difference": float(delta)})
        diff = diff[1:] - diff[:-1]
    return make_report(name, residuals, witnesses, tol=0.0, inconclusive=inconclusive)


def cm_evaluators(k, cfg=CM_CONFIG):
    """The functions whose complete monotonicity along ``e_k`` is tested."""
    return {
        "dH": lambda e: dH(e, (k,), cfg),
        "dQ": lambda e: dQ(e, (k,), cfg),
        "exp(-H)": lambda e: np.exp(-entropy_e(e, cfg)),
        "exp(-Q)": lambda e: np.exp(-subentropy_e(e, cfg)),
        "exp(-H/2)": lambda e: np.exp(-entropy_e(e, cfg) / 2),
        "exp(-H/3)": lambda e: np.exp(-entropy_e(e, cfg) / 3),
    }


def uniform_base(d):
    """e-point of the uniform distribution on d outcomes (``e_1 = 1``)."""
    return np.array([comb(d, j) / d ** j for j in range(1, d + 1)])


def pick_grid(n, rng):
    """``n`` points of the upper half-plane: Re in [-2, 2], Im log-uniform in [1e-3, 10]."""
    re = rng.uniform(-2.0, 2.0, n)
    im = 10.0 ** rng.uniform(-3.0, 1.0, n)
    return re + 1j * im


def pick_sweep(dim, k, grid, base=None, cfg=None):
    """``Im H > 0`` and ``Im Q > 0`` when ``e_k`` ranges over ``grid``.

    The other coordinates are taken from ``base`` (default: the uniform
    point), with ``e_1 = 1``.  The residual is minus the smallest imaginary
    part found, so the report passes only if every value is strictly positive.
    """
    if k < 2 or k > dim:
        raise DomainViolation("the Pick check varies one e_k with 2 <= k <= d")
    base = uniform_base(dim) if base is None else np.asarray(base, dtype=float)
    kw = {} if cfg is None else {"cfg": cfg}
    residuals, witnesses = [], []
    for z in grid:
        z = complex(z)
        if not z.imag > 0:
            raise DomainViolation("grid points must lie in the open upper half-plane")
        e = base.astype(complex)
        e[k - 1] = z
        H = entropy_e_complex(e, **kw)
        Q = subentropy_e_complex(e, **kw)
        residuals.append(-min(H.imag, Q.imag))
        witnesses.append({"e_k": [z.real, z.imag], "k": k, "d": dim,
                          "H": [H.real, H.imag], "Q": [Q.real, Q.imag]})
    return make_report("pick", residuals, witnesses, tol=0.0)
