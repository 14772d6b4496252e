"""Special functions for Fourier coefficients of truncated radial singularities.

All public functions accept scalars or arrays and are even in their radial
argument.  Notation:

* ``A_m(t) = Gamma(m/2) J_{(m-2)/2}(t) / (t/2)^{(m-2)/2}``
* ``L_m(rho) = int_0^1 t^(m-1) A_{m+2}(rho t) dt``
* ``M^(mu)_m(rho) = int_0^1 m t^(mu-1) A_m(rho t) dt``
"""

from dataclasses import dataclass
from enum import Enum
from functools import lru_cache, wraps

import numpy as np
from scipy import special

from ._backend import core

# Second and fourteenth positive zeros of J_1.
J1_ZERO_2 = 7.01558666981561875
J1_ZERO_14 = 44.7593189976528217

M1_TAIL_START = 14.0 * np.pi
M1_TAIL_TERMS = 13
M2_TAIL_START = J1_ZERO_14
M2_TAIL_TERMS = 15

CC_NODES = 64
# the M_1 / M_2 power series is used up to here; it cancels mildly beyond
SERIES_LIMIT = 4.0


class RegimeKind(Enum):
    SERIES_SMALL_ARG = "series"
    CLOSED_FORM = "closed"
    RECURRENCE = "recurrence"
    PIECEWISE_BRIDGE = "bridge"
    ASYMPTOTIC_TAIL = "tail"


@dataclass(frozen=True)
class EvalRegime:
    kind: RegimeKind
    crossover: float


def _as_float_array(x):
    arr = np.abs(np.asarray(x, dtype=float))
    return arr


def _finish(x, out):
    return out if np.ndim(x) else float(out)


def _radial(fn):
    # scalar in, float out; arrays keep their shape
    @wraps(fn)
    def wrapper(*args):
        *head, x = args
        arr = np.asarray(x, dtype=float)
        res = fn(*head, np.atleast_1d(arr))
        if arr.ndim == 0:
            return float(np.reshape(res, -1)[0])
        return np.reshape(res, arr.shape)

    return wrapper


def _check_order(m):
    if int(m) != m or m < 1:
        raise ValueError(f"order m must be a positive integer, got {m!r}")
    return int(m)


# ---------------------------------------------------------------------------
# elementary pieces

@_radial
def bessel_j(order, t):
    """Bessel function of the first kind of integer order."""
    if int(order) != order or order < 0:
        raise ValueError(f"order must be a non-negative integer, got {order!r}")
    t = np.asarray(t, dtype=float)
    return _finish(t, special.jv(int(order), t))


@_radial
def sine_integral(rho):
    """Si(rho) = int_0^rho sin(t)/t dt."""
    x = np.asarray(rho, dtype=float)
    return _finish(x, special.sici(x)[0])


@_radial
def j0_integral(rho):
    """int_0^rho J_0(t) dt."""
    x = np.asarray(rho, dtype=float)
    # M^(1)_2 = (2/rho) int_0^rho J0; the regime split handles every rho
    out = 0.5 * np.abs(x) * _m_base(1.0, 2, np.abs(x))
    return _finish(x, np.sign(x) * out)


def _j0(t):
    # AMOS jv keeps full relative accuracy at large t, where Cephes j0/j1 drift
    return special.jv(0, t)


def _j1(t):
    return special.jv(1, t)


def _sinc(t):
    # sin(t)/t; np.sinc rescales by pi and loses digits for large t
    t = np.asarray(t, dtype=float)
    with np.errstate(invalid="ignore", divide="ignore"):
        out = np.sin(t) / t
    return np.where(np.abs(t) < 1e-8, 1.0 - t * t / 6.0, out)


# ---------------------------------------------------------------------------
# A_m

def _a_threshold(m):
    # below this argument the upward recurrence loses digits; sum the series
    return 0.5 * m + 2.0


def _a_closed(m, t):
    if m == 1:
        return np.cos(t)
    if m == 2:
        return _j0(t)
    if m == 3:
        return _sinc(t)
    with np.errstate(invalid="ignore", divide="ignore"):
        out = 2.0 * _j1(t) / t
    return np.where(t == 0.0, 1.0, out)


def _a_recurrence(m, t):
    # A_{j+4} = j (j+2) / t^2 (A_{j+2} - A_j), started from the closed forms
    j = 1 if m % 2 else 2
    lo, hi = _a_closed(j, t), _a_closed(j + 2, t)
    inv_t2 = 1.0 / (t * t)
    while j + 2 < m:
        lo, hi = hi, j * (j + 2) * inv_t2 * (hi - lo)
        j += 2
    return hi


@_radial
def a_fun(m, t):
    """A_m(t); closed forms for m <= 4, series/recurrence beyond."""
    m = _check_order(m)
    x = _as_float_array(t)
    if m <= 4:
        return _finish(x, _a_closed(m, x))
    out = np.empty_like(x)
    small = x < _a_threshold(m)
    out[small] = core.a_series(m, x[small])
    out[~small] = _a_recurrence(m, x[~small])
    return _finish(x, out)


@_radial
def a_fun_series(m, t):
    """A_m(t) summed from its power series (valid, not efficient, for large t)."""
    m = _check_order(m)
    x = _as_float_array(t)
    return _finish(x, core.a_series(m, x))


# ---------------------------------------------------------------------------
# L_m

def _l_threshold(m):
    return 0.5 * m + 2.0


def _l_closed(m, rho):
    with np.errstate(invalid="ignore", divide="ignore"):
        if m == 1:
            return special.sici(rho)[0] / rho
        return 2.0 * (1.0 - _j0(rho)) / (rho * rho)


def _l_recurrence(m, rho):
    # L_{j+2} = (j+2) / rho^2 (j L_j - A_{j+2})
    j = 1 if m % 2 else 2
    val = _l_closed(j, rho)
    inv = 1.0 / (rho * rho)
    while j < m:
        val = (j + 2) * inv * (j * val - a_fun(j + 2, rho))
        j += 2
    return val


@_radial
def l_fun(m, rho):
    """L_m(rho) = int_0^1 t^(m-1) A_{m+2}(rho t) dt."""
    m = _check_order(m)
    x = _as_float_array(rho)
    out = np.empty_like(x)
    small = x < _l_threshold(m)
    out[small] = core.l_series(m, x[small])
    out[~small] = _l_recurrence(m, x[~small])
    return _finish(x, out)


@_radial
def l_fun_series(m, rho):
    m = _check_order(m)
    x = _as_float_array(rho)
    return _finish(x, core.l_series(m, x))


# ---------------------------------------------------------------------------
# M^(mu)_1 and M^(mu)_2 for non-integer mu

def _clenshaw_curtis(n):
    # nodes/weights on [-1, 1], n + 1 points
    theta = np.pi * np.arange(n + 1) / n
    x = np.cos(theta)
    w = np.zeros(n + 1)
    v = np.ones(n - 1)
    if n % 2 == 0:
        w[0] = w[n] = 1.0 / (n * n - 1)
        for k in range(1, n // 2):
            v -= 2.0 * np.cos(2 * k * theta[1:-1]) / (4 * k * k - 1)
        v -= np.cos(n * theta[1:-1]) / (n * n - 1)
    else:
        w[0] = w[n] = 1.0 / (n * n)
        for k in range(1, (n - 1) // 2 + 1):
            v -= 2.0 * np.cos(2 * k * theta[1:-1]) / (4 * k * k - 1)
    w[1:-1] = 2.0 * v / n
    return x, w


_CC_X, _CC_W = _clenshaw_curtis(CC_NODES)


def _oscillator(m):
    # (integrand factor g, boundary pair (g1, g0)) for M_1 (cos) and M_2 (J_0)
    if m == 1:
        return np.cos, np.sin, np.cos
    return _j0, _j1, _j0


def _cc_integral(mu, m, lo, hi):
    """int_lo^hi t^(mu-1) g(t) dt by Clenshaw-Curtis, vectorised over hi."""
    lo = np.asarray(lo, dtype=float)
    hi = np.asarray(hi, dtype=float)
    g = _oscillator(m)[0]
    half = 0.5 * (hi - lo)[..., None]
    mid = 0.5 * (hi + lo)[..., None]
    t = mid + half * _CC_X
    return (half[..., 0]) * np.sum(_CC_W * t ** (mu - 1.0) * g(t), axis=-1)


def _tail_coeffs(mu, m):
    """Coefficients C_l of P^N and the matching coefficients of Q^N."""
    if m == 1:
        n = M1_TAIL_TERMS

        def coeffs(nu):
            c = np.empty(n)
            c[0] = 1.0
            for l in range(1, n):
                c[l] = -c[l - 1] * (2 * l - 1 - nu) * (2 * l - nu)
            return c

        p = coeffs(mu)
        q = (mu - 1.0) * coeffs(mu - 1.0)
    else:
        n = M2_TAIL_TERMS
        p = np.empty(n)
        p[0] = 1.0
        for l in range(1, n):
            p[l] = -p[l - 1] * (2 * l - mu) ** 2
        q = (mu - 2.0 * np.arange(n) - 2.0) * p
    return p, q


def _poly_inv_sq(coeffs, t):
    # sum_l c_l t^(-2l) by Horner in 1/t^2
    u = 1.0 / (t * t)
    acc = np.zeros_like(t) + coeffs[-1]
    for c in coeffs[-2::-1]:
        acc = acc * u + c
    return acc


def _boundary_terms(mu, m, t):
    """t^-1 g1(t) P^N(mu, t) + t^-2 g0(t) Q^N(mu, t)."""
    _, g1, g0 = _oscillator(m)
    p, q = _tail_coeffs(mu, m)
    t = np.asarray(t, dtype=float)
    return g1(t) * _poly_inv_sq(p, t) / t + g0(t) * _poly_inv_sq(q, t) / (t * t)


def _infinite_integral(mu, m):
    """Abel-regularised int_0^inf t^(mu-1) g(t) dt."""
    if m == 1:
        return special.gamma(mu) * np.cos(0.5 * np.pi * mu)
    return 2.0 ** (mu - 1.0) * special.gamma(0.5 * mu) * special.rgamma(1.0 - 0.5 * mu)


@lru_cache(maxsize=None)
def _bridge_points(m):
    if m == 1:
        return tuple(2.0 * np.pi * n for n in range(1, 8))
    zeros = special.jn_zeros(1, 14)
    return tuple(float(z) for z in zeros[1::2])


@dataclass(frozen=True)
class PrecomputedAnchors:
    """Values F(a_n) = a_n^mu M^(mu)_m(a_n) = m int_0^a_n t^(mu-1) g(t) dt.

    Built from the far end: F(a_7) comes from the regularised infinite
    integral plus the asymptotic boundary terms, and the lower anchors by
    subtracting Clenshaw-Curtis integrals over [a_n, a_{n+1}].
    """

    mu: float
    m: int
    anchor_points: tuple
    anchor_integrals: tuple

    @classmethod
    def build(cls, mu, m):
        pts = _bridge_points(m)
        a_top = pts[-1]
        top = m * (_infinite_integral(mu, m) + a_top**mu * float(_boundary_terms(mu, m, a_top)))
        vals = [top]
        for lo, hi in zip(pts[-2::-1], pts[:0:-1]):
            vals.append(vals[-1] - m * float(_cc_integral(mu, m, lo, hi)))
        return cls(mu=mu, m=m, anchor_points=pts, anchor_integrals=tuple(vals[::-1]))

    @property
    def anchor_values(self):
        """(a_n, M(a_n)) pairs."""
        return [(a, f / a**self.mu) for a, f in zip(self.anchor_points, self.anchor_integrals)]

    def bridge(self, rho, n):
        """M(rho) continued from anchor index n (0-based) for rho in [a_n, a_{n+1}]."""
        a = self.anchor_points[n]
        rho = np.asarray(rho, dtype=float)
        inc = self.m * _cc_integral(self.mu, self.m, a, rho)
        return (self.anchor_integrals[n] + inc) / rho**self.mu


@lru_cache(maxsize=64)
def anchors(mu, m):
    return PrecomputedAnchors.build(float(mu), int(m))


def regimes(m):
    """The ordered evaluation regimes of M^(mu)_m for m in {1, 2}."""
    pts = _bridge_points(m)
    tail = M1_TAIL_START if m == 1 else M2_TAIL_START
    return (
        EvalRegime(RegimeKind.SERIES_SMALL_ARG, SERIES_LIMIT),
        EvalRegime(RegimeKind.PIECEWISE_BRIDGE, tail),
        EvalRegime(RegimeKind.ASYMPTOTIC_TAIL, np.inf),
    )


def _tail(mu, m, rho, a):
    # m rho^-mu int_a^rho t^(mu-1) g(t) dt
    rho = np.asarray(rho, dtype=float)
    return m * (_boundary_terms(mu, m, rho) - (a / rho) ** mu * _boundary_terms(mu, m, a))


@_radial
def m1_tail(mu, rho):
    """rho^-mu int_a^rho t^(mu-1) cos t dt (the M_1 tail) by its asymptotic expansion, a = 14 pi."""
    x = np.asarray(rho, dtype=float)
    if np.any(x < M1_TAIL_START):
        raise ValueError(f"m1_tail requires rho >= {M1_TAIL_START}")
    return _finish(x, _tail(mu, 1, x, M1_TAIL_START))


@_radial
def m2_tail(mu, rho):
    """2 rho^-mu int_a^rho t^(mu-1) J0(t) dt (the M_2 tail) by its asymptotic expansion, a = j_{1,14}."""
    x = np.asarray(rho, dtype=float)
    if np.any(x < M2_TAIL_START):
        raise ValueError(f"m2_tail requires rho >= {M2_TAIL_START}")
    return _finish(x, _tail(mu, 2, x, M2_TAIL_START))


def _m_base(mu, m, x):
    """M^(mu)_m for m in {1, 2} and any mu in (0, 2) through the regime split."""
    anc = anchors(mu, m)
    pts = anc.anchor_points
    out = np.empty_like(x)
    small = x <= SERIES_LIMIT
    out[small] = core.m_series(mu, m, x[small])
    # between the series limit and a_1, integrate back from the first anchor
    sel = (x > SERIES_LIMIT) & (x <= pts[0])
    if sel.any():
        xs = x[sel]
        out[sel] = (anc.anchor_integrals[0] - m * _cc_integral(mu, m, xs, pts[0])) / xs**mu
    for n in range(len(pts) - 1):
        sel = (x > pts[n]) & (x <= pts[n + 1])
        if sel.any():
            out[sel] = anc.bridge(x[sel], n)
    big = x > pts[-1]
    if big.any():
        a = pts[-1]
        m_a = anc.anchor_integrals[-1] / a**mu
        out[big] = (a / x[big]) ** mu * m_a + _tail(mu, m, x[big], a)
    return out


# ---------------------------------------------------------------------------
# M^(mu)_m

def _m_threshold(m):
    return 0.5 * m + 2.0


def _m_mu2(m, x):
    if m == 1:
        with np.errstate(invalid="ignore", divide="ignore"):
            out = _sinc(x) + (np.cos(x) - 1.0) / (x * x)
        small = x < 1e-3
        out[small] = core.m_series(2.0, 1, x[small])
        return out
    if m == 2:
        return np.asarray(a_fun(4, x), dtype=float)
    out = np.empty_like(x)
    small = x < _m_threshold(m)
    out[small] = core.m_series(2.0, m, x[small])
    xb = x[~small]
    out[~small] = m * (m - 2) / (xb * xb) * (1.0 - np.asarray(a_fun(m - 2, xb)))
    return out


def _m_upward(mu, j, base, m, x):
    # M_{j+2} = (j+2)/(j-mu) (M_j - A_{j+2})
    val = base
    while j < m:
        val = (j + 2) / (j - mu) * (val - np.asarray(a_fun(j + 2, x)))
        j += 2
    return val


def _m_mu1(m, x):
    with np.errstate(invalid="ignore", divide="ignore"):
        if m == 1:
            return _sinc(x)
        if m == 2:
            return _m_base(1.0, 2, x)
        if m == 3:
            out = 3.0 * special.sici(x)[0] / x
            return np.where(x == 0.0, 3.0, out)
    out = np.empty_like(x)
    small = x < _m_threshold(m)
    out[small] = core.m_series(1.0, m, x[small])
    xb = x[~small]
    j = 3 if m % 2 else 2
    out[~small] = _m_upward(1.0, j, _m_mu1(j, xb), m, xb)
    return out


@_radial
def m_fun(mu, m, rho):
    """M^(mu)_m(rho) = int_0^1 m t^(mu-1) A_m(rho t) dt for mu in (0, 2]."""
    m = _check_order(m)
    if not 0.0 < mu <= 2.0:
        raise ValueError(f"mu must lie in (0, 2], got {mu!r}")
    x = _as_float_array(rho)
    if mu == 2.0:
        return _finish(x, _m_mu2(m, x))
    if mu == 1.0:
        return _finish(x, _m_mu1(m, x))
    if m <= 2:
        return _finish(x, _m_base(mu, m, x))
    out = np.empty_like(x)
    small = x < _m_threshold(m)
    out[small] = core.m_series(mu, m, x[small])
    xb = x[~small]
    j = 1 if m % 2 else 2
    out[~small] = _m_upward(mu, j, _m_base(mu, j, xb), m, xb)
    return _finish(x, out)


@_radial
def m_fun_series(mu, m, rho):
    m = _check_order(m)
    x = _as_float_array(rho)
    return _finish(x, core.m_series(mu, m, x))


@_radial
def gen_cosine_integral(mu, rho):
    """Ci(mu, rho) = int_0^rho t^(mu-1) cos t dt for mu in (0, 2)."""
    if mu <= 0.0:
        raise ValueError(f"mu must be positive, got {mu!r}")
    x = _as_float_array(rho)
    if mu == 1.0:
        return _finish(x, np.sin(x))
    return _finish(x, x**mu * _m_base(mu, 1, x))
