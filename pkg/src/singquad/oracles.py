"""Independent reference computations: adaptive quadrature, exact Gaussian
potentials, brute-force DFT."""

import heapq
from dataclasses import dataclass

import numpy as np
from scipy import special

# Gauss-Kronrod 7-15 on [-1, 1]
_XK = np.array([
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
])
_WK = np.array([
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
])
_WG = np.array([
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
])
_NODES = np.concatenate([-_XK[:-1], _XK[::-1]])
_WKRON = np.concatenate([_WK[:-1], _WK[::-1]])
_WGAUSS = np.zeros(15)
_WGAUSS[[1, 3, 5, 7, 9, 11, 13]] = np.concatenate([_WG[:-1], _WG[::-1]])


@dataclass(frozen=True)
class AdaptiveQuadSpec:
    rel_tol: float = 1e-14
    abs_tol: float = 1e-16
    max_subdivisions: int = 5000

    def __post_init__(self):
        if not (self.rel_tol > 0 and self.abs_tol > 0):
            raise ValueError("tolerances must be positive")


class QuadratureFailure(RuntimeError):
    def __init__(self, msg, value, error):
        super().__init__(msg)
        self.value = value
        self.error = error


def _gk15(f, a, b):
    half = 0.5 * (b - a)
    x = 0.5 * (a + b) + half * _NODES
    fx = np.asarray(f(x))
    k = half * np.dot(_WKRON, fx)
    g = half * np.dot(_WGAUSS, fx)
    return k, abs(k - g)


def adaptive_integrate_1d(f, a, b, spec=None, breakpoints=()):
    """Globally adaptive Gauss-Kronrod 7-15 quadrature of a vectorised ``f``.

    The interval with the largest error estimate is bisected until the total
    estimate meets ``max(abs_tol, rel_tol |I|)``.  Endpoint singularities
    (log, algebraic) are resolved by the resulting dyadic grading toward the
    singular end; interior singular points should be given as breakpoints.
    Returns (value, error estimate).
    """
    spec = spec or AdaptiveQuadSpec()
    pts = sorted({float(a), float(b), *[float(p) for p in breakpoints if a < p < b]})
    heap = []
    total = 0.0
    err = 0.0
    for lo, hi in zip(pts[:-1], pts[1:]):
        v, e = _gk15(f, lo, hi)
        total += v
        err += e
        heapq.heappush(heap, (-e, lo, hi, v))
    n = len(heap)
    done = []
    while heap and err > max(spec.abs_tol, spec.rel_tol * abs(total)):
        if n >= spec.max_subdivisions:
            raise QuadratureFailure(f"max_subdivisions reached (error {err:.3e})", total, err)
        item = heapq.heappop(heap)
        e0, lo, hi, v0 = item
        if hi - lo <= 1024 * np.finfo(float).eps * max(abs(lo), abs(hi)):
            # nodes would collapse onto the endpoints; keep as is
            done.append(item)
            continue
        mid = 0.5 * (lo + hi)
        v1, e1 = _gk15(f, lo, mid)
        v2, e2 = _gk15(f, mid, hi)
        total += v1 + v2 - v0
        err += e1 + e2 + e0
        heapq.heappush(heap, (-e1, lo, mid, v1))
        heapq.heappush(heap, (-e2, mid, hi, v2))
        n += 1
    # re-sum to shed the drift of incremental updates
    pieces = heap + done
    total = sum(item[3] for item in pieces)
    err = sum(-item[0] for item in pieces)
    return total, err


def _e1_plus_log(x):
    """E_1(x) + log(x), accurate as x -> 0 (series -gamma - sum (-x)^j/(j j!))."""
    x = np.asarray(x, dtype=float)
    out = np.empty_like(x)
    small = x < 1.0
    xs = x[small]
    acc = np.zeros_like(xs)
    term = np.ones_like(xs)
    for j in range(1, 40):
        term = term * (-xs) / j
        acc += term / j
    out[small] = -np.euler_gamma - acc
    xb = x[~small]
    out[~small] = special.exp1(xb) + np.log(xb)
    return out


def exact_gaussian_potential(m, n, r, a=0.5):
    """(K0_n * f_G)(r) on R^m for f_G = exp(-(r/a)^2), (m, n) in {2,3} x {m, m+1}."""
    r = np.asarray(r, dtype=float)
    rho = r / a
    x = rho * rho
    if (m, n) == (2, 2):
        # (a^2/4) log(exp(-E1(x)) / x) - (a^2/2) log a, written without the
        # cancellation between -E1(x) and -log(x) at small x
        out = a * a / 4.0 * (-_e1_plus_log(np.atleast_1d(x)).reshape(x.shape)) - a * a / 2.0 * np.log(a)
        return out if out.ndim else float(out)
    if (m, n) == (2, 3):
        out = a * np.sqrt(np.pi) / 4.0 * special.i0e(0.5 * x)
        return out if np.ndim(out) else float(out)
    if (m, n) == (3, 3):
        with np.errstate(invalid="ignore", divide="ignore"):
            out = np.where(rho > 0, special.erf(rho) / np.where(rho > 0, rho, 1.0), 2.0 / np.sqrt(np.pi))
        out = a * a * np.sqrt(np.pi) / 4.0 * out
        return out if np.ndim(out) else float(out)
    if (m, n) == (3, 4):
        def one(xv):
            # exp(-x/2) exp(-x t^2/2) I0(x (1-t^2)/2) = exp(-x t^2) i0e(x (1-t^2)/2)
            g = lambda t: np.exp(-xv * t * t) * special.i0e(0.5 * xv * (1.0 - t * t))
            return adaptive_integrate_1d(g, 0.0, 1.0, AdaptiveQuadSpec(rel_tol=1e-15, abs_tol=1e-18))[0]

        vals = np.array([one(v) for v in np.atleast_1d(x).ravel()]).reshape(np.shape(x))
        out = a / (2.0 * np.sqrt(np.pi)) * vals
        return out if np.ndim(out) else float(out)
    raise ValueError(f"no closed form for (m, n) = ({m}, {n})")


def brute_dft(samples):
    """Direct O(N^2) DFT with the 1/(2^m N_bar) normalisation, centered order."""
    a = np.asarray(samples, dtype=complex)
    out = a
    for ax, size in enumerate(a.shape):
        n = size // 2
        idx = np.arange(-n, n)
        E = np.exp(-1j * np.pi * np.outer(idx, idx) / n)
        out = np.moveaxis(np.tensordot(E, np.moveaxis(out, ax, 0), axes=(1, 0)), 0, ax)
    return out / a.size


def convolution_1d(kernel, f, x, lo=-3.0, hi=3.0, spec=None, extra_breaks=()):
    """int_lo^hi K(|x - y|) f(y) dy with the kernel singularity at y = x as a breakpoint."""
    spec = spec or AdaptiveQuadSpec(rel_tol=1e-15, abs_tol=1e-17, max_subdivisions=20000)

    # integrate in u = y - x so the singular point sits at u = 0 exactly
    def g(u):
        return kernel(np.abs(u)) * f(x + u)

    breaks = (0.0, *[b - x for b in extra_breaks])
    return adaptive_integrate_1d(g, lo - x, hi - x, spec, breakpoints=breaks)[0]


def radial_origin_potential(kernel, f_radial, m, rmax, spec=None, breaks=()):
    """(K * f)(0) = |S^(m-1)| int_0^rmax K(r) f(r) r^(m-1) dr for radial K, f."""
    spec = spec or AdaptiveQuadSpec(rel_tol=1e-15, abs_tol=1e-18, max_subdivisions=20000)
    area = 2.0 * np.pi ** (0.5 * m) / special.gamma(0.5 * m)

    def g(r):
        return kernel(r) * f_radial(r) * r ** (m - 1)

    re = adaptive_integrate_1d(lambda r: np.real(g(r)), 0.0, rmax, spec, breakpoints=breaks)[0]
    im = adaptive_integrate_1d(lambda r: np.imag(g(r)), 0.0, rmax, spec, breakpoints=breaks)[0]
    return area * (re + 1j * im)
