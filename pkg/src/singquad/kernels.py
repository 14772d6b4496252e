"""Kernel factorisations K = alpha r^-nu + beta log r + K_tilde.

Static kernels K0_n (Laplace fundamental solutions in n dimensions), Helmholtz
kernels Kk_n = (i/4) (k / (2 pi r))^((n-2)/2) H1_((n-2)/2)(k r) for odd and
even n, and the single/double layer kernels of the 2-D combined-field
boundary integral equation on the parameter circle.
"""

from dataclasses import dataclass
from math import ceil, factorial, gamma
from typing import Callable, Optional

import numpy as np
from scipy import special

from . import specfun

EULER_GAMMA = float(np.euler_gamma)


@dataclass(frozen=True)
class KernelFactorization:
    n: int
    k: complex
    alpha: Optional[Callable]
    alpha0: Optional[complex]
    beta: Optional[Callable]
    beta0: Optional[complex]
    ktilde0: complex
    kernel: Callable
    power_exponent: Optional[float]
    radial: bool = True
    ktilde: Optional[Callable] = None

    def singular_part(self, r):
        """alpha r^-nu + beta log r at r > 0 (radial factorisations only)."""
        r = np.asarray(r, dtype=float)
        out = np.zeros(r.shape, dtype=complex)
        if self.power_exponent is not None:
            out += self.alpha(r) * r ** (-self.power_exponent)
        if self.beta is not None:
            out += self.beta(r) * np.log(r)
        return out


def _const(c):
    c = complex(c)

    def f(r):
        return np.full(np.shape(r), c)

    return f


def a_complex(m, z):
    """A_m at complex argument; m may be a negative odd integer.

    Negative odd orders follow the downward relation
    A_m = A_(m+2) - z^2 A_(m+4) / (m (m+2)).
    """
    z = np.asarray(z)
    if np.isrealobj(z) and m >= 1:
        return np.asarray(specfun.a_fun(m, np.abs(z)), dtype=float)
    z = z.astype(complex)
    if m == 1:
        return np.cos(z)
    if m == 3:
        with np.errstate(invalid="ignore", divide="ignore"):
            out = np.sin(z) / z
        return np.where(np.abs(z) < 1e-8, 1.0 - z * z / 6.0, out)
    if m <= -1:
        if m % 2 == 0:
            raise ValueError("negative orders must be odd")
        hi, lo = a_complex(m + 4, z), a_complex(m + 2, z)
        return lo - z * z * hi / (m * (m + 2))
    nu = 0.5 * (m - 2)
    with np.errstate(invalid="ignore", divide="ignore"):
        out = gamma(0.5 * m) * special.jv(nu, z) / (0.5 * z) ** nu
    small = np.abs(z) < 1e-6
    if np.any(small):
        zs = z[small]
        out[small] = 1.0 - zs * zs / (2.0 * m)
    return out


def _radial_kernel(fn):
    def kernel(r):
        r = np.asarray(r, dtype=float)
        return np.asarray(fn(r), dtype=complex)

    return kernel


def static_kernel(n):
    """Factorisation of K0_n: -r/2 (n = 1), -log r / (2 pi) (n = 2), c_n r^-(n-2)."""
    n = int(n)
    if n < 1:
        raise ValueError("n must be >= 1")
    if n == 1:
        return KernelFactorization(
            n=1, k=0.0, alpha=_const(-0.5), alpha0=-0.5, beta=None, beta0=None,
            ktilde0=0.0, kernel=_radial_kernel(lambda r: -0.5 * r), power_exponent=-1.0,
        )
    if n == 2:
        c = -1.0 / (2.0 * np.pi)
        return KernelFactorization(
            n=2, k=0.0, alpha=None, alpha0=None, beta=_const(c), beta0=c,
            ktilde0=0.0, kernel=_radial_kernel(lambda r: c * np.log(r)), power_exponent=None,
        )
    c = gamma(0.5 * n - 1.0) / (4.0 * np.sqrt(np.pi) ** n)
    return KernelFactorization(
        n=n, k=0.0, alpha=_const(c), alpha0=c, beta=None, beta0=None, ktilde0=0.0,
        kernel=_radial_kernel(lambda r: c * r ** (2.0 - n)), power_exponent=float(n - 2),
    )


def helmholtz_kernel(n, k):
    """Full kernel (i/4) (k / (2 pi r))^nu H1_nu(k r), nu = (n - 2)/2, for r > 0."""
    nu = 0.5 * (n - 2)
    k = complex(k)

    def kernel(r):
        r = np.asarray(r, dtype=float)
        z = k * r
        return 0.25j * (k / (2.0 * np.pi * r)) ** nu * special.hankel1(nu, z)

    return kernel


def _check_k(k):
    k = complex(k)
    if k.imag < 0:
        raise ValueError("Im k must be non-negative")
    return k


def odd_alpha0(n):
    """alpha^k_n(0) = (-1)^ceil(n/2) / (4 Gamma(2 - n/2) sqrt(pi)^(n-2))."""
    return (-1) ** int(ceil(n / 2)) / (4.0 * gamma(2.0 - 0.5 * n) * np.sqrt(np.pi) ** (n - 2))


def odd_ktilde0(n, k):
    return 1j / (4.0 * gamma(0.5 * n)) * (complex(k) / (2.0 * np.sqrt(np.pi))) ** (n - 2)


def helmholtz_odd(n, k):
    """Odd n: Kk_n = alpha0 A_(4-n)(k r) r^-(n-2) + K_tilde0 A_n(k r)."""
    n = int(n)
    if n < 1 or n % 2 == 0:
        raise ValueError("n must be a positive odd integer")
    if complex(k) == 0:
        return static_kernel(n)
    k = _check_k(k)
    a0 = odd_alpha0(n)
    kt0 = odd_ktilde0(n, k)

    def alpha(r):
        return a0 * a_complex(4 - n, k * np.asarray(r, dtype=float))

    def ktilde(r):
        return kt0 * a_complex(n, k * np.asarray(r, dtype=float))

    return KernelFactorization(
        n=n, k=k, alpha=alpha, alpha0=a0, beta=None, beta0=None, ktilde0=kt0,
        kernel=helmholtz_kernel(n, k), power_exponent=float(n - 2), ktilde=ktilde,
    )


def even_p(nu, z):
    """P_nu(z) = sum_{j < nu} (nu - j - 1)! / j! (z/2)^(2j)."""
    z = np.asarray(z)
    out = np.zeros(z.shape, dtype=complex)
    for j in range(nu):
        out += factorial(nu - j - 1) / factorial(j) * (0.5 * z) ** (2 * j)
    return out


def even_beta0(n, k):
    return -1.0 / (2.0 * np.pi * gamma(0.5 * n)) * (complex(k) / (2.0 * np.sqrt(np.pi))) ** (n - 2)


def even_ktilde0(n, k):
    """K_tilde^k_n(0) for even n from the j = 0 terms of J_nu and Y_nu."""
    nu = (n - 2) // 2
    k = complex(k)
    psi = special.digamma(1.0) + special.digamma(nu + 1.0)
    scale = (k / (2.0 * np.sqrt(np.pi))) ** (n - 2) / (4.0 * gamma(0.5 * n))
    return scale * (1j - 2.0 / np.pi * np.log(0.5 * k) + psi / np.pi)


def helmholtz_even(n, k):
    """Even n: Kk_n = P_nu(k r)/(4 pi^(n/2)) r^-(n-2) + beta0 A_n(k r) log r + K_tilde."""
    n = int(n)
    if n < 2 or n % 2:
        raise ValueError("n must be a positive even integer")
    if complex(k) == 0:
        return static_kernel(n)
    k = _check_k(k)
    nu = (n - 2) // 2
    b0 = even_beta0(n, k)
    kernel = helmholtz_kernel(n, k)

    def beta(r):
        return b0 * a_complex(n, k * np.asarray(r, dtype=float))

    if nu >= 1:
        c = 1.0 / (4.0 * np.sqrt(np.pi) ** n)

        def alpha(r):
            return c * even_p(nu, k * np.asarray(r, dtype=float))

        alpha0 = c * factorial(nu - 1)
        power = float(n - 2)
    else:
        alpha, alpha0, power = None, None, None

    fact = KernelFactorization(
        n=n, k=k, alpha=alpha, alpha0=alpha0, beta=beta, beta0=b0,
        ktilde0=even_ktilde0(n, k), kernel=kernel, power_exponent=power,
    )
    return fact


def helmholtz(n, k):
    return helmholtz_odd(n, k) if n % 2 else helmholtz_even(n, k)


# ---------------------------------------------------------------------------
# boundary integral kernels on the parameter circle

def _chord(curve, s, tau):
    t = s + np.asarray(tau, dtype=float).reshape(-1)
    d = curve.point(t) - curve.point(np.array([s]))
    r = np.linalg.norm(d, axis=-1)
    return t, d, r


def _param_offset(tau):
    return np.asarray(tau, dtype=float)[..., 0] if np.ndim(tau) > 1 else np.asarray(tau, dtype=float)


def bie_single_layer(curve, k, s):
    """S(s, t) = (i/4) H1_0(k r) = alpha_s log|t - s| + S_tilde, t = s + tau."""
    k = float(k)
    speed = float(curve.speed(np.array([s]))[0])

    def beta(tau):
        tau = _param_offset(tau)
        _, _, r = _chord(curve, s, tau)
        return (-special.j0(k * r) / (2.0 * np.pi)).reshape(tau.shape)

    def kernel(tau):
        tau = _param_offset(tau)
        _, _, r = _chord(curve, s, tau)
        return (0.25j * special.hankel1(0, k * r)).reshape(tau.shape)

    st0 = 0.25j - EULER_GAMMA / (2.0 * np.pi) - np.log(0.5 * k * speed) / (2.0 * np.pi)
    return KernelFactorization(
        n=2, k=k, alpha=None, alpha0=None, beta=beta, beta0=-1.0 / (2.0 * np.pi),
        ktilde0=st0, kernel=kernel, power_exponent=None, radial=False,
    )


def double_layer_diagonal(curve, s):
    """lim_{t->s} of D - alpha_d log|t - s|: n . y'' / (4 pi |y'|^2)."""
    s = np.array([s])
    nrm = curve.normal(s)[0]
    acc = curve.d2(s)[0]
    return float(nrm @ acc) / (4.0 * np.pi * float(curve.speed(s)[0]) ** 2)


def bie_double_layer(curve, k, s):
    """D(s, t) = n(t) . grad_y (i/4) H1_0(k |y(t) - y(s)|) = alpha_d log|t - s| + D_tilde."""
    k = float(k)

    def geometry(tau):
        tau = _param_offset(tau)
        t, d, r = _chord(curve, s, tau)
        proj = np.einsum("ij,ij->i", curve.normal(t), d)
        return tau, r, proj

    def beta(tau):
        tau, r, proj = geometry(tau)
        with np.errstate(invalid="ignore", divide="ignore"):
            out = k * k / (2.0 * np.pi) * (special.j1(k * r) / (k * r)) * proj
        out = np.where(r == 0.0, 0.0, out)
        return out.reshape(tau.shape)

    def kernel(tau):
        tau, r, proj = geometry(tau)
        kr = k * r
        with np.errstate(invalid="ignore", divide="ignore"):
            val = 0.25 * kr * (special.y1(kr) - 1j * special.j1(kr)) * proj / (r * r)
        return np.where(r == 0.0, 0.0, val).reshape(tau.shape)

    return KernelFactorization(
        n=2, k=k, alpha=None, alpha0=None, beta=beta, beta0=0.0,
        ktilde0=double_layer_diagonal(curve, s), kernel=kernel, power_exponent=None, radial=False,
    )
