"""Volume scattering in an inhomogeneous medium.

The total field solves u - k^2 K * ((n - 1) u) = u_inc with K the 2-D
Helmholtz kernel.  The convolution uses the corrected FFT rule on the square
[-L, L]^2 (chi = 2L, so the zero-padded periodic box is [-2L, 2L)^2).
GMRES runs only on the grid points where n - 1 is nonzero; the field
elsewhere follows from one extra convolution.
"""

from dataclasses import dataclass
from typing import Callable

import numpy as np

from ..convolve import Convolver, PotentialField, boundary_max, window_shape
from ..kernels import helmholtz
from ..quadrature import build_weights, kernel_spectrum
from ..singularity import GridSpec
from .gmres import GmresConfig, gmres

BUMP_CENTERS = ((1.0, 0.0), (-1.0, 3.0), (-1.0, -3.0))


@dataclass(frozen=True)
class Medium:
    index: Callable
    k: float
    L: float

    def __post_init__(self):
        if not self.k > 0 or not self.L > 0:
            raise ValueError("k and L must be positive")

    def contrast(self, x, y):
        return np.asarray(self.index(x, y), dtype=float) - 1.0


def bump(x, y, cx=0.0, cy=0.0):
    """exp(2 (1 - 1/(1 - d^2))) inside the unit disk about (cx, cy), 0 outside."""
    d2 = (np.asarray(x) - cx) ** 2 + (np.asarray(y) - cy) ** 2
    out = np.zeros(np.broadcast(x, y).shape)
    inside = d2 < 1.0
    out[inside] = np.exp(2.0 * (1.0 - 1.0 / (1.0 - d2[inside])))
    return out


def three_bump_index(x, y, depth=0.9, centers=BUMP_CENTERS):
    return 1.0 - depth * sum(bump(x, y, cx, cy) for cx, cy in centers)


def three_bump_medium(k=5 * np.pi, L=6.0):
    return Medium(index=three_bump_index, k=float(k), L=float(L))


def single_bump_medium(k=np.pi, L=3.0, depth=0.5):
    return Medium(index=lambda x, y: 1.0 - depth * bump(x, y), k=float(k), L=float(L))


def window_axes(L, N):
    return -L + 2.0 * L * np.arange(N + 1) / N


def plane_wave(k, direction, x, y):
    d = np.asarray(direction, dtype=float)
    d = d / np.linalg.norm(d)
    return np.exp(1j * k * (d[0] * x + d[1] * y))


def solve_lippmann_schwinger(medium, N, direction=(1.0, 0.0), cfg=None, refine=1):
    """Total field on the (N+1)^2 window grid of [-L, L]^2.

    Returns (PotentialField, GMRES residual history).
    """
    cfg = cfg or GmresConfig(restart=50)
    N = int(N)
    grid = GridSpec.create(2, N, 2.0 * medium.L)
    ax = window_axes(medium.L, N)
    X, Y = np.meshgrid(ax, ax, indexing="ij")
    q = medium.contrast(X, Y)
    if boundary_max(q) > 0:
        raise ValueError("n - 1 must vanish on the boundary of the domain")
    uinc = plane_wave(medium.k, direction, X, Y)
    support = q != 0
    k2 = medium.k**2
    if not support.any():
        return PotentialField(grid=grid, samples=uinc), [0.0]

    conv = Convolver(kernel_spectrum(build_weights(grid, helmholtz(2, medium.k), refine=refine)))
    qs = q[support]
    shape = window_shape(grid)

    def scatter(u_support):
        full = np.zeros(shape, dtype=complex)
        full[support] = qs * u_support
        return k2 * conv(full)

    def apply(u_support):
        return u_support - scatter(u_support)[support]

    u_s, hist = gmres(apply, uinc[support], cfg)
    u = uinc + scatter(u_s)
    return PotentialField(grid=grid, samples=u), hist
