"""FFT convolution with a corrected kernel spectrum.

The data window is the sub-grid with indices 0..N_j of U = [-1, 1]^m (the
block [0, 1]^m); zero padding to all of U makes the circular convolution on
the 2N_j-periodic grid equal to the aperiodic one for every target inside the
window.
"""

import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy import fft as sfft

from ._backend import core
from .quadrature import combined_weights, effective_weights, fft_workers, kernel_spectrum, to_fft_order
from .singularity import GridSpec

SUPPORT_TOL = 1e-12


def window_shape(grid):
    return tuple(n + 1 for n in grid.N)


@dataclass(frozen=True)
class SourceField:
    grid: GridSpec
    samples: np.ndarray = field(repr=False)
    support_tol: float = SUPPORT_TOL

    def __post_init__(self):
        s = np.asarray(self.samples)
        if s.shape != window_shape(self.grid):
            raise ValueError(f"source shape {s.shape} != window {window_shape(self.grid)}")
        object.__setattr__(self, "samples", s)
        edge = boundary_max(s)
        scale = max(np.max(np.abs(s)), 1.0) if s.size else 1.0
        if edge > self.support_tol * scale:
            warnings.warn(f"source is not compactly supported in the window (edge {edge:.2e})", stacklevel=3)

    @property
    def supported(self):
        s = self.samples
        return boundary_max(s) <= self.support_tol * max(np.max(np.abs(s)), 1.0)


def boundary_max(a):
    a = np.abs(np.asarray(a))
    if a.size == 0:
        return 0.0
    out = 0.0
    for ax in range(a.ndim):
        out = max(out, np.take(a, 0, axis=ax).max(), np.take(a, -1, axis=ax).max())
    return float(out)


@dataclass(frozen=True)
class PotentialField:
    grid: GridSpec
    samples: np.ndarray = field(repr=False)


def embed(source):
    """Zero-pad window samples to the full grid, FFT storage order.

    Window index i along an axis is grid index l = i, which sits at FFT
    position i (l mod 2N_j); the padding occupies positions N_j+1 .. 2N_j-1.
    """
    g = source.grid
    s = source.samples
    out = np.zeros(g.shape, dtype=np.result_type(s.dtype, np.float64))
    out[tuple(slice(0, n + 1) for n in g.N)] = s
    return out


def _window(full, grid):
    return np.array(full[tuple(slice(0, n + 1) for n in grid.N)], copy=True)


def fast_convolve(spectrum, source):
    """|chi| 2^m IDFT(K_hat * DFT(f)) on the window."""
    if not spectrum.grid.same_as(source.grid):
        raise ValueError("spectrum and source live on different grids")
    g = source.grid
    w = fft_workers()
    fhat = sfft.fftn(embed(source), workers=w)
    u = sfft.ifftn(spectrum.fft_order() * fhat, workers=w)
    return PotentialField(grid=g, samples=g.det_chi * 2**g.m * _window(u, g))


class Convolver:
    """Reusable K * (.) for repeated applications on one grid (e.g. inside GMRES)."""

    def __init__(self, spectrum):
        g = spectrum.grid
        self.grid = g
        self._mult = g.det_chi * 2**g.m * spectrum.fft_order()
        self._win = tuple(slice(0, n + 1) for n in g.N)

    def __call__(self, samples):
        g = self.grid
        full = np.zeros(g.shape, dtype=complex)
        full[self._win] = samples
        w = fft_workers()
        u = sfft.ifftn(self._mult * sfft.fftn(full, workers=w), workers=w)
        return u[self._win].copy()


def direct_convolve(weights, kernel_values, source):
    """O(N^2) sum u_j = (|chi| / N_bar) sum_l W_(j-l) f_l over the window.

    With a refined or subset construction the data-grid weights are the
    effective ones reproducing the truncated spectrum.
    """
    g = source.grid
    if weights.refine == 1 and weights.subset_halfwidth is None:
        W = combined_weights(weights, kernel_values)
    else:
        W = effective_weights(kernel_spectrum(weights, kernel_values))
    u = core.circular_convolve(to_fft_order(W), embed(source).astype(complex), window_shape(g))
    return PotentialField(grid=g, samples=g.det_chi / g.n_bar * u)
