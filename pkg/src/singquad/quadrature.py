"""Corrected trapezoidal rule for weakly singular radial kernels.

Storage convention: every grid- or frequency-indexed array is kept in
*centered* order, position ``l + N_j`` along axis j holds index
``l in {-N_j, ..., N_j - 1}``.  ``np.fft.ifftshift`` maps centered order to
the FFT library's natural order (index = l mod 2N_j) and ``np.fft.fftshift``
maps it back; for even lengths both are exact permutations.

DFT:   K_hat[k] = (2^m N_bar)^-1 sum_l W[l] exp(-i pi k.y_l)
IDFT:  W[l]     = sum_k K_hat[k] exp(+i pi k.y_l)       (no normalisation)
"""

from dataclasses import dataclass, field
from math import ceil
import numpy as np
from scipy import fft as sfft

from . import singularity
from .singularity import GridSpec, SingularityKind

IMAG_RESIDUE_TOL = 1e-13


def fft_workers():
    import os

    try:
        return max(1, int(os.environ.get("SINGQUAD_THREADS", "1")))
    except ValueError:
        return 1


def to_fft_order(a):
    return np.fft.ifftshift(a)


def to_centered(a):
    return np.fft.fftshift(a)


def dft(samples):
    """Normalised forward DFT, centered order in and out."""
    a = np.asarray(samples)
    out = sfft.fftn(to_fft_order(a), workers=fft_workers()) / a.size
    return to_centered(out)


def idft(coeffs):
    """Unnormalised inverse DFT, centered order in and out."""
    a = np.asarray(coeffs)
    out = sfft.ifftn(to_fft_order(a), workers=fft_workers()) * a.size
    return to_centered(out)


def cutoff(t, R):
    """Sigmoidal cut-off phi_1(t / R): 1 at the origin, 0 for |t| >= R."""
    if not R > 0:
        raise ValueError("R must be positive")
    s = np.abs(np.asarray(t, dtype=float)) / R
    out = np.zeros_like(s)
    inside = s < 1.0
    si = s[inside]
    with np.errstate(divide="ignore", over="ignore"):
        out[inside] = np.exp(-np.exp(-2.0 / si) / (1.0 - si) ** 2)
    return out if np.ndim(t) else float(out)


_PHI_CACHE = {}
_PHI_CACHE_MAX = 16


def regularized_phi(grid, kind):
    """Cached wrapper around ``compute_regularized_phi``; returns a read-only array."""
    key = (grid.m, grid.N, grid.chi.tobytes(), grid.R, kind.nu)
    hit = _PHI_CACHE.get(key)
    if hit is None:
        hit = compute_regularized_phi(grid, kind)
        hit.flags.writeable = False
        if len(_PHI_CACHE) >= _PHI_CACHE_MAX:
            _PHI_CACHE.pop(next(iter(_PHI_CACHE)))
        _PHI_CACHE[key] = hit
    return hit


def compute_regularized_phi(grid, kind):
    """phi_tilde_l = sum_k phi_hat(k) exp(i pi k.y_l) over the index set.

    Raises if the imaginary residue exceeds 1e-13 of the largest value,
    which would indicate a broken coefficient table.
    """
    table = singularity.phi_hat_table(grid, kind)
    vals = idft(table)
    # phi_hat is real and even apart from the unpaired k = -N_j slices; those
    # hold the mean over both signs of k_j, so any imaginary part is rounding
    resid = np.max(np.abs(vals.imag))
    if resid > IMAG_RESIDUE_TOL * np.max(np.abs(vals)):
        raise ArithmeticError(f"phi_tilde imaginary residue {resid:.3e} exceeds tolerance")
    return vals.real


@dataclass(frozen=True)
class CorrectionWeights:
    """Correction weights w_l for points with r_l < R on the construction grid.

    ``index`` holds centered multi-indices (rows, relative to the origin) on
    ``construction_grid``; ``values`` the matching w_l.  ``center_weight`` is
    w_0.  ``subset_halfwidth`` (construction-grid units) limits the support of
    the kernel spectrum to a centered box.
    """

    grid: GridSpec
    construction_grid: GridSpec
    refine: int
    center_weight: complex
    index: np.ndarray = field(repr=False)
    values: np.ndarray = field(repr=False)
    factorization: object = field(default=None, repr=False, compare=False)
    subset_halfwidth: tuple = None

    @property
    def entries(self):
        return {tuple(int(v) for v in i): complex(w) for i, w in zip(self.index, self.values)}

    def box_shape(self):
        if self.subset_halfwidth is None:
            return self.construction_grid.shape
        return tuple(2 * h + 1 for h in self.subset_halfwidth)

    def box_origin(self):
        """Position of index 0 inside the construction box."""
        if self.subset_halfwidth is None:
            return tuple(self.construction_grid.N)
        return tuple(self.subset_halfwidth)

    def box_indices(self):
        """Per-axis integer indices covered by the construction box."""
        if self.subset_halfwidth is None:
            return self.construction_grid.axes()
        return [np.arange(-h, h + 1) for h in self.subset_halfwidth]

    def box_points(self):
        cg = self.construction_grid
        ys = np.meshgrid(*[ax / n for ax, n in zip(self.box_indices(), cg.N)], indexing="ij")
        return np.stack(ys, axis=-1) @ cg.chi.T

    def dense(self):
        """w over the construction box with w_0 at the origin, zero elsewhere."""
        out = np.zeros(self.box_shape(), dtype=complex)
        origin = np.asarray(self.box_origin())
        if len(self.index):
            pos = tuple((self.index + origin).T)
            out[pos] = self.values
        out[tuple(origin)] = self.center_weight
        return out


def _fold_power(fact, m):
    """Return (nu, alpha, alpha0) with m - nu in (0, 2] by moving r^2p into alpha."""
    nu = fact.power_exponent
    mu = m - nu
    if mu <= 0:
        raise ValueError(f"r^-{nu} is not integrable in {m} dimensions")
    if mu <= 2:
        return nu, fact.alpha, fact.alpha0
    p = int(ceil((mu - 2.0) / 2.0))
    alpha = fact.alpha

    if fact.radial:
        def folded(r):
            return alpha(r) * np.asarray(r) ** (2 * p)
    else:
        def folded(y):
            return alpha(y) * np.sum(np.asarray(y) ** 2, axis=-1) ** p

    return nu + 2 * p, folded, 0.0


def _check_factorization(fact):
    missing = []
    if fact.power_exponent is not None and (fact.alpha is None or fact.alpha0 is None):
        missing.append("alpha/alpha0")
    if fact.beta is not None and fact.beta0 is None:
        missing.append("beta0")
    if fact.ktilde0 is None:
        missing.append("ktilde0")
    if missing:
        raise ValueError("factorization lacks " + ", ".join(missing))


def _min_halfwidth(grid):
    rows = np.linalg.norm(np.linalg.inv(grid.chi), axis=1)
    return tuple(int(ceil(grid.R * r * n)) for r, n in zip(rows, grid.N))


def build_weights(grid, fact, refine=1, subset=None, form="separated"):
    """Correction weights for ``fact`` on ``grid``.

    refine : integer >= 1; the construction grid has N_j * refine points and
        the spectrum is truncated back to the data index set.
    subset : optional per-axis half-width (construction-grid units) of a
        centered box holding the construction; must contain B_R.
    form : "separated" (default) evaluates alpha (phi_tilde - phi) phi_cut;
        "primitive" evaluates phi_cut (alpha phi_tilde + K_tilde) - phi_cut K.
    """
    _check_factorization(fact)
    refine = int(refine)
    if refine < 1:
        raise ValueError("refine must be a positive integer")
    m = grid.m
    cg = grid.refined(refine) if refine > 1 else grid

    if subset is not None:
        hw = tuple(int(h) for h in np.broadcast_to(subset, (m,)))
        need = _min_halfwidth(cg)
        if any(h < n for h, n in zip(hw, need)):
            raise ValueError(f"subset half-width {hw} does not contain B_R (needs {need})")
        if any(h >= n for h, n in zip(hw, cg.N)):
            hw = None
    else:
        hw = None

    shell = CorrectionWeights(
        grid=grid, construction_grid=cg, refine=refine, center_weight=0.0,
        index=np.zeros((0, m), dtype=np.int64), values=np.zeros(0, dtype=complex),
        subset_halfwidth=hw,
    )
    y = shell.box_points()
    r = np.linalg.norm(y, axis=-1)
    origin = shell.box_origin()
    inside = r < cg.R
    inside[origin] = False

    def box_slice(full):
        if hw is None:
            return full
        sl = tuple(slice(n - h, n + h + 1) for n, h in zip(cg.N, hw))
        return full[sl]

    ri = r[inside]
    yi = y[inside]
    cut = cutoff(ri, cg.R)
    arg = ri if fact.radial else yi
    w = np.zeros(ri.shape, dtype=complex)
    w0 = complex(fact.ktilde0)
    smooth = np.zeros(ri.shape, dtype=complex)

    if fact.power_exponent is not None:
        nu, alpha, alpha0 = _fold_power(fact, m)
        kind = SingularityKind.power(nu)
        phit = box_slice(regularized_phi(cg, kind))
        a = alpha(arg)
        w += a * (phit[inside] - kind(ri)) * cut
        smooth += a * phit[inside]
        w0 += alpha0 * phit[origin]
    if fact.beta is not None:
        kind = SingularityKind.log()
        phit = box_slice(regularized_phi(cg, kind))
        b = fact.beta(arg)
        w += b * (phit[inside] - np.log(ri)) * cut
        smooth += b * phit[inside]
        w0 += fact.beta0 * phit[origin]

    if form == "primitive":
        kfull = fact.kernel(arg)
        sing = np.zeros(ri.shape, dtype=complex)
        if fact.power_exponent is not None:
            nu0 = fact.power_exponent
            sing += fact.alpha(arg) * ri ** (-nu0)
        if fact.beta is not None:
            sing += fact.beta(arg) * np.log(ri)
        ktilde = kfull - sing
        w = cut * (smooth + ktilde) - cut * kfull
    elif form != "separated":
        raise ValueError(f"unknown form {form!r}")

    index = np.argwhere(inside) - np.asarray(origin)
    return CorrectionWeights(
        grid=grid, construction_grid=cg, refine=refine, center_weight=w0,
        index=index, values=w, factorization=fact, subset_halfwidth=hw,
    )


def sample_kernel(weights, kernel=None):
    """Kernel values K(y_l) on the construction box, zero at the origin."""
    fact = weights.factorization
    if kernel is None:
        if fact is None:
            raise ValueError("no kernel callable available")
        kernel = fact.kernel
        radial = fact.radial
    else:
        radial = True
    y = weights.box_points()
    r = np.linalg.norm(y, axis=-1)
    origin = weights.box_origin()
    r[origin] = 1.0
    out = np.asarray(kernel(r if radial else y), dtype=complex)
    out[origin] = 0.0
    return out


def combined_weights(weights, kernel_values=None):
    """W_l = K(y_l) + w_l (W_0 = w_0) over the construction box."""
    if kernel_values is None:
        kernel_values = sample_kernel(weights)
    kv = np.array(kernel_values, dtype=complex)
    if kv.shape != weights.box_shape():
        raise ValueError(f"kernel values shape {kv.shape} != construction box {weights.box_shape()}")
    kv[weights.box_origin()] = 0.0
    return kv + weights.dense()


@dataclass(frozen=True)
class KernelSpectrum:
    grid: GridSpec
    coeffs: np.ndarray = field(repr=False)

    def fft_order(self):
        return to_fft_order(self.coeffs)


def _box_dft(W, indices, cg, grid):
    # sum over a centered box of exp(-i pi k l / N'_j) per axis, k in the data index set
    out = W
    for ax, (l, nf, n) in enumerate(zip(indices, cg.N, grid.N)):
        k = np.arange(-n, n)
        E = np.exp(-1j * np.pi * np.outer(k, l) / nf)
        out = np.moveaxis(np.tensordot(E, np.moveaxis(out, ax, 0), axes=(1, 0)), 0, ax)
    return out / (2**cg.m * cg.n_bar)


def kernel_spectrum(weights, kernel_values=None):
    """DFT of {w_0, K(y_l) + w_l}, truncated to the data grid's index set."""
    W = combined_weights(weights, kernel_values)
    cg, grid = weights.construction_grid, weights.grid
    if weights.subset_halfwidth is not None:
        coeffs = _box_dft(W, weights.box_indices(), cg, grid)
    else:
        full = dft(W)
        sl = tuple(slice(nf - n, nf + n) for nf, n in zip(cg.N, grid.N))
        coeffs = full[sl].copy()
    return KernelSpectrum(grid=grid, coeffs=coeffs)


def effective_weights(spectrum):
    """Data-grid array whose trapezoidal sums reproduce the spectrum exactly."""
    return idft(spectrum.coeffs)


def apply_rule(weights, kernel_values, f_samples):
    """Corrected trapezoidal value of int K(x) f(x) dx with the target at the origin.

    ``f_samples`` lives on the data grid (centered order).  ``kernel_values``
    lives on the construction box (see ``sample_kernel``); None samples the
    factorization's kernel.
    """
    g = weights.grid
    f = np.asarray(f_samples)
    if f.shape != g.shape:
        raise ValueError(f"f has shape {f.shape}, grid needs {g.shape}")
    if weights.refine == 1 and weights.subset_halfwidth is None:
        W = combined_weights(weights, kernel_values)
        return g.det_chi / g.n_bar * np.sum(W * f)
    spec = kernel_spectrum(weights, kernel_values)
    fhat = dft(f)
    return g.det_chi * 2**g.m * np.sum(spec.coeffs * fhat)
