"""Exact Fourier coefficients of radially truncated singularities.

Grids live on U = [-1, 1]^m with points y_l = l / N_j, l in {-N_j, ..., N_j - 1},
mapped to physical space by a linear map chi.  A radial function phi(r) with
r = |chi y| cut off outside the ball r < R has Fourier coefficients

    phi_hat(k) = 2^-m int_U phi(r(y)) [r(y) < R] exp(-i pi k.y) dy,

which depend on k only through rho_k = pi R |chi^-T k|.
"""

import warnings
from dataclasses import dataclass, field
from math import gamma

import numpy as np

from . import specfun


@dataclass(frozen=True)
class GridSpec:
    m: int
    N: tuple
    chi: np.ndarray = field(repr=False)
    R: float

    def __post_init__(self):
        N = tuple(int(n) for n in np.atleast_1d(self.N))
        if len(N) == 1 and self.m > 1:
            N = N * self.m
        if len(N) != self.m or min(N) < 1:
            raise ValueError(f"N must hold {self.m} positive counts, got {self.N!r}")
        chi = np.asarray(self.chi, dtype=float)
        if chi.ndim == 0:
            chi = chi * np.eye(self.m)
        if chi.shape != (self.m, self.m):
            raise ValueError(f"chi must be {self.m}x{self.m}")
        if not np.isfinite(np.linalg.cond(chi)):
            raise ValueError("chi is singular")
        if not self.R > 0:
            raise ValueError("R must be positive")
        object.__setattr__(self, "N", N)
        object.__setattr__(self, "chi", chi)
        object.__setattr__(self, "R", float(self.R))
        if self.R > max_inscribed_radius(chi) * (1 + 1e-12):
            warnings.warn(
                f"R = {self.R} exceeds the largest ball inside chi U "
                f"({max_inscribed_radius(chi):.6g})",
                stacklevel=3,
            )

    @classmethod
    def create(cls, m, N, chi, R=None):
        chi = np.asarray(chi, dtype=float)
        if chi.ndim == 0:
            chi = chi * np.eye(m)
        if R is None:
            R = max_inscribed_radius(chi)
        return cls(m=m, N=N, chi=chi, R=R)

    @property
    def det_chi(self):
        return abs(np.linalg.det(self.chi))

    @property
    def chi_invT(self):
        return np.linalg.inv(self.chi).T

    @property
    def shape(self):
        return tuple(2 * n for n in self.N)

    @property
    def n_bar(self):
        return int(np.prod(self.N))

    @property
    def is_scaled_identity(self):
        d = self.chi[0, 0]
        return np.allclose(self.chi, d * np.eye(self.m), rtol=0, atol=1e-15 * abs(d))

    def refined(self, refine):
        return GridSpec(m=self.m, N=tuple(n * int(refine) for n in self.N), chi=self.chi, R=self.R)

    def with_radius(self, R):
        return GridSpec(m=self.m, N=self.N, chi=self.chi, R=R)

    def axes(self):
        """Integer index vectors -N_j .. N_j - 1 per axis (centered storage order)."""
        return [np.arange(-n, n) for n in self.N]

    def physical_points(self):
        """Physical coordinates chi y_l over the full grid, shape shape + (m,)."""
        ys = np.meshgrid(*[ax / n for ax, n in zip(self.axes(), self.N)], indexing="ij")
        y = np.stack(ys, axis=-1)
        return y @ self.chi.T

    def radii(self):
        return np.linalg.norm(self.physical_points(), axis=-1)

    def same_as(self, other):
        return (
            self.m == other.m
            and self.N == other.N
            and self.R == other.R
            and np.array_equal(self.chi, other.chi)
        )

    def to_dict(self):
        return {"m": self.m, "N": list(self.N), "chi": self.chi.tolist(), "R": self.R}

    @classmethod
    def from_dict(cls, d):
        return cls(m=int(d["m"]), N=tuple(d["N"]), chi=np.asarray(d["chi"]), R=float(d["R"]))


def max_inscribed_radius(chi):
    """Largest R with the physical ball B_R contained in chi U."""
    chi = np.atleast_2d(np.asarray(chi, dtype=float))
    rows = np.linalg.inv(chi)
    # face j of chi U is {x : (chi^-1 x)_j = 1}; its distance is 1 / |row_j|
    return float(1.0 / np.max(np.linalg.norm(rows, axis=1)))


@dataclass(frozen=True)
class SingularityKind:
    """Either ``log r`` (nu is None) or ``r^-nu`` with m - nu in (0, 2]."""

    nu: float = None

    @classmethod
    def log(cls):
        return cls(None)

    @classmethod
    def power(cls, nu):
        return cls(float(nu))

    @property
    def is_log(self):
        return self.nu is None

    def mu(self, m):
        return None if self.is_log else m - self.nu

    def validate(self, m):
        if not self.is_log:
            mu = m - self.nu
            if not 0.0 < mu <= 2.0:
                raise ValueError(f"power singularity needs m - nu in (0, 2], got {mu}")

    def __call__(self, r):
        r = np.asarray(r, dtype=float)
        with np.errstate(divide="ignore"):
            if self.is_log:
                return np.log(r)
            return r ** (-self.nu)


def rho_of_k(grid, k):
    """pi R |chi^-T k| for an integer multi-index (or array of them, last axis m)."""
    k = np.asarray(k, dtype=float)
    return np.pi * grid.R * np.linalg.norm(k @ grid.chi_invT.T, axis=-1)


def _prefactor(grid, power):
    m = grid.m
    return np.sqrt(np.pi) ** m * grid.R**power / (2**m * grid.det_chi * gamma(0.5 * m + 1.0))


def phi_hat_log(grid, rho):
    """Fourier coefficient of log(r) truncated to B_R, as a function of rho."""
    m = grid.m
    pre = _prefactor(grid, m)
    return pre * (np.log(grid.R) * specfun.a_fun(m + 2, rho) - specfun.l_fun(m, rho))


def phi_hat_power(grid, nu, rho):
    """Fourier coefficient of r^-nu truncated to B_R, as a function of rho."""
    m = grid.m
    mu = m - nu
    if not 0.0 < mu <= 2.0:
        raise ValueError(f"power singularity needs m - nu in (0, 2], got {mu}")
    return _prefactor(grid, mu) * specfun.m_fun(mu, m, rho)


def phi_hat_radial(grid, kind, rho):
    if kind.is_log:
        return phi_hat_log(grid, rho)
    return phi_hat_power(grid, kind.nu, rho)


def frequency_rho(grid):
    """rho_k over the index set, centered storage order, shape grid.shape."""
    ks = np.meshgrid(*grid.axes(), indexing="ij")
    if grid.is_scaled_identity:
        k2 = sum(k.astype(np.int64) ** 2 for k in ks)
        return np.pi * grid.R / grid.chi[0, 0] * np.sqrt(k2.astype(float)), k2
    k = np.stack(ks, axis=-1).astype(float)
    return rho_of_k(grid, k), None


def phi_hat_table(grid, kind):
    """phi_hat at every k in the index set, centered storage order.

    Entries sharing rho_k are evaluated once: exactly (through |k|^2) for a
    scaled-identity chi, and by rounding rho to 13 significant digits otherwise.
    For a general chi, entries with a component k_j = -N_j hold the mean over
    both signs of every such component.
    """
    kind.validate(grid.m)
    rho, k2 = frequency_rho(grid)
    if k2 is not None:
        keys, inverse = np.unique(k2.ravel(), return_inverse=True)
        vals = phi_hat_radial(grid, kind, np.pi * grid.R / grid.chi[0, 0] * np.sqrt(keys.astype(float)))
    else:
        table = _grouped(grid, kind, rho)
        # k_j = -N_j and +N_j have the same phase on grid points; without the
        # average a sheared chi gives them different rho and phi_tilde turns complex
        ks = np.meshgrid(*grid.axes(), indexing="ij")
        nyq = [k == -n for k, n in zip(ks, grid.N)]
        edge = np.logical_or.reduce(nyq)
        if edge.any():
            k = np.stack([kj[edge] for kj in ks], axis=-1).astype(float)
            flags = np.stack([q[edge] for q in nyq], axis=-1)
            acc = np.zeros(len(k))
            for mask in np.ndindex(*(2,) * grid.m):
                flip = flags & np.asarray(mask, dtype=bool)
                acc += phi_hat_radial(grid, kind, rho_of_k(grid, np.where(flip, -k, k)))
            table[edge] = acc / 2**grid.m
        return table
    return np.asarray(vals)[inverse].reshape(grid.shape)


def _grouped(grid, kind, rho):
    rounded = np.round(rho.ravel(), 13 - int(np.ceil(np.log10(max(rho.max(), 1.0)))))
    keys, inverse = np.unique(rounded, return_inverse=True)
    first = np.zeros(len(keys), dtype=np.int64)
    first[inverse[::-1]] = np.arange(rho.size)[::-1]
    vals = phi_hat_radial(grid, kind, rho.ravel()[first])
    return np.array(vals, dtype=float)[inverse].reshape(grid.shape)
