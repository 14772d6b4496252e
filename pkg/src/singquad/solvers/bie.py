"""Exterior sound-soft scattering by smooth closed curves.

The combined-field density psi solves

    psi/2 + D psi - i k S psi = -u_inc

on the union of the curves.  Self-interaction rows use corrected log
weights built per target on the periodic parameter grid (the log of the
chord splits as log|s - t| plus a smooth term); interactions between
distinct curves are smooth and use the plain trapezoidal rule.
"""

from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy import special

from ..kernels import bie_double_layer, bie_single_layer
from ..quadrature import build_weights, combined_weights
from ..singularity import GridSpec
from .gmres import GmresConfig, gmres
from .lippmann import plane_wave


@dataclass(frozen=True)
class Curve:
    """2-pi periodic parameterisation y(t) with first and second derivatives."""

    y: Callable
    dy: Callable
    d2y: Callable

    def point(self, t):
        return np.asarray(self.y(np.asarray(t, dtype=float)))

    def d1(self, t):
        return np.asarray(self.dy(np.asarray(t, dtype=float)))

    def d2(self, t):
        return np.asarray(self.d2y(np.asarray(t, dtype=float)))

    def speed(self, t):
        return np.linalg.norm(self.d1(t), axis=-1)

    def normal(self, t):
        """Outward unit normal for a counter-clockwise curve."""
        d = self.d1(t)
        n = np.stack([d[..., 1], -d[..., 0]], axis=-1)
        return n / np.linalg.norm(n, axis=-1, keepdims=True)

    def curvature(self, t):
        d, dd = self.d1(t), self.d2(t)
        return (d[..., 0] * dd[..., 1] - d[..., 1] * dd[..., 0]) / self.speed(t) ** 3

    def nodes(self, N):
        return 2.0 * np.pi * np.arange(N) / N

    def translated(self, shift):
        s = np.asarray(shift, dtype=float)
        return Curve(y=lambda t: self.y(t) + s, dy=self.dy, d2y=self.d2y)

    def rotated(self, angle):
        c, s = np.cos(angle), np.sin(angle)
        Q = np.array([[c, -s], [s, c]])
        return Curve(y=lambda t: self.y(t) @ Q.T, dy=lambda t: self.dy(t) @ Q.T, d2y=lambda t: self.d2y(t) @ Q.T)


def kite(center=(0.0, 0.0)):
    """(cos t + 0.65 cos 2t - 0.65, 1.5 sin t) shifted to ``center``."""
    c = np.asarray(center, dtype=float)
    return Curve(
        y=lambda t: np.stack([np.cos(t) + 0.65 * np.cos(2 * t) - 0.65, 1.5 * np.sin(t)], axis=-1) + c,
        dy=lambda t: np.stack([-np.sin(t) - 1.3 * np.sin(2 * t), 1.5 * np.cos(t)], axis=-1),
        d2y=lambda t: np.stack([-np.cos(t) - 2.6 * np.cos(2 * t), -1.5 * np.sin(t)], axis=-1),
    )


def circle(center=(0.0, 0.0), radius=1.0):
    c = np.asarray(center, dtype=float)
    a = float(radius)
    return Curve(
        y=lambda t: a * np.stack([np.cos(t), np.sin(t)], axis=-1) + c,
        dy=lambda t: a * np.stack([-np.sin(t), np.cos(t)], axis=-1),
        d2y=lambda t: -a * np.stack([np.cos(t), np.sin(t)], axis=-1),
    )


def two_kites():
    return [kite((-2.0, 0.0)), kite((2.0, 0.0))]


KITE_DIRECTION = (1.0 / np.sqrt(2.0), -1.0 / np.sqrt(2.0))


def parameter_grid(N):
    """Periodic parameter grid: N points of spacing 2 pi / N, R = pi."""
    if N % 2:
        raise ValueError("N must be even")
    return GridSpec.create(1, N // 2, np.pi)


def _combined_field(curve, x, t, k):
    """D - i k S at targets x for sources y(t); shape (len(x), len(t))."""
    y = curve.point(t)
    d = y[None, :, :] - x[:, None, :]
    r = np.linalg.norm(d, axis=-1)
    kr = k * r
    proj = np.einsum("ijk,jk->ij", d, curve.normal(t))
    dl = 0.25j * k * special.hankel1(1, kr) * (-proj / r)
    sl = 0.25j * special.hankel1(0, kr)
    return dl - 1j * k * sl


def self_block(curve, k, N):
    """Corrected (2 pi / N) [D - i k S] |y'| block of one curve onto itself."""
    grid = parameter_grid(N)
    t = curve.nodes(N)
    speed = curve.speed(t)
    h = grid.det_chi / grid.n_bar
    ell = np.arange(-(N // 2), N // 2)
    A = np.zeros((N, N), dtype=complex)
    for i, s in enumerate(t):
        wd = combined_weights(build_weights(grid, bie_double_layer(curve, k, s)))
        ws = combined_weights(build_weights(grid, bie_single_layer(curve, k, s)))
        cols = (i + ell) % N
        A[i, cols] = h * (wd - 1j * k * ws) * speed[cols]
    return A


def cross_block(target, source, k, N_target, N_source):
    x = target.point(target.nodes(N_target))
    t = source.nodes(N_source)
    return 2.0 * np.pi / N_source * _combined_field(source, x, t, k) * source.speed(t)[None, :]


def assemble(curves, k, N):
    Ns = [int(N)] * len(curves) if np.isscalar(N) else [int(n) for n in N]
    off = np.concatenate([[0], np.cumsum(Ns)])
    A = np.zeros((off[-1], off[-1]), dtype=complex)
    for a, ca in enumerate(curves):
        for b, cb in enumerate(curves):
            blk = self_block(ca, k, Ns[a]) if a == b else cross_block(ca, cb, k, Ns[a], Ns[b])
            A[off[a]:off[a + 1], off[b]:off[b + 1]] = blk
    A[np.diag_indices_from(A)] += 0.5
    return A, Ns


def solve_bie(curves, k, N, direction=KITE_DIRECTION, cfg=None, incident=None):
    """Density samples per curve (list of arrays) and the GMRES residual history.

    ``incident`` is an optional callable u_inc(points); a plane wave along
    ``direction`` otherwise.
    """
    cfg = cfg or GmresConfig()
    A, Ns = assemble(curves, k, N)
    pts = np.concatenate([c.point(c.nodes(n)) for c, n in zip(curves, Ns)])
    if incident is None:
        uinc = plane_wave(k, direction, pts[:, 0], pts[:, 1])
    else:
        uinc = np.asarray(incident(pts), dtype=complex)
    psi, hist = gmres(lambda v: A @ v, -uinc, cfg)
    return np.split(psi, np.cumsum(Ns)[:-1]), hist


def far_field(curves, psi, k, directions):
    """u_inf(x) = e^(-i pi/4) / sqrt(8 pi k) int (k n.x + k) e^(-i k x.y) psi |y'| dt."""
    xh = np.atleast_2d(np.asarray(directions, dtype=float))
    xh = xh / np.linalg.norm(xh, axis=-1, keepdims=True)
    out = np.zeros(len(xh), dtype=complex)
    for c, p in zip(curves, psi):
        p = np.asarray(p)
        t = c.nodes(len(p))
        y, n, sp = c.point(t), c.normal(t), c.speed(t)
        phase = np.exp(-1j * k * xh @ y.T)
        out += (k * (xh @ n.T) + k) * phase @ (p * sp) * (2.0 * np.pi / len(p))
    return np.exp(-0.25j * np.pi) / np.sqrt(8.0 * np.pi * k) * out


def angles_to_directions(theta):
    theta = np.asarray(theta, dtype=float)
    return np.stack([np.cos(theta), np.sin(theta)], axis=-1)


def exterior_field(curves, psi, k, points, direction=KITE_DIRECTION, incident=None):
    """Total field u_inc + (D - i k S) psi at points off the curves."""
    x = np.atleast_2d(np.asarray(points, dtype=float))
    us = np.zeros(len(x), dtype=complex)
    for c, p in zip(curves, psi):
        p = np.asarray(p)
        t = c.nodes(len(p))
        us += _combined_field(c, x, t, k) @ (p * c.speed(t)) * (2.0 * np.pi / len(p))
    if incident is None:
        ui = plane_wave(k, direction, x[:, 0], x[:, 1])
    else:
        ui = np.asarray(incident(x), dtype=complex)
    return ui + us
