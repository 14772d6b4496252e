"""Convergence suites: corrected-rule errors against independent references.

Every suite returns a SuiteReport holding rows (case, N, E_N, observed order)
and the pass/fail checks for its accuracy thresholds.  Grids cover [-3, 3]^m
(chi = 6) unless stated otherwise; targets are the window grid points.
"""

import json
import os
import time
from dataclasses import dataclass, field

import numpy as np
from scipy import special

from . import io, oracles
from .convolve import SourceField, fast_convolve
from .kernels import helmholtz, static_kernel
from .quadrature import build_weights, kernel_spectrum
from .singularity import GridSpec
from .solvers import (
    angles_to_directions, far_field, solve_bie, solve_lippmann_schwinger, three_bump_medium, two_kites,
)

HALF_WIDTH = 3.0


def f_gauss(r, a=0.5):
    return np.exp(-((np.asarray(r, dtype=float) / a) ** 2))


def f_bump(r, a=2.0):
    s = (np.asarray(r, dtype=float) / a) ** 2
    out = np.zeros(s.shape)
    inside = s < 1.0
    out[inside] = np.exp(12.0 - 12.0 / (1.0 - s[inside]))
    return out if out.ndim else float(out)


def f_poly(r, a=2.0):
    return np.maximum(0.0, 1.0 - (np.asarray(r, dtype=float) / a) ** 2) ** 7


SOURCES = {"f_G": (f_gauss, ()), "f_B": (f_bump, (-2.0, 2.0)), "f_P": (f_poly, (-2.0, 2.0))}


@dataclass
class SuiteRow:
    case: str
    N: int
    error: float
    order: float = None


@dataclass
class Check:
    name: str
    passed: bool
    detail: str
    required: bool = True


@dataclass
class SuiteReport:
    name: str
    rows: list = field(default_factory=list)
    checks: list = field(default_factory=list)
    metadata: dict = field(default_factory=dict)

    @property
    def passed(self):
        return all(c.passed for c in self.checks if c.required)

    def add(self, case, N, error):
        if not error >= 0:
            raise ValueError(f"error must be non-negative, got {error}")
        prev = [r for r in self.rows if r.case == case and 2 * r.N == N]
        order = float(np.log2(prev[0].error / error)) if prev and error > 0 and prev[0].error > 0 else None
        self.rows.append(SuiteRow(case, int(N), float(error), order))

    def error(self, case, N):
        for r in self.rows:
            if r.case == case and r.N == N:
                return r.error
        raise KeyError((case, N))

    def order(self, case, N):
        for r in self.rows:
            if r.case == case and r.N == N:
                return r.order
        raise KeyError((case, N))

    def check(self, name, passed, detail, required=True):
        self.checks.append(Check(name, bool(passed), detail, required))

    def to_table(self):
        lines = [f"suite {self.name}"]
        for key, val in self.metadata.items():
            lines.append(f"  {key}: {val}")
        lines.append(f"  {'case':<34} {'N':>5} {'E_N':>11} {'order':>7}")
        for r in self.rows:
            order = "---" if r.order is None else f"{r.order:.1f}"
            lines.append(f"  {r.case:<34} {r.N:>5} {r.error:>11.3e} {order:>7}")
        for c in self.checks:
            tag = "PASS" if c.passed else "FAIL"
            extra = "" if c.required else " (informational)"
            lines.append(f"  [{tag}] {c.name}: {c.detail}{extra}")
        return "\n".join(lines)

    def to_dict(self):
        return {
            "name": self.name,
            "passed": self.passed,
            "metadata": self.metadata,
            "rows": [vars(r) for r in self.rows],
            "checks": [vars(c) for c in self.checks],
        }

    def write(self, out_dir, fmt="csv"):
        os.makedirs(out_dir, exist_ok=True)
        base = os.path.join(out_dir, self.name)
        if fmt == "json":
            with open(base + ".json", "w") as fh:
                json.dump(self.to_dict(), fh, indent=1)
        elif fmt == "csv":
            rows = [[r.case, r.N, r.error, "" if r.order is None else r.order] for r in self.rows]
            io.write_table_csv(base + ".csv", ["case", "N", "E_N", "order"], rows)
        else:
            raise ValueError(f"unknown format {fmt!r}")
        with open(base + ".txt", "w") as fh:
            fh.write(self.to_table() + "\n")


def within_factor(value, target, factor=10.0):
    return target / factor <= value <= target * factor


def window_axis(N, L=HALF_WIDTH):
    return -L + 2.0 * L * np.arange(N + 1) / N


def window_radii(m, N, L=HALF_WIDTH):
    x = window_axis(N, L)
    X = np.meshgrid(*[x] * m, indexing="ij")
    return np.sqrt(sum(c * c for c in X))


def grid_potential(fact, m, N, source, refine=1, R=None, L=HALF_WIDTH):
    """Corrected-rule convolution of a radial source on the window of [-L, L]^m."""
    grid = GridSpec.create(m, N, 2.0 * L, R=R)
    spec = kernel_spectrum(build_weights(grid, fact, refine=refine))
    return fast_convolve(spec, SourceField(grid, source(window_radii(m, N, L)))).samples


def _index_radii(m, N, L=HALF_WIDTH):
    """Integer keys s = sum (2 i - N)^2 with r = (L / N) sqrt(s), per window point."""
    j = 2 * np.arange(N + 1) - N
    J = np.meshgrid(*[j] * m, indexing="ij")
    return sum(c.astype(np.int64) ** 2 for c in J)


def _gauss_reference(m, n, N, L=HALF_WIDTH):
    keys = _index_radii(m, N, L)
    uniq, inverse = np.unique(keys.ravel(), return_inverse=True)
    vals = oracles.exact_gaussian_potential(m, n, L / N * np.sqrt(uniq.astype(float)))
    return np.asarray(vals)[inverse].reshape(keys.shape)


def _line_reference(kernel, source, breaks, N, L=HALF_WIDTH):
    x = window_axis(N, L)
    return np.array([oracles.convolution_1d(kernel, source, xi, -L, L, extra_breaks=breaks) for xi in x])


def _log_kernel(r):
    return -np.log(r) / (2.0 * np.pi)


def suite_p_a(sizes=(5, 10, 20, 40), refines=(1, 2)):
    rep = SuiteReport("p_a", metadata={"kernel": "K0_2", "m": 1, "n": 2, "k": 0, "source": "f_G"})
    for N in sizes:
        ref = _line_reference(_log_kernel, f_gauss, (), N)
        for rf in refines:
            u = grid_potential(static_kernel(2), 1, N, f_gauss, refine=rf)
            rep.add(f"f_G refine={rf}", N, np.abs(u - ref).max())
    targets = {5: 5.58e-2, 10: 3.26e-3, 20: 1.30e-6}
    if 1 in refines:
        for N, target in targets.items():
            if N in sizes:
                e = rep.error("f_G refine=1", N)
                rep.check(f"N={N} within x10 of {target:.2e}", within_factor(e, target), f"E={e:.3e}")
    if 2 in refines and 40 in sizes:
        e = rep.error("f_G refine=2", 40)
        rep.check("N=40 refine=2 <= 1e-13", e <= 1e-13, f"E={e:.3e}")
    return rep


def suite_p_b(sizes=(5, 10, 20, 40, 80), refine=1):
    rep = SuiteReport("p_b", metadata={"kernel": "K0_2", "m": 1, "n": 2, "k": 0, "refine": refine})
    for name in ("f_B", "f_P"):
        src, breaks = SOURCES[name]
        for N in sizes:
            ref = _line_reference(_log_kernel, src, breaks, N)
            u = grid_potential(static_kernel(2), 1, N, src, refine=refine)
            rep.add(name, N, np.abs(u - ref).max())
    for N in (20, 40, 80):
        if N in sizes and N // 2 in sizes:
            p = rep.order("f_P", N)
            rep.check(f"f_P order at N={N} in [7.2, 8.8]", 7.2 <= p <= 8.8, f"order={p:.2f}")
    if 80 in sizes:
        e = rep.error("f_B", 80)
        rep.check("f_B N=80 <= 1e-12", e <= 1e-12, f"E={e:.3e}")
    return rep


P_C_CASES = ((2, 2), (2, 3), (3, 3), (3, 4))


def suite_p_c(sizes=(5, 10, 20, 40), refine=2, cases=P_C_CASES):
    rep = SuiteReport("p_c", metadata={"kernel": "K0_n", "k": 0, "source": "f_G", "refine": refine})
    for m, n in cases:
        for N in sizes:
            u = grid_potential(static_kernel(n), m, N, f_gauss, refine=refine)
            rep.add(f"m={m} n={n}", N, np.abs(u - _gauss_reference(m, n, N)).max())
        if 40 in sizes:
            e = rep.error(f"m={m} n={n}", 40)
            rep.check(f"m={m} n={n} N=40 <= 1e-13", e <= 1e-13, f"E={e:.3e}")
    return rep


HELMHOLTZ_K = 2.0 * np.pi
H_B_CASES = ((2, 2), (2, 3), (3, 3), (3, 4))


def origin_reference(m, n, k=HELMHOLTZ_K, rmax=2.0 * HALF_WIDTH):
    kern = helmholtz(n, k).kernel
    return oracles.radial_origin_potential(kern, f_gauss, m, rmax)


def _origin_error(m, n, N, refine, ref, k=HELMHOLTZ_K):
    if N % 2:
        raise ValueError("origin-only suites need even N (the origin must be a grid point)")
    u = grid_potential(helmholtz(n, k), m, N, f_gauss, refine=refine)
    return abs(u[(N // 2,) * m] - ref)


def suite_h_a(sizes=(10, 20, 40), refines=(1, 2)):
    rep = SuiteReport("h_a", metadata={"kernel": "Kk_2", "m": 1, "n": 2, "k": "2 pi", "target": "origin"})
    ref = origin_reference(1, 2)
    for rf in refines:
        for N in sizes:
            rep.add(f"m=1 n=2 refine={rf}", N, _origin_error(1, 2, N, rf, ref))
    if 2 in refines and 40 in sizes:
        e = rep.error("m=1 n=2 refine=2", 40)
        rep.check("m=1 n=2 N=40 refine=2 <= 1e-13", e <= 1e-13, f"E={e:.3e}")
    return rep


def suite_h_b(sizes=(10, 20, 40), refine=2, cases=H_B_CASES):
    rep = SuiteReport("h_b", metadata={"kernel": "Kk_n", "k": "2 pi", "target": "origin", "refine": refine})
    for m, n in cases:
        ref = origin_reference(m, n)
        for N in sizes:
            rep.add(f"m={m} n={n}", N, _origin_error(m, n, N, refine, ref))
        if 40 in sizes:
            e = rep.error(f"m={m} n={n}", 40)
            rep.check(f"m={m} n={n} N=40 <= 1e-13", e <= 1e-13, f"E={e:.3e}")
    return rep


IMAGK_LAMBDAS = (4.0, 10.0, 20.0, 50.0)


def imagk_radius(lam, scale=10.0):
    """Ball radius keeping lambda R bounded: the amplification of rounding in
    the correction weights grows like I_0(lambda R)."""
    return min(1.0, scale / lam)


def modified_bessel_kernel(lam):
    return lambda r: special.k0(lam * r) / (2.0 * np.pi)


def suite_imagk(N=40, lambdas=IMAGK_LAMBDAS, refine_fixed=32, refine_scaled=128, demo_lambda=20.0):
    """K^(i lambda)_2 * f_G on [-3, 3]: fixed R = 1, lambda-scaled R, and R = 3."""
    rep = SuiteReport("imagk", metadata={"kernel": "K^(i lambda)_2 = K_0(lambda r)/(2 pi)", "m": 1, "N": N})
    refs = {lam: _line_reference(modified_bessel_kernel(lam), f_gauss, (), N) for lam in lambdas}
    fixed, scaled = {}, {}
    for lam in lambdas:
        fact = helmholtz(2, 1j * lam)
        u = grid_potential(fact, 1, N, f_gauss, refine=refine_fixed, R=1.0)
        fixed[lam] = float(np.abs(u - refs[lam]).max())
        rep.rows.append(SuiteRow(f"R=1 refine={refine_fixed} lambda={lam:g}", N, fixed[lam]))
        R = imagk_radius(lam)
        u = grid_potential(fact, 1, N, f_gauss, refine=refine_scaled, R=R)
        scaled[lam] = float(np.abs(u - refs[lam]).max())
        rep.rows.append(SuiteRow(f"R={R:g} refine={refine_scaled} lambda={lam:g}", N, scaled[lam]))
    worst = max(fixed.values())
    rep.check("R=1: max error <= 1e-12 for every lambda", worst <= 1e-12,
              ", ".join(f"lambda={lam:g}: {e:.1e}" for lam, e in fixed.items()))
    rep.check("R=min(1, 10/lambda): max error <= 1e-12", max(scaled.values()) <= 1e-12,
              ", ".join(f"lambda={lam:g}: {e:.1e}" for lam, e in scaled.items()), required=False)
    if demo_lambda is not None:
        if demo_lambda not in refs:
            refs[demo_lambda] = _line_reference(modified_bessel_kernel(demo_lambda), f_gauss, (), N)
        u = grid_potential(helmholtz(2, 1j * demo_lambda), 1, N, f_gauss, refine=refine_fixed, R=3.0)
        e = float(np.abs(u - refs[demo_lambda]).max())
        rep.rows.append(SuiteRow(f"R=3 refine={refine_fixed} lambda={demo_lambda:g}", N, e))
        rep.check(f"R=3 at lambda={demo_lambda:g} breaks down (error >= 1e-6)", e >= 1e-6, f"E={e:.3e}")
    return rep


def suite_ls(sizes=(80, 160, 320), reference=640, refine=1):
    med = three_bump_medium()
    rep = SuiteReport("ls", metadata={"k": "5 pi", "domain": "[-6,6]^2", "reference N": reference,
                                      "direction": "(1, 0)", "refine": refine})
    ref, hist = solve_lippmann_schwinger(med, reference, refine=refine)
    rep.metadata["reference GMRES iterations"] = len(hist) - 1
    for N in sizes:
        if reference % N:
            raise ValueError("reference N must be a multiple of every N")
        u, _ = solve_lippmann_schwinger(med, N, refine=refine)
        s = reference // N
        rep.add("total field", N, np.abs(u.samples - ref.samples[::s, ::s]).max())
    if 160 in sizes:
        e = rep.error("total field", 160)
        rep.check("N=160 within x10 of 2.08e-4", within_factor(e, 2.08e-4), f"E={e:.3e}")
    if 320 in sizes and 160 in sizes:
        p = rep.order("total field", 320)
        rep.check("order 160 -> 320 >= 8", p >= 8, f"order={p:.2f}")
    return rep


def suite_bie(sizes=(80, 160, 320), reference=640, n_directions=64):
    k = 5.0 * np.pi
    curves = two_kites()
    dirs = angles_to_directions(2.0 * np.pi * np.arange(n_directions) / n_directions)
    rep = SuiteReport("bie", metadata={"k": "5 pi", "curves": "kites at (+-2, 0)", "reference N": reference,
                                       "far-field directions": n_directions})
    psi_ref, _ = solve_bie(curves, k, reference)
    ff_ref = far_field(curves, psi_ref, k, dirs)
    for N in sizes:
        if reference % N:
            raise ValueError("reference N must be a multiple of every N")
        psi, _ = solve_bie(curves, k, N)
        s = reference // N
        rep.add("density", N, max(np.abs(p - r[::s]).max() for p, r in zip(psi, psi_ref)))
        rep.add("far field", N, np.abs(far_field(curves, psi, k, dirs) - ff_ref).max())
    if 160 in sizes:
        e = rep.error("density", 160)
        rep.check("density N=160 within x10 of 1.61e-5", within_factor(e, 1.61e-5), f"E={e:.3e}")
    if 320 in sizes:
        e = rep.error("far field", 320)
        rep.check("far field N=320 <= 1e-12", e <= 1e-12, f"E={e:.3e}")
        if 160 in sizes:
            p = rep.order("density", 320)
            rep.check("density order 160 -> 320 >= 10", p >= 10, f"order={p:.2f}")
    return rep


SUITES = {
    "p_a": suite_p_a, "p_b": suite_p_b, "p_c": suite_p_c, "h_a": suite_h_a, "h_b": suite_h_b,
    "imagk": suite_imagk, "ls": suite_ls, "bie": suite_bie,
}


def run_suite(name, refine=None, seed=0, out_dir=None, fmt="csv", **kwargs):
    """Run a named suite; ``refine`` overrides the construction refinement where
    the suite has a single one.  The suites are deterministic; ``seed`` is
    recorded in the metadata."""
    if name not in SUITES:
        raise ValueError(f"unknown suite {name!r}; choose from {', '.join(SUITES)}")
    if refine is not None:
        if name in ("p_a", "h_a"):
            kwargs.setdefault("refines", (int(refine),))
        elif name in ("p_b", "p_c", "h_b", "ls"):
            kwargs.setdefault("refine", int(refine))
        elif name == "imagk":
            kwargs.setdefault("refine_fixed", int(refine))
    t0 = time.perf_counter()
    rep = SUITES[name](**kwargs)
    rep.metadata["seed"] = seed
    rep.metadata["runtime (s)"] = round(time.perf_counter() - t0, 2)
    if out_dir is not None:
        rep.write(out_dir, fmt)
    return rep
