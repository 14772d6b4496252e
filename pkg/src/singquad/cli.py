"""Command line interface: convergence suites, weight tools, scattering drivers."""

import argparse
import json
import os
import sys

import numpy as np

from . import io, oracles, specfun
from .kernels import helmholtz, static_kernel
from .quadrature import build_weights, kernel_spectrum
from .singularity import GridSpec, SingularityKind, frequency_rho, phi_hat_table
from .solvers import (
    Medium, angles_to_directions, circle, far_field, kite, solve_bie, solve_lippmann_schwinger,
    three_bump_medium,
)
from .solvers.gmres import GmresConfig
from .solvers.lippmann import bump
from .suites import SUITES, run_suite


def _complex(text):
    return complex(text.replace(" ", ""))


def _floats(text):
    return [float(v) for v in str(text).replace(";", ",").split(",") if v.strip()]


def _chi(text, m):
    vals = _floats(text)
    if len(vals) == 1:
        return vals[0] * np.eye(m)
    if len(vals) != m * m:
        raise SystemExit(f"--chi needs 1 or {m * m} values")
    return np.array(vals).reshape(m, m)


def _grid(args):
    return GridSpec.create(args.m, args.N, _chi(args.chi, args.m), R=args.R)


def _factorization(args):
    k = _complex(args.k)
    n = args.n if args.n is not None else args.m + 1
    return static_kernel(n) if k == 0 else helmholtz(n, k)


def _out_path(args, name):
    os.makedirs(args.out_dir, exist_ok=True)
    return os.path.join(args.out_dir, name)


def cmd_suite(args):
    rep = run_suite(args.name, refine=args.refine, seed=args.seed, out_dir=args.out_dir, fmt=args.format)
    print(rep.to_table())
    return 0 if rep.passed else 1


def cmd_weights(args):
    grid = _grid(args)
    if args.action == "phihat":
        kind = SingularityKind.log() if args.log else SingularityKind.power(args.nu)
        table = phi_hat_table(grid, kind)
        rho, _ = frequency_rho(grid)
        ks = np.meshgrid(*grid.axes(), indexing="ij")
        rows = [[*(int(k[idx]) for k in ks), float(rho[idx]), float(table[idx])] for idx in np.ndindex(grid.shape)]
        header = [f"k{j}" for j in range(grid.m)] + ["rho", "phi_hat"]
        io.write_table_csv(args.out, header, rows)
        return 0
    w = build_weights(grid, _factorization(args), refine=args.refine)
    if args.action == "build":
        io.write_weights(args.out, w)
    else:
        io.write_spectrum(args.out, kernel_spectrum(w))
    print(f"wrote {args.out}")
    return 0


def _medium(args):
    if args.medium == "builtin":
        return three_bump_medium(k=args.k, L=args.domain)
    with open(args.medium) as fh:
        spec = json.load(fh)
    depth = float(spec.get("depth", 0.9))
    centers = [tuple(c) for c in spec["centers"]]

    def index(x, y):
        return 1.0 - depth * sum(bump(x, y, cx, cy) for cx, cy in centers)

    return Medium(index=index, k=float(spec.get("k", args.k)), L=float(spec.get("L", args.domain)))


def _curves(path):
    if path is None:
        return [kite((-2.0, 0.0)), kite((2.0, 0.0))]
    with open(path) as fh:
        items = json.load(fh)
    out = []
    for it in items:
        kind = it.get("type", "kite")
        if kind == "kite":
            out.append(kite(it.get("center", (0.0, 0.0))))
        elif kind == "circle":
            out.append(circle(it.get("center", (0.0, 0.0)), it.get("radius", 1.0)))
        else:
            raise SystemExit(f"unsupported curve type {kind!r}")
    return out


def _history_csv(path, hist):
    io.write_table_csv(path, ["iteration", "relative_residual"], [[i, float(h)] for i, h in enumerate(hist)])


def cmd_scatter(args):
    cfg = GmresConfig(tol=args.tol, restart=args.restart)
    direction = _floats(args.direction)
    if args.problem == "ls":
        u, hist = solve_lippmann_schwinger(_medium(args), args.N, direction=direction, cfg=cfg, refine=args.refine)
        if args.format == "json":
            with open(_out_path(args, "field.json"), "w") as fh:
                json.dump({"re": u.samples.real.tolist(), "im": u.samples.imag.tolist()}, fh)
        else:
            io.write_field_csv(_out_path(args, "field.csv"), u.samples)
        io.write_binary(_out_path(args, "field.bin"), u.samples)
    else:
        curves = _curves(args.curves)
        psi, hist = solve_bie(curves, args.k, args.N, direction=direction, cfg=cfg)
        theta = 2.0 * np.pi * np.arange(args.angles) / args.angles
        ff = far_field(curves, psi, args.k, angles_to_directions(theta))
        rows = [[float(t), float(v.real), float(v.imag), float(abs(v))] for t, v in zip(theta, ff)]
        io.write_table_csv(_out_path(args, "far_field.csv"), ["angle", "re", "im", "abs"], rows)
        for j, p in enumerate(psi):
            io.write_field_csv(_out_path(args, f"density_{j}.csv"), p)
    _history_csv(_out_path(args, "residuals.csv"), hist)
    print(f"GMRES iterations: {len(hist) - 1}, final relative residual {hist[-1]:.3e}")
    return 0


SPECFUN = {
    "A": lambda a, x: specfun.a_fun(a.m, x),
    "L": lambda a, x: specfun.l_fun(a.m, x),
    "M": lambda a, x: specfun.m_fun(a.mu, a.m, x),
    "Si": lambda a, x: specfun.sine_integral(x),
    "IJ0": lambda a, x: specfun.j0_integral(x),
    "Ci": lambda a, x: specfun.gen_cosine_integral(a.mu, x),
}


def cmd_specfun(args):
    x = np.array(_floats(args.rho))
    vals = np.atleast_1d(SPECFUN[args.fn](args, x))
    for xi, v in zip(x, vals):
        print(f"{xi:.17g},{v:.17g}")
    return 0


def cmd_oracle(args):
    if args.kind == "gaussian":
        r = np.array(_floats(args.r))
        for ri, v in zip(r, np.atleast_1d(oracles.exact_gaussian_potential(args.m, args.n, r))):
            print(f"{ri:.17g},{v:.17g}")
    else:
        k = _complex(args.k)
        fact = static_kernel(args.n) if k == 0 else helmholtz(args.n, k)
        v = oracles.radial_origin_potential(fact.kernel, lambda r: np.exp(-((r / 0.5) ** 2)), args.m, args.rmax)
        print(f"{v.real:.17g},{v.imag:.17g}")
    return 0


def _grid_args(p):
    p.add_argument("--m", type=int, default=1)
    p.add_argument("--N", type=int, default=20)
    p.add_argument("--chi", default="6", help="scalar or row-major m*m comma list")
    p.add_argument("--R", type=float, default=None, help="ball radius (default: largest inscribed)")


def build_parser():
    parser = argparse.ArgumentParser(prog="singquad", description=__doc__)
    parser.add_argument("--config", help="JSON file whose keys mirror the long flags")
    sub = parser.add_subparsers(dest="command", required=True)
    leaves = {}

    p = sub.add_parser("suite", help="run a convergence suite")
    p.add_argument("name", choices=sorted(SUITES))
    p.add_argument("--out-dir", default=None)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--refine", type=int, default=None)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_suite)
    leaves["suite"] = p

    p = sub.add_parser("weights", help="build and dump correction weights")
    wsub = p.add_subparsers(dest="action", required=True)
    for action in ("build", "spectrum", "phihat"):
        q = wsub.add_parser(action)
        _grid_args(q)
        q.add_argument("--out", required=True)
        if action == "phihat":
            g = q.add_mutually_exclusive_group(required=True)
            g.add_argument("--nu", type=float)
            g.add_argument("--log", action="store_true")
        else:
            q.add_argument("--n", type=int, default=None, help="kernel dimension (default m + 1)")
            q.add_argument("--k", default="0", help="wavenumber, complex allowed (e.g. 20j)")
            q.add_argument("--refine", type=int, default=1)
        q.set_defaults(func=cmd_weights)
        leaves[f"weights {action}"] = q

    p = sub.add_parser("scatter", help="scattering drivers")
    ssub = p.add_subparsers(dest="problem", required=True)
    for problem in ("ls", "bie"):
        q = ssub.add_parser(problem)
        q.add_argument("--k", type=float, default=5 * np.pi)
        q.add_argument("--N", type=int, default=160)
        q.add_argument("--out-dir", default=".")
        q.add_argument("--format", choices=("csv", "json"), default="csv")
        q.add_argument("--tol", type=float, default=1e-12)
        if problem == "ls":
            q.add_argument("--domain", type=float, default=6.0, help="half-width L of [-L, L]^2")
            q.add_argument("--medium", default="builtin", help="'builtin' or a JSON file")
            q.add_argument("--direction", default="1,0")
            q.add_argument("--refine", type=int, default=1)
            q.add_argument("--restart", type=int, default=50)
        else:
            q.add_argument("--curves", default=None, help="JSON list of {type, center}")
            q.add_argument("--direction", default=f"{1 / np.sqrt(2)},{-1 / np.sqrt(2)}")
            q.add_argument("--angles", type=int, default=360)
            q.add_argument("--restart", type=int, default=100)
        q.set_defaults(func=cmd_scatter)
        leaves[f"scatter {problem}"] = q

    p = sub.add_parser("specfun", help="evaluate the auxiliary special functions")
    fsub = p.add_subparsers(dest="action", required=True)
    q = fsub.add_parser("eval")
    q.add_argument("--fn", choices=sorted(SPECFUN), required=True)
    q.add_argument("--m", type=int, default=1)
    q.add_argument("--mu", type=float, default=1.0)
    q.add_argument("--rho", required=True, help="comma-separated arguments")
    q.set_defaults(func=cmd_specfun)
    leaves["specfun eval"] = q

    p = sub.add_parser("oracle", help="reference values")
    osub = p.add_subparsers(dest="kind", required=True)
    q = osub.add_parser("gaussian", help="exact K0_n * f_G on R^m")
    q.add_argument("--m", type=int, required=True)
    q.add_argument("--n", type=int, required=True)
    q.add_argument("--r", required=True)
    q.set_defaults(func=cmd_oracle)
    leaves["oracle gaussian"] = q
    q = osub.add_parser("origin", help="adaptive (K_n * f_G)(0) on R^m")
    q.add_argument("--m", type=int, required=True)
    q.add_argument("--n", type=int, required=True)
    q.add_argument("--k", default="0")
    q.add_argument("--rmax", type=float, default=6.0)
    q.set_defaults(func=cmd_oracle)
    leaves["oracle origin"] = q
    return parser, leaves


def _leaf_key(argv, leaves):
    words = [a for a in argv if not a.startswith("-")]
    for n in (2, 1):
        key = " ".join(words[:n])
        if key in leaves:
            return key
    return None


def main(argv=None):
    argv = list(sys.argv[1:] if argv is None else argv)
    parser, leaves = build_parser()
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("--config")
    known, rest = pre.parse_known_args(argv)
    if known.config:
        with open(known.config) as fh:
            cfg = {k.replace("-", "_"): v for k, v in json.load(fh).items()}
        key = _leaf_key(rest, leaves)
        if key is not None:
            leaves[key].set_defaults(**cfg)
    args = parser.parse_args(rest)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
