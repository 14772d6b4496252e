"""Compare the compiled core against the numpy fallback.

Run with ``python benchmarks/bench_core.py``.  Each kernel is timed on the
same inputs with both backends; outputs are checked to agree.
"""

import argparse
import timeit

import numpy as np

from singquad import _pycore
from singquad._backend import COMPILED, core


def cases(rng):
    t = rng.uniform(0.0, 6.0, 200_000)
    W = rng.standard_normal((64, 64)) + 1j * rng.standard_normal((64, 64))
    F = np.zeros((64, 64), dtype=complex)
    F[:33, :33] = rng.standard_normal((33, 33))
    return [
        ("a_series m=3, 2e5 points", lambda b: b.a_series(3.0, t)),
        ("l_series m=2, 2e5 points", lambda b: b.l_series(2.0, t)),
        ("m_series mu=0.5 m=3, 2e5 points", lambda b: b.m_series(0.5, 3.0, t)),
        ("circular_convolve 64x64 -> 33x33", lambda b: b.circular_convolve(W, F, (33, 33))),
    ]


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--repeat", type=int, default=3)
    p.add_argument("--seed", type=int, default=0)
    args = p.parse_args(argv)
    if not COMPILED:
        print("compiled core not available; build it with `pip install -e . --no-build-isolation`")
        return 1
    rng = np.random.default_rng(args.seed)
    print(f"{'kernel':<36} {'compiled (s)':>13} {'fallback (s)':>13} {'speedup':>8} {'max diff':>10}")
    for name, fn in cases(rng):
        diff = np.max(np.abs(np.asarray(fn(core)) - np.asarray(fn(_pycore))))
        tc = min(timeit.repeat(lambda: fn(core), number=1, repeat=args.repeat))
        tp = min(timeit.repeat(lambda: fn(_pycore), number=1, repeat=args.repeat))
        print(f"{name:<36} {tc:>13.4f} {tp:>13.4f} {tp / tc:>8.1f} {diff:>10.1e}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
