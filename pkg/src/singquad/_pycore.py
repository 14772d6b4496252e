"""Pure numpy fallback for the compiled kernels in ``_core.pyx``.

Both modules expose the same functions with the same signatures; ``_backend``
picks one at import time.
"""

import numpy as np

MAX_TERMS = 40
TERM_RTOL = 1e-17


def _hyp_series(p, x, num, den0):
    # sum_l c_l d_l with c_0 = 1, c_l = c_{l-1} (-x) / (l (l - 1 + p))
    # and d_l = num / (den0 + 2 l), or d_l = 1 when num == 0.
    x = np.asarray(x, dtype=float)
    c = np.ones_like(x)
    if num == 0.0:
        total = c.copy()
    else:
        total = c * (num / den0)
    active = np.ones(x.shape, dtype=bool)
    for l in range(1, MAX_TERMS):
        c = c * (-x) / (l * (l - 1 + p))
        term = c if num == 0.0 else c * (num / (den0 + 2 * l))
        total = np.where(active, total + term, total)
        active &= np.abs(term) >= TERM_RTOL * np.abs(total)
        if not active.any():
            break
    return total


def a_series(m, t):
    """Power series of A_m(t) in (t/2)^2."""
    t = np.asarray(t, dtype=float)
    return _hyp_series(0.5 * m, 0.25 * t * t, 0.0, 0.0)


def l_series(m, rho):
    """Power series of L_m(rho) = int_0^1 t^(m-1) A_(m+2)(rho t) dt."""
    rho = np.asarray(rho, dtype=float)
    return _hyp_series(0.5 * m + 1.0, 0.25 * rho * rho, 1.0, float(m))


def m_series(mu, m, rho):
    """Power series of M^(mu)_m(rho) = int_0^1 m t^(mu-1) A_m(rho t) dt."""
    rho = np.asarray(rho, dtype=float)
    return _hyp_series(0.5 * m, 0.25 * rho * rho, float(m), float(mu))


def circular_convolve(weights, source, out_shape):
    """Direct circular convolution u[j] = sum_l W[j - l] f[l] at j < out_shape.

    ``weights`` and ``source`` are in FFT storage order (index = offset mod
    size) with identical shapes; only the leading ``out_shape`` block of the
    result is produced.
    """
    weights = np.asarray(weights, dtype=complex)
    source = np.asarray(source, dtype=complex)
    shape = weights.shape
    out = np.zeros(out_shape, dtype=complex)
    nz = np.argwhere(source != 0)
    grids = np.meshgrid(*[np.arange(n) for n in out_shape], indexing="ij")
    for idx in nz:
        shifted = tuple((g - i) % n for g, i, n in zip(grids, idx, shape))
        out += weights[shifted] * source[tuple(idx)]
    return out
