"""Restarted GMRES with modified Gram-Schmidt and one reorthogonalisation pass."""

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class GmresConfig:
    tol: float = 1e-12
    restart: int = 100
    max_iter: int = 2000

    def __post_init__(self):
        if not self.tol > 0:
            raise ValueError("tol must be positive")
        if self.restart < 1 or self.max_iter < 1:
            raise ValueError("restart and max_iter must be positive")


class GmresError(RuntimeError):
    def __init__(self, msg, x, history):
        super().__init__(msg)
        self.x = x
        self.history = history


def _givens(a, b):
    if b == 0:
        return 1.0, 0.0
    h = np.hypot(abs(a), abs(b))
    c = abs(a) / h
    s = (a / abs(a) if a != 0 else 1.0) * np.conj(b) / h
    return c, s


def gmres(apply, rhs, cfg=None, x0=None):
    """Solve apply(x) = rhs.  Returns (x, history of relative residuals).

    ``history[0]`` is the initial relative residual; each Arnoldi step appends
    the least-squares residual estimate, and each restart the true residual.
    """
    cfg = cfg or GmresConfig()
    b = np.asarray(rhs, dtype=complex).ravel()
    shape = np.shape(rhs)
    n = b.size
    bnorm = np.linalg.norm(b)
    x = np.zeros(n, dtype=complex) if x0 is None else np.asarray(x0, dtype=complex).ravel().copy()
    history = []
    if bnorm == 0:
        return x.reshape(shape), [0.0]

    def op(v):
        return np.array(apply(v.reshape(shape).copy()), dtype=complex).ravel()

    r = b - op(x) if x0 is not None else b.copy()
    beta = np.linalg.norm(r)
    history.append(beta / bnorm)
    it = 0
    while beta / bnorm > cfg.tol:
        if it >= cfg.max_iter:
            raise GmresError(f"GMRES did not converge: residual {beta / bnorm:.3e}", x.reshape(shape), history)
        m = min(cfg.restart, cfg.max_iter - it)
        V = np.zeros((m + 1, n), dtype=complex)
        H = np.zeros((m + 1, m), dtype=complex)
        cs = np.zeros(m)
        sn = np.zeros(m, dtype=complex)
        g = np.zeros(m + 1, dtype=complex)
        g[0] = beta
        V[0] = r / beta
        j_used = 0
        for j in range(m):
            w = op(V[j])
            for _ in range(2):
                for i in range(j + 1):
                    h = np.vdot(V[i], w)
                    H[i, j] += h
                    w -= h * V[i]
            H[j + 1, j] = np.linalg.norm(w)
            if H[j + 1, j] != 0:
                V[j + 1] = w / H[j + 1, j]
            for i in range(j):
                t = cs[i] * H[i, j] + sn[i] * H[i + 1, j]
                H[i + 1, j] = -np.conj(sn[i]) * H[i, j] + cs[i] * H[i + 1, j]
                H[i, j] = t
            cs[j], sn[j] = _givens(H[j, j], H[j + 1, j])
            H[j, j] = cs[j] * H[j, j] + sn[j] * H[j + 1, j]
            H[j + 1, j] = 0.0
            g[j + 1] = -np.conj(sn[j]) * g[j]
            g[j] = cs[j] * g[j]
            it += 1
            j_used = j + 1
            history.append(abs(g[j + 1]) / bnorm)
            if abs(g[j + 1]) / bnorm <= cfg.tol or H[j, j] == 0:
                break
        y = np.linalg.solve(np.triu(H[:j_used, :j_used]), g[:j_used]) if j_used else np.zeros(0)
        x = x + y @ V[:j_used]
        r = b - op(x)
        beta = np.linalg.norm(r)
        history.append(beta / bnorm)
        if j_used == 0:
            break
    return x.reshape(shape), history
