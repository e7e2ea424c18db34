"""Eigenvalues of dense real symmetric matrices.

Householder reduction to tridiagonal form followed by the implicit-shift QL
iteration (the classic ``tred2``/``tqli`` pair, eigenvalues only). The QL
sweep runs in pure Python, so this is meant for matrices up to a few hundred
rows; :func:`specdist.spectral.spectrum` uses LAPACK by default.
"""
from __future__ import annotations

import math

import numpy as np


class EigensolverError(ArithmeticError):
    """The QL iteration did not converge within the iteration cap."""


def tridiagonalize(a: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Return ``(diag, offdiag)`` of a tridiagonal matrix similar to ``a``.

    ``offdiag[i]`` couples rows ``i`` and ``i + 1`` (length n - 1).
    """
    a = np.array(a, dtype=float, copy=True)
    n = a.shape[0]
    if a.shape != (n, n):
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    off = np.zeros(max(n - 1, 0))
    for k in range(n - 2):
        x = a[k + 1:, k]
        norm = np.linalg.norm(x)
        if norm == 0.0:
            continue
        alpha = -math.copysign(norm, x[0])
        v = x.copy()
        v[0] -= alpha
        v /= np.linalg.norm(v)
        block = a[k + 1:, k + 1:]
        p = block @ v
        q = p - (v @ p) * v
        # H A H with H = I - 2 v v^T, applied as a symmetric rank-2 update
        block -= 2.0 * (np.outer(v, q) + np.outer(q, v))
        off[k] = alpha
    if n >= 2:
        off[n - 2] = a[n - 1, n - 2]
    return np.diag(a).copy(), off


def tridiagonal_ql(diag, offdiag, max_iter: int = 30) -> np.ndarray:
    """Eigenvalues of a symmetric tridiagonal matrix, sorted ascending."""
    d = [float(x) for x in diag]
    n = len(d)
    e = [float(x) for x in offdiag] + [0.0]
    if len(e) != n and n > 0:
        raise ValueError("offdiag must have length len(diag) - 1")
    eps = np.finfo(float).eps
    for l in range(n):
        iters = 0
        while True:
            m = l
            while m < n - 1:
                dd = abs(d[m]) + abs(d[m + 1])
                if abs(e[m]) <= eps * dd:
                    break
                m += 1
            if m == l:
                break
            if iters == max_iter:
                raise EigensolverError(
                    f"QL iteration did not converge for eigenvalue {l} after {max_iter} sweeps")
            iters += 1
            g = (d[l + 1] - d[l]) / (2.0 * e[l])
            r = math.hypot(g, 1.0)
            g = d[m] - d[l] + e[l] / (g + math.copysign(r, g))
            s = c = 1.0
            p = 0.0
            i = m - 1
            deflated = False
            while i >= l:
                f = s * e[i]
                b = c * e[i]
                r = math.hypot(f, g)
                e[i + 1] = r
                if r == 0.0:
                    # underflow: split here and restart
                    d[i + 1] -= p
                    e[m] = 0.0
                    deflated = True
                    break
                s = f / r
                c = g / r
                g = d[i + 1] - p
                r = (d[i] - g) * s + 2.0 * c * b
                p = s * r
                d[i + 1] = g + p
                g = c * r - b
                i -= 1
            if deflated:
                continue
            d[l] -= p
            e[l] = g
            e[m] = 0.0
    return np.sort(np.array(d))


def symmetric_eigvals(a: np.ndarray, max_iter: int = 30) -> np.ndarray:
    d, e = tridiagonalize(a)
    return tridiagonal_ql(d, e, max_iter=max_iter)
