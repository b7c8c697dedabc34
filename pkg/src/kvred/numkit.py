"""Small dense numerical kernels: row orthonormalization with rank
detection, trace norm by one-sided Jacobi, and a seeded power iteration
for the spectral norm.  Everything is deterministic given (input, seed)
and aimed at desk-scale dimensions.
"""

import numpy as np

__all__ = ["gram_schmidt_rows", "trace_norm", "spectral_norm"]


def gram_schmidt_rows(a, tol=None):
    """Orthonormal basis of the row space of ``a``.

    Modified Gram-Schmidt with one reorthogonalization pass; rows whose
    residual norm is at most ``tol`` are dropped, so the number of output
    rows is the numerical rank.  Default tolerance is 1e-9 times the
    largest row norm.
    """
    a = np.asarray(a, dtype=np.float64)
    if a.ndim != 2:
        raise ValueError("expected a matrix")
    if tol is None:
        row_norms = np.linalg.norm(a, axis=1)
        tol = 1e-9 * (row_norms.max() if row_norms.size else 1.0)
    elif tol <= 0:
        raise ValueError("tol must be positive")
    rows = []
    for r in a:
        v = r.astype(np.float64, copy=True)
        for _ in range(2):
            for b in rows:
                v -= (v @ b) * b
        nv = np.linalg.norm(v)
        if nv > tol:
            rows.append(v / nv)
    out = np.asarray(rows, dtype=np.float64)
    return out.reshape(len(rows), a.shape[1])


def trace_norm(a, max_sweeps=64, tol=1e-14):
    """Sum of singular values, computed by one-sided Jacobi.

    Column pairs are rotated in a fixed cyclic order until all pairwise
    inner products are negligible; the singular values are then the column
    norms.  Accurate to ~1e-8 relative for well-conditioned inputs up to a
    few hundred rows/columns.
    """
    a = np.asarray(a, dtype=np.float64)
    if a.ndim != 2:
        raise ValueError("expected a matrix")
    if a.size == 0:
        return 0.0
    w = a.copy() if a.shape[0] >= a.shape[1] else a.T.copy()
    k = w.shape[1]
    for _ in range(max_sweeps):
        rotated = False
        for p in range(k - 1):
            for q in range(p + 1, k):
                app = w[:, p] @ w[:, p]
                aqq = w[:, q] @ w[:, q]
                apq = w[:, p] @ w[:, q]
                scale = np.sqrt(app * aqq)
                if scale == 0.0 or abs(apq) <= tol * scale:
                    continue
                tau = (aqq - app) / (2.0 * apq)
                sign = 1.0 if tau >= 0 else -1.0
                t = sign / (abs(tau) + np.hypot(1.0, tau))
                c = 1.0 / np.hypot(1.0, t)
                s = t * c
                cp = w[:, p].copy()
                w[:, p] = c * cp - s * w[:, q]
                w[:, q] = s * cp + c * w[:, q]
                rotated = True
        if not rotated:
            break
    return float(np.linalg.norm(w, axis=0).sum())


def spectral_norm(a, iters=100, seed=0):
    """Largest singular value via power iteration on A^T A.

    Seeded random start; the returned value is a lower bound that
    converges to sigma_max as iters grows, and is deterministic given
    the seed.
    """
    a = np.asarray(a, dtype=np.float64)
    if a.ndim != 2:
        raise ValueError("expected a matrix")
    if iters < 1:
        raise ValueError("iters must be >= 1")
    if a.size == 0:
        return 0.0
    rng = np.random.default_rng(seed)
    v = rng.standard_normal(a.shape[1])
    nv = np.linalg.norm(v)
    if nv == 0.0:
        return 0.0
    v /= nv
    for _ in range(iters):
        w = a.T @ (a @ v)
        nw = np.linalg.norm(w)
        if nw == 0.0:
            return 0.0
        v = w / nw
    return float(np.linalg.norm(a @ v))
