"""Pure-Python/numpy implementations of the hot kernels.

Mirrors ``_ckernels.pyx`` signature for signature; used when the compiled
extension is unavailable and as the reference in backend-agreement tests.
"""
import numpy as np


def prefix_slack(a, b, tol):
    """Return ``(min_slack, first_violation)`` for prefix sums of ``a`` over ``b``.

    ``first_violation`` is the first index whose prefix slack is below
    ``-tol``, or -1 when there is none.
    """
    diff = np.cumsum(np.asarray(a, dtype=float)) - np.cumsum(np.asarray(b, dtype=float))
    if diff.size == 0:
        return 0.0, -1
    bad = np.flatnonzero(diff < -tol)
    return float(diff.min()), int(bad[0]) if bad.size else -1


def hlp_transfer(lam, mu, eps):
    """T-transform chain carrying sorted ``lam`` onto sorted ``mu``.

    Returns ``(B, steps)`` with ``B @ lam ~= mu``.
    """
    x = np.array(lam, dtype=float)
    y = np.asarray(mu, dtype=float)
    n = x.shape[0]
    B = np.eye(n)
    steps = 0
    for _ in range(2 * n):
        j = -1
        for i in range(n - 1, -1, -1):
            if x[i] - y[i] > eps:
                j = i
                break
        if j < 0:
            break
        k = -1
        for i in range(j + 1, n):
            if y[i] - x[i] > eps:
                k = i
                break
        if k < 0:
            break
        delta = min(x[j] - y[j], y[k] - x[k])
        gap = x[j] - x[k]
        t = min(1.0, max(0.0, 1.0 - delta / gap))
        xj, xk = x[j], x[k]
        x[j] = t * xj + (1.0 - t) * xk
        x[k] = (1.0 - t) * xj + t * xk
        rj = B[j].copy()
        rk = B[k].copy()
        B[j] = t * rj + (1.0 - t) * rk
        B[k] = (1.0 - t) * rj + t * rk
        steps += 1
    return B, steps


def _augment(row, support, match_col, seen):
    for col in np.flatnonzero(support[row]):
        if seen[col]:
            continue
        seen[col] = True
        if match_col[col] < 0 or _augment(match_col[col], support, match_col, seen):
            match_col[col] = row
            return True
    return False


def perfect_matching(mat, tol):
    """Perfect matching on entries ``> tol`` via augmenting paths.

    Returns ``perm`` with ``perm[row] = col``, or None when none exists.
    """
    mat = np.asarray(mat, dtype=float)
    n = mat.shape[0]
    support = mat > tol
    match_col = np.full(n, -1, dtype=np.intp)
    for row in range(n):
        seen = np.zeros(n, dtype=bool)
        if not _augment(row, support, match_col, seen):
            return None
    perm = np.empty(n, dtype=np.intp)
    perm[match_col] = np.arange(n)
    return perm


def birkhoff_greedy(mat, tol):
    """Peel permutation matrices off ``mat`` until its mass drops below ``tol``.

    Returns ``(weights, perms)`` as lists.
    """
    D = np.array(mat, dtype=float)
    n = D.shape[0]
    rows = np.arange(n)
    weights, perms = [], []
    D[D <= tol] = 0.0
    while D.max(initial=0.0) > tol:
        perm = perfect_matching(D, tol)
        if perm is None:
            break
        w = D[rows, perm].min()
        D[rows, perm] -= w
        D[D <= tol] = 0.0
        weights.append(float(w))
        perms.append(perm)
    return weights, perms


def partial_trace_keep(rho, left, d, right):
    """Trace out everything except the middle factor of a left*d*right split."""
    r = np.asarray(rho).reshape(left, d, right, left, d, right)
    return np.ascontiguousarray(np.einsum("iajibj->ab", r))
