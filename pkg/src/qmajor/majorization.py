"""Majorization order, doubly stochastic matrices and Birkhoff decomposition."""
from dataclasses import dataclass

import numpy as np

from . import kernels
from .config import resolve
from .errors import DimensionError, InvariantError, MajorizationError
from .states import spectrum, validate_state


def sorted_desc(v):
    return np.sort(np.asarray(v, dtype=float).ravel())[::-1]


def majorization_slack(a, b, cfg=None):
    """Compare prefix sums of the non-increasing rearrangements of ``a`` and ``b``.

    Returns ``(min_slack, first_violation)``; ``first_violation`` is the
    0-based index of the first prefix whose slack is below ``-tol_major``,
    or -1. Raises on length or sum mismatch.
    """
    cfg = resolve(cfg)
    a, b = sorted_desc(a), sorted_desc(b)
    if a.shape != b.shape:
        raise DimensionError(f"length mismatch: {a.size} vs {b.size}")
    gap = abs(a.sum() - b.sum())
    if gap > cfg.tol_major:
        raise MajorizationError(f"sums differ by {gap:.3e}; only equal-sum vectors are comparable")
    return kernels.prefix_slack(a, b, cfg.tol_major)


def majorize(a, b, cfg=None):
    """True iff ``a`` majorizes ``b`` (``a ⪰ b``) within ``tol_major``."""
    return majorization_slack(a, b, cfg)[1] < 0


def majorize_ops(a, b, cfg=None):
    """Majorization of two states through their spectra."""
    cfg = resolve(cfg)
    a, b = validate_state(a, cfg), validate_state(b, cfg)
    return majorize(spectrum(a, cfg), spectrum(b, cfg), cfg)


@dataclass(frozen=True, eq=False)
class DoublyStochasticMatrix:
    entries: np.ndarray

    @property
    def dim(self):
        return self.entries.shape[0]

    def __array__(self, dtype=None, copy=None):
        return self.entries if dtype is None else self.entries.astype(dtype)


def as_doubly_stochastic(m, cfg=None):
    """Validate row/column sums and clamp entries into [0, 1]."""
    cfg = resolve(cfg)
    m = np.array(m, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1] or m.size == 0:
        raise DimensionError(f"expected a square matrix, got shape {m.shape}")
    diags = []
    low = float(-m.min())
    high = float(m.max() - 1.0)
    if low > cfg.tol_ds or high > cfg.tol_ds:
        diags.append({"invariant": "range", "deviation": max(low, high)})
    rows = float(np.abs(m.sum(axis=1) - 1).max())
    cols = float(np.abs(m.sum(axis=0) - 1).max())
    if rows > cfg.tol_ds:
        diags.append({"invariant": "row_sums", "deviation": rows})
    if cols > cfg.tol_ds:
        diags.append({"invariant": "column_sums", "deviation": cols})
    if diags:
        raise InvariantError("not doubly stochastic", diags)
    out = np.clip(m, 0.0, 1.0)
    out.setflags(write=False)
    return DoublyStochasticMatrix(out)


def permutation_matrix(perm):
    """``P[i, perm[i]] = 1``, so ``(P @ x)[i] == x[perm[i]]``."""
    perm = np.asarray(perm)
    p = np.zeros((perm.size, perm.size))
    p[np.arange(perm.size), perm] = 1.0
    return p


@dataclass(frozen=True, eq=False)
class BirkhoffDecomposition:
    weights: np.ndarray
    permutations: tuple

    def __len__(self):
        return len(self.permutations)

    @property
    def dim(self):
        return len(self.permutations[0])

    def matrix(self):
        return sum(w * permutation_matrix(p) for w, p in zip(self.weights, self.permutations))


def hlp_transfer(lam, mu, cfg=None):
    """Doubly stochastic ``B`` with ``B @ lam == mu`` for ``lam ⪰ mu``.

    Built as a product of at most ``dim - 1`` T-transforms: each step picks
    the last index ``j`` where ``lam`` exceeds ``mu`` and the first ``k > j``
    where it falls short, then moves mass from ``j`` to ``k`` until one of the
    two coordinates matches.
    """
    cfg = resolve(cfg)
    lam, mu = sorted_desc(lam), sorted_desc(mu)
    slack, bad = majorization_slack(lam, mu, cfg)
    if bad >= 0:
        raise MajorizationError(f"first vector does not majorize the second (prefix {bad})", bad, slack)
    scale = max(1.0, float(np.abs(lam).max(initial=0.0)))
    B, _ = kernels.hlp_transfer(lam, mu, 1e-14 * scale)
    return as_doubly_stochastic(B, cfg)


def _caratheodory(weights, perms, bound):
    """Drop terms along null directions of the permutation vectors until ``len <= bound``."""
    weights = np.array(weights, dtype=float)
    perms = list(perms)
    while len(perms) > bound:
        M = np.stack([permutation_matrix(p).ravel() for p in perms], axis=1)
        _, _, vt = np.linalg.svd(M)
        c = vt[-1]
        if c.max() <= 0:
            c = -c
        pos = c > 1e-12
        alpha = np.min(weights[pos] / c[pos])
        weights = weights - alpha * c
        drop = int(np.flatnonzero(pos)[np.argmin(weights[pos])])
        keep = [i for i in range(len(perms)) if i != drop and weights[i] > 0]
        weights = weights[keep]
        perms = [perms[i] for i in keep]
    return weights, perms


def birkhoff(b, cfg=None):
    """Write a doubly stochastic matrix as a convex mix of at most ``(n-1)^2 + 1`` permutations."""
    cfg = resolve(cfg)
    if not isinstance(b, DoublyStochasticMatrix):
        b = as_doubly_stochastic(b, cfg)
    n = b.dim
    weights, perms = kernels.birkhoff_greedy(b.entries, cfg.tol_ds)
    if not perms:
        raise InvariantError("no positive-support permutation found", [{"invariant": "support", "deviation": 0.0}])
    weights, perms = _caratheodory(weights, perms, (n - 1) ** 2 + 1)
    weights = np.asarray(weights) / np.sum(weights)
    dec = BirkhoffDecomposition(weights, tuple(np.asarray(p, dtype=np.intp) for p in perms))
    resid = float(np.abs(dec.matrix() - b.entries).max())
    if resid > n * cfg.tol_ds:
        raise InvariantError(
            f"Birkhoff reconstruction residual {resid:.3e}",
            [{"invariant": "reconstruction", "deviation": resid}],
        )
    return dec


def random_doubly_stochastic(dim, terms, seed):
    """Random convex mixture of ``terms`` uniformly random permutations."""
    if terms < 1:
        raise ValueError("terms must be at least 1")
    rng = np.random.default_rng(seed)
    w = rng.dirichlet(np.ones(terms))
    m = np.zeros((dim, dim))
    for wk in w:
        m += wk * permutation_matrix(rng.permutation(dim))
    return as_doubly_stochastic(m)
