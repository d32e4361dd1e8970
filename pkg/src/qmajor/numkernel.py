"""Dense complex matrix helpers and the Hermitian eigensolver.

Matrices are plain ``numpy`` arrays of dtype complex128. Every function is
pure: inputs are never modified.
"""
from typing import NamedTuple

import numpy as np

from .config import resolve
from .errors import DimensionError, InvariantError


class HermitianEigenSystem(NamedTuple):
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


def as_matrix(a):
    """Coerce to a finite 2-D complex128 array."""
    m = np.asarray(a, dtype=np.complex128)
    if m.ndim != 2 or 0 in m.shape:
        raise DimensionError(f"expected a non-empty 2-D matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise InvariantError("matrix has non-finite entries", [{"invariant": "finite", "deviation": float("inf")}])
    return m


def _square(m):
    if m.shape[0] != m.shape[1]:
        raise DimensionError(f"expected a square matrix, got shape {m.shape}")
    return m


def matmul(a, b):
    a, b = as_matrix(a), as_matrix(b)
    if a.shape[1] != b.shape[0]:
        raise DimensionError(f"cannot multiply {a.shape} by {b.shape}")
    return a @ b


def adjoint(a):
    return as_matrix(a).conj().T


def kron(a, b):
    return np.kron(as_matrix(a), as_matrix(b))


def trace(a):
    return complex(np.trace(_square(as_matrix(a))))


def hermiticity_deviation(a):
    """Max-abs entry of ``a - a*``."""
    a = as_matrix(a)
    return float(np.max(np.abs(a - a.conj().T)))


def hermitian_eig(a, cfg=None):
    """Eigendecomposition of a Hermitian matrix, eigenvalues non-increasing.

    Each eigenvector's largest-magnitude component (first one on ties) is made
    real positive, so the output is deterministic for a given input.
    """
    cfg = resolve(cfg)
    a = _square(as_matrix(a))
    dev = hermiticity_deviation(a)
    if dev > cfg.tol_herm:
        raise InvariantError(
            f"matrix is not Hermitian (deviation {dev:.3e})",
            [{"invariant": "hermitian", "deviation": dev}],
        )
    w, v = np.linalg.eigh(0.5 * (a + a.conj().T))
    # eigh is ascending; reverse with a stable order on ties
    order = np.argsort(-w, kind="stable")
    w, v = w[order], v[:, order]
    pivots = np.argmax(np.abs(v), axis=0)
    phases = v[pivots, np.arange(v.shape[1])]
    v = v * (np.abs(phases) / phases)
    return HermitianEigenSystem(w, v)


def eigvalsh_sorted(a):
    """Non-increasing eigenvalues without validation (caller guarantees Hermitian)."""
    return np.linalg.eigvalsh(a)[::-1]


def random_unitary(dim, rng):
    """Haar-random unitary via QR of a complex Ginibre matrix with phase correction."""
    z = (rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    d = np.diag(r)
    return q * (d / np.abs(d))


def random_hermitian(dim, rng):
    z = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    return (z + z.conj().T) / 2
