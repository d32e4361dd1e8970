"""Density matrices, spectra and entropy."""
from dataclasses import dataclass

import numpy as np

from .config import resolve
from .errors import DimensionError, StateError
from .numkernel import as_matrix, eigvalsh_sorted, hermiticity_deviation


def _frozen(a):
    a = np.array(a)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """Hermitian, positive semidefinite, unit-trace matrix.

    Build through :func:`validate_state`; the constructor itself does not check.
    """

    matrix: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "matrix", _frozen(self.matrix))

    @property
    def dim(self):
        return self.matrix.shape[0]

    def __array__(self, dtype=None, copy=None):
        return self.matrix if dtype is None else self.matrix.astype(dtype)


@dataclass(frozen=True, eq=False)
class Spectrum:
    """Non-increasing vector of non-negative reals."""

    values: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "values", _frozen(np.asarray(self.values, dtype=float)))

    def __len__(self):
        return self.values.shape[0]

    def __array__(self, dtype=None, copy=None):
        return self.values if dtype is None else self.values.astype(dtype)

    def __add__(self, other):
        return Spectrum(self.values + np.asarray(other, dtype=float))

    def total(self):
        return float(self.values.sum())


def make_spectrum(values, cfg=None):
    """Sort non-increasing and clamp round-off negatives to zero.

    Values below ``-tol_psd`` are rejected.
    """
    cfg = resolve(cfg)
    v = np.sort(np.asarray(values, dtype=float))[::-1]
    if v.size and v[-1] < -cfg.tol_psd:
        raise StateError(
            f"negative eigenvalue {v[-1]:.3e}",
            [{"invariant": "psd", "deviation": float(-v[-1])}],
        )
    return Spectrum(np.maximum(v, 0.0))


def operator_spectrum(m, cfg=None):
    """Spectrum of a Hermitian PSD operator of any trace."""
    return make_spectrum(eigvalsh_sorted(np.asarray(m)), cfg)


def diagnose_state(m, cfg=None):
    """Return one diagnostic record per failed density-matrix invariant."""
    cfg = resolve(cfg)
    m = as_matrix(m)
    if m.shape[0] != m.shape[1]:
        raise DimensionError(f"state must be square, got shape {m.shape}")
    if m.shape[0] > cfg.dim_cap:
        raise DimensionError(f"dimension {m.shape[0]} exceeds cap {cfg.dim_cap}")
    out = []
    herm = hermiticity_deviation(m)
    if herm > cfg.tol_herm:
        out.append({"invariant": "hermitian", "deviation": herm})
        return out
    lowest = float(eigvalsh_sorted(0.5 * (m + m.conj().T))[-1])
    if lowest < -cfg.tol_psd:
        out.append({"invariant": "psd", "deviation": -lowest})
    tr = abs(np.trace(m) - 1.0)
    if tr > cfg.tol_trace:
        out.append({"invariant": "trace", "deviation": float(tr)})
    return out


def validate_state(m, cfg=None):
    """Check ``m`` is a state and return it as a :class:`DensityMatrix`.

    Raises :class:`StateError` whose ``diagnostics`` name every failed
    invariant (``hermitian``, ``psd``, ``trace``).
    """
    if isinstance(m, DensityMatrix):
        return m
    diags = diagnose_state(m, cfg)
    if diags:
        names = ", ".join(f"{d['invariant']} ({d['deviation']:.3e})" for d in diags)
        raise StateError(f"not a density matrix: {names}", diags)
    m = as_matrix(m)
    return DensityMatrix(0.5 * (m + m.conj().T))


def trusted_state(m, normalize=True):
    """Wrap an operator known to be a state up to round-off; hermitize and optionally renormalize."""
    m = np.asarray(m, dtype=np.complex128)
    m = 0.5 * (m + m.conj().T)
    return DensityMatrix(m / np.trace(m).real if normalize else m)


def spectrum(s, cfg=None):
    return operator_spectrum(validate_state(s, cfg).matrix, cfg)


def entropy(sp):
    """Von Neumann entropy in bits of a spectrum (or any probability vector)."""
    p = np.asarray(sp, dtype=float)
    p = p[p > 0]
    return float(max(0.0, -np.sum(p * np.log2(p))))


def state_entropy(s, cfg=None):
    return entropy(spectrum(s, cfg))


def random_state(dim, rank, seed):
    """``G G* / Tr(G G*)`` with ``G`` a dim x rank standard complex Gaussian matrix.

    ``seed`` is an int or a ``numpy.random.Generator`` (PCG64 via
    ``default_rng``); the same seed always yields the same matrix.
    """
    if not 1 <= rank <= dim:
        raise ValueError(f"rank must be in [1, {dim}], got {rank}")
    rng = np.random.default_rng(seed)
    g = (rng.standard_normal((dim, rank)) + 1j * rng.standard_normal((dim, rank))) / np.sqrt(2)
    rho = g @ g.conj().T
    return trusted_state(rho)


def pure_state(vec):
    v = np.asarray(vec, dtype=np.complex128).ravel()
    v = v / np.linalg.norm(v)
    return trusted_state(np.outer(v, v.conj()))


def maximally_mixed(dim):
    return DensityMatrix(np.eye(dim, dtype=np.complex128) / dim)
