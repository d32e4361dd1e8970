"""POVM measurements: validation, outcomes, the discarded-outcome channel and expected spectra."""
from dataclasses import dataclass
from typing import NamedTuple, Optional

import numpy as np

from .config import resolve
from .errors import DimensionError, PovmError
from .numkernel import as_matrix, random_unitary
from .states import DensityMatrix, Spectrum, entropy, operator_spectrum, trusted_state, validate_state


class BistochasticFlag(NamedTuple):
    is_bistochastic: bool
    deviation: float


@dataclass(frozen=True, eq=False)
class Povm:
    """Family ``{f_k}`` with ``sum_k f_k* f_k = I``; build with :func:`validate_povm`."""

    operators: tuple
    completeness_residual: float = 0.0
    bistochastic: BistochasticFlag = BistochasticFlag(False, float("inf"))

    @property
    def dim(self):
        return self.operators[0].shape[0]

    def __len__(self):
        return len(self.operators)

    def __iter__(self):
        return iter(self.operators)


@dataclass(frozen=True, eq=False)
class MeasurementOutcome:
    index: int
    probability: float
    posterior: Optional[DensityMatrix]


def _residuals(ops):
    eye = np.eye(ops[0].shape[0])
    first = sum(f.conj().T @ f for f in ops)
    second = sum(f @ f.conj().T for f in ops)
    return float(np.abs(first - eye).max()), float(np.abs(second - eye).max())


def validate_povm(ops, cfg=None):
    """Check completeness and report bi-stochasticity.

    Returns ``(Povm, BistochasticFlag)``. Raises :class:`PovmError` carrying
    the completeness residual when ``sum_k f_k* f_k`` is not the identity.
    """
    cfg = resolve(cfg)
    if isinstance(ops, Povm):
        return ops, ops.bistochastic
    ops = [np.array(as_matrix(f)) for f in ops]
    if not ops:
        raise DimensionError("a POVM needs at least one operator")
    dim = ops[0].shape[0]
    for k, f in enumerate(ops):
        if f.shape != (dim, dim):
            raise DimensionError(f"operator {k} has shape {f.shape}, expected {(dim, dim)}")
    if dim > cfg.dim_cap:
        raise DimensionError(f"dimension {dim} exceeds cap {cfg.dim_cap}")
    complete, bistoch = _residuals(ops)
    if complete > cfg.tol_povm:
        raise PovmError(
            f"operators are not complete (residual {complete:.3e})",
            [{"invariant": "completeness", "deviation": complete}],
        )
    for f in ops:
        f.setflags(write=False)
    flag = BistochasticFlag(bistoch <= cfg.tol_povm, bistoch)
    return Povm(tuple(ops), complete, flag), flag


def povm(ops, cfg=None):
    return validate_povm(ops, cfg)[0]


def _check(p, s, cfg):
    p = povm(p, cfg)
    s = validate_state(s, cfg)
    if p.dim != s.dim:
        raise DimensionError(f"POVM acts on dimension {p.dim}, state has dimension {s.dim}")
    return p, s


def _index(p, k):
    if not 0 <= k < len(p):
        raise IndexError(f"outcome {k} out of range for {len(p)} operators")


def branch_operators(p, s, cfg=None):
    """Unnormalized branch operators ``f_k s f_k*`` for k = 0..m-1."""
    p, s = _check(p, s, cfg)
    return [f @ s.matrix @ f.conj().T for f in p]


def outcome_probability(p, s, k, cfg=None):
    cfg = resolve(cfg)
    p, s = _check(p, s, cfg)
    _index(p, k)
    f = p.operators[k]
    return float(np.clip(np.trace(f @ s.matrix @ f.conj().T).real, 0.0, 1.0))


def outcome_probabilities(p, s, cfg=None):
    return np.array([min(max(np.trace(b).real, 0.0), 1.0) for b in branch_operators(p, s, cfg)])


def posterior_state(p, s, k, cfg=None):
    """Outcome ``k``: its probability and, when it can occur, the post-measurement state."""
    cfg = resolve(cfg)
    p, s = _check(p, s, cfg)
    _index(p, k)
    f = p.operators[k]
    branch = f @ s.matrix @ f.conj().T
    prob = float(np.clip(np.trace(branch).real, 0.0, 1.0))
    if prob <= cfg.tol_prob:
        return MeasurementOutcome(k, prob, None)
    return MeasurementOutcome(k, prob, trusted_state(branch / prob))


def measure(p, s, cfg=None):
    p = povm(p, cfg)
    return [posterior_state(p, s, k, cfg) for k in range(len(p))]


def apply_channel(p, s, cfg=None):
    """State after measuring and discarding the outcome: ``sum_k f_k s f_k*``."""
    out = sum(branch_operators(p, s, cfg))
    return trusted_state(out, normalize=False)


def expected_spectrum(p, s, cfg=None):
    """Componentwise sum of the sorted spectra of the unnormalized branches."""
    cfg = resolve(cfg)
    total = None
    for b in branch_operators(p, s, cfg):
        sp = operator_spectrum(0.5 * (b + b.conj().T), cfg).values
        total = sp if total is None else total + sp
    return Spectrum(total)


def entropy_pair(p, s, cfg=None):
    """``(S1, S2)``: entropy of the expected spectrum and expected entropy of the posteriors."""
    cfg = resolve(cfg)
    s1 = entropy(expected_spectrum(p, s, cfg))
    s2 = 0.0
    for out in measure(p, s, cfg):
        if out.posterior is not None:
            s2 += out.probability * entropy(operator_spectrum(out.posterior.matrix, cfg))
    return s1, s2


def projective_povm(dim):
    """Computational-basis projectors."""
    ops = []
    for i in range(dim):
        e = np.zeros((dim, dim), dtype=np.complex128)
        e[i, i] = 1.0
        ops.append(e)
    return povm(ops)


def random_povm(dim, m, seed):
    """Slice a random (m*dim) x dim isometry into ``m`` blocks."""
    rng = np.random.default_rng(seed)
    g = rng.standard_normal((m * dim, dim)) + 1j * rng.standard_normal((m * dim, dim))
    q, _ = np.linalg.qr(g)
    return povm([q[k * dim:(k + 1) * dim] for k in range(m)])


def random_bistochastic_povm(dim, m, seed):
    """Unitary mixture ``{sqrt(p_k) U_k}`` with Dirichlet weights and Haar unitaries."""
    rng = np.random.default_rng(seed)
    w = rng.dirichlet(np.ones(m))
    return povm([np.sqrt(wk) * random_unitary(dim, rng) for wk in w])
