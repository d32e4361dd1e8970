"""n-party tensor spaces, single-agent partial traces and lifted local measurements.

Agents are numbered from 1 in factor order; agent 1 is the conventional
"Alice". Outcome indices stay 0-based as everywhere else.
"""
from dataclasses import dataclass
from math import prod

import numpy as np

from . import kernels
from .config import resolve
from .errors import DimensionError
from .measurement import Povm, validate_povm
from .states import DensityMatrix, Spectrum, operator_spectrum, trusted_state, validate_state


@dataclass(frozen=True)
class TensorSpace:
    factor_dims: tuple

    def __post_init__(self):
        dims = tuple(int(d) for d in self.factor_dims)
        if not dims or any(d < 1 for d in dims):
            raise DimensionError(f"factor dimensions must be positive, got {self.factor_dims}")
        object.__setattr__(self, "factor_dims", dims)

    @property
    def n(self):
        return len(self.factor_dims)

    @property
    def total(self):
        return prod(self.factor_dims)

    def check(self, cfg=None):
        cfg = resolve(cfg)
        if self.total > cfg.dim_cap:
            raise DimensionError(f"total dimension {self.total} exceeds cap {cfg.dim_cap}")
        return self

    def agent_dim(self, agent):
        return self.factor_dims[self._index(agent)]

    def _index(self, agent):
        if not 1 <= agent <= self.n:
            raise IndexError(f"agent {agent} out of range 1..{self.n}")
        return agent - 1

    def split(self, agent):
        """``(left, d, right)`` dimensions around the agent's factor."""
        i = self._index(agent)
        return prod(self.factor_dims[:i]), self.factor_dims[i], prod(self.factor_dims[i + 1:])

    def embed(self, op, agent):
        """``id_left ⊗ op ⊗ id_right`` as a dense matrix."""
        left, d, right = self.split(agent)
        op = np.asarray(op, dtype=np.complex128)
        if op.shape != (d, d):
            raise DimensionError(f"operator shape {op.shape} does not match factor {agent} of dimension {d}")
        return np.kron(np.kron(np.eye(left), op), np.eye(right))


@dataclass(frozen=True, eq=False)
class MultipartyState:
    space: TensorSpace
    state: DensityMatrix

    @property
    def matrix(self):
        return self.state.matrix


def multiparty_state(factors, m, cfg=None):
    space = factors if isinstance(factors, TensorSpace) else TensorSpace(tuple(factors))
    space.check(cfg)
    s = validate_state(m, cfg)
    if s.dim != space.total:
        raise DimensionError(f"state dimension {s.dim} != product of factors {space.total}")
    return MultipartyState(space, s)


@dataclass(frozen=True, eq=False)
class LocalPovm:
    agent: int
    povm: Povm


def local_povm(agent, ops, cfg=None):
    return LocalPovm(int(agent), validate_povm(ops, cfg)[0])


def _as_ms(ms):
    if not isinstance(ms, MultipartyState):
        raise TypeError("expected a MultipartyState")
    return ms


def reduce_operator(m, space, keep):
    """Partial trace of any operator on the space down to factor ``keep``."""
    left, d, right = space.split(keep)
    return kernels.partial_trace_keep(np.ascontiguousarray(m, dtype=np.complex128), left, d, right)


def partial_trace(ms, keep):
    """Local state of agent ``keep``: trace over every other factor."""
    ms = _as_ms(ms)
    return trusted_state(reduce_operator(ms.matrix, ms.space, keep), normalize=False)


def lift(lp, space, cfg=None):
    """Lift a local family to the whole space, acting as identity on the other factors."""
    space = space if isinstance(space, TensorSpace) else TensorSpace(tuple(space))
    d = space.agent_dim(lp.agent)
    if lp.povm.dim != d:
        raise DimensionError(f"local POVM has dimension {lp.povm.dim}, agent {lp.agent} has {d}")
    return validate_povm([space.embed(f, lp.agent) for f in lp.povm], cfg)[0]


def _lifted(ms, lp, cfg):
    ms = _as_ms(ms)
    return ms, lift(lp, ms.space, cfg)


def local_consistency(ms, lp, k, cfg=None):
    """Check ``Tr_{G_a}(g_k s g_k*) == f_k Tr_{G_a}(s) f_k*`` for the measuring agent ``a``."""
    cfg = resolve(cfg)
    ms, g = _lifted(ms, lp, cfg)
    gk = g.operators[k]
    lhs = reduce_operator(gk @ ms.matrix @ gk.conj().T, ms.space, lp.agent)
    f = lp.povm.operators[k]
    rhs = f @ reduce_operator(ms.matrix, ms.space, lp.agent) @ f.conj().T
    return bool(np.abs(lhs - rhs).max() <= cfg.tol_recon)


def _observer(lp, observer):
    if observer == lp.agent:
        raise ValueError("observer must differ from the measuring agent; use the measurement module instead")


def bob_expected_spectrum(ms, lp, observer, cfg=None):
    """Sum over outcomes of the observer's unnormalized local branch spectra."""
    cfg = resolve(cfg)
    _observer(lp, observer)
    ms, g = _lifted(ms, lp, cfg)
    total = np.zeros(ms.space.agent_dim(observer))
    for gk in g:
        local = reduce_operator(gk @ ms.matrix @ gk.conj().T, ms.space, observer)
        total = total + operator_spectrum(0.5 * (local + local.conj().T), cfg).values
    return Spectrum(total)


def bob_invariance(ms, lp, observer, cfg=None):
    """Max-abs change of the observer's local state under the discarded-outcome channel."""
    cfg = resolve(cfg)
    _observer(lp, observer)
    ms, g = _lifted(ms, lp, cfg)
    out = sum(gk @ ms.matrix @ gk.conj().T for gk in g)
    after = reduce_operator(out, ms.space, observer)
    before = reduce_operator(ms.matrix, ms.space, observer)
    return float(np.abs(after - before).max())


def product_state(*states):
    """Tensor product of local states as a :class:`MultipartyState`."""
    mats = [validate_state(s).matrix for s in states]
    m = mats[0]
    for x in mats[1:]:
        m = np.kron(m, x)
    return MultipartyState(TensorSpace(tuple(x.shape[0] for x in mats)), trusted_state(m))


def bell_state():
    """``(|00> + |11>)/sqrt(2)`` as a two-qubit projector."""
    v = np.zeros(4, dtype=np.complex128)
    v[0] = v[3] = 1 / np.sqrt(2)
    return MultipartyState(TensorSpace((2, 2)), trusted_state(np.outer(v, v.conj())))
