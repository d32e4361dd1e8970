"""Sequential LOCC protocols expanded as a full outcome tree.

Classical communication is modelled by adaptivity alone: a step may choose
its payload from the outcome history of all earlier measurements, which every
agent is assumed to know.
"""
from dataclasses import dataclass, field

import numpy as np

from .config import resolve
from .errors import ProtocolError, QmajorError
from .majorization import majorization_slack
from .measurement import random_bistochastic_povm, random_povm, validate_povm
from .multiparty import MultipartyState, TensorSpace, bell_state, reduce_operator
from .numkernel import as_matrix, random_unitary
from .states import Spectrum, operator_spectrum, trusted_state

UNITARY = "unitary"
MEASUREMENT = "measurement"


@dataclass(frozen=True, eq=False)
class ProtocolStep:
    """One local operation.

    ``payload`` is a matrix (unitary step) or a list of matrices
    (measurement step). ``adaptive`` maps outcome histories (tuples of
    outcome indices) to payloads that override the default for that history.
    """

    agent: int
    kind: str
    payload: object = None
    adaptive: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in (UNITARY, MEASUREMENT):
            raise ValueError(f"unknown step kind {self.kind!r}")

    def payload_for(self, history):
        return self.adaptive.get(tuple(history), self.payload)


@dataclass(frozen=True, eq=False)
class Protocol:
    space: TensorSpace
    steps: tuple


@dataclass(frozen=True, eq=False)
class Branch:
    probability: float
    state: MultipartyState
    history: tuple


@dataclass(frozen=True, eq=False)
class BranchEnsemble:
    branches: tuple

    def __len__(self):
        return len(self.branches)

    def __iter__(self):
        return iter(self.branches)

    def total_probability(self):
        return float(sum(b.probability for b in self.branches))


def _unitary(step, history, d, index, cfg):
    u = step.payload_for(history)
    if u is None:
        raise ProtocolError(f"step {index}: no payload for history {history}", index, history)
    try:
        u = as_matrix(u)
    except QmajorError as exc:
        raise ProtocolError(f"step {index}, history {history}: {exc}", index, history) from exc
    if u.shape != (d, d):
        raise ProtocolError(f"step {index}, history {history}: unitary shape {u.shape} != {(d, d)}", index, history)
    dev = float(np.abs(u @ u.conj().T - np.eye(d)).max())
    if dev > cfg.tol_povm:
        raise ProtocolError(f"step {index}, history {history}: payload not unitary (deviation {dev:.3e})", index, history)
    return u


def _measurement(step, history, d, index, cfg):
    ops = step.payload_for(history)
    if ops is None:
        raise ProtocolError(f"step {index}: no payload for history {history}", index, history)
    try:
        p, _ = validate_povm(ops, cfg)
    except QmajorError as exc:
        raise ProtocolError(f"step {index}, history {history}: {exc}", index, history) from exc
    if p.dim != d:
        raise ProtocolError(f"step {index}, history {history}: POVM dimension {p.dim} != {d}", index, history)
    return p


def _apply_step(ensemble, space, step, index, cfg):
    try:
        d = space.agent_dim(step.agent)
    except IndexError as exc:
        raise ProtocolError(f"step {index}: {exc}", index, ()) from exc
    out = []
    for br in ensemble:
        rho = br.state.matrix
        if step.kind == UNITARY:
            g = space.embed(_unitary(step, br.history, d, index, cfg), step.agent)
            new = trusted_state(g @ rho @ g.conj().T)
            out.append(Branch(br.probability, MultipartyState(space, new), br.history))
            continue
        p = _measurement(step, br.history, d, index, cfg)
        for k, f in enumerate(p):
            g = space.embed(f, step.agent)
            op = g @ rho @ g.conj().T
            pk = float(np.trace(op).real)
            if pk <= cfg.tol_prob:
                continue
            out.append(Branch(br.probability * pk, MultipartyState(space, trusted_state(op / pk)), br.history + (k,)))
    return BranchEnsemble(tuple(out))


def _check_initial(protocol, initial):
    if not isinstance(initial, MultipartyState):
        raise TypeError("initial must be a MultipartyState")
    if initial.space.factor_dims != protocol.space.factor_dims:
        raise ProtocolError(
            f"state factors {initial.space.factor_dims} != protocol factors {protocol.space.factor_dims}"
        )


def iterate(protocol, initial, cfg=None):
    """Yield the branch ensemble before the first step and after every step."""
    cfg = resolve(cfg)
    _check_initial(protocol, initial)
    ens = BranchEnsemble((Branch(1.0, initial, ()),))
    yield ens
    for i, step in enumerate(protocol.steps):
        ens = _apply_step(ens, protocol.space, step, i, cfg)
        yield ens


def run(protocol, initial, cfg=None):
    """Full branch tree after all steps; zero-probability outcomes are pruned."""
    ens = None
    for ens in iterate(protocol, initial, cfg):
        pass
    return ens


def expected_local_spectrum(e, agent, cfg=None):
    """``sum_b Sp(p_b * Tr_{G_agent}(rho_b))`` over the branches of ``e``."""
    total = None
    for br in e:
        local = br.probability * reduce_operator(br.state.matrix, br.state.space, agent)
        sp = operator_spectrum(0.5 * (local + local.conj().T), cfg).values
        total = sp if total is None else total + sp
    return Spectrum(total)


def expected_global_spectrum(e, cfg=None):
    total = None
    for br in e:
        sp = operator_spectrum(br.probability * br.state.matrix, cfg).values
        total = sp if total is None else total + sp
    return Spectrum(total)


@dataclass
class MonotonicityReport:
    steps: list
    violations: list
    worst_slack: float

    @property
    def ok(self):
        return not self.violations

    def to_dict(self):
        return {"ok": self.ok, "worst_slack": self.worst_slack, "violations": self.violations, "steps": self.steps}


def check_monotonicity(protocol, initial, cfg=None):
    """Check each step's expected local spectra majorize the previous step's, for every agent.

    The global expected spectrum is checked too and reported with agent
    ``"global"``. A violation indicates a numerical or implementation fault.
    """
    cfg = resolve(cfg)
    agents = range(1, protocol.space.n + 1)
    steps, violations = [], []
    worst = np.inf
    prev = None
    for i, ens in enumerate(iterate(protocol, initial, cfg)):
        cur = {a: expected_local_spectrum(ens, a, cfg).values for a in agents}
        cur["global"] = expected_global_spectrum(ens, cfg).values
        steps.append({
            "step": i,
            "branches": len(ens),
            "total_probability": ens.total_probability(),
            "spectra": {str(a): v.tolist() for a, v in cur.items()},
        })
        if prev is not None:
            for a, v in cur.items():
                slack, bad = majorization_slack(v, prev[a], cfg)
                worst = min(worst, slack)
                if bad >= 0:
                    violations.append({"step": i, "agent": a, "index": bad, "slack": slack})
        prev = cur
    return MonotonicityReport(steps, violations, float(worst) if np.isfinite(worst) else 0.0)


@dataclass
class DeterministicReport:
    deterministic: bool
    reaches_target: bool
    leaf_spread: float
    target_deviation: float
    local: list

    @property
    def ok(self):
        return self.deterministic and self.reaches_target and all(x["majorizes"] for x in self.local)

    def to_dict(self):
        return {
            "ok": self.ok,
            "deterministic": self.deterministic,
            "reaches_target": self.reaches_target,
            "leaf_spread": self.leaf_spread,
            "target_deviation": self.target_deviation,
            "local": self.local,
        }


def check_deterministic_transform(protocol, initial, target, cfg=None):
    """Check that every leaf equals ``target``; if so, that each local target majorizes the local initial state."""
    cfg = resolve(cfg)
    ens = run(protocol, initial, cfg)
    leaves = [br.state.matrix for br in ens]
    spread = max((float(np.abs(x - leaves[0]).max()) for x in leaves), default=0.0)
    dev = max(float(np.abs(x - target.matrix).max()) for x in leaves)
    deterministic = spread <= cfg.tol_recon
    reaches = dev <= cfg.tol_recon
    local = []
    if deterministic and reaches:
        for a in range(1, protocol.space.n + 1):
            after = reduce_operator(target.matrix, target.space, a)
            before = reduce_operator(initial.matrix, initial.space, a)
            slack, bad = majorization_slack(
                operator_spectrum(after, cfg).values, operator_spectrum(before, cfg).values, cfg
            )
            local.append({"agent": a, "majorizes": bad < 0, "slack": slack})
    return DeterministicReport(deterministic, reaches, spread, dev, local)


def random_protocol(factors, depth, seed, adaptive=True, bistochastic_share=0.5):
    """Random protocol with independent payloads for every reachable history.

    Measurement steps use 2 or 3 outcomes; each measurement is a unitary
    mixture with probability ``bistochastic_share`` and a generic
    isometry-sliced family otherwise.
    """
    rng = np.random.default_rng(seed)
    space = TensorSpace(tuple(factors))
    histories = [()]
    steps = []
    for _ in range(depth):
        agent = int(rng.integers(1, space.n + 1))
        d = space.agent_dim(agent)
        if rng.random() < 0.5:
            make = lambda: random_unitary(d, rng)  # noqa: E731
            kind, m = UNITARY, None
        else:
            m = int(rng.integers(2, 4))
            bis = rng.random() < bistochastic_share
            gen = random_bistochastic_povm if bis else random_povm
            make = lambda: list(gen(d, m, rng).operators)  # noqa: E731
            kind = MEASUREMENT
        if adaptive:
            table = {h: make() for h in histories}
            steps.append(ProtocolStep(agent, kind, None, table))
        else:
            steps.append(ProtocolStep(agent, kind, make()))
        if kind == MEASUREMENT:
            histories = [h + (k,) for h in histories for k in range(m)]
    return Protocol(space, tuple(steps))


def measure_and_correct():
    """Bell state → |00>: Alice measures in the computational basis, then both flip on outcome 1.

    Returns ``(protocol, initial, target)``.
    """
    x = np.array([[0, 1], [1, 0]], dtype=np.complex128)
    eye = np.eye(2, dtype=np.complex128)
    proj = [np.diag([1, 0]).astype(np.complex128), np.diag([0, 1]).astype(np.complex128)]
    steps = (
        ProtocolStep(1, MEASUREMENT, proj),
        ProtocolStep(1, UNITARY, eye, {(1,): x}),
        ProtocolStep(2, UNITARY, eye, {(1,): x}),
    )
    space = TensorSpace((2, 2))
    target = np.zeros((4, 4), dtype=np.complex128)
    target[0, 0] = 1.0
    return Protocol(space, steps), bell_state(), MultipartyState(space, trusted_state(target))
