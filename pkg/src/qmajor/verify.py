"""Seeded randomized property suites, one per theorem-level claim.

Trial ``t`` of a suite run with seed ``s`` draws everything from
``numpy.random.default_rng([s, t])``, so any single instance can be replayed.
"""
from dataclasses import dataclass

import numpy as np

from .config import resolve
from .errors import QmajorError
from .locc import check_monotonicity, random_protocol
from .majorization import majorization_slack
from .measurement import (
    apply_channel,
    entropy_pair,
    expected_spectrum,
    random_bistochastic_povm,
    random_povm,
)
from .multiparty import (
    LocalPovm,
    MultipartyState,
    TensorSpace,
    bob_expected_spectrum,
    bob_invariance,
    partial_trace,
)
from .numkernel import random_hermitian
from .states import entropy, random_state, spectrum
from .uhlmann import synthesize


@dataclass
class SuiteReport:
    name: str
    trials: int
    passed: int
    metric: str
    worst: float
    worst_trial: int
    seed: int
    threshold: float

    @property
    def ok(self):
        return self.passed == self.trials

    def to_dict(self):
        return {
            "theorem": self.name,
            "ok": self.ok,
            "trials": self.trials,
            "passed": self.passed,
            "metric": self.metric,
            "worst": self.worst,
            "threshold": self.threshold,
            "worst_instance": {"seed": self.seed, "trial": self.worst_trial},
        }


def _state(rng, dim):
    return random_state(dim, int(rng.integers(1, dim + 1)), rng)


def _fan(rng, cfg):
    d = int(rng.integers(2, 11))
    a, b = random_hermitian(d, rng), random_hermitian(d, rng)
    lhs = np.linalg.eigvalsh(a)[::-1] + np.linalg.eigvalsh(b)[::-1]
    return majorization_slack(lhs, np.linalg.eigvalsh(a + b), cfg)[0]


def _sp_equal(rng, cfg):
    d = int(rng.integers(2, 11))
    f = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    fh = f.conj().T
    return float(np.abs(np.linalg.eigvalsh(fh @ f) - np.linalg.eigvalsh(f @ fh)).max())


def _expect(rng, cfg):
    d, m = int(rng.integers(2, 9)), int(rng.integers(2, 6))
    s, p = _state(rng, d), random_povm(d, m, rng)
    return majorization_slack(expected_spectrum(p, s, cfg), spectrum(s, cfg), cfg)[0]


def _uhlmann_if(rng, cfg):
    d, m = int(rng.integers(2, 9)), int(rng.integers(2, 6))
    s, p = _state(rng, d), random_bistochastic_povm(d, m, rng)
    return majorization_slack(spectrum(s, cfg), spectrum(apply_channel(p, s, cfg), cfg), cfg)[0]


def _uhlmann_synth(rng, cfg):
    d, m = int(rng.integers(2, 7)), int(rng.integers(1, 6))
    s, p = _state(rng, d), random_bistochastic_povm(d, m, rng)
    res = synthesize(s, apply_channel(p, s, cfg), cfg)
    if len(res.povm) > (d - 1) ** 2 + 1:
        return np.inf
    bad = max(res.povm.completeness_residual, res.povm.bistochastic.deviation)
    return res.residual if bad <= 1e-9 else np.inf


def _instance(rng, cfg, bistochastic=False):
    n = int(rng.integers(2, 4))
    space = TensorSpace(tuple(int(x) for x in rng.integers(2, 4, size=n)))
    s = _state(rng, space.total)
    agent = int(rng.integers(1, n + 1))
    observer = int(rng.choice([a for a in range(1, n + 1) if a != agent]))
    d, m = space.agent_dim(agent), int(rng.integers(2, 5))
    gen = random_bistochastic_povm if bistochastic else random_povm
    return MultipartyState(space, s), LocalPovm(agent, gen(d, m, rng)), observer


def _bob_expect(rng, cfg):
    ms, lp, obs = _instance(rng, cfg, bistochastic=bool(rng.integers(2)))
    return majorization_slack(bob_expected_spectrum(ms, lp, obs, cfg), spectrum(partial_trace(ms, obs), cfg), cfg)[0]


def _bob_invariance(rng, cfg):
    ms, lp, obs = _instance(rng, cfg)
    return bob_invariance(ms, lp, obs, cfg)


def _locc_monotone(rng, cfg):
    n = int(rng.integers(2, 4))
    factors = tuple(int(x) for x in rng.integers(2, 4, size=n))
    protocol = random_protocol(factors, int(rng.integers(1, 5)), rng)
    s = _state(rng, protocol.space.total)
    return check_monotonicity(protocol, MultipartyState(protocol.space, s), cfg).worst_slack


def _entropy_chain(rng, cfg):
    d, m = int(rng.integers(2, 9)), int(rng.integers(2, 6))
    s, p = _state(rng, d), random_povm(d, m, rng)
    s1, s2 = entropy_pair(p, s, cfg)
    return max(s2 - s1, s1 - entropy(spectrum(s, cfg)))


# name -> (trial function, metric name, higher_is_better, threshold)
SUITES = {
    "fan": (_fan, "majorization_slack", True, -1e-9),
    "sp-equal": (_sp_equal, "eigenvalue_deviation", False, 1e-8),
    "expect": (_expect, "majorization_slack", True, -1e-9),
    "uhlmann-if": (_uhlmann_if, "majorization_slack", True, -1e-9),
    "uhlmann-synth": (_uhlmann_synth, "reconstruction_residual", False, 1e-7),
    "bob-expect": (_bob_expect, "majorization_slack", True, -1e-9),
    "bob-invariance": (_bob_invariance, "local_state_residual", False, 1e-9),
    "locc-monotone": (_locc_monotone, "majorization_slack", True, -1e-9),
    "entropy-chain": (_entropy_chain, "entropy_excess", False, 1e-9),
}


def run_suite(name, cfg=None, trials=None, seed=None):
    """Run suite ``name`` and return a :class:`SuiteReport`.

    Trials that raise a domain error count as failures with the worst
    possible metric.
    """
    cfg = resolve(cfg)
    fn, metric, higher, threshold = SUITES[name]
    trials = cfg.trials if trials is None else trials
    seed = cfg.seed if seed is None else seed
    passed, worst, worst_trial = 0, None, 0
    for t in range(trials):
        rng = np.random.default_rng([seed, t])
        try:
            value = float(fn(rng, cfg))
        except QmajorError:
            value = -np.inf if higher else np.inf
        ok = value >= threshold if higher else value <= threshold
        passed += ok
        if worst is None or (value < worst if higher else value > worst):
            worst, worst_trial = value, t
    return SuiteReport(name, trials, passed, metric, float(worst), worst_trial, seed, threshold)
