"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Instances are drawn from ``default_rng([SEED, criterion, trial])`` so any
failure can be replayed. Majorization slacks are recomputed here from raw
prefix sums rather than through the library's own checker.

Run standalone with ``python tests/test_acceptance.py``.
"""
import time

import numpy as np
import pytest

from oracles import charpoly_eigenvalues, kron_loops, matmul_loops, partial_trace_indices
from qmajor.locc import check_deterministic_transform, expected_global_spectrum, expected_local_spectrum, iterate
from qmajor.locc import MEASUREMENT, Protocol, ProtocolStep, measure_and_correct, random_protocol, run
from qmajor.majorization import majorize_ops
from qmajor.measurement import apply_channel, entropy_pair, expected_spectrum, random_bistochastic_povm, random_povm
from qmajor.multiparty import (
    LocalPovm,
    MultipartyState,
    TensorSpace,
    bell_state,
    bob_expected_spectrum,
    bob_invariance,
    partial_trace,
)
from qmajor.numkernel import hermitian_eig, kron, matmul, random_hermitian
from qmajor.states import entropy, random_state, spectrum
from qmajor.uhlmann import entropy_drop_witness, synthesize

SEED = 20240601
P0 = np.diag([1, 0]).astype(complex)
P1 = np.diag([0, 1]).astype(complex)


def rng_for(criterion, trial):
    return np.random.default_rng([SEED, criterion, trial])


def slack(a, b):
    """Minimum prefix-sum difference of sorted ``a`` over sorted ``b``."""
    a = np.sort(np.asarray(a, float))[::-1]
    b = np.sort(np.asarray(b, float))[::-1]
    return float((np.cumsum(a) - np.cumsum(b)).min())


def _state(r, dim):
    return random_state(dim, int(r.integers(1, dim + 1)), r)


@pytest.fixture
def report(capsys):
    def emit(n, ok, detail):
        with capsys.disabled():
            print(f"\nCRITERION {n}: {'PASS' if ok else 'FAIL'}  {detail}")
        assert ok, detail

    return emit


def _criterion1_ensemble(trials=1000):
    for t in range(trials):
        r = rng_for(1, t)
        d, m = int(r.integers(2, 9)), int(r.integers(2, 6))
        yield _state(r, d), random_povm(d, m, r)


def test_criterion_1_expected_spectrum_majorizes_input(report):
    start = time.perf_counter()
    worst, n = np.inf, 0
    for s, p in _criterion1_ensemble():
        worst = min(worst, slack(expected_spectrum(p, s).values, spectrum(s).values))
        n += 1
    elapsed = time.perf_counter() - start
    report(1, n >= 1000 and worst >= -1e-9 and elapsed <= 60,
           f"trials={n} worst_slack={worst:.3e} runtime={elapsed:.2f}s")


def test_criterion_2_bistochastic_if_direction(report):
    worst, holds = np.inf, 0
    for t in range(1000):
        r = rng_for(2, t)
        d, m = int(r.integers(2, 9)), int(r.integers(2, 6))
        s, p = _state(r, d), random_bistochastic_povm(d, m, r)
        out = apply_channel(p, s)
        holds += majorize_ops(s, out)
        worst = min(worst, slack(spectrum(s).values, spectrum(out).values))
    report(2, holds == 1000 and worst >= -1e-9, f"trials=1000 holds={holds} worst_slack={worst:.3e}")


def test_criterion_3_synthesis(report):
    worst_res = worst_cond = 0.0
    bound_ok = 0
    for t in range(500):
        r = rng_for(3, t)
        d, m = int(r.integers(2, 7)), int(r.integers(1, 6))
        sigma = _state(r, d)
        tau = apply_channel(random_bistochastic_povm(d, m, r), sigma)
        res = synthesize(sigma, tau)
        ops = res.povm.operators
        completeness = np.abs(sum(f.conj().T @ f for f in ops) - np.eye(d)).max()
        unital = np.abs(sum(f @ f.conj().T for f in ops) - np.eye(d)).max()
        out = sum(f @ sigma.matrix @ f.conj().T for f in ops)
        worst_res = max(worst_res, float(np.abs(out - tau.matrix).max()))
        worst_cond = max(worst_cond, float(completeness), float(unital))
        bound_ok += len(ops) <= (d - 1) ** 2 + 1
    ok = worst_res <= 1e-7 and worst_cond <= 1e-9 and bound_ok == 500
    report(3, ok, f"trials=500 recon_residual={worst_res:.3e} condition_residual={worst_cond:.3e} term_bound={bound_ok}/500")


def test_criterion_4_fan_and_spectral_equality(report):
    worst_fan, worst_dev = np.inf, 0.0
    for t in range(1000):
        r = rng_for(4, t)
        d = int(r.integers(2, 11))
        a, b = random_hermitian(d, r), random_hermitian(d, r)
        lhs = hermitian_eig(a).eigenvalues + hermitian_eig(b).eigenvalues
        worst_fan = min(worst_fan, slack(lhs, hermitian_eig(a + b).eigenvalues))
        f = r.standard_normal((d, d)) + 1j * r.standard_normal((d, d))
        fh = f.conj().T
        dev = np.abs(hermitian_eig(fh @ f).eigenvalues - hermitian_eig(f @ fh).eigenvalues).max()
        worst_dev = max(worst_dev, float(dev))
    report(4, worst_fan >= -1e-9 and worst_dev <= 1e-8,
           f"trials=1000 fan_slack={worst_fan:.3e} sp_deviation={worst_dev:.3e}")


def _bob_instance(r, parties, bistochastic):
    space = TensorSpace(tuple(int(x) for x in r.integers(2, 4, size=parties)))
    s = _state(r, space.total)
    alice, bob = (int(x) for x in r.choice(np.arange(1, parties + 1), 2, replace=False))
    gen = random_bistochastic_povm if bistochastic else random_povm
    p = gen(space.agent_dim(alice), int(r.integers(2, 5)), r)
    return MultipartyState(space, s), LocalPovm(alice, p), bob


def test_criterion_5_bob(report):
    worst_slack, worst_res, non_bis, n = np.inf, 0.0, 0, 0
    for parties in (2, 3):
        for t in range(500):
            r = rng_for(50 + parties, t)
            bis = t % 2 == 0
            ms, lp, bob = _bob_instance(r, parties, bis)
            before = spectrum(partial_trace(ms, bob)).values
            worst_slack = min(worst_slack, slack(bob_expected_spectrum(ms, lp, bob).values, before))
            worst_res = max(worst_res, bob_invariance(ms, lp, bob))
            non_bis += not lp.povm.bistochastic.is_bistochastic
            n += 1
    report(5, worst_slack >= -1e-9 and worst_res <= 1e-9 and non_bis > 0,
           f"instances={n} (500 bipartite, 500 tripartite) bob_slack={worst_slack:.3e} "
           f"invariance_residual={worst_res:.3e} non_bistochastic={non_bis}")


def test_criterion_6_entropy_chain_and_counterexample(report):
    worst = -np.inf
    for s, p in _criterion1_ensemble():
        s1, s2 = entropy_pair(p, s)
        worst = max(worst, s2 - s1, s1 - entropy(spectrum(s)))
    w = entropy_drop_witness()
    ops = [np.array(o, dtype=complex) for o in w["operators"]]
    rho = np.eye(2) / 2
    out = sum(f @ rho @ f.conj().T for f in ops)
    complete = np.abs(sum(f.conj().T @ f for f in ops) - np.eye(2)).max()
    unital = np.abs(sum(f @ f.conj().T for f in ops) - np.eye(2)).max()
    s_in, s_out = entropy(spectrum(rho)), entropy(spectrum(out))
    witness_ok = complete <= 1e-12 and unital > 1e-9 and abs(s_in - 1) <= 1e-12 and abs(s_out) <= 1e-12
    report(6, worst <= 1e-9 and witness_ok,
           f"trials=1000 chain_excess={worst:.3e} witness S(in)={s_in:.12f} S(out)={s_out:.12f}")


def test_criterion_7_locc(report):
    worst, n = np.inf, 0
    for t in range(200):
        r = rng_for(7, t)
        parties = int(r.integers(2, 4))
        factors = tuple(int(x) for x in r.integers(2, 4, size=parties))
        proto = random_protocol(factors, int(r.integers(1, 5)), r, adaptive=True)
        init = MultipartyState(proto.space, _state(r, proto.space.total))
        prev = None
        for ens in iterate(proto, init):
            cur = [expected_local_spectrum(ens, a).values for a in range(1, parties + 1)]
            cur.append(expected_global_spectrum(ens).values)
            if prev is not None:
                worst = min(worst, *(slack(c, p) for c, p in zip(cur, prev)))
            prev = cur
        n += 1
    proto, init, target = measure_and_correct()
    det = check_deterministic_transform(proto, init, target)
    ok = worst >= -1e-9 and det.ok and len(det.local) == 2
    report(7, ok, f"protocols={n} worst_step_slack={worst:.3e} measure_and_correct ok={det.ok}")


def test_criterion_8_oracles(report):
    worst = {"partial_trace": 0.0, "matmul": 0.0, "kron": 0.0, "hermitian_eig": 0.0}
    for t in range(100):
        r = rng_for(8, t)
        dims = [int(x) for x in r.integers(1, 4, size=int(r.integers(2, 4)))]
        ms = MultipartyState(TensorSpace(tuple(dims)), _state(r, int(np.prod(dims))))
        keep = int(r.integers(1, len(dims) + 1))
        dev = np.abs(partial_trace(ms, keep).matrix - partial_trace_indices(ms.matrix, dims, keep)).max()
        worst["partial_trace"] = max(worst["partial_trace"], float(dev))
        n, k, m = (int(x) for x in r.integers(1, 6, size=3))
        a = r.standard_normal((n, k)) + 1j * r.standard_normal((n, k))
        b = r.standard_normal((k, m)) + 1j * r.standard_normal((k, m))
        worst["matmul"] = max(worst["matmul"], float(np.abs(matmul(a, b) - matmul_loops(a.tolist(), b.tolist())).max()))
        c = r.standard_normal((n, k)) + 1j * r.standard_normal((n, k))
        worst["kron"] = max(worst["kron"], float(np.abs(kron(c, b) - kron_loops(c, b)).max()))
        h = random_hermitian(int(r.integers(1, 7)), r)
        worst["hermitian_eig"] = max(worst["hermitian_eig"],
                                     float(np.abs(hermitian_eig(h).eigenvalues - charpoly_eigenvalues(h)).max()))
    tol = {"partial_trace": 1e-12, "matmul": 1e-12, "kron": 1e-12, "hermitian_eig": 1e-8}
    ok = all(worst[k] <= tol[k] for k in worst)
    report(8, ok, "instances=100 each " + " ".join(f"{k}={v:.2e}(<= {tol[k]:.0e})" for k, v in worst.items()))


def test_criterion_9_fixtures(report):
    res = synthesize(np.diag([0.7, 0.3]), np.diag([0.6, 0.4]))
    terms = sorted((float(w), tuple(int(i) for i in p)) for w, p in zip(res.birkhoff.weights, res.birkhoff.permutations))
    synth_ok = (
        len(terms) == 2
        and abs(terms[0][0] - 0.25) <= 1e-10 and terms[0][1] == (1, 0)
        and abs(terms[1][0] - 0.75) <= 1e-10 and terms[1][1] == (0, 1)
    )
    ens = run(Protocol(TensorSpace((2, 2)), (ProtocolStep(1, MEASUREMENT, [P0, P1]),)), bell_state())
    expect = [np.diag([1.0, 0, 0, 0]), np.diag([0, 0, 0, 1.0])]
    bell_dev = max(
        max(abs(b.probability - 0.5), float(np.abs(b.state.matrix - e).max())) for b, e in zip(ens, expect)
    )
    marg_dev = float(np.abs(partial_trace(bell_state(), 2).matrix - np.eye(2) / 2).max())
    ok = synth_ok and len(ens) == 2 and bell_dev <= 1e-10 and marg_dev <= 1e-10
    report(9, ok, f"synthesis terms={[(round(w, 12), p) for w, p in terms]} bell_branch_dev={bell_dev:.1e} "
                  f"bob_marginal_dev={marg_dev:.1e}")


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-q"]))
