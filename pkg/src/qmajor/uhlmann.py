"""Majorization between states versus bi-stochastic measurements, in both directions.

``verify_if_direction`` checks that a bi-stochastic channel never produces a
state that is not majorized by its input. ``synthesize`` goes the other way:
given ``sigma ⪰ tau`` it builds a bi-stochastic family carrying one to the other.
"""
from dataclasses import dataclass

import numpy as np

from .config import resolve
from .errors import MajorizationError, PovmError, SynthesisError
from .majorization import (
    BirkhoffDecomposition,
    birkhoff,
    hlp_transfer,
    majorization_slack,
    majorize_ops,
    permutation_matrix,
)
from .measurement import Povm, apply_channel, validate_povm
from .numkernel import hermitian_eig
from .states import entropy, spectrum, validate_state


@dataclass(frozen=True, eq=False)
class SynthesisResult:
    povm: Povm
    alignment_unitary: np.ndarray
    birkhoff: BirkhoffDecomposition
    residual: float

    @property
    def terms(self):
        return len(self.povm)

    def report(self):
        return {
            "residual": self.residual,
            "terms": self.terms,
            "bistochastic_deviation": self.povm.bistochastic.deviation,
            "completeness_deviation": self.povm.completeness_residual,
            "weights": [float(w) for w in self.birkhoff.weights],
            "permutations": [[int(i) for i in p] for p in self.birkhoff.permutations],
        }


def _clamped(vals):
    v = np.maximum(vals, 0.0)
    return v / v.sum()


def synthesize(sigma, tau, cfg=None):
    """Bi-stochastic measurement ``{f_k}`` with ``sum_k f_k sigma f_k* = tau``.

    Both states are diagonalized with eigenvalues sorted non-increasing
    (``sigma = Vs diag(lam) Vs*``, ``tau = Vt diag(mu) Vt*``). A T-transform
    chain gives ``mu = B lam``; the Birkhoff terms ``B = sum p_k P_k`` become
    ``f_k = sqrt(p_k) Vt P_k Vs*``, i.e. the commuting-case family
    ``sqrt(p_k) Vs P_k Vs*`` pulled back through the alignment unitary
    ``Vs Vt*``.
    """
    cfg = resolve(cfg)
    sigma, tau = validate_state(sigma, cfg), validate_state(tau, cfg)
    if sigma.dim != tau.dim:
        raise SynthesisError(f"dimension mismatch: {sigma.dim} vs {tau.dim}")
    es, et = hermitian_eig(sigma.matrix, cfg), hermitian_eig(tau.matrix, cfg)
    lam, mu = _clamped(es.eigenvalues), _clamped(et.eigenvalues)
    slack, bad = majorization_slack(lam, mu, cfg)
    if bad >= 0:
        raise MajorizationError(
            f"source does not majorize target: prefix {bad} short by {-slack:.3e}", bad, slack
        )
    dec = birkhoff(hlp_transfer(lam, mu, cfg), cfg)
    vs, vt = es.eigenvectors, et.eigenvectors
    ops = [np.sqrt(w) * (vt @ permutation_matrix(p) @ vs.conj().T) for w, p in zip(dec.weights, dec.permutations)]
    family, flag = validate_povm(ops, cfg)
    if not flag.is_bistochastic:
        raise SynthesisError(f"synthesized family is not bi-stochastic (deviation {flag.deviation:.3e})")
    out = apply_channel(family, sigma, cfg).matrix
    resid = float(np.abs(out - tau.matrix).max())
    if resid > cfg.tol_recon:
        raise SynthesisError(f"reconstruction residual {resid:.3e} exceeds {cfg.tol_recon:.1e}", resid)
    return SynthesisResult(family, vs @ vt.conj().T, dec, resid)


def verify_if_direction(p, sigma, cfg=None):
    """True iff ``sigma`` majorizes the channel output of the bi-stochastic family ``p``."""
    cfg = resolve(cfg)
    p, flag = validate_povm(p, cfg)
    if not flag.is_bistochastic:
        raise PovmError(
            f"measurement is not bi-stochastic (deviation {flag.deviation:.3e})",
            [{"invariant": "bistochastic", "deviation": flag.deviation}],
        )
    sigma = validate_state(sigma, cfg)
    return majorize_ops(sigma, apply_channel(p, sigma, cfg), cfg)


def majorization_witness_roundtrip(sigma, p, cfg=None):
    """Apply ``p`` to ``sigma``, then synthesize a fresh family reaching the same output."""
    cfg = resolve(cfg)
    p, flag = validate_povm(p, cfg)
    if not flag.is_bistochastic:
        raise PovmError(
            f"measurement is not bi-stochastic (deviation {flag.deviation:.3e})",
            [{"invariant": "bistochastic", "deviation": flag.deviation}],
        )
    return synthesize(sigma, apply_channel(p, sigma, cfg), cfg)


def entropy_drop_witness(cfg=None):
    """Complete but not bi-stochastic family whose channel lowers entropy.

    ``{|0><0|, |0><1|}`` sends ``I/2`` (1 bit) to ``|0><0|`` (0 bits), so the
    bi-stochastic hypothesis above cannot be dropped.
    """
    cfg = resolve(cfg)
    ops = [np.array([[1, 0], [0, 0]], dtype=np.complex128), np.array([[0, 1], [0, 0]], dtype=np.complex128)]
    family, flag = validate_povm(ops, cfg)
    sigma = validate_state(np.eye(2) / 2, cfg)
    out = apply_channel(family, sigma, cfg)
    s_in, s_out = spectrum(sigma, cfg), spectrum(out, cfg)
    slack, bad = majorization_slack(s_in, s_out, cfg)
    return {
        "name": "trace-preserving-entropy-drop",
        "operators": [f.real.tolist() for f in ops],
        "input_state": sigma.matrix.real.tolist(),
        "output_state": out.matrix.real.tolist(),
        "input_entropy": entropy(s_in),
        "output_entropy": entropy(s_out),
        "completeness_deviation": family.completeness_residual,
        "bistochastic_deviation": flag.deviation,
        "is_bistochastic": flag.is_bistochastic,
        "input_majorizes_output": bad < 0,
        "majorization_slack": slack,
    }
