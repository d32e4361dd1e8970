import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import P0, P1, X
from qmajor.errors import DimensionError, PovmError
from qmajor.majorization import majorize
from qmajor.measurement import (
    apply_channel,
    entropy_pair,
    expected_spectrum,
    outcome_probabilities,
    outcome_probability,
    posterior_state,
    projective_povm,
    random_bistochastic_povm,
    random_povm,
    validate_povm,
)
from qmajor.numkernel import random_unitary
from qmajor.states import entropy, random_state, spectrum, validate_state

MIX = [np.sqrt(0.75) * np.eye(2), np.sqrt(0.25) * X]
PLUS = np.full((2, 2), 0.5)


def test_projectors_are_bistochastic():
    p, flag = validate_povm([P0, P1])
    assert flag.is_bistochastic and flag.deviation == 0.0
    assert len(p) == 2 and p.dim == 2


def test_weighted_identity_and_swap_is_bistochastic():
    # sum f*f = 0.75 I + 0.25 X X = I, and likewise for f f*
    _, flag = validate_povm(MIX)
    assert flag.is_bistochastic
    assert flag.deviation <= 1e-15


def test_overcomplete_family_rejected():
    with pytest.raises(PovmError) as err:
        validate_povm([np.eye(2), 0.1 * np.eye(2)])
    assert err.value.diagnostics[0]["deviation"] == pytest.approx(0.01)


def test_mismatched_operators_rejected():
    with pytest.raises(DimensionError):
        validate_povm([np.eye(2), np.eye(3)])


def test_flag_reports_unital_residual():
    _, flag = validate_povm([P0, np.array([[0, 1], [0, 0]])])
    assert not flag.is_bistochastic
    assert flag.deviation == pytest.approx(1.0)


def test_outcome_probability_projective():
    assert outcome_probability([P0, P1], np.diag([0.7, 0.3]), 0) == pytest.approx(0.7)


def test_outcome_probability_index_checked():
    with pytest.raises(IndexError):
        outcome_probability([P0, P1], np.eye(2) / 2, 2)


def test_unitary_mixture_probabilities(rng):
    s = random_state(2, 2, rng)
    np.testing.assert_allclose(outcome_probabilities(MIX, s), [0.75, 0.25], rtol=0, atol=1e-12)


@settings(max_examples=100, deadline=None)
@given(st.integers(1, 6), st.integers(1, 5), st.integers(0, 2**32 - 1))
def test_probabilities_sum_to_one(dim, m, seed):
    r = np.random.default_rng(seed)
    p = random_povm(dim, m, r)
    s = random_state(dim, int(r.integers(1, dim + 1)), r)
    assert abs(outcome_probabilities(p, s).sum() - 1) <= 1e-9


def test_posterior_projective():
    out = posterior_state([P0, P1], np.diag([0.7, 0.3]), 0)
    assert out.probability == pytest.approx(0.7)
    np.testing.assert_allclose(out.posterior.matrix, P0, rtol=0, atol=1e-15)


def test_posterior_absent_on_kernel():
    out = posterior_state([P0, P1], P0, 1)
    assert out.probability == 0.0 and out.posterior is None


def test_posterior_of_unitary_mixture(rng):
    us = [random_unitary(3, rng) for _ in range(3)]
    w = np.array([0.5, 0.3, 0.2])
    s = random_state(3, 2, rng)
    ops = [np.sqrt(wk) * u for wk, u in zip(w, us)]
    for k in range(3):
        out = posterior_state(ops, s, k)
        assert out.probability == pytest.approx(w[k], abs=1e-12)
        np.testing.assert_allclose(out.posterior.matrix, us[k] @ s.matrix @ us[k].conj().T, rtol=0, atol=1e-12)


def test_channel_examples():
    np.testing.assert_allclose(apply_channel([P0, P1], np.diag([0.7, 0.3])).matrix, np.diag([0.7, 0.3]), rtol=0, atol=1e-15)
    np.testing.assert_allclose(apply_channel([P0, P1], PLUS).matrix, np.eye(2) / 2, rtol=0, atol=1e-15)
    np.testing.assert_allclose(apply_channel(MIX, np.diag([0.7, 0.3])).matrix, np.diag([0.6, 0.4]), rtol=0, atol=1e-15)


def test_expected_spectrum_examples(rng):
    s = random_state(2, 2, rng)
    np.testing.assert_allclose(expected_spectrum([P0, P1], s).values, [1, 0], rtol=0, atol=1e-12)
    u = random_unitary(3, rng)
    s3 = random_state(3, 3, rng)
    np.testing.assert_allclose(expected_spectrum([u], s3).values, spectrum(s3).values, rtol=0, atol=1e-12)
    # zero branch contributes nothing
    np.testing.assert_allclose(expected_spectrum([P0, P1], P0).values, [1, 0], rtol=0, atol=1e-15)


def test_entropy_pair_examples(rng):
    s1, s2 = entropy_pair([P0, P1], random_state(2, 2, rng))
    assert s1 == pytest.approx(0, abs=1e-9) and s2 == pytest.approx(0, abs=1e-9)
    half = np.sqrt(0.5) * np.eye(2)
    s1, s2 = entropy_pair([half, half], np.eye(2) / 2)
    assert s1 == pytest.approx(1) and s2 == pytest.approx(1)


def _pairs(seed, bistochastic=False):
    r = np.random.default_rng(seed)
    dim, m = int(r.integers(2, 7)), int(r.integers(1, 5))
    gen = random_bistochastic_povm if bistochastic else random_povm
    return gen(dim, m, r), random_state(dim, int(r.integers(1, dim + 1)), r)


@settings(max_examples=150, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_expected_spectrum_majorizes_initial(seed):
    p, s = _pairs(seed)
    assert majorize(expected_spectrum(p, s), spectrum(s))


@settings(max_examples=150, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_expected_spectrum_majorizes_channel_output(seed):
    p, s = _pairs(seed)
    assert majorize(expected_spectrum(p, s), spectrum(apply_channel(p, s)))


@settings(max_examples=150, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_channel_preserves_trace(seed):
    p, s = _pairs(seed)
    assert abs(np.trace(apply_channel(p, s).matrix) - 1) <= 1e-10


@settings(max_examples=150, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_bistochastic_channel_output_is_majorized(seed):
    p, s = _pairs(seed, bistochastic=True)
    assert validate_povm(p)[1].is_bistochastic
    assert majorize(spectrum(s), spectrum(apply_channel(p, s)))


@settings(max_examples=150, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_entropy_chain(seed):
    p, s = _pairs(seed)
    s1, s2 = entropy_pair(p, s)
    assert s2 <= s1 + 1e-9
    assert s1 <= entropy(spectrum(s)) + 1e-9


@settings(max_examples=100, deadline=None)
@given(st.integers(2, 8), st.integers(0, 2**32 - 1))
def test_fan_sum_of_spectra(dim, seed):
    r = np.random.default_rng(seed)
    a = r.standard_normal((dim, dim)) + 1j * r.standard_normal((dim, dim))
    b = r.standard_normal((dim, dim)) + 1j * r.standard_normal((dim, dim))
    a, b = a + a.conj().T, b + b.conj().T
    lhs = np.linalg.eigvalsh(a)[::-1] + np.linalg.eigvalsh(b)[::-1]
    assert majorize(lhs, np.linalg.eigvalsh(a + b))


def test_posterior_states_are_valid(rng):
    p = random_povm(4, 3, rng)
    s = random_state(4, 2, rng)
    for k in range(3):
        out = posterior_state(p, s, k)
        validate_state(out.posterior.matrix)


def test_projective_povm_is_bistochastic():
    p = projective_povm(4)
    assert len(p) == 4 and p.bistochastic.is_bistochastic
    np.testing.assert_allclose(outcome_probabilities(p, np.diag([0.1, 0.2, 0.3, 0.4])), [0.1, 0.2, 0.3, 0.4],
                               rtol=0, atol=1e-15)
