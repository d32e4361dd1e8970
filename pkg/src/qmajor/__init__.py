"""Measurements, majorization and LOCC monotonicity for finite-dimensional mixed states."""
from .config import DEFAULT, Config
from .errors import (
    DimensionError,
    InvariantError,
    MajorizationError,
    PovmError,
    ProtocolError,
    QmajorError,
    StateError,
    SynthesisError,
)
from .kernels import BACKEND
from .locc import (
    BranchEnsemble,
    Protocol,
    ProtocolStep,
    check_deterministic_transform,
    check_monotonicity,
    expected_global_spectrum,
    expected_local_spectrum,
    iterate,
    measure_and_correct,
    random_protocol,
    run,
)
from .majorization import (
    BirkhoffDecomposition,
    DoublyStochasticMatrix,
    birkhoff,
    hlp_transfer,
    majorization_slack,
    majorize,
    majorize_ops,
    random_doubly_stochastic,
)
from .measurement import (
    BistochasticFlag,
    MeasurementOutcome,
    Povm,
    apply_channel,
    entropy_pair,
    expected_spectrum,
    measure,
    outcome_probabilities,
    outcome_probability,
    posterior_state,
    random_bistochastic_povm,
    random_povm,
    validate_povm,
)
from .multiparty import (
    LocalPovm,
    MultipartyState,
    TensorSpace,
    bob_expected_spectrum,
    bob_invariance,
    bell_state,
    lift,
    local_consistency,
    local_povm,
    multiparty_state,
    partial_trace,
    product_state,
)
from .numkernel import HermitianEigenSystem, adjoint, hermitian_eig, kron, matmul, trace
from .states import (
    DensityMatrix,
    Spectrum,
    entropy,
    maximally_mixed,
    pure_state,
    random_state,
    spectrum,
    validate_state,
)
from .uhlmann import (
    SynthesisResult,
    entropy_drop_witness,
    majorization_witness_roundtrip,
    synthesize,
    verify_if_direction,
)
from .verify import SUITES, run_suite

__version__ = "0.1.0"
