"""Kernel backend selected at import: compiled extension if built, else numpy."""
try:
    from ._ckernels import (  # noqa: F401
        birkhoff_greedy,
        hlp_transfer,
        partial_trace_keep,
        perfect_matching,
        prefix_slack,
    )

    BACKEND = "cython"
except ImportError:
    from ._pykernels import (  # noqa: F401
        birkhoff_greedy,
        hlp_transfer,
        partial_trace_keep,
        perfect_matching,
        prefix_slack,
    )

    BACKEND = "python"
