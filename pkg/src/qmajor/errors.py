"""Exception hierarchy."""


class QmajorError(ValueError):
    """Base class for all domain errors raised by qmajor."""


class DimensionError(QmajorError):
    pass


class InvariantError(QmajorError):
    """A value failed one of its defining invariants.

    ``diagnostics`` is a list of ``{"invariant": name, "deviation": x}``
    records, one per failed invariant.
    """

    def __init__(self, message, diagnostics=()):
        super().__init__(message)
        self.diagnostics = list(diagnostics)


class StateError(InvariantError):
    pass


class PovmError(InvariantError):
    pass


class MajorizationError(QmajorError):
    """Majorization precondition failed; carries the first violating prefix index."""

    def __init__(self, message, index=None, slack=None):
        super().__init__(message)
        self.index = index
        self.slack = slack


class SynthesisError(QmajorError):
    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class ProtocolError(QmajorError):
    def __init__(self, message, step=None, history=None):
        super().__init__(message)
        self.step = step
        self.history = history
