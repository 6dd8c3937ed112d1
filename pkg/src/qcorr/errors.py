class QCorrError(ValueError):
    """Base class for all errors raised by qcorr."""


class InvalidStateError(QCorrError):
    """A matrix or vector fails a density-matrix / pure-state invariant."""


class UnsupportedDimsError(QCorrError):
    """The subsystem structure is outside what a measure supports."""
