"""Exception types shared across the package."""


class GqfiError(Exception):
    """Base class for all package errors."""


class UnphysicalStateError(GqfiError):
    """Covariance data violates the bona fide condition sigma + K >= 0."""


class SymplecticError(GqfiError):
    """A matrix fails the symplectic condition S K S^dag = K.

    Carries the max-entry residual norm in ``residual``.
    """

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class NumericalInstabilityError(GqfiError):
    """An intermediate quantity carries a larger imaginary or negative
    residue than double-precision noise can explain."""


class DegeneratePairError(GqfiError):
    """State pair makes a fidelity denominator singular."""


class CutoffTooSmallError(GqfiError):
    """Fock-space truncation leaves too much tail mass."""


class SingularStateError(GqfiError):
    """Covariance matrix is singular where an inverse is required."""


class LimitUndefinedError(GqfiError):
    """The fidelity limit defining the QFI does not exist at this point
    (first derivative of the fidelity does not vanish)."""


class DegenerateSpectrumError(GqfiError):
    """Two-mode QFI denominator vanishes beyond what regularization covers."""


class TruncationError(GqfiError):
    """Requested mode index falls outside the channel truncation."""


class UnsupportedInitialStateError(GqfiError):
    """Channel input is not separable system x thermal-diagonal environment."""


class InsufficientTaylorDataError(GqfiError):
    """A series operation needs higher-order channel coefficients than supplied."""


class RegimeError(GqfiError):
    """Parameters fall outside the validity window of a regime expansion.

    Soft by design: callers may pass ``force=True`` to evaluate anyway.
    """

    def __init__(self, message, ratio=None):
        super().__init__(message)
        self.ratio = ratio
