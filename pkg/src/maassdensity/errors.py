"""Exception types shared across the package."""


class MaassDensityError(Exception):
    """Base class for all package-specific errors."""


class DomainError(MaassDensityError, ValueError):
    """Argument outside the documented domain of an operation."""


class PoleError(DomainError):
    """Evaluation requested exactly at a pole."""


class OverflowGuardError(MaassDensityError):
    """Evaluation would overflow binary64 and was refused."""


class ConvergenceError(MaassDensityError):
    """A series or adaptive rule failed to converge within its caps."""


class RegimeError(DomainError):
    """Parameters violate the validity regime of an asymptotic method."""


class CalibrationError(MaassDensityError):
    """Residue-sum constants failed their quadrature cross-check."""


class VerificationError(MaassDensityError):
    """A two-sided identity check exceeded its combined error budget."""

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class MissingCoefficientError(MaassDensityError, KeyError):
    """A Hecke eigenvalue required by an operation is absent from the data."""


class DataFormatError(MaassDensityError, ValueError):
    """A spectral-data file is malformed or declares an unsupported convention."""
