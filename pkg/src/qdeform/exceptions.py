"""Exception types shared across the package."""


class QDeformError(Exception):
    """Base class for all package errors."""


class QParameterError(QDeformError, ValueError):
    """Invalid deformation parameter or realization parameter."""


class QDomainError(QDeformError, ValueError):
    """Argument outside the domain of an operation."""


class QDivergenceError(QDeformError, ArithmeticError):
    """A series or lattice sum failed to converge."""


class QPrecisionError(QDeformError, ArithmeticError):
    """Floating-point evaluation lost too many digits to be trusted."""


class ConfigError(QDeformError, ValueError):
    """Inconsistent realization or sweep configuration."""
