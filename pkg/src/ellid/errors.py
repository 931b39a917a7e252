"""Exception hierarchy for the audit library."""


class EllidError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(EllidError, ValueError):
    """An argument lies outside the mathematical domain of the operation."""


class SingularArgumentError(DomainError):
    """Argument too close to the logarithmic singularity of K."""


class RangeError(DomainError):
    """Argument outside the numeric range the solver supports in binary64."""


class NonConvergenceError(EllidError, ArithmeticError):
    """A truncated series hit its term cap before meeting the stop rule."""


class PoleError(EllidError, ArithmeticError):
    """Log-derivative requested where the theta value is numerically zero."""


class UnsupportedOrderError(EllidError, ValueError):
    """Derivative order above the supported cap."""


class UnknownIdentityError(EllidError, KeyError):
    """Identity or variant id not present in the registry."""


class ConstraintError(EllidError, ValueError):
    """Grid point violates an identity's parameter constraints."""


class ConfigError(EllidError, ValueError):
    """Invalid run configuration value."""
