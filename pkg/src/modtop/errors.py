"""Exception types shared across the toolkit."""


class ModtopError(Exception):
    """Base class for all toolkit errors."""


class InvalidExponentError(ModtopError):
    """An exponent value below 1 was supplied or produced by an evaluator."""


class IncompatibleTailError(ModtopError):
    """Vector support is incompatible with the exponent spec (e.g. a nonzero
    constant tail against a finite-dimensional table)."""


class DomainMismatchError(ModtopError):
    """Function and exponent live on different intervals, or the combination
    of representations is not supported."""


class EmptySetError(ModtopError):
    """A diameter was requested for an empty collection."""


class NotInModularSpaceError(ModtopError):
    """No scaling within the probe range brings the modular under the
    threshold; the vector is not in the space as far as the probe can tell."""

    def __init__(self, message, partial_result=None):
        super().__init__(message)
        self.partial_result = partial_result


class NormUncertainError(ModtopError):
    """An indeterminate modular verdict blocked a bisection decision."""


class UndeclaredGrowthError(ModtopError):
    """A custom exponent lacks the growth declarations needed for a verdict."""


class NotUnboundedError(ModtopError):
    """A doubling-failure witness was requested for a bounded exponent."""


class NotFiniteModularError(ModtopError):
    """The operation requires a vector with certified finite modular."""


class UnknownScenarioError(ModtopError):
    """The requested name is not in the scenario registry."""


class ExponentBelowTwoError(ModtopError):
    """The energy solver requires exponents >= 2 on the whole domain."""


class UnboundedExponentError(ModtopError):
    """The energy solver rejects unbounded exponent specs."""


class ConfigError(ModtopError):
    """A CLI configuration failed validation."""
