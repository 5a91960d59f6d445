"""Exception types shared by all modules."""


class SosError(Exception):
    """Base class for every error raised by the toolkit."""


class InvalidSpec(SosError, ValueError):
    """A variety description violates its invariants."""


class DegenerateCubic(InvalidSpec):
    """The plane cubic does not define a reduced curve."""


class DimensionMismatch(SosError, ValueError):
    """A vector or tuple does not fit the coordinate ring."""


class SizeLimitExceeded(SosError):
    """A dense object was requested above the configured size limit."""


class LineSearchFailure(SosError):
    """The line search could not produce an acceptable step."""


class NonFiniteValue(SosError, ArithmeticError):
    """NaN or Inf encountered in the objective or gradient."""


class InfeasibleStart(SosError):
    """The restricted path was started away from its feasible point."""


class ConfigError(SosError, ValueError):
    """An experiment or solver configuration is unusable."""
