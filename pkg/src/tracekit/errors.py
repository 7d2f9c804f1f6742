"""Exception taxonomy shared across the package."""


class TracekitError(Exception):
    """Base class for all errors raised by this package."""


class AlphabetError(TracekitError, ValueError):
    """A string contains a symbol outside the declared alphabet."""


class InvalidTrimError(TracekitError, ValueError):
    """A trim request does not fit inside the string (l + k > |s|)."""


class ArityError(TracekitError, ValueError):
    """Seed count does not match what the model kind expects."""


class TraceLengthError(TracekitError, ValueError):
    """A trace length violates a model's hard length contract."""


class ModelParamError(TracekitError, ValueError):
    """A model parameter is missing, out of range, or not accepted by the kind."""


class BudgetError(TracekitError, RuntimeError):
    """An exhaustive search would exceed its configured evaluation budget."""


class FormatError(TracekitError, ValueError):
    """An input file does not conform to the expected on-disk format."""


class ConfigError(TracekitError, ValueError):
    """Command-line or manifest configuration is inconsistent or incomplete."""


class BracketingError(TracekitError, RuntimeError):
    """A trace-complexity search hit its trace cap before reaching the target."""
