"""Exception types shared across the package."""


class AutocorrError(Exception):
    """Base class for every error raised by this package."""


class ShapeError(AutocorrError, ValueError):
    """Grid shapes are incompatible with the requested operation."""


class ZeroMass(AutocorrError, ValueError):
    """A grid that must carry positive total mass sums to zero or less."""


class InvalidParam(AutocorrError, ValueError):
    """A parameter lies outside its documented domain."""


class DomainError(AutocorrError, ValueError):
    """Operands violate a mathematical domain requirement."""


class DegenerateSignal(AutocorrError, ValueError):
    """A signal required to be nonzero is identically zero."""


class DivergedError(AutocorrError, ArithmeticError):
    """An iterate produced non-finite values or lost all mass."""


class MalformedFile(AutocorrError, ValueError):
    """A raster file does not conform to its declared format."""


class ConfigError(AutocorrError, ValueError):
    """An experiment configuration failed to parse or validate."""
