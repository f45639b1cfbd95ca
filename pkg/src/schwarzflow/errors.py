class SolverError(Exception):
    """Base class for all solver failures."""


class DomainError(SolverError, ValueError):
    """Input lies outside the region where a formula is defined."""


class ConfigError(SolverError, ValueError):
    pass


class InversionError(SolverError, ValueError):
    pass


class RangeError(SolverError, OverflowError):
    pass


class HalfCurveError(DomainError):
    pass


class NumericalError(SolverError, RuntimeError):
    pass


class MisuseError(SolverError, ValueError):
    pass


class CflError(ConfigError):
    """Time step too large for the mesh width."""
