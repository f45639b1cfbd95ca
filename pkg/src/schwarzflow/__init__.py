"""Isothermal relativistic fluid flows on a Schwarzschild exterior."""
from .errors import (CflError, ConfigError, DomainError, HalfCurveError, InversionError,
                     MisuseError, NumericalError, RangeError, SolverError)
from .model import (ConservedPair, FluidState, InvariantPair, ModelKind, PhysParams,
                    PressureLaw, classify_pressure_law, conserved, eigenvalues, flux,
                    primitive_from_conserved, riemann_invariants, source,
                    state_from_invariants)

__version__ = "0.1.0"
