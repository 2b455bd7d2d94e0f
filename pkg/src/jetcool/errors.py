"""Exception hierarchy shared by all jetcool modules."""


class JetcoolError(Exception):
    """Base class for all toolkit errors."""


class InvalidInputError(JetcoolError, ValueError):
    """A numeric argument is out of its admissible domain (non-finite,
    non-positive where positivity is required, ...)."""


class InvalidGeometryError(InvalidInputError):
    """A geometric description is inconsistent (ratio >= 1, zero diameter...)."""


class NoFlowError(JetcoolError):
    """An evaluation was requested at zero flow."""


class InfeasibleError(JetcoolError):
    """A constraint target cannot be met anywhere in the searched range."""


class SolverError(JetcoolError):
    """A linear system or root-finding problem could not be solved."""


class NonPhysicalReductionError(JetcoolError):
    """Data reduction produced a non-physical state (surface colder than inlet)."""


class NonMonotoneConvergenceError(JetcoolError):
    """Grid-level solutions do not converge monotonically; the standard
    convergence-index analysis does not apply."""


class NonMeaningfulResistanceError(JetcoolError):
    """Thermal-resistance matrix entries requested for a measurement with more
    than one active heat source."""


class UnderdeterminedFitError(InvalidInputError):
    """Too few distinct samples to fit the requested model."""
