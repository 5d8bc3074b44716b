"""Typed exceptions shared across the solver library."""


class BnesError(Exception):
    """Base class for all library errors."""


class InvalidState(BnesError):
    """A state left the admissible phase space.

    Carries the violated constraint, the phase index (0-based, or None when
    the constraint is not phase specific) and an optional location hint.
    """

    def __init__(self, constraint, phase=None, where=None, value=None):
        self.constraint = constraint
        self.phase = phase
        self.where = where
        self.value = value
        parts = [constraint]
        if phase is not None:
            parts.append(f"phase {phase + 1}")
        if where is not None:
            parts.append(f"at {where}")
        if value is not None:
            parts.append(f"value {value!r}")
        super().__init__(", ".join(str(p) for p in parts))


class DegenerateState(BnesError):
    """Thermodynamic bracket rho*e - p_inf is nonpositive."""


class NonPositiveArgument(BnesError, ValueError):
    """Logarithmic mean called with a nonpositive argument."""


class UnsupportedDegree(BnesError, ValueError):
    """Requested polynomial degree outside the supported range."""


class NonFiniteBound(BnesError):
    """The CFL bound evaluated to a non-finite number."""


class PositivityFailure(BnesError):
    """A cell-averaged partial density or void fraction left its bounds."""

    def __init__(self, message, cell=None):
        self.cell = cell
        super().__init__(message)


class AveragePreconditionViolated(BnesError):
    """Limiter called on an element whose cell average is out of bounds."""


class MeshMismatch(BnesError, ValueError):
    """Two fields that must share mesh and degree do not."""


class UnknownCase(BnesError, KeyError):
    """Case name not present in the catalog."""


class NotApplicable(BnesError):
    """Operation does not apply to this case."""


class ConfigError(BnesError):
    """Run configuration failed to parse or validate."""


class CaseError(BnesError):
    """Case setup failed (bad override, invalid initial condition)."""


class IoError(BnesError):
    """Snapshot or report could not be written."""
