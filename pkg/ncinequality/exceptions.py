"""Exception hierarchy for ncinequality."""

from typing import Optional


class NCIError(Exception):
    """Base class for all library errors."""


class ScenarioParseError(NCIError, ValueError):
    """A scenario file could not be parsed.

    Carries either a line/column position (malformed JSON) or a field path
    such as ``measurements[2].outcomes`` (well-formed JSON, wrong shape).
    """

    def __init__(
        self,
        message: str,
        line: Optional[int] = None,
        column: Optional[int] = None,
        field: Optional[str] = None,
    ):
        self.line = line
        self.column = column
        self.field = field
        location = ""
        if line is not None:
            location = f" (line {line}, column {column})"
        elif field is not None:
            location = f" (field {field})"
        super().__init__(f"{message}{location}")


class ScenarioValidationError(NCIError, ValueError):
    """A scenario violates one or more invariants."""

    def __init__(self, violations: list):
        self.violations = list(violations)
        details = "; ".join(f"[{v.code}] {v.message}" for v in self.violations)
        super().__init__(f"Invalid scenario: {details}")


class InfeasibleSystemError(NCIError):
    """The constraint system has no point, or describes an unbounded set."""


class NotAStatisticalProofError(NCIError):
    """The scenario and functional do not form a statistical proof (R_ind <= R_det)."""


class LogicalProofError(NotAStatisticalProofError):
    """No deterministic vertex exists: the scenario is a logical proof."""


class DegenerateScenarioError(NotAStatisticalProofError):
    """No indeterministic vertex exists, or they never lower Corr below 1."""


class IncompatibleMeasurementsError(NCIError, ValueError):
    """Measurements cannot be jointly implemented by the requested construction."""


class TranslationError(NCIError, ValueError):
    """A three-outcome cycle does not translate to a four-outcome one."""


class RealizationError(NCIError, ValueError):
    """A quantum realization is malformed or does not match its scenario."""
