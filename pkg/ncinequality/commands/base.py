"""
Base command class for ncinequality subcommands.

All command implementations inherit from BaseCommand to ensure
consistent interface, input loading and error handling.
"""

import json
import re
from abc import ABC, abstractmethod
from typing import Any, NamedTuple, Optional

from tabulate import tabulate

from ..config import Settings
from ..logger import get_logger
from ..quantum import QuantumRealization, kcbs_realization, read_realization
from ..scenario import Scenario, build_cycle, read_scenario
from ..utils import format_float, round_float

# JSON strings wrapped in NUL markers are unquoted into raw number literals.
_RAW = "\x00"
_RAW_LITERAL = re.compile(r'"\\u0000([^"\\]+)\\u0000"')


class CommandResult(NamedTuple):
    """Exit code, text for the output stream and an optional note for stderr."""

    exit_code: int
    output: str
    message: Optional[str] = None


class BaseCommand(ABC):
    """Base class for all ncinequality commands."""

    def __init__(self, settings: Settings):
        """
        Initialize command with validated settings.

        Args:
            settings: Settings instance
        """
        self.settings = settings
        self.logger = get_logger()

    @abstractmethod
    def execute(self, config) -> CommandResult:
        """
        Execute the command.

        Args:
            config: RunConfig built by the CLI

        Returns:
            CommandResult

        Raises:
            NotImplementedError: Must be implemented by subclasses
        """
        raise NotImplementedError("Subclasses must implement execute()")

    def load_scenario(self, config) -> Scenario:
        """
        Build the scenario named by ``--n-cycle`` or read it from ``--scenario``.

        Raises:
            ValueError: If neither source is given
        """
        if config.n_cycle is not None:
            return build_cycle(config.n_cycle)
        if config.scenario_path:
            return read_scenario(config.scenario_path)
        raise ValueError("A scenario source is required (--n-cycle N or --scenario PATH)")

    def load_realization(self, config, scenario: Scenario) -> QuantumRealization:
        """
        Build the KCBS realization (``--kcbs``) or read ``--realization``.

        Raises:
            ValueError: If neither source is given
        """
        if config.kcbs:
            return kcbs_realization(len(scenario.measurements))
        if config.realization_path:
            return read_realization(config.realization_path)
        raise ValueError("A realization source is required (--kcbs or --realization PATH)")

    def to_json(self, payload: Any) -> str:
        """Deterministic JSON with floats rounded to 15 significant digits."""
        return dump_json(payload)

    def to_table(self, rows: list[dict[str, Any]]) -> str:
        """Grid table for terminal output."""
        return tabulate(rows, headers="keys", tablefmt="grid", floatfmt=".15g") + "\n"

    def handle_error(self, error: Exception, context: str = "") -> str:
        """
        Handle and format error messages.

        Args:
            error: Exception that occurred
            context: Additional context information

        Returns:
            Formatted error message
        """
        error_msg = f"Error: {str(error)}"
        if context:
            error_msg = f"{context}: {error_msg}"
        return error_msg


def dump_json(payload: Any) -> str:
    """
    Indented JSON with floats rounded to 15 significant digits. Floats in
    [1e15, 1e16) are written in the same lowercase scientific form as CSV cells.
    """
    text = json.dumps(_round_floats(payload), indent=2, ensure_ascii=False)
    return _RAW_LITERAL.sub(r"\1", text) + "\n"


def _round_floats(payload: Any) -> Any:
    if isinstance(payload, float):
        value = round_float(payload)
        # repr stays positional below 1e16
        if 1e15 <= abs(value) < 1e16:
            return f"{_RAW}{format_float(value)}{_RAW}"
        return value
    if isinstance(payload, dict):
        return {key: _round_floats(value) for key, value in payload.items()}
    if isinstance(payload, (list, tuple)):
        return [_round_floats(value) for value in payload]
    return payload
