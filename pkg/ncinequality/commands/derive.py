"""
Derive command: scenario -> polytope -> vertices -> parameters -> report.
"""

from ..inequality import derivation_report, derive
from ..polytope import vertex_csv
from .base import BaseCommand, CommandResult


class DeriveCommand(BaseCommand):
    """Derive the noise-robust inequality of a scenario."""

    def execute(self, config) -> CommandResult:
        """
        Run the derivation pipeline.

        Formats: ``json`` (derivation report), ``csv`` (vertex dump),
        ``table`` (report as a grid).

        Args:
            config: RunConfig with a scenario source

        Returns:
            CommandResult with exit code 0, or 2 when the scenario is not a
            statistical proof (the report then carries a diagnosis)

        Example:
            >>> cmd = DeriveCommand(settings)
            >>> cmd.execute(RunConfig(command="derive", n_cycle=5)).exit_code
            0
        """
        scenario = self.load_scenario(config)
        derivation = derive(scenario)
        report = derivation_report(derivation)
        exit_code = 0 if derivation.parameters is not None else 2
        message = None
        if derivation.failure is not None:
            message = self.handle_error(derivation.failure, "Not a statistical proof")

        fmt = config.output_format or "json"
        if fmt == "csv":
            output = vertex_csv(derivation.vertices)
        elif fmt == "table":
            rows = [
                {"field": key, "value": value}
                for key, value in report.items()
                if not isinstance(value, dict)
            ]
            output = self.to_table(rows)
        else:
            output = self.to_json(report)
        return CommandResult(exit_code, output, message)
