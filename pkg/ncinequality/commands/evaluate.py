"""
Evaluate command: check a quantum realization against the derived bound.
"""

from fractions import Fraction
from typing import Any, Optional

import pandas as pd

from ..config import Settings
from ..inequality import (
    BoundEvaluation,
    InequalityParameters,
    derive,
    evaluate_bound,
    noise_threshold,
    xu_rhs,
)
from ..quantum import (
    QuantumRealization,
    check_operational_equivalences,
    depolarize,
    evaluate_realization,
)
from ..scenario import Scenario
from ..utils import FLOAT_FORMAT, format_bool, format_fraction
from .base import BaseCommand, CommandResult

SWEEP_COLUMNS = ["v", "corr", "r", "p_star", "rhs", "margin", "violated"]


def evaluate_at(
    params: InequalityParameters,
    realization: QuantumRealization,
    scenario: Scenario,
    visibility: Optional[float],
    settings: Settings,
) -> BoundEvaluation:
    """Depolarize (unless ``visibility`` is None), evaluate and compare to the bound."""
    if visibility is not None:
        realization = depolarize(realization, visibility)
    stats = evaluate_realization(realization, scenario)
    return evaluate_bound(
        params, stats.corr, stats.r, stats.p_star, tolerance=settings.comparison_tolerance
    )


def evaluation_row(v: float, ev: BoundEvaluation) -> dict[str, Any]:
    """One record in the sweep column order."""
    return {
        "v": v,
        "corr": ev.corr,
        "r": ev.r,
        "p_star": ev.p_star,
        "rhs": ev.rhs,
        "margin": ev.margin,
        "violated": ev.violated,
    }


def rows_to_csv(rows: list[dict[str, Any]]) -> str:
    """CSV with the fixed sweep header and lowercase booleans."""
    frame = pd.DataFrame.from_records(rows, columns=SWEEP_COLUMNS)
    frame["violated"] = frame["violated"].map(format_bool)
    return frame.to_csv(index=False, float_format=FLOAT_FORMAT, lineterminator="\n")


class EvaluateCommand(BaseCommand):
    """Evaluate a realization of a scenario."""

    def execute(self, config) -> CommandResult:
        """
        Compute (Corr, R, p*), the bound, the violation flag and margin.

        Violation is data: the exit code is 0 whether or not the bound is
        violated.

        Args:
            config: RunConfig with scenario and realization sources

        Returns:
            CommandResult

        Raises:
            NotAStatisticalProofError: If the scenario yields no bound
            RealizationError: If the realization does not match the scenario
        """
        scenario = self.load_scenario(config)
        params = derive(scenario).require_parameters()
        realization = self.load_realization(config, scenario)
        if config.visibility is not None:
            realization = depolarize(realization, config.visibility)

        ev = evaluate_at(params, realization, scenario, None, self.settings)
        equivalences = check_operational_equivalences(
            realization, tol=self.settings.structural_tolerance
        )
        self.logger.log_equivalence_failures(equivalences.failures)

        visibility = 1.0 if config.visibility is None else float(config.visibility)
        report: dict[str, Any] = {
            "visibility": visibility,
            "corr": ev.corr,
            "r": ev.r,
            "p_star": ev.p_star,
            "rhs": ev.rhs,
            "margin": ev.margin,
            "violated": ev.violated,
            "noise_threshold": (
                float(noise_threshold(params, ev.p_star)) if ev.p_star > 0 else None
            ),
            "equivalences_passed": equivalences.passed,
            "parameters": {
                "r_det": format_fraction(params.r_det),
                "r_ind": format_fraction(params.r_ind),
                "corr_ind": format_fraction(params.corr_ind),
            },
        }
        if abs(ev.p_star - 1 / 3) < self.settings.pstar_match_tolerance:
            report["xu_rhs"] = float(xu_rhs(len(scenario.corr_pairing), ev.r))
            report["xu_slope"] = format_fraction(
                Fraction(1, 3) * (1 - params.corr_ind) / (params.r_ind - params.r_det)
            )

        fmt = config.output_format or "json"
        if fmt == "csv":
            output = rows_to_csv([evaluation_row(visibility, ev)])
        elif fmt == "table":
            rows = [
                {"field": key, "value": value}
                for key, value in report.items()
                if not isinstance(value, dict)
            ]
            output = self.to_table(rows)
        else:
            output = self.to_json(report)
        return CommandResult(0, output)
