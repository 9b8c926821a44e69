"""
Sweep command: evaluate over a visibility grid and locate the critical visibility.
"""

from concurrent.futures import ThreadPoolExecutor, as_completed
from typing import Optional

import numpy as np

from ..inequality import derive
from ..utils import format_float, round_float
from .base import BaseCommand, CommandResult
from .evaluate import evaluate_at, evaluation_row, rows_to_csv


def check_range(v_from: float, v_to: float, steps: int) -> None:
    """
    Raises:
        ValueError: Unless steps >= 2 and 0 <= from < to <= 1
    """
    if steps < 2:
        raise ValueError(f"--steps must be at least 2, got {steps}")
    if not 0 <= v_from < v_to <= 1:
        raise ValueError(
            f"Visibility range must satisfy 0 <= from < to <= 1, got [{v_from}, {v_to}]"
        )


class SweepCommand(BaseCommand):
    """Sweep depolarizing visibility and report where the violation starts."""

    def execute(self, config) -> CommandResult:
        """
        Evaluate every grid point and bisect for the critical visibility v*.

        Rows are ordered by v whatever order the workers finish in. v* lies
        between the last non-violated grid point and the first violated one
        above it, refined on the continuous depolarize-evaluate map.

        Args:
            config: RunConfig with scenario, realization and range

        Returns:
            CommandResult; for csv output v* is reported on stderr
        """
        check_range(config.v_from, config.v_to, config.steps)
        scenario = self.load_scenario(config)
        params = derive(scenario).require_parameters()
        realization = self.load_realization(config, scenario)
        grid = [float(v) for v in np.linspace(config.v_from, config.v_to, config.steps)]

        def evaluate(v: float):
            ev = evaluate_at(params, realization, scenario, v, self.settings)
            self.logger.log_sweep_point(v, ev.margin, ev.violated)
            return ev

        threads = config.threads or self.settings.max_workers
        results = {}
        if threads > 1:
            with ThreadPoolExecutor(max_workers=threads) as executor:
                future_to_index = {executor.submit(evaluate, v): i for i, v in enumerate(grid)}
                for future in as_completed(future_to_index):
                    results[future_to_index[future]] = future.result()
        else:
            results = {i: evaluate(v) for i, v in enumerate(grid)}

        rows = [evaluation_row(v, results[i]) for i, v in enumerate(grid)]
        critical = self._critical_visibility(grid, [row["violated"] for row in rows], evaluate)
        self.logger.info(
            f"Sweep over {len(grid)} points, critical visibility: "
            f"{format_float(critical) if critical is not None else 'none'}"
        )

        fmt = config.output_format or "csv"
        message = None
        if fmt == "json":
            output = self.to_json({"rows": rows, "critical_visibility": critical})
        elif fmt == "table":
            output = self.to_table(rows) + self._critical_line(critical) + "\n"
        else:
            output = rows_to_csv(rows)
            message = self._critical_line(critical)
        return CommandResult(0, output, message)

    def _critical_visibility(self, grid, violated, evaluate) -> Optional[float]:
        for i in range(1, len(grid)):
            if violated[i] and not violated[i - 1]:
                low, high = grid[i - 1], grid[i]
                break
        else:
            return None

        while high - low > self.settings.bisection_tolerance:
            mid = (low + high) / 2
            if evaluate(mid).violated:
                high = mid
            else:
                low = mid
        return round_float((low + high) / 2)

    @staticmethod
    def _critical_line(critical: Optional[float]) -> str:
        if critical is None:
            return "critical_visibility: none"
        return f"critical_visibility: {format_float(critical)}"
