"""
Tests for the command-line interface: exit codes, output formats and the
derive / evaluate / sweep pipelines.
"""

import io
import json

import pandas as pd
import pytest

from ncinequality import __version__
from ncinequality.cli import RunConfig, build_parser, main, parse_run_config
from ncinequality.commands.base import dump_json
from ncinequality.quantum import kcbs_realization, write_realization
from ncinequality.scenario import build_n_cycle, write_scenario

KCBS5_MARGIN = 0.078689
KCBS5_CRITICAL = 0.875932


def _run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def _json(capsys, *argv):
    code, out, err = _run(capsys, *argv)
    assert code == 0, err
    return json.loads(out)


class TestParser:
    """Argument parsing and usage errors."""

    def test_parse_evaluate(self):
        """Flags land in the RunConfig fields."""
        config = parse_run_config(
            ["evaluate", "--n-cycle", "5", "--kcbs", "--visibility", "0.9", "--format", "csv"]
        )
        assert config == RunConfig(
            command="evaluate",
            n_cycle=5,
            kcbs=True,
            visibility=0.9,
            output_format="csv",
        )

    def test_parse_sweep_range(self):
        """--from and --to map to v_from and v_to."""
        config = parse_run_config(
            ["sweep", "--n-cycle", "5", "--kcbs", "--from", "0.8", "--to", "1", "--steps", "21"]
        )
        assert (config.v_from, config.v_to, config.steps) == (0.8, 1.0, 21)
        assert config.threads is None

    def test_usage_errors_exit_one(self):
        """argparse errors are input errors (1), never 2."""
        for argv in (
            ["derive"],
            ["derive", "--n-cycle", "5", "--scenario", "x.json"],
            ["evaluate", "--n-cycle", "5"],
            ["derive", "--n-cycle", "five"],
            ["unknown"],
            [],
        ):
            with pytest.raises(SystemExit) as excinfo:
                parse_run_config(argv)
            assert excinfo.value.code == 1

    def test_version(self, capsys):
        """--version prints the package version."""
        with pytest.raises(SystemExit) as excinfo:
            build_parser().parse_args(["--version"])
        assert excinfo.value.code == 0
        assert __version__ in capsys.readouterr().out


class TestDerive:
    """ncinequality derive."""

    def test_five_cycle_report(self, capsys):
        """Parameters, counts and saturability of the 5-cycle."""
        report = _json(capsys, "derive", "--n-cycle", "5")
        assert report["r_det"] == "4/5"
        assert report["r_ind"] == "1/1"
        assert report["corr_ind"] == "1/2"
        assert report["n_det"] == 32
        assert report["n_ind"] == 16
        assert report["n_vertices"] == 48
        assert report["saturable"] is True
        assert report["inequality"] == "Corr <= 1 - p*·(1-1/2)·(R-4/5)/(1/1-4/5)"

    def test_seven_cycle_report(self, capsys):
        """r_det = 6/7 and 192 vertices."""
        report = _json(capsys, "derive", "--n-cycle", "7")
        assert report["r_det"] == "6/7"
        assert report["n_vertices"] == 192

    def test_scenario_file(self, capsys, tmp_path):
        """--scenario reads the file format."""
        path = tmp_path / "three.json"
        write_scenario(build_n_cycle(3), path)
        report = _json(capsys, "derive", "--scenario", str(path))
        assert report["r_det"] == "2/3"
        assert report["n_vertices"] == 12

    def test_missing_file(self, capsys, tmp_path):
        """An unreadable scenario file exits 1 with an error on stderr."""
        code, out, err = _run(capsys, "derive", "--scenario", str(tmp_path / "nope.json"))
        assert code == 1
        assert out == ""
        assert "Error:" in err

    def test_malformed_file(self, capsys, tmp_path):
        """Parse errors exit 1."""
        path = tmp_path / "bad.json"
        path.write_text("{")
        code, _, err = _run(capsys, "derive", "--scenario", str(path))
        assert code == 1
        assert "line 1" in err

    def test_even_cycle_is_not_a_proof(self, capsys):
        """The 4-cycle exits 2 and the report carries a diagnosis."""
        code, out, err = _run(capsys, "derive", "--n-cycle", "4")
        assert code == 2
        report = json.loads(out)
        assert report["diagnosis"]["error"] == "NotAStatisticalProofError"
        assert "r_det" not in report
        assert report["n_vertices"] == 24
        assert "Not a statistical proof" in err

    def test_csv_vertex_dump(self, capsys):
        """--format csv dumps every vertex table entry."""
        code, out, _ = _run(capsys, "derive", "--n-cycle", "5", "--format", "csv")
        assert code == 0
        frame = pd.read_csv(io.StringIO(out))
        assert list(frame.columns) == [
            "vertex",
            "context",
            "outcome_tuple",
            "value_num",
            "value_den",
            "kind",
        ]
        assert frame["vertex"].nunique() == 48
        assert len(frame) == 48 * 20

    def test_table_format(self, capsys):
        """--format table renders a grid."""
        code, out, _ = _run(capsys, "derive", "--n-cycle", "5", "--format", "table")
        assert code == 0
        assert out.startswith("+")
        assert "r_det" in out
        assert "4/5" in out

    def test_out_file(self, capsys, tmp_path):
        """--out writes the report instead of printing it."""
        path = tmp_path / "report.json"
        code, out, _ = _run(capsys, "derive", "--n-cycle", "3", "--out", str(path))
        assert code == 0
        assert out == ""
        assert json.loads(path.read_text())["r_det"] == "2/3"

    @pytest.mark.parametrize("fmt", ["json", "csv"])
    def test_repeated_runs_are_byte_identical(self, capsys, fmt):
        """Deriving twice writes the same bytes."""
        first = _run(capsys, "derive", "--n-cycle", "5", "--format", fmt)
        second = _run(capsys, "derive", "--n-cycle", "5", "--format", fmt)
        assert first[0] == second[0] == 0
        assert first[1].encode() == second[1].encode()


class TestEvaluate:
    """ncinequality evaluate."""

    def test_ideal_kcbs(self, capsys):
        """The ideal 5-cycle realization violates the bound."""
        report = _json(capsys, "evaluate", "--n-cycle", "5", "--kcbs")
        assert report["visibility"] == 1.0
        assert report["corr"] == pytest.approx(1.0, abs=1e-10)
        assert report["r"] == pytest.approx(0.894427191, abs=1e-9)
        assert report["p_star"] == pytest.approx(1 / 3, abs=1e-12)
        assert report["violated"] is True
        assert report["margin"] == pytest.approx(KCBS5_MARGIN, abs=1e-5)
        assert report["noise_threshold"] == pytest.approx(5 / 6, abs=1e-12)
        assert report["equivalences_passed"] is True
        assert report["parameters"] == {"r_det": "4/5", "r_ind": "1/1", "corr_ind": "1/2"}

    def test_p_star_one_third_reports_slope(self, capsys):
        """At p* = 1/3 the specialized bound matches the general one."""
        report = _json(capsys, "evaluate", "--n-cycle", "5", "--kcbs")
        assert report["xu_slope"] == "5/6"
        assert report["xu_rhs"] == pytest.approx(report["rhs"], abs=1e-12)

    def test_half_visibility(self, capsys):
        """v = 0.5 does not violate; the exit code is still 0."""
        report = _json(capsys, "evaluate", "--n-cycle", "5", "--kcbs", "--visibility", "0.5")
        assert report["violated"] is False
        assert report["margin"] < 0

    def test_full_visibility_is_identity(self, capsys):
        """--visibility 1.0 gives the same bytes as no noise."""
        _, plain, _ = _run(capsys, "evaluate", "--n-cycle", "5", "--kcbs")
        _, full, _ = _run(capsys, "evaluate", "--n-cycle", "5", "--kcbs", "--visibility", "1.0")
        assert plain == full

    def test_around_critical_visibility(self, capsys):
        """Just above v* violates, just below does not."""
        args = ("evaluate", "--n-cycle", "5", "--kcbs", "--visibility")
        above = _json(capsys, *args, str(KCBS5_CRITICAL + 1e-3))
        below = _json(capsys, *args, str(KCBS5_CRITICAL - 1e-3))
        assert above["violated"] is True
        assert below["violated"] is False

    def test_csv_row(self, capsys):
        """--format csv gives the sweep header and one row."""
        code, out, _ = _run(capsys, "evaluate", "--n-cycle", "5", "--kcbs", "--format", "csv")
        assert code == 0
        lines = out.splitlines()
        assert lines[0] == "v,corr,r,p_star,rhs,margin,violated"
        assert len(lines) == 2
        assert lines[1].startswith("1,")
        assert lines[1].endswith(",true")

    def test_realization_file(self, capsys, tmp_path):
        """--realization reads a dumped realization."""
        path = tmp_path / "kcbs.json"
        write_realization(kcbs_realization(5), path)
        report = _json(capsys, "evaluate", "--n-cycle", "5", "--realization", str(path))
        assert report["margin"] == pytest.approx(KCBS5_MARGIN, abs=1e-5)

    def test_mismatched_realization(self, capsys, tmp_path):
        """A realization of another cycle is an input error."""
        path = tmp_path / "kcbs.json"
        write_realization(kcbs_realization(5), path)
        code, _, err = _run(capsys, "evaluate", "--n-cycle", "7", "--realization", str(path))
        assert code == 1
        assert "Error:" in err

    def test_visibility_out_of_range(self, capsys):
        """Visibility outside [0, 1] exits 1."""
        code, _, _ = _run(capsys, "evaluate", "--n-cycle", "5", "--kcbs", "--visibility", "1.5")
        assert code == 1

    def test_not_a_proof(self, capsys):
        """Evaluating against an even cycle exits 2."""
        code, _, err = _run(capsys, "evaluate", "--n-cycle", "4", "--kcbs")
        assert code == 2
        assert "Not a statistical proof" in err


class TestSweep:
    """ncinequality sweep."""

    ARGS = ("sweep", "--n-cycle", "5", "--kcbs", "--from", "0.8", "--to", "1.0", "--steps", "21")

    def test_csv_grid(self, capsys):
        """21 rows, increasing margin, v* on stderr."""
        code, out, err = _run(capsys, *self.ARGS)
        assert code == 0
        frame = pd.read_csv(io.StringIO(out))
        assert len(frame) == 21
        assert frame["v"].iloc[0] == pytest.approx(0.8)
        assert frame["v"].iloc[-1] == pytest.approx(1.0)
        assert frame["margin"].is_monotonic_increasing
        assert frame["margin"].iloc[-1] == pytest.approx(KCBS5_MARGIN, abs=1e-5)
        violated = frame.set_index(frame["v"].round(2))["violated"]
        assert not violated[0.87]
        assert violated[0.88]
        assert "critical_visibility: 0.8759" in err

    def test_margin_is_affine_in_visibility(self, capsys):
        """First, middle and last grid points are collinear in (v, margin)."""
        _, out, _ = _run(capsys, *self.ARGS)
        frame = pd.read_csv(io.StringIO(out))
        (v0, m0), (v1, m1), (v2, m2) = (
            (frame["v"].iloc[i], frame["margin"].iloc[i]) for i in (0, 10, 20)
        )
        assert (m1 - m0) * (v2 - v0) == pytest.approx((m2 - m0) * (v1 - v0), abs=1e-9)

    def test_json_critical_visibility(self, capsys):
        """The bisected v* lies between the bracketing grid points."""
        payload = _json(capsys, *self.ARGS, "--format", "json")
        assert len(payload["rows"]) == 21
        assert payload["critical_visibility"] == pytest.approx(KCBS5_CRITICAL, abs=1e-5)
        assert 0.87 < payload["critical_visibility"] < 0.88

    def test_no_violation_in_range(self, capsys):
        """A range below v* reports none."""
        payload = _json(
            capsys,
            "sweep", "--n-cycle", "5", "--kcbs", "--from", "0", "--to", "0.5", "--format", "json",
        )
        assert payload["critical_visibility"] is None
        assert not any(row["violated"] for row in payload["rows"])

    def test_table_format(self, capsys):
        """The table ends with the critical visibility line."""
        code, out, _ = _run(capsys, *self.ARGS, "--format", "table")
        assert code == 0
        assert out.rstrip().splitlines()[-1].startswith("critical_visibility: 0.8759")

    def test_threads_do_not_change_output(self, capsys):
        """Rows come back in grid order with any worker count."""
        _, serial, _ = _run(capsys, *self.ARGS, "--threads", "1")
        _, parallel, _ = _run(capsys, *self.ARGS, "--threads", "4")
        assert serial == parallel

    def test_seven_cycle(self, capsys):
        """The 7-cycle KCBS realization also has a critical visibility below 1."""
        payload = _json(
            capsys,
            "sweep", "--n-cycle", "7", "--kcbs", "--from", "0.5", "--steps", "6",
            "--format", "json",
        )
        assert payload["critical_visibility"] is not None
        assert payload["critical_visibility"] < 1

    @pytest.mark.parametrize(
        "extra",
        [
            ("--from", "0.9", "--to", "0.9"),
            ("--from", "0.9", "--to", "0.8"),
            ("--steps", "1"),
            ("--to", "1.5"),
        ],
    )
    def test_bad_range(self, capsys, extra):
        """Empty, reversed or out-of-range grids exit 1."""
        code, _, err = _run(capsys, "sweep", "--n-cycle", "5", "--kcbs", *extra)
        assert code == 1
        assert "Error:" in err

    def test_config_file(self, capsys, tmp_config):
        """--config settings reach the command."""
        path = tmp_config({"bisection_tolerance": 0.01, "max_workers": 2})
        payload = _json(capsys, *self.ARGS, "--format", "json", "--config", path)
        assert payload["critical_visibility"] == pytest.approx(KCBS5_CRITICAL, abs=0.01)


class TestJsonOutput:
    """Float formatting of JSON reports."""

    def test_rounds_to_fifteen_digits(self):
        assert dump_json({"x": 0.1 + 0.2, "y": [1.0, 1 / 3]}) == (
            '{\n  "x": 0.3,\n  "y": [\n    1.0,\n    0.333333333333333\n  ]\n}\n'
        )

    def test_scientific_from_1e15(self):
        """Large floats switch to lowercase scientific form at 1e15, like CSV cells."""
        text = dump_json({"big": 2.5e15, "neg": -1e15, "label": "2.5e15"})
        assert '"big": 2.5e+15' in text
        assert '"neg": -1e+15' in text
        assert '"label": "2.5e15"' in text
        assert json.loads(text)["big"] == 2.5e15
