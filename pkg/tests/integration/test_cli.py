"""Integration tests for the meanfield command line."""

import csv
import json
import math

import pytest
from click.testing import CliRunner

from meanfield.cli import main
from meanfield.exceptions import MeanfieldError, ReplicationError

pytestmark = pytest.mark.integration

ARTIFACTS = {"maxima.csv", "histogram.csv", "report.json", "chart.svg"}


@pytest.fixture
def runner():
    """Provide a Click test runner."""
    return CliRunner()


def _run(runner, config_path, out, *extra):
    return runner.invoke(
        main, ["run", "--config", str(config_path), "--jobs", "1", "--out", str(out), *extra]
    )


def _read_csv(path):
    with open(path, newline="") as f:
        return list(csv.DictReader(f))


class TestRunCommand:
    """Test `meanfield run`."""

    def test_single_population_artifacts(self, runner, write_config, small_bank_config, temp_dir):
        """Test that one N writes the four artifacts directly into the output directory."""
        out = temp_dir / "out"
        result = _run(runner, write_config(small_bank_config), out)
        assert result.exit_code == 0, result.output
        assert {p.name for p in out.iterdir()} == ARTIFACTS

        histogram = _read_csv(out / "histogram.csv")
        assert len(histogram) == 10
        assert sum(int(row["count"]) for row in histogram) == 12

        maxima = _read_csv(out / "maxima.csv")
        assert len(maxima) == 12
        assert all(0.0 <= float(row["U"]) <= 1.0 for row in maxima)
        assert all(float(row["tau_N"]) > 0 for row in maxima)

        report = json.loads((out / "report.json").read_text())
        assert report["experiment"] == "quick_bank"
        assert report["base_seed"] == 7
        assert report["dt"] == 0.01
        assert report["normalizers"]["source"] == "deterministic"
        assert report["report"]["replications"] == 12
        assert len(report["report"]["maximum_edges"]) == 9
        assert "replay 0, N=20: uniformity" in result.output

    def test_reruns_are_byte_identical(self, runner, write_config, small_bank_config, temp_dir):
        """Test that the same config and seed reproduce maxima.csv exactly."""
        path = write_config(small_bank_config)
        assert _run(runner, path, temp_dir / "a").exit_code == 0
        assert _run(runner, path, temp_dir / "b").exit_code == 0
        first = (temp_dir / "a" / "maxima.csv").read_bytes()
        assert first == (temp_dir / "b" / "maxima.csv").read_bytes()

    def test_config_log_dir_enables_file_logging(
        self, runner, write_config, small_bank_config, temp_dir
    ):
        """Test that log_dir in the experiment section creates the rotating log file."""
        logs = temp_dir / "logs"
        text = small_bank_config.replace("seed = 7", f"seed = 7\nlog_dir = {logs}")
        result = _run(runner, write_config(text), temp_dir / "out")
        assert result.exit_code == 0, result.output
        assert (logs / "meanfield.log").exists()

    def test_worker_count_does_not_change_results(
        self, runner, write_config, small_bank_config, temp_dir
    ):
        """Test that serial and parallel runs agree byte for byte."""
        path = write_config(small_bank_config)
        assert _run(runner, path, temp_dir / "serial").exit_code == 0
        result = runner.invoke(
            main, ["run", "-c", str(path), "-j", "2", "-o", str(temp_dir / "parallel")]
        )
        assert result.exit_code == 0, result.output
        for name in ("maxima.csv", "histogram.csv"):
            assert (temp_dir / "serial" / name).read_bytes() == (
                temp_dir / "parallel" / name
            ).read_bytes()

    def test_missing_replications_writes_nothing(
        self, runner, write_config, small_bank_config, temp_dir
    ):
        """Test that a config error exits 2 before creating outputs."""
        out = temp_dir / "out"
        result = _run(runner, write_config(small_bank_config.replace("R = 12\n", "")), out)
        assert result.exit_code == 2
        assert "R" in result.output
        assert not out.exists()

    def test_missing_config_file(self, runner, temp_dir):
        """Test a config path that does not exist."""
        result = _run(runner, temp_dir / "absent.cfg", temp_dir / "out")
        assert result.exit_code == 2

    def test_runtime_failure_exits_three(
        self, runner, write_config, small_bank_config, temp_dir, mocker
    ):
        """Test that a failed replication exits 3."""
        mocker.patch(
            "meanfield.cli.run_experiment",
            side_effect=ReplicationError(20, 3, MeanfieldError("coefficient blow-up")),
        )
        result = _run(runner, write_config(small_bank_config), temp_dir / "out")
        assert result.exit_code == 3
        assert "Replication 3 at N=20" in result.output

    def test_replays_and_populations(self, runner, write_config, small_bank_config, temp_dir):
        """Test the directory layout and summary for several N and replays."""
        text = small_bank_config.replace("N = 20", "N = 20, 30").replace(
            "seed = 7", "seed = 7\nreplays = 2"
        )
        out = temp_dir / "out"
        result = _run(runner, write_config(text), out)
        assert result.exit_code == 0, result.output
        for replay in (0, 1):
            for count in (20, 30):
                target = out / f"replay{replay}" / f"N{count}"
                assert {p.name for p in target.iterdir()} == ARTIFACTS

        summary = _read_csv(out / "summary.csv")
        assert [(row["replay"], row["N"]) for row in summary] == [
            ("0", "20"), ("0", "30"), ("1", "20"), ("1", "30"),
        ]
        seeds = [
            json.loads((out / f"replay{r}" / "N20" / "report.json").read_text())["base_seed"]
            for r in (0, 1)
        ]
        assert seeds == [7, 8]

    def test_unwritable_output_exits_three(
        self, runner, write_config, small_bank_config, temp_dir
    ):
        """Test that an output path below a regular file is a runtime failure."""
        blocker = temp_dir / "file.txt"
        blocker.write_text("not a directory")
        result = _run(runner, write_config(small_bank_config), blocker / "out")
        assert result.exit_code == 3
        assert not isinstance(result.exception, OSError)

    def test_profile_overrides_dt(self, runner, write_config, small_bank_config, temp_dir):
        """Test that --profile replaces the file's dt."""
        text = small_bank_config.replace("t_star = 0.2", "t_star = 0.01")
        out = temp_dir / "out"
        result = _run(runner, write_config(text), out, "--profile", "fast")
        assert result.exit_code == 0, result.output
        assert json.loads((out / "report.json").read_text())["dt"] == 1e-3

    def test_iid_mode(self, runner, write_config, temp_dir):
        """Test exact sampling: no dt and no clock column."""
        text = (
            "[experiment]\nname = iid\nmode = iid_limit\nN = 100\nR = 40\nseed = 3\n"
            "[model]\nid = bank\n"
        )
        out = temp_dir / "out"
        result = _run(runner, write_config(text), out)
        assert result.exit_code == 0, result.output
        header = (out / "maxima.csv").read_text().splitlines()[0]
        assert header == "rep,seed,M,U"
        report = json.loads((out / "report.json").read_text())
        assert report["dt"] is None
        assert report["report"]["error_budget"]["discretization"] == 0.0

    def test_stochastic_mode_with_law_export(self, runner, write_config, temp_dir):
        """Test stochastic normalizers and law.csv."""
        text = (
            "[experiment]\nname = stoch\nmode = stochastic_norm\nN = 20\nR = 8\n"
            "t_star = 0.1\ndt = 0.01\nlaw_step = 0.01\nexport_law = true\nseed = 5\n"
            "[model]\nid = tanh_vol\nr0 = 1\n"
        )
        out = temp_dir / "out"
        result = _run(runner, write_config(text), out)
        assert result.exit_code == 0, result.output
        assert json.loads((out / "report.json").read_text())["normalizers"] is None
        law_rows = _read_csv(out / "law.csv")
        assert float(law_rows[-1]["t"]) == pytest.approx(0.1)


class TestLawCommand:
    """Test `meanfield law`."""

    def test_bank_law(self, runner, temp_dir):
        """Test sigma^2(1) = e^3 for the bank model."""
        out = temp_dir / "law.csv"
        result = runner.invoke(main, ["law", "bank", "--T", "1", "--h", "0.01", "--out", str(out)])
        assert result.exit_code == 0, result.output
        rows = _read_csv(out)
        assert len(rows) == 101
        assert float(rows[-1]["sigma2"]) == pytest.approx(20.0855, abs=1e-4)
        assert float(rows[-1]["tau"]) == pytest.approx(math.exp(3.0) - 1.0)

    def test_zero_horizon(self, runner, temp_dir):
        """Test that T = 0 writes a single row."""
        out = temp_dir / "law.csv"
        result = runner.invoke(main, ["law", "tanh_vol", "--T", "0", "--out", str(out)])
        assert result.exit_code == 0, result.output
        rows = _read_csv(out)
        assert len(rows) == 1
        assert float(rows[0]["sigma2"]) == 1.0

    def test_model_parameters(self, runner, temp_dir):
        """Test -p key=value parameters."""
        out = temp_dir / "law.csv"
        result = runner.invoke(
            main,
            ["law", "tanh_vol", "-p", "initial_variance=2", "--T", "0", "--out", str(out)],
        )
        assert result.exit_code == 0, result.output
        assert float(_read_csv(out)[0]["sigma2"]) == 2.0

    def test_unwritable_output_exits_three(self, runner, temp_dir):
        """Test that a law path below a regular file is a runtime failure."""
        blocker = temp_dir / "file.txt"
        blocker.write_text("not a directory")
        result = runner.invoke(
            main, ["law", "bank", "--T", "0", "--out", str(blocker / "out" / "law.csv")]
        )
        assert result.exit_code == 3
        assert "Cannot write" in result.output

    @pytest.mark.parametrize(
        "args",
        [
            ["law", "nonexistent"],
            ["law", "bank", "--T=-1"],
            ["law", "bank", "--h", "0"],
            ["law", "bank", "-p", "kappa"],
        ],
    )
    def test_invalid_input(self, runner, temp_dir, args):
        """Test that bad models and options exit 2."""
        result = runner.invoke(main, args + ["--out", str(temp_dir / "law.csv")])
        assert result.exit_code == 2
        assert not (temp_dir / "law.csv").exists()


class TestVerifyCommand:
    """Test `meanfield verify`."""

    def test_unknown_suite(self, runner):
        """Test that unknown suites are usage errors."""
        result = runner.invoke(main, ["verify", "nonexistent"])
        assert result.exit_code == 2

    def test_failed_criterion_exits_one(self, runner):
        """Test that an unmet criterion exits 1."""
        result = runner.invoke(main, ["verify", "moments", "-R", "1", "--sizes", "50", "-j", "1"])
        assert result.exit_code == 1
        assert "insufficient replications" in result.output

    def test_bad_sizes(self, runner):
        """Test rejection of a malformed size list."""
        result = runner.invoke(main, ["verify", "tau", "--sizes", "ten,twenty"])
        assert result.exit_code == 2

    @pytest.mark.slow
    @pytest.mark.statistical
    def test_strong_order_suite(self, runner):
        """Test that Euler-Maruyama shows strong order one half."""
        result = runner.invoke(main, ["verify", "strong-order"])
        assert result.exit_code == 0, result.output


class TestMainGroup:
    """Test the command group."""

    def test_version(self, runner):
        """Test --version."""
        result = runner.invoke(main, ["--version"])
        assert result.exit_code == 0
        assert "meanfield" in result.output

    def test_invalid_environment(self, runner, monkeypatch):
        """Test that invalid MEANFIELD_* values exit 2."""
        monkeypatch.setenv("MEANFIELD_JOBS", "0")
        result = runner.invoke(main, ["law", "bank", "--T", "0"])
        assert result.exit_code == 2
