"""Config parsing/serialization, run dispatch, exit codes, plot output."""

import json
import subprocess
import sys
from fractions import Fraction

import pytest

from ergolab.errors import ConfigError
from ergolab.harness import (ExperimentConfig, demo_kakutani, emit_plot_data,
                             parse_config, run)

F = Fraction

SPLINTER_CFG = """\
command = splinter
system = doubling
epsilon = 1/1048576
n_max = 64
set.J1 = 0..1/2
set.J2 = 0..1/2
"""

GAP_CFG = """\
command = gap
system = doubling
depth = 3
set.B = 0..1/2
"""

STALL_CFG = """\
command = splinter
system = rotation:1/3
epsilon = 1/1000000000
n_max = 150
stall_window = 100
set.J1 = 0..1/6
set.J2 = 1/2..2/3
"""


class TestConfigFormat:
    def test_round_trip_is_byte_exact(self):
        config = parse_config(SPLINTER_CFG)
        text = config.to_text()
        assert parse_config(text).to_text() == text

    def test_canonical_form_is_stable(self):
        # key order in the input does not affect the canonical serialization
        shuffled = "\n".join(reversed(SPLINTER_CFG.strip().split("\n"))) + "\n"
        assert parse_config(shuffled).to_text() \
            == parse_config(SPLINTER_CFG).to_text()

    def test_hash_tracks_content(self):
        a = parse_config(SPLINTER_CFG)
        b = parse_config(SPLINTER_CFG.replace("1/1048576", "1/1024"))
        assert a.digest() != b.digest()
        assert a.digest() == parse_config(SPLINTER_CFG).digest()

    def test_error_carries_line_number(self):
        with pytest.raises(ConfigError, match="line 2"):
            parse_config("command = gap\nnonsense line\n")

    def test_unknown_command_rejected(self):
        with pytest.raises(ConfigError):
            parse_config("command = explode\nsystem = doubling\n")

    def test_missing_required_fields(self):
        with pytest.raises(ConfigError):
            parse_config("command = gap\n")
        with pytest.raises(ConfigError):
            parse_config("system = doubling\n")

    def test_bad_set_text_rejected(self):
        with pytest.raises(ConfigError):
            parse_config("command = gap\nsystem = doubling\nset.B = oops\n")

    def test_irrational_sets_parse_with_system_tag(self):
        text = ("command = verify\nsystem = rotation:golden\n"
                "set.S = 1-1*alpha..5/4-1*alpha\n")
        config = parse_config(text)
        assert config.sets["S"].measure() == F(1, 4)


class TestRunDispatch:
    def test_splinter_converges_exit_zero(self):
        trace, code = run(parse_config(SPLINTER_CFG))
        assert code == 0
        assert trace.summary["status"] == "converged"
        assert trace.summary["depth"] == 20
        assert trace.records[0]["measure_B_n"] == "1/4"

    def test_gap_depth_three_gives_eight_unit_thetas(self):
        trace, code = run(parse_config(GAP_CFG))
        assert code == 0
        assert len(trace.records) == 8
        assert all(r["theta"] == "1" for r in trace.records)

    def test_stall_is_an_outcome_not_a_failure(self):
        trace, code = run(parse_config(STALL_CFG))
        assert code == 0
        assert trace.summary["status"] == "stalled"

    def test_determinism(self):
        a, _ = run(parse_config(SPLINTER_CFG))
        b, _ = run(parse_config(SPLINTER_CFG))
        assert a.to_columnar() == b.to_columnar()
        assert a.to_structured() == b.to_structured()

    def test_trace_header_carries_hash_and_notice(self):
        trace, _ = run(parse_config(GAP_CFG))
        assert trace.header["config_hash"] == parse_config(GAP_CFG).digest()
        assert "restriction" in trace.header

    def test_mixing_command(self):
        text = ("command = mixing\nsystem = doubling\nn_max = 6\nm = 6\n"
                "set.C = 0..1/2\nset.D = 0..1/2\n")
        trace, code = run(parse_config(text))
        assert code == 0
        assert all(r["trace"] == "0" for r in trace.records)
        assert trace.summary["cesaro_average"] == "1/4"

    def test_verify_command(self):
        text = ("command = verify\nsystem = odometer\n"
                "set.S = 0..1/2\nset.T = 1/4..5/8\n")
        trace, code = run(parse_config(text))
        assert code == 0
        assert all(r["preserved"] for r in trace.records)


class TestDemo:
    def test_demo_kakutani_passes(self):
        trace, code = demo_kakutani()
        assert code == 0
        by_check = {r["check"]: r for r in trace.records}
        assert by_check["total-measure"]["value"] == "5/3"
        assert by_check["odometer-discontinuities"]["value"] \
            == "0, 1/2, 3/4, 7/8, 15/16"
        assert all(r["pass"] for r in trace.records)


class TestPlotData:
    def test_csv_with_exact_sidecar(self, tmp_path):
        trace, _ = run(parse_config(SPLINTER_CFG))
        out = tmp_path / "plot.csv"
        written = emit_plot_data(trace, "csv", out)
        assert out in written
        lines = out.read_text().splitlines()
        assert lines[0].startswith("# artifact_version=")
        assert "0.25" in lines[2]
        sidecar = json.loads((tmp_path / "plot.csv.exact.json").read_text())
        assert sidecar["records"][0]["measure_B_n"] == "1/4"

    def test_structured_format(self, tmp_path):
        trace, _ = run(parse_config(GAP_CFG))
        out = tmp_path / "plot.json"
        emit_plot_data(trace, "structured", out)
        assert out.read_text().startswith("# artifact_version=")

    def test_empty_trace_yields_header_only(self, tmp_path):
        from ergolab.harness import RunTrace
        trace = RunTrace({"artifact_version": "x"}, [], {})
        out = tmp_path / "empty.csv"
        emit_plot_data(trace, "csv", out)
        lines = out.read_text().splitlines()
        assert len(lines) == 1 and lines[0].startswith("#")


class TestCliProcess:
    def _run(self, *args, cfg_text=None, tmp_path=None):
        argv = [sys.executable, "-m", "ergolab.cli", *args]
        if cfg_text is not None:
            cfg = tmp_path / "exp.cfg"
            cfg.write_text(cfg_text)
            argv += ["--config", str(cfg)]
        return subprocess.run(argv, capture_output=True, text=True)

    def test_run_exit_zero(self, tmp_path):
        proc = self._run("run", cfg_text=GAP_CFG, tmp_path=tmp_path)
        assert proc.returncode == 0
        assert "theta" in proc.stdout

    def test_config_error_exit_three(self, tmp_path):
        proc = self._run("run", cfg_text="command = bogus\n",
                         tmp_path=tmp_path)
        assert proc.returncode == 3
        assert "config error" in proc.stderr

    def test_missing_file_exit_three(self, tmp_path):
        proc = self._run("run", "--config", str(tmp_path / "absent.cfg"))
        assert proc.returncode == 3

    def test_demo_verb(self):
        proc = self._run("demo-kakutani")
        assert proc.returncode == 0
        assert "5/3" in proc.stdout

    def test_selftest_parallel(self):
        proc = self._run("selftest", "--parallel", "4")
        assert proc.returncode == 0
        assert "[pass]" in proc.stdout

    def test_emit_plot_files(self, tmp_path):
        proc = self._run("emit-plot", "--out", str(tmp_path),
                         cfg_text=SPLINTER_CFG, tmp_path=tmp_path)
        assert proc.returncode == 0
        assert list(tmp_path.glob("plot-*.csv"))
        assert list(tmp_path.glob("plot-*.csv.exact.json"))
