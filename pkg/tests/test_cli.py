import io
import json
import xml.etree.ElementTree as ET

import numpy as np
import pytest

import specpmf.cli as cli_mod
from specpmf.cli import main
from specpmf.errors import NumericalError


def run_cli(args, stdin_text=None, monkeypatch=None):
    if stdin_text is not None:
        assert monkeypatch is not None
        monkeypatch.setattr("sys.stdin", io.StringIO(stdin_text))
    return main(args)


class TestEstimate:
    def test_stdin_json_smoke(self, capsys, monkeypatch):
        code = run_cli(["estimate", "--k", "3"], "0\n0\n1\n", monkeypatch)
        assert code == 0
        doc = json.loads(capsys.readouterr().out)
        assert doc["N"] == 2
        assert doc["n"] == 3
        assert sum(doc["q"]) == pytest.approx(1.0, abs=1e-12)
        assert doc["support_offset"] == 0
        assert doc["diagnostics"]["empirical"] == [2 / 3, 1 / 3]

    def test_auto_is_default(self, capsys, monkeypatch):
        code = run_cli(["estimate"], "1\n2\n2\n3\n3\n3\n", monkeypatch)
        assert code == 0
        doc = json.loads(capsys.readouterr().out)
        assert "risk_curve" in doc["diagnostics"]
        assert doc["k_used"] >= 1

    def test_csv_column_with_negatives_and_shift(self, tmp_path, capsys):
        src = tmp_path / "balances.csv"
        src.write_text("id,balance\n1,-3\n2,-1\n3,4\n4,-3\n")
        code = main(["estimate", str(src), "--column", "balance", "--shift-min", "--k", "2"])
        assert code == 0
        doc = json.loads(capsys.readouterr().out)
        assert doc["support_offset"] == -3
        assert doc["N"] == 8  # shifted support 0..7
        # original coordinates recoverable: argmax index + offset is a real value
        values = [-3, -1, 4, -3]
        assert doc["support_offset"] + int(np.argmax(doc["diagnostics"]["empirical"])) in values

    def test_negative_without_shift_exits_2(self, tmp_path, capsys):
        src = tmp_path / "neg.txt"
        src.write_text("-3\n1\n")
        assert main(["estimate", str(src)]) == 2
        assert "--shift-min" in capsys.readouterr().err

    def test_drop_zeros(self, capsys, monkeypatch):
        code = run_cli(["estimate", "--drop-zeros", "--k", "2"],
                       "0\n0\n0\n5\n7\n", monkeypatch)
        assert code == 0
        doc = json.loads(capsys.readouterr().out)
        assert doc["n"] == 2

    def test_scale_quantizes(self, capsys, monkeypatch):
        code = run_cli(["estimate", "--scale", "10", "--k", "2"],
                       "0.1\n0.3\n0.3\n", monkeypatch)
        assert code == 0
        doc = json.loads(capsys.readouterr().out)
        assert doc["N"] == 4
        assert doc["diagnostics"]["empirical"][3] == pytest.approx(2 / 3)

    def test_fractional_without_scale_exits_2(self, capsys, monkeypatch):
        code = run_cli(["estimate"], "0.5\n1\n", monkeypatch)
        assert code == 2
        assert "--scale" in capsys.readouterr().err

    def test_parse_error_reports_line(self, capsys, monkeypatch):
        code = run_cli(["estimate"], "1\n2\nabc\n", monkeypatch)
        assert code == 2
        assert "line 3" in capsys.readouterr().err

    def test_csv_output_round_trip(self, tmp_path):
        src = tmp_path / "vals.txt"
        src.write_text("0\n1\n1\n2\n")
        out = tmp_path / "est.csv"
        code = main(["estimate", str(src), "--k", "2", "--format", "csv", "--out", str(out)])
        assert code == 0
        lines = out.read_text().strip().splitlines()
        assert lines[0] == "value,probability"
        probs = [float(line.split(",")[1]) for line in lines[1:]]
        assert sum(probs) == pytest.approx(1.0, abs=1e-12)
        assert [line.split(",")[0] for line in lines[1:]] == ["0", "1", "2"]

    def test_numerical_failure_exits_3(self, monkeypatch, capsys):
        def boom(*a, **kw):
            raise NumericalError("injected")

        monkeypatch.setattr(cli_mod, "estimate_auto", boom)
        monkeypatch.setattr("sys.stdin", io.StringIO("0\n1\n"))
        assert main(["estimate"]) == 3
        assert "numerical failure" in capsys.readouterr().err

    def test_byte_identical_reruns(self, tmp_path):
        src = tmp_path / "vals.txt"
        src.write_text("\n".join(str(v % 23) for v in range(200)) + "\n")
        outs = []
        for name in ("a.json", "b.json"):
            out = tmp_path / name
            assert main(["estimate", str(src), "--auto", "--out", str(out)]) == 0
            outs.append(out.read_bytes())
        assert outs[0] == outs[1]

    def test_missing_file_exits_2(self, capsys):
        assert main(["estimate", "/definitely/not/here.txt"]) == 2

    def test_unknown_column_exits_2(self, tmp_path, capsys):
        src = tmp_path / "d.csv"
        src.write_text("a,b\n1,2\n")
        assert main(["estimate", str(src), "--column", "c"]) == 2


class TestBench:
    def test_small_grid_writes_everything(self, tmp_path, capsys):
        out = tmp_path / "results"
        code = main(["bench", "--presets", "zipf", "--sizes", "100", "--trials", "2",
                     "--methods", "empirical,kde", "--seed", "7", "--out", str(out)])
        assert code == 0
        table = capsys.readouterr().out
        assert "zipf" in table and "kde" in table
        for name in ("results.csv", "results.json", "summary.csv", "summary.json"):
            assert (out / name).exists()
        header = (out / "results.csv").read_text().splitlines()[0]
        assert header == "preset,n,method,trial,l1,l2,tv,kl_true_to_est,k_used,status"
        rows = json.loads((out / "results.json").read_text())["rows"]
        assert len(rows) == 4  # 1 preset x 1 size x 2 trials x 2 methods

    def test_unknown_preset_exits_2(self, tmp_path, capsys):
        code = main(["bench", "--presets", "nope", "--out", str(tmp_path / "x")])
        assert code == 2
        assert "known presets" in capsys.readouterr().err

    def test_byte_identical_with_same_seed(self, tmp_path, capsys):
        blobs = []
        for sub in ("r1", "r2"):
            out = tmp_path / sub
            code = main(["bench", "--presets", "centered-zipf", "--sizes", "100,400",
                         "--trials", "2", "--seed", "7", "--out", str(out)])
            assert code == 0
            blobs.append({
                name: (out / name).read_bytes()
                for name in ("results.csv", "results.json", "summary.csv", "summary.json")
            })
        capsys.readouterr()
        assert blobs[0] == blobs[1]


class TestPlot:
    def _estimate_file(self, tmp_path, name, values, k=3):
        src = tmp_path / f"{name}.txt"
        src.write_text("\n".join(str(v) for v in values) + "\n")
        out = tmp_path / f"{name}.json"
        assert main(["estimate", str(src), "--k", str(k), "--support", "100",
                     "--out", str(out)]) == 0
        return out

    def test_single_estimate_svg_parses(self, tmp_path, capsys):
        est = self._estimate_file(tmp_path, "one", [3, 5, 5, 9, 50])
        out = tmp_path / "plot.svg"
        assert main(["plot", str(est), "--out", str(out)]) == 0
        root = ET.fromstring(out.read_text())
        assert root.tag.endswith("svg")

    def test_two_estimates_distinct_colors(self, tmp_path, capsys):
        a = self._estimate_file(tmp_path, "a", [3, 5, 5, 9, 50])
        b = self._estimate_file(tmp_path, "b", [3, 5, 5, 9, 50], k=6)
        out = tmp_path / "two.svg"
        assert main(["plot", str(a), str(b), "--out", str(out)]) == 0
        svg = out.read_text()
        assert "#1f77b4" in svg and "#d62728" in svg

    def test_truth_overlay_and_log_y(self, tmp_path, capsys):
        est = self._estimate_file(tmp_path, "c", [0, 1, 2, 3, 60])
        truth = np.zeros(100)
        truth[:70] = 1 / 70.0
        truth_file = tmp_path / "truth.json"
        truth_file.write_text(json.dumps({"pmf": truth.tolist()}))
        out = tmp_path / "log.svg"
        assert main(["plot", str(est), "--truth", str(truth_file),
                     "--log-y", "--out", str(out)]) == 0
        svg = out.read_text()
        assert "nan" not in svg and "inf" not in svg
        ET.fromstring(svg)

    def test_support_mismatch_exits_2(self, tmp_path, capsys):
        a = self._estimate_file(tmp_path, "d", [1, 2, 3])
        small = tmp_path / "small.json"
        small.write_text(json.dumps({"q": [0.5, 0.5], "support_offset": 0}))
        assert main(["plot", str(a), str(small)]) == 2

    def test_plot_deterministic(self, tmp_path, capsys):
        est = self._estimate_file(tmp_path, "e", [1, 4, 4, 7])
        outs = []
        for name in ("p1.svg", "p2.svg"):
            out = tmp_path / name
            assert main(["plot", str(est), "--out", str(out)]) == 0
            outs.append(out.read_bytes())
        assert outs[0] == outs[1]


def test_usage_error_exits_2(capsys):
    assert main(["estimate", "--k", "2", "--auto"]) == 2


def test_help_exits_0(capsys):
    assert main(["--help"]) == 0


def test_console_script_wiring(tmp_path):
    import shutil
    import subprocess

    if shutil.which("specpmf") is None:
        pytest.skip("console script not on PATH (package not installed)")
    src = tmp_path / "v.txt"
    src.write_text("0\n1\n2\n2\n")
    proc = subprocess.run(
        ["specpmf", "estimate", str(src), "--k", "2"],
        capture_output=True, text=True,
    )
    assert proc.returncode == 0
    doc = json.loads(proc.stdout)
    assert doc["N"] == 3
