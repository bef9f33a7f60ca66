import csv
import json

import numpy as np
import pytest

from tempembed.cli import CSV_HEADER, main
from tempembed.graph import SnapshotSpec, read_edge_list, synth_dynamic_sbm
from tempembed.matrix_io import read_embedding

FAST = ["--gd-iterations", "300", "--bcgd-iterations", "10"]


@pytest.fixture
def edge_file(tmp_path):
    path = tmp_path / "g.txt"
    assert main(["synth", "--nodes", "40", "--communities", "2", "--snapshots", "4",
                 "--p-in", "0.3", "--p-out", "0.02", "--seed", "1", "--out", str(path)]) == 0
    return path


def _rows(path):
    with open(path, newline="") as fh:
        return list(csv.reader(fh))


class TestSynthIngest:
    def test_counts_round_trip(self, edge_file, tmp_path, capsys):
        g = synth_dynamic_sbm(40, 2, 4, 0.3, 0.02, 0.05, seed=1)
        capsys.readouterr()
        out = tmp_path / "stats.json"
        assert main(["ingest", "--input", str(edge_file), "--pre-binned", "--out", str(out)]) == 0
        stats = json.loads(out.read_text())
        expect = g.summary()
        assert (stats["nodes"], stats["edges"], stats["snapshots"]) == (
            expect["nodes"], expect["edges"], expect["snapshots"])
        assert str(expect["edges"]) in capsys.readouterr().out

    def test_equal_width_mode(self, tmp_path):
        path = tmp_path / "raw.txt"
        path.write_text("# comment\na b 0\nb c 10\nc d 20\n")
        assert main(["ingest", "--input", str(path), "--snapshots", "2"]) == 0


class TestEmbed:
    def test_writes_one_file_per_snapshot(self, edge_file, tmp_path):
        out = tmp_path / "emb"
        assert main(["embed", "--input", str(edge_file), "--pre-binned", "--dim", "4",
                     "--out", str(out)]) == 0
        files = sorted(out.glob("snapshot_*.emb"))
        assert len(files) == 4
        assert read_embedding(files[0]).shape == (40, 4)
        assert (out / "run-manifest.json").exists()


class TestEvaluate:
    def _run(self, edge_file, out, *extra):
        return main(["evaluate", "--input", str(edge_file), "--pre-binned", "--dim", "4",
                     "--repeats", "1", "--model", "RET,HomoLT,HeterLT,BCGD,StaticBaseline",
                     "--out", str(out), *FAST, *extra])

    def test_outputs(self, edge_file, tmp_path):
        out = tmp_path / "run"
        assert self._run(edge_file, out) == 0
        rows = _rows(out / "metrics.csv")
        assert rows[0] == CSV_HEADER
        # one repeat row plus mean and sd rows per model cell
        assert len(rows) == 1 + 5 * 3
        assert {r[1] for r in rows[1:]} == {"RET", "HomoLT", "HeterLT", "BCGD", "StaticBaseline"}
        assert "p(AUC vs BCGD)" in (out / "summary.txt").read_text()
        manifest = json.loads((out / "run-manifest.json").read_text())
        assert manifest["csv_header"] == CSV_HEADER and manifest["seed"] == 0

    def test_byte_identical_rerun(self, edge_file, tmp_path):
        a, b = tmp_path / "a", tmp_path / "b"
        assert self._run(edge_file, a) == 0
        assert self._run(edge_file, b) == 0
        for name in ("metrics.csv", "summary.txt", "run-manifest.json"):
            assert (a / name).read_bytes() == (b / name).read_bytes()

    def test_seed_changes_output(self, edge_file, tmp_path):
        assert self._run(edge_file, tmp_path / "a") == 0
        assert self._run(edge_file, tmp_path / "b", "--seed", "3") == 0
        assert (tmp_path / "a" / "metrics.csv").read_bytes() != (tmp_path / "b" / "metrics.csv").read_bytes()

    def test_synthetic_spec(self, tmp_path):
        assert main(["evaluate", "--synth", "nodes=30,communities=2,snapshots=3", "--model", "RET",
                     "--dim", "4", "--repeats", "2", "--out", str(tmp_path / "s")]) == 0
        assert _rows(tmp_path / "s" / "metrics.csv")[1][0] == "synthetic"

    def test_fixed_hyperparameters(self, edge_file, tmp_path):
        out = tmp_path / "fixed"
        assert self._run(edge_file, out, "--alpha", "10", "--theta", "0.5", "--lambda", "0.1") == 0
        selected = {r[1]: r[6] for r in _rows(out / "metrics.csv")[1:] if r[5] == "0"}
        assert selected["RET"] == "alpha=10"
        assert selected["HeterLT"] == "wct,theta=0.5"
        assert selected["BCGD"] == "lambda=0.1"


class TestSweep:
    def test_row_accounting(self, edge_file, tmp_path):
        single = tmp_path / "one"
        sweep = tmp_path / "sweep"
        args = ["--input", str(edge_file), "--pre-binned", "--model", "RET,StaticBaseline",
                "--repeats", "2", *FAST]
        assert main(["evaluate", *args, "--dim", "4", "--out", str(single)]) == 0
        assert main(["sweep-dim", *args, "--dims", "4,8", "--out", str(sweep)]) == 0
        n_single = len(_rows(single / "metrics.csv")) - 1
        rows = _rows(sweep / "sweep.csv")
        assert len(rows) - 1 == 2 * n_single
        assert {r[4] for r in rows[1:]} == {"4", "8"}


class TestConfig:
    def test_file_values_and_flag_override(self, edge_file, tmp_path):
        cfg = tmp_path / "run.cfg"
        cfg.write_text(f"# experiment\ninput = {edge_file}\npre-binned = true\nmodel = RET\n"
                       "dim = 4\nrepeats = 3\n")
        out = tmp_path / "cfgrun"
        assert main(["evaluate", "--config", str(cfg), "--repeats", "2", "--out", str(out)]) == 0
        reps = [r[5] for r in _rows(out / "metrics.csv")[1:]]
        assert reps == ["0", "1", "mean", "sd"]

    def test_unknown_key(self, tmp_path, capsys):
        cfg = tmp_path / "bad.cfg"
        cfg.write_text("dimension = 4\n")
        assert main(["evaluate", "--config", str(cfg), "--synth", "nodes=20", "--out", str(tmp_path)]) == 2
        assert "dimension" in capsys.readouterr().err

    def test_bad_value(self, tmp_path, capsys):
        cfg = tmp_path / "bad.cfg"
        cfg.write_text("repeats = many\n")
        assert main(["evaluate", "--config", str(cfg), "--synth", "nodes=20", "--out", str(tmp_path)]) == 2
        assert "repeats" in capsys.readouterr().err


class TestErrors:
    def test_unknown_flag(self):
        with pytest.raises(SystemExit) as exc:
            main(["evaluate", "--dimension", "4", "--out", "x"])
        assert exc.value.code != 0

    @pytest.mark.parametrize("flag,value,field", [
        ("--dim", "0", "dim"), ("--model", "SDNE", "model"), ("--embedder", "lle", "embedder"),
        ("--theta", "1.5", "theta"), ("--alpha", "-1", "alpha"), ("--repeats", "0", "repeats"),
    ])
    def test_invalid_values_name_field(self, flag, value, field, tmp_path, capsys):
        code = main(["evaluate", "--synth", "nodes=20", "--out", str(tmp_path), flag, value])
        assert code != 0
        assert field in capsys.readouterr().err

    def test_missing_input(self, tmp_path, capsys):
        code = main(["ingest", "--input", str(tmp_path / "nope.txt"), "--snapshots", "3"])
        assert code == 2 and "input" in capsys.readouterr().err

    def test_parse_error_reports_line(self, tmp_path, capsys):
        path = tmp_path / "bad.txt"
        path.write_text("a b 1\na b\n")
        assert main(["ingest", "--input", str(path), "--snapshots", "2"]) == 2
        assert "line 2" in capsys.readouterr().err
