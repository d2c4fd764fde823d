import json
import os

import pytest

from fragrisk.cli import main
from fragrisk.config import ScenarioConfig, load_config, parse_config_text


def run(args):
    return main(list(args))


def read_bytes(path):
    with open(path, "rb") as fh:
        return fh.read()


class TestConfig:
    def test_defaults_hash_stable(self):
        assert ScenarioConfig().config_hash() == ScenarioConfig().config_hash()
        assert ScenarioConfig().config_hash() != ScenarioConfig(seed=7).config_hash()

    def test_parse_and_types(self):
        values = parse_config_text(
            "# scenario\nharm.k = 2.0\nharm.beta=3\nfragments.count = 4\n"
            "topology.kind = three-tier\ntopology.dual_homed = true\nharm.weights = 0.25,0.75\n"
        )
        assert values["harm_k"] == 2.0
        assert values["fragments"] == 4
        assert values["topology_dual_homed"] is True
        assert values["harm_weights"] == (0.25, 0.75)

    def test_unknown_key_rejected(self):
        with pytest.raises(ValueError, match="unknown key"):
            parse_config_text("harm.gamma = 1\n")

    def test_malformed_line_rejected(self):
        with pytest.raises(ValueError, match="key = value"):
            parse_config_text("just some words\n")

    def test_overrides_beat_file(self, tmp_path):
        cfg_file = tmp_path / "scenario.cfg"
        cfg_file.write_text("seed = 1\ntrials = 10\n")
        cfg = load_config(str(cfg_file), {"seed": 99, "trials": None})
        assert cfg.seed == 99
        assert cfg.trials == 10


class TestRiskCommands:
    def test_ratio_prints_six_decimals(self, capsys):
        assert run(["risk", "ratio", "--alpha", "2", "--beta", "1.5", "--K", "2"]) == 0
        assert capsys.readouterr().out.strip() == "0.629961"

    def test_ratio_rejects_divergent(self, capsys):
        assert run(["risk", "ratio", "--alpha", "1", "--beta", "1.5", "--K", "2"]) == 1
        assert "error:" in capsys.readouterr().err

    def test_tail_mean_report(self, tmp_path):
        out = tmp_path / "tail.csv"
        code = run(
            ["risk", "tail-mean", "--alpha", "4", "--beta", "1.5", "--fragments", "2",
             "--trials", "20000", "--seed", "42", "--out", str(out)]
        )
        assert code == 0
        text = out.read_text()
        assert "closed_form" in text
        assert "-0.317480" in text  # 17-sig-digit rendering of the closed form

    def test_density_json(self, tmp_path):
        out = tmp_path / "density.json"
        assert run(
            ["risk", "density", "--alpha", "4", "--beta", "1.5", "--fragments", "2",
             "--format", "json", "--out", str(out)]
        ) == 0
        doc = json.loads(out.read_text())
        assert doc["columns"] == ["xi", "density"]
        assert len(doc["rows"]) == 100
        assert doc["metadata"]["command"] == "risk-density"


class TestTopoCommands:
    def test_build_then_hops(self, tmp_path, capsys):
        topo = tmp_path / "fabric.txt"
        assert run(
            ["topo", "build", "--kind", "spine-leaf", "--spines", "2", "--leaves", "4",
             "--hosts-per-leaf", "10", "--out", str(topo)]
        ) == 0
        assert topo.read_text().startswith("topology/1\n")
        assert run(["topo", "hops", "--topology", str(topo)]) == 0
        out = capsys.readouterr().out
        assert "0,180" in out and "2,600" in out

    def test_fail_reports_fraction(self, tmp_path, capsys):
        topo = tmp_path / "fabric.txt"
        run(["topo", "build", "--kind", "spine-leaf", "--spines", "2", "--leaves", "4",
             "--hosts-per-leaf", "1", "--out", str(topo)])
        emitted = tmp_path / "injected.txt"
        assert run(
            ["topo", "fail", "--topology", str(topo), "--fail", "leaf0", "--emit", str(emitted)]
        ) == 0
        out = capsys.readouterr().out
        assert "affected_fraction" in out
        assert "1,0.5,1" in out
        assert "host h0 detached" in emitted.read_text()

    def test_harm_runs(self, tmp_path, capsys):
        topo = tmp_path / "fabric.txt"
        run(["topo", "build", "--kind", "three-tier", "--cores", "2", "--distributions", "2",
             "--access-per-distribution", "2", "--hosts-per-access", "1", "--out", str(topo)])
        assert run(
            ["topo", "harm", "--topology", str(topo), "--p", "0.05", "--k", "1", "--beta", "1.5",
             "--trials", "2000", "--seed", "42"]
        ) == 0
        assert "expected_harm" in capsys.readouterr().out

    def test_missing_topology_file_fails(self, capsys):
        assert run(["topo", "hops", "--topology", "/nonexistent/path.txt"]) == 1
        assert "error:" in capsys.readouterr().err


class TestOutputContracts:
    def test_csv_full_precision_and_digits_flag(self, tmp_path):
        full = tmp_path / "full.csv"
        run(["risk", "curve", "--alpha", "2", "--beta", "1.5", "--K-values", "2", "--out", str(full)])
        emitted = full.read_text().splitlines()[-1].split(",")[1]
        # 17 significant digits round-trip to the exact double
        assert emitted == format(2.0 ** (2.0 * (1.0 / 1.5 - 1.0)), ".17g")
        assert float(emitted) == 2.0 ** (2.0 * (1.0 / 1.5 - 1.0))

        short = tmp_path / "short.csv"
        run(["risk", "curve", "--alpha", "2", "--beta", "1.5", "--K-values", "2",
             "--digits", "4", "--out", str(short)])
        assert short.read_text().splitlines()[-1] == "2,0.63"

    def test_no_partial_file_on_domain_error(self, tmp_path):
        out = tmp_path / "never.csv"
        code = run(["risk", "tail-mean", "--alpha", "1", "--beta", "2", "--out", str(out)])
        assert code == 1
        assert not out.exists()

    def test_invalid_flags_exit_nonzero(self):
        with pytest.raises(SystemExit) as excinfo:
            run(["risk", "ratio", "--alpha", "2", "--beta", "1.5"])  # missing --K
        assert excinfo.value.code != 0

    def test_svg_emitted(self, tmp_path):
        svg = tmp_path / "curve.svg"
        run(["risk", "curve", "--alpha", "2", "--beta", "1.5", "--svg", str(svg),
             "--out", str(tmp_path / "curve.csv")])
        text = svg.read_text()
        assert text.startswith("<svg")
        assert "polyline" in text

    def test_out_dir_env_override(self, tmp_path, monkeypatch):
        monkeypatch.setenv("FRAGRISK_OUT_DIR", str(tmp_path))
        run(["risk", "curve", "--alpha", "2", "--beta", "1.5", "--out", "rel.csv"])
        assert (tmp_path / "rel.csv").exists()

    def test_config_file_drives_command(self, tmp_path, capsys):
        cfg = tmp_path / "scenario.cfg"
        cfg.write_text("pareto.alpha = 2.0\nharm.beta = 1.5\n")
        assert run(["risk", "ratio", "--config", str(cfg), "--K", "2"]) == 0
        assert capsys.readouterr().out.strip() == "0.629961"

    def test_drop_probability_annotation_carried(self, tmp_path):
        cfg = tmp_path / "scenario.cfg"
        cfg.write_text("report.core_drop_probability = 0.001\n")
        out = tmp_path / "compare.csv"
        assert run(["compare", "--config", str(cfg), "--out", str(out)]) == 0
        assert "# core_drop_probability: 0.001" in out.read_text()


class TestDeterminism:
    def test_same_seed_same_bytes(self, tmp_path):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        args = ["jensen", "--k", "1", "--beta", "2", "--weights", "0.5,0.5", "--alpha", "4",
                "--trials", "5000", "--seed", "42"]
        run(args + ["--out", str(a)])
        run(args + ["--out", str(b)])
        assert read_bytes(a) == read_bytes(b)

    def test_different_seed_different_bytes(self, tmp_path):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        args = ["jensen", "--k", "1", "--beta", "2", "--weights", "0.5,0.5", "--alpha", "4",
                "--trials", "5000"]
        run(args + ["--seed", "42", "--out", str(a)])
        run(args + ["--seed", "43", "--out", str(b)])
        assert read_bytes(a) != read_bytes(b)
