import json

import pytest

from semgraph.cli import dbm_to_watts, main

GEN_ARGS = [
    "gen",
    "--samples", "24",
    "--pairs", "16",
    "--relations", "3",
    "--skew", "0.4",
    "--triples", "8",
    "--coupling", "0.5",
    "--seed", "7",
]


def run(args):
    return main([str(a) for a in args])


@pytest.fixture
def workspace(tmp_path):
    corpus = tmp_path / "corpus.jsonl"
    kb = tmp_path / "kb.json"
    assert run(GEN_ARGS + ["--out", corpus]) == 0
    assert run(["build-kb", "--in", corpus, "--out", kb]) == 0
    return tmp_path


class TestUnits:
    def test_dbm_conversion(self):
        assert dbm_to_watts(30.0) == pytest.approx(1.0)
        assert dbm_to_watts(0.0) == pytest.approx(1e-3)


class TestGen:
    def test_deterministic_output(self, tmp_path):
        a = tmp_path / "a.jsonl"
        b = tmp_path / "b.jsonl"
        assert run(GEN_ARGS + ["--out", a]) == 0
        assert run(GEN_ARGS + ["--out", b]) == 0
        assert a.read_bytes() == b.read_bytes()

    def test_env_seed_override(self, tmp_path, monkeypatch):
        args = [a for a in GEN_ARGS if a not in ("--seed", "7")]
        monkeypatch.setenv("SEMGRAPH_SEED", "7")
        a = tmp_path / "a.jsonl"
        assert run(args + ["--out", a]) == 0
        monkeypatch.setenv("SEMGRAPH_SEED", "8")
        b = tmp_path / "b.jsonl"
        assert run(args + ["--out", b]) == 0
        explicit = tmp_path / "c.jsonl"
        assert run(GEN_ARGS + ["--out", explicit]) == 0
        assert a.read_bytes() == explicit.read_bytes()
        assert a.read_bytes() != b.read_bytes()

    def test_impossible_config_fails(self, tmp_path, capsys):
        args = ["gen", "--samples", "4", "--pairs", "2", "--relations", "2",
                "--skew", "0.2", "--triples", "8", "--out", tmp_path / "x.jsonl"]
        assert run(args) == 1
        assert "error" in capsys.readouterr().err


class TestCodecPipeline:
    def test_compress_decompress_round_trip(self, workspace):
        corpus = workspace / "corpus.jsonl"
        kb = workspace / "kb.json"
        graph = workspace / "graph.json"
        first = json.loads(corpus.read_text().splitlines()[0])
        graph.write_text(json.dumps({"triples": first["triples"]}, indent=2) + "\n")

        msg = workspace / "msg.json"
        out = workspace / "restored.json"
        assert run(["compress", "--kb", kb, "--in", graph, "--out", msg]) == 0
        assert run(["decompress", "--kb", kb, "--in", msg, "--out", out]) == 0
        assert json.loads(out.read_text()) == json.loads(graph.read_text())
        message = json.loads(msg.read_text())
        assert message["total_triples"] == len(first["triples"])
        assert message["omitted"]  # something was actually dropped

    def test_profile_reports_ratios(self, workspace, capsys):
        assert (
            run(["profile", "--kb", workspace / "kb.json", "--corpus", workspace / "corpus.jsonl"])
            == 0
        )
        ratios = json.loads(capsys.readouterr().out)["ratios"]
        assert ratios and all(0.0 <= r <= 1.0 for r in ratios)


class TestOptimizeCommand:
    def test_prints_solution_json(self, capsys):
        assert run(["optimize", "--q", "0.5,0.5"]) == 0
        solution = json.loads(capsys.readouterr().out)
        assert solution["feasible"] is True
        assert solution["omitted"] == 50

    def test_config_file_and_dbm_override(self, tmp_path, capsys):
        cfg = tmp_path / "params.cfg"
        cfg.write_text("total_triples = 50\nq_ratios = 0.5, 0.5\n")
        assert run(["optimize", "--config", cfg, "--pmax-dbm", "30"]) == 0
        solution = json.loads(capsys.readouterr().out)
        assert solution["power_w"] <= 1.0

    def test_infeasible_exits_2(self, tmp_path):
        cfg = tmp_path / "params.cfg"
        cfg.write_text("latency_limit_s = 1e-6\nbandwidth_hz = 1e6\n")
        assert run(["optimize", "--config", cfg, "--q", "0.0"]) == 2

    def test_missing_ratios_exits_1(self):
        assert run(["optimize"]) == 1

    def test_unknown_config_key_exits_1(self, tmp_path):
        cfg = tmp_path / "params.cfg"
        cfg.write_text("voltage = 12\n")
        assert run(["optimize", "--config", cfg, "--q", "0.5"]) == 1

    def test_missing_file_exits_1(self, tmp_path):
        assert run(["optimize", "--config", tmp_path / "absent.cfg", "--q", "0.5"]) == 1


class TestSweepCommand:
    def test_sweep_with_explicit_ratios(self, tmp_path):
        spec = tmp_path / "spec.cfg"
        spec.write_text(
            "axis = total_triples\n"
            "values = 50, 100\n"
            "methods = jccpg, traditional\n"
            "q_ratios = 0.5, 0.5\n"
        )
        out = tmp_path / "sweep.csv"
        assert run(["sweep", "--spec", spec, "--out", out]) == 0
        lines = out.read_text().strip().split("\n")
        assert lines[0].startswith("axis,method,")
        assert len(lines) == 5

    def test_sweep_with_corpus_source(self, workspace):
        spec = workspace / "spec.cfg"
        spec.write_text(
            "axis = bandwidth_hz\n"
            "values = 2e6, 10e6\n"
            f"corpus = {workspace / 'corpus.jsonl'}\n"
        )
        out = workspace / "sweep.csv"
        assert run(["sweep", "--spec", spec, "--out", out]) == 0
        assert len(out.read_text().strip().split("\n")) == 7

    def test_sweep_reruns_byte_identical(self, tmp_path):
        spec = tmp_path / "spec.cfg"
        spec.write_text(
            "axis = latency_limit_s\nvalues = 0.0005, 0.001, 0.002\nq_ratios = 0.5, 0.25\n"
        )
        a = tmp_path / "a.csv"
        b = tmp_path / "b.csv"
        assert run(["sweep", "--spec", spec, "--out", a]) == 0
        assert run(["sweep", "--spec", spec, "--out", b]) == 0
        assert a.read_bytes() == b.read_bytes()

    def test_spec_missing_axis_exits_1(self, tmp_path):
        spec = tmp_path / "spec.cfg"
        spec.write_text("values = 1, 2\n")
        assert run(["sweep", "--spec", spec]) == 1


class TestUsageErrors:
    def test_unknown_subcommand(self):
        assert run(["frobnicate"]) == 1

    def test_unknown_flag(self):
        assert run(["optimize", "--quantum"]) == 1

    def test_missing_required_flag(self):
        assert run(["build-kb"]) == 1
