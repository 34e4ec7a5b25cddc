import json

import pytest

from citegrow import mas_reference
from citegrow.cli import dispatch


@pytest.fixture
def corpus(tmp_path):
    """Small papers/citations pair: 3 seed papers, 12 scheduled."""
    papers = ["s1\t1970", "s2\t1971", "s3\t1973"]
    citations = ["s2\ts1", "s3\ts1"]
    pid = 0
    prev = ["s1", "s2", "s3"]
    for year in range(1976, 1988):
        name = f"p{pid}"
        papers.append(f"{name}\t{year}")
        citations.append(f"{name}\t{prev[pid % len(prev)]}")
        prev.append(name)
        pid += 1
    ppath = tmp_path / "papers.tsv"
    cpath = tmp_path / "citations.tsv"
    ppath.write_text("\n".join(papers) + "\n")
    cpath.write_text("\n".join(citations) + "\n")
    return ppath, cpath


def run(argv):
    return dispatch([str(a) for a in argv])


class TestExitCodes:
    def test_unknown_flag_is_usage_error(self, tmp_path):
        assert run(["verify-theorem", "--model", "ba", "--frobnicate",
                    "--out", tmp_path / "o"]) == 1

    def test_unknown_subcommand_is_usage_error(self, tmp_path):
        assert run(["transmogrify", "--out", tmp_path / "o"]) == 1

    def test_missing_model_names_the_flag(self, tmp_path, capsys):
        code = run(["simulate", "--out", tmp_path / "o"])
        assert code == 1
        assert "--model" in capsys.readouterr().err

    def test_missing_input_file_is_input_error(self, tmp_path):
        code = run(["classify", "--graph", tmp_path / "absent.txt",
                    "--out", tmp_path / "o"])
        assert code == 2

    def test_bad_parameter_combination(self, tmp_path, corpus):
        ppath, cpath = corpus
        code = run(["simulate", "--papers", ppath, "--citations", cpath,
                    "--model", "ba", "--sigma", "2.0", "--out", tmp_path / "o"])
        assert code == 1


class TestPipeline:
    def test_full_chain(self, tmp_path, corpus):
        ppath, cpath = corpus
        ing = tmp_path / "ing"
        assert run(["ingest", "--papers", ppath, "--citations", cpath,
                    "--cutoff", "1987", "--horizon", "1987",
                    "--out", ing]) == 0
        for name in ("seed.graph", "schedule.tsv", "id_map.tsv",
                     "ingest_report.json", "manifest.json"):
            assert (ing / name).exists(), name

        sim = tmp_path / "sim"
        assert run(["simulate", "--seed-graph", ing / "seed.graph",
                    "--schedule", ing / "schedule.tsv",
                    "--model", "lbm-g", "--sigma", "1.5", "--seed", "3",
                    "--out", sim]) == 0
        assert (sim / "graph.txt").exists()
        assert (sim / "model.cfg").exists()

        cls = tmp_path / "cls"
        assert run(["classify", "--graph", sim / "graph.txt",
                    "--seed-end", "1975", "--cutoff", "1978",
                    "--horizon", "1987", "--out", cls]) == 0
        dist = json.loads((cls / "distribution.json").read_text())
        assert set(dist) == {"er", "fr", "lr", "sr", "ot", "counts"}

        ref = tmp_path / "mas.json"
        mas_reference().to_json(ref)
        ev = tmp_path / "ev"
        assert run(["evaluate", "--distribution", cls / "distribution.json",
                    "--reference", ref, "--label", "demo", "--out", ev]) == 0
        payload = json.loads((ev / "evaluation.json").read_text())
        assert payload["model"] == "demo"
        assert 0.0 <= payload["jsd2"] <= 1.0

    def test_simulate_determinism(self, tmp_path, corpus):
        ppath, cpath = corpus
        ing = tmp_path / "ing"
        run(["ingest", "--papers", ppath, "--citations", cpath, "--out", ing])
        digests = []
        for name in ("a", "b"):
            out = tmp_path / name
            assert run(["simulate", "--seed-graph", ing / "seed.graph",
                        "--schedule", ing / "schedule.tsv",
                        "--model", "lbm-g", "--seed", "11", "--out", out]) == 0
            manifest = json.loads((out / "manifest.json").read_text())
            digests.append(manifest["outputs"])
        assert digests[0] == digests[1]

    def test_simulate_from_papers_directly(self, tmp_path, corpus):
        ppath, cpath = corpus
        out = tmp_path / "direct"
        assert run(["simulate", "--papers", ppath, "--citations", cpath,
                    "--model", "af", "--seed", "1", "--out", out]) == 0
        manifest = json.loads((out / "manifest.json").read_text())
        assert manifest["command"] == "simulate"
        assert str(ppath) in manifest["inputs"]

    def test_config_file_with_flag_override(self, tmp_path, corpus):
        ppath, cpath = corpus
        cfg = tmp_path / "model.cfg"
        cfg.write_text("model = lbm-g\nsigma = 9.0\n")
        out = tmp_path / "o"
        assert run(["simulate", "--papers", ppath, "--citations", cpath,
                    "--config", cfg, "--sigma", "0.5", "--seed", "2",
                    "--out", out]) == 0
        written = (out / "model.cfg").read_text()
        assert "sigma = 0.5" in written

    def test_sweep_and_sensitivity(self, tmp_path, corpus):
        ppath, cpath = corpus
        ref = tmp_path / "ref.json"
        mas_reference().to_json(ref)

        sw = tmp_path / "sw"
        assert run(["sweep", "--papers", ppath, "--citations", cpath,
                    "--model", "lbm", "--gamma-regime", "const,log",
                    "--gamma-const", "1.0", "--reference", ref,
                    "--cutoff", "1978", "--horizon", "1987",
                    "--min-history", "10",
                    "--runs", "1", "--seed", "0", "--out", sw]) == 0
        lines = (sw / "sweep.csv").read_text().strip().splitlines()
        assert lines[0] == "gamma_regime,er,fr,lr,sr,ot,jsd2"
        assert len(lines) == 3
        summary = json.loads((sw / "sweep_summary.json").read_text())
        assert "best" in summary

        sim = tmp_path / "sim2"
        run(["simulate", "--papers", ppath, "--citations", cpath,
             "--model", "ba", "--seed", "4", "--out", sim])
        sens = tmp_path / "sens"
        assert run(["sensitivity", "--graph", sim / "graph.txt",
                    "--cutoff", "1978", "--horizon", "1987",
                    "--activation", "4:6", "--peak-threshold", "0.65,0.75",
                    "--out", sens]) == 0
        lines = (sens / "sensitivity.csv").read_text().strip().splitlines()
        assert lines[0] == "activation,threshold,category,ratio"
        assert len(lines) == 1 + 6 * 5

    def test_verify_theorem_report(self, tmp_path):
        out = tmp_path / "thm"
        assert run(["verify-theorem", "--model", "mf", "--trials", "5",
                    "--out", out]) == 0
        report = json.loads((out / "theorem_report.json").read_text())
        assert report["pass"] is True

    def test_manifest_structure(self, tmp_path):
        out = tmp_path / "thm"
        argv = ["verify-theorem", "--model", "ba", "--trials", "3",
                "--out", str(out)]
        assert dispatch(argv) == 0
        manifest = json.loads((out / "manifest.json").read_text())
        assert manifest["command"] == "verify-theorem"
        assert manifest["argv"] == argv
        assert "theorem_report.json" in manifest["outputs"]
        assert manifest["duration_seconds"] >= 0
