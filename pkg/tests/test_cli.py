import json
import subprocess
import sys

import pytest

from depchange.cli import EXIT_DATA, EXIT_USAGE, demo_paths, main


@pytest.fixture(scope="module")
def demo_run(tmp_path_factory):
    out = tmp_path_factory.mktemp("demo")
    p = demo_paths()
    code = main([
        "run", "--corpus1", p["corpus1"], "--corpus2", p["corpus2"], "--targets", p["targets"],
        "--gold-graded", p["gold_graded"], "--gold-binary", p["gold_binary"], "-o", str(out),
    ])
    assert code == 0
    return out


def test_run_writes_outputs(demo_run):
    assert (demo_run / "report.json").exists()
    report = json.loads((demo_run / "report.json").read_text())
    assert report["evaluation"]["accuracy"] == 1.0


def test_inspect_slot_detail(demo_run, capsys):
    assert main(["inspect", "--report", str(demo_run / "report.json"), "--target", "graft_nn",
                 "--slot", "chi_compound"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert len(lines) == 5 and lines[0].startswith("filler\t")


def test_inspect_series(demo_run, tmp_path):
    out = tmp_path / "series.tsv"
    assert main(["inspect", "--report", str(demo_run / "report.json"), "--target", "plane_nn",
                 "--slot", "chi_amod", "--series", "--fillers", "vertical,military", "-o", str(out)]) == 0
    assert out.read_text().splitlines()[1] == "vertical\t0.500000\t0.000000"


def test_inspect_unknown_slot(demo_run, capsys):
    code = main(["inspect", "--report", str(demo_run / "report.json"), "--target", "plane_nn", "--slot", "pa_zz"])
    assert code == EXIT_DATA
    assert "chi_amod" in capsys.readouterr().err


def test_extract_then_analyze_matches_run(demo_run, tmp_path):
    p = demo_paths()
    for period in (1, 2):
        assert main(["extract", "--corpus", p[f"corpus{period}"], "--period", str(period),
                     "--targets", p["targets"], "-o", str(tmp_path / f"prof{period}.json")]) == 0
    out = tmp_path / "analysis"
    assert main(["analyze", "--profiles1", str(tmp_path / "prof1.json"), "--profiles2", str(tmp_path / "prof2.json"),
                 "--targets", p["targets"], "-o", str(out)]) == 0
    for name in ("scores.tsv", "labels.tsv"):
        assert (out / name).read_bytes() == (demo_run / name).read_bytes()
    a = json.loads((out / "report.json").read_text())
    b = json.loads((demo_run / "report.json").read_text())
    assert a["targets"] == b["targets"]


def test_evaluate_command(demo_run, capsys):
    p = demo_paths()
    assert main(["evaluate", "--scores", str(demo_run / "scores.tsv"), "--gold-graded", p["gold_graded"],
                 "--labels", str(demo_run / "labels.tsv"), "--gold-binary", p["gold_binary"]]) == 0
    metrics = json.loads(capsys.readouterr().out)
    assert metrics["accuracy"] == 1.0 and -1 <= metrics["spearman"] <= 1


def test_usage_errors(capsys):
    assert main(["evaluate"]) == EXIT_USAGE
    p = demo_paths()
    assert main(["run", "--corpus1", p["corpus1"], "--corpus2", p["corpus2"], "--targets", p["targets"],
                 "--fraction", "2"]) == EXIT_USAGE
    with pytest.raises(SystemExit) as exc:
        main(["run"])
    assert exc.value.code == EXIT_USAGE
    with pytest.raises(SystemExit) as exc:
        main(["frobnicate"])
    assert exc.value.code == EXIT_USAGE


def test_data_errors(tmp_path, capsys):
    p = demo_paths()
    code = main(["run", "--corpus1", str(tmp_path / "nope"), "--corpus2", p["corpus2"], "--targets", p["targets"]])
    assert code == EXIT_DATA
    assert "[ingest]" in capsys.readouterr().err
    bad = tmp_path / "t.txt"
    bad.write_text("plane_xx\n")
    code = main(["run", "--corpus1", p["corpus1"], "--corpus2", p["corpus2"], "--targets", str(bad)])
    assert code == EXIT_DATA


def test_synth_and_demo_commands(tmp_path, capsys):
    assert main(["synth", "--stable", "2", "--changed", "2", "--sentences", "20", "-o", str(tmp_path / "s")]) == 0
    assert (tmp_path / "s" / "period1.conllu").exists()
    assert main(["demo", "-o", str(tmp_path / "d")]) == 0
    assert "plane_nn" in capsys.readouterr().out


def test_module_entry_point(tmp_path):
    proc = subprocess.run([sys.executable, "-m", "depchange", "demo", "-o", str(tmp_path)],
                          capture_output=True, text=True)
    assert proc.returncode == 0, proc.stderr
    assert "graft_nn" in proc.stdout
