import json
import subprocess
import sys
from pathlib import Path

import pytest

from lexplain import __version__
from lexplain.cli import run

from conftest import DATA_DIR, SAMPLE_DIR

VERT = str(SAMPLE_DIR / "sample.vert")
GRAMMAR = str(Path(SAMPLE_DIR).parent / "grammars" / "en_noun_verb_adj.sg")


@pytest.fixture(scope="module")
def index(tmp_path_factory):
    path = tmp_path_factory.mktemp("idx") / "c.idx"
    assert run(["ingest", "--input", VERT, "--output", str(path)]) == 0
    return str(path)


def test_version(capsys):
    assert run(["version"]) == 0
    assert capsys.readouterr().out.strip() == f"lexplain {__version__}"


def test_explain_bone(index, capsys):
    code = run(["explain", "--corpus", index, "--grammar", GRAMMAR, "--head", "bone", "--pos", "N"])
    assert code == 0
    assert capsys.readouterr().out == (DATA_DIR / "bone.golden.txt").read_text(encoding="utf-8")


def test_explain_from_vertical_file(capsys):
    assert run(["explain", "--corpus", VERT, "--head", "bone", "--pos", "N"]) == 0
    assert capsys.readouterr().out == (DATA_DIR / "bone.golden.txt").read_text(encoding="utf-8")


def test_malformed_ingest(tmp_path, capsys):
    src = tmp_path / "malformed.vert"
    src.write_bytes((DATA_DIR / "malformed.vert").read_bytes())
    assert run(["ingest", "--input", str(src)]) == 2
    assert "line 2" in capsys.readouterr().err
    assert not (tmp_path / "malformed.idx").exists()


def test_ingest_default_output(tmp_path):
    src = tmp_path / "s.vert"
    src.write_text("<s>\ndog\tdog\tNN\n</s>\n")
    assert run(["ingest", "--input", str(src)]) == 0
    assert (tmp_path / "s.idx").read_bytes()[:4] == b"LXPC"


@pytest.mark.parametrize("argv", [
    [], ["frobnicate"], ["sketch", "--corpus", "x"], ["explain", "--corpus", VERT],
    ["explain", "--corpus", VERT, "--head", "bone"], ["ingest", "--input", VERT, "--jobs", "0"],
    ["explain", "--corpus", VERT, "--head", "bone", "--pos", "Q"],
    ["sketch", "--corpus", VERT, "--head", "bone", "--pos", "N", "--relation", "nope"],
    ["thesaurus", "--corpus", VERT, "--head", "easily", "--pos", "A"],
])
def test_usage_errors(argv, capsys):
    assert run(argv) == 1
    assert capsys.readouterr().err


@pytest.mark.parametrize("argv", [
    ["explain", "--corpus", "/no/such/file", "--head", "bone", "--pos", "N"],
    ["cql", "--corpus", VERT, "--query", "[word="],
    ["grammar-check", "--grammar", str(DATA_DIR / "invalid_grammars" / "missing_label2.sg")],
])
def test_data_errors(argv, capsys):
    assert run(argv) == 2
    assert capsys.readouterr().err.startswith("lexplain: ")


def test_sketch_and_thesaurus(index, capsys):
    assert run(["sketch", "--corpus", index, "--head", "bone", "--pos", "N",
                "--relation", "adj_modifier"]) == 0
    rows = [l.split("\t") for l in capsys.readouterr().out.splitlines()]
    assert [r[1] for r in rows] == ["bare", "pubic", "brittle"]
    assert all(r[0] == "adj_modifier" and len(r) == 4 for r in rows)
    assert run(["thesaurus", "--corpus", index, "--head", "bone", "--pos", "N", "--limit", "2"]) == 0
    assert capsys.readouterr().out == "osteoporosis\t0.2902\nskull\t0.2447\n"


def test_grammar_check(index, capsys):
    assert run(["grammar-check", "--corpus", index]) == 0
    assert capsys.readouterr().out == "15 relations\n"


def test_cql(index, capsys):
    assert run(["cql", "--corpus", index, "--query", '2:[tag="JJ"] 1:[lemma="bone"]']) == 0
    rows = capsys.readouterr().out.splitlines()
    assert rows and all(len(r.split("\t")) == 4 for r in rows)


def test_batch_and_evaluate(index, tmp_path, capsys):
    out = tmp_path / "out"
    assert run(["explain", "--corpus", index, "--headlist", str(SAMPLE_DIR / "headwords.txt"),
                "--outdir", str(out), "--format", "json"]) == 0
    names = sorted(p.name for p in out.iterdir())
    assert names == ["bone.N.json", "break.V.json", "dead.J.json", "skull.N.json",
                     "tooth.N.json", "unicorn.N.json"]
    report = tmp_path / "r.json"
    assert run(["evaluate", "--corpus", index, "--explanations", str(out),
                "--annotations", str(SAMPLE_DIR / "annotations.tsv"), "--output", str(report)]) == 0
    text = capsys.readouterr().out
    assert "coverage: 83.33%" in text
    doc = json.loads(report.read_text())
    # file-count oracle for coverage
    with_data = sum(1 for p in out.iterdir() if json.loads(p.read_text())["lines"])
    assert doc["coverage"] == f"{100 * with_data / len(names):.2f}"
    assert doc["headwords"] == 6


def test_config_round_trip(index, tmp_path, capsys):
    cfg = tmp_path / "a.cfg"
    assert run(["config", "--output", str(cfg)]) == 0
    dumped = cfg.read_text()
    assert run(["config", "--config", str(cfg)]) == 0
    assert capsys.readouterr().out == dumped
    assert run(["explain", "--corpus", index, "--head", "bone", "--pos", "N", "--config", str(cfg)]) == 0
    assert capsys.readouterr().out == (DATA_DIR / "bone.golden.txt").read_text(encoding="utf-8")


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "lexplain", "version"], capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout.startswith("lexplain ")
    proc = subprocess.run([sys.executable, "-m", "lexplain"], capture_output=True, text=True)
    assert proc.returncode == 1
