from __future__ import annotations

import json
import subprocess
import sys

import pytest

from manycolour.cli import main
from manycolour.core import EdgeColouring, Hypergraph, load


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def manifest(tmp_path):
    return [json.loads(line) for line in (tmp_path / "run_log.jsonl").read_text().splitlines()]


def test_cube_then_eval(capsys, tmp_path):
    c = tmp_path / "c.json"
    code, _, _ = run(capsys, "construct", "cube", "--d", 3, "--n", 16, "--out", c)
    assert code == 0 and isinstance(load(c), EdgeColouring)
    code, out, _ = run(capsys, "eval", "--colouring", c, "--s", 2, "--kind", "f")
    res = json.loads(out)
    assert code == 0 and res["value"] <= 8 and len(res["argmax_colours"]) == 2
    code, out, _ = run(capsys, "eval", "--colouring", c, "--s", 1, "--kind", "g")
    assert json.loads(out)["value"] == 16


def test_fano_check(capsys, tmp_path):
    f = tmp_path / "fano.json"
    assert run(capsys, "construct", "plane", "--p", 2, "--out", f)[0] == 0
    assert isinstance(load(f), Hypergraph)
    code, out, _ = run(capsys, "hyper", "check", "--in", f)
    assert code == 0 and json.loads(out) == {"intersecting": True}
    code, out, _ = run(capsys, "hyper", "cover", "--in", f)
    assert json.loads(out) == {"cover_number": 3}
    code, out, _ = run(capsys, "hyper", "subsets", "--in", f, "--m", 6)
    assert json.loads(out)["t"] == 4


def test_oracle_command(capsys, tmp_path):
    code, out, _ = run(capsys, "oracle", "--n", 4, "--r", 2, "--s", 1, "--kind", "f", "--out", tmp_path / "rec.json")
    assert code == 0 and json.loads(out)["value"] == 4
    assert load(tmp_path / "rec.json").value == 4
    code, out, _ = run(capsys, "oracle", "--census", "--n", "2:3", "--r", "1:2", "--kind", "f,g",
                         "--out", tmp_path / "t.csv")
    assert code == 0 and json.loads(out)["cells"] == 12
    assert (tmp_path / "t.csv").read_text().splitlines()[0] == "n,r,s,kind,value"


def test_guarantee_commands(capsys, tmp_path):
    c = tmp_path / "c.json"
    run(capsys, "construct", "catalogue", "--name", "k5_3", "--n", 10, "--out", c)
    code, out, _ = run(capsys, "guarantee", "lower-g", "--colouring", c, "--s", 2)
    rep = json.loads(out)
    assert code == 0 and rep["achieved"] >= 9 and rep["claimed_bound"] == {"num": 9, "den": 1}
    code, out, _ = run(capsys, "guarantee", "augment", "--colouring", c, "--s", 2)
    assert code == 0 and json.loads(out)["k"] == 1
    code, out, _ = run(capsys, "guarantee", "contract", "--colouring", c, "--s", 1, "--k", 1)
    assert code == 0
    code, _, err = run(capsys, "guarantee", "lower-g", "--colouring", c, "--s", 2, "--d", 1)
    assert code == 1 and "s <= d" in err


def test_hyper_samplers_and_bound(capsys, tmp_path):
    log = tmp_path / "samples.jsonl"
    code, out, _ = run(capsys, "hyper", "sample-exclusion", "--r", 9, "--x", 3, "--seed", 4, "--count", 5,
                       "--log", log, "--out", tmp_path / "h.json")
    assert code == 0 and json.loads(out)["intersecting"] == 5
    entries = [json.loads(line) for line in log.read_text().splitlines()]
    assert [e["seed"] for e in entries] == [4, 5, 6, 7, 8]
    code, out, _ = run(capsys, "hyper", "sample-uniform", "--r", 7, "--s", 1, "--u", 4, "--m", 6, "--seed", 0,
                       "--count", 3, "--log", log)
    assert code == 0 and json.loads(out)["samples"] == 3
    code, out, _ = run(capsys, "hyper", "bound", "--r", 7, "--s", 3, "--u", 4)
    assert json.loads(out) == {"bound": {"num": 35, "den": 1}, "edges_needed": 35}


def test_exit_codes(capsys, tmp_path):
    assert run(capsys, "construct", "cube", "--d", 3, "--n", 5)[0] == 1
    assert run(capsys, "eval", "--colouring", tmp_path / "missing.json", "--s", 1)[0] == 2
    bad = tmp_path / "bad.json"
    bad.write_text('{"n": 3, "r": 2')
    code, _, err = run(capsys, "eval", "--colouring", bad, "--s", 1)
    assert code == 2 and "line 1" in err
    pair = tmp_path / "pair.json"
    pair.write_text('{"r": 4, "edges": [[0, 1], [2, 3]]}')
    code, _, err = run(capsys, "construct", "hyper", "--in", pair, "--n", 4)
    assert code == 1 and "disjoint" in err
    with pytest.raises(SystemExit) as info:
        main(["frobnicate"])
    assert info.value.code == 2
    with pytest.raises(SystemExit):
        main(["construct", "random-base", "--r", "64", "--s", "2", "--n", "20"])  # --seed is required


def test_manifest_and_reproducibility(capsys, tmp_path):
    outs = []
    for name in ("a.json", "b.json"):
        run(capsys, "construct", "random-base", "--r", 64, "--s", 2, "--n", 20, "--seed", 1, "--out", tmp_path / name)
        outs.append((tmp_path / name).read_bytes())
    assert outs[0] == outs[1]
    lines = manifest(tmp_path)
    assert len(lines) == 2 and lines[0]["subcommand"] == "construct random-base"
    assert lines[0]["seed"] == 1 and lines[0]["output_sha256"] == lines[1]["output_sha256"]
    assert set(lines[0]["versions"]) == {"manycolour", "python", "numpy"}
    assert lines[0]["params"]["r"] == 64


def test_config_file(capsys, tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"d": 2, "n": 8}))
    code, out, _ = run(capsys, "--config", cfg, "construct", "cube")
    assert code == 0 and json.loads(out)["n"] == 8
    code, out, _ = run(capsys, "--config", cfg, "construct", "cube", "--n", 12)
    assert json.loads(out)["n"] == 12
    cfg.write_text("[1]")
    assert run(capsys, "--config", cfg, "construct", "cube")[0] == 2


def test_module_entry_point(tmp_path):
    argv = [sys.executable, "-m", "manycolour", "hyper", "bound", "--r", "7", "--s", "3", "--u", "4"]
    proc = subprocess.run(argv, capture_output=True, text=True, cwd=tmp_path)
    assert proc.returncode == 0 and json.loads(proc.stdout)["edges_needed"] == 35
