import json
import os
import subprocess

import pytest

CLI = os.environ.get("FKT_CLI")

pytestmark = pytest.mark.skipif(not CLI, reason="FKT_CLI not set")


def run(*args, **kw):
    return subprocess.run([CLI, *args], capture_output=True, text=True, **kw)


def write_graph(tmp_path, name, vertices, adjacency):
    path = tmp_path / f"{name}.json"
    path.write_text(json.dumps({"vertices": vertices, "adjacency": adjacency,
                                "name": name}))
    return str(path)


def intro(tmp_path, n):
    return write_graph(tmp_path, f"E_{n}", 3, [[0, 0, 0], [n, 3, 0], [1, 1, 3]])


def test_classify_exit_codes(tmp_path):
    e1, e2, e3 = (intro(tmp_path, n) for n in (1, 2, 3))
    assert run("classify", e1, e3).returncode == 0
    assert run("classify", e1, e2).returncode == 1
    loop = write_graph(tmp_path, "loop", 1, [[1]])
    assert run("classify", loop, e1).returncode == 3


def test_parse_and_io_errors(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{"vertices": 0, "adjacency": []}')
    assert run("fk", str(bad)).returncode == 64
    assert run("fk", str(tmp_path / "nope.json")).returncode == 66
    assert run("sweep", "--template", "bogus", "--range", "1..2").returncode == 64
    assert run("sweep", "--template", "intro", "--range", "oops").returncode == 64


def test_fk_json_round_trip(tmp_path):
    e2 = intro(tmp_path, 2)
    first = run("fk", e2, "--json")
    assert first.returncode == 0
    # the emitted JSON is itself a valid graph file; recomputing from it is
    # byte-identical
    echo = tmp_path / "echo.json"
    echo.write_text(first.stdout)
    second = run("fk", str(echo), "--json")
    assert second.returncode == 0
    assert first.stdout == second.stdout
    report = json.loads(first.stdout)
    groups = {(iv["a"], iv["b"]): iv["k0"]["display"] for iv in report["intervals"]}
    assert groups[(1, 3)] == "Z x Z/4"


def test_dot_export(tmp_path):
    e1 = intro(tmp_path, 1)
    out = tmp_path / "lattice.dot"
    assert run("fk", e1, "--dot", str(out)).returncode == 0
    text = out.read_text()
    assert "digraph" in text
    assert "style=solid" in text
    assert "style=dashed" in text


def test_sweep_reports(tmp_path):
    r = run("sweep", "--template", "intro", "--range", "1..12", "--json")
    assert r.returncode == 0
    data = json.loads(r.stdout)
    assert len(data["classes"]) == 3
    r2 = run("sweep", "--template", "caseII", "--p", "2", "--range", "1..2")
    assert r2.returncode == 0
    assert "stable isomorphism classes: 4" in r2.stdout


def test_classify_witness_json(tmp_path):
    e1, e3 = intro(tmp_path, 1), intro(tmp_path, 3)
    r = run("classify", e1, e3, "--json")
    data = json.loads(r.stdout)
    assert data["status"] == "isomorphic"
    assert data["applicable"] is True
    assert data["witness"]
    r2 = run("classify", e1, intro(tmp_path, 2), "--json")
    data2 = json.loads(r2.stdout)
    assert data2["status"] == "not_isomorphic"
    assert "canonical forms differ" in data2["obstruction"]
