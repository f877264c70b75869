import itertools
import json
import re
import subprocess
import sys

import numpy as np
import pytest

from flipcount.cli import main, parse_system, SchemaError
from flipcount.linalg import matmul
from flipcount.presentations import LabeledGraph, factor_dfa, trim_essential
from flipcount.series import parse_rational, RationalFunction, poly_mul
from flipcount.signed_subsets import parse_level_dump

import support


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def write(tmp_path, doc, name="system.json"):
    path = tmp_path / name
    path.write_text(json.dumps(doc), encoding="utf-8")
    return str(path)


def test_count_even(capsys):
    code, out, _ = run(capsys, "count", "--system", support.system_file("even"), "--max-m", "3")
    assert code == 0
    assert out.splitlines()[1:] == ["1\t2\t2\t-", "2\t2\t2\t2", "3\t5\t3\t-"]


def test_count_full1(capsys):
    code, out, _ = run(capsys, "count", "--system", support.system_file("full1"), "--max-m", "2")
    assert code == 0
    assert out.splitlines()[1:] == ["1\t1\t1\t-", "2\t1\t1\t1"]


@pytest.mark.parametrize("name", support.NAMES)
def test_count_verify_passes(capsys, name):
    code, out, _ = run(capsys, "count", "--system", support.system_file(name), "--max-m", "6", "--verify")
    assert code == 0
    assert all(line.endswith("yes") for line in out.splitlines()[1:])


@pytest.mark.parametrize("name", ["golden", "full2swap"])
def test_direct_matches_pipeline(capsys, name):
    _, direct, _ = run(capsys, "count", "--system", support.system_file(name), "--max-m", "6", "--direct")
    _, krieger, _ = run(capsys, "count", "--system", support.system_file(name), "--max-m", "6")
    assert direct == krieger


def test_direct_needs_matrix(capsys):
    code, _, _ = run(capsys, "count", "--system", support.system_file("even"), "--max-m", "2", "--direct")
    assert code == 2


def test_component_verify_mismatch(capsys):
    code, out, _ = run(
        capsys, "count", "--system", support.system_file("even"), "--max-m", "2", "--chain", "component", "--verify"
    )
    assert code == 4
    assert out.splitlines()[2].endswith("NO")


def closed_form_lines(out):
    lines = out.splitlines()
    zeta = parse_rational(lines[0].split(" = ", 1)[1])
    G = parse_rational(lines[1].split(" = ", 1)[1])
    return zeta, G, lines[2:]


def test_zeta_even_closed_form(capsys):
    code, out, _ = run(capsys, "zeta", "--system", support.system_file("even"), "--order", "4", "--closed-form")
    assert code == 0
    zeta, G, series = closed_form_lines(out)
    assert zeta == RationalFunction([1, 1], [1, -1, -1])
    assert G == RationalFunction([0, 2, 2, -1, -1, -2, -1], poly_mul([1, 0, -1], [1, 0, -1, 0, -1]))
    assert series[:3] == ["0\t1", "1\t2", "2\t5"]


def test_zeta_full1_closed_form(capsys):
    code, out, _ = run(capsys, "zeta", "--system", support.system_file("full1"), "--order", "3", "--closed-form")
    zeta, G, _ = closed_form_lines(out)
    assert zeta == RationalFunction([1], [1, -1])
    assert G == RationalFunction([0, 1], [1, -1])


@pytest.mark.parametrize("name", support.NAMES)
def test_zeta_order_zero(capsys, name):
    code, out, _ = run(capsys, "zeta", "--system", support.system_file(name), "--order", "0")
    assert code == 0
    assert out == "0\t1\n"


def dot_graph(text):
    labels = dict(re.findall(r'^\s*(s\d+) \[label="F#\d+/(.*)/P#\d+"\];$', text, re.M))
    edges = re.findall(r"^\s*(s\d+) -> (s\d+);$", text, re.M)
    alphabet = sorted(set(labels.values()))
    return LabeledGraph(list(labels), [(s, labels[s], t) for s, t in edges], alphabet)


def test_export_finitary_dot_language(tmp_path, capsys):
    out = tmp_path / "fin.dot"
    code, _, _ = run(capsys, "export", "--system", support.system_file("even"), "--what", "finitary", "--out", str(out))
    assert code == 0
    cover = trim_essential(dot_graph(out.read_text()))
    assert cover.alphabet == ("0", "1")
    assert factor_dfa(cover).delta == factor_dfa(support.CORPUS["even"].graph).delta


def test_export_full1_joint(tmp_path, capsys):
    out = tmp_path / "joint.dot"
    run(capsys, "export", "--system", support.system_file("full1"), "--what", "joint", "--out", str(out))
    text = out.read_text()
    assert text.count("[label=") == 1
    assert "s0 -> s0;" in text


def test_export_matrices(tmp_path, capsys):
    out = tmp_path / "levels.txt"
    code, _, _ = run(capsys, "export", "--system", support.system_file("even"), "--what", "matrices", "--out", str(out))
    assert code == 0
    text = out.read_text()
    assert "level 1 / size 13" in text
    for k, mats in parse_level_dump(text).items():
        J = mats["J"]
        assert (matmul(J, J) == np.identity(J.shape[0], dtype=int)).all(), k


@pytest.mark.parametrize("what", ["joint", "finitary", "component", "matrices"])
def test_export_is_deterministic(tmp_path, capsys, what):
    a, b = tmp_path / "a", tmp_path / "b"
    run(capsys, "export", "--system", support.system_file("even"), "--what", what, "--out", str(a))
    run(capsys, "export", "--system", support.system_file("even"), "--what", what, "--out", str(b))
    assert a.read_bytes() == b.read_bytes()
    # no temporary files left behind
    assert sorted(p.name for p in tmp_path.iterdir()) == ["a", "b"]


EVEN_DOC = json.loads((support.SYSTEMS_DIR / "even.json").read_text())


@pytest.mark.parametrize(
    "mutate",
    [
        lambda d: d.pop("name"),
        lambda d: d.update(kind="other"),
        lambda d: d.update(flip={}),
        lambda d: d["graph"].update(edges=[["p", "1"]]),
        lambda d: d["graph"].update(edges=[["p", "7", "p"]]),
        lambda d: d.update(flip={"window": {"radius": 1, "table": {"00": "0"}}}),
    ],
)
def test_schema_errors(tmp_path, capsys, mutate):
    doc = json.loads(json.dumps(EVEN_DOC))
    mutate(doc)
    code, _, err = run(capsys, "count", "--system", write(tmp_path, doc), "--max-m", "2")
    assert code == 2
    assert err.startswith("error")


def test_unreadable_file(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert run(capsys, "count", "--system", str(bad), "--max-m", "1")[0] == 2
    assert run(capsys, "count", "--system", str(tmp_path / "missing.json"), "--max-m", "1")[0] == 2


def test_empty_shift(tmp_path, capsys):
    doc = {"name": "empty", "kind": "sft", "states": ["a", "b"], "matrix": [[0, 1], [0, 0]], "flip": {"tau": {"a": "a", "b": "b"}}}
    assert run(capsys, "count", "--system", write(tmp_path, doc), "--max-m", "1")[0] == 2


@pytest.mark.parametrize(
    "flip",
    [
        {"tau": {"0": "1", "1": "1"}},
        {"tau": {"0": "1", "1": "0"}},
        {"window": {"radius": 1, "table": {"".join(w): str(int(w[1]) ^ int(w[2])) for w in itertools.product("01", repeat=3)}}},
    ],
    ids=["not-involution", "not-reversing", "xor-window"],
)
def test_flip_errors(tmp_path, capsys, flip):
    doc = dict(EVEN_DOC, flip=flip)
    code, _, err = run(capsys, "count", "--system", write(tmp_path, doc), "--max-m", "2")
    assert code == 3
    assert err.startswith("not a flip")


def test_reducible_component(tmp_path, capsys):
    doc = {
        "name": "two-loops",
        "kind": "sofic",
        "alphabet": ["a", "b", "c"],
        "graph": {"vertices": ["p", "q"], "edges": [["p", "a", "p"], ["p", "b", "q"], ["q", "c", "q"]]},
        "flip": {"tau": {"a": "c", "b": "b", "c": "a"}},
    }
    path = write(tmp_path, doc)
    assert run(capsys, "count", "--system", path, "--max-m", "4", "--verify")[0] == 0
    code, _, _ = run(capsys, "export", "--system", path, "--what", "component", "--out", str(tmp_path / "c.dot"))
    assert code == 5


def test_sliding_window_system(tmp_path, capsys):
    doc = {
        "name": "golden-shifted",
        "kind": "sft",
        "states": ["a", "b"],
        "matrix": [[1, 1], [1, 0]],
        "flip": {"window": {"radius": 1, "table": {"".join(w): w[2] for w in itertools.product("ab", repeat=3)}}},
    }
    path = write(tmp_path, doc)
    code, out, _ = run(capsys, "count", "--system", path, "--max-m", "6", "--verify")
    assert code == 0, out


def test_spaced_blocks():
    doc = {
        "name": "spaced",
        "kind": "sofic",
        "alphabet": ["x0", "x1"],
        "graph": {"vertices": ["v"], "edges": [["v", "x0", "v"], ["v", "x1", "v"]]},
        "flip": {"window": {"radius": 0, "table": {"x0": "x1", "x1": "x0"}}},
    }
    with pytest.raises(SchemaError):
        parse_system(doc)
    doc["flip"]["window"]["table"] = {"x0 ": "x1", " x1": "x0"}
    system = parse_system(doc)
    assert system.flip.table == {("x0",): "x1", ("x1",): "x0"}


def test_console_script_runs():
    proc = subprocess.run(
        [sys.executable, "-m", "flipcount.cli", "count", "--system", support.system_file("full1"), "--max-m", "1"],
        capture_output=True,
        text=True,
        check=False,
    )
    assert proc.returncode == 0
    assert proc.stdout.splitlines()[1] == "1\t1\t1\t-"


def test_monoid_cap_exit(capsys, monkeypatch):
    monkeypatch.setenv("FLIPCOUNT_MONOID_CAP", "1")
    code, _, err = run(capsys, "count", "--system", support.system_file("even"), "--max-m", "1")
    assert code == 1
    assert "FLIPCOUNT_MONOID_CAP" in err
