from __future__ import annotations

import json

import pytest
from hypothesis import given, strategies as st

from dikernels.cli import main
from dikernels.graph import build_digraph
from dikernels.io import (
    Instance,
    InstanceError,
    certificate_dict,
    dump_certificate,
    emit_dot,
    emit_instance,
    parse_instance,
    verify_certificate,
)

TRIPLE = "digraph 3 3\ne 2 1\ne 0 1\ne 2 0\nS 0\n"


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def write(tmp_path):
    def _write(name: str, text: str) -> str:
        path = tmp_path / name
        path.write_text(text)
        return str(path)

    return _write


# ------------------------------------------------------------------ parsing

def test_parse_path():
    inst = parse_instance("digraph 2 1\ne 0 1")
    assert inst.graph.edges() == [(0, 1)] and inst.S is None and inst.weights is None


def test_parse_partition():
    inst = parse_instance("# a path\ndigraph 2 1\ne 0 1\nS 1\n")
    assert inst.S == (1,) and inst.T == (0,) and inst.partition.kind == "valid-split"


def test_parse_loop_reports_line():
    with pytest.raises(InstanceError) as exc:
        parse_instance("digraph 2 1\ne 0 0\n")
    assert exc.value.kind == "loop" and exc.value.line == 2
    with pytest.raises(InstanceError) as exc:
        parse_instance("e 0 0")
    assert exc.value.kind == "loop" and exc.value.line == 1


@pytest.mark.parametrize("text,kind,line,column", [
    ("digraph 2 1\ne 0 5\n", "range", 2, 5),
    ("digraph 2 2\ne 0 1\ne 0 1\n", "duplicate", 3, 1),
    ("digraph 2 1\ne 0 x\n", "syntax", 2, 5),
    ("digraph 3 3\ne 0 1\ne 1 2\ne 2 0\nS 0 1 2\n", "partition", 5, 1),
    ("digraph 2 0\nw 1 -3\n", "syntax", 2, 5),
    ("digraph 2 0\nq\n", "syntax", 2, 1),
])
def test_parse_errors(text, kind, line, column):
    with pytest.raises(InstanceError) as exc:
        parse_instance(text)
    assert (exc.value.kind, exc.value.line, exc.value.column) == (kind, line, column)


def test_parse_edge_count_mismatch():
    with pytest.raises(InstanceError, match="announces 2 edges"):
        parse_instance("digraph 2 2\ne 0 1\n")


def test_parse_weights_default_zero():
    inst = parse_instance("digraph 3 0\nw 1 4\n")
    assert inst.weights == (0, 4, 0)


@st.composite
def instances(draw):
    n = draw(st.integers(1, 8))
    pairs = [(u, v) for u in range(n) for v in range(n) if u != v]
    edges = draw(st.lists(st.sampled_from(pairs), unique=True)) if pairs else []
    weights = draw(st.none() | st.lists(st.integers(0, 9), min_size=n, max_size=n))
    return build_digraph(n, edges), weights


@given(instances())
def test_round_trip(data):
    G, weights = data
    text = emit_instance(G, None, weights)
    inst = parse_instance(text)
    assert inst.graph == G and inst.weights == (None if weights is None else tuple(weights))
    assert emit_instance(inst.graph, None, inst.weights) == text


# -------------------------------------------------------------------- DOT

def test_dot():
    G = build_digraph(3, [(0, 1), (1, 2)])
    plain = emit_dot(G)
    assert plain == "digraph G {\n  0;\n  1;\n  2;\n  0 -> 1;\n  1 -> 2;\n}\n"
    marked = emit_dot(G, [0, 2])
    assert '  0 [class="kernel"];' in marked and '  2 [class="kernel"];' in marked
    assert emit_dot(G, [0, 2]) == marked


# ----------------------------------------------------------- certificates

def test_certificate_canonical_bytes():
    inst = parse_instance(TRIPLE)
    a = certificate_dict("x", inst, [2], 2, 1, {1: [2, 1], 0: [2, 0], 2: [2]}, True)
    b = certificate_dict("x", inst, {2}, 2, 1, {2: [2], 0: [2, 0], 1: [2, 1]}, True)
    assert dump_certificate(a) == dump_certificate(b)
    assert verify_certificate(inst, a) is None


def test_verify_detects_problems():
    inst = parse_instance(TRIPLE)
    good = certificate_dict("x", inst, [2], 2, 1, {0: [2, 0], 1: [2, 1], 2: [2]}, True)
    assert verify_certificate(inst, dict(good, kernel=[0, 1])).startswith("edge (0,1)")
    assert "hash" in verify_certificate(inst, dict(good, input_hash="0"))
    assert "exceeds" in verify_certificate(inst, dict(good, bound="1/2"))
    assert "non-edge" in verify_certificate(inst, dict(good, witness={"0": [2, 0], "1": [2, 1], "2": [2, 1, 2]}))
    no_k = {key: v for key, v in good.items() if key != "k"}
    assert "malformed" in verify_certificate(inst, no_k)


# ------------------------------------------------------------------- CLI

def test_cli_split_qk(capsys, write):
    path = write("t.txt", TRIPLE)
    code, out, _ = run(capsys, "split-qk", path)
    doc = json.loads(out)
    assert code == 0 and doc["kernel"] == [2] and doc["valid"] and doc["bound"] == "3/2"
    cert = write("c.json", out)
    assert run(capsys, "verify", path, cert)[0] == 0


def test_cli_tampered_certificate(capsys, write):
    path = write("t.txt", TRIPLE)
    _, out, _ = run(capsys, "split-qk", path)
    doc = json.loads(out)
    doc["kernel"] = [0, 1]
    cert = write("c.json", json.dumps(doc))
    code, out, err = run(capsys, "verify", path, cert)
    assert code == 2 and json.loads(out)["valid"] is False and "inside the kernel" in err


def test_cli_digons(capsys, write):
    path = write("d.txt", "digraph 3 5\ne 0 1\ne 1 0\ne 2 0\ne 2 1\ne 0 2\n")
    code, _, err = run(capsys, "split-qk", path)
    assert code == 1 and "digon" in err
    code, out, _ = run(capsys, "split-qk", "--allow-digons", path)
    assert code == 0
    assert run(capsys, "verify", path, write("c.json", out))[0] == 0


def test_cli_invalid_input(capsys, write):
    code, _, err = run(capsys, "split-qk", write("bad.txt", "digraph 2 1\ne 1 1\n"))
    assert code == 1 and "line 2" in err
    assert run(capsys, "split-qk", "/nonexistent/file")[0] == 1


@pytest.mark.parametrize("mode", ["open", "closed"])
def test_cli_large2k(capsys, write, mode):
    path = write("b.txt", "digraph 3 3\ne 0 1\ne 1 2\ne 2 0\nS 1 2\nw 0 1\nw 1 1\nw 2 1\n")
    code, out, _ = run(capsys, "large2k", "--nplus-mode", mode, path)
    doc = json.loads(out)
    assert code == 0 and doc["kernel"] == [0] and doc["coverage"] == 2 and doc["bound"] == "3/2"
    assert doc["mixed_inequality"]["mode"] == mode
    assert run(capsys, "verify", path, write("c.json", out))[0] == 0


def test_cli_large2k_uniform_and_auto_break(capsys, write):
    path = write("c4.txt", "digraph 4 4\ne 0 1\ne 1 2\ne 2 3\ne 3 0\n")
    assert run(capsys, "large2k", path)[0] == 1
    code, out, err = run(capsys, "large2k", "--uniform-weight", "2", path)
    doc = json.loads(out)
    assert code == 0 and doc["uniform_weight"] == 2 and doc["break_S"] == [2, 3]
    assert 2 * doc["coverage"] >= 8
    assert run(capsys, "verify", path, write("c.json", out))[0] == 0


@pytest.mark.parametrize("text,k,algorithm", [
    ("digraph 4 3\ne 0 1\ne 1 2\ne 2 3\n", 2, "acyclic-k-kernel"),
    ("digraph 4 4\ne 0 1\ne 1 2\ne 2 3\ne 3 0\n", 2, "arborescence-k-kernel"),
])
def test_cli_kkernel(capsys, write, text, k, algorithm):
    path = write("g.txt", text)
    code, out, _ = run(capsys, "kkernel", "-k", str(k), path)
    doc = json.loads(out)
    assert code == 0 and doc["algorithm"] == algorithm and doc["kernel"] == [0, 2]
    assert run(capsys, "verify", path, write("c.json", out))[0] == 0


def test_cli_kkernel_no_root(capsys, write):
    code, _, err = run(capsys, "kkernel", "-k", "2", write("g.txt", "digraph 3 2\ne 0 2\ne 1 2\n"))
    assert code == 1 and "arborescence" in err


def test_cli_search(capsys):
    code, out, _ = run(capsys, "search", "--family", "no-source-oriented", "--n", "6")
    doc = json.loads(out)
    assert code == 0 and doc["instances"] == 8132 and doc["tallies"] == {"holds": 8132}
    assert doc["counterexamples"] == []


def test_cli_search_resume(capsys, tmp_path):
    ck = str(tmp_path / "ck")
    assert run(capsys, "search", "--family", "split", "--n", "4", "--checkpoint", ck)[0] == 0
    code, out, _ = run(capsys, "search", "--family", "split", "--n", "4", "--resume", ck)
    assert code == 0 and json.loads(out)["instances"] > 0


def test_cli_size_guard(capsys, write, monkeypatch):
    monkeypatch.setenv("DIKERNELS_MAX_N", "2")
    path = write("c4.txt", "digraph 4 4\ne 0 1\ne 1 2\ne 2 3\ne 3 0\n")
    assert run(capsys, "large2k", "--uniform-weight", "1", path)[0] == 3


def test_cli_ceiling(capsys):
    code, _, err = run(capsys, "search", "--family", "split", "--n", "9")
    assert code == 3 and "ceiling" in err


def test_cli_gen_and_tight(capsys, write):
    code, out, _ = run(capsys, "gen", "--kind", "split", "--n-s", "3", "--n-t", "4", "--seed", "5")
    inst = parse_instance(out)
    assert code == 0 and inst.partition.is_split
    assert run(capsys, "gen", "--kind", "split", "--n-s", "3", "--n-t", "4", "--seed", "5")[1] == out
    code, out, _ = run(capsys, "tight", "-k", "3", "-m", "6")
    assert code == 0 and parse_instance(out).graph.n == 20
    path = write("t.txt", out)
    code, out, _ = run(capsys, "kkernel", "-k", "3", path)
    assert len(json.loads(out)["kernel"]) == 7


def test_cli_dot(capsys, write):
    path = write("t.txt", TRIPLE)
    _, cert, _ = run(capsys, "split-qk", path)
    code, out, _ = run(capsys, "dot", path, "--certificate", write("c.json", cert))
    assert code == 0 and '  2 [class="kernel"];' in out


def test_instance_dataclass_partition_none():
    assert Instance(build_digraph(1, [])).partition is None
