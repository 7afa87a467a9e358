import json
import shutil
import subprocess

import pytest

from nre.cli import main
from nre.graph import load_graph


@pytest.fixture
def chain(tmp_path):
    p = tmp_path / "g.tsv"
    p.write_text("1\ta\t2\n2\tb\t3\n")
    return str(p)


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_eval_lists_pairs(capsys, chain):
    assert run(capsys, "eval", "-g", chain, "-q", "a . b") == (0, "1\t3\n", "")


def test_eval_single_pair(capsys, chain):
    assert run(capsys, "eval", "-g", chain, "-q", "a . b", "--from", "1", "--to", "3")[1] == "true\n"
    assert run(capsys, "eval", "-g", chain, "-q", "a", "--from", "1", "--to", "3")[1] == "false\n"


def test_eval_json(capsys, chain):
    code, out, _ = run(capsys, "eval", "-g", chain, "-q", "a*", "--format", "json")
    assert code == 0 and json.loads(out) == [["1", "1"], ["1", "2"], ["2", "2"], ["3", "3"]]


@pytest.mark.parametrize("argv, message", [
    (["-q", "a . (b"], "position 6"),
    (["-q", "a", "--from", "1"], "--from and --to"),
    (["-q", "a", "--from", "1", "--to", "9"], "unknown node"),
])
def test_eval_input_errors(capsys, chain, argv, message):
    code, out, err = run(capsys, "eval", "-g", chain, *argv)
    assert code == 2 and out == "" and message in err and err.startswith("nre: error:")


def test_eval_missing_and_bad_graph(capsys, tmp_path):
    assert run(capsys, "eval", "-g", str(tmp_path / "nope.tsv"), "-q", "a")[0] == 2
    bad = tmp_path / "bad.tsv"
    bad.write_text("1\ta\n")
    code, _, err = run(capsys, "eval", "-g", str(bad), "-q", "a")
    assert code == 2 and "line 1" in err


def test_contain_contained(capsys):
    assert run(capsys, "contain", "--lhs", "a", "--rhs", "a | b", "--mode", "semipath") == (0, "CONTAINED\n", "")


def test_contain_counterexample_replays(capsys, tmp_path):
    code, out, _ = run(capsys, "contain", "--lhs", "a | b", "--rhs", "a")
    assert code == 1
    assert out == "NOT CONTAINED\nu1\tb\tu2\n(u1,u2)\n"
    g = tmp_path / "cx.tsv"
    g.write_text("".join(out.splitlines(keepends=True)[1:-1]))
    assert load_graph(g.read_text()).edges == {("u1", "b", "u2")}
    assert run(capsys, "eval", "-g", str(g), "-q", "a | b", "--from", "u1", "--to", "u2")[1] == "true\n"
    assert run(capsys, "eval", "-g", str(g), "-q", "a", "--from", "u1", "--to", "u2")[1] == "false\n"


def test_contain_bounded_unknown(capsys):
    code, out, _ = run(capsys, "contain", "--lhs", "a | b", "--rhs", "a", "--strategy", "bounded", "--max-len", "0")
    assert code == 3 and out.startswith("UNKNOWN")


def test_contain_general_json(capsys):
    code, out, _ = run(capsys, "contain", "--lhs", "[a]", "--rhs", "[a . b]", "--mode", "general", "--format", "json")
    data = json.loads(out)
    assert code == 1 and data["verdict"] == "not_contained"
    assert data["pair"] == ["1", "1"] and data["counterexample"] == [["1", "a", "11"]]


def test_contain_state_budget(capsys):
    assert run(capsys, "contain", "--lhs", "a*", "--rhs", "(a | b)*", "--state-budget", "2")[0] == 3


def test_contain_k_override(capsys):
    code, out, _ = run(capsys, "contain", "--lhs", "[a] . b", "--rhs", "b", "--mode", "general", "--k", "1")
    assert code == 0


def test_contain_errors(capsys):
    assert run(capsys, "contain", "--lhs", "a")[0] == 2
    code, _, err = run(capsys, "contain", "--lhs", "a |", "--rhs", "a")
    assert code == 2 and "left-hand side" in err


def test_contain_batch(capsys, tmp_path):
    batch = tmp_path / "pairs.tsv"
    batch.write_text("# lhs\trhs\na\ta | b\na | b\ta\n[a\ta\n")
    code, out, _ = run(capsys, "contain", "--batch", str(batch))
    lines = out.splitlines()
    assert code == 0 and lines[0] == "a\ta | b\tCONTAINED" and lines[1] == "a | b\ta\tNOT CONTAINED"
    assert lines[2].startswith("[a\ta\tERROR")
    assert run(capsys, "contain", "--batch", str(batch), "--jobs", "2")[1] == out


def test_contain_batch_bad_line(capsys, tmp_path):
    batch = tmp_path / "pairs.tsv"
    batch.write_text("a\n")
    assert run(capsys, "contain", "--batch", str(batch))[0] == 2


def test_translate_semipath(capsys):
    code, out, _ = run(capsys, "translate", "-q", "a", "--format", "json")
    data = json.loads(out)
    assert code == 0 and set(data["states"]) == {"q0'", "q0", "qf", "qr"}
    assert "eps" not in {m[1] for m in data["delta"]}


def test_translate_eliminates_epsilon(capsys):
    data = json.loads(run(capsys, "translate", "-q", "[a]*", "--marked", "--format", "json")[1])
    assert data["initial"] == "q0S" and "eps" not in {m[1] for m in data["delta"]}


def test_translate_is_deterministic(capsys):
    first = run(capsys, "translate", "-q", "[a . b^-]", "--mode", "general", "--marked")[1]
    assert first.startswith("digraph") and first == run(capsys, "translate", "-q", "[a . b^-]", "--mode", "general", "--marked")[1]


def test_translate_bad_k(capsys):
    assert run(capsys, "translate", "-q", "a", "--mode", "general", "--k", "0")[0] == 2


def test_encode(capsys, tmp_path):
    tree = tmp_path / "t.json"
    tree.write_text(json.dumps({"k": 1, "edges": [{"parent": "1", "child": "11", "label": "a"},
                                                  {"parent": "11", "child": "111", "label": "b"}]}))
    assert run(capsys, "encode", str(tree)) == (0, "%(1,a,1)(1,b,1)(1,$,1)&\n", "")
    tree.write_text('{"k": 1, "edges": [{"parent": "1", "child": "12", "label": "a"}]}')
    assert run(capsys, "encode", str(tree))[0] == 2


def test_sample_is_seeded(capsys):
    first = run(capsys, "sample", "--seed", "3", "--count", "5")[1]
    assert len(first.splitlines()) == 5 and all(len(l.split("\t")) == 2 for l in first.splitlines())
    assert run(capsys, "sample", "--seed", "3", "--count", "5")[1] == first


def test_oracle_contain(capsys):
    code, out, _ = run(capsys, "oracle-contain", "--lhs", "b", "--rhs", "[a] . b", "--max-size", "3")
    assert code == 1 and out.splitlines()[-1] == "(u1,u2)"


@pytest.mark.skipif(shutil.which("nre") is None, reason="console script not installed")
def test_console_script():
    done = subprocess.run(["nre", "contain", "--lhs", "a", "--rhs", "a | b"], capture_output=True, text=True)
    assert done.returncode == 0 and done.stdout == "CONTAINED\n"
