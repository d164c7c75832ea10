import json
import subprocess
import sys

import pytest

from ogdegen.cli import STATEMENTS, main, run


def doc_of(argv):
    code, text, msg = run(argv)
    assert code == 0, msg
    return json.loads(text)


def test_formula_n4():
    d = doc_of(["verify", "formula", "--n", "4"])
    assert d["statement"] == "class-formula" and d["ok"]
    assert len(d["terms"]) == 8


def test_shape_n8():
    d = doc_of(["shape", "--n", "8", "--pair", "4,6,7;1,3,5"])
    assert d["rows"][0] == "0000000000000+++1"
    assert d["rows"][-1] == "*1000000000000000"
    assert d["plus_count"] == 10


def test_cascade_n5_seed7():
    d = doc_of(["cascade", "--n", "5", "--seed", "7"])
    assert d["leaf_count"] == 16 and d["ok"] and not d["failures"]
    assert all(s["left"] == s["right"] == "match" for s in d["steps"])


def test_byte_identical_output(tmp_path):
    argv = ["cascade", "--n", "4", "--seed", "3", "--dump-matrices"]
    a = run(argv)[1]
    out = tmp_path / "c.json"
    b = run(argv + ["--out", str(out)])[1]
    assert a == b == out.read_text()


@pytest.mark.parametrize("check", sorted(STATEMENTS))
def test_verify_headers(check):
    argv = ["verify", check, "--n", "3", "--samples", "5"]
    d = doc_of(argv)
    assert d["statement"] == STATEMENTS[check]
    assert d["ok"]


def test_verify_decomposition_point():
    x = "9/10,9/10,1/10,9/10,9/10,9/10,1/10,1/10,9/10"
    d = doc_of(["verify", "decomposition", "--n", "9", "--point", x])
    assert d["assignment"]["SC"] == [2, 4, 5, 6, 9]
    assert d["assignment"]["I"] == [1, 4, 5, 6, 8]


def test_other_commands():
    d = doc_of(["tree", "--n", "4"])
    assert d["node_count"] == 15 and d["leaf_count"] == 8
    d = doc_of(["solve", "--n", "4", "--seed", "2"])
    assert d["ok"]
    d = doc_of(["degenerate", "--n", "6", "--pair", ";3", "--seed", "1"])
    assert d["right"]["pair"] == {"I": [4, 5], "Iprime": [3], "n": 6}
    d = doc_of(["matroid", "--n", "3"])
    assert d["feasible_count"] == 8
    d = doc_of(["polytope", "--n", "3", "--pair", "1;2", "--point", "1/2,1/3,1/4"])
    assert "member" in d["point"] and d["lattice_index"] == 1


def test_markdown_output():
    code, text, _ = run(["shape", "--n", "3", "--format", "md"])
    assert code == 0 and "```" in text
    code, text, _ = run(["verify", "multiplicity", "--n", "4", "--summary"])
    assert code == 0 and text.startswith("| leaf I |")
    code, text, _ = run(["verify", "decomposition", "--n", "3", "--samples", "20", "--summary"])
    assert code == 0 and "| multiplicity |" in text


@pytest.mark.parametrize("argv,flag", [
    (["shape", "--n", "8", "--pair", "4,6;1,3,5"], "--pair"),
    (["shape", "--n", "8", "--pair", "4,6"], "--pair"),
    (["tree"], "--n"),
    (["tree", "--n", "1"], "--n"),
    (["verify", "decomposition", "--n", "2", "--point", "1/2,1/2"], "--point"),
    (["verify", "decomposition", "--n", "2", "--point", "1/2"], "--point"),
    (["verify", "decomposition", "--n", "2", "--point", "a,b"], "--point"),
    (["verify", "polytopes-same", "--n", "5"], "--n"),
    (["degenerate", "--n", "3", "--pair", "1;2"], "--pair"),
])
def test_usage_errors_name_the_flag(argv, flag):
    code, text, msg = run(argv)
    assert code == 2 and not text
    assert flag in msg


def test_argparse_errors_exit_2():
    with pytest.raises(SystemExit) as exc:
        run(["shape", "--n", "x"])
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        run(["verify", "nonsense"])
    assert exc.value.code == 2


def test_verification_failure_exits_1(monkeypatch):
    import ogdegen.decomp as decomp
    from ogdegen.errors import VerificationFailure

    def broken(n):
        raise VerificationFailure("term ({},{1,2}): w-sum 2")
    monkeypatch.setattr(decomp, "class_formula", broken)
    code, text, msg = run(["verify", "formula", "--n", "3"])
    assert code == 1
    assert "class-formula" in msg and "class-formula-terms" in msg
    assert json.loads(text)["ok"] is False


def test_entry_point_subprocess():
    p = subprocess.run([sys.executable, "-m", "ogdegen", "verify", "formula", "--n", "3"],
                       capture_output=True, text=True)
    assert p.returncode == 0
    assert json.loads(p.stdout)["statement"] == "class-formula"
    p = subprocess.run([sys.executable, "-m", "ogdegen", "tree"], capture_output=True, text=True)
    assert p.returncode == 2 and "--n" in p.stderr
    assert main(["verify", "formula", "--n", "2"]) == 0
