import json
import os
import subprocess
import sys

import pytest

from fanorigid.cli import Report, main

GRAPH = "3 1\n2 2 1 1\n1 1 1\n1 0\n2 1\n3 2\n3 0\n"


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_verify_claims_small_range(capsys):
    code, out, _ = run(capsys, "verify-claims", "--M", "5..8", "--jobs", "1")
    assert code == 0
    assert "status: 0" in out and "BAD" not in out


def test_corrupted_bound_reports_violator(capsys):
    code, out, _ = run(capsys, "verify-claims", "--M", "6..7", "--jobs", "1", "--corrupt", "prop7=3.01")
    assert code == 1
    assert "violating point" in out and "1/2" in out


def test_empty_range_and_bad_inputs(capsys):
    code, out, _ = run(capsys, "verify-claims", "--M", "9..8")
    assert code == 0 and "0 items" in out
    assert run(capsys, "verify-claims", "--corrupt", "nope=1")[0] == 2
    assert run(capsys, "verify-claims", "--M", "x..y")[0] == 2
    assert run(capsys, "no-such-command")[0] == 2
    assert run(capsys, "verify-claims", "--jobs", "0", "--M", "5")[0] == 2


def test_claim_file(tmp_path, capsys):
    f = tmp_path / "c.txt"
    f.write_text("variables: s t\nN: (0,0,4) (0,1,4) (1,1,1)\nD: (0,0,1) (0,1,2)\nbound: 3\n")
    code, out, _ = run(capsys, "verify-claims", "--claim-file", str(f))
    assert code == 0 and "N - 3*D = (s - t)^2" in out
    f.write_text("variables: s t\nN: (0,0,4) (0,1,4) (1,1,1)\nD: (0,0,1) (0,1,2)\nbound: 301/100\n")
    code, out, _ = run(capsys, "verify-claims", "--claim-file", str(f))
    assert code == 1 and "violating point" in out
    f.write_text("variables: s t\nbound: 3.5\n")
    code, _, err = run(capsys, "verify-claims", "--claim-file", str(f))
    assert code == 2 and "line 2" in err
    f.write_text("variables: s t\nN: (0,0,1)\nD: (1,1,-1)\nbound: 1\n")
    code, _, err = run(capsys, "verify-claims", "--claim-file", str(f))
    assert code == 2 and "denominator" in err


def test_check_regularity_random(capsys):
    code, out, _ = run(capsys, "check-regularity", "--random", "5", "3", "1", "--samples", "2", "--base-locus")
    assert code == 0
    assert "condition (iii): n/a" in out
    assert "base locus codim for i=3: 1 (expected 1)" in out
    assert "base locus codim for i=4: 2 (expected 2)" in out
    code, out, _ = run(capsys, "check-regularity", "--random", "5", "3", "1", "--samples", "0")
    assert code == 0 and "condition (ii): skipped" in out


def test_check_regularity_file_and_irregular(tmp_path, capsys):
    path = tmp_path / "g.txt"
    assert run(capsys, "random-germ", "5", "3", "2", "--irregular", "--output", str(path))[0] == 0
    code, out, _ = run(capsys, "check-regularity", str(path), "--samples", "1")
    assert code == 1 and "condition (i): fail" in out and "prefix" in out
    path.write_text("5 3\n1 3 0 0 0 0\n--\n1 4 0 0 0 0\n--\n1.5 5 0 0 0 0\n")
    code, _, err = run(capsys, "check-regularity", str(path))
    assert code == 2 and "parse error: line 6" in err
    assert run(capsys, "check-regularity", "--random", "4", "2", "1")[0] == 2
    assert run(capsys, "check-regularity", "--random", "5", "3", "1", "--prime", "32001")[0] == 2


def test_graph_command(tmp_path, capsys):
    g = tmp_path / "g.txt"
    g.write_text(GRAPH)
    nu = tmp_path / "nu.txt"
    nu.write_text("2\n5 3 2 1\n")
    m = tmp_path / "m.txt"
    m.write_text("1\n1 1\n")
    code, out, _ = run(capsys, "graph", str(g), "--mu", "3", "--M", "6", "--nu", str(nu), "--m", str(m))
    assert code == 0
    assert "p = 2 1 1 1" in out
    assert "pruned arrows [(3, 0)]" in out and "after True" in out
    # after pruning p = (1,1,1,1): (2+2+1+1)^2 / ((1/2 + 3) * 6) = 36/21
    assert "threshold per unit degree: 12/7" in out
    cyc = tmp_path / "cyc.txt"
    cyc.write_text("2 1\n2 2 1\n1 1\n1 0\n2 1\n1 2\n")
    assert run(capsys, "graph", str(cyc), "--mu", "3", "--M", "6")[0] == 2
    nu.write_text("2\n5 3\n")
    assert run(capsys, "graph", str(g), "--mu", "3", "--M", "6", "--nu", str(nu))[0] == 2


def test_involution(capsys):
    code, out, _ = run(capsys, "involution", "--M", "5", "--n", "4", "--nu0", "5")
    assert code == 0 and "untwisted: (1, 0)" in out and "at the bound: True" in out
    code, out, _ = run(capsys, "involution", "--M", "5", "--n", "4", "--nu0", "3")
    assert code == 0 and "not maximal" in out
    assert run(capsys, "involution", "--M", "3", "--n", "1", "--nu0", "2")[0] == 2


def test_structured_round_trip_and_determinism(tmp_path, capsys):
    a, b = tmp_path / "a.jsonl", tmp_path / "b.jsonl"
    for path in (a, b):
        assert main(["verify-claims", "--M", "5..7", "--jobs", "1", "--format", "structured",
                     "--output", str(path)]) == 0
    assert a.read_text() == b.read_text()
    lines = a.read_text().splitlines()
    head = json.loads(lines[0])
    assert head["schema"] == "fanorigid-report" and head["schema_version"] == 1
    rep = Report.from_lines(lines)
    assert rep.command == "verify-claims" and rep.status == 0
    assert rep.to_lines() == lines
    for line in lines:
        for v in _leaves(json.loads(line)):
            assert not isinstance(v, float)
    with pytest.raises(ValueError):
        Report.from_lines(['{"record": "item"}'])


def _leaves(x):
    if isinstance(x, dict):
        for v in x.values():
            yield from _leaves(v)
    elif isinstance(x, list):
        for v in x:
            yield from _leaves(v)
    else:
        yield x


def test_parallel_ledger_matches_serial(tmp_path):
    a, b = tmp_path / "a.jsonl", tmp_path / "b.jsonl"
    assert main(["verify-claims", "--M", "5..7", "--jobs", "1", "--format", "structured", "--output", str(a)]) == 0
    assert main(["verify-claims", "--M", "5..7", "--jobs", "2", "--format", "structured", "--output", str(b)]) == 0
    assert a.read_text() == b.read_text()


def test_console_script_module_entry():
    env = dict(os.environ, FANORIGID_PRIME="101")
    out = subprocess.run([sys.executable, "-m", "fanorigid.cli", "check-regularity", "--random", "5", "3", "1",
                          "--samples", "1"], capture_output=True, text=True, env=env)
    assert out.returncode in (0, 1)
    assert "GF(101)" in out.stdout
