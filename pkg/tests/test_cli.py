from __future__ import annotations

import json
import subprocess
import sys

import pytest

from splitkit.cli import run
from splitkit.grp import is_isomorphic, parse_table, symmetric_group


def run_cli(capsys, *argv):
    code = run(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_primesearch(capsys):
    code, out, _ = run_cli(capsys, "primesearch", "-n", "4", "-r", "1", "--limit", "40")
    assert code == 0 and out.strip() == "5 13 29 37"


def test_unknown_suite_is_usage_error(capsys):
    code, _, err = run_cli(capsys, "verify", "--suite", "nosuch")
    assert code == 1 and "unknown suite" in err


def test_missing_arguments_are_usage_errors(capsys):
    assert run_cli(capsys)[0] == 1
    assert run_cli(capsys, "primesearch", "-n", "4")[0] == 1
    assert run_cli(capsys, "repalg", "pglpsl")[0] == 1


def test_verify_section2_writes_json(capsys, tmp_path):
    out = tmp_path / "out.json"
    code, table, _ = run_cli(capsys, "verify", "--suite", "section2", "--json", str(out))
    assert code == 0
    report = json.loads(out.read_text())
    assert report["suite"] == "section2" and report["seed"] == 42
    assert report["summary"]["falsified"] == 0 and report["summary"]["errors"] == 0
    assert report["summary"]["total"] == len(report["cases"])
    ids = [c["id"] for c in report["cases"]]
    assert ids == sorted(ids)
    assert "verified" in table


def test_verify_with_corpus_override(capsys, tmp_path):
    corpus = tmp_path / "c.json"
    corpus.write_text(json.dumps({"commutator": [3], "uniqueness": [], "splitcheck": [], "primes": [],
                                  "sdp": [], "semidirect_gl2": [], "psl2_witness": []}))
    out = tmp_path / "o.json"
    code, _, _ = run_cli(capsys, "verify", "--suite", "section2", "--corpus", str(corpus),
                         "--json", str(out), "--quiet")
    assert code == 0
    cases = json.loads(out.read_text())["cases"]
    commutator = [c for c in cases if "commutator" in c["id"]]
    assert len(commutator) == 1 and commutator[0]["verdict"] == "verified"


def test_unknown_corpus_section_rejected(capsys, tmp_path):
    corpus = tmp_path / "c.json"
    corpus.write_text(json.dumps({"bogus": []}))
    assert run_cli(capsys, "verify", "--suite", "section2", "--corpus", str(corpus))[0] == 1


def test_sdp_spec_and_table_export(capsys, tmp_path):
    spec = tmp_path / "s.json"
    spec.write_text(json.dumps({"factors": [{"group": "sym:3", "subgroup": "derived",
                                             "complement": ["(12)"]}] * 2}))
    table = tmp_path / "t.txt"
    code, out, _ = run_cli(capsys, "sdp", "--spec", str(spec), "--export", str(table))
    assert code == 0
    res = json.loads(out)
    assert res["order"] == 18 and res["verdict"] == "verified" and res["psi_violations"] == 0
    T = parse_table(table.read_text())
    assert T.order == 18 and not is_isomorphic(T, symmetric_group(3)).isomorphic


def test_sdp_with_non_closed_transversal(capsys, tmp_path):
    spec = tmp_path / "s.json"
    spec.write_text(json.dumps({"factors": [{"group": "cyclic:4", "subgroup": ["g^2"]}] * 2,
                                "transversal": [["1", "g"], ["1", "g"]]}))
    code, out, _ = run_cli(capsys, "sdp", "--spec", str(spec))
    res = json.loads(out)
    assert code == 0 and res["verdict"] == "not-applicable" and not res["closed"]


def test_induce_prints_blocks(capsys):
    code, out, _ = run_cli(capsys, "induce", "--group", "sym:3", "--subgroup", "derived",
                           "--rep", '{"(123)": [[2]]}', "--ell", "7")
    assert code == 0
    assert "rho(" in out
    res = json.loads(out[out.index("{"):])
    assert res["n"] == 2 and res["m"] == 1 and res["exact"]
    assert res["image_H_order"] == 3


def test_induce_quiet_json(capsys, tmp_path):
    path = tmp_path / "i.json"
    code, out, _ = run_cli(capsys, "induce", "--group", "cyclic:4", "--subgroup", "g^2",
                           "--rep", '{"g^2": [[4]]}', "--ell", "5", "--json", str(path), "--quiet")
    assert code == 0 and out == ""
    res = json.loads(path.read_text())
    assert res["split"]["verdict"] == "NoSplit" and res["image_order"] == 4


def test_splitcheck(capsys):
    code, out, _ = run_cli(capsys, "splitcheck", "--group", "gl2:5", "--index", "2")
    res = json.loads(out)
    assert code == 0 and res["verdict"] == "NoSplit" and res["gcd"] == 2
    code, out, _ = run_cli(capsys, "splitcheck", "--group", "gl2:7", "--index", "2")
    res = json.loads(out)
    assert res["verdict"] == "SplitWithWitness" and res["gcd"] == 1


def test_repalg_iso_detects_counterexample(capsys, tmp_path):
    spec = tmp_path / "r.json"
    spec.write_text(json.dumps({"group": "cyclic:4", "field": 5, "reps": ["trivial", {"g": [[2]]}]}))
    code, out, _ = run_cli(capsys, "repalg", "iso", "--spec", str(spec), "--samples", "200")
    res = json.loads(out)
    assert code == 2 and not res["directsum_tensor_iso"] and res["tuple_tensor_iso"]


def test_repalg_tensor_and_pair(capsys, tmp_path):
    spec = tmp_path / "r.json"
    spec.write_text(json.dumps({"group": "sl2:3", "field": 3, "reps": ["natural", "natural"]}))
    code, out, _ = run_cli(capsys, "repalg", "tensor", "--spec", str(spec))
    res = json.loads(out)
    assert code == 0 and res["dim"] == 4 and res["projective_image_order"] == 12
    spec.write_text(json.dumps({"group": "cyclic:4", "field": 5, "reps": ["trivial"], "subgroup": "g^2"}))
    code, out, _ = run_cli(capsys, "repalg", "pair", "--spec", str(spec))
    res = json.loads(out)
    assert code == 0 and res["ker_phi"] == 2 and res["ker_psi"] == 1


def test_repalg_pglpsl(capsys):
    code, out, _ = run_cli(capsys, "repalg", "pglpsl", "--p", "5", "--samples", "500")
    res = json.loads(out)
    assert code == 0 and res["ok"] and res["histogram_witness"] == [4]


def test_bad_group_spec_exits_1(capsys):
    assert run_cli(capsys, "splitcheck", "--group", "nosuch:3", "--index", "2")[0] == 1


@pytest.mark.parametrize("argv", [["--help"], ["verify", "--help"]])
def test_help_exits_zero(argv):
    res = subprocess.run([sys.executable, "-m", "splitkit.cli", *argv], capture_output=True, text=True)
    assert res.returncode == 0 and "usage" in res.stdout
