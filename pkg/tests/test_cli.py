import json

import pytest

from quatholo.cli import main
from quatholo.jsonio import decode_real_vector
from quatholo.subspaces import RealSubspace, real_witt_span


def run(tmp_path, *argv):
    out = tmp_path / "report.json"
    code = main([*argv, "--out", str(out), "--no-timestamp"])
    return code, (json.loads(out.read_text()) if out.exists() else None)


def write(tmp_path, name, obj):
    p = tmp_path / name
    p.write_text(json.dumps(obj))
    return str(p)


def test_real_translations_with_B_are_weakly_irreducible(tmp_path):
    code, rep = run(tmp_path, "construct", "--example", "1", "--n", "2")
    assert code == 0
    alg = write(tmp_path, "ex1.json", rep)
    code, rep = run(tmp_path, "check", "--algebra", alg)
    assert code == 0
    assert rep["results"]["weak_irreducibility_verdict"] == "WeaklyIrreducible"
    assert rep["results"]["contains_B"] and rep["results"]["is_subalgebra"]


@pytest.mark.parametrize("n", [1, 2])
def test_real_translations_without_B_witness_is_real_witt_span(tmp_path, n):
    _, rep = run(tmp_path, "construct", "--example", "2", "--n", str(n))
    code, rep = run(tmp_path, "check", "--algebra", write(tmp_path, "ex2.json", rep))
    assert code == 0
    res = rep["results"]
    assert res["weak_irreducibility_verdict"] == "Inconclusive"
    assert not res["contains_B"]
    w = res["witness"]
    assert w["nondegenerate"]
    W = RealSubspace(4 * (n + 2), [decode_real_vector(v) for v in w["basis"]])
    assert W == real_witt_span(n)


def test_construct_from_params_and_check(tmp_path):
    params = write(tmp_path, "p.json", {"m": 2, "h0_generators": [[0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]]})
    code, rep = run(tmp_path, "construct", "--type", "I", "--n", "2", "--params", params)
    assert code == 0 and rep["results"]["type"] == "I"
    code, rep = run(tmp_path, "check", "--algebra", write(tmp_path, "c.json", rep))
    assert rep["results"]["weak_irreducibility_verdict"] == "WeaklyIrreducible"


def test_invalid_spec_exits_1_with_error_object(tmp_path):
    params = write(tmp_path, "p.json", {"m": 2, "h0_generators": [[0, 1, 0, 0]]})
    code, rep = run(tmp_path, "construct", "--type", "I", "--n", "2", "--params", params)
    assert code == 1
    assert rep["error"] == "InvalidSpec"


def test_malformed_input_exits_2(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert main(["check", "--algebra", str(bad)]) == 2
    assert json.loads(capsys.readouterr().err)["error"] == "MalformedInput"
    assert main(["construct", "--type", "V"]) == 2


def test_reports_are_deterministic(tmp_path):
    a = tmp_path / "a.json"
    b = tmp_path / "b.json"
    for p in (a, b):
        main(["bracket", "--n", "2", "--seed", "7", "--no-timestamp", "--out", str(p)])
    assert a.read_bytes() == b.read_bytes()
    rep = json.loads(a.read_text())
    assert rep["results"]["oracle_mismatches"] == 0
    assert set(rep) == {"command", "inputs_digest", "results", "residuals", "seed", "version"}


def test_timestamp_present_by_default(tmp_path):
    out = tmp_path / "t.json"
    main(["table", "--max-n", "1", "--out", str(out)])
    assert "timestamp" in json.loads(out.read_text())


def test_verify_f_random_exact(tmp_path):
    code, rep = run(tmp_path, "verify-f", "--n", "1", "--count", "2")
    assert code == 0
    assert rep["results"]["mode"] == "exact" and rep["results"]["all_homomorphic"]


def test_decompose(tmp_path):
    basis = write(tmp_path, "b.json", {"n": 2, "vectors": [[[1, 0, 0, 0], [0, 0, 0, 0]], [[0, 1, 0, 0], [0, 0, 0, 0]]]})
    code, rep = run(tmp_path, "decompose", "--basis", basis)
    assert code == 0
    assert rep["results"]["canonical"]["k"] == 1 and rep["results"]["canonical"]["m"] == 0


def test_table_reports_case_table_mismatch(tmp_path):
    code, rep = run(tmp_path, "table", "--max-n", "2")
    rows = {(r["m"], r["k"], r["n"]): r for r in rep["results"]["rows"]}
    assert len(rows) == 3 + 6
    assert rows[(0, 0, 1)]["solver_dim"] == 3 and rows[(0, 0, 1)]["case_table_dim"] == 0
    assert rows[(2, 0, 2)]["matches_case_table"]
    assert all(r["solver_dim"] == r["corrected_dim"] for r in rows.values())
    assert rep["results"]["all_match_case_table"] is False
