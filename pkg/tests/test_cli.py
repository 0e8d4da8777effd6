import json
from pathlib import Path

import pytest

from ck_algebra import cli
from ck_algebra.ck_groups import PMatrix
from ck_algebra.relcat import LinearRelation, relation_to_json

ROOT = Path(__file__).resolve().parents[1]


def invoke(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def identity_relation(tmp_path):
    path = tmp_path / "id.json"
    path.write_text(json.dumps(relation_to_json(LinearRelation.identity(2))))
    return str(path)


@pytest.mark.parametrize("case", cli.golden_cases(), ids=lambda c: c.name)
def test_golden_reports_are_byte_identical(case):
    assert cli.render_golden(case) == cli.read_golden(case.name)


@pytest.mark.parametrize("name", cli.SCHEMAS)
def test_shipped_schemas_match_docs(name):
    docs = json.loads((ROOT / "docs" / "schemas" / f"{name}.schema.json").read_text(encoding="utf-8"))
    assert docs == cli.load_schema(name)


def test_contract_report_shape_and_schema(capsys):
    code, out, _ = invoke(capsys, "contract", "--kind", "so", "--n", "5", "--iota", "2", "--json")
    assert code == 0
    rep = json.loads(out)
    assert cli.schema_errors(rep, "report") == []
    assert rep["data"]["decomposition"]["formula"] == "T6 ∔ (H1 ⊕ so(3;j3,j4))"
    assert {s["name"] for s in rep["sections"]} >= {"gamma table", "decomposition", "checks"}


def test_ordered_contraction(capsys):
    code, out, _ = invoke(capsys, "contract", "--kind", "so", "--n", "5", "--iota", "2,4",
                          "--order", "4,2", "--json")
    assert code == 0
    assert json.loads(out)["data"]["ordered"]["relation"] == "T8 = T4 ∔ T4~"


def test_generators_validate_as_pmatrices(capsys):
    code, out, _ = invoke(capsys, "generators", "--kind", "sp", "--n", "2", "--j", "1,iota", "--json")
    assert code == 0
    gens = json.loads(out)["generators"]
    assert len(gens) == 10
    for g in gens:
        assert cli.schema_errors(g["matrix"], "pmatrix") == []
        PMatrix.from_json(g["matrix"])


def test_check_orth_exit_codes(capsys, tmp_path):
    good = tmp_path / "p.json"
    good.write_text(json.dumps(PMatrix.from_rows([[0, 1], [1, 0]], 1).to_json()))
    bad = tmp_path / "q.json"
    bad.write_text(json.dumps(PMatrix.from_rows([[1, 1], [0, 1]], 1).to_json()))
    assert invoke(capsys, "check-orth", "--matrix", str(good))[0] == 0
    assert invoke(capsys, "check-orth", "--matrix", str(bad))[0] == 1


def test_verify_cw_with_dynkin(capsys):
    code, out, _ = invoke(capsys, "verify-cw", "--kind", "sp", "--n", "2", "--j", "iota,1",
                          "--emit-dynkin", "--json")
    assert code == 0
    data = json.loads(out)["data"]
    assert data["passed"] and data["pairs_checked"] == 45
    assert data["dynkin"]["series"] == "C"


def test_relcat_compose(capsys, identity_relation):
    code, out, _ = invoke(capsys, "relcat", "compose", "--cat", "GA", "--p", identity_relation,
                          "--q", identity_relation)
    assert code == 0
    rel = json.loads(out)
    assert cli.schema_errors(rel, "linear_relation") == []
    assert rel == relation_to_json(LinearRelation.identity(2))


def test_spin_of_identity(capsys, identity_relation):
    code, out, _ = invoke(capsys, "spin", "--p", identity_relation, "--json")
    assert code == 0
    assert json.loads(out)["matrix"] == [["1", "0"], ["0", "1"]]


def test_rep_lower(capsys):
    code, out, _ = invoke(capsys, "rep", "lower", "--family", "A", "--j", "2", "--from", "3", "--to", "2",
                          "--json")
    assert code == 0
    data = json.loads(out)["data"]
    assert (data["dim_from"], data["dim_lowered"], data["branch"]) == (6, 3, "maximal")


@pytest.mark.parametrize("argv", [
    ["contract", "--kind", "so", "--n", "5", "--iota", "3"],
    ["verify-cw", "--kind", "so", "--n", "5", "--j", "1,iota"],
    ["contract", "--kind", "so", "--n", "5", "--iota", "2", "--order", "4"],
    ["rep", "lower", "--j", "1", "--from", "1", "--to", "2"],
])
def test_usage_errors_exit_2(capsys, argv):
    code, out, err = invoke(capsys, *argv)
    assert code == 2
    assert out == "" and err.startswith("ck-algebra: error:")


def test_unknown_verb_exits_2(capsys):
    with pytest.raises(SystemExit) as exc:
        cli.main(["bogus"])
    assert exc.value.code == 2


def test_max_dim_cap(capsys, monkeypatch, identity_relation):
    monkeypatch.setenv("CK_ALGEBRA_MAX_DIM", "1024")
    code, _, err = invoke(capsys, "--max-dim", "1", "spin", "--p", identity_relation)
    assert code == 2 and "cap" in err


def test_selftest_json_and_fault(capsys):
    code, out, _ = invoke(capsys, "selftest", "--only", "4,10", "--quick", "--json")
    assert code == 0
    rep = json.loads(out)
    assert cli.schema_errors(rep, "selftest") == []
    assert [c["number"] for c in rep["data"]["criteria"]] == [4, 10]
    code, out, _ = invoke(capsys, "selftest", "--only", "1", "--quick", "--inject-fault")
    assert code == 1
    assert "expected" in out
