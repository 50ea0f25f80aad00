from __future__ import annotations

import json
from pathlib import Path

import pytest

from premodclass.classify import UnsettledCaseError
from premodclass.cli import main
from premodclass.config import BUNDLED_DATA_DIR
from premodclass.cyclotomic import CyclotomicNumber
from premodclass.fusion import FusionRing, ring_from_products, rings_isomorphic
from premodclass.premodular import datum_from_compact

FIXTURES = Path(__file__).parent / "fixtures"


def _write(path, data):
    path.write_text(json.dumps(data), encoding="utf-8")
    return str(path)


SEMION = {
    "name": "semion",
    "rank": 2,
    "dual": [0, 1],
    "N": [[[1, 0], [0, 1]], [[0, 1], [1, 0]]],
    "dims": [1, 1],
    "T": [{"k": 0, "n": 1}, {"k": 1, "n": 4}],
}


def test_validate_clean_datum(tmp_path, capsys):
    code = main(["validate", _write(tmp_path / "semion.json", SEMION)])
    out = capsys.readouterr().out
    assert code == 0
    assert "datum: semion" in out
    assert "ok: no violations" in out


def test_validate_json_output(tmp_path, capsys):
    code = main(["validate", _write(tmp_path / "semion.json", SEMION), "--format", "json"])
    data = json.loads(capsys.readouterr().out)
    assert code == 0
    assert data["class"] == "modular"
    assert data["S"] == "synthesized"
    assert data["violations"] == []


def test_validate_reports_violations(tmp_path, capsys):
    bad = dict(SEMION)
    bad["S"] = [[1, 1], [1, 1]]
    code = main(["validate", _write(tmp_path / "bad.json", bad)])
    out = capsys.readouterr().out
    assert code == 1
    assert "balancing" in out


def test_validate_theta_index_out_of_range(tmp_path, capsys):
    code = main(["validate", _write(tmp_path / "semion.json", SEMION), "--theta-index", "7"])
    assert code == 2
    assert "theta index 7" in capsys.readouterr().err


def test_validate_malformed_file(tmp_path, capsys):
    path = tmp_path / "broken.json"
    path.write_text("{not json", encoding="utf-8")
    assert main(["validate", str(path)]) == 2
    assert "error: malformed JSON" in capsys.readouterr().err


def test_group_info(capsys):
    assert main(["group-info", "F21"]) == 0
    out = capsys.readouterr().out
    assert "group: Z7:Z3" in out
    assert "order: 21" in out

    assert main(["group-info", "S4", "--format", "json"]) == 0
    assert json.loads(capsys.readouterr().out)["class_count"] == 5


def test_group_info_unknown_label(capsys):
    assert main(["group-info", "M11"]) == 2
    assert "unknown label M11" in capsys.readouterr().err


def test_census(capsys):
    assert main(["census", "4", "12"]) == 0
    assert capsys.readouterr().out.split() == ["Z2xZ2", "Z4", "D10", "A4"]
    assert main(["census", "3", "60", "--format", "json"]) == 0
    assert json.loads(capsys.readouterr().out)["groups"] == ["Z3", "S3"]


def test_solve(capsys):
    assert main(["solve", "--rank", "2", "--dims", "1,phi"]) == 0
    out = capsys.readouterr().out
    assert "X1 x X1 = X0 + X1" in out
    assert "1 ring(s)" in out


def test_solve_with_constraint_json(capsys):
    code = main(["solve", "--rank", "5", "--dims", "1,1,2,3,3", "--constraint", "1,3,4=1", "--dual", "0,1,2,3,4", "--format", "json"])
    data = json.loads(capsys.readouterr().out)
    assert code == 0
    assert data["rings"]
    assert all(r["N"][1][3][4] == 1 for r in data["rings"])


def test_solve_without_solutions(capsys):
    assert main(["solve", "--rank", "2", "--dims", "1,2"]) == 1
    assert "0 ring(s)" in capsys.readouterr().out


def test_solve_argument_errors(capsys):
    assert main(["solve", "--rank", "3", "--dims", "1,1"]) == 2
    assert main(["solve", "--rank", "2", "--dims", "1,1", "--constraint", "0,1,5=1"]) == 2
    with pytest.raises(SystemExit):
        main(["solve", "--rank", "2", "--dims", "1,1", "--constraint", "1,1"])
    with pytest.raises(SystemExit):
        main(["solve", "--rank", "2", "--dims", "1,pi"])


def test_node_budget_override(capsys):
    code = main(["--node-budget", "3", "solve", "--rank", "5", "--dims", "1,1,2,3,3"])
    assert code == 2
    assert "node budget of 3" in capsys.readouterr().err


def test_bad_environment_value(monkeypatch, capsys):
    monkeypatch.setenv("PREMOD_NODE_BUDGET", "lots")
    assert main(["group-info", "S3"]) == 2
    assert "PREMOD_NODE_BUDGET" in capsys.readouterr().err


def test_unsettled_case_is_an_operational_error(monkeypatch, capsys):
    def unsettled(cfg):
        raise UnsettledCaseError("center rank 3: no argument for center Rep(Z9)")

    monkeypatch.setattr("premodclass.cli.classify_rank5", unsettled)
    assert main(["classify"]) == 2
    assert "no argument for center Rep(Z9)" in capsys.readouterr().err


def test_classify_writes_canonical_json(tmp_path, capsys):
    out = tmp_path / "report.json"
    code = main(["classify", "--out", str(out)])
    text = capsys.readouterr().out
    assert code == 0
    assert text.startswith("PREMODCLASS RANK-5 REPORT")
    raw = out.read_text(encoding="ascii")
    assert raw.endswith("\n") and not raw.endswith("\n\n")
    data = json.loads(raw)
    assert len(data["summary"]["symmetric"]) == 8
    assert len(data["summary"]["properly_premodular"]) == 5
    assert len(data["summary"]["modular"]) == 4
    assert data["fingerprint"] in text


def _bundled_entry(name):
    entries = json.loads((BUNDLED_DATA_DIR / "premodular_rank5.json").read_text(encoding="utf-8"))
    return next(e for e in entries if e["name"] == name)


def test_validate_bundled_rep_s4(tmp_path, capsys):
    code = main(["validate", _write(tmp_path / "s4.json", _bundled_entry("Rep(S4)")), "--format", "json"])
    data = json.loads(capsys.readouterr().out)
    assert code == 0
    assert data["class"] == "properly_premodular"
    assert data["center"]["indices"] == [0, 1, 2]
    assert data["violations"] == []


def test_validate_flags_perturbed_s_entry(tmp_path, capsys):
    compact = datum_from_compact(_bundled_entry("Rep(S4)")).to_compact()
    compact["S"][3][3] = CyclotomicNumber.rational(7).to_compact()
    code = main(["validate", _write(tmp_path / "s4_bad.json", compact), "--format", "json"])
    data = json.loads(capsys.readouterr().out)
    assert code == 1
    assert {"tag": "balancing", "indices": [3, 3]} in [
        {"tag": v["tag"], "indices": v["indices"]} for v in data["violations"]
    ]


def test_group_info_q8(capsys):
    assert main(["group-info", "Q8", "--format", "json"]) == 0
    info = json.loads(capsys.readouterr().out)
    assert info["order"] == 8
    assert info["class_count"] == 5
    assert sorted(info["degrees"]) == [1, 1, 1, 1, 2]


def test_census_class_count_five(capsys):
    assert main(["census", "5", "60"]) == 0
    assert set(capsys.readouterr().out.split()) == {"Z5", "D8", "Q8", "D14", "Z5:Z4", "Z7:Z3", "S4", "A5"}


def test_solve_finds_rep_d8(capsys):
    assert main(["solve", "--rank", "5", "--dims", "1,1,2,1,1", "--format", "json"]) == 0
    rings = [FusionRing.from_compact(r) for r in json.loads(capsys.readouterr().out)["rings"]]
    entry = json.loads((FIXTURES / "rings.json").read_text(encoding="utf-8"))["rep_d8"]
    products = {(a, b): {int(c): m for c, m in out.items()} for a, b, out in entry["products"]}
    d8 = ring_from_products(entry["rank"], entry["dual"], products)
    assert any(rings_isomorphic(F, d8) is not None for F in rings)
