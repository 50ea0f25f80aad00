from __future__ import annotations

import json

import pytest
from pydantic import ValidationError

from premodclass.fusion import DatumFormatError
from premodclass.ledger import (
    ExternalFact,
    ExternalFactLedger,
    UnknownFactError,
    bundled_ledger,
    load_ledger,
)

EXPECTED_KEYS = [
    "bn1-dimensions",
    "bn1-equivariant-fusion",
    "bn1-pointed-cocycles",
    "bnrw1-norm-bound",
    "bnrw2-modular-rank5",
    "bpr1-realization",
    "br1-class-count-census",
    "bruguieres-modularization",
    "deligne-symmetric",
    "ego-dim21",
    "eno-8.32",
    "galindo-communication",
    "grading-gn2-dgno1",
    "nr1-near-group-ring",
    "rank4-modular-list",
    "rank7-facts",
    "s1-near-group-braiding",
    "semion-klein-equivariantization",
]


def test_bundled_ledger_keys():
    ledger = bundled_ledger()
    assert ledger.keys() == EXPECTED_KEYS
    for f in ledger.facts:
        assert f.citation and f.statement


def test_get_and_resolve():
    ledger = bundled_ledger()
    assert ledger.get("deligne-symmetric").key == "deligne-symmetric"
    resolved = ledger.resolve(["rank7-facts", "bn1-dimensions", "rank7-facts"])
    assert [f.key for f in resolved] == ["bn1-dimensions", "rank7-facts"]
    with pytest.raises(UnknownFactError):
        ledger.get("no-such-fact")


def test_compact_form_lists_usage_sorted():
    f = ExternalFact(key="k1", citation="c", statement="s")
    assert f.to_compact() == {"citation": "c", "statement": "s"}
    assert f.to_compact(["b > x", "a"])["where_used"] == ["a", "b > x"]


def test_keys_must_be_lowercase_and_unique():
    with pytest.raises(ValidationError):
        ExternalFact(key="Bad Key", citation="c", statement="s")
    fact = ExternalFact(key="k", citation="c", statement="s")
    with pytest.raises(ValidationError):
        ExternalFactLedger(facts=(fact, fact))


def test_facts_are_sorted_by_key():
    ledger = ExternalFactLedger(
        facts=(
            ExternalFact(key="zeta", citation="c", statement="s"),
            ExternalFact(key="alpha", citation="c", statement="s"),
        )
    )
    assert ledger.keys() == ["alpha", "zeta"]


def test_load_ledger_reports_bad_entries(tmp_path):
    path = tmp_path / "facts.json"
    path.write_text(json.dumps({"version": 1, "facts": [{"key": "k", "citation": "c"}]}), encoding="utf-8")
    with pytest.raises(DatumFormatError) as e:
        load_ledger(path)
    assert e.value.where.startswith("facts/0")


def test_custom_ledger_directory(tmp_path):
    (tmp_path / "external_facts.json").write_text(
        json.dumps({"version": 1, "facts": [{"key": "only", "citation": "c", "statement": "s"}]}),
        encoding="utf-8",
    )
    assert bundled_ledger(tmp_path).keys() == ["only"]
