from __future__ import annotations

import json

import pytest

from premodclass.characters import character_table, rep_fusion_ring
from premodclass.classify import (
    assemble_report,
    classify_rank5,
    derive_pair_twists,
    divisibility_check,
    rank4_modular_dimensions,
    rank4_twist_candidates,
    z2_moved_dimensions,
)
from premodclass.config import BUNDLED_DATA_DIR, PremodConfig
from premodclass.cyclotomic import CyclotomicNumber, RootOfUnity, golden_ratio, sqrt_int
from premodclass.fusion import DimensionVector
from premodclass.groups import named_group
from premodclass.intpoly import IntPolynomial
from premodclass.ledger import UnknownFactError, bundled_ledger
from premodclass.schema import CaseNode, Witness
from premodclass.utils import canonical_json


@pytest.fixture(scope="module")
def report():
    return classify_rank5(PremodConfig())


@pytest.fixture(scope="module")
def golden():
    return json.loads((BUNDLED_DATA_DIR / "golden_summary.json").read_text(encoding="utf-8"))


def leaf(report, path):
    found = dict(report.leaves())
    assert path in found, sorted(found)
    return found[path]


def leaves_under(report, prefix):
    return [(p, n) for p, n in report.leaves() if p.startswith(prefix)]


# -----------------------------
# Arithmetic helpers
# -----------------------------

def test_divisibility_check():
    assert divisibility_check(3, 9)
    assert divisibility_check(2, CyclotomicNumber.rational(20))
    assert not divisibility_check(6, 8)
    assert not divisibility_check(12, 20)
    with pytest.raises(ValueError):
        divisibility_check(golden_ratio(), 5)
    with pytest.raises(ValueError):
        divisibility_check(0, 5)


def test_rank4_twist_candidates_for_order_four():
    cands = rank4_twist_candidates(4)
    assert sorted({c.theta.n for c in cands}) == [4, 5]
    for c in cands:
        if c.theta.n == 4:
            assert (c.m, c.d) == (0, 2)
        else:
            assert c.m == 2
            assert c.d == 1 + sqrt_int(5)


def test_rank4_twist_candidates_for_d10_and_a4():
    d10 = rank4_twist_candidates(10)
    assert {c.theta.n for c in d10} == {4}
    assert all(c.d * c.d == 10 and c.m == 0 for c in d10)

    a4 = {c.theta.n: c for c in rank4_twist_candidates(12)}
    assert set(a4) == {2, 4}
    assert (a4[2].m, a4[2].d) == (4, 6)
    assert a4[4].d == 2 * sqrt_int(3)


def test_z3_twist_polynomial_has_no_roots_of_unity():
    H = named_group("F21")
    table = character_table(H)
    ring = rep_fusion_ring(H, table)
    dims = DimensionVector.of(table.degrees)
    center = [i for i, d in enumerate(table.degrees) if d == 1]
    outside = [i for i, d in enumerate(table.degrees) if d != 1]
    pt = derive_pair_twists(ring, dims, center, (outside[0], outside[1]))
    assert pt.reason
    assert pt.polynomial.primitive() == IntPolynomial((1, 5, 1))
    assert pt.solutions == []


def test_z2_moved_dimensions():
    named = dict(rank4_modular_dimensions())
    assert list(named) == ["pointed", "Fib x Fib", "Fib x Sem", "(A1,7)_1/2"]
    assert [list(dv) for dv in z2_moved_dimensions(named["pointed"])] == [[1, 1, 2, 1, 1]]
    phi = golden_ratio()
    # the two φ-simples are swapped, the 1-dimensional one is fixed
    (fib_sem,) = z2_moved_dimensions(named["Fib x Sem"])
    assert list(fib_sem) == [1, 1, 2 * phi, 1, 1]
    (fib_fib,) = z2_moved_dimensions(named["Fib x Fib"])
    assert list(fib_fib) == [1, 1, 2 * phi, phi * phi, phi * phi]
    assert z2_moved_dimensions(named["(A1,7)_1/2"]) == []


# -----------------------------
# The case tree
# -----------------------------

def test_summary_matches_golden(report, golden):
    s = report.summary
    assert s.names("symmetric") == golden["symmetric"]
    assert sorted(s.names("properly_premodular")) == golden["properly_premodular"]
    assert sorted(s.names("modular")) == golden["modular"]
    assert s.counts["symmetric"] == 8
    assert s.counts["properly_premodular"] == 5
    assert s.counts["modular"] == 4


def test_every_leaf_is_settled_honestly(report):
    for path, node in report.leaves():
        assert node.outcome in ("REALIZED", "ELIMINATED", "EXTERNAL_FACT"), path
        if node.outcome == "ELIMINATED":
            assert node.witness.kind != "check-failed", path
        if node.outcome == "REALIZED":
            assert all(c.ok for c in node.checks), path
    assert "open" not in report.summary.to_compact()


def test_every_ledger_fact_is_used_and_every_citation_is_ledgered(report):
    assert report.external_facts_used == bundled_ledger().keys()
    for key, entry in report.external_facts.items():
        assert entry["where_used"], key


def test_symmetric_branch_realizes_all_five_class_groups(report):
    found = leaves_under(report, "symmetric > ")
    assert len(found) == 8
    assert all(n.outcome == "REALIZED" and n.category_class == "symmetric" for _, n in found)
    a5 = leaf(report, "symmetric > Rep(A5)")
    assert sorted(int(d.as_fraction()) for d in a5.datum.dims) == [1, 3, 3, 4, 5]


def test_symmetric_census_records_complete_orders(report):
    checks = {c.name: c.value for c in report.branches[0].checks}
    assert checks["catalog_max_order"] == 60
    complete = checks["catalog_complete_orders"]
    assert set(range(1, 16)) <= set(complete)
    assert 24 not in complete and 60 not in complete


def test_rank4_center_outcomes(report):
    base = "center rank 4 > "
    z4_4 = leaf(report, base + "center=Rep(Z4) > n=4")
    assert z4_4.outcome == "ELIMINATED"
    assert z4_4.witness.kind == "non-integral"
    assert z4_4.witness.values == ("1/2",)
    assert leaf(report, base + "center=Rep(Z4) > n=5").outcome == "ELIMINATED"
    klein5 = leaf(report, base + "center=Rep(Z2xZ2) > n=5")
    assert klein5.outcome == "EXTERNAL_FACT"
    assert klein5.fact == "galindo-communication"
    assert leaf(report, base + "center=Rep(D10) > n=4").witness.kind == "non-integral"
    assert leaf(report, base + "center=Rep(A4) > n=4").outcome == "ELIMINATED"
    a4_2 = leaf(report, base + "center=Rep(A4) > n=2")
    assert a4_2.outcome == "ELIMINATED"
    assert a4_2.witness.kind == "cocycle-product"
    assert a4_2.witness.values == ("Z2xZ2", "3")
    assert "bn1-pointed-cocycles" in a4_2.citations


def test_rank4_klein_center_with_a_semion_base_is_realized(report):
    klein4 = leaf(report, "center rank 4 > center=Rep(Z2xZ2) > n=4")
    assert klein4.outcome == "REALIZED"
    assert klein4.category_class == "properly_premodular"
    assert "semion-klein-equivariantization" in klein4.citations
    d = klein4.datum
    assert d.name == "Sem^Z2xZ2"
    assert [int(x.as_fraction()) for x in d.dims] == [1, 1, 1, 1, 2]
    assert d.twists == (RootOfUnity.one(),) * 4 + (RootOfUnity(1, 4),)
    assert int(d.S[4][4].as_fraction()) == -4
    center = next(c for c in klein4.checks if c.name == "center")
    assert center.value["indices"] == [0, 1, 2, 3]


def test_rank3_center_outcomes(report, golden):
    z3 = leaf(report, "center rank 3 > center=Rep(Z3)")
    assert z3.outcome == "ELIMINATED"
    assert z3.witness.kind == "no-root-of-unity"

    moved = leaf(report, "center rank 3 > center=Rep(S3) > case y!=z")
    assert moved.witness.kind == "rank-mismatch"
    ranks = golden["s3_action_ranks"]
    assert moved.witness.values == (str(ranks["sign"]), str(ranks["trivial"]))

    fixed = leaves_under(report, "center rank 3 > center=Rep(S3) > case y=z > ")
    realized = [n for _, n in fixed if n.outcome == "REALIZED"]
    assert [n.datum.name for n in realized] == ["Rep(S4)"]
    assert realized[0].category_class == "properly_premodular"
    minus = RootOfUnity(1, 2)
    assert realized[0].datum.twists == (RootOfUnity.one(),) * 3 + (minus, minus)
    for path, node in fixed:
        if node.outcome == "EXTERNAL_FACT":
            assert node.fact == "bn1-equivariant-fusion", path
        else:
            assert node.outcome in ("REALIZED", "ELIMINATED"), path


def test_rank3_fixed_case_prunes_one_row(report):
    node = next(n for p, n in report.branches[2].walk() if p.endswith("case y=z"))
    checks = {c.name: c.value for c in node.checks}
    assert len(checks["x3_square_rows"]) == 4
    assert len(checks["rows_within_bound"]) == 3
    assert checks["norm_bound"] == 3


def test_rank2_center_outcomes(report, golden):
    base = "center rank 2 > center=Rep(Z2) > "
    septic = leaf(report, base + "case X1*X3=X4 > base (A1,7)_1/2")
    assert septic.outcome == "ELIMINATED"
    assert septic.witness.kind == "empty-diophantine"
    assert leaf(report, base + "case X1*X3=X4 > base Fib x Sem").fact == "s1-near-group-braiding"

    realized = {n.datum.name: (p, n) for p, n in leaves_under(report, base) if n.outcome == "REALIZED"}
    assert set(realized) == {"Rep(D8)", "PSU(2)_8", "Rep(D14)"}
    assert realized["Rep(D14)"][0].startswith(base + "case X1 fixes all > ")

    _, d8 = realized["Rep(D8)"]
    theta = next(c for c in d8.checks if c.name == "theta_condition")
    assert theta.ok
    assert theta.value["polynomial"]["degree"] == golden["theta_polynomial_degree"]
    assert theta.value["solution_orders"] == golden["theta_solution_orders"]


def test_modular_branch(report):
    found = leaves_under(report, "modular > ")
    assert len(found) == 4
    for _, n in found:
        assert n.outcome == "EXTERNAL_FACT"
        assert n.fact == "bnrw2-modular-rank5"
        assert n.category_class == "modular"


# -----------------------------
# Report assembly
# -----------------------------

def test_report_is_deterministic(report):
    again = classify_rank5(PremodConfig())
    assert again.fingerprint == report.fingerprint
    assert canonical_json(again.to_compact()) == canonical_json(report.to_compact())


def test_compact_report_shape(report):
    out = report.to_compact()
    assert set(out) == {"branches", "summary", "external_facts_used", "external_facts", "fingerprint"}
    assert [b["label"] for b in out["branches"]] == [
        "symmetric",
        "center rank 4",
        "center rank 3",
        "center rank 2",
        "modular",
    ]
    assert len(out["fingerprint"]) == 64


def test_unledgered_citation_is_rejected():
    node = CaseNode(
        label="x",
        outcome="ELIMINATED",
        witness=Witness(kind="divisibility", detail="3 does not divide 4"),
        citations=["not-in-ledger"],
    )
    with pytest.raises(UnknownFactError):
        assemble_report([node], bundled_ledger())
