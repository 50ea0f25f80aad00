from __future__ import annotations

import pytest
from pydantic import ValidationError

from premodclass.characters import group_info
from premodclass.classify import assemble_report
from premodclass.cyclotomic import RootOfUnity
from premodclass.fusion import Violation, ring_from_products
from premodclass.groups import named_group
from premodclass.ledger import bundled_ledger
from premodclass.premodular import PremodularDatum, muger_center
from premodclass.render import leaf_lines, node_evidence, render_group_info, render_report, render_ring, render_validation
from premodclass.schema import CaseNode, Witness


def semion() -> PremodularDatum:
    ring = ring_from_products(2, [0, 1], {(1, 1): {0: 1}})
    return PremodularDatum.from_parts(ring, [1, 1], [RootOfUnity.one(), RootOfUnity(1, 4)], name="semion")


def small_tree():
    return [
        CaseNode(
            label="center rank 3",
            children=[
                CaseNode(
                    label="center=Rep(Z3)",
                    outcome="ELIMINATED",
                    witness=Witness(kind="no-root-of-unity", detail="theta3 must be a root of x**2 + 5*x + 1"),
                    citations=["rank7-facts"],
                ),
                CaseNode(
                    label="n=2",
                    outcome="ELIMINATED",
                    witness=Witness(kind="cocycle-product", detail="orbit of 3 invertibles", values=("Z2xZ2", "3")),
                ),
            ],
        ),
        CaseNode(
            label="modular",
            children=[
                CaseNode(
                    label="semion",
                    outcome="EXTERNAL_FACT",
                    fact="bnrw2-modular-rank5",
                    datum=semion(),
                    category_class="modular",
                ),
            ],
        ),
    ]


def test_render_report_sections():
    report = assemble_report(small_tree(), bundled_ledger())
    txt = render_report(report)

    assert txt.startswith("PREMODCLASS RANK-5 REPORT\n")
    assert txt.endswith("\n")
    assert "Summary:" in txt
    assert "- symmetric (0): -" in txt
    assert "- modular (1): semion" in txt
    assert "- leaves: REALIZED=0, ELIMINATED=2, EXTERNAL_FACT=1" in txt
    assert "Branches:" in txt
    assert "center rank 3 > center=Rep(Z3) :: ELIMINATED :: no-root-of-unity: theta3 must be a root" in txt
    assert "center rank 3 > n=2 :: ELIMINATED :: cocycle-product: orbit of 3 invertibles" in txt
    assert "modular > semion :: EXTERNAL_FACT :: [bnrw2-modular-rank5] modular: semion d=(1,1)" in txt
    assert "External facts:" in txt
    assert "- rank7-facts: " in txt
    assert f"Fingerprint: {report.fingerprint}" in txt


def test_leaf_lines_follow_tree_order():
    lines = leaf_lines(small_tree())
    assert [line.split(" :: ")[0] for line in lines] == [
        "center rank 3 > center=Rep(Z3)",
        "center rank 3 > n=2",
        "modular > semion",
    ]


def test_evidence_is_clipped():
    node = CaseNode(label="x", outcome="ELIMINATED", witness=Witness(kind="divisibility", detail="y" * 400))
    ev = node_evidence(node)
    assert ev.startswith("divisibility: ")
    assert ev.endswith("...")
    assert len(ev) <= len("divisibility: ") + 160


def test_leaves_must_be_settled():
    with pytest.raises(ValidationError):
        CaseNode(label="x", outcome="OPEN")
    with pytest.raises(ValidationError):
        CaseNode(label="x")


def test_render_validation():
    d = semion()
    ok = render_validation(d, [], muger_center(d))
    assert "datum: semion (rank 2, S synthesized)" in ok
    assert "center: (0) tannakian=true" in ok
    assert "ok: no violations" in ok

    bad = render_validation(d, [Violation(tag="balancing", indices=(1, 1), detail="lhs=1, rhs=-1")], muger_center(d))
    assert "balancing (1,1): lhs=1, rhs=-1" in bad
    assert "ok:" not in bad


def test_render_group_info_and_ring():
    txt = render_group_info(group_info(named_group("S3")))
    assert "group: S3" in txt
    assert "order: 6" in txt
    assert "classes: 3" in txt
    assert "abelian: false" in txt

    ring = ring_from_products(3, [0, 1, 2], {(1, 1): {0: 1}, (1, 2): {2: 1}, (2, 2): {0: 1, 1: 1, 2: 1}})
    out = render_ring(ring)
    assert out.splitlines()[0] == "rank 3 dual=(0,1,2)"
    assert "  X2 x X2 = X0 + X1 + X2" in out
    assert "  X1 x X1 = X0" in out
