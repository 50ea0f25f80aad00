from __future__ import annotations

import json
from pathlib import Path

import pytest

from premodclass.characters import census, character_table, dixon_prime, group_info, rep_fusion_ring
from premodclass.fusion import FusionRing, ring_from_products, rings_isomorphic, validate
from premodclass.groups import catalog_groups, complete_orders, named_group

FIXTURES = Path(__file__).parent / "fixtures"


def ring(name: str) -> FusionRing:
    entry = json.loads((FIXTURES / "rings.json").read_text(encoding="utf-8"))[name]
    products = {(a, b): {int(c): m for c, m in out.items()} for a, b, out in entry["products"]}
    return ring_from_products(entry["rank"], entry["dual"], products)


@pytest.mark.parametrize("label", ["Z5", "S3", "D8", "Q8", "A4", "Z5:Z4", "Z7:Z3", "S4", "A5"])
def test_character_tables_are_orthogonal(label):
    G = named_group(label)
    t = character_table(G)
    assert t.row_orthogonality_violations() == []
    assert t.column_orthogonality_violations() == []
    assert sum(d * d for d in t.degrees) == G.order
    assert t.size == len(G.classes)


def test_trivial_group_has_a_single_character():
    t = character_table(named_group("1"))
    assert t.degrees == [1]
    assert t.value(0, 0) == 1
    assert dixon_prime(1, 1) == 5
    assert dixon_prime(20, 4) % 4 == 1


def test_degrees_of_known_groups():
    assert sorted(character_table(named_group("S4")).degrees) == [1, 1, 2, 3, 3]
    assert sorted(character_table(named_group("A5")).degrees) == [1, 3, 3, 4, 5]
    assert sorted(character_table(named_group("Z7:Z3")).degrees) == [1, 1, 1, 3, 3]


def test_a5_characters_are_irrational():
    t = character_table(named_group("A5"))
    values = [t.value(i, s) for i in range(t.size) for s in range(t.size)]
    assert any(not v.is_rational_integer() for v in values)
    assert all(v.is_real() for v in values)


@pytest.mark.parametrize("label,fixture", [("S3", "rep_s3"), ("D8", "rep_d8"), ("D14", "rep_d14"), ("S4", "rep_s4")])
def test_rep_rings_match_fixtures(label, fixture):
    F = rep_fusion_ring(named_group(label))
    assert validate(F) == []
    assert rings_isomorphic(F, ring(fixture)) is not None


def test_d8_and_q8_have_the_same_rep_ring():
    assert rings_isomorphic(rep_fusion_ring(named_group("D8")), rep_fusion_ring(named_group("Q8"))) is not None


def test_rep_ring_duality_for_z3():
    F = rep_fusion_ring(named_group("Z3"))
    assert sorted(F.dual) == [0, 1, 2]
    assert F.dual != [0, 1, 2]


@pytest.mark.parametrize(
    "k,expected",
    [
        (1, {"1"}),
        (2, {"Z2"}),
        (3, {"Z3", "S3"}),
        (4, {"Z4", "Z2xZ2", "D10", "A4"}),
        (5, {"Z5", "D8", "Q8", "D14", "Z5:Z4", "Z7:Z3", "S4", "A5"}),
    ],
)
def test_census_by_class_count(k, expected):
    found = census(catalog_groups(60), k, 60)
    assert {G.name for G in found} == expected
    assert [G.order for G in found] == sorted(G.order for G in found)


def test_census_respects_max_order():
    names = {G.name for G in census(catalog_groups(60), 5, 24)}
    assert "A5" not in names
    assert "S4" in names


def test_groups_with_at_most_five_classes_per_order():
    groups = catalog_groups(60)
    per_order = {}
    for k in range(1, 6):
        for G in census(groups, k, 60):
            per_order[G.order] = per_order.get(G.order, 0) + 1
    assert per_order == {1: 1, 2: 1, 3: 1, 4: 2, 5: 1, 6: 1, 8: 2, 10: 1, 12: 1, 14: 1, 20: 1, 21: 1, 24: 1, 60: 1}
    # orders 24 and 60 rest on the class-count theorem, the rest are certified by the catalog
    uncertified = set(per_order) - set(complete_orders(groups))
    assert uncertified == {24, 60}


def test_census_rejects_bad_k():
    with pytest.raises(ValueError):
        census(catalog_groups(10), 0, 10)


def test_group_info_for_s4():
    info = group_info(named_group("S4"))
    assert info.name == "S4"
    assert info.order == 24
    assert info.class_count == 5
    assert sorted(info.class_sizes) == [1, 3, 6, 6, 8]
    assert sorted(info.degrees) == [1, 1, 2, 3, 3]
    assert info.exponent == 12
    assert info.abelian is False
    assert info.to_compact()["order"] == 24
