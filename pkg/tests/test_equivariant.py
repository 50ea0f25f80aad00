from __future__ import annotations

import pytest

from premodclass.cyclotomic import CyclotomicNumber, golden_ratio
from premodclass.equivariant import (
    EquivariantizationPlan,
    OrbitData,
    SchurFact,
    SchurLookupError,
    base_dimension_options,
    equivariantization_rank,
    involution_orbit_count,
    schur_labels,
    schur_lookup,
    sign_action_plan,
    single_simple_orbit_types,
    trivial_action_plan,
)


def _ints(dims):
    return [int(d.as_fraction()) for d in dims]


def test_schur_lookup_follows_aliases():
    fact = schur_lookup("V4")
    assert fact.group == "Z2xZ2"
    assert fact.projective_degrees(1) == [2]
    assert schur_lookup("A4").projective_degrees(1) == [2, 2, 2]
    assert "S3" in schur_labels()


def test_schur_lookup_unknown_and_bad_cocycle():
    with pytest.raises(SchurLookupError):
        schur_lookup("Q8")
    with pytest.raises(ValueError):
        schur_lookup("S3").projective_degrees(1)


def test_schur_fact_checks_degree_sums():
    with pytest.raises(ValueError):
        SchurFact(group="Z2", order=2, multiplier="1", degrees=[[1]])


def test_z3_action_with_two_free_orbits():
    plan = EquivariantizationPlan(
        group_label="Z3",
        group_order=3,
        orbits=[OrbitData(orbit_size=1, stabilizer="Z3"), OrbitData(orbit_size=3, stabilizer="1", count=2)],
    )
    res = equivariantization_rank(plan)
    assert res.rank == 5
    assert _ints(res.dims) == [1, 1, 1, 3, 3]
    assert res.global_dimension() == 21
    assert res.non_integral == []


def test_s3_fixed_point_case():
    plan = EquivariantizationPlan(
        group_label="S3",
        group_order=6,
        orbits=[OrbitData(orbit_size=1, stabilizer="S3"), OrbitData(orbit_size=3, stabilizer="Z2")],
    )
    res = equivariantization_rank(plan)
    assert _ints(res.dims) == [1, 1, 2, 3, 3]
    assert plan.base_global_dimension() == 4


def test_orbit_that_does_not_fit_the_group_is_rejected():
    plan = EquivariantizationPlan(
        group_label="S3",
        group_order=6,
        orbits=[OrbitData(orbit_size=1, stabilizer="S3"), OrbitData(orbit_size=2, stabilizer="Z2")],
    )
    assert plan.violations()
    with pytest.raises(ValueError):
        equivariantization_rank(plan)


def test_irrational_base_dimensions_scale():
    phi = golden_ratio()
    plan = EquivariantizationPlan(
        group_label="Z2",
        group_order=2,
        orbits=[OrbitData(orbit_size=1, stabilizer="Z2"), OrbitData(orbit_size=2, stabilizer="1", base_dim=phi)],
    )
    res = equivariantization_rank(plan)
    assert res.dims == [CyclotomicNumber.one(), CyclotomicNumber.one(), 2 * phi]


def test_involution_orbits():
    assert involution_orbit_count(1) == 1
    assert involution_orbit_count(13) == 7
    with pytest.raises(ValueError):
        involution_orbit_count(4)


def test_s3_actions_on_rank_13_pointed_base_give_wrong_ranks():
    assert equivariantization_rank(trivial_action_plan("S3", 13)).rank == 39
    assert equivariantization_rank(sign_action_plan(13)).rank == 21


def test_single_simple_orbit_types_for_klein_group():
    types = single_simple_orbit_types("Z2xZ2")
    assert {(t.stabilizer, t.cocycle, t.orbit_size, t.degree) for t in types} == {
        ("1", 0, 4, 1),
        ("Z2xZ2", 1, 1, 2),
    }
    assert sorted(t.factor for t in types) == [2, 4]


def test_base_dimension_options_for_a4():
    options = base_dimension_options("A4", CyclotomicNumber.rational(6))
    bases = sorted(str(b) for _, b in options)
    assert bases == ["1", "1/2"]
    integral = [(t.stabilizer, b) for t, b in options if b.is_algebraic_integer()]
    assert integral == [("Z2xZ2", CyclotomicNumber.one())]


def test_unknown_group_for_orbit_types():
    with pytest.raises(SchurLookupError):
        single_simple_orbit_types("Q8")
