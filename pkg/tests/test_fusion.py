from __future__ import annotations

import json
from pathlib import Path

import numpy as np
import pytest

from premodclass.cyclotomic import golden_ratio
from premodclass.fusion import (
    DatumFormatError,
    DimensionVector,
    FusionRing,
    adjoin_simple,
    canonical_form,
    dimension_equation_violations,
    fp_dimensions,
    global_dimension,
    group_ring,
    invertible_objects,
    is_pointed,
    load_ring,
    relabel,
    restrict,
    ring_from_products,
    rings_isomorphic,
    subring_generated_by,
    universal_grading_components,
    validate,
)

FIXTURES = Path(__file__).parent / "fixtures"


def ring(name: str) -> FusionRing:
    entry = json.loads((FIXTURES / "rings.json").read_text(encoding="utf-8"))[name]
    products = {(a, b): {int(c): m for c, m in out.items()} for a, b, out in entry["products"]}
    return ring_from_products(entry["rank"], entry["dual"], products)


@pytest.mark.parametrize("name", ["rep_s3", "rep_d8", "rep_d14", "rep_s4", "psu2_8", "toric_code", "semion"])
def test_known_rings_pass_all_axioms(name):
    assert validate(ring(name)) == []


def test_group_ring_z2_is_valid():
    assert validate(group_ring(2)) == []


def test_adjoin_simple_rebuilds_dihedral_rings():
    klein = adjoin_simple(ring("toric_code"), [1, 1, 1, 1], 0)
    assert validate(klein) == []
    assert rings_isomorphic(klein, ring("rep_d8")) is not None
    s3 = adjoin_simple(group_ring(2), [1, 1], 1)
    assert validate(s3) == []
    assert rings_isomorphic(s3, ring("rep_s3")) is not None


def test_unit_violation_is_reported():
    T = group_ring(2).tensor()
    T[0, 1, 1] = 2
    bad = FusionRing.from_tensor(T, [0, 1])
    tags = {v.tag for v in validate(bad)}
    assert "unit" in tags


def test_rank_zero_and_bad_shapes_rejected():
    with pytest.raises(ValueError):
        FusionRing(rank=0, dual=[], N=[])
    with pytest.raises(ValueError):
        FusionRing(rank=2, dual=[0, 1], N=[[[1, 0]]])


def test_fp_dimensions_integral_and_golden():
    assert list(fp_dimensions(FusionRing(rank=1, dual=[0], N=[[[1]]]))) == [1]
    assert list(fp_dimensions(ring("rep_d14"))) == [1, 1, 2, 2, 2]
    phi = golden_ratio()
    assert list(fp_dimensions(ring("psu2_8"))) == [1, 1, 2 * phi, phi * phi, phi * phi]


def test_fp_dimensions_satisfy_dimension_equation_and_duality():
    for name in ("rep_s4", "psu2_8", "rep_d8"):
        F = ring(name)
        dims = fp_dimensions(F)
        assert dimension_equation_violations(F, dims) == []
        assert all(dims[a] == dims[F.dual[a]] for a in range(F.rank))


def test_global_dimension_examples():
    assert global_dimension(DimensionVector.of([1, 1, 2, 3, 3])) == 24
    assert global_dimension(DimensionVector.of([1])) == 1
    assert global_dimension(DimensionVector.of([1, 1, 2, 2, 2])) == 14


def test_subring_generation():
    d8 = ring("rep_d8")
    assert subring_generated_by(d8, 2) == [0, 1, 2, 3, 4]
    assert subring_generated_by(d8, 0) == [0]
    assert subring_generated_by(ring("rep_s3"), 1) == [0, 1]
    assert subring_generated_by(ring("rep_s4"), 2) == [0, 1, 2]


def test_restrict_to_subring():
    sub = restrict(ring("rep_s4"), [0, 1, 2])
    assert rings_isomorphic(sub, ring("rep_s3")) is not None
    with pytest.raises(ValueError):
        restrict(ring("rep_s4"), [0, 3])


def test_universal_grading_components():
    z4 = universal_grading_components(group_ring(4), DimensionVector.of([1, 1, 1, 1]))
    assert z4.components == [[0], [1], [2], [3]]
    assert z4.adjoint == [0]
    s3 = universal_grading_components(ring("rep_s3"))
    assert s3.components == [[0, 1, 2]]
    toric = universal_grading_components(ring("toric_code"), DimensionVector.of([1, 1, 1, 1]))
    assert toric.components == [[0], [1], [2], [3]]
    assert toric.totals == [1, 1, 1, 1]
    assert toric.is_equidimensional()


def test_grading_of_d8_ring_has_adjoint_as_unit_component():
    d8 = ring("rep_d8")
    dims = fp_dimensions(d8)
    grading = universal_grading_components(d8, dims)
    assert grading.components[0] == grading.adjoint
    assert sorted(x for comp in grading.components for x in comp) == list(range(5))
    assert grading.is_equidimensional()


def test_pointed_helpers():
    assert invertible_objects(ring("rep_d8")) == [0, 1, 3, 4]
    assert is_pointed(ring("toric_code"))
    assert not is_pointed(ring("rep_s3"))


def test_rings_isomorphic_examples():
    assert rings_isomorphic(group_ring(4), ring("toric_code")) is None
    d8 = ring("rep_d8")
    assert rings_isomorphic(d8, d8) == [0, 1, 2, 3, 4]
    shuffled = relabel(d8, [0, 3, 2, 1, 4])
    perm = rings_isomorphic(d8, shuffled)
    assert perm is not None
    assert np.array_equal(relabel(d8, perm).tensor(), shuffled.tensor())


def test_canonical_form_is_label_independent():
    d14 = ring("rep_d14")
    dims = DimensionVector.of([1, 1, 2, 2, 2])
    key, _ = canonical_form(d14, dims)
    other, _ = canonical_form(relabel(d14, [0, 1, 4, 2, 3]), dims)
    assert key == other


def test_load_ring_errors(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{"rank": 2,\n "dual": [0, 1]\n', encoding="utf-8")
    with pytest.raises(DatumFormatError) as exc:
        load_ring(bad)
    assert exc.value.line is not None

    missing = tmp_path / "missing.json"
    missing.write_text(json.dumps({"rank": 2, "dual": [0, 1]}), encoding="utf-8")
    with pytest.raises(DatumFormatError):
        load_ring(missing)

    good = tmp_path / "z3.json"
    good.write_text(json.dumps(group_ring(3).to_compact()), encoding="utf-8")
    assert validate(load_ring(good)) == []
