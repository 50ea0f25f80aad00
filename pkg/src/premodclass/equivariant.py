from __future__ import annotations

import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, model_validator

from .cyclotomic import CyclotomicNumber
from .groups import ALIASES, named_group

log = logging.getLogger(__name__)


class SchurLookupError(KeyError):
    pass


# -----------------------------
# Projective representation facts
# -----------------------------

class SchurFact(BaseModel):
    """
    Curated Schur multiplier entry: for each cohomology class (index 0 is the
    trivial one) the degrees of the simple projective representations.
    """

    model_config = ConfigDict(extra="forbid", frozen=True)

    group: str
    order: int = Field(ge=1)
    multiplier: str
    degrees: List[List[int]]

    @model_validator(mode="after")
    def _check_degrees(self) -> SchurFact:
        for cls_degrees in self.degrees:
            if sum(d * d for d in cls_degrees) != self.order:
                raise ValueError(f"{self.group}: squared degrees must sum to {self.order}")
        return self

    def projective_degrees(self, cocycle: int = 0) -> List[int]:
        if not 0 <= cocycle < len(self.degrees):
            raise ValueError(f"{self.group} has {len(self.degrees)} cohomology classes, got {cocycle}")
        return list(self.degrees[cocycle])


_SCHUR_TABLE: Dict[str, SchurFact] = {
    f.group: f
    for f in (
        SchurFact(group="1", order=1, multiplier="1", degrees=[[1]]),
        SchurFact(group="Z2", order=2, multiplier="1", degrees=[[1, 1]]),
        SchurFact(group="Z3", order=3, multiplier="1", degrees=[[1, 1, 1]]),
        SchurFact(group="Z4", order=4, multiplier="1", degrees=[[1, 1, 1, 1]]),
        SchurFact(group="Z2xZ2", order=4, multiplier="Z2", degrees=[[1, 1, 1, 1], [2]]),
        SchurFact(group="Z5", order=5, multiplier="1", degrees=[[1, 1, 1, 1, 1]]),
        SchurFact(group="S3", order=6, multiplier="1", degrees=[[1, 1, 2]]),
        SchurFact(group="D10", order=10, multiplier="1", degrees=[[1, 1, 2, 2]]),
        SchurFact(group="A4", order=12, multiplier="Z2", degrees=[[1, 1, 1, 3], [2, 2, 2]]),
    )
}

# Subgroups up to isomorphism type.
SUBGROUP_TYPES: Dict[str, List[str]] = {
    "1": ["1"],
    "Z2": ["1", "Z2"],
    "Z3": ["1", "Z3"],
    "Z4": ["1", "Z2", "Z4"],
    "Z2xZ2": ["1", "Z2", "Z2xZ2"],
    "S3": ["1", "Z2", "Z3", "S3"],
    "D10": ["1", "Z2", "Z5", "D10"],
    "A4": ["1", "Z2", "Z3", "Z2xZ2", "A4"],
}


def _canonical(label: str) -> str:
    key = label.strip()
    return ALIASES.get(key, key)


def schur_lookup(label: str) -> SchurFact:
    key = _canonical(label)
    if key not in _SCHUR_TABLE:
        raise SchurLookupError(label)
    return _SCHUR_TABLE[key]


def schur_labels() -> List[str]:
    return sorted(_SCHUR_TABLE)


# -----------------------------
# Equivariantization bookkeeping
# -----------------------------

@dataclass(frozen=True)
class OrbitData:
    """One orbit of simples under the group action."""

    orbit_size: int
    stabilizer: str
    cocycle: int = 0
    base_dim: CyclotomicNumber = field(default_factory=CyclotomicNumber.one)
    count: int = 1


@dataclass
class EquivariantizationPlan:
    group_label: str
    group_order: int
    orbits: List[OrbitData]

    def violations(self) -> List[str]:
        out: List[str] = []
        for o in self.orbits:
            h = schur_lookup(o.stabilizer).order
            if o.orbit_size * h != self.group_order:
                out.append(
                    f"orbit of size {o.orbit_size} with stabilizer {o.stabilizer} "
                    f"does not match |{self.group_label}| = {self.group_order}"
                )
        return out

    def base_global_dimension(self) -> CyclotomicNumber:
        total = CyclotomicNumber.zero()
        for o in self.orbits:
            total = total + o.count * o.orbit_size * o.base_dim * o.base_dim
        return total


@dataclass
class EquivariantizationResult:
    rank: int
    dims: List[CyclotomicNumber]
    non_integral: List[CyclotomicNumber]

    def global_dimension(self) -> CyclotomicNumber:
        total = CyclotomicNumber.zero()
        for d in self.dims:
            total = total + d * d
        return total


def equivariantization_rank(plan: EquivariantizationPlan) -> EquivariantizationResult:
    """
    Simples of the equivariantization are pairs (orbit, projective irrep of the
    stabilizer at the orbit's cocycle), of dimension orbit_size·base_dim·degree.
    """
    bad = plan.violations()
    if bad:
        raise ValueError("; ".join(bad))
    dims: List[CyclotomicNumber] = []
    for o in plan.orbits:
        for deg in schur_lookup(o.stabilizer).projective_degrees(o.cocycle):
            dims.extend([o.orbit_size * deg * o.base_dim] * o.count)
    non_integral: List[CyclotomicNumber] = []
    for d in dims:
        if not d.is_algebraic_integer() and d not in non_integral:
            non_integral.append(d)
    log.debug("equivariantization over %s: rank %d", plan.group_label, len(dims))
    return EquivariantizationResult(rank=len(dims), dims=dims, non_integral=non_integral)


def involution_orbit_count(n: int) -> int:
    """Orbits of x ↦ -x on Z_n for odd n."""
    if n < 1 or n % 2 == 0:
        raise ValueError(f"n must be a positive odd integer, got {n}")
    return len({min(x, (-x) % n) for x in range(n)})


def sign_action_plan(n: int) -> EquivariantizationPlan:
    """S3 acting on a pointed rank-n category through the sign, x ↦ -x."""
    free = involution_orbit_count(n) - 1
    orbits = [OrbitData(orbit_size=1, stabilizer="S3")]
    if free:
        orbits.append(OrbitData(orbit_size=2, stabilizer="Z3", count=free))
    return EquivariantizationPlan(group_label="S3", group_order=6, orbits=orbits)


def trivial_action_plan(group_label: str, n: int) -> EquivariantizationPlan:
    fact = schur_lookup(group_label)
    return EquivariantizationPlan(
        group_label=fact.group,
        group_order=fact.order,
        orbits=[OrbitData(orbit_size=1, stabilizer=fact.group, count=n)],
    )


# -----------------------------
# Stabilizer types for a lone simple
# -----------------------------

class OrbitType(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)

    stabilizer: str
    cocycle: int
    orbit_size: int
    degree: int

    @property
    def factor(self) -> int:
        # dim of the equivariantized simple = factor · base dim
        return self.orbit_size * self.degree


def single_simple_orbit_types(group_label: str, data_dir: Optional[Path] = None) -> List[OrbitType]:
    """
    (stabilizer, cocycle) pairs whose orbit contributes exactly one simple to
    the equivariantization: one orbit and a single projective irrep.
    """
    key = _canonical(group_label)
    if key not in SUBGROUP_TYPES:
        raise SchurLookupError(group_label)
    order = named_group(key, data_dir).order if key != "1" else 1
    if order != schur_lookup(key).order:
        raise ValueError(f"catalog order of {key} disagrees with the Schur table")
    out: List[OrbitType] = []
    for h in SUBGROUP_TYPES[key]:
        fact = schur_lookup(h)
        for cocycle, degs in enumerate(fact.degrees):
            if len(degs) == 1:
                out.append(OrbitType(stabilizer=h, cocycle=cocycle, orbit_size=order // fact.order, degree=degs[0]))
    return out


def base_dimension_options(
    group_label: str, dim: CyclotomicNumber, data_dir: Optional[Path] = None
) -> List[Tuple[OrbitType, CyclotomicNumber]]:
    """(orbit type, base dim) for every way a simple of dimension dim can arise."""
    return [(t, dim / t.factor) for t in single_simple_orbit_types(group_label, data_dir)]
