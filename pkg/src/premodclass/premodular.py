from __future__ import annotations

import logging
from functools import lru_cache
from math import floor
from pathlib import Path
from typing import Any, Dict, List, Literal, Mapping, Optional, Sequence, Tuple

from pydantic import BaseModel, ConfigDict, Field, model_validator

from .cyclotomic import CyclotomicNumber, RootOfUnity, parse_dimension
from .fusion import (
    DatumFormatError,
    DimensionVector,
    FusionRing,
    Violation,
    dimension_equation_violations,
    fp_dimensions,
    global_dimension,
    load_json_file,
    product,
    restrict,
    rings_isomorphic,
    validate,
)
from .intpoly import IntPolynomial
from .twistpoly import TwistPolynomial, TwistSymbol, TwistValue, root_of_unity_solutions

log = logging.getLogger(__name__)

DegeneracyClass = Literal["modular", "symmetric", "properly_premodular"]

SMatrix = Tuple[Tuple[CyclotomicNumber, ...], ...]


def _as_dims(dims: Any) -> DimensionVector:
    return dims if isinstance(dims, DimensionVector) else DimensionVector.of(dims)


# -----------------------------
# S from twists
# -----------------------------

def s_from_balancing(ring: FusionRing, dims: Any, twists: Sequence[RootOfUnity]) -> List[List[CyclotomicNumber]]:
    """
    S[x][y] = (θ_x θ_y)⁻¹ Σ_k N[x*][y][k] θ_k d_k, exactly.
    """
    dv = _as_dims(dims)
    r = ring.rank
    if len(dv) != r or len(twists) != r:
        raise ValueError(f"need {r} dimensions and {r} twists")
    weighted = [twists[k].to_cyclotomic() * dv[k] for k in range(r)]
    inv = [t.inverse().to_cyclotomic() for t in twists]
    S: List[List[CyclotomicNumber]] = []
    for x in range(r):
        row: List[CyclotomicNumber] = []
        for y in range(r):
            acc = CyclotomicNumber.zero()
            for k, m in product(ring, ring.dual[x], y).items():
                acc = acc + m * weighted[k]
            row.append(acc * inv[x] * inv[y])
        S.append(row)
    return S


def symbolic_s_matrix(ring: FusionRing, dims: Any, twists: Sequence[TwistValue]) -> List[List[TwistPolynomial]]:
    """Balancing-equation S with unknown twists kept as Laurent symbols."""
    dv = _as_dims(dims)
    r = ring.rank
    if len(dv) != r or len(twists) != r:
        raise ValueError(f"need {r} dimensions and {r} twists")
    weighted = [TwistPolynomial.of_twist(twists[k]) * dv[k] for k in range(r)]
    inv = [TwistPolynomial.of_twist(t, -1) for t in twists]
    S: List[List[TwistPolynomial]] = []
    for x in range(r):
        row: List[TwistPolynomial] = []
        for y in range(r):
            acc = TwistPolynomial.constant(0)
            for k, m in product(ring, ring.dual[x], y).items():
                acc = acc + weighted[k] * m
            row.append(acc * inv[x] * inv[y])
        S.append(row)
    return S


# -----------------------------
# Models
# -----------------------------

class PremodularDatum(BaseModel):
    """
    Grothendieck-level premodular datum: fusion rules, dimensions, the
    T-matrix diagonal and the S-matrix.

    Shapes are checked on construction; the balancing equation and the
    other identities are checked by `check_datum` and reported as data.
    """

    model_config = ConfigDict(extra="forbid", frozen=True, arbitrary_types_allowed=True)

    ring: FusionRing
    dims: DimensionVector
    twists: Tuple[RootOfUnity, ...]
    S: SMatrix
    name: str = ""
    s_provenance: Literal["given", "synthesized"] = "given"

    @model_validator(mode="after")
    def _check_shape(self) -> PremodularDatum:
        r = self.ring.rank
        if len(self.dims) != r:
            raise ValueError(f"expected {r} dimensions, got {len(self.dims)}")
        if len(self.twists) != r:
            raise ValueError(f"expected {r} twists, got {len(self.twists)}")
        if len(self.S) != r or any(len(row) != r for row in self.S):
            raise ValueError(f"S must be {r}x{r}")
        return self

    @property
    def rank(self) -> int:
        return self.ring.rank

    @classmethod
    def from_parts(
        cls,
        ring: FusionRing,
        dims: Any,
        twists: Sequence[RootOfUnity],
        name: str = "",
    ) -> PremodularDatum:
        dv = _as_dims(dims)
        S = s_from_balancing(ring, dv, twists)
        return cls(
            ring=ring,
            dims=dv,
            twists=tuple(twists),
            S=tuple(tuple(row) for row in S),
            name=name,
            s_provenance="synthesized",
        )

    def with_s(self, S: Sequence[Sequence[CyclotomicNumber]]) -> PremodularDatum:
        return self.model_copy(update={"S": tuple(tuple(row) for row in S), "s_provenance": "given"})

    def to_compact(self) -> Dict[str, Any]:
        out = dict(self.ring.to_compact())
        out["dims"] = self.dims.to_compact()
        out["T"] = [t.to_compact() for t in self.twists]
        out["S"] = [[v.to_compact() for v in row] for row in self.S]
        if self.name:
            out["name"] = self.name
        return out


class CenterDescription(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True, arbitrary_types_allowed=True)

    indices: Tuple[int, ...]
    tannakian: bool
    group_label: Optional[str] = None
    dimension: CyclotomicNumber = Field(default_factory=CyclotomicNumber.one)

    @model_validator(mode="after")
    def _check_unit(self) -> CenterDescription:
        if 0 not in self.indices:
            raise ValueError("the unit always lies in the Müger center")
        return self

    @property
    def rank(self) -> int:
        return len(self.indices)

    def to_compact(self) -> Dict[str, Any]:
        return {
            "indices": list(self.indices),
            "tannakian": self.tannakian,
            "group": self.group_label,
            "dim": str(self.dimension),
        }


class ThetaCondition(BaseModel):
    """
    Integrality condition on R = D⁻² Σ_{b,c} N[b][c][x] d_b d_c (θ_b/θ_c)².

    With one unknown twist, `polynomial` vanishes at every θ making R an
    integer and `solutions` lists the roots of unity that actually do.
    """

    model_config = ConfigDict(extra="forbid", frozen=True, arbitrary_types_allowed=True)

    index: int
    symbol: Optional[str] = None
    rhs: str
    bound: int = 0
    identical_to_lhs: bool
    polynomial: Optional[IntPolynomial] = None
    solutions: Tuple[RootOfUnity, ...] = ()
    value: Optional[CyclotomicNumber] = None
    holds: bool

    def to_compact(self) -> Dict[str, Any]:
        out: Dict[str, Any] = {
            "index": self.index,
            "rhs": self.rhs,
            "identical_to_lhs": self.identical_to_lhs,
            "holds": self.holds,
        }
        if self.symbol is not None:
            out["symbol"] = self.symbol
            out["bound"] = self.bound
            out["polynomial"] = self.polynomial.to_compact() if self.polynomial else None
            out["solutions"] = [str(t) for t in self.solutions]
            out["solution_orders"] = sorted({t.n for t in self.solutions})
        if self.value is not None:
            out["value"] = str(self.value)
        return out


# -----------------------------
# Checks
# -----------------------------

def check_balancing(datum: PremodularDatum) -> List[Violation]:
    ring, dims, S = datum.ring, datum.dims, datum.S
    th = [t.to_cyclotomic() for t in datum.twists]
    out: List[Violation] = []
    for x in range(datum.rank):
        for y in range(datum.rank):
            lhs = th[x] * th[y] * S[x][y]
            rhs = CyclotomicNumber.zero()
            for k, m in product(ring, ring.dual[x], y).items():
                rhs = rhs + m * th[k] * dims[k]
            if lhs != rhs:
                out.append(Violation(tag="balancing", indices=(x, y), detail=f"lhs={lhs}, rhs={rhs}"))
    return out


def center_indices(datum: PremodularDatum) -> List[int]:
    """Simples x with S[x][y] = d_x d_y for every y."""
    d, S = datum.dims, datum.S
    return [x for x in range(datum.rank) if all(S[x][y] == d[x] * d[y] for y in range(datum.rank))]


def column_orthogonality_residual(datum: PremodularDatum, x: int, y: int) -> CyclotomicNumber:
    total = CyclotomicNumber.zero()
    for k in range(datum.rank):
        total = total + datum.S[k][x] * datum.S[k][y].conj()
    return total


def check_orthogonality(datum: PremodularDatum) -> List[Violation]:
    center = set(center_indices(datum))
    outside = [y for y in range(datum.rank) if y not in center]
    out: List[Violation] = []
    for y in outside:
        for x in sorted(center):
            res = column_orthogonality_residual(datum, x, y)
            if not res.is_zero():
                out.append(Violation(tag="orthogonality", indices=(x, y), detail=f"column residual {res}"))
        weighted = CyclotomicNumber.zero()
        for k in range(datum.rank):
            weighted = weighted + datum.dims[k] * datum.S[k][y]
        if not weighted.is_zero():
            out.append(Violation(tag="orthogonality", indices=(y,), detail=f"sum_k d_k S[k][{y}] = {weighted}"))
    return out


def _shape_violations(datum: PremodularDatum) -> List[Violation]:
    out: List[Violation] = []
    if datum.twists[0] != RootOfUnity.one():
        out.append(Violation(tag="twist-unit", indices=(0,), detail=f"theta_0 = {datum.twists[0]}"))
    S, d, dual = datum.S, datum.dims, datum.ring.dual
    for x in range(datum.rank):
        if S[x][0] != d[x]:
            out.append(Violation(tag="unit-column", indices=(x,), detail=f"S[{x}][0] = {S[x][0]}, d = {d[x]}"))
        for y in range(datum.rank):
            if y > x and S[x][y] != S[y][x]:
                out.append(Violation(tag="symmetry", indices=(x, y), detail="S[x][y] != S[y][x]"))
            if S[x][y] != S[dual[x]][y].conj():
                out.append(Violation(tag="symmetry", indices=(x, y), detail="S[x][y] != conj(S[x*][y])"))
    return out


def check_datum(datum: PremodularDatum, *, theta_indices: Sequence[int] = ()) -> List[Violation]:
    """
    Every identity a premodular datum must satisfy, as tagged violations.

    The θ-condition is object-specific and only checked at `theta_indices`.
    """
    out: List[Violation] = list(validate(datum.ring))
    out += _shape_violations(datum)
    out += dimension_equation_violations(datum.ring, datum.dims)
    out += check_balancing(datum)
    out += check_orthogonality(datum)
    for x in theta_indices:
        cond = theta_condition_residual(datum.ring, datum.dims, datum.twists, x)
        if not cond.holds:
            out.append(Violation(tag="theta-condition", indices=(x,), detail=f"R = {cond.rhs} is not an integer"))
    log.debug("datum %s: %d violations", datum.name or "<unnamed>", len(out))
    return out


# -----------------------------
# Müger center
# -----------------------------

@lru_cache(maxsize=64)
def _rep_ring(name: str, data_dir: Optional[str]) -> FusionRing:
    from .characters import rep_fusion_ring
    from .groups import named_group

    return rep_fusion_ring(named_group(name, Path(data_dir) if data_dir else None))


def center_group_label(ring: FusionRing, indices: Sequence[int], dims: Any, data_dir: Optional[Path] = None) -> Optional[str]:
    """
    Catalog groups G with Rep(G) Grothendieck-equivalent to the sub fusion
    ring on `indices`, joined by "/" when several match.
    """
    from .groups import catalog_groups

    dv = _as_dims(dims)
    total = CyclotomicNumber.zero()
    for a in indices:
        total = total + dv[a] * dv[a]
    if not total.is_rational_integer():
        return None
    order = int(total.as_fraction())
    sub = restrict(ring, indices)
    key = str(data_dir) if data_dir else None
    names: List[str] = []
    for G in catalog_groups(order, data_dir):
        if G.order != order or len(G.classes) != len(indices):
            continue
        if rings_isomorphic(_rep_ring(G.name, key), sub) is not None:
            names.append(G.name)
    return "/".join(names) or None


def muger_center(datum: PremodularDatum, *, label: bool = True, data_dir: Optional[Path] = None) -> CenterDescription:
    """
    Transparent objects of the datum with their global dimension.

    The center is Tannakian when the datum has odd rank, otherwise only when
    every transparent twist is 1. A group label is attached for Tannakian
    centers when a catalog group matches.
    """
    idx = center_indices(datum)
    dim = CyclotomicNumber.zero()
    for a in idx:
        dim = dim + datum.dims[a] * datum.dims[a]
    one = RootOfUnity.one()
    # odd rank: an order-2 transparent object fixes some simple, so its twist is 1
    tannakian = datum.rank % 2 == 1 or all(datum.twists[a] == one for a in idx)
    group = center_group_label(datum.ring, idx, datum.dims, data_dir) if label and tannakian else None
    return CenterDescription(indices=tuple(idx), tannakian=tannakian, group_label=group, dimension=dim)


def degeneracy_class(datum: PremodularDatum) -> DegeneracyClass:
    # rank 1 counts as symmetric: Vec is Rep of the trivial group
    n = len(center_indices(datum))
    if n == datum.rank:
        return "symmetric"
    if n == 1:
        return "modular"
    return "properly_premodular"


def last_entry_value(rank: int, center_dim: Any) -> CyclotomicNumber:
    """
    S[r-1][r-1] when the center has rank r-1: minus the center's global
    dimension.
    """
    if rank < 2:
        raise ValueError("the last-entry rule needs rank >= 2")
    dim = center_dim if isinstance(center_dim, CyclotomicNumber) else CyclotomicNumber.rational(center_dim)
    return -dim


def tannakian_twist_rule(ring: FusionRing, center: Sequence[int], z: int) -> Optional[RootOfUnity]:
    """
    Twist forced on an order-2 central object z: 1 when z fixes some simple
    (z⊗x = x), otherwise None (only ±1 is known).
    """
    if z not in center:
        raise ValueError(f"{z} is not in the given center")
    if product(ring, z, z) != {0: 1} or z == 0:
        raise ValueError(f"{z} is not an object of order 2")
    for x in range(ring.rank):
        if product(ring, z, x) == {x: 1}:
            return RootOfUnity.one()
    return None


# -----------------------------
# θ-condition
# -----------------------------

def theta_condition_residual(ring: FusionRing, dims: Any, twists: Sequence[TwistValue], x: int) -> ThetaCondition:
    """
    Right side R = D⁻² Σ_{b,c} N[b][c][x] d_b d_c (θ_b/θ_c)² must be a rational
    integer. With one unknown twist, |R| <= B for the coefficient bound B, so
    every admissible θ is a root of the squarefree part of
    ∏_{m=-B..B} θᵉ(R(θ) - m).
    """
    dv = _as_dims(dims)
    r = ring.rank
    if len(dv) != r or len(twists) != r:
        raise ValueError(f"need {r} dimensions and {r} twists")
    names = {t.name for t in twists if isinstance(t, TwistSymbol)}
    if len(names) > 1:
        raise ValueError(f"at most one unknown twist is supported, got {sorted(names)}")

    rhs = TwistPolynomial.constant(0)
    for b in range(r):
        for c in range(r):
            m = ring.N[b][c][x]
            if m:
                term = TwistPolynomial.of_twist(twists[b], 2) * TwistPolynomial.of_twist(twists[c], -2)
                rhs = rhs + term * (m * dv[b] * dv[c])
    rhs = rhs / global_dimension(dv)
    lhs = TwistPolynomial.of_twist(twists[x], 2) + TwistPolynomial.of_twist(twists[x], -2)
    identical = rhs == lhs

    if rhs.is_constant():
        value = rhs.constant_value()
        return ThetaCondition(
            index=x,
            rhs=str(value),
            identical_to_lhs=identical,
            value=value,
            holds=value.is_rational_integer(),
        )

    name = next(iter(rhs.symbols()))
    bound = floor(rhs.coefficient_bound())
    poly = IntPolynomial((1,))
    for m in range(-bound, bound + 1):
        poly = poly * (rhs - m).to_int_polynomial(name)
    poly = poly.squarefree_part()
    sols = tuple(t for t in root_of_unity_solutions(poly) if rhs.evaluate({name: t}).is_rational_integer())
    log.debug("theta condition at %d: degree %d, %d solutions", x, poly.degree, len(sols))
    return ThetaCondition(
        index=x,
        symbol=name,
        rhs=str(rhs),
        bound=bound,
        identical_to_lhs=identical,
        polynomial=poly,
        solutions=sols,
        holds=bool(sols),
    )


# -----------------------------
# JSON I/O
# -----------------------------

_DATUM_KEYS = {"rank", "dual", "N", "labels", "dims", "T", "S", "name"}


def _dimension_entry(item: Any) -> CyclotomicNumber:
    # "2*phi" style tokens as well as the compact form
    if isinstance(item, str):
        return parse_dimension(item)
    return CyclotomicNumber.from_compact(item)


def _parse_list(data: Mapping[str, Any], key: str, conv: Any) -> List[Any]:
    raw = data[key]
    if not isinstance(raw, list):
        raise DatumFormatError(f"{key} must be a list", where=key)
    out: List[Any] = []
    for i, item in enumerate(raw):
        try:
            out.append(conv(item))
        except (ValueError, TypeError, KeyError, ZeroDivisionError) as e:
            raise DatumFormatError(f"bad entry: {e}", where=f"{key}/{i}") from e
    return out


def datum_from_compact(data: Any, *, conductor_bound: int = 120) -> PremodularDatum:
    """
    Read the JSON datum form. `dims` default to Frobenius-Perron dimensions;
    a missing `S` is synthesized from the balancing equation.
    """
    if not isinstance(data, dict):
        raise DatumFormatError("a datum must be a JSON object")
    extra = sorted(set(data) - _DATUM_KEYS)
    if extra:
        raise DatumFormatError(f"unexpected field {extra[0]!r}", where=extra[0])
    ring = FusionRing.from_compact(data)
    if "T" not in data:
        raise DatumFormatError("missing field 'T'", where="T")
    if "dims" in data:
        entries = _parse_list(data, "dims", _dimension_entry)
        if not entries or entries[0] != 1:
            raise DatumFormatError("the unit must have dimension 1", where="dims/0")
        dims = DimensionVector(tuple(entries))
    else:
        dims = fp_dimensions(ring, conductor_bound=conductor_bound)
    twists = _parse_list(data, "T", RootOfUnity.from_compact)
    name = str(data.get("name", ""))
    try:
        if data.get("S") is None:
            return PremodularDatum.from_parts(ring, dims, twists, name=name)
        rows = _parse_list(data, "S", lambda row: [CyclotomicNumber.from_compact(v) for v in row])
        return PremodularDatum(ring=ring, dims=dims, twists=tuple(twists), S=tuple(tuple(r) for r in rows), name=name)
    except ValueError as e:
        if isinstance(e, DatumFormatError):
            raise
        raise DatumFormatError(str(e).splitlines()[0]) from e


def load_datum(path: Path, *, conductor_bound: int = 120) -> PremodularDatum:
    return datum_from_compact(load_json_file(path), conductor_bound=conductor_bound)


def datum_to_compact(datum: PremodularDatum) -> Dict[str, Any]:
    return datum.to_compact()
