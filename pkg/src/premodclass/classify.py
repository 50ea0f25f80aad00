from __future__ import annotations

import logging
from dataclasses import dataclass
from functools import lru_cache
from math import gcd, isqrt
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple

from .arith import roots_of_unity_with_degree_at_most, sylvester_landau_bound
from .characters import CharacterTable, census, character_table, rep_fusion_ring
from .config import PremodConfig, load_config
from .cyclotomic import CyclotomicNumber, RootOfUnity, golden_ratio, sqrt_int, two_cos
from .equivariant import (
    EquivariantizationPlan,
    OrbitData,
    OrbitType,
    base_dimension_options,
    equivariantization_rank,
    involution_orbit_count,
    schur_lookup,
    sign_action_plan,
    trivial_action_plan,
)
from .fusion import (
    DimensionVector,
    FusionRing,
    adjoin_simple,
    fp_dimensions,
    global_dimension,
    invertible_objects,
    load_json_file,
    norm_bound,
    product,
    restrict,
    rings_isomorphic,
    subring_generated_by,
)
from .groups import FiniteGroup, catalog_groups, complete_orders, named_group
from .intpoly import IntPolynomial
from .ledger import ExternalFactLedger, bundled_ledger
from .premodular import (
    PremodularDatum,
    check_datum,
    datum_from_compact,
    degeneracy_class,
    last_entry_value,
    muger_center,
    symbolic_s_matrix,
    tannakian_twist_rule,
    theta_condition_residual,
)
from .schema import OUTCOMES, CaseNode, Check, ClassificationReport, RealizedEntry, ReportSummary, Witness
from .search import enumerate_fusion_rings, row_solutions
from .twistpoly import TwistPolynomial, TwistSymbol, TwistValue, root_of_unity_solutions
from .utils import sha256_json

log = logging.getLogger(__name__)

__all__ = [
    "classify_symmetric_rank5",
    "classify_center_rank4",
    "classify_center_rank3",
    "classify_center_rank2",
    "classify_modular_rank5",
    "classify_rank5",
    "divisibility_check",
    "root_of_unity_solutions",
    "rank4_twist_candidates",
    "UnsettledCaseError",
]

PREMODULAR_FILE = "premodular_rank5.json"
MODULAR_FILE = "modular_rank5.json"


class UnsettledCaseError(RuntimeError):
    """A case that none of the branch's arguments closes."""


# -----------------------------
# Arithmetic witnesses
# -----------------------------

def _cyc(value: Any) -> CyclotomicNumber:
    return value if isinstance(value, CyclotomicNumber) else CyclotomicNumber.rational(value)


def divisibility_check(sub_dim: Any, total_dim: Any) -> bool:
    """True iff sub_dim divides total_dim; both must be rational integers."""
    a, b = _cyc(sub_dim), _cyc(total_dim)
    if not (a.is_rational_integer() and b.is_rational_integer()):
        raise ValueError(f"divisibility needs rational integers, got {a} and {b}")
    n, m = int(a.as_fraction()), int(b.as_fraction())
    if n == 0:
        raise ValueError("cannot divide by a zero dimension")
    return m % n == 0


def _dim_of(dims: DimensionVector, indices: Sequence[int]) -> CyclotomicNumber:
    total = CyclotomicNumber.zero()
    for a in indices:
        total = total + dims[a] * dims[a]
    return total


def _subring_witness(ring: FusionRing, dims: DimensionVector) -> Optional[Witness]:
    """A proper subring generated by one simple whose dimension does not divide dim C."""
    total = global_dimension(dims)
    for a in range(1, ring.rank):
        sub = subring_generated_by(ring, a)
        if len(sub) == ring.rank:
            continue
        sub_dim = _dim_of(dims, sub)
        if sub_dim.is_rational_integer() and total.is_rational_integer():
            if not divisibility_check(sub_dim, total):
                return Witness(
                    kind="divisibility",
                    detail=f"X{a} generates {sub} of dimension {sub_dim}, which does not divide {total}",
                    values=(str(sub_dim), str(total)),
                )
    return None


# -----------------------------
# Twists from S-matrix identities
# -----------------------------

def _forces_equal(p: TwistPolynomial, a: str, b: str) -> bool:
    """p = c(m - m·(a/b)) for some monomial m, so p = 0 iff θ_a = θ_b."""
    terms = list(p.terms.items())
    if len(terms) != 2:
        return False
    (m1, c1), (m2, c2) = terms
    if not (c1 + c2).is_zero():
        return False
    diff: Dict[str, int] = dict(m1)
    for name, e in m2:
        diff[name] = diff.get(name, 0) - e
    diff = {k: v for k, v in diff.items() if v}
    return diff in ({a: 1, b: -1}, {a: -1, b: 1})


@dataclass
class PairTwists:
    """Outcome of forcing θ_x = θ_y = t and solving the unit-column residual for t."""

    reason: str
    residual: Optional[TwistPolynomial]
    polynomial: Optional[IntPolynomial]
    solutions: List[RootOfUnity]

    def checks(self) -> List[Check]:
        out = [Check(name="equal_twists", value=self.reason, ok=bool(self.reason))]
        if self.polynomial is not None:
            out.append(Check(name="residual_polynomial", value=str(self.polynomial)))
            out.append(Check(name="twist_solutions", value=[str(t) for t in self.solutions]))
        return out


def _twist_vector(rank: int, center: Sequence[int], symbols: Dict[int, TwistValue]) -> List[TwistValue]:
    out: List[TwistValue] = []
    for i in range(rank):
        if i in symbols:
            out.append(symbols[i])
        elif i in center:
            out.append(RootOfUnity.one())
        else:
            out.append(TwistSymbol(f"theta{i}"))
    return out


def derive_pair_twists(
    ring: FusionRing,
    dims: DimensionVector,
    center: Sequence[int],
    pair: Tuple[int, int],
) -> PairTwists:
    """
    Force θ_x = θ_y from S symmetry or from S[z][x] = d_z d_x for a central z,
    then make the unit column orthogonal to column y.

    Twists outside the center and the pair stay symbolic; the residual must
    not depend on them.
    """
    x, y = pair
    a, b = f"theta{x}", f"theta{y}"
    twists = _twist_vector(ring.rank, center, {x: TwistSymbol(a), y: TwistSymbol(b)})
    S = symbolic_s_matrix(ring, dims, twists)

    reason = ""
    if _forces_equal(S[x][y] - S[y][x], a, b):
        reason = f"S[{x}][{y}] = S[{y}][{x}]"
    else:
        for z in center:
            if _forces_equal(S[z][x] - dims[z] * dims[x], a, b):
                reason = f"S[{z}][{x}] = d{z}*d{x}"
                break
    if not reason:
        return PairTwists(reason="", residual=None, polynomial=None, solutions=[])

    t = TwistSymbol(f"theta{x}")
    S = symbolic_s_matrix(ring, dims, _twist_vector(ring.rank, center, {x: t, y: t}))
    residual = TwistPolynomial.constant(0)
    for k in range(ring.rank):
        residual = residual + S[k][y].conj() * dims[k]
    if residual.symbols() - {t.name}:
        log.debug("residual still depends on %s", sorted(residual.symbols()))
        return PairTwists(reason=reason, residual=residual, polynomial=None, solutions=[])
    poly = residual.to_int_polynomial(t.name)
    sols = root_of_unity_solutions(poly) if not poly.is_zero else []
    return PairTwists(reason=reason, residual=residual, polynomial=poly, solutions=sols)


# -----------------------------
# Rank-4 center twist filter
# -----------------------------

@dataclass(frozen=True)
class TwistCandidate:
    theta: RootOfUnity
    m: int
    d: CyclotomicNumber

    def to_compact(self) -> Dict[str, Any]:
        return {"theta": str(self.theta), "m": self.m, "d": str(self.d)}


def rank4_twist_candidates(order: int, max_degree: int = 4) -> List[TwistCandidate]:
    """
    Twists θ of the lone non-central simple with m·d = -|G|(θ+θ⁻¹) and
    d² = |G| + m·d for a non-negative integer m and a positive algebraic
    integer d.
    """
    out: List[TwistCandidate] = []
    for n in roots_of_unity_with_degree_at_most(max_degree):
        for k in range(n):
            if gcd(k, n) != 1:
                continue
            theta = RootOfUnity(k, n)
            t = theta.to_cyclotomic()
            md = (t + t.conj()) * (-order)
            d2 = md + order
            if not d2.is_positive():
                continue
            if md.is_zero():
                m, d = 0, sqrt_int(order)
            else:
                q = md * md / d2
                if not q.is_rational_integer() or not md.is_positive():
                    continue
                m = isqrt(int(q.as_fraction()))
                if m * m != int(q.as_fraction()):
                    continue
                d = md / m
            if d * d == d2 and d.is_positive() and d.is_algebraic_integer():
                out.append(TwistCandidate(theta=theta, m=m, d=d))
    return out


# -----------------------------
# Node builders
# -----------------------------

def _eliminated(label: str, witness: Witness, **kw: Any) -> CaseNode:
    return CaseNode(label=label, outcome="ELIMINATED", witness=witness, **kw)


def _external(label: str, key: str, **kw: Any) -> CaseNode:
    return CaseNode(label=label, outcome="EXTERNAL_FACT", fact=key, **kw)


def _realized(
    label: str,
    datum: PremodularDatum,
    cfg: PremodConfig,
    *,
    expected_center: Sequence[int],
    outcome: str = "REALIZED",
    fact: Optional[str] = None,
    theta_indices: Sequence[int] = (),
    hypotheses: Optional[Dict[str, Any]] = None,
    citations: Sequence[str] = (),
    checks: Sequence[Check] = (),
) -> CaseNode:
    """Attach a datum after re-running every check on it."""
    bad = check_datum(datum, theta_indices=theta_indices)
    center = muger_center(datum, data_dir=cfg.data_dir)
    fp = fp_dimensions(datum.ring, conductor_bound=cfg.conductor_bound)
    verified = list(checks) + [
        Check(name="violations", value=len(bad), ok=not bad),
        Check(name="center", value=center.to_compact(), ok=list(center.indices) == list(expected_center)),
        Check(name="fp_dimensions", value=[str(d) for d in fp], ok=list(fp) == list(datum.dims)),
    ]
    kw: Dict[str, Any] = {"hypotheses": dict(hypotheses or {}), "citations": list(citations), "checks": verified}
    failed = [c.name for c in verified if not c.ok]
    if failed:
        log.warning("%s: datum failed %s", label, failed)
        return _eliminated(
            label,
            Witness(kind="check-failed", detail=f"{datum.name or label} fails {', '.join(failed)}", values=tuple(failed)),
            **kw,
        )
    return CaseNode(
        label=label,
        outcome=outcome,
        fact=fact,
        datum=datum,
        category_class=degeneracy_class(datum),
        **kw,
    )


# -----------------------------
# Bundled data
# -----------------------------

@lru_cache(maxsize=8)
def _bundled_data(path: str, conductor_bound: int) -> Tuple[PremodularDatum, ...]:
    raw = load_json_file(Path(path))
    return tuple(datum_from_compact(entry, conductor_bound=conductor_bound) for entry in raw)


def bundled_premodular(cfg: Optional[PremodConfig] = None) -> Dict[str, PremodularDatum]:
    cfg = cfg or load_config()
    data = _bundled_data(str(cfg.data_dir / PREMODULAR_FILE), cfg.conductor_bound)
    return {d.name: d for d in data}


def bundled_modular(cfg: Optional[PremodConfig] = None) -> List[PremodularDatum]:
    cfg = cfg or load_config()
    return list(_bundled_data(str(cfg.data_dir / MODULAR_FILE), cfg.conductor_bound))


def _census(k: int, cfg: PremodConfig) -> Tuple[List[FiniteGroup], int]:
    limit = min(sylvester_landau_bound(k), cfg.census_max_order)
    return census(catalog_groups(limit, cfg.data_dir), k, limit), limit


def _census_checks(k: int, groups: Sequence[FiniteGroup], limit: int, cfg: PremodConfig) -> List[Check]:
    return [
        Check(name="class_count_bound", value=sylvester_landau_bound(k)),
        Check(name="catalog_max_order", value=limit),
        Check(name="catalog_complete_orders", value=complete_orders(catalog_groups(limit, cfg.data_dir))),
        Check(name="census", value=[G.name for G in groups]),
    ]


def _matches_group(ring: FusionRing, indices: Sequence[int], label: str, cfg: PremodConfig) -> bool:
    try:
        sub = restrict(ring, indices)
    except ValueError:
        return False
    G = named_group(label, cfg.data_dir)
    return rings_isomorphic(sub, rep_fusion_ring(G)) is not None


# -----------------------------
# Symmetric: Müger center of rank 5
# -----------------------------

def _super_tannakian_twists(G: FiniteGroup, table: CharacterTable) -> List[Dict[str, Any]]:
    """Twists of Rep(G, z) for each central involution z: θ_χ = χ(z)/χ(1)."""
    out: List[Dict[str, Any]] = []
    orders = G.element_orders
    for s, cls in enumerate(G.classes):
        if len(cls) != 1 or int(orders[cls[0]]) != 2:
            continue
        signs = [1 if table.value(i, s) == table.degrees[i] else -1 for i in range(table.size)]
        out.append({"class": s, "twists": signs})
    return out


def classify_symmetric_rank5(cfg: Optional[PremodConfig] = None) -> CaseNode:
    """Rep(G) for every group with five conjugacy classes, all twists trivial."""
    cfg = cfg or load_config()
    groups, limit = _census(5, cfg)
    children: List[CaseNode] = []
    for G in groups:
        table = character_table(G)
        ring = rep_fusion_ring(G, table)
        datum = PremodularDatum.from_parts(
            ring, table.degrees, [RootOfUnity.one()] * table.size, name=f"Rep({G.name})"
        )
        children.append(
            _realized(
                f"Rep({G.name})",
                datum,
                cfg,
                expected_center=list(range(table.size)),
                hypotheses={"group": G.name, "order": G.order},
                citations=["deligne-symmetric"],
                checks=[
                    Check(name="degrees", value=list(table.degrees)),
                    Check(name="super_tannakian_twists", value=_super_tannakian_twists(G, table)),
                ],
            )
        )
    log.debug("symmetric branch: %s", [G.name for G in groups])
    return CaseNode(
        label="symmetric",
        hypotheses={"center_rank": 5},
        citations=["deligne-symmetric", "br1-class-count-census"],
        checks=_census_checks(5, groups, limit, cfg),
        children=children,
    )


# -----------------------------
# Müger center of rank 4
# -----------------------------

def _pointed_base_option(t: OrbitType, base: CyclotomicNumber, base_dim: CyclotomicNumber) -> Optional[str]:
    """
    "product" when the orbit is every non-unit invertible of a pointed base and
    needs the nontrivial stabilizer class, "fixed" for a lone fixed invertible
    with that class, None when neither applies.
    """
    if base != 1 or t.cocycle == 0 or base_dim != 1 + t.orbit_size:
        return None
    # a single nontrivial class is preserved by every conjugation
    if len(schur_lookup(t.stabilizer).degrees) != 2:
        return None
    if t.orbit_size >= 2:
        return "product"
    return "fixed"


def _rank4_realization(G: FiniteGroup, c: TwistCandidate, label: str, cfg: PremodConfig, kw: Dict[str, Any]) -> CaseNode:
    table = character_table(G)
    ring = adjoin_simple(rep_fusion_ring(G, table), table.degrees, c.m)
    k = table.size
    datum = PremodularDatum.from_parts(
        ring,
        list(table.degrees) + [c.d],
        [RootOfUnity.one()] * k + [c.theta],
        name=f"Sem^{G.name}",
    )
    return _realized(
        label,
        datum,
        cfg,
        expected_center=list(range(k)),
        hypotheses=kw["hypotheses"],
        citations=kw["citations"] + ["semion-klein-equivariantization"],
        checks=kw["checks"],
    )


def _rank4_survivor(G: FiniteGroup, cands: Sequence[TwistCandidate], cfg: PremodConfig) -> CaseNode:
    c = cands[0]
    label = f"n={c.theta.n}"
    dim = c.d * c.d + G.order
    kw: Dict[str, Any] = {
        "hypotheses": {
            "theta_order": c.theta.n,
            "thetas": [str(x.theta) for x in cands],
            "m": c.m,
            "d": str(c.d),
            "dim": str(dim),
        },
        "citations": ["bruguieres-modularization", "bn1-dimensions"],
    }
    checks: List[Check] = []
    if dim.is_rational_integer():
        ok = divisibility_check(G.order, dim)
        checks.append(Check(name="center_divides_dim", value=[G.order, str(dim)], ok=ok))
        if not ok:
            w = Witness(kind="divisibility", detail=f"{G.order} does not divide dim C = {dim}", values=(str(G.order), str(dim)))
            return _eliminated(label, w, checks=checks, **kw)

    options = base_dimension_options(G.name, c.d, cfg.data_dir)
    checks.append(
        Check(
            name="base_dimensions",
            value=[
                {"stabilizer": t.stabilizer, "cocycle": t.cocycle, "orbit": t.orbit_size, "base": str(b)}
                for t, b in options
            ],
        )
    )
    integral = [(t, b) for t, b in options if b.is_algebraic_integer()]
    if not integral:
        values = tuple(sorted({str(b) for _, b in options}))
        w = Witness(kind="non-integral", detail=f"no base dimension of d = {c.d} is an algebraic integer", values=values)
        return _eliminated(label, w, checks=checks, **kw)
    phi = golden_ratio()
    if any(b == phi and t.orbit_size == 1 for t, b in integral):
        # a G-fixed Fibonacci simple upstairs
        return _external(label, "galindo-communication", checks=checks, **kw)

    base_dim = dim / G.order
    checks.append(Check(name="base_global_dimension", value=str(base_dim)))
    kinds = [_pointed_base_option(t, b, base_dim) for t, b in integral]
    if None in kinds:
        raise UnsettledCaseError(f"center=Rep({G.name}) > {label}: no argument closes the integral base dimensions")
    if "fixed" in kinds:
        if c.theta.n != 4:
            raise UnsettledCaseError(f"center=Rep({G.name}) > {label}: a rank-2 pointed base needs a twist of order 4")
        # the base is a semion fixed by G and carrying its projective class
        return _rank4_realization(G, c, label, cfg, {**kw, "checks": checks})
    t = integral[0][0]
    w = Witness(
        kind="cocycle-product",
        detail=(
            f"the {t.orbit_size} invertibles of the pointed base form one orbit, so their {t.stabilizer} "
            "classes multiply to the trivial class, but a lone simple needs the nontrivial one"
        ),
        values=(t.stabilizer, str(t.orbit_size)),
    )
    return _eliminated(
        label,
        w,
        checks=checks,
        hypotheses=kw["hypotheses"],
        citations=kw["citations"] + ["bn1-pointed-cocycles"],
    )


def classify_center_rank4(cfg: Optional[PremodConfig] = None) -> CaseNode:
    """Center Rep(G) with |Irr(G)| = 4 and one non-central simple X4."""
    cfg = cfg or load_config()
    groups, limit = _census(4, cfg)
    tested = roots_of_unity_with_degree_at_most(4)
    children: List[CaseNode] = []
    for G in groups:
        label = f"center=Rep({G.name})"
        cands = rank4_twist_candidates(G.order)
        grouped: Dict[Tuple[int, str], List[TwistCandidate]] = {}
        for c in cands:
            grouped.setdefault((c.theta.n, str(c.d)), []).append(c)
        kw: Dict[str, Any] = {
            "hypotheses": {"group": G.name, "order": G.order},
            "citations": ["deligne-symmetric"],
            "checks": [
                Check(name="center_twists", value="1"),
                Check(name="S44", value=str(last_entry_value(5, G.order))),
                Check(name="tested_orders", value=list(tested)),
                Check(name="survivors", value=[c.to_compact() for c in cands]),
            ],
        }
        if not grouped:
            w = Witness(
                kind="no-root-of-unity",
                detail="no twist of X4 fits the balancing and dimension equations",
                values=tuple(str(n) for n in tested),
            )
            children.append(_eliminated(label, w, **kw))
            continue
        subs = [_rank4_survivor(G, grouped[key], cfg) for key in sorted(grouped)]
        children.append(CaseNode(label=label, children=subs, **kw))
        log.debug("%s: surviving orders %s", label, sorted(grouped))
    return CaseNode(
        label="center rank 4",
        hypotheses={"center_rank": 4},
        citations=["br1-class-count-census"],
        checks=_census_checks(4, groups, limit, cfg),
        children=children,
    )


def _close_ring(
    label: str,
    ring: FusionRing,
    dims: DimensionVector,
    center: Sequence[int],
    cfg: PremodConfig,
    *,
    reference: Optional[PremodularDatum],
    ring_fact: str,
    pair: Optional[Tuple[int, int]] = None,
    citations: Sequence[str] = (),
    hypotheses: Optional[Dict[str, Any]] = None,
    checks: Sequence[Check] = (),
    theta_indices: Sequence[int] = (),
) -> CaseNode:
    """
    Settle one candidate fusion ring: a bad subring or a twist polynomial
    without roots of unity eliminates it; a match with the bundled datum
    realizes it. Any other ring is excluded by `ring_fact`, the ledger fact
    fixing the Grothendieck ring of the equivariantization.
    """
    kw: Dict[str, Any] = {"hypotheses": dict(hypotheses or {}), "citations": list(citations)}
    found = list(checks)
    found.append(Check(name="ring", value=ring.to_compact()))
    witness = _subring_witness(ring, dims)
    if witness is not None:
        return _eliminated(label, witness, checks=found, **kw)

    pt = derive_pair_twists(ring, dims, center, pair) if pair else None
    if pt is not None:
        found += pt.checks()
        if pt.polynomial is not None and not pt.polynomial.is_zero and not pt.solutions:
            w = Witness(
                kind="no-root-of-unity",
                detail=f"theta{pair[0]} must be a root of {pt.polynomial}",
                values=(str(pt.polynomial),),
            )
            return _eliminated(label, w, checks=found, **kw)

    if reference is None:
        raise UnsettledCaseError(f"{label}: no bundled reference datum to compare against")
    perm = rings_isomorphic(ring, reference.ring)
    if perm is None:
        found.append(Check(name="reference", value=reference.name, ok=False))
        return _external(label, ring_fact, checks=found, **kw)
    found.append(Check(name="reference", value=reference.name))
    if pt is not None and pt.solutions:
        wanted = {reference.twists[i] for i in range(ring.rank) if perm[i] in pair}
        found.append(
            Check(
                name="reference_twists_admissible",
                value=sorted(str(t) for t in wanted),
                ok=wanted <= set(pt.solutions),
            )
        )
    ref_center = [i for i in range(ring.rank) if perm[i] in center]
    return _realized(
        label,
        reference,
        cfg,
        expected_center=ref_center,
        theta_indices=theta_indices,
        checks=found,
        **kw,
    )


# -----------------------------
# Müger center of rank 3
# -----------------------------

def _z3_branch(cfg: PremodConfig) -> CaseNode:
    label = "center=Rep(Z3)"
    plan = EquivariantizationPlan(
        group_label="Z3",
        group_order=3,
        orbits=[OrbitData(orbit_size=1, stabilizer="Z3"), OrbitData(orbit_size=3, stabilizer="1", count=2)],
    )
    res = equivariantization_rank(plan)
    H = named_group("Z7:Z3", cfg.data_dir)
    table = character_table(H)
    ring = rep_fusion_ring(H, table)
    dims = DimensionVector.of(table.degrees)
    center = [i for i, d in enumerate(table.degrees) if d == 1]
    outside = [i for i, d in enumerate(table.degrees) if d != 1]
    total = global_dimension(dims)
    checks = [
        Check(name="equivariantization_rank", value=res.rank, ok=res.rank == 5),
        Check(name="dims", value=[str(d) for d in res.dims]),
        Check(name="dim", value=str(total), ok=total == 21),
        Check(name="ring", value=f"Rep({H.name})"),
    ]
    pt = derive_pair_twists(ring, dims, center, (outside[0], outside[1]))
    checks += pt.checks()
    kw: Dict[str, Any] = {
        "hypotheses": {"group": "Z3", "order": 3, "base_dims": "1"},
        "citations": ["rank7-facts", "grading-gn2-dgno1", "ego-dim21", "bruguieres-modularization"],
        "checks": checks,
    }
    if pt.polynomial is None or pt.polynomial.is_zero or pt.solutions:
        raise UnsettledCaseError(f"{label}: the shared twist of the 3-dimensional simples is not ruled out")
    w = Witness(
        kind="no-root-of-unity",
        detail=f"the shared twist of the two 3-dimensional simples is a root of {pt.polynomial}",
        values=(str(pt.polynomial),),
    )
    return _eliminated(label, w, **kw)


def _s3_fixed_case(cfg: PremodConfig, premodular: Dict[str, PremodularDatum]) -> CaseNode:
    label = "case y=z"
    plan = EquivariantizationPlan(
        group_label="S3",
        group_order=6,
        orbits=[OrbitData(orbit_size=1, stabilizer="S3"), OrbitData(orbit_size=3, stabilizer="Z2")],
    )
    res = equivariantization_rank(plan)
    dims = DimensionVector.of(res.dims)
    rows = row_solutions(dims, 9, fixed={0: 1, 1: 0})
    bound = norm_bound(dims, 3)
    kept = [r for r in rows if max(r) <= bound]
    kw: Dict[str, Any] = {
        "hypotheses": {"stabilizer": "Z2", "orbit_size": 3, "base": "pointed rank 4", "dims": [str(d) for d in dims]},
        "citations": [
            "rank4-modular-list",
            "bn1-dimensions",
            "bnrw1-norm-bound",
            "bruguieres-modularization",
            "bn1-equivariant-fusion",
        ],
    }
    checks = [
        Check(name="equivariantization_rank", value=res.rank, ok=res.rank == 5),
        Check(name="x3_square_rows", value=[list(r) for r in rows]),
        Check(name="norm_bound", value=bound),
        Check(name="rows_within_bound", value=[list(r) for r in kept]),
    ]
    if not kept:
        w = Witness(kind="empty-diophantine", detail="no expansion of X3⊗X3 fits the norm bound", values=(str(bound),))
        return _eliminated(label, w, checks=checks, **kw)

    # the base group is Z2xZ2, so every simple is self-dual
    rings = enumerate_fusion_rings(5, dims, {(1, 3, 4): 1}, dual=list(range(5)), node_budget=cfg.node_budget)
    rings = [F for F in rings if tuple(F.N[3][3]) in kept and _matches_group(F, [0, 1, 2], "S3", cfg)]
    checks.append(Check(name="candidate_rings", value=len(rings)))
    if not rings:
        w = Witness(kind="empty-diophantine", detail="no fusion ring with center Rep(S3) and these dimensions", values=())
        return _eliminated(label, w, checks=checks, **kw)
    children = [
        _close_ring(
            f"ring {i}",
            F,
            dims,
            [0, 1, 2],
            cfg,
            reference=premodular.get("Rep(S4)"),
            ring_fact="bn1-equivariant-fusion",
            pair=(3, 4),
            citations=["bpr1-realization"],
        )
        for i, F in enumerate(rings, start=1)
    ]
    return CaseNode(label=label, checks=checks, children=children, **kw)


def _s3_moved_case(cfg: PremodConfig) -> CaseNode:
    label = "case y!=z"
    n = 13
    plans = {"trivial": trivial_action_plan("S3", n), "sign": sign_action_plan(n)}
    ranks = {name: equivariantization_rank(p).rank for name, p in plans.items()}
    kw: Dict[str, Any] = {
        "hypotheses": {"base": f"pointed modular of rank {n}"},
        "citations": ["grading-gn2-dgno1", "eno-8.32", "bruguieres-modularization"],
        "checks": [
            Check(name="sign_action_orbits", value=involution_orbit_count(n)),
            Check(name="equivariantization_ranks", value=ranks),
        ],
    }
    if 5 in ranks.values():
        raise UnsettledCaseError(f"{label}: an S3 action equivariantizes to rank 5: {ranks}")
    w = Witness(
        kind="rank-mismatch",
        detail="every S3 action on the pointed base equivariantizes to the wrong rank",
        values=tuple(str(ranks[k]) for k in sorted(ranks)),
    )
    return _eliminated(label, w, **kw)


def classify_center_rank3(cfg: Optional[PremodConfig] = None) -> CaseNode:
    cfg = cfg or load_config()
    groups, limit = _census(3, cfg)
    premodular = bundled_premodular(cfg)
    children: List[CaseNode] = []
    for G in groups:
        if G.name == "Z3":
            children.append(_z3_branch(cfg))
        elif G.name == "S3":
            children.append(
                CaseNode(
                    label="center=Rep(S3)",
                    hypotheses={"group": "S3", "order": 6},
                    citations=["deligne-symmetric"],
                    children=[_s3_fixed_case(cfg, premodular), _s3_moved_case(cfg)],
                )
            )
        else:
            raise UnsettledCaseError(f"center rank 3: no argument for center Rep({G.name})")
    return CaseNode(
        label="center rank 3",
        hypotheses={"center_rank": 3},
        citations=["br1-class-count-census"],
        checks=_census_checks(3, groups, limit, cfg),
        children=children,
    )


# -----------------------------
# Müger center of rank 2
# -----------------------------

def rank4_modular_dimensions() -> List[Tuple[str, List[CyclotomicNumber]]]:
    """Dimension vectors of the four rank-4 modular fusion rings."""
    phi = golden_ratio()
    one = CyclotomicNumber.one()
    q2 = two_cos(18, 1)
    return [
        ("pointed", [one, one, one, one]),
        ("Fib x Fib", [one, phi, phi, phi * phi]),
        ("Fib x Sem", [one, phi, one, phi]),
        ("(A1,7)_1/2", [one, q2 * q2 - 1, q2 * q2 * q2 - q2 * 2, q2]),
    ]


def z2_moved_dimensions(base: Sequence[CyclotomicNumber]) -> List[DimensionVector]:
    """
    Dimensions of a rank-5 Z2-equivariantization of a rank-4 base in which
    two simples are swapped and one is fixed: (1, 1, 2b, w, w).
    """
    out: List[DimensionVector] = []
    seen = set()
    idx = [1, 2, 3]
    for i in idx:
        for j in idx:
            if j <= i or base[i] != base[j]:
                continue
            (k,) = [x for x in idx if x not in (i, j)]
            plan = EquivariantizationPlan(
                group_label="Z2",
                group_order=2,
                orbits=[
                    OrbitData(orbit_size=1, stabilizer="Z2"),
                    OrbitData(orbit_size=1, stabilizer="Z2", base_dim=base[k]),
                    OrbitData(orbit_size=2, stabilizer="1", base_dim=base[i]),
                ],
            )
            d = equivariantization_rank(plan).dims
            dv = DimensionVector.of([d[0], d[1], d[4], d[2], d[3]])
            key = str(dv)
            if key not in seen:
                seen.add(key)
                out.append(dv)
    return out


def _center_twist_check(ring: FusionRing) -> Check:
    rule = tannakian_twist_rule(ring, [0, 1], 1)
    return Check(name="center_twist", value=str(rule) if rule is not None else "+-1", ok=rule is not None)


_MOVED_REFERENCES = {"pointed": "Rep(D8)", "Fib x Fib": "PSU(2)_8"}


def _moved_subbranch(
    name: str,
    dims: DimensionVector,
    cfg: PremodConfig,
    premodular: Dict[str, PremodularDatum],
) -> CaseNode:
    label = f"base {name}"
    rings = enumerate_fusion_rings(5, dims, {(1, 2, 2): 1, (1, 3, 4): 1}, node_budget=cfg.node_budget)
    kw: Dict[str, Any] = {
        "hypotheses": {"base": name, "dims": [str(d) for d in dims]},
        "citations": ["rank4-modular-list", "bn1-dimensions"],
    }
    checks = [Check(name="candidate_rings", value=len(rings))]
    if not rings:
        w = Witness(kind="empty-diophantine", detail=f"no fusion ring with dimensions {dims}", values=(str(dims),))
        return _eliminated(label, w, checks=checks, **kw)
    if name not in _MOVED_REFERENCES:
        return _external(label, "s1-near-group-braiding", checks=checks, **kw)

    reference = premodular.get(_MOVED_REFERENCES[name])
    children: List[CaseNode] = []
    for i, F in enumerate(rings, start=1):
        ring_label = f"ring {i}"
        inv = invertible_objects(F)
        ring_checks = [_center_twist_check(F), Check(name="invertibles", value=inv)]
        if name == "pointed" and any(product(F, g, g) != {0: 1} for g in inv):
            children.append(
                _external(
                    ring_label,
                    "s1-near-group-braiding",
                    checks=ring_checks + [Check(name="ring", value=F.to_compact())],
                    citations=["nr1-near-group-ring"],
                )
            )
            continue
        theta_checks: List[Check] = []
        if name == "pointed" and reference is not None:
            # the fixed 2-dimensional simple keeps an unknown twist
            t = reference.twists
            cond = theta_condition_residual(
                reference.ring, reference.dims, [t[0], t[1], TwistSymbol("theta2"), t[3], t[4]], 2
            )
            theta_checks.append(Check(name="theta_condition", value=cond.to_compact(), ok=cond.holds))
        children.append(
            _close_ring(
                ring_label,
                F,
                dims,
                [0, 1],
                cfg,
                reference=reference,
                ring_fact="nr1-near-group-ring" if name == "pointed" else "bn1-equivariant-fusion",
                pair=(3, 4),
                citations=["nr1-near-group-ring", "bpr1-realization"] if name == "pointed" else ["bpr1-realization"],
                checks=ring_checks + theta_checks,
                theta_indices=[2] if name == "pointed" else (),
            )
        )
    return CaseNode(label=label, checks=checks, children=children, **kw)


def _z2_moved_case(cfg: PremodConfig, premodular: Dict[str, PremodularDatum]) -> CaseNode:
    children: List[CaseNode] = []
    for name, base in rank4_modular_dimensions():
        options = z2_moved_dimensions(base)
        if not options:
            w = Witness(
                kind="empty-diophantine",
                detail="no two non-unit simples of the base have equal dimension",
                values=tuple(str(b) for b in base),
            )
            children.append(_eliminated(f"base {name}", w, hypotheses={"base": name}, citations=["rank4-modular-list"]))
            continue
        for dims in options:
            children.append(_moved_subbranch(name, dims, cfg, premodular))
    return CaseNode(
        label="case X1*X3=X4",
        hypotheses={"base_rank": 4},
        citations=["bruguieres-modularization", "rank4-modular-list"],
        children=children,
    )


def _z2_fixed_case(cfg: PremodConfig, premodular: Dict[str, PremodularDatum]) -> CaseNode:
    label = "case X1 fixes all"
    plan = EquivariantizationPlan(
        group_label="Z2",
        group_order=2,
        orbits=[OrbitData(orbit_size=1, stabilizer="Z2"), OrbitData(orbit_size=2, stabilizer="1", count=3)],
    )
    res = equivariantization_rank(plan)
    dims = DimensionVector.of(res.dims)
    kw: Dict[str, Any] = {
        "hypotheses": {"base_rank": 1 + 2 * 3, "base_dims": "1", "dims": [str(d) for d in dims]},
        "citations": ["bruguieres-modularization", "rank7-facts", "grading-gn2-dgno1"],
    }
    rings = enumerate_fusion_rings(
        5, dims, {(1, 2, 2): 1, (1, 3, 3): 1, (1, 4, 4): 1}, node_budget=cfg.node_budget
    )
    checks = [
        Check(name="equivariantization_rank", value=res.rank, ok=res.rank == 5),
        Check(name="candidate_rings", value=len(rings)),
    ]
    if not rings:
        w = Witness(kind="empty-diophantine", detail=f"no fusion ring with dimensions {dims}", values=(str(dims),))
        return _eliminated(label, w, checks=checks, **kw)
    children = [
        _close_ring(
            f"ring {i}",
            F,
            dims,
            [0, 1],
            cfg,
            reference=premodular.get("Rep(D14)"),
            ring_fact="bn1-equivariant-fusion",
            citations=["nr1-near-group-ring", "bpr1-realization"],
            checks=[_center_twist_check(F)],
        )
        for i, F in enumerate(rings, start=1)
    ]
    return CaseNode(label=label, checks=checks, children=children, **kw)


def classify_center_rank2(cfg: Optional[PremodConfig] = None) -> CaseNode:
    cfg = cfg or load_config()
    groups, limit = _census(2, cfg)
    premodular = bundled_premodular(cfg)
    children: List[CaseNode] = []
    for G in groups:
        children.append(
            CaseNode(
                label=f"center=Rep({G.name})",
                hypotheses={"group": G.name, "order": G.order},
                citations=["deligne-symmetric"],
                children=[_z2_moved_case(cfg, premodular), _z2_fixed_case(cfg, premodular)],
            )
        )
    return CaseNode(
        label="center rank 2",
        hypotheses={"center_rank": 2},
        citations=["br1-class-count-census"],
        checks=_census_checks(2, groups, limit, cfg),
        children=children,
    )


# -----------------------------
# Modular: trivial Müger center
# -----------------------------

def classify_modular_rank5(cfg: Optional[PremodConfig] = None) -> CaseNode:
    cfg = cfg or load_config()
    children = [
        _realized(
            d.name,
            d,
            cfg,
            expected_center=[0],
            outcome="EXTERNAL_FACT",
            fact="bnrw2-modular-rank5",
            hypotheses={"center_rank": 1},
        )
        for d in bundled_modular(cfg)
    ]
    return CaseNode(label="modular", hypotheses={"center_rank": 1}, children=children)


# -----------------------------
# Report
# -----------------------------

_CLASSES = ("symmetric", "properly_premodular", "modular")


def assemble_report(branches: List[CaseNode], ledger: ExternalFactLedger) -> ClassificationReport:
    """Summary, ledger resolution and fingerprint for a finished case tree."""
    where: Dict[str, List[str]] = {}
    for b in branches:
        for path, node in b.walk():
            for key in node.citations:
                where.setdefault(key, []).append(path)
    facts = ledger.resolve(where)

    counts = {k: 0 for k in OUTCOMES + _CLASSES}
    entries: List[RealizedEntry] = []
    for b in branches:
        for path, node in b.leaves():
            counts[node.outcome] += 1
            if node.datum is not None and node.category_class and node.outcome in ("REALIZED", "EXTERNAL_FACT"):
                counts[node.category_class] += 1
                entries.append(
                    RealizedEntry(
                        name=node.datum.name or node.label,
                        path=path,
                        category_class=node.category_class,
                        outcome=node.outcome,
                    )
                )
    summary = ReportSummary(entries=tuple(entries), counts=counts)
    return ClassificationReport(
        branches=branches,
        summary=summary,
        external_facts_used=[f.key for f in facts],
        external_facts={f.key: f.to_compact(where[f.key]) for f in facts},
        fingerprint=sha256_json([b.to_compact() for b in branches]),
    )


def classify_rank5(
    cfg: Optional[PremodConfig] = None,
    ledger: Optional[ExternalFactLedger] = None,
) -> ClassificationReport:
    cfg = cfg or load_config()
    ledger = ledger or bundled_ledger(cfg.data_dir)
    branches = [
        classify_symmetric_rank5(cfg),
        classify_center_rank4(cfg),
        classify_center_rank3(cfg),
        classify_center_rank2(cfg),
        classify_modular_rank5(cfg),
    ]
    report = assemble_report(branches, ledger)
    log.info("classification: %s", report.summary.counts)
    return report
