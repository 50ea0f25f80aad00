from __future__ import annotations

import itertools
import json
import logging
from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path
from typing import Any, Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

import mpmath
import numpy as np
from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator
from sympy import ZZ
from sympy.polys.factortools import dup_factor_list
from sympy.polys.matrices import DomainMatrix

from .arith import euler_phi
from .cyclotomic import CyclotomicNumber, two_cos
from .intpoly import IntPolynomial

log = logging.getLogger(__name__)


class ConductorSearchError(RuntimeError):
    """No cyclotomic value was certified for a Frobenius-Perron dimension."""


class DatumFormatError(ValueError):
    """A fusion ring or premodular datum file could not be read."""

    def __init__(self, message: str, *, where: str = "", line: Optional[int] = None, col: Optional[int] = None):
        self.where = where
        self.line = line
        self.col = col
        loc = ""
        if line is not None:
            loc = f" (line {line}, column {col})"
        elif where:
            loc = f" (at {where})"
        super().__init__(message + loc)


# -----------------------------
# Models
# -----------------------------

class Violation(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)

    tag: str = Field(..., min_length=1)
    indices: Tuple[int, ...] = ()
    detail: str = ""

    def to_compact(self) -> Dict[str, Any]:
        return {"tag": self.tag, "indices": list(self.indices), "detail": self.detail}


class FusionRing(BaseModel):
    """
    Based ring of rank r: N[a][b][c] is the multiplicity of X_c in X_a ⊗ X_b.

    Shape and duality are checked on construction; the ring axioms are
    checked by `validate` and reported as data.
    """

    model_config = ConfigDict(extra="forbid", frozen=True)

    rank: int = Field(..., ge=1)
    dual: List[int]
    N: List[List[List[int]]]
    labels: Optional[List[str]] = None

    @model_validator(mode="after")
    def _check_shape(self) -> FusionRing:
        r = self.rank
        if len(self.dual) != r or any(not 0 <= d < r for d in self.dual):
            raise ValueError(f"dual must be a list of {r} indices in range")
        if len(self.N) != r or any(len(row) != r or any(len(col) != r for col in row) for row in self.N):
            raise ValueError(f"N must be a {r}x{r}x{r} tensor")
        if self.labels is not None and len(self.labels) != r:
            raise ValueError("labels must name every simple")
        return self

    def tensor(self) -> np.ndarray:
        return np.array(self.N, dtype=np.int64)

    def label(self, a: int) -> str:
        return self.labels[a] if self.labels else f"X{a}"

    def to_compact(self) -> Dict[str, Any]:
        out: Dict[str, Any] = {"rank": self.rank, "dual": list(self.dual), "N": self.N}
        if self.labels:
            out["labels"] = list(self.labels)
        return out

    @classmethod
    def from_compact(cls, data: Mapping[str, Any]) -> FusionRing:
        try:
            return cls(
                rank=data["rank"],
                dual=list(data["dual"]),
                N=data["N"],
                labels=data.get("labels"),
            )
        except KeyError as e:
            raise DatumFormatError(f"missing field {e.args[0]!r}", where=str(e.args[0])) from e
        except ValidationError as e:
            first = e.errors()[0]
            where = "/".join(str(p) for p in first.get("loc", ()))
            raise DatumFormatError(first.get("msg", "invalid fusion ring"), where=where) from e

    @classmethod
    def from_tensor(cls, T: np.ndarray, dual: Sequence[int], labels: Optional[List[str]] = None) -> FusionRing:
        return cls(rank=int(T.shape[0]), dual=[int(d) for d in dual], N=T.astype(int).tolist(), labels=labels)


def load_json_file(path: Path) -> Any:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise DatumFormatError(f"cannot read {path}: {e}") from e
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise DatumFormatError(f"malformed JSON: {e.msg}", line=e.lineno, col=e.colno) from e


def load_ring(path: Path) -> FusionRing:
    return FusionRing.from_compact(load_json_file(path))


# -----------------------------
# Builders
# -----------------------------

def ring_from_products(
    rank: int,
    dual: Sequence[int],
    products: Mapping[Tuple[int, int], Mapping[int, int]],
    labels: Optional[List[str]] = None,
) -> FusionRing:
    """
    Build a commutative ring from its non-unit products, listed once per
    unordered pair (a, b) as {c: multiplicity}.
    """
    T = np.zeros((rank, rank, rank), dtype=np.int64)
    for a in range(rank):
        T[0, a, a] = 1
        T[a, 0, a] = 1
    for (a, b), out in products.items():
        for c, m in out.items():
            T[a, b, c] = m
            T[b, a, c] = m
    return FusionRing.from_tensor(T, dual, labels)


def group_ring(n: int) -> FusionRing:
    T = np.zeros((n, n, n), dtype=np.int64)
    for a in range(n):
        for b in range(n):
            T[a, b, (a + b) % n] = 1
    return FusionRing.from_tensor(T, [(-a) % n for a in range(n)])


def adjoin_simple(center: FusionRing, degrees: Sequence[int], m: int) -> FusionRing:
    """
    Extend an integral ring by one self-dual simple X with a⊗X = d_a·X and
    X⊗X = Σ d_a·a + m·X.
    """
    k = center.rank
    T = np.zeros((k + 1, k + 1, k + 1), dtype=np.int64)
    T[:k, :k, :k] = center.tensor()
    for a in range(k):
        T[a, k, k] = T[k, a, k] = T[k, k, a] = degrees[a]
    T[k, k, k] = m
    return FusionRing.from_tensor(T, list(center.dual) + [k])


def relabel(F: FusionRing, perm: Sequence[int]) -> FusionRing:
    """New simple i is old simple perm[i]; perm[0] must be 0."""
    p = list(perm)
    if p[0] != 0 or sorted(p) != list(range(F.rank)):
        raise ValueError(f"not a unit-fixing permutation: {p}")
    inv = [0] * F.rank
    for i, old in enumerate(p):
        inv[old] = i
    T = F.tensor()[np.ix_(p, p, p)]
    labels = [F.labels[old] for old in p] if F.labels else None
    return FusionRing.from_tensor(T, [inv[F.dual[old]] for old in p], labels)


# -----------------------------
# Axioms
# -----------------------------

def _cap(items: List[Violation], limit: int = 25) -> List[Violation]:
    return items[:limit]


def validate(F: FusionRing, *, commutative: bool = True) -> List[Violation]:
    """
    Check unit, rigidity, Frobenius reciprocity, associativity and (by
    default) commutativity. Each axiom reports at most 25 index tuples.
    """
    T = F.tensor()
    r = F.rank
    dual = F.dual
    out: List[Violation] = []

    neg = [tuple(int(i) for i in idx) for idx in np.argwhere(T < 0)]
    out += _cap([Violation(tag="nonnegativity", indices=idx, detail="negative multiplicity") for idx in neg])

    bad_dual = [a for a in range(r) if dual[dual[a]] != a]
    if dual[0] != 0:
        bad_dual = [0] + [a for a in bad_dual if a != 0]
    out += [Violation(tag="dual-involution", indices=(a,), detail=f"dual({a})={dual[a]}") for a in bad_dual]

    eye = np.eye(r, dtype=np.int64)
    unit: List[Violation] = []
    for b, c in zip(*np.nonzero(T[0] != eye)):
        unit.append(Violation(tag="unit", indices=(0, int(b), int(c)), detail=f"N[0][{b}][{c}]={T[0, b, c]}"))
    for a, c in zip(*np.nonzero(T[:, 0, :] != eye)):
        unit.append(Violation(tag="unit", indices=(int(a), 0, int(c)), detail=f"N[{a}][0][{c}]={T[a, 0, c]}"))
    out += _cap(unit)

    rigid: List[Violation] = []
    for a in range(r):
        for b in range(r):
            want = 1 if b == dual[a] else 0
            if T[a, b, 0] != want:
                rigid.append(Violation(tag="rigidity", indices=(a, b), detail=f"N[{a}][{b}][0]={T[a, b, 0]}, expected {want}"))
    out += _cap(rigid)

    frob: List[Violation] = []
    for a, b, c in itertools.product(range(r), repeat=3):
        if T[a, b, c] != T[dual[c], a, dual[b]]:
            frob.append(Violation(tag="frobenius", indices=(a, b, c), detail="N[a][b][c] != N[c*][a][b*]"))
    out += _cap(frob)

    left = np.einsum("abe,ecd->abcd", T, T)
    right = np.einsum("bcf,afd->abcd", T, T)
    assoc = [tuple(int(i) for i in idx) for idx in np.argwhere(left != right)]
    out += _cap([Violation(tag="associativity", indices=idx, detail="(ab)c != a(bc)") for idx in assoc])

    if commutative:
        comm = [tuple(int(i) for i in idx) for idx in np.argwhere(T != T.transpose(1, 0, 2)) if idx[0] < idx[1]]
        out += _cap([Violation(tag="commutativity", indices=idx, detail="N[a][b][c] != N[b][a][c]") for idx in comm])
    return out


# -----------------------------
# Ring helpers
# -----------------------------

def fusion_matrix(F: FusionRing, a: int) -> np.ndarray:
    """M[b][c] = N[a][b][c]."""
    return F.tensor()[a].copy()


def product(F: FusionRing, a: int, b: int) -> Dict[int, int]:
    return {c: int(m) for c, m in enumerate(F.N[a][b]) if m}


def invertible_objects(F: FusionRing) -> List[int]:
    return [a for a in range(F.rank) if sum(F.N[a][F.dual[a]]) == 1]


def is_pointed(F: FusionRing) -> bool:
    return len(invertible_objects(F)) == F.rank


def _close(F: FusionRing, seed: Iterable[int]) -> List[int]:
    members = set(seed) | {0}
    members |= {F.dual[a] for a in list(members)}
    frontier = list(members)
    while frontier:
        nxt: List[int] = []
        for x in frontier:
            for y in list(members):
                for c in set(product(F, x, y)) | set(product(F, y, x)):
                    for z in (c, F.dual[c]):
                        if z not in members:
                            members.add(z)
                            nxt.append(z)
        frontier = nxt
    return sorted(members)


def subring_generated_by(F: FusionRing, a: int) -> List[int]:
    """Smallest fusion- and dual-closed index set containing 0 and a."""
    return _close(F, [a])


def restrict(F: FusionRing, indices: Sequence[int]) -> FusionRing:
    idx = sorted(set(indices))
    if idx != _close(F, idx):
        raise ValueError(f"{idx} is not closed under fusion")
    pos = {old: i for i, old in enumerate(idx)}
    T = F.tensor()[np.ix_(idx, idx, idx)]
    labels = [F.labels[i] for i in idx] if F.labels else None
    return FusionRing.from_tensor(T, [pos[F.dual[i]] for i in idx], labels)


# -----------------------------
# Frobenius-Perron dimensions
# -----------------------------

@dataclass(frozen=True)
class DimensionVector:
    dims: Tuple[CyclotomicNumber, ...]

    def __post_init__(self) -> None:
        if not self.dims or self.dims[0] != 1:
            raise ValueError("dims[0] must be 1")

    def __len__(self) -> int:
        return len(self.dims)

    def __getitem__(self, a: int) -> CyclotomicNumber:
        return self.dims[a]

    def __iter__(self):
        return iter(self.dims)

    @classmethod
    def of(cls, values: Iterable[Any]) -> DimensionVector:
        return cls(tuple(v if isinstance(v, CyclotomicNumber) else CyclotomicNumber.rational(v) for v in values))

    def approx(self, dps: int = 30) -> List[float]:
        return [float(d.real_value(dps)) for d in self.dims]

    def to_compact(self) -> List[Dict[str, Any]]:
        return [d.to_compact() for d in self.dims]

    @classmethod
    def from_compact(cls, data: Sequence[Any]) -> DimensionVector:
        return cls(tuple(CyclotomicNumber.from_compact(d) for d in data))

    def __str__(self) -> str:
        return "(" + ", ".join(str(d) for d in self.dims) + ")"


def global_dimension(dv: DimensionVector) -> CyclotomicNumber:
    total = CyclotomicNumber.zero()
    for d in dv:
        total = total + d * d
    return total


def norm_bound(dims: DimensionVector, a: int) -> int:
    """Entries of N_a are at most d_a."""
    return dims[a].floor()


def dimension_equation_violations(F: FusionRing, dims: DimensionVector) -> List[Violation]:
    out: List[Violation] = []
    for a in range(F.rank):
        for b in range(a, F.rank):
            rhs = CyclotomicNumber.zero()
            for c, m in product(F, a, b).items():
                rhs = rhs + m * dims[c]
            if dims[a] * dims[b] != rhs:
                out.append(Violation(tag="dimension", indices=(a, b), detail=f"d_a d_b = {dims[a] * dims[b]}, sum = {rhs}"))
    return out


def _perron_vector(T: np.ndarray) -> np.ndarray:
    total = T.sum(axis=0).astype(float)
    values, vectors = np.linalg.eig(total)
    k = int(np.argmax(values.real))
    v = vectors[:, k].real
    return v / v[0]


def _integer_charpoly(M: np.ndarray) -> List[Any]:
    rows = [[ZZ(int(x)) for x in row] for row in M.tolist()]
    return DomainMatrix(rows, M.shape, ZZ).charpoly()


def _closest_root(M: np.ndarray, target: float) -> Tuple[IntPolynomial, mpmath.mpf]:
    _, factors = dup_factor_list(_integer_charpoly(M), ZZ)
    best: Optional[Tuple[float, IntPolynomial, mpmath.mpf]] = None
    with mpmath.workdps(80):
        for f, _ in factors:
            poly = IntPolynomial.from_dup(f)
            roots = mpmath.polyroots([int(c) for c in poly.coeffs], maxsteps=400, extraprec=200)
            for z in roots:
                z = mpmath.mpc(z)
                gap = float(abs(z - target))
                if abs(z.imag) < mpmath.mpf(10) ** -40 and (best is None or gap < best[0]):
                    best = (gap, poly, z.real)
    if best is None:
        raise ConductorSearchError("characteristic polynomial has no real root near the Perron value")
    return best[1], best[2]


@lru_cache(maxsize=256)
def _identify(poly: IntPolynomial, root_text: str, conductor_bound: int) -> CyclotomicNumber:
    """
    Express a real root of `poly` in some Q(ζₘ)⁺ through the power basis of 2cos(2π/m).
    mpmath's pslq only proposes the coordinates; the value is certified exactly.
    """
    with mpmath.workdps(80):
        root = mpmath.mpf(root_text)
        if poly.degree == 1:
            return CyclotomicNumber.rational(0) - CyclotomicNumber.rational(poly.coeffs[1]) / poly.coeffs[0]
        for m in range(3, conductor_bound + 1):
            if m % 4 == 2:
                continue
            h = euler_phi(m) // 2
            if h % poly.degree:
                continue
            c = 2 * mpmath.cos(2 * mpmath.pi / m)
            rel = mpmath.pslq([root] + [c**j for j in range(h)], maxcoeff=10**6, maxsteps=10**5)
            if not rel or rel[0] == 0:
                continue
            base = two_cos(m)
            cand = CyclotomicNumber.zero()
            for j in range(h):
                if rel[j + 1]:
                    cand = cand + CyclotomicNumber.rational(-rel[j + 1]) / rel[0] * base**j
            if poly.evaluate(cand) == 0 and abs(cand.real_value(60) - root) < mpmath.mpf(10) ** -40:
                log.debug("certified root of %s in conductor %d", poly, m)
                return cand
    raise ConductorSearchError(f"no cyclotomic root of {poly} found with conductor <= {conductor_bound}")


def fp_dimensions(F: FusionRing, *, conductor_bound: int = 120) -> DimensionVector:
    """
    Exact Frobenius-Perron dimensions.

    A floating Perron vector picks the right root of each irreducible factor
    of charpoly(N_a); the root is then realized exactly and the dimension
    equation is verified on the exact values.
    """
    if F.rank == 1:
        return DimensionVector((CyclotomicNumber.one(),))
    T = F.tensor()
    approx = _perron_vector(T)
    dims: List[CyclotomicNumber] = [CyclotomicNumber.one()]
    for a in range(1, F.rank):
        poly, root = _closest_root(T[a], float(approx[a]))
        with mpmath.workdps(80):
            text = mpmath.nstr(root, 70)
        dims.append(_identify(poly, text, conductor_bound))
    dv = DimensionVector(tuple(dims))
    bad = dimension_equation_violations(F, dv)
    if bad:
        raise ConductorSearchError(f"dimension equation fails at {bad[0].indices}")
    return dv


# -----------------------------
# Grading
# -----------------------------

@dataclass
class GradingComponents:
    adjoint: List[int]
    components: List[List[int]]
    totals: Optional[List[CyclotomicNumber]] = None

    def is_equidimensional(self) -> bool:
        if not self.totals:
            return True
        return all(t == self.totals[0] for t in self.totals)


def universal_grading_components(F: FusionRing, dims: Optional[DimensionVector] = None) -> GradingComponents:
    seeds: List[int] = []
    for a in range(F.rank):
        seeds.extend(product(F, a, F.dual[a]))
    adjoint = _close(F, seeds)

    parent = list(range(F.rank))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for x in adjoint:
        for a in range(F.rank):
            for b in product(F, x, a):
                ra, rb = find(a), find(b)
                if ra != rb:
                    parent[max(ra, rb)] = min(ra, rb)

    groups: Dict[int, List[int]] = {}
    for a in range(F.rank):
        groups.setdefault(find(a), []).append(a)
    components = sorted(groups.values(), key=lambda g: g[0])
    totals: Optional[List[CyclotomicNumber]] = None
    if dims is not None:
        totals = []
        for comp in components:
            t = CyclotomicNumber.zero()
            for a in comp:
                t = t + dims[a] * dims[a]
            totals.append(t)
    return GradingComponents(adjoint=adjoint, components=components, totals=totals)


# -----------------------------
# Isomorphism and canonical form
# -----------------------------

def _unit_fixing_perms(rank: int, dims: Optional[DimensionVector] = None) -> Iterable[List[int]]:
    for rest in itertools.permutations(range(1, rank)):
        perm = [0, *rest]
        if dims is not None and any(dims[perm[i]] != dims[i] for i in range(rank)):
            continue
        yield perm


def rings_isomorphic(F: FusionRing, G: FusionRing) -> Optional[List[int]]:
    """
    A unit-fixing permutation p with F relabeled by p equal to G, or None.
    Identity is tried first.
    """
    if F.rank != G.rank:
        return None
    TF, TG = F.tensor(), G.tensor()
    if sorted(TF.sum(axis=(1, 2)).tolist()) != sorted(TG.sum(axis=(1, 2)).tolist()):
        return None
    for perm in _unit_fixing_perms(F.rank):
        if np.array_equal(TF[np.ix_(perm, perm, perm)], TG):
            return perm
    return None


def canonical_form(F: FusionRing, dims: Optional[DimensionVector] = None) -> Tuple[Tuple[int, ...], List[int]]:
    """
    Lexicographically least flattened tensor over unit-fixing relabelings
    (restricted to dimension-preserving ones when dims are given).
    """
    T = F.tensor()
    best: Optional[Tuple[Tuple[int, ...], List[int]]] = None
    for perm in _unit_fixing_perms(F.rank, dims):
        key = tuple(int(x) for x in T[np.ix_(perm, perm, perm)].ravel())
        if best is None or key < best[0]:
            best = (key, perm)
    assert best is not None
    return best
