from __future__ import annotations

import logging
from dataclasses import dataclass
from functools import cached_property
from math import isqrt
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict
from sympy import GF, nextprime, primitive_root
from sympy.polys.matrices import DomainMatrix

from .arith import sylvester_landau_bound
from .cyclotomic import CyclotomicNumber, from_root_multiplicities
from .fusion import FusionRing
from .groups import FiniteGroup, groups_isomorphic

log = logging.getLogger(__name__)


# -----------------------------
# Character table
# -----------------------------

@dataclass
class CharacterTable:
    """
    Exact character table of a finite group.

    Values are kept in two exact forms: residues modulo the working prime p
    (p ≡ 1 mod exponent, p > |G|) and, for each entry, the multiplicities of
    the eigenvalues ζₑˡ of a representing matrix, e = exponent.
    """

    group_order: int
    class_sizes: List[int]
    class_orders: List[int]
    inverse_class: List[int]
    degrees: List[int]
    exponent: int
    prime: int
    residues: np.ndarray
    multiplicities: np.ndarray

    @property
    def size(self) -> int:
        return len(self.degrees)

    def value(self, i: int, s: int) -> CyclotomicNumber:
        return self.chars[i][s]

    @cached_property
    def chars(self) -> List[List[CyclotomicNumber]]:
        return [
            [from_root_multiplicities(self.exponent, self.multiplicities[i, s].tolist()) for s in range(self.size)]
            for i in range(self.size)
        ]

    def _pair_sum(self, pairs: Sequence[Tuple[int, int, int, int]]) -> CyclotomicNumber:
        # Σ weight·χ_a(s)·conj(χ_b(s)) over (a, s, b, weight)
        total = np.zeros(self.exponent, dtype=np.int64)
        for a, s, b, weight in pairs:
            x = self.multiplicities[a, s]
            y = self.multiplicities[b, s][(-np.arange(self.exponent)) % self.exponent]
            for exp in np.nonzero(x)[0]:
                total += weight * int(x[exp]) * np.roll(y, int(exp))
        return from_root_multiplicities(self.exponent, total.tolist())

    def row_orthogonality_violations(self) -> List[Tuple[int, int]]:
        bad: List[Tuple[int, int]] = []
        k = self.size
        for i in range(k):
            for j in range(i, k):
                got = self._pair_sum([(i, s, j, self.class_sizes[s]) for s in range(k)])
                if got != (self.group_order if i == j else 0):
                    bad.append((i, j))
        return bad

    def column_orthogonality_violations(self) -> List[Tuple[int, int]]:
        bad: List[Tuple[int, int]] = []
        k = self.size
        for s in range(k):
            for t in range(s, k):
                total = np.zeros(self.exponent, dtype=np.int64)
                for i in range(k):
                    x = self.multiplicities[i, s]
                    y = self.multiplicities[i, t][(-np.arange(self.exponent)) % self.exponent]
                    for exp in np.nonzero(x)[0]:
                        total += int(x[exp]) * np.roll(y, int(exp))
                got = from_root_multiplicities(self.exponent, total.tolist())
                want = self.group_order // self.class_sizes[s] if s == t else 0
                if got != want:
                    bad.append((s, t))
        return bad

    def to_compact(self) -> Dict[str, Any]:
        return {
            "order": self.group_order,
            "class_sizes": list(self.class_sizes),
            "degrees": list(self.degrees),
            "chars": [[v.to_compact() for v in row] for row in self.chars],
        }


def dixon_prime(order: int, exponent: int) -> int:
    """Smallest prime p > max(|G|, 2√|G|) with p ≡ 1 mod exponent."""
    p = nextprime(max(order, 2 * isqrt(order) + 1))
    while (p - 1) % exponent != 0:
        p = nextprime(p)
    return int(p)


def _class_matrix(G: FiniteGroup, j: int) -> List[List[int]]:
    # A[r][s] = #{x ∈ C_j : x⁻¹·g_s ∈ C_r}; central characters are right eigenvectors
    k = len(G.classes)
    members = np.array(G.classes[j], dtype=np.int64)
    inv = G.inverses[members]
    A = np.zeros((k, k), dtype=np.int64)
    for s, rep in enumerate(G.representatives):
        A[:, s] = np.bincount(G.class_of[G.cayley[inv, rep]], minlength=k)
    return A.tolist()


def _eigenspaces(A: DomainMatrix) -> List[DomainMatrix]:
    K = A.domain
    n = A.shape[0]
    roots: List[int] = []
    for factor, _ in A.charpoly_factor_list():
        if len(factor) != 2:
            raise RuntimeError("class matrix does not split over the working prime")
        roots.append(K.to_int(-factor[1] / factor[0]) % K.mod)
    spaces: List[DomainMatrix] = []
    for z in sorted(set(roots)):
        B = A - DomainMatrix.diag([K(z)] * n, K).to_dense()
        basis, _ = B.nullspace().to_dense().rref()
        spaces.append(basis.to_dense())
    return spaces


def _refine(spaces: List[DomainMatrix], A: DomainMatrix) -> List[DomainMatrix]:
    out: List[DomainMatrix] = []
    for S in spaces:
        m = S.shape[0]
        if m <= 1:
            out.append(S)
            continue
        S, pivots = S.rref()
        S = S.to_dense()
        C = (A * S.transpose()).extract(list(pivots), list(range(m)))
        for U in _eigenspaces(C):
            sub, _ = (U * S).rref()
            out.append(sub.to_dense())
    return out


def character_table(G: FiniteGroup) -> CharacterTable:
    """
    Dixon's method: split F_p^k into common eigenspaces of the class
    matrices, normalize each central character, and lift its values to
    cyclotomic integers through eigenvalue multiplicities.
    """
    order = G.order
    k = len(G.classes)
    e = G.exponent
    p = dixon_prime(order, e)
    K = GF(p)
    sizes = G.class_sizes
    log.debug("character table of %s: %d classes, prime %d", G.label, k, p)

    spaces = [DomainMatrix.eye(k, K).to_dense()]
    # central classes have permutation class matrices; they split cheaply
    sweep = sorted(range(1, k), key=lambda j: (sizes[j], j))
    for j in sweep:
        if len(spaces) == k:
            break
        A = DomainMatrix.from_list(_class_matrix(G, j), K)
        spaces = _refine(spaces, A)
    if len(spaces) != k:
        raise RuntimeError(f"common eigenspace decomposition failed for {G.label}")

    inv_class = [int(G.class_of[G.inverses[r]]) for r in G.representatives]
    rows: List[Tuple[int, List[int]]] = []
    for S in spaces:
        v = [K.to_int(x) % p for x in S.to_list()[0]]
        scale = pow(v[0], -1, p)
        v = [x * scale % p for x in v]
        z = sum(v[s] * v[inv_class[s]] * pow(sizes[s], -1, p) for s in range(k)) % p
        d2 = order * pow(z, -1, p) % p
        d = isqrt(d2)
        if d * d != d2 or d < 1:
            raise RuntimeError(f"degree square {d2} is not a square for {G.label}")
        chi = [d * v[s] * pow(sizes[s], -1, p) % p for s in range(k)]
        rows.append((d, chi))

    trivial = [1] * k
    rows.sort(key=lambda r: (r[1] != trivial, r[0], r[1]))

    w = int(primitive_root(p))
    root_e = pow(w, (p - 1) // e, p)
    mult = np.zeros((k, k, e), dtype=np.int64)
    for s, rep in enumerate(G.representatives):
        o = int(G.element_orders[rep])
        step = e // o
        root_o = pow(root_e, step, p)
        powers = [int(G.class_of[G.power(rep, t)]) for t in range(o)]
        o_inv = pow(o, -1, p)
        for i, (d, chi) in enumerate(rows):
            for exp in range(o):
                acc = sum(chi[powers[t]] * pow(root_o, (-exp * t) % o, p) for t in range(o))
                m = acc * o_inv % p
                if m > d:
                    raise RuntimeError(f"eigenvalue multiplicity lift failed for {G.label}")
                mult[i, s, exp * step] = m
            if int(mult[i, s].sum()) != d:
                raise RuntimeError(f"eigenvalue multiplicities do not sum to the degree for {G.label}")

    return CharacterTable(
        group_order=order,
        class_sizes=list(sizes),
        class_orders=[int(G.element_orders[r]) for r in G.representatives],
        inverse_class=inv_class,
        degrees=[d for d, _ in rows],
        exponent=e,
        prime=p,
        residues=np.array([chi for _, chi in rows], dtype=np.int64),
        multiplicities=mult,
    )


# -----------------------------
# Rep(G)
# -----------------------------

def rep_fusion_ring(G: FiniteGroup, table: Optional[CharacterTable] = None) -> FusionRing:
    """
    Grothendieck ring of Rep(G): N[a][b][c] = ⟨χ_a·χ_b, χ_c⟩.

    Evaluated modulo the working prime; every coefficient lies in [0, |G|)
    and p > |G|, so the residues are the integers themselves.
    """
    t = table or character_table(G)
    p = t.prime
    k = t.size
    R = t.residues % p
    Rbar = R[:, t.inverse_class]
    W = np.array(t.class_sizes, dtype=np.int64) % p
    inv_order = pow(t.group_order, -1, p)
    N = np.zeros((k, k, k), dtype=np.int64)
    for a in range(k):
        X = (R[a] * W) % p
        Y = (R * X) % p
        N[a] = (Y @ Rbar.T) % p * inv_order % p
    dual = []
    for a in range(k):
        hits = [b for b in range(k) if np.array_equal(R[b], Rbar[a])]
        dual.append(hits[0])
    return FusionRing.from_tensor(N, dual)


# -----------------------------
# Census
# -----------------------------

class GroupInfo(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)

    name: str
    order: int
    degree: int
    class_count: int
    class_sizes: List[int]
    degrees: List[int]
    exponent: int
    abelian: bool

    def to_compact(self) -> Dict[str, Any]:
        return self.model_dump()


def group_fingerprint(G: FiniteGroup, table: Optional[CharacterTable] = None) -> Tuple[Any, ...]:
    t = table or character_table(G)
    return (
        G.order,
        tuple(sorted(G.class_sizes)),
        tuple(sorted(t.degrees)),
        tuple(sorted(G.element_orders.tolist())),
    )


def group_info(G: FiniteGroup) -> GroupInfo:
    t = character_table(G)
    return GroupInfo(
        name=G.label,
        order=G.order,
        degree=G.degree,
        class_count=len(G.classes),
        class_sizes=G.class_sizes,
        degrees=t.degrees,
        exponent=G.exponent,
        abelian=G.is_abelian(),
    )


def census(groups: Sequence[FiniteGroup], k: int, max_order: int) -> List[FiniteGroup]:
    """
    Groups with exactly k conjugacy classes and order <= max_order, one per
    isomorphism type, sorted by (order, name).
    """
    if k < 1:
        raise ValueError("k must be positive")
    kept: List[Tuple[Tuple[Any, ...], FiniteGroup]] = []
    for G in sorted(groups, key=lambda g: (g.order, g.name)):
        if G.order > max_order or len(G.classes) != k:
            continue
        fp = group_fingerprint(G)
        if any(fp == other_fp and groups_isomorphic(G, H) is not None for other_fp, H in kept):
            log.debug("census: %s duplicates an earlier entry", G.label)
            continue
        kept.append((fp, G))
    bound = sylvester_landau_bound(k)
    for _, G in kept:
        if G.order > bound:
            log.warning("census: %s exceeds the class-count bound %d", G.label, bound)
    return [G for _, G in kept]
