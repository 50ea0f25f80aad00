from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from .cyclotomic import CyclotomicNumber
from .fusion import DimensionVector, FusionRing, canonical_form, dimension_equation_violations, validate

log = logging.getLogger(__name__)

Position = Tuple[int, int, int]

_EPS = 1e-9


class SearchSpaceExceeded(RuntimeError):
    def __init__(self, budget: int):
        self.budget = budget
        super().__init__(f"fusion rule search exceeded the node budget of {budget}")


@dataclass
class SearchStats:
    duals_tried: int = 0
    nodes: int = 0
    leaves: int = 0
    rejected_associativity: int = 0
    distinct: int = 0


def _as_dims(dims: Sequence[object]) -> DimensionVector:
    if isinstance(dims, DimensionVector):
        return dims
    return DimensionVector.of(dims)


# -----------------------------
# Row equation
# -----------------------------

class _Budget:
    def __init__(self, limit: int, stats: SearchStats):
        self.limit = limit
        self.stats = stats

    def tick(self) -> None:
        self.stats.nodes += 1
        if self.stats.nodes > self.limit:
            raise SearchSpaceExceeded(self.limit)


def _solve_weighted(
    weights: Sequence[CyclotomicNumber],
    target: CyclotomicNumber,
    bounds: Sequence[int],
    budget: Optional[_Budget] = None,
) -> List[Tuple[int, ...]]:
    """
    Non-negative integer vectors n with Σ n_i w_i = target exactly and
    n_i <= bounds[i]. Real weights prune numerically; survivors are
    verified exactly.
    """
    wf = [float(w.real_value(30)) for w in weights]
    tf = float(target.real_value(30))
    k = len(weights)
    out: List[Tuple[int, ...]] = []
    cur = [0] * k

    def rec(i: int, remaining: float) -> None:
        if budget is not None:
            budget.tick()
        if i == k:
            if abs(remaining) < _EPS:
                total = CyclotomicNumber.zero()
                for n, w in zip(cur, weights):
                    if n:
                        total = total + n * w
                if total == target:
                    out.append(tuple(cur))
            return
        if wf[i] <= _EPS:
            top = bounds[i]
        else:
            top = min(bounds[i], int((remaining + _EPS) // wf[i]))
        for v in range(0, top + 1):
            cur[i] = v
            rec(i + 1, remaining - v * wf[i])
        cur[i] = 0

    if tf >= -_EPS:
        rec(0, tf)
    return out


def row_solutions(
    dims: Sequence[object],
    target: object,
    bounds: Optional[Sequence[Optional[int]]] = None,
    fixed: Optional[Mapping[int, int]] = None,
) -> List[Tuple[int, ...]]:
    """
    All rows n (one entry per simple) with Σ_c n_c d_c = target.

    `fixed` pins entries; a missing bound defaults to floor(target / d_c).
    """
    dv = _as_dims(dims)
    tgt = target if isinstance(target, CyclotomicNumber) else CyclotomicNumber.rational(target)
    fixed = dict(fixed or {})
    r = len(dv)
    rest = tgt
    for c, v in fixed.items():
        rest = rest - v * dv[c]
    free = [c for c in range(r) if c not in fixed]
    free_bounds: List[int] = []
    for c in free:
        b = bounds[c] if bounds is not None and bounds[c] is not None else None
        cap = max((tgt / dv[c]).floor(), 0)
        free_bounds.append(cap if b is None else min(int(b), cap))
    out: List[Tuple[int, ...]] = []
    for sol in _solve_weighted([dv[c] for c in free], rest, free_bounds):
        row = [0] * r
        for c, v in fixed.items():
            row[c] = v
        for c, v in zip(free, sol):
            row[c] = v
        out.append(tuple(row))
    return sorted(out)


# -----------------------------
# Duality and entry orbits
# -----------------------------

def dual_involutions(dims: Sequence[object]) -> List[List[int]]:
    """Involutions fixing 0 that preserve dimensions, in a fixed order."""
    dv = _as_dims(dims)
    r = len(dv)
    found: List[List[int]] = []
    cur: List[Optional[int]] = [None] * r
    cur[0] = 0

    def rec(i: int) -> None:
        if i == r:
            found.append([int(x) for x in cur])  # type: ignore[arg-type]
            return
        if cur[i] is not None:
            rec(i + 1)
            return
        cur[i] = i
        rec(i + 1)
        cur[i] = None
        for j in range(i + 1, r):
            if cur[j] is None and dv[j] == dv[i]:
                cur[i], cur[j] = j, i
                rec(i + 1)
                cur[i], cur[j] = None, None

    rec(1)
    return found


def _entry_orbits(r: int, dual: Sequence[int], commutative: bool) -> Tuple[List[List[Position]], Dict[Position, int]]:
    """
    Classes of tensor positions forced equal by Frobenius reciprocity,
    duality and (optionally) commutativity.
    """
    owner: Dict[Position, int] = {}
    orbits: List[List[Position]] = []
    for pos in itertools.product(range(r), repeat=3):
        if pos in owner:
            continue
        idx = len(orbits)
        owner[pos] = idx
        members: List[Position] = []
        stack = [pos]
        while stack:
            a, b, c = stack.pop()
            members.append((a, b, c))
            moves = [(dual[c], a, dual[b]), (dual[b], dual[a], dual[c])]
            if commutative:
                moves.append((b, a, c))
            for m in moves:
                if m not in owner:
                    owner[m] = idx
                    stack.append(m)
        orbits.append(sorted(members))
    return orbits, owner


def _forced_value(pos: Position, dual: Sequence[int]) -> Optional[int]:
    a, b, c = pos
    if a == 0:
        return int(b == c)
    if b == 0:
        return int(a == c)
    if c == 0:
        return int(b == dual[a])
    return None


# -----------------------------
# Enumeration
# -----------------------------

def _entry_bound(pos: Position, dims: DimensionVector, cache: Dict[Position, int]) -> int:
    if pos not in cache:
        a, b, c = pos
        cache[pos] = min((dims[a] * dims[b] / dims[c]).floor(), dims[a].floor(), dims[b].floor())
    return cache[pos]


def _enumerate_for_dual(
    dims: DimensionVector,
    dual: List[int],
    constraints: Mapping[Position, int],
    commutative: bool,
    budget: _Budget,
    stats: SearchStats,
) -> Iterable[np.ndarray]:
    r = len(dims)
    orbits, owner = _entry_orbits(r, dual, commutative)
    value: Dict[int, int] = {}
    for idx, members in enumerate(orbits):
        forced = {v for v in (_forced_value(p, dual) for p in members) if v is not None}
        if len(forced) > 1:
            return
        if forced:
            value[idx] = forced.pop()
    for pos, v in constraints.items():
        idx = owner[tuple(pos)]  # type: ignore[index]
        if idx in value and value[idx] != v:
            return
        value[idx] = int(v)

    cache: Dict[Position, int] = {}
    bound: Dict[int, int] = {}
    for idx, members in enumerate(orbits):
        if idx not in value:
            bound[idx] = min(_entry_bound(p, dims, cache) for p in members)
    for idx, v in value.items():
        if idx in bound and v > bound[idx]:
            return

    rows = [(a, b) for a in range(1, r) for b in range(a, r)]

    def assign(ri: int, current: Dict[int, int]) -> Iterable[np.ndarray]:
        if ri == len(rows):
            stats.leaves += 1
            T = np.zeros((r, r, r), dtype=np.int64)
            for pos, idx in owner.items():
                T[pos] = current[idx]
            left = np.einsum("abe,ecd->abcd", T, T)
            right = np.einsum("bcf,afd->abcd", T, T)
            if np.array_equal(left, right):
                yield T
            else:
                stats.rejected_associativity += 1
            return
        a, b = rows[ri]
        target = dims[a] * dims[b]
        weights: Dict[int, CyclotomicNumber] = {}
        known = CyclotomicNumber.zero()
        for c in range(r):
            idx = owner[(a, b, c)]
            if idx in current:
                known = known + current[idx] * dims[c]
            else:
                weights[idx] = weights[idx] + dims[c] if idx in weights else dims[c]
        free = sorted(weights)
        sols = _solve_weighted([weights[i] for i in free], target - known, [bound[i] for i in free], budget)
        for sol in sols:
            nxt = dict(current)
            nxt.update(zip(free, sol))
            yield from assign(ri + 1, nxt)

    yield from assign(0, value)


def enumerate_fusion_rings(
    rank: int,
    dims: Sequence[object],
    constraints: Optional[Mapping[Position, int]] = None,
    *,
    dual: Optional[Sequence[int]] = None,
    node_budget: int = 2_000_000,
    commutative: bool = True,
    stats: Optional[SearchStats] = None,
) -> List[FusionRing]:
    """
    All fusion rings with the given exact dimensions and partial fusion rules.

    One representative per class under dimension-preserving relabelings that
    fix the unit, in the caller's labeling, sorted by canonical key.
    """
    dv = _as_dims(dims)
    if rank < 1:
        raise ValueError("rank must be positive")
    if len(dv) != rank:
        raise ValueError(f"expected {rank} dimensions, got {len(dv)}")
    stats = stats if stats is not None else SearchStats()
    budget = _Budget(node_budget, stats)
    constraints = dict(constraints or {})
    duals = [list(dual)] if dual is not None else dual_involutions(dv)

    found: Dict[Tuple[int, ...], FusionRing] = {}
    for d in duals:
        stats.duals_tried += 1
        for T in _enumerate_for_dual(dv, d, constraints, commutative, budget, stats):
            ring = FusionRing.from_tensor(T, d)
            key, _ = canonical_form(ring, dv)
            if key not in found:
                found[key] = ring
    stats.distinct = len(found)
    log.debug("search rank=%d dims=%s: %s", rank, dv, stats)
    return [found[k] for k in sorted(found)]


def brute_force_fusion_rings(rank: int, dims: Sequence[int]) -> List[FusionRing]:
    """
    Unpruned oracle for small integer dimensions: every ordered row is drawn
    from 0..d_a·d_b, rows are filtered by the dimension equation only, and
    whole tensors are kept when every ring axiom holds.
    """
    ints = [int(d) for d in dims]
    if len(ints) != rank or ints[0] != 1:
        raise ValueError("dims must have the given rank and start with 1")
    dv = DimensionVector.of(ints)
    pairs = [(a, b) for a in range(1, rank) for b in range(1, rank)]
    row_options: List[List[Tuple[int, ...]]] = []
    for a, b in pairs:
        cap = ints[a] * ints[b]
        opts = [
            row
            for row in itertools.product(range(cap + 1), repeat=rank)
            if sum(n * d for n, d in zip(row, ints)) == cap
        ]
        row_options.append(opts)

    found: Dict[Tuple[int, ...], FusionRing] = {}
    for choice in itertools.product(*row_options):
        T = np.zeros((rank, rank, rank), dtype=np.int64)
        for a in range(rank):
            T[0, a, a] = 1
            T[a, 0, a] = 1
        for (a, b), row in zip(pairs, choice):
            T[a, b, :] = row
        dual: List[int] = []
        for a in range(rank):
            hits = [b for b in range(rank) if T[a, b, 0] == 1]
            if len(hits) != 1:
                break
            dual.append(hits[0])
        if len(dual) != rank:
            continue
        ring = FusionRing.from_tensor(T, dual)
        if validate(ring) or dimension_equation_violations(ring, dv):
            continue
        key, _ = canonical_form(ring, dv)
        found.setdefault(key, ring)
    return [found[k] for k in sorted(found)]
