from __future__ import annotations

import itertools
import logging
import re
from functools import cached_property, lru_cache
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from sympy.combinatorics import Permutation

from .config import BUNDLED_DATA_DIR

log = logging.getLogger(__name__)

Perm = Tuple[int, ...]

CATALOG_FILE = "groups.tsv"

# Alternative names accepted by named_group().
ALIASES: Dict[str, str] = {
    "Z3:Z7": "Z7:Z3",
    "D6": "S3",
    "V4": "Z2xZ2",
    "Dic8": "Q8",
    "F20": "Z5:Z4",
    "F21": "Z7:Z3",
}

_CYCLES_RE = re.compile(r"(?:\(\)|\(\d+(?:,\d+)*\))+")
_ONE_CYCLE_RE = re.compile(r"\(([\d,]*)\)")


class CatalogParseError(ValueError):
    def __init__(self, message: str, line_no: int):
        self.line_no = line_no
        super().__init__(f"line {line_no}: {message}")


class UnknownGroupError(KeyError):
    pass


# -----------------------------
# Permutations
# -----------------------------

def parse_cycles(text: str, degree: int) -> Perm:
    """
    Parse 1-based cycle notation such as "(1,2,4,7)(3,6,8,5)"; "()" is the identity.
    """
    s = text.replace(" ", "")
    if not _CYCLES_RE.fullmatch(s):
        raise ValueError(f"malformed cycle notation: {text!r}")
    cycles: List[List[int]] = []
    seen: set = set()
    for body in _ONE_CYCLE_RE.findall(s):
        if not body:
            continue
        pts = [int(x) - 1 for x in body.split(",")]
        for x in pts:
            if x < 0 or x >= degree:
                raise ValueError(f"point {x + 1} outside 1..{degree} in {text!r}")
            if x in seen:
                raise ValueError(f"point {x + 1} repeated in {text!r}")
            seen.add(x)
        cycles.append(pts)
    return tuple(Permutation(cycles, size=degree).array_form)


def format_cycles(p: Perm) -> str:
    cyc = Permutation(list(p)).cyclic_form
    if not cyc:
        return "()"
    return "".join("(" + ",".join(str(x + 1) for x in c) + ")" for c in cyc)


def _compose(p: Perm, q: Perm) -> Perm:
    # (p∘q)(x) = p(q(x))
    return tuple(p[x] for x in q)


# -----------------------------
# FiniteGroup
# -----------------------------

class FiniteGroup:
    """
    Permutation group given by generators, with its elements enumerated.

    elements[0] is the identity; elements are listed in breadth-first order
    from the generators, so indices are stable for a fixed generator list.
    """

    def __init__(
        self,
        degree: int,
        generators: Sequence[Sequence[int]],
        name: str = "",
        *,
        max_order: int = 10000,
    ):
        if degree < 1:
            raise ValueError("degree must be positive")
        gens: List[Perm] = []
        for g in generators:
            t = tuple(int(x) for x in g)
            if sorted(t) != list(range(degree)):
                raise ValueError(f"not a permutation of degree {degree}: {list(g)}")
            gens.append(t)
        self.degree = degree
        self.generators: Tuple[Perm, ...] = tuple(gens)
        self.name = name
        self.elements, self._parents = _closure(degree, self.generators, max_order)

    @property
    def order(self) -> int:
        return len(self.elements)

    @property
    def label(self) -> str:
        return self.name or f"<order {self.order}>"

    def __repr__(self) -> str:
        return f"FiniteGroup({self.label}, order={self.order})"

    @cached_property
    def _index(self) -> Dict[Perm, int]:
        return {e: i for i, e in enumerate(self.elements)}

    def index_of(self, p: Sequence[int]) -> int:
        return self._index[tuple(p)]

    @cached_property
    def cayley(self) -> np.ndarray:
        """cayley[i, j] = index of elements[i]∘elements[j]."""
        E = np.array(self.elements, dtype=np.int64)
        n = self.order
        table = np.zeros((n, n), dtype=np.int64)
        for j in range(n):
            comp = E[:, E[j]]
            table[:, j] = [self._index[tuple(row)] for row in comp.tolist()]
        return table

    @cached_property
    def inverses(self) -> np.ndarray:
        rows, cols = np.nonzero(self.cayley == 0)
        inv = np.zeros(self.order, dtype=np.int64)
        inv[rows] = cols
        return inv

    @cached_property
    def element_orders(self) -> np.ndarray:
        orders = np.zeros(self.order, dtype=np.int64)
        for i in range(self.order):
            k, x = 1, i
            while x != 0:
                x = int(self.cayley[x, i])
                k += 1
            orders[i] = k
        return orders

    @cached_property
    def exponent(self) -> int:
        return int(np.lcm.reduce(self.element_orders))

    def is_abelian(self) -> bool:
        return bool(np.array_equal(self.cayley, self.cayley.T))

    @cached_property
    def classes(self) -> List[Tuple[int, ...]]:
        """
        Conjugacy classes as sorted element-index tuples: the identity class
        first, then by (element order, class size, smallest member).
        """
        seen = np.zeros(self.order, dtype=bool)
        inv = self.inverses
        found: List[Tuple[int, ...]] = []
        for x in range(self.order):
            if seen[x]:
                continue
            conj = self.cayley[self.cayley[:, x], inv]
            members = tuple(sorted(set(int(c) for c in conj)))
            seen[list(members)] = True
            found.append(members)
        orders = self.element_orders
        found.sort(key=lambda c: (c[0] != 0, int(orders[c[0]]), len(c), c[0]))
        return found

    @cached_property
    def class_of(self) -> np.ndarray:
        out = np.zeros(self.order, dtype=np.int64)
        for idx, members in enumerate(self.classes):
            out[list(members)] = idx
        return out

    @property
    def class_sizes(self) -> List[int]:
        return [len(c) for c in self.classes]

    @property
    def representatives(self) -> List[int]:
        return [c[0] for c in self.classes]

    def power(self, x: int, t: int) -> int:
        out = 0
        for _ in range(t % int(self.element_orders[x])):
            out = int(self.cayley[out, x])
        return out

    def generator_indices(self) -> List[int]:
        return [self._index[g] for g in self.generators]


def _closure(degree: int, gens: Sequence[Perm], max_order: int) -> Tuple[List[Perm], List[Tuple[int, int]]]:
    identity = tuple(range(degree))
    elements: List[Perm] = [identity]
    parents: List[Tuple[int, int]] = [(-1, -1)]
    index = {identity: 0}
    i = 0
    while i < len(elements):
        for gi, g in enumerate(gens):
            new = _compose(elements[i], g)
            if new not in index:
                if len(elements) >= max_order:
                    raise ValueError(f"group order exceeds the limit {max_order}")
                index[new] = len(elements)
                elements.append(new)
                parents.append((i, gi))
        i += 1
    return elements, parents


def conjugacy_class_count(G: FiniteGroup) -> int:
    return len(G.classes)


# -----------------------------
# Isomorphism
# -----------------------------

def groups_isomorphic(G: FiniteGroup, H: FiniteGroup) -> Optional[List[int]]:
    """
    An isomorphism G → H as a list of H element indices, or None.

    Generator images range over elements with matching order and class size;
    a candidate is accepted when the induced map on the breadth-first tree is
    well defined on every (element, generator) pair and bijective.
    """
    if G.order != H.order:
        return None
    if sorted(G.class_sizes) != sorted(H.class_sizes):
        return None
    if sorted(G.element_orders.tolist()) != sorted(H.element_orders.tolist()):
        return None
    gens = G.generator_indices()
    g_size = [len(c) for c in G.classes]
    h_size = [len(c) for c in H.classes]
    options: List[List[int]] = []
    for g in gens:
        want = (int(G.element_orders[g]), g_size[int(G.class_of[g])])
        options.append(
            [h for h in range(H.order) if (int(H.element_orders[h]), h_size[int(H.class_of[h])]) == want]
        )
    for images in itertools.product(*options):
        phi = _extend(G, H, images)
        if phi is not None:
            return phi
    return None


def _extend(G: FiniteGroup, H: FiniteGroup, images: Sequence[int]) -> Optional[List[int]]:
    phi = [0] * G.order
    for i in range(1, G.order):
        parent, gi = G._parents[i]
        phi[i] = int(H.cayley[phi[parent], images[gi]])
    if len(set(phi)) != G.order:
        return None
    gens = G.generator_indices()
    for i in range(G.order):
        for gi, g in enumerate(gens):
            if phi[int(G.cayley[i, g])] != int(H.cayley[phi[i], images[gi]]):
                return None
    return phi


# -----------------------------
# Catalog
# -----------------------------

def load_catalog(path: Path, *, max_order: int = 10000) -> List[FiniteGroup]:
    """
    Read `order<TAB>name<TAB>degree<TAB>gen1;gen2;...` records. Blank lines and
    lines starting with '#' are skipped; the declared order is checked
    against the generated closure.
    """
    groups: List[FiniteGroup] = []
    names: set = set()
    text = Path(path).read_text(encoding="utf-8")
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.rstrip("\r\n")
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        fields = line.split("\t")
        if len(fields) != 4:
            raise CatalogParseError(f"expected 4 tab-separated fields, got {len(fields)}", line_no)
        order_s, name, degree_s, gens_s = (f.strip() for f in fields)
        try:
            order, degree = int(order_s), int(degree_s)
        except ValueError:
            raise CatalogParseError("order and degree must be integers", line_no) from None
        if not name:
            raise CatalogParseError("empty group name", line_no)
        if name in names:
            raise CatalogParseError(f"duplicate group name {name!r}", line_no)
        if degree < 1 or order < 1:
            raise CatalogParseError("order and degree must be positive", line_no)
        try:
            gens = [parse_cycles(g, degree) for g in gens_s.split(";") if g.strip()]
        except ValueError as e:
            raise CatalogParseError(str(e), line_no) from None
        if order > max_order:
            log.debug("catalog line %d: skipping %s of order %d", line_no, name, order)
            continue
        try:
            G = FiniteGroup(degree, gens, name, max_order=order + 1)
        except ValueError as e:
            raise CatalogParseError(f"{name}: {e}", line_no) from None
        if G.order != order:
            raise CatalogParseError(f"{name}: generators give order {G.order}, declared {order}", line_no)
        names.add(name)
        groups.append(G)
    log.debug("loaded %d groups from %s", len(groups), path)
    return groups


@lru_cache(maxsize=8)
def _cached_catalog(path: str) -> Tuple[FiniteGroup, ...]:
    return tuple(load_catalog(Path(path)))


def catalog_path(data_dir: Optional[Path] = None) -> Path:
    return Path(data_dir or BUNDLED_DATA_DIR) / CATALOG_FILE


def catalog_groups(max_order: int, data_dir: Optional[Path] = None) -> List[FiniteGroup]:
    return [G for G in _cached_catalog(str(catalog_path(data_dir))) if G.order <= max_order]


def named_group(label: str, data_dir: Optional[Path] = None) -> FiniteGroup:
    key = ALIASES.get(label.strip(), label.strip())
    for G in _cached_catalog(str(catalog_path(data_dir))):
        if G.name == key:
            return G
    raise UnknownGroupError(label)


# -----------------------------
# Coverage
# -----------------------------

# Number of isomorphism types of groups of each order up to 60.
GROUP_COUNTS: Dict[int, int] = {
    1: 1, 2: 1, 3: 1, 4: 2, 5: 1, 6: 2, 7: 1, 8: 5, 9: 2, 10: 2,
    11: 1, 12: 5, 13: 1, 14: 2, 15: 1, 16: 14, 17: 1, 18: 5, 19: 1, 20: 5,
    21: 2, 22: 2, 23: 1, 24: 15, 25: 2, 26: 2, 27: 5, 28: 4, 29: 1, 30: 4,
    31: 1, 32: 51, 33: 1, 34: 2, 35: 1, 36: 14, 37: 1, 38: 2, 39: 2, 40: 14,
    41: 1, 42: 6, 43: 1, 44: 4, 45: 2, 46: 2, 47: 1, 48: 52, 49: 2, 50: 5,
    51: 1, 52: 5, 53: 1, 54: 15, 55: 2, 56: 13, 57: 2, 58: 2, 59: 1, 60: 13,
}


def group_invariant(G: FiniteGroup) -> Tuple[Tuple[int, ...], Tuple[int, ...]]:
    return tuple(sorted(G.class_sizes)), tuple(sorted(G.element_orders.tolist()))


def catalog_coverage(groups: Sequence[FiniteGroup]) -> Dict[int, Tuple[int, int]]:
    """
    Per order: (catalog groups told apart by class sizes and element orders,
    number of groups of that order). The first entry is a lower bound on the
    isomorphism types present, so equality proves the order complete.
    """
    seen: Dict[int, set] = {}
    for G in groups:
        seen.setdefault(G.order, set()).add(group_invariant(G))
    out: Dict[int, Tuple[int, int]] = {}
    for order, invariants in sorted(seen.items()):
        known = GROUP_COUNTS.get(order)
        if known is None:
            raise ValueError(f"no group count recorded for order {order}")
        if len(invariants) > known:
            raise ValueError(f"catalog tells apart {len(invariants)} groups of order {order}, only {known} exist")
        out[order] = (len(invariants), known)
    return out


def complete_orders(groups: Sequence[FiniteGroup]) -> List[int]:
    return [order for order, (found, known) in catalog_coverage(groups).items() if found == known]
