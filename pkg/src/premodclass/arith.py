from __future__ import annotations

from functools import lru_cache
from typing import List

from sympy import totient


@lru_cache(maxsize=None)
def euler_phi(n: int) -> int:
    if n < 1:
        raise ValueError(f"euler_phi needs n >= 1, got {n}")
    return int(totient(n))


def roots_of_unity_with_degree_at_most(bound: int) -> List[int]:
    """
    All orders n whose primitive n-th roots of unity have degree φ(n) <= bound.

    φ(n) >= sqrt(n / 2) for every n, so scanning n <= 2·bound² is complete.
    """
    if bound < 1:
        raise ValueError(f"bound must be >= 1, got {bound}")
    limit = 2 * bound * bound + 2
    return [n for n in range(1, limit + 1) if euler_phi(n) <= bound]


def cyclotomic_degree_bound(card_D: int, quadratic_with_unit_ratio: bool) -> int:
    """
    Degree bound on a twist constrained by |D| quadratic relations.

    The unit-ratio quadratic case doubles the bound.
    """
    if card_D < 0:
        raise ValueError("card_D must be non-negative")
    return 2 ** (card_D + 1) if quadratic_with_unit_ratio else 2**card_D


def sylvester_landau_bound(k: int) -> int:
    """
    Bound on |G| for a group with k conjugacy classes: a_1 = 1, a_{j+1} = a_j (a_j + 1).
    """
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    a = 1
    for _ in range(k - 1):
        a = a * (a + 1)
    return a
