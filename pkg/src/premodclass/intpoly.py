from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Dict, Sequence, Tuple

from sympy import ZZ, Poly, Symbol
from sympy.polys.densearith import dup_mul, dup_rem
from sympy.polys.densebasic import dup_strip
from sympy.polys.densetools import dup_primitive
from sympy.polys.sqfreetools import dup_sqf_part


@dataclass(frozen=True)
class IntPolynomial:
    """
    Integer polynomial, coefficients stored highest degree first.

    The zero polynomial has no coefficients and degree -1.
    """

    coeffs: Tuple[int, ...]

    def __post_init__(self) -> None:
        cs = [int(c) for c in self.coeffs]
        while cs and cs[0] == 0:
            cs.pop(0)
        object.__setattr__(self, "coeffs", tuple(cs))

    @classmethod
    def from_ascending(cls, coeffs: Sequence[int]) -> IntPolynomial:
        return cls(tuple(reversed([int(c) for c in coeffs])))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def leading(self) -> int:
        return self.coeffs[0] if self.coeffs else 0

    @property
    def is_monic(self) -> bool:
        return self.leading == 1

    def ascending(self) -> Tuple[int, ...]:
        return tuple(reversed(self.coeffs))

    def to_dup(self) -> list:
        return [ZZ(c) for c in self.coeffs]

    @classmethod
    def from_dup(cls, f: Sequence[Any]) -> IntPolynomial:
        return cls(tuple(int(c) for c in dup_strip(list(f))))

    def evaluate(self, x: Any) -> Any:
        acc: Any = 0
        for c in self.coeffs:
            acc = acc * x + c
        return acc

    def primitive(self) -> IntPolynomial:
        """
        Content 1 with a positive leading coefficient.
        """
        if self.is_zero:
            return self
        _, prim = dup_primitive(self.to_dup(), ZZ)
        out = IntPolynomial.from_dup(prim)
        if out.leading < 0:
            out = IntPolynomial(tuple(-c for c in out.coeffs))
        return out

    def squarefree_part(self) -> IntPolynomial:
        if self.is_zero:
            return self
        return IntPolynomial.from_dup(dup_sqf_part(self.to_dup(), ZZ)).primitive()

    def divides(self, other: IntPolynomial) -> bool:
        """
        True when self | other over ZZ; self must be monic.
        """
        if not self.is_monic:
            raise ValueError("divisibility test needs a monic divisor")
        return not dup_strip(dup_rem(other.to_dup(), self.to_dup(), ZZ))

    def __mul__(self, other: IntPolynomial) -> IntPolynomial:
        return IntPolynomial.from_dup(dup_mul(self.to_dup(), other.to_dup(), ZZ))

    def __str__(self) -> str:
        if self.is_zero:
            return "0"
        return str(Poly(list(self.coeffs), Symbol("x")).as_expr())

    def to_compact(self) -> Dict[str, Any]:
        return {"coeffs": list(self.coeffs), "degree": self.degree, "text": str(self)}

    @classmethod
    def from_compact(cls, data: Dict[str, Any]) -> IntPolynomial:
        return cls(tuple(int(c) for c in data["coeffs"]))
