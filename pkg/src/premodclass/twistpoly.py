from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, lcm
from typing import Any, Dict, Iterable, List, Mapping, Optional, Set, Tuple, Union

from sympy import ZZ
from sympy.polys.factortools import dup_zz_cyclotomic_poly

from .arith import roots_of_unity_with_degree_at_most
from .cyclotomic import CyclotomicNumber, RootOfUnity
from .intpoly import IntPolynomial

Monomial = Tuple[Tuple[str, int], ...]


@dataclass(frozen=True)
class TwistSymbol:
    """An unknown twist, optionally scaled by a known root of unity."""

    name: str
    multiplier: RootOfUnity = field(default_factory=RootOfUnity.one)

    def __str__(self) -> str:
        if self.multiplier.n == 1:
            return self.name
        return f"{self.multiplier}*{self.name}"


TwistValue = Union[RootOfUnity, TwistSymbol]


def _canon(mono: Iterable[Tuple[str, int]]) -> Monomial:
    acc: Dict[str, int] = {}
    for name, e in mono:
        acc[name] = acc.get(name, 0) + int(e)
    return tuple(sorted((k, v) for k, v in acc.items() if v != 0))


def _mono_mul(a: Monomial, b: Monomial) -> Monomial:
    return _canon(a + b)


class TwistPolynomial:
    """
    Laurent polynomial in named twist symbols with cyclotomic coefficients.

    Every symbol stands for a root of unity, so complex conjugation sends
    θ to θ⁻¹ and conjugates the coefficients.
    """

    __slots__ = ("_terms",)

    def __init__(self, terms: Optional[Mapping[Monomial, Any]] = None):
        clean: Dict[Monomial, CyclotomicNumber] = {}
        for mono, c in (terms or {}).items():
            key = _canon(mono)
            value = c if isinstance(c, CyclotomicNumber) else CyclotomicNumber.rational(c)
            clean[key] = clean[key] + value if key in clean else value
        self._terms: Dict[Monomial, CyclotomicNumber] = {
            k: v for k, v in clean.items() if not v.is_zero()
        }

    # -- constructors --

    @classmethod
    def constant(cls, c: Any) -> TwistPolynomial:
        return cls({(): c})

    @classmethod
    def symbol(cls, name: str, power: int = 1) -> TwistPolynomial:
        return cls({((name, power),): 1})

    @classmethod
    def of_twist(cls, value: TwistValue, power: int = 1) -> TwistPolynomial:
        if isinstance(value, RootOfUnity):
            return cls.constant((value**power).to_cyclotomic())
        return cls({((value.name, power),): (value.multiplier**power).to_cyclotomic()})

    # -- inspection --

    @property
    def terms(self) -> Dict[Monomial, CyclotomicNumber]:
        return dict(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def symbols(self) -> Set[str]:
        return {name for mono in self._terms for name, _ in mono}

    def is_constant(self) -> bool:
        return all(mono == () for mono in self._terms)

    def constant_value(self) -> CyclotomicNumber:
        if not self.is_constant():
            raise ValueError(f"{self} depends on {sorted(self.symbols())}")
        return self._terms.get((), CyclotomicNumber.zero())

    def coefficient_bound(self) -> Fraction:
        """
        Upper bound for |p| at any point where every symbol has modulus 1.
        """
        total = Fraction(0)
        for c in self._terms.values():
            total += sum((abs(f) for f in c.coeffs), Fraction(0))
        return total

    # -- arithmetic --

    @staticmethod
    def _coerce(other: Any) -> Optional[TwistPolynomial]:
        if isinstance(other, TwistPolynomial):
            return other
        if isinstance(other, (int, Fraction, CyclotomicNumber)) and not isinstance(other, bool):
            return TwistPolynomial.constant(other)
        return None

    def __add__(self, other: Any) -> TwistPolynomial:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        merged: Dict[Monomial, CyclotomicNumber] = dict(self._terms)
        for k, v in o._terms.items():
            merged[k] = merged[k] + v if k in merged else v
        return TwistPolynomial(merged)

    __radd__ = __add__

    def __neg__(self) -> TwistPolynomial:
        return TwistPolynomial({k: -v for k, v in self._terms.items()})

    def __sub__(self, other: Any) -> TwistPolynomial:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other: Any) -> TwistPolynomial:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other: Any) -> TwistPolynomial:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        out: Dict[Monomial, CyclotomicNumber] = {}
        for ka, va in self._terms.items():
            for kb, vb in o._terms.items():
                key = _mono_mul(ka, kb)
                prod = va * vb
                out[key] = out[key] + prod if key in out else prod
        return TwistPolynomial(out)

    __rmul__ = __mul__

    def __truediv__(self, other: Any) -> TwistPolynomial:
        if isinstance(other, TwistPolynomial):
            if len(other._terms) != 1:
                raise ValueError("only division by a single term is supported")
            ((mono, c),) = other._terms.items()
            inv = TwistPolynomial({tuple((n, -e) for n, e in mono): c.inverse()})
            return self * inv
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.constant_value().inverse()

    def conj(self) -> TwistPolynomial:
        return TwistPolynomial(
            {tuple((n, -e) for n, e in mono): c.conj() for mono, c in self._terms.items()}
        )

    def __eq__(self, other: Any) -> bool:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return (self - o).is_zero()

    def __hash__(self) -> int:
        return hash(tuple(sorted((k, v) for k, v in self._terms.items())))

    # -- evaluation --

    def substitute(self, name: str, value: RootOfUnity) -> TwistPolynomial:
        out: Dict[Monomial, CyclotomicNumber] = {}
        for mono, c in self._terms.items():
            rest = tuple((n, e) for n, e in mono if n != name)
            power = sum(e for n, e in mono if n == name)
            factor = (value**power).to_cyclotomic() if power else CyclotomicNumber.one()
            out[rest] = out[rest] + c * factor if rest in out else c * factor
        return TwistPolynomial(out)

    def evaluate(self, values: Mapping[str, RootOfUnity]) -> CyclotomicNumber:
        p = self
        for name, value in values.items():
            p = p.substitute(name, value)
        return p.constant_value()

    def to_int_polynomial(self, name: str) -> IntPolynomial:
        """
        Integer polynomial in `name` vanishing at every root of this one.

        The Laurent shift is cleared; irrational coefficients are removed by
        multiplying over the distinct Galois conjugates of the coefficient vector.
        """
        extra = self.symbols() - {name}
        if extra:
            raise ValueError(f"still depends on {sorted(extra)}")
        if self.is_zero():
            return IntPolynomial(())
        exps = [sum(e for _, e in mono) for mono in self._terms]
        lo = min(exps)
        coeffs = [CyclotomicNumber.zero()] * (max(exps) - lo + 1)
        for mono, c in self._terms.items():
            coeffs[sum(e for _, e in mono) - lo] = c

        conductor = 1
        for c in coeffs:
            conductor = lcm(conductor, c.conductor)
        product = coeffs
        if conductor > 1:
            seen = {tuple(coeffs)}
            for j in range(2, conductor):
                if gcd(j, conductor) != 1:
                    continue
                conj = tuple(c.galois(j) for c in coeffs)
                if conj in seen:
                    continue
                seen.add(conj)
                product = _convolve(product, list(conj))

        fractions = [c.as_fraction() for c in product]
        denom = 1
        for f in fractions:
            denom = lcm(denom, f.denominator)
        ints = [int(f * denom) for f in fractions]
        return IntPolynomial.from_ascending(ints).primitive()

    # -- display --

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        parts: List[str] = []
        for mono, c in sorted(self._terms.items()):
            sym = "*".join(n if e == 1 else f"{n}^{e}" for n, e in mono)
            if not sym:
                parts.append(f"({c})")
            else:
                parts.append(f"({c})*{sym}")
        return " + ".join(parts)

    def __repr__(self) -> str:
        return f"TwistPolynomial({self})"


def _convolve(a: List[CyclotomicNumber], b: List[CyclotomicNumber]) -> List[CyclotomicNumber]:
    out = [CyclotomicNumber.zero()] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x.is_zero():
            continue
        for j, y in enumerate(b):
            if not y.is_zero():
                out[i + j] = out[i + j] + x * y
    return out


# -----------------------------
# Roots of unity of integer polynomials
# -----------------------------

def root_of_unity_solutions(p: IntPolynomial) -> List[RootOfUnity]:
    """
    Every root of unity among the roots of p, sorted by (order, k).

    Only orders n with φ(n) <= deg p can occur; each is settled by testing
    divisibility by Φₙ.
    """
    if p.is_zero:
        raise ValueError("the zero polynomial has every root of unity as a root")
    if p.degree < 1:
        return []
    out: List[RootOfUnity] = []
    for n in roots_of_unity_with_degree_at_most(p.degree):
        phi_n = IntPolynomial.from_dup(dup_zz_cyclotomic_poly(n, ZZ))
        if phi_n.divides(p):
            out.extend(RootOfUnity(k, n) for k in range(n) if gcd(k, n) == 1)
    return out
