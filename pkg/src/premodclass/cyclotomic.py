from __future__ import annotations

import logging
import numbers
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

import mpmath
from sympy import QQ, ZZ, factorint, primefactors
from sympy.functions.combinatorial.numbers import legendre_symbol
from sympy.polys.densearith import dup_mul, dup_rem
from sympy.polys.densebasic import dup_convert, dup_strip
from sympy.polys.densetools import dup_clear_denoms, dup_primitive
from sympy.polys.euclidtools import dup_invert
from sympy.polys.factortools import dup_zz_cyclotomic_poly
from sympy.polys.matrices import DomainMatrix
from sympy.polys.sqfreetools import dup_sqf_part

from .arith import euler_phi
from .intpoly import IntPolynomial

log = logging.getLogger(__name__)

Coords = Tuple[Any, ...]


# -----------------------------
# Field tables (cached per conductor)
# -----------------------------

@lru_cache(maxsize=None)
def _phi_dup(n: int) -> Tuple[Any, ...]:
    """n-th cyclotomic polynomial over QQ, highest degree first."""
    return tuple(dup_convert(dup_zz_cyclotomic_poly(n, ZZ), ZZ, QQ))


@lru_cache(maxsize=None)
def _power_table(n: int) -> Tuple[Coords, ...]:
    """
    Coordinates of ζₙ^k (k = 0..n-1) in the power basis 1, ζₙ, ..., ζₙ^(φ(n)-1).
    """
    size = euler_phi(n)
    # x^size = -(a_0 + a_1 x + ... + a_{size-1} x^{size-1}) for monic Φₙ
    low = list(reversed(_phi_dup(n)))[:size]
    cur = [QQ.zero] * size
    cur[0] = QQ.one
    rows: List[Coords] = []
    for _ in range(n):
        rows.append(tuple(cur))
        top = cur[-1]
        nxt = [QQ.zero] + cur[:-1]
        if top:
            nxt = [nxt[i] - top * low[i] for i in range(size)]
        cur = nxt
    return tuple(rows)


@lru_cache(maxsize=None)
def _descent(n: int, p: int) -> Tuple[Tuple[int, ...], Tuple[Coords, ...], Tuple[Coords, ...]]:
    """
    Embedding of Q(ζ_{n/p}) into Q(ζₙ) plus a left inverse.

    Returns (pivot rows, left-inverse rows, embedding columns).
    """
    m = n // p
    table = _power_table(n)
    cols = tuple(table[(p * j) % n] for j in range(euler_phi(m)))
    size_n, size_m = euler_phi(n), euler_phi(m)
    emb = DomainMatrix([[cols[j][i] for j in range(size_m)] for i in range(size_n)], (size_n, size_m), QQ)
    _, pivots = emb.transpose().rref()
    square = emb.extract(list(pivots), list(range(size_m)))
    inv_rows = tuple(tuple(row) for row in square.inv().to_list())
    return tuple(pivots), inv_rows, cols


def _try_descend(n: int, p: int, coords: Coords) -> Optional[Coords]:
    pivots, inv_rows, cols = _descent(n, p)
    picked = [coords[i] for i in pivots]
    y = tuple(sum((r * v for r, v in zip(row, picked)), QQ.zero) for row in inv_rows)
    back = [QQ.zero] * len(coords)
    for j, yj in enumerate(y):
        if yj:
            col = cols[j]
            for i in range(len(back)):
                back[i] += yj * col[i]
    if tuple(back) != tuple(coords):
        return None
    return y


def _normalize(n: int, coords: Coords) -> Tuple[int, Coords]:
    """
    Push an element down to its minimal conductor.

    If x lies in Q(ζₖ) with k a proper divisor of n, some prime p | n has k | n/p,
    so greedy single-prime descent reaches the minimal field.
    """
    coords = tuple(coords)
    changed = True
    while n > 1 and changed:
        changed = False
        for p in primefactors(n):
            y = _try_descend(n, p, coords)
            if y is not None:
                n, coords = n // p, y
                changed = True
                break
    return n, coords


def _lift(n: int, coords: Coords, m: int) -> List[Any]:
    if m == n:
        return list(coords)
    table = _power_table(m)
    step = m // n
    out = [QQ.zero] * euler_phi(m)
    for j, c in enumerate(coords):
        if c:
            row = table[(j * step) % m]
            for i, v in enumerate(row):
                if v:
                    out[i] += c * v
    return out


def _to_dup(coords: Sequence[Any]) -> List[Any]:
    return dup_strip(list(reversed(coords)))


def _from_dup(f: Sequence[Any], size: int) -> Coords:
    asc = list(reversed(list(f)))
    asc += [QQ.zero] * (size - len(asc))
    return tuple(asc[:size])


def _qq(value: Any) -> Any:
    if isinstance(value, bool):
        raise TypeError("bool is not a scalar")
    if isinstance(value, str):
        value = Fraction(value.strip())
    if isinstance(value, numbers.Integral):
        return QQ(int(value))
    if isinstance(value, numbers.Rational):
        return QQ(int(value.numerator), int(value.denominator))
    return QQ.convert(value)


def _fraction(c: Any) -> Fraction:
    return Fraction(int(QQ.numer(c)), int(QQ.denom(c)))


def _lcm(a: int, b: int) -> int:
    return a * b // gcd(a, b)


# -----------------------------
# CyclotomicNumber
# -----------------------------

Scalar = Union[int, Fraction, "CyclotomicNumber"]


class CyclotomicNumber:
    """
    Exact element of a cyclotomic field Q(ζₙ).

    Stored in the power basis modulo Φₙ at the minimal conductor, so two
    elements are equal exactly when (conductor, coords) agree. The numeric
    embedding is the principal one, ζₙ ↦ exp(2πi/n).
    """

    __slots__ = ("_n", "_c")

    def __init__(self, conductor: int, coeffs: Sequence[Any]):
        n = int(conductor)
        if n < 1:
            raise ValueError(f"conductor must be >= 1, got {n}")
        size = euler_phi(n)
        if len(coeffs) != size:
            raise ValueError(f"conductor {n} needs {size} coordinates, got {len(coeffs)}")
        self._n, self._c = _normalize(n, tuple(_qq(c) for c in coeffs))

    @classmethod
    def _make(cls, n: int, coords: Sequence[Any]) -> CyclotomicNumber:
        obj = cls.__new__(cls)
        obj._n, obj._c = _normalize(n, tuple(coords))
        return obj

    @classmethod
    def rational(cls, value: Union[int, Fraction, str]) -> CyclotomicNumber:
        return cls._make(1, (_qq(value),))

    @classmethod
    def zero(cls) -> CyclotomicNumber:
        return cls.rational(0)

    @classmethod
    def one(cls) -> CyclotomicNumber:
        return cls.rational(1)

    # -- accessors --

    @property
    def conductor(self) -> int:
        return self._n

    @property
    def coeffs(self) -> Tuple[Fraction, ...]:
        return tuple(_fraction(c) for c in self._c)

    def is_zero(self) -> bool:
        return not any(self._c)

    def is_rational(self) -> bool:
        return self._n == 1

    def as_fraction(self) -> Fraction:
        if self._n != 1:
            raise ValueError(f"{self} is not rational")
        return _fraction(self._c[0])

    as_rational = as_fraction

    def is_rational_integer(self) -> bool:
        return self._n == 1 and self.as_fraction().denominator == 1

    def is_real(self) -> bool:
        return self == self.conj()

    # -- arithmetic --

    @staticmethod
    def _coerce(other: Any) -> Optional[CyclotomicNumber]:
        if isinstance(other, CyclotomicNumber):
            return other
        if isinstance(other, numbers.Rational) and not isinstance(other, bool):
            return CyclotomicNumber.rational(other)
        return None

    def _binary_lift(self, other: CyclotomicNumber) -> Tuple[int, List[Any], List[Any]]:
        m = _lcm(self._n, other._n)
        return m, _lift(self._n, self._c, m), _lift(other._n, other._c, m)

    def __add__(self, other: Any) -> CyclotomicNumber:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        m, a, b = self._binary_lift(o)
        return CyclotomicNumber._make(m, [x + y for x, y in zip(a, b)])

    __radd__ = __add__

    def __neg__(self) -> CyclotomicNumber:
        return CyclotomicNumber._make(self._n, [-c for c in self._c])

    def __sub__(self, other: Any) -> CyclotomicNumber:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other: Any) -> CyclotomicNumber:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other: Any) -> CyclotomicNumber:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if o._n == 1:
            return CyclotomicNumber._make(self._n, [c * o._c[0] for c in self._c])
        if self._n == 1:
            return CyclotomicNumber._make(o._n, [c * self._c[0] for c in o._c])
        m, a, b = self._binary_lift(o)
        prod = dup_rem(dup_mul(_to_dup(a), _to_dup(b), QQ), list(_phi_dup(m)), QQ)
        return CyclotomicNumber._make(m, _from_dup(prod, euler_phi(m)))

    __rmul__ = __mul__

    def inverse(self) -> CyclotomicNumber:
        if self.is_zero():
            raise ZeroDivisionError("division by zero in a cyclotomic field")
        if self._n == 1:
            return CyclotomicNumber._make(1, (QQ.one / self._c[0],))
        inv = dup_invert(_to_dup(self._c), list(_phi_dup(self._n)), QQ)
        return CyclotomicNumber._make(self._n, _from_dup(inv, euler_phi(self._n)))

    def __truediv__(self, other: Any) -> CyclotomicNumber:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other: Any) -> CyclotomicNumber:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, e: int) -> CyclotomicNumber:
        if e < 0:
            return self.inverse() ** (-e)
        out = CyclotomicNumber.one()
        base = self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    # -- Galois action --

    def galois(self, a: int) -> CyclotomicNumber:
        """σ_a : ζₙ ↦ ζₙ^a, a coprime to the conductor."""
        n = self._n
        if gcd(a, n) != 1:
            raise ValueError(f"{a} is not a unit modulo {n}")
        table = _power_table(n)
        out = [QQ.zero] * len(self._c)
        for j, c in enumerate(self._c):
            if c:
                row = table[(a * j) % n]
                for i, v in enumerate(row):
                    if v:
                        out[i] += c * v
        return CyclotomicNumber._make(n, out)

    def conj(self) -> CyclotomicNumber:
        return self.galois(-1)

    def galois_conjugates(self) -> List[CyclotomicNumber]:
        n = self._n
        return [self.galois(j) for j in range(1, n + 1) if gcd(j, n) == 1]

    # -- minimal polynomial --

    def minimal_polynomial(self) -> IntPolynomial:
        """
        Minimal polynomial over Q, cleared to integer coefficients with
        content 1 and positive leading coefficient.
        """
        if self._n == 1:
            f = self.as_fraction()
            return IntPolynomial((f.denominator, -f.numerator))
        n, size = self._n, len(self._c)
        table = _power_table(n)
        cols: List[List[Any]] = []
        for j in range(size):
            col = [QQ.zero] * size
            for i, c in enumerate(self._c):
                if c:
                    row = table[(i + j) % n]
                    for r, v in enumerate(row):
                        if v:
                            col[r] += c * v
            cols.append(col)
        mult = DomainMatrix([[cols[j][i] for j in range(size)] for i in range(size)], (size, size), QQ)
        charpoly = mult.charpoly()
        sqf = dup_sqf_part(dup_strip(list(charpoly)), QQ)
        _, ints = dup_clear_denoms(sqf, QQ, ZZ, convert=True)
        _, prim = dup_primitive(ints, ZZ)
        return IntPolynomial.from_dup(prim).primitive()

    def is_algebraic_integer(self) -> bool:
        return self.minimal_polynomial().leading == 1

    # -- numerics --

    def to_complex(self, dps: int = 30) -> mpmath.mpc:
        with mpmath.workdps(dps + 10):
            total = mpmath.mpc(0)
            for j, c in enumerate(self._c):
                if c:
                    f = _fraction(c)
                    total += mpmath.mpf(f.numerator) / f.denominator * mpmath.expjpi(mpmath.mpf(2 * j) / self._n)
        return +total

    def real_value(self, dps: int = 30) -> mpmath.mpf:
        return self.to_complex(dps).real

    def is_positive(self) -> bool:
        """
        Sign of a real element. Zero is decided exactly; a nonzero value is
        compared at 60 digits.
        """
        if self.is_zero():
            return False
        if self._n == 1:
            return self.as_fraction() > 0
        if not self.is_real():
            raise ValueError(f"{self} is not real")
        return self.real_value(60) > 0

    def floor(self) -> int:
        """Floor of a real element under the principal embedding."""
        if self._n == 1:
            f = self.as_fraction()
            return f.numerator // f.denominator
        if not self.is_real():
            raise ValueError(f"{self} is not real")
        # irrational reals are never integers, so 60 digits settle the floor
        return int(mpmath.floor(self.real_value(60)))

    # -- identity --

    def __eq__(self, other: Any) -> bool:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self._n == o._n and self._c == o._c

    def __hash__(self) -> int:
        return hash((self._n, tuple(_fraction(c) for c in self._c)))

    def __bool__(self) -> bool:
        return not self.is_zero()

    def __repr__(self) -> str:
        return f"CyclotomicNumber({self._n}, {[str(f) for f in self.coeffs]})"

    def __str__(self) -> str:
        if self._n == 1:
            return str(self.as_fraction())
        terms: List[str] = []
        for j, f in enumerate(self.coeffs):
            if f == 0:
                continue
            base = "1" if j == 0 else (f"z{self._n}" if j == 1 else f"z{self._n}^{j}")
            if j == 0:
                terms.append(str(f))
            elif f == 1:
                terms.append(base)
            elif f == -1:
                terms.append(f"-{base}")
            else:
                terms.append(f"{f}*{base}")
        return " + ".join(terms).replace("+ -", "- ")

    # -- serialization --

    def to_compact(self) -> Dict[str, Any]:
        return {"conductor": self._n, "coeffs": [str(f) for f in self.coeffs]}

    @classmethod
    def from_compact(cls, data: Any) -> CyclotomicNumber:
        if isinstance(data, (int, str)) and not isinstance(data, bool):
            return cls.rational(data)
        if not isinstance(data, dict) or set(data) != {"conductor", "coeffs"}:
            raise ValueError(f"expected {{'conductor', 'coeffs'}}, got {data!r}")
        return cls(int(data["conductor"]), [Fraction(str(c)) for c in data["coeffs"]])


# -----------------------------
# Named constructors
# -----------------------------

def zeta(n: int, k: int = 1) -> CyclotomicNumber:
    if n < 1:
        raise ValueError(f"order must be >= 1, got {n}")
    return CyclotomicNumber._make(n, _power_table(n)[k % n])


def from_root_multiplicities(n: int, counts: Sequence[int]) -> CyclotomicNumber:
    """Σ counts[l]·ζₙˡ, e.g. a character value from its eigenvalue multiplicities."""
    table = _power_table(n)
    acc = [QQ.zero] * euler_phi(n)
    for exp, m in enumerate(counts):
        if m:
            for i, v in enumerate(table[exp % n]):
                if v:
                    acc[i] += int(m) * v
    return CyclotomicNumber._make(n, acc)


def sqrt5() -> CyclotomicNumber:
    return zeta(5, 1) - zeta(5, 2) - zeta(5, 3) + zeta(5, 4)


def sqrt3() -> CyclotomicNumber:
    return zeta(12, 1) + zeta(12, 11)


def golden_ratio() -> CyclotomicNumber:
    return (1 + sqrt5()) / 2


def _sqrt_prime(p: int) -> CyclotomicNumber:
    if p == 2:
        return zeta(8, 1) + zeta(8, 7)
    gauss = CyclotomicNumber.zero()
    for k in range(1, p):
        gauss = gauss + int(legendre_symbol(k, p)) * zeta(p, k)
    if p % 4 == 1:
        return gauss
    # the Gauss sum is i·√p here
    return -(zeta(4, 1) * gauss)


def sqrt_int(m: int) -> CyclotomicNumber:
    """
    Positive square root of m (i·√|m| for m < 0) as a cyclotomic number.
    """
    if m == 0:
        return CyclotomicNumber.zero()
    if m < 0:
        return zeta(4, 1) * sqrt_int(-m)
    outer = 1
    result = CyclotomicNumber.one()
    for p, e in sorted(factorint(m).items()):
        outer *= p ** (e // 2)
        if e % 2:
            result = result * _sqrt_prime(p)
    return result * outer


def two_cos(m: int, k: int = 1) -> CyclotomicNumber:
    """2·cos(2πk/m) = ζₘ^k + ζₘ^-k."""
    return zeta(m, k) + zeta(m, -k)


_FACTOR_RE = re.compile(r"^(?P<base>phi|sqrt\((?P<sq>-?\d+)\)|2cos\((?P<ck>\d+)/(?P<cm>\d+)\)|-?\d+(?:/\d+)?)(?:\^(?P<exp>\d+))?$")


def parse_dimension(text: str) -> CyclotomicNumber:
    """
    Parse a product of factors such as "2*phi", "phi^2", "sqrt(3)",
    "2cos(1/7)" (= 2cos(2π/7)) or "3/2".
    """
    value = CyclotomicNumber.one()
    for raw in text.replace(" ", "").split("*"):
        m = _FACTOR_RE.match(raw)
        if not m:
            raise ValueError(f"cannot parse dimension factor {raw!r} in {text!r}")
        base = m.group("base")
        if base == "phi":
            factor = golden_ratio()
        elif m.group("sq") is not None:
            factor = sqrt_int(int(m.group("sq")))
        elif m.group("cm") is not None:
            factor = two_cos(int(m.group("cm")), int(m.group("ck")))
        else:
            factor = CyclotomicNumber.rational(Fraction(base))
        value = value * factor ** int(m.group("exp") or 1)
    return value


# -----------------------------
# RootOfUnity
# -----------------------------

@dataclass(frozen=True)
class RootOfUnity:
    """
    exp(2πi·k/n) in reduced form; n is the multiplicative order.
    """

    k: int
    n: int = 1

    def __post_init__(self) -> None:
        n = int(self.n)
        if n < 1:
            raise ValueError(f"order must be >= 1, got {n}")
        k = int(self.k) % n
        g = gcd(k, n)
        object.__setattr__(self, "k", k // g)
        object.__setattr__(self, "n", n // g)

    @property
    def order(self) -> int:
        return self.n

    @classmethod
    def one(cls) -> RootOfUnity:
        return cls(0, 1)

    def __mul__(self, other: RootOfUnity) -> RootOfUnity:
        if not isinstance(other, RootOfUnity):
            return NotImplemented
        return RootOfUnity(self.k * other.n + other.k * self.n, self.n * other.n)

    def inverse(self) -> RootOfUnity:
        return RootOfUnity(-self.k, self.n)

    def conj(self) -> RootOfUnity:
        return self.inverse()

    def __pow__(self, e: int) -> RootOfUnity:
        return RootOfUnity(self.k * e, self.n)

    def to_cyclotomic(self) -> CyclotomicNumber:
        return zeta(self.n, self.k)

    def __str__(self) -> str:
        if self.n == 1:
            return "1"
        if self.n == 2:
            return "-1"
        return f"e({self.k}/{self.n})"

    def to_compact(self) -> Dict[str, int]:
        return {"k": self.k, "n": self.n}

    @classmethod
    def from_compact(cls, data: Dict[str, Any]) -> RootOfUnity:
        if not isinstance(data, dict) or set(data) != {"k", "n"}:
            raise ValueError(f"expected {{'k', 'n'}}, got {data!r}")
        return cls(int(data["k"]), int(data["n"]))
