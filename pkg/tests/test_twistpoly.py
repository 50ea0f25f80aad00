from __future__ import annotations

import pytest

from premodclass.cyclotomic import RootOfUnity, sqrt5, zeta
from premodclass.intpoly import IntPolynomial
from premodclass.twistpoly import TwistPolynomial, TwistSymbol, root_of_unity_solutions


def test_root_of_unity_solutions_examples():
    assert root_of_unity_solutions(IntPolynomial((1, 5, 1))) == []
    assert root_of_unity_solutions(IntPolynomial((1, 0, -1))) == [RootOfUnity(0, 1), RootOfUnity(1, 2)]
    assert root_of_unity_solutions(IntPolynomial((1, 1, 1))) == [RootOfUnity(1, 3), RootOfUnity(2, 3)]
    assert root_of_unity_solutions(IntPolynomial((7,))) == []
    with pytest.raises(ValueError):
        root_of_unity_solutions(IntPolynomial(()))


def test_conjugation_inverts_symbols():
    t = TwistPolynomial.symbol("t")
    p = 3 * t * t + zeta(3) * t
    q = p.conj()
    assert q == 3 * TwistPolynomial.symbol("t", -2) + zeta(3, 2) * TwistPolynomial.symbol("t", -1)


def test_laurent_shift_is_cleared():
    t = TwistPolynomial.symbol("t")
    p = t + 5 + TwistPolynomial.symbol("t", -1)
    assert p.to_int_polynomial("t") == IntPolynomial((1, 5, 1))


def test_irrational_coefficients_multiply_out():
    t = TwistPolynomial.symbol("t")
    p = t - sqrt5()
    assert p.to_int_polynomial("t") == IntPolynomial((1, 0, -5))


def test_substitute_and_evaluate():
    t = TwistPolynomial.symbol("t")
    p = t * t + 1
    assert p.evaluate({"t": RootOfUnity(1, 4)}) == 0
    assert p.substitute("t", RootOfUnity(1, 2)).constant_value() == 2


def test_twist_symbol_with_multiplier():
    sym = TwistSymbol("t", RootOfUnity(1, 2))
    p = TwistPolynomial.of_twist(sym)
    assert p.evaluate({"t": RootOfUnity(0, 1)}) == -1
    assert TwistPolynomial.of_twist(RootOfUnity(1, 4), 2).constant_value() == -1


def test_to_int_polynomial_rejects_other_symbols():
    p = TwistPolynomial.symbol("a") + TwistPolynomial.symbol("b")
    with pytest.raises(ValueError):
        p.to_int_polynomial("a")
