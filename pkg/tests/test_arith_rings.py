from fractions import Fraction

import pytest
import sympy
from hypothesis import given, strategies as st

from adelia.arith import Poly, RatFunc, parse_poly, poly_base, prime_part, valuation, IntegerBase
from adelia.errors import (BadPrime, DuplicatePrime, EmptyPrimeSet, NotIrreducible,
                           ZeroElement)
from adelia.rings import (FiniteProduct, FractionField, Integers, IntegersModN,
                          LocalFractionModel, PolyOverPrimeField, RingElement, SemilocalPID,
                          TruncatedCompletion, integers_localized, poly_localized)


def t5():
    return Poly.t(5)


def test_poly_arithmetic_and_repr():
    t = t5()
    f = t * t + 4 * t + 1
    assert repr(f) == "t^2+4t+1"
    q, r = divmod(f, t + 1)
    assert q * (t + 1) + r == f
    assert parse_poly("t^2+4t+1", 5) == f
    assert parse_poly("t-1", 5) == t + 4


def test_valuation_examples():
    t = t5()
    x = RatFunc(t * t + t, t ** 3)
    assert valuation(x, t) == -2
    assert valuation(Fraction(4, 3), 2) == 2
    assert valuation(Fraction(4, 3), 3) == -1
    with pytest.raises(ZeroElement):
        valuation(Fraction(0), 2)


@given(st.integers(1, 10 ** 6), st.integers(1, 10 ** 6))
def test_valuation_matches_sympy(a, b):
    x = Fraction(a, b)
    for q in (2, 3, 5, 7):
        expected = sympy.multiplicity(q, a) - sympy.multiplicity(q, b)
        assert valuation(x, q) == expected


@given(st.integers(-10 ** 4, 10 ** 4).filter(bool), st.integers(-10 ** 4, 10 ** 4).filter(bool))
def test_valuation_is_additive(a, b):
    for q in (2, 3):
        assert valuation(Fraction(a) * b, q) == valuation(Fraction(a), q) + valuation(Fraction(b), q)


def test_prime_part():
    assert prime_part(360, (2, 3)) == 72
    t = t5()
    assert prime_part(t * t * (t + 2), (t,)) == t * t


def test_poly_primes_are_monic_irreducible_in_degree_order():
    eb = poly_base(3)
    ps = []
    for q in eb.primes():
        ps.append(q)
        if len(ps) == 8:
            break
    degrees = [q.degree for q in ps]
    assert degrees == sorted(degrees)
    assert all(q.lc == 1 and eb.is_irreducible(q) for q in ps)
    # three monic linear polynomials over F_3
    assert degrees.count(1) == 3


def test_integer_factor_and_inverse():
    eb = IntegerBase()
    assert eb.factor(360) == {2: 3, 3: 2, 5: 1}
    assert (eb.inverse_mod(7, 36) * 7) % 36 == 1


def test_semilocal_validation():
    R = SemilocalPID(Integers(), (3, 2))
    assert R.primes == (2, 3)
    with pytest.raises(EmptyPrimeSet):
        SemilocalPID(Integers(), ())
    with pytest.raises(NotIrreducible):
        SemilocalPID(Integers(), (4,))
    with pytest.raises(DuplicatePrime):
        SemilocalPID(Integers(), (2, 2))
    with pytest.raises(BadPrime):
        R.prime_index(5)


def test_semilocal_membership():
    R = integers_localized((2, 3))
    assert R.contains(Fraction(1, 5))
    assert not R.contains(Fraction(1, 2))
    S = poly_localized(5, (parse_poly("t", 5), parse_poly("t-1", 5)))
    t = t5()
    assert S.contains(RatFunc(Poly((1,), 5), t + 1))
    assert not S.contains(RatFunc(Poly((1,), 5), t))


def test_truncated_completion_canonical():
    R = integers_localized((2, 3))
    T = TruncatedCompletion(R, 2, 3)
    assert T.modulus == 8
    assert T.canonical(Fraction(1, 3)) == 3  # 3 * 3 = 9 = 1 mod 8


def test_ring_element_ops():
    R = integers_localized((2,))
    a = RingElement(R, Fraction(3))
    assert (a * a.inverse()).value == 1
    with pytest.raises(Exception):
        RingElement(R, Fraction(2)).inverse()
    assert RingElement(R, Fraction(12)).valuation(2) == 2


def test_misc_ring_specs_construct():
    R = integers_localized((2,))
    assert str(FractionField(R))
    assert LocalFractionModel(R, 2).valuation(Fraction(1, 8)) == -3
    assert IntegersModN(12).canonical(13) == 1
    assert FiniteProduct((R, IntegersModN(4))).canonical((Fraction(1, 3), 6)) is not None
    assert PolyOverPrimeField(5).contains(t5())
