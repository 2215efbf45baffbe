import random
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from adelia.arith import IntegerBase, parse_poly, poly_base, valuation
from adelia.errors import EmptyPrimeSet, UnknownRingClass, ZeroComponent
from adelia.ktheory import (KShadow, adele_model_ring, boundary_to_pic, check_witness, k0_of,
                            local_model_ring, mayer_vietoris_audit, random_idele,
                            weak_approximation_witness)
from adelia.rings import (FiniteProduct, FractionField, Integers, IntegersModN, Rationals,
                          integers_localized)
from adelia.scheme import build_semilocal_curve


def test_k0_table():
    R = integers_localized((2, 3))
    assert k0_of(R)["rank"] == 1
    assert k0_of(FractionField(R))["rank"] == 1
    assert k0_of(local_model_ring(R))["rank"] == 2
    assert k0_of(adele_model_ring(R))["rank"] == 2
    assert k0_of(IntegersModN(36))["rank"] == 2
    assert k0_of(FiniteProduct((Rationals(), IntegersModN(12))))["rank"] == 3
    assert KShadow.of(Integers()).k0["rank"] == 1
    with pytest.raises(UnknownRingClass):
        k0_of(object())


def test_witness_example():
    f, units = weak_approximation_witness((Fraction(4, 3), Fraction(9, 2)), [2, 3])
    assert f == 36
    assert units == (Fraction(1, 27), Fraction(1, 8))
    assert check_witness((Fraction(4, 3), Fraction(9, 2)), [2, 3], f, units)


def test_boundary_example():
    div, gen = boundary_to_pic((Fraction(1, 2), Fraction(1)), [2, 3])
    assert div == {2: -1} and gen == Fraction(1, 2)


def test_idele_errors():
    with pytest.raises(ZeroComponent):
        weak_approximation_witness((Fraction(0), Fraction(1)), [2, 3])
    with pytest.raises(EmptyPrimeSet):
        weak_approximation_witness((), [])


def _sympy_witness(idele, primes):
    # independent: f from sympy's rational factorization restricted to the primes
    f = sympy.Rational(1)
    for a, q in zip(idele, primes):
        fac = sympy.factorrat(sympy.Rational(a.numerator, a.denominator))
        f *= sympy.Integer(q) ** fac.get(q, 0)
    return Fraction(int(f.p), int(f.q))


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 10 ** 9), st.sampled_from([[2, 3], [2, 3, 5], [3, 7]]))
def test_integer_witness_against_sympy(seed, primes):
    idele = random_idele(primes, IntegerBase(), random.Random(seed))
    f, units = weak_approximation_witness(idele, primes)
    assert f == _sympy_witness(idele, primes)
    assert f > 0 and check_witness(idele, primes, f, units)
    div, gen = boundary_to_pic(idele, primes)
    assert gen == f and div == {q: valuation(a, q) for q, a in zip(primes, idele)
                                if valuation(a, q)}


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 10 ** 9))
def test_witness_stable_under_reordering(seed):
    rng = random.Random(seed)
    primes = [2, 3, 5]
    idele = random_idele(primes, IntegerBase(), rng)
    order = [2, 0, 1]
    f, units = weak_approximation_witness(idele, primes)
    g, units2 = weak_approximation_witness(tuple(idele[i] for i in order),
                                           [primes[i] for i in order])
    assert f == g and units2 == tuple(units[i] for i in order)


def test_polynomial_witness_is_monic():
    eb = poly_base(5)
    ps = [parse_poly("t", 5), parse_poly("t-1", 5)]
    rng = random.Random(3)
    for _ in range(30):
        idele = random_idele(ps, eb, rng)
        f, units = weak_approximation_witness(idele, ps, eb)
        assert check_witness(idele, ps, f, units)
        assert f.num.lc == 1 and f.den.lc == 1


def test_five_term_report_for_two_primes():
    X = build_semilocal_curve("Z", [2, 3])
    seq, rep = mayer_vietoris_audit(X, samples=50, seed=1)
    assert rep["k0_row"] == [1, 3, 2]
    assert rep["middle_map"] == [["1", "-1", "0"], ["1", "0", "-1"]]
    assert rep["snf_certificate"] == ["1", "1"]
    assert rep["exact"] and all(seq.checks.values())


@pytest.mark.parametrize("X", [
    build_semilocal_curve("Z", [2]),
    build_semilocal_curve("Z", [2, 3, 5]),
    build_semilocal_curve("F5[t]", [parse_poly("t", 5), parse_poly("t-1", 5)]),
])
def test_five_term_exact_on_curves(X):
    _, rep = mayer_vietoris_audit(X, samples=100, seed=0)
    m = len(X.base_ring.primes)
    assert rep["k0_row"] == [1, 1 + m, m]
    assert rep["exact"], rep["checks"]
