import pytest
from hypothesis import given, settings, strategies as st
from sympy import Matrix, ZZ
from sympy.matrices.normalforms import invariant_factors

from adelia import matrices as mx
from adelia.arith import Poly
from adelia.errors import NonPIDRing
from adelia.rings import (FiniteProduct, Integers, PolyOverPrimeField,
                          integers_localized)
from adelia.snf import domain_for, left_kernel, smith_normal_form, solve_left

ZR = Integers()

matrices = st.integers(1, 5).flatmap(
    lambda r: st.integers(1, 5).flatmap(
        lambda c: st.lists(st.lists(st.integers(-30, 30), min_size=c, max_size=c),
                           min_size=r, max_size=r)))


def test_diagonal_examples():
    assert smith_normal_form([[2, 0], [0, 3]], ZR).diagonal == [1, 6]
    assert smith_normal_form([[2, 4], [6, 8]], ZR).diagonal == [2, 4]
    sf = smith_normal_form([[0, 0], [0, 0]], ZR)
    assert sf.rank == 0 and sf.U == mx.identity(2, 0, 1) and sf.V == mx.identity(2, 0, 1)


def _det(m):
    return Matrix(m).det()


@settings(max_examples=150, deadline=None)
@given(matrices)
def test_smith_form_against_sympy(m):
    sf = smith_normal_form(m, ZR)
    D = mx.matmul(mx.matmul(sf.U, m, 0), sf.V, 0)
    for i, row in enumerate(D):
        for j, x in enumerate(row):
            assert x == (sf.diagonal[i] if i == j and i < sf.rank else 0)
    assert abs(_det(sf.U)) == 1 and abs(_det(sf.V)) == 1
    assert mx.matmul(sf.V, sf.Vinv, 0) == mx.identity(len(sf.V), 0, 1)
    for a, b in zip(sf.diagonal, sf.diagonal[1:]):
        assert b % a == 0
    expected = [abs(int(x)) for x in invariant_factors(Matrix(m), domain=ZZ) if x != 0]
    assert sf.diagonal == expected


@settings(max_examples=60, deadline=None)
@given(matrices)
def test_left_kernel_and_solve(m):
    K = left_kernel(m, ZR)
    width = len(m[0])
    for row in K:
        assert mx.vecmat(row, m, 0, width=width) == [0] * width
    # every integer combination of the rows is recovered by solve_left
    coeffs = [(-1) ** i * (i + 1) for i in range(len(m))]
    b = mx.vecmat(coeffs, m, 0, width=width)
    x = solve_left(m, b, ZR)
    assert x is not None and mx.vecmat(x, m, 0, width=width) == b


def test_solve_left_detects_non_membership():
    assert solve_left([[2, 0], [0, 3]], [1, 0], ZR) is None


def test_polynomial_smith_form():
    t = Poly.t(5)
    one = Poly((1,), 5)
    m = [[t, one], [one, t]]
    sf = smith_normal_form(m, PolyOverPrimeField(5))
    assert sf.diagonal == [one, t * t - one]
    D = mx.matmul(mx.matmul(sf.U, m, Poly((), 5)), sf.V, Poly((), 5))
    assert D[1][1] == sf.diagonal[1] and D[0][1] == Poly((), 5)


def test_semilocal_smith_form_keeps_only_prime_parts():
    R = integers_localized((2, 3))
    sf = smith_normal_form([[10, 0], [0, 15]], R)
    # 5 is a unit in Z_(2,3)
    dom = domain_for(R)
    assert [dom.ppart(d) for d in sf.diagonal] == [1, 6]


def test_unsupported_ring_raises():
    with pytest.raises(NonPIDRing):
        domain_for(FiniteProduct((Integers(), Integers())))
