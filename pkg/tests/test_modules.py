import random

import pytest
from hypothesis import given, settings, strategies as st

from adelia import matrices as mx
from adelia import modules as md
from adelia.arith import Poly
from adelia.errors import NotFiniteLength, RingMismatch
from adelia.randomgen import random_finite_length, random_unimodular
from adelia.rings import (FractionField, Integers, IntegersModN, TruncatedCompletion,
                          integers_localized, poly_localized)

ZR = Integers()
R23 = integers_localized((2, 3))


def test_invariants_examples():
    assert md.fg_invariants(md.PresentedModule(ZR, 2, ((2, 0), (0, 3)))) == (0, [6])
    assert md.fg_invariants(md.free(ZR, 2)) == (2, [])
    assert md.fg_invariants(md.PresentedModule(ZR, 2, ((2, 0), (0, 0)))) == (1, [2])


def test_order_and_enumeration():
    M = md.cyclic(R23, 36)
    assert md.order(M) == 36
    assert len(md.elements(M)) == 36
    assert len({md.coords(M, x) for x in md.elements(M)}) == 36
    with pytest.raises(NotFiniteLength):
        md.elements(md.free(ZR, 1))


def test_completion_truncate_examples():
    assert md.fg_invariants(md.completion_truncate(md.cyclic(R23, 36), 2, 3)) == (0, [4])
    assert md.fg_invariants(md.completion_truncate(md.free(R23, 1), 2, 3)) == (0, [8])
    assert md.is_zero(md.completion_truncate(md.cyclic(R23, 9), 2, 3))


def test_tensor_and_localize():
    assert md.is_zero(md.module_tensor(md.cyclic(R23, 36), FractionField(R23)))
    loc = md.module_localize(md.cyclic(R23, 36), 2)
    assert md.fg_invariants(loc) == (0, [4])


def test_quotient_ring_modules():
    M = md.free(IntegersModN(12), 1)
    assert md.fg_invariants(M) == (0, [12])
    T = md.free(TruncatedCompletion(R23, 3, 2), 2)
    assert md.fg_invariants(T) == (0, [9, 9])


def test_kernel_cokernel_image():
    M = md.cyclic(ZR, 6)
    K, Z = md.module_kernel(M, M, [[1]])
    assert md.is_zero(K)
    K, Z = md.module_kernel(M, M, [[2]])
    assert md.fg_invariants(K) == (0, [2])
    C, _ = md.module_cokernel(M, M, [[2]])
    assert md.fg_invariants(C) == (0, [2])
    I, _ = md.module_image(M, M, [[2]])
    assert md.fg_invariants(I) == (0, [3])
    assert md.is_isomorphism(M, M, [[5]])
    assert not md.is_isomorphism(M, M, [[3]])


def test_well_defined_maps():
    Z2, Z4 = md.cyclic(ZR, 2), md.cyclic(ZR, 4)
    assert md.is_well_defined(Z2, Z4, [[2]])
    assert not md.is_well_defined(Z2, Z4, [[1]])


def test_ring_mismatch():
    with pytest.raises(RingMismatch):
        md.module_kernel(md.cyclic(ZR, 2), md.cyclic(R23, 2), [[1]])


def test_polynomial_modules():
    S = poly_localized(5, (Poly.t(5),))
    t = Poly.t(5)
    M = md.PresentedModule(S, 1, ((t * t * (t + 1),),))
    rank, facs = md.fg_invariants(M)
    # t + 1 is a unit away from t
    assert rank == 0 and facs == [t * t]
    assert md.order(M) == 25


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_invariants_stable_under_unimodular_twist(seed):
    rng = random.Random(seed)
    M = random_finite_length(R23, rng, twist=False, free_rank=rng.choice([0, 1]))
    dom = M.domain
    V = random_unimodular(M.ngens, rng, dom)
    rels = [list(r) for r in M.full_relations()]
    twisted = md.PresentedModule(R23, M.ngens, tuple(map(tuple, mx.matmul(rels, V, dom.zero)))) \
        if rels else M
    assert md.fg_invariants(twisted) == md.fg_invariants(M)


def test_subquotient_and_express():
    A = md.free(ZR, 2)
    Z = [[2, 0], [0, 3]]
    assert md.express_in(Z, A, [[4, 9]]) == [[2, 3]]
    assert md.express_in(Z, A, [[1, 0]]) is None
    assert md.same_submodule([[2, 0], [0, 3]], [[2, 3], [0, 3]], A)
    S = md.subquotient(Z, [[6, 0]], ZR, 2)
    assert md.fg_invariants(S) == (1, [3])
