import random

import pytest
from hypothesis import given, settings, strategies as st

from adelia import modules as md
from adelia.arith import parse_poly
from adelia.errors import NotFiniteLength, NotLocal, SupportTooLarge, UnsupportedFamily
from adelia.identities import (elementary_divisors, split_free_torsion, support,
                               support_dimension, vanishing_detector, verify_completion_flat,
                               verify_generic_absorption, verify_idempotency,
                               verify_key_decomposition, verify_local_decomposition)
from adelia.randomgen import random_finite_length
from adelia.rings import integers_localized
from adelia.scheme import build_semilocal_curve


def curve():
    return build_semilocal_curve("Z", [2, 3])


def poly_curve():
    return build_semilocal_curve("F5[t]", [parse_poly("t", 5), parse_poly("t-1", 5)])


def test_support_and_dimension():
    X = curve()
    R = X.base_ring
    assert support(md.cyclic(R, 8), X) == ["(2)"]
    assert support_dimension(md.cyclic(R, 36)) == 0
    assert support_dimension(md.free(R, 1)) == 1
    assert support_dimension(md.zero_module(R)) == -1
    # 5 is a unit in the semilocal ring
    assert support_dimension(md.cyclic(R, 5)) == -1


def test_local_decomposition_examples():
    X = curve()
    R = X.base_ring
    rep = verify_local_decomposition(md.cyclic(R, 8), 0, X, 4)
    assert rep["verdict"] == "pass" and rep["witness"]["S"] == ["(2)"]
    rep = verify_local_decomposition(md.cyclic(R, 36), 0, X, 4)
    assert rep["verdict"] == "pass" and rep["witness"]["S"] == ["(2)", "(3)"]
    assert rep["witness"]["left"]["torsion"]["invariant_factors"] == ["36"]
    rep = verify_local_decomposition(md.zero_module(R), 0, X, 4)
    assert rep["verdict"] == "pass" and rep["witness"]["S"] == []
    rep = verify_local_decomposition(md.free(R, 2), 1, X, 4)
    assert rep["verdict"] == "pass"
    with pytest.raises(SupportTooLarge):
        verify_local_decomposition(md.free(R, 1), 0, X, 4)


def test_idempotency_examples():
    X = curve()
    R = X.base_ring
    for C in (md.cyclic(R, 8), md.zero_module(R), md.cyclic(R, 36)):
        rep = verify_idempotency(C, 0, X, 4)
        assert rep["verdict"] == "pass"
    rep = verify_idempotency(md.cyclic(R, 36), 0, X, 4)
    assert rep["witness"]["twice"]["torsion"]["invariant_factors"] == ["36"]
    assert verify_idempotency(md.free(R, 1), 1, X, 4)["verdict"] == "pass"


def test_generic_absorption_example():
    X = curve()
    rep = verify_generic_absorption(X, 4)
    assert rep["verdict"] == "pass"
    assert rep["witness"]["A01"] == {"ambient": 2, "dimension": 2, "integral_at": []}
    rep = verify_generic_absorption(X, 4, C=md.cyclic(X.base_ring, 36))
    assert rep["witness"]["torsion"]["left"]["invariant_factors"] == []


def test_key_decomposition_examples():
    X = curve()
    R = X.base_ring
    assert verify_key_decomposition(md.free(R, 1), 1, (0,), X, 4)["verdict"] == "pass"
    rep = verify_key_decomposition(md.cyclic(R, 36), 1, (0,), X, 4)
    assert rep["verdict"] == "pass"
    assert rep["witness"]["left"]["torsion"]["invariant_factors"] == []
    assert verify_key_decomposition(md.zero_module(R), 1, (0,), X, 4)["verdict"] == "pass"
    with pytest.raises(UnsupportedFamily):
        verify_key_decomposition(md.cyclic(R, 4), 0, (), X, 4)


def test_completion_flat_examples():
    R2 = integers_localized((2,))
    M = md.cyclic(R2, 8)
    rep = verify_completion_flat(R2, "R", M, 3)
    assert rep["verdict"] == "pass" and rep["witness"]["right"]["invariant_factors"] == ["8"]
    rep = verify_completion_flat(R2, "K", M, 3)
    assert rep["verdict"] == "pass" and rep["witness"]["left"]["invariant_factors"] == []
    rep = verify_completion_flat(R2, "trunc", md.cyclic(R2, 2), 3, t=4)
    assert rep["verdict"] == "pass" and rep["witness"]["A/qA"]["invariant_factors"] == ["2"]
    with pytest.raises(NotLocal):
        verify_completion_flat(integers_localized((2, 3)), "R", md.cyclic(integers_localized((2, 3)), 2), 3)
    with pytest.raises(NotFiniteLength):
        verify_completion_flat(R2, "R", md.free(R2, 1), 3)


def test_vanishing_examples():
    X = curve()
    R = X.base_ring
    vanishes, w = vanishing_detector(md.cyclic(R, 9), 1, (0,), X)
    assert vanishes and w["A(0,1)(x)C=0"] and w["implication_holds"]
    mixed = md.direct_sum([md.free(R, 1), md.cyclic(R, 4)])
    vanishes, w = vanishing_detector(mixed, 1, (0,), X)
    assert not vanishes and not w["A(0,1)(x)C=0"]
    assert vanishing_detector(md.zero_module(R), 1, (0,), X)[0]
    with pytest.raises(SupportTooLarge):
        vanishing_detector(md.free(R, 1), 0, (), X)


def test_split_and_elementary_divisors():
    R = integers_localized((2, 3))
    C = md.direct_sum([md.free(R, 1), md.cyclic(R, 12)])
    a, T = split_free_torsion(C)
    assert a == 1 and md.fg_invariants(T) == (0, [12])
    assert elementary_divisors(T) == (0, [("2", 2), ("3", 1)])


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10 ** 6), st.sampled_from([2, 3]), st.booleans())
def test_identities_on_random_modules(seed, s, poly):
    X = poly_curve() if poly else curve()
    R = X.base_ring
    rng = random.Random(seed)
    C = random_finite_length(R, rng, free_rank=rng.choice([0, 0, 1]))
    i = 1 if md.fg_invariants(C)[0] else 0
    assert verify_local_decomposition(C, i, X, s)["verdict"] == "pass"
    assert verify_idempotency(C, i, X, s)["verdict"] == "pass"
    assert verify_key_decomposition(C, 1, (0,), X, s)["verdict"] == "pass"
    assert verify_generic_absorption(X, s, C=C, samples=5)["verdict"] == "pass"
    # the detector's two routes agree; it raises otherwise
    vanishing_detector(C, 1, (0,), X, s)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10 ** 6), st.sampled_from(["R", "K", "trunc"]))
def test_completion_flat_on_random_local_modules(seed, kind):
    R2 = integers_localized((2,))
    M = random_finite_length(R2, random.Random(seed))
    a = verify_completion_flat(R2, kind, M, 3, t=3)
    b = verify_completion_flat(R2, kind, M, 6, t=3)
    assert a["verdict"] == b["verdict"] == "pass"
