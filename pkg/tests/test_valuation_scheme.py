import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from adelia.arith import IntegerBase, parse_poly, poly_base
from adelia.errors import (ArityMismatch, DimensionViolation, EmptySubset, NotAPartialOrder,
                           UnreducedFlag)
from adelia.scheme import (Flag, build_artinian, build_semilocal_curve, build_synthetic_poset,
                           cartesian_lift, compose, dimension_types, face, face_decomposition,
                           flags, flags_of_type, inclusion_injection, injections, stratify,
                           verify_cartesian, cube_to_simplex)
from adelia.valuation_modules import ValuationModule, direct_sum

ZB = IntegerBase()


def test_integral_models_and_witnesses():
    R = ValuationModule.integral_at(ZB, 1, [2, 3])
    Q = ValuationModule.full(ZB, 1)
    Zz = ValuationModule.integral_everywhere(ZB, 1)
    assert R.subset_of(Q)[0]
    ok, w = Q.subset_of(R)
    assert not ok and not R.contains(w)
    assert Zz.subset_of(R)[0]
    ok, w = R.subset_of(Zz)
    assert not ok and R.contains(w) and not Zz.contains(w)
    assert w == [Fraction(1, 5)]


def test_limit_of_descent_square_is_R():
    # pairs (f, o) in K + O-model with f = o_q for every q
    src = direct_sum([ValuationModule.full(ZB, 1), ValuationModule.componentwise(ZB, [2, 3])])
    Phi = [[1, 1], [-1, 0], [0, -1]]
    L = src.kernel(Phi)
    diag = ValuationModule.integral_at(ZB, 1, [2, 3]).image([[1, 1, 1]], 3)
    assert L.equals(diag)
    ok, w = L.subset_of(ValuationModule.integral_everywhere(ZB, 3))
    assert not ok and w == [Fraction(1, 5)] * 3


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_samples_lie_in_module(seed):
    rng = random.Random(seed)
    for V in (ValuationModule.integral_at(ZB, 2, [2, 3]), ValuationModule.componentwise(ZB, [2, 5]),
              ValuationModule.integral_everywhere(ZB, 1)):
        assert V.contains(V.sample(rng))


def test_polynomial_valuation_module():
    eb = poly_base(5)
    t = parse_poly("t", 5)
    V = ValuationModule.integral_at(eb, 1, [t])
    assert V.contains([eb.frac(eb.one, t + 1)])
    assert not V.contains([eb.frac(eb.one, t)])


# -- schemes ------------------------------------------------------------------------

def test_curve_builder():
    X = build_semilocal_curve("Z", [3, 2])
    assert X.points == ["(2)", "(3)", "eta"]
    assert X.n == 1 and X.generic_point == "eta"
    assert X.lt("(2)", "eta") and not X.lt("eta", "(2)")
    assert [f.chain for f in flags(X, 1)] == [("(2)", "eta"), ("(3)", "eta")]
    assert len(flags(X, 1, reduced=False)) == 2 + 3


def test_artinian_builder():
    X = build_artinian("Z", 2)
    assert X.n == 0 and X.points == ["(2)"]


def test_synthetic_poset_errors():
    with pytest.raises(NotAPartialOrder):
        build_synthetic_poset(1, {"a": 0, "b": 1}, [("a", "b"), ("b", "a")])
    with pytest.raises(DimensionViolation):
        build_synthetic_poset(1, {"a": 1, "b": 1}, [("a", "b")])
    with pytest.raises(DimensionViolation):
        build_synthetic_poset(2, {"a": 0, "b": 1}, [("a", "b")])


def _surface():
    dims = {"x": 0, "y": 0, "c": 1, "d": 1, "g": 2}
    rels = [("x", "c"), ("y", "c"), ("y", "d"), ("c", "g"), ("d", "g")]
    return build_synthetic_poset(2, dims, rels)


def test_stratification_counts():
    X = _surface()
    strata = stratify(flags(X, 1), X)
    assert {k: len(v) for k, v in strata.items()} == {(0, 1): 3, (0, 2): 2, (1, 2): 2}
    assert len(flags_of_type(X, (0, 1, 2))) == 3
    with pytest.raises(UnreducedFlag):
        stratify([Flag(("x", "x"), reduced=False)], X)


def test_dimension_types_order():
    assert dimension_types(1) == [(0,), (1,), (0, 1)]
    assert len(dimension_types(3)) == 15


def test_face_maps_and_lifts():
    assert face(0, 2) == (1, 2)
    assert face(2, 2) == (0, 1)
    with pytest.raises(ArityMismatch):
        face(3, 2)
    assert cartesian_lift((0, 2, 3), (0, 2)) == (0, 3)
    with pytest.raises(EmptySubset):
        cube_to_simplex(())
    assert cube_to_simplex((1, 3)) == 1


@pytest.mark.parametrize("n", [0, 1, 2, 3, 4])
def test_fibration_laws_brute_force(n):
    for k in range(1, n + 2):
        for T in itertools.combinations(range(n + 1), k):
            r = len(T) - 1
            for rr in range(r + 1):
                for alpha in injections(rr, r):
                    assert verify_cartesian(T, alpha) == []
                    S = cartesian_lift(T, alpha)
                    # transitivity: lifting a composite equals lifting in two steps
                    for r3 in range(rr + 1):
                        for beta in injections(r3, rr):
                            assert cartesian_lift(T, compose(alpha, beta)) == cartesian_lift(S, beta)


def test_face_decomposition_rebuilds_injection():
    for rp in range(4):
        for r in range(rp + 1):
            for alpha in injections(r, rp):
                cur = tuple(range(r + 1))
                size = r
                for j in face_decomposition(alpha, rp):
                    size += 1
                    cur = compose(face(j, size), cur)
                assert cur == alpha
                assert inclusion_injection(alpha, range(rp + 1)) == alpha
