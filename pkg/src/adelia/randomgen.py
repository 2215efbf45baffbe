"""Random test instances: finite-length modules, commuting cubes, semi-cosimplicial diagrams."""
from __future__ import annotations

import itertools

from . import matrices as mx
from . import modules as md
from .diagrams import CubeDiagram, SemiCosimplicialModule
from .rings import Integers


def random_unimodular(n, rng, dom, steps=None, scale=3, with_inverse=False):
    """Product of random elementary matrices, optionally with its exact inverse."""
    W = mx.identity(n, dom.zero, dom.one)
    Winv = mx.identity(n, dom.zero, dom.one)
    if n >= 2:
        for _ in range(steps if steps is not None else 2 * n):
            i, j = rng.sample(range(n), 2)
            c = dom.coerce(rng.randint(-scale, scale))
            for k in range(n):
                W[i][k] = W[i][k] + c * W[j][k]
                Winv[k][j] = Winv[k][j] - c * Winv[k][i]
    return (W, Winv) if with_inverse else W


def random_finite_length(R, rng, max_factors=3, max_exp=3, twist=True, free_rank=0):
    """A random module over the semilocal ring R: prime-power torsion, optional free part.

    The diagonal presentation is hidden by random unimodular changes of basis
    on both sides.
    """
    eb = R.euclid
    primes = list(R.primes)
    facs = []
    for _ in range(rng.randint(0, max_factors)):
        d = eb.one
        for q in primes:
            if rng.random() < 0.6:
                d = d * q ** rng.randint(1, max_exp)
        if d != eb.one:
            # units off the primes make no difference but exercise the arithmetic
            d = d * eb.random_unit_part(rng, primes)
            facs.append(d)
    g = len(facs) + free_rank
    if g == 0:
        return md.zero_module(R)
    M = md.from_invariants(R, facs, rank=free_rank)
    if not twist:
        return M
    sdom = M.domain
    rels = [list(map(sdom.coerce, r)) for r in M.full_relations()]
    U = random_unimodular(len(rels), rng, sdom) if rels else []
    V = random_unimodular(g, rng, sdom)
    if rels:
        rels = mx.matmul(mx.matmul(U, rels, sdom.zero), V, sdom.zero)
    return md.PresentedModule(R, g, tuple(map(tuple, rels)))


def _random_rows(k, g, rng, bound):
    return [[rng.randint(-bound, bound) for _ in range(g)] for _ in range(k)]


def random_cube(n, rng, ring=None, ngens=None, bound=4, max_order=64, with_initial=False,
                free=False):
    """Commuting cube D(S) = G / H_S with H_S increasing in S, in twisted bases.

    G = Z^g / (torsion) has at most ``max_order`` elements unless ``free``.
    """
    ring = ring or Integers()
    g = ngens or rng.randint(1, 2)
    torsion = []
    for i in range(g):
        if free and rng.random() < 0.5:
            torsion.append(None)
        else:
            torsion.append(rng.choice([2, 3, 4, 6, 8]))
    base_rels = []
    for i, d in enumerate(torsion):
        if d is not None:
            row = [0] * g
            row[i] = d
            base_rels.append(row)
    subsets = [()] + [S for k in range(1, n + 2) for S in itertools.combinations(range(n + 1), k)]
    extra = {}
    for S in subsets:
        # a fresh subgroup at roughly a third of the vertices, inherited upwards
        extra[S] = _random_rows(1, g, rng, bound) if S and rng.random() < 0.35 else []
    dom = md.PresentedModule(ring, g, ()).domain
    twists, inv = {}, {}
    for S in subsets:
        twists[S], inv[S] = random_unimodular(g, rng, dom, steps=2, with_inverse=True)
    verts, edges = {}, {}
    for S in subsets:
        H = list(base_rels)
        for T in subsets:
            if set(T) <= set(S):
                H.extend(extra[T])
        # generators of D(S) are the images of the rows of W_S^{-1}; relations transform by W_S
        rels = mx.matmul(H, twists[S], dom.zero, inner=g) if H else []
        verts[S] = md.PresentedModule(ring, g, tuple(map(tuple, rels)))
    for S in subsets:
        for x in range(n + 1):
            if x in S:
                continue
            T = tuple(sorted(S + (x,)))
            edges[(S, T)] = mx.matmul(inv[S], twists[T], dom.zero)
    D = CubeDiagram(n, verts, edges)
    D.check_commutes()
    return D if with_initial else D.without_initial()


def random_two_level(rng, ring=None, bound=3):
    """M^0 with two arbitrary maps into M^1 (n = 1 has no coface identities)."""
    ring = ring or Integers()
    g0, g1 = rng.randint(1, 2), rng.randint(1, 2)
    rels0 = []
    for i in range(g0):
        row = [0] * g0
        row[i] = rng.choice([2, 3, 4, 6])
        rels0.append(row)
    d0 = _random_rows(g0, g1, rng, bound)
    d1 = _random_rows(g0, g1, rng, bound)
    # make both maps well defined by killing the images of the relations
    rels1 = [[rng.choice([2, 3, 4, 6, 12]) if i == j else 0 for j in range(g1)] for i in range(g1)]
    rels1 += mx.matmul(rels0, d0, 0) + mx.matmul(rels0, d1, 0)
    M0 = md.PresentedModule(ring, g0, tuple(map(tuple, rels0)))
    M1 = md.PresentedModule(ring, g1, tuple(map(tuple, rels1)))
    return SemiCosimplicialModule([M0, M1], {(1, 0): d0, (1, 1): d1})
