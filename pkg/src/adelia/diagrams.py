"""Diagram containers: chain complexes, semi-cosimplicial modules, cube diagrams.

Objects are either PresentedModules (``kind == "presented"``) or
ValuationModules (``kind == "valuation"``).  Maps are matrices acting on row
vectors in both cases: generator coordinates for presented modules, ambient
K-coordinates for valuation modules.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from . import matrices as mx
from . import modules as md
from .errors import IdentityViolation, NonCommutingCube
from .valuation_modules import ValuationModule
from .valuation_modules import direct_sum as vdirect_sum


def kind_of(obj):
    return "valuation" if isinstance(obj, ValuationModule) else "presented"


def dim_of(obj):
    """Width of the row vectors representing elements."""
    return obj.N if isinstance(obj, ValuationModule) else obj.ngens


def zero_scalar(obj):
    return obj.dom.zero if isinstance(obj, ValuationModule) else obj.domain.zero


def one_scalar(obj):
    return obj.dom.one if isinstance(obj, ValuationModule) else obj.domain.one


def sum_objects(objs, like=None):
    objs = list(objs)
    if not objs:
        if isinstance(like, ValuationModule):
            return ValuationModule.zero(like.eb, 0)
        return md.zero_module(like.ring)
    if isinstance(objs[0], ValuationModule):
        return vdirect_sum(objs)
    return md.direct_sum(objs)


def same_map(F, G, target):
    """Equality of two maps into ``target``."""
    if len(F) != len(G):
        return False
    if isinstance(target, ValuationModule):
        return mx.equal(F, G)
    if not F:
        return True
    return md.maps_equal(F, G, target)


def compose(F, G, source, zero):
    """Row-vector composite: first F then G."""
    if not F:
        return []
    inner = len(G)
    return mx.matmul(F, G, zero, inner=inner) if inner else [[] for _ in F]


def zero_map(src, tgt, zero):
    return mx.zeros(dim_of(src), dim_of(tgt), zero)


@dataclass
class ChainComplex:
    """C^0 -> C^1 -> ... with d[i] : C^i -> C^{i+1}."""

    objects: list
    diffs: list

    def check(self):
        for i in range(len(self.diffs) - 1):
            src = self.objects[i]
            comp = compose(self.diffs[i], self.diffs[i + 1], src, zero_scalar(src))
            tgt = self.objects[i + 2]
            if comp and not same_map(comp, zero_map(src, tgt, zero_scalar(src)), tgt):
                raise IdentityViolation(f"d o d != 0 at degree {i}")
        return True


@dataclass
class SemiCosimplicialModule:
    """Levels M^0..M^n with cofaces[(r, i)] : M^{r-1} -> M^r for 0 <= i <= r."""

    levels: list
    cofaces: dict
    labels: list = field(default_factory=list)  # per level: list of (block label, block width)
    augmentation: object = None  # (M^{-inf}, matrix M^{-inf} -> M^0)

    @property
    def n(self):
        return len(self.levels) - 1

    def coface(self, r, i):
        return self.cofaces[(r, i)]

    def alpha_map(self, alpha, rp):
        """Matrix of alpha_* : M^r -> M^rp for an injection alpha : [r] -> [rp]."""
        r = len(alpha) - 1
        src = self.levels[r]
        zero, one = zero_scalar(src), one_scalar(src)
        F = mx.identity(dim_of(src), zero, one)
        cur = r
        for j in [j for j in range(rp + 1) if j not in alpha]:
            cur += 1
            F = compose(F, self.cofaces[(cur, j)], None, zero)
        return F

    def check_identities(self):
        """d^j d^i = d^i d^{j-1} for i < j, as exact map identities."""
        for r in range(1, self.n):
            src, tgt = self.levels[r - 1], self.levels[r + 1]
            zero = zero_scalar(src)
            for j in range(r + 2):
                for i in range(j):
                    lhs = compose(self.cofaces[(r, i)], self.cofaces[(r + 1, j)], src, zero)
                    rhs = compose(self.cofaces[(r, j - 1)], self.cofaces[(r + 1, i)], src, zero)
                    if not same_map(lhs, rhs, tgt):
                        raise IdentityViolation(f"coface identity fails for i={i}, j={j}, r={r}")
        return True

    def alternating(self, r):
        """sum_i (-1)^i d^i : M^{r-1} -> M^r."""
        src = self.levels[r - 1]
        zero = zero_scalar(src)
        D = zero_map(src, self.levels[r], zero)
        for i in range(r + 1):
            Di = self.cofaces[(r, i)]
            D = mx.add(D, Di) if i % 2 == 0 else mx.sub(D, Di)
        return D

    def complex(self, augmented=False):
        objs = list(self.levels)
        diffs = [self.alternating(r) for r in range(1, len(objs))]
        if augmented and self.augmentation is not None:
            base, eps = self.augmentation
            objs = [base] + objs
            diffs = [eps] + diffs
        return ChainComplex(objs, diffs)


def subsets_by_size(n):
    out = []
    for k in range(0, n + 2):
        out.extend(itertools.combinations(range(n + 1), k))
    return out


@dataclass
class CubeDiagram:
    """Functor on P([n]) (or on nonempty subsets when ``vertices`` lacks ())."""

    n: int
    vertices: dict   # tuple(sorted subset) -> object
    edges: dict      # (S, S') covering inclusion -> matrix
    labels: dict = field(default_factory=dict)  # S -> list of (block label, width)

    @property
    def has_initial(self):
        return () in self.vertices

    def edge(self, S, Sp):
        return self.edges[(tuple(S), tuple(Sp))]

    def composite(self, S, T):
        """Map D(S) -> D(T) for S <= T, composing covering edges in increasing order."""
        S, T = tuple(S), tuple(T)
        obj = self.vertices[S]
        zero, one = zero_scalar(obj), one_scalar(obj)
        F = mx.identity(dim_of(obj), zero, one)
        cur = S
        for x in sorted(set(T) - set(S)):
            nxt = tuple(sorted(cur + (x,)))
            F = compose(F, self.edges[(cur, nxt)], None, zero)
            cur = nxt
        return F

    def check_commutes(self):
        for S in self.vertices:
            rest = [x for x in range(self.n + 1) if x not in S]
            for a, b in itertools.combinations(rest, 2):
                Sa = tuple(sorted(S + (a,)))
                Sb = tuple(sorted(S + (b,)))
                Sab = tuple(sorted(S + (a, b)))
                zero = zero_scalar(self.vertices[S])
                p1 = compose(self.edges[(S, Sa)], self.edges[(Sa, Sab)], None, zero)
                p2 = compose(self.edges[(S, Sb)], self.edges[(Sb, Sab)], None, zero)
                if not same_map(p1, p2, self.vertices[Sab]):
                    raise NonCommutingCube(f"square {S} -> {Sab} does not commute")
        return True

    def without_initial(self):
        verts = {S: v for S, v in self.vertices.items() if S}
        edges = {k: v for k, v in self.edges.items() if k[0]}
        return CubeDiagram(self.n, verts, edges, {S: l for S, l in self.labels.items() if S})
