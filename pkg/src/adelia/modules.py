"""Finitely presented modules M = R^g / rowspace(relations) over the PID families.

Elements are row vectors of length g; a map M -> N is a g_M x g_N matrix F
acting by x |-> x*F.  Modules over quotient rings (Z/n, R/q^s) are handled
through their PID cover: the modulus is appended as extra relation rows.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache

from . import matrices as mx
from .arith import IntegerBase
from .errors import BadPrime, NotFiniteLength, NonPIDRing, RingMismatch
from .rings import (FiniteProduct, Integers, IntegersModN, PolyOverPrimeField, RingSpec,
                    SemilocalPID, TruncatedCompletion)
from .snf import domain_for, left_kernel, smith_normal_form, solve_left


def cover(ring):
    """(PID ring doing the linear algebra, modulus or None)."""
    if isinstance(ring, IntegersModN):
        return Integers(), ring.n
    if isinstance(ring, TruncatedCompletion):
        return SemilocalPID(ring.base.base, (ring.prime,)), ring.modulus
    if isinstance(ring, FiniteProduct):
        raise NonPIDRing(f"modules over the product {ring} are handled factorwise")
    domain_for(ring)  # raises NonPIDRing for anything else unsupported
    return ring, None


@dataclass(frozen=True)
class PresentedModule:
    ring: RingSpec
    ngens: int
    relations: tuple = ()
    labels: tuple = field(default=None, compare=False, hash=False)

    def __post_init__(self):
        pid, _ = cover(self.ring)
        dom = domain_for(pid)
        rels = []
        for r in self.relations:
            if len(r) != self.ngens:
                raise ValueError(f"relation of length {len(r)} for {self.ngens} generators")
            row = tuple(dom.coerce(x) for x in r)
            if any(row):
                rels.append(row)
        object.__setattr__(self, "relations", tuple(rels))
        if self.labels is not None:
            object.__setattr__(self, "labels", tuple(self.labels))

    @property
    def pid(self):
        return cover(self.ring)[0]

    @property
    def domain(self):
        return domain_for(self.pid)

    def full_relations(self):
        _, m = cover(self.ring)
        rows = [list(r) for r in self.relations]
        if m is not None:
            dom = self.domain
            for i in range(self.ngens):
                row = [dom.zero] * self.ngens
                row[i] = dom.coerce(m)
                rows.append(row)
        return rows

    def __repr__(self):
        rank, facs = fg_invariants(self)
        parts = [f"R^{rank}"] if rank else []
        parts += [f"R/({d!r})" for d in facs]
        return f"<{' + '.join(parts) or '0'} over {self.ring}>"


def free(ring, n, labels=None):
    return PresentedModule(ring, n, (), labels)


def zero_module(ring):
    return PresentedModule(ring, 0, ())


def cyclic(ring, d):
    return PresentedModule(ring, 1, ((d,),))


def from_invariants(ring, factors, rank=0):
    g = len(factors) + rank
    rels = []
    for i, d in enumerate(factors):
        row = [0] * g
        row[i] = d
        rels.append(row)
    return PresentedModule(ring, g, tuple(rels))


@lru_cache(maxsize=4096)
def module_snf(M):
    return smith_normal_form(M.full_relations(), M.pid, cols=M.ngens)


def _base_scalar(dom, d):
    """Invariant factors are reported as base scalars (int / Poly) when integral."""
    if hasattr(d, "denominator") and not isinstance(d, int):
        den = d.denominator
        if den == 1 or (hasattr(den, "degree") and den.degree == 0):
            return d.numerator
    return d


@lru_cache(maxsize=4096)
def fg_invariants(M):
    """(rank, invariant factors): M = R^rank + sum R/(d_i), d_i nonunit, d_1 | d_2 | ..."""
    sf = module_snf(M)
    dom = M.domain
    facs = [_base_scalar(dom, d) for d in sf.diagonal if not dom.is_unit(d)]
    return M.ngens - sf.rank, facs


def is_zero(M):
    rank, facs = fg_invariants(M)
    return rank == 0 and not facs


def is_finite_length(M):
    if M.pid.is_field:
        return True
    return fg_invariants(M)[0] == 0


def order(M):
    """Cardinality of a finite module (Z-family) or of its F_p-dimension as p^dim."""
    rank, facs = fg_invariants(M)
    if rank:
        raise NotFiniteLength("module has a free part")
    eb = M.pid.euclid
    out = 1
    for d in facs:
        out *= abs(d) if isinstance(eb, IntegerBase) else eb.p ** d.degree
    return out


def isomorphic(M, N):
    if M.ring != N.ring:
        raise RingMismatch(f"{M.ring} vs {N.ring}")
    return fg_invariants(M) == fg_invariants(N)


def direct_sum(mods, ring=None):
    mods = list(mods)
    if not mods:
        if ring is None:
            raise ValueError("empty direct sum needs a ring")
        return zero_module(ring)
    ring = mods[0].ring
    for M in mods:
        if M.ring != ring:
            raise RingMismatch(f"{M.ring} vs {ring}")
    dom = mods[0].domain
    g = sum(M.ngens for M in mods)
    rels = []
    off = 0
    for M in mods:
        for r in M.relations:
            row = [dom.zero] * g
            row[off:off + M.ngens] = r
            rels.append(row)
        off += M.ngens
    labels = None
    if all(M.labels for M in mods):
        labels = tuple(itertools.chain.from_iterable(M.labels for M in mods))
    return PresentedModule(ring, g, tuple(rels), labels)


def _cols(M, F):
    return [list(r) for r in F]


def in_rowspace(rows, v, ring, sf=None):
    if not any(v):
        return True
    return solve_left(rows, v, ring, sf=sf) is not None


def map_is_zero(F, N):
    """True if every row of F (elements of N) is zero in N."""
    rel = N.full_relations()
    sf = smith_normal_form(rel, N.pid, cols=N.ngens)
    return all(in_rowspace(rel, list(r), N.pid, sf) for r in F)


def maps_equal(F, G, N):
    return map_is_zero(mx.sub(F, G), N) if F else True


def is_well_defined(M, N, F):
    if len(F) != M.ngens or any(len(r) != N.ngens for r in F):
        return False
    if M.ngens == 0:
        return True
    return map_is_zero(mx.matmul(M.full_relations(), F, M.domain.zero, inner=M.ngens), N)


def subquotient(Z, B, ring, g):
    """The submodule of R^g/rowspace(B) generated by the rows of Z, presented on those rows."""
    pid = cover(ring)[0]
    domain_for(pid)  # raises NonPIDRing early
    k = len(Z)
    if k == 0:
        return zero_module(ring)
    stacked = [list(r) for r in Z] + [list(r) for r in B]
    kern = left_kernel(stacked, pid, cols=g)
    rels = tuple(tuple(r[:k]) for r in kern)
    return PresentedModule(ring, k, rels)


def module_kernel(M, N, F):
    """Kernel of F: M -> N, with its inclusion matrix into M."""
    if M.ring != N.ring:
        raise RingMismatch(f"{M.ring} vs {N.ring}")
    g = M.ngens
    if g == 0:
        return zero_module(M.ring), []
    dom = M.domain
    relN = N.full_relations()
    stacked = [list(r) for r in F] + relN
    if N.ngens:
        kern = left_kernel(stacked, M.pid, cols=N.ngens)
    else:
        kern = mx.identity(g, dom.zero, dom.one)
    Z = [r[:g] for r in kern if any(r[:g])]
    K = subquotient(Z, M.full_relations(), M.ring, g)
    return K, Z


def module_cokernel(M, N, F):
    """Cokernel of F: M -> N, with the projection N -> coker (identity on generators)."""
    if M.ring != N.ring:
        raise RingMismatch(f"{M.ring} vs {N.ring}")
    C = PresentedModule(N.ring, N.ngens, tuple(N.relations) + tuple(tuple(r) for r in F))
    return C, mx.identity(N.ngens, N.domain.zero, N.domain.one)


def module_image(M, N, F):
    I = subquotient([list(r) for r in F], N.full_relations(), N.ring, N.ngens)
    return I, [list(r) for r in F]


def is_isomorphism(M, N, F):
    K, _ = module_kernel(M, N, F)
    C, _ = module_cokernel(M, N, F)
    return is_zero(K) and is_zero(C)


def express_in(sub_gens, ambient, vectors):
    """Coordinates of each vector w.r.t. generators ``sub_gens`` of a submodule of ``ambient``.

    Returns a matrix (rows = coordinates) or None if some vector lies outside.
    """
    k = len(sub_gens)
    stacked = [list(r) for r in sub_gens] + ambient.full_relations()
    if not stacked:
        return [[] for _ in vectors] if not any(any(v) for v in vectors) else None
    sf = smith_normal_form(stacked, ambient.pid, cols=ambient.ngens)
    out = []
    for v in vectors:
        x = solve_left(stacked, list(v), ambient.pid, sf=sf)
        if x is None:
            return None
        out.append(x[:k])
    return out


def same_submodule(Z1, Z2, ambient):
    """Whether two generator lists span the same submodule of ``ambient``."""
    return express_in(Z1, ambient, Z2) is not None and express_in(Z2, ambient, Z1) is not None


def module_tensor(M, A):
    """Base change M (x)_R A computed on the presentation (right exact)."""
    pid, _ = cover(A)
    domain_for(pid)  # raises NonPIDRing early
    rels = []
    for r in M.full_relations():
        try:
            row = tuple(_coerce_into(pid, x) for x in r)
        except RingMismatch as exc:
            raise RingMismatch(f"cannot base change {M.ring} -> {A}: {exc}") from None
        rels.append(row)
    return PresentedModule(A, M.ngens, tuple(rels), M.labels)


def _coerce_into(pid, x):
    x = pid.coerce(x)
    if not pid.contains(x):
        raise RingMismatch(f"{x!r} not in {pid}")
    return pid.canonical(x)


def semilocal_at(ring, q):
    """The localization of ``ring`` at the single prime q (BadPrime if q is a unit there)."""
    if isinstance(ring, SemilocalPID):
        return ring.localize_at(q)
    if isinstance(ring, (Integers, PolyOverPrimeField)):
        eb = ring.euclid
        q, _ = eb.normalize(q)
        if not eb.is_irreducible(q):
            raise BadPrime(f"{q!r} is not a prime of {ring}")
        return SemilocalPID(ring, (q,))
    if isinstance(ring, TruncatedCompletion):
        eb = ring.euclid
        q, _ = eb.normalize(q)
        if q != ring.prime:
            raise BadPrime(f"{q!r} is a unit in {ring}")
        return ring.base.localize_at(q)
    raise BadPrime(f"cannot localize {ring} at {q!r}")


def module_localize(M, q):
    return module_tensor(M, semilocal_at(M.ring, q))


def completion_truncate(M, q, s):
    """Level-s stage M / q^s M, as a module over R/q^s."""
    if s < 1:
        raise ValueError("level must be >= 1")
    local = semilocal_at(M.ring, q)
    base = M.ring if isinstance(M.ring, SemilocalPID) else local
    if isinstance(M.ring, TruncatedCompletion):
        base = M.ring.base
    T = TruncatedCompletion(base, local.primes[0], s)
    return module_tensor(M, T)


def restrict_to(M, R):
    """View a module over R/q^s (or a finite-length module over R_(q)) as an R-module."""
    if M.ring == R:
        return M
    eb = R.euclid
    if isinstance(M.ring, TruncatedCompletion):
        m = M.ring.modulus
    elif isinstance(M.ring, SemilocalPID) and len(M.ring.primes) == 1:
        rank, facs = fg_invariants(M)
        if rank:
            raise NotFiniteLength("only finite-length local modules restrict to R")
        m = facs[-1] if facs else eb.one
    else:
        raise RingMismatch(f"cannot restrict {M.ring} to {R}")
    local = SemilocalPID(base_ring_of(R), (M.ring.prime if isinstance(M.ring, TruncatedCompletion)
                                            else M.ring.primes[0],))
    ldom = domain_for(local)
    rels = []
    for r in M.full_relations():
        rels.append(tuple(ldom.residue(ldom.coerce(x), m) if m != eb.one else 0 for x in r))
    for i in range(M.ngens):
        row = [0] * M.ngens
        row[i] = m
        rels.append(tuple(row))
    return PresentedModule(R, M.ngens, tuple(rels), M.labels)


def base_ring_of(R):
    return R.base if isinstance(R, SemilocalPID) else R


# -- finite enumeration ---------------------------------------------------

def coords(M, x):
    """Canonical coordinate key of the element x (a row vector) of M."""
    sf = module_snf(M)
    dom = M.domain
    y = mx.vecmat([dom.coerce(a) for a in x], sf.V, dom.zero, width=M.ngens)
    out = []
    for i, a in enumerate(y):
        if i < sf.rank:
            d = sf.diagonal[i]
            out.append(dom.zero if dom.is_unit(d) else dom.coerce(dom.residue(a, _base_scalar(dom, d))))
        else:
            out.append(a)
    return tuple(out)


def from_coords(M, y):
    sf = module_snf(M)
    return mx.vecmat(list(y), sf.Vinv, M.domain.zero, width=M.ngens)


def elements(M, limit=100000):
    """All elements of a finite module, as canonical row vectors."""
    sf = module_snf(M)
    dom = M.domain
    if sf.rank < M.ngens:
        raise NotFiniteLength("cannot enumerate a module with a free part")
    eb = M.pid.euclid
    ranges = []
    total = 1
    for d in sf.diagonal:
        if dom.is_unit(d):
            ranges.append([dom.zero])
            continue
        if M.pid.is_field:
            raise NotFiniteLength("vector spaces over infinite fields are not enumerable")
        res = [dom.coerce(r) for r in eb.residues(_base_scalar(dom, d))]
        total *= len(res)
        if total > limit:
            raise NotFiniteLength(f"module has more than {limit} elements")
        ranges.append(res)
    return [from_coords(M, y) for y in itertools.product(*ranges)]
