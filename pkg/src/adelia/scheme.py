"""Finite point posets, flags, dimension strata and the subset -> ordinal fibration."""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .errors import (ArityMismatch, DimensionViolation, EmptySubset, NotAPartialOrder,
                     UnreducedFlag)
from .rings import Integers, PolyOverPrimeField, SemilocalPID


@dataclass(frozen=True)
class Flag:
    chain: tuple
    reduced: bool = True

    def __post_init__(self):
        object.__setattr__(self, "chain", tuple(self.chain))

    def __len__(self):
        return len(self.chain)

    def __iter__(self):
        return iter(self.chain)

    @property
    def last(self):
        return self.chain[-1]


@dataclass
class SchemePoints:
    points: list
    dim: dict
    below: set  # strict relations (p, q) meaning p < q, transitively closed
    local_data: dict = field(default_factory=dict)
    base_ring: object = None
    n: int = 0

    def le(self, p, q):
        return p == q or (p, q) in self.below

    def lt(self, p, q):
        return (p, q) in self.below

    def points_of_dim(self, i):
        return [p for p in self.points if self.dim[p] == i]

    @property
    def closed_points(self):
        return self.points_of_dim(0)

    @property
    def generic_point(self):
        top = self.points_of_dim(self.n)
        return top[0] if len(top) == 1 else None

    def prime_of(self, p):
        return self.local_data.get(p)

    def point_of_prime(self, q):
        for p, v in self.local_data.items():
            if v == q:
                return p
        raise KeyError(q)

    @property
    def is_curve(self):
        return self.n == 1 and self.base_ring is not None


def _closure(points, rel):
    below = set(rel)
    changed = True
    while changed:
        changed = False
        for (a, b), (c, d) in itertools.product(list(below), repeat=2):
            if b == c and (a, d) not in below:
                below.add((a, d))
                changed = True
    for a, b in below:
        if a == b or (b, a) in below:
            raise NotAPartialOrder(f"relations contain a cycle through {a!r}")
    return below


def point_name(q):
    return f"({q!r})"


def build_semilocal_curve(base, primes):
    """Spec of base localized at finitely many primes: one generic point over the closed ones."""
    if isinstance(base, str):
        base = _parse_base(base)
    ring = SemilocalPID(base, tuple(primes))  # validates: EmptyPrimeSet, DuplicatePrime
    closed = [point_name(q) for q in ring.primes]
    eta = "eta"
    dim = {p: 0 for p in closed}
    dim[eta] = 1
    below = {(p, eta) for p in closed}
    local = {point_name(q): q for q in ring.primes}
    local[eta] = None
    return SchemePoints(closed + [eta], dim, below, local, ring, 1)


def build_artinian(base, prime):
    """Spec of R_(q)/q^k: a single closed point (n = 0)."""
    if isinstance(base, str):
        base = _parse_base(base)
    ring = SemilocalPID(base, (prime,))
    p = point_name(ring.primes[0])
    return SchemePoints([p], {p: 0}, set(), {p: ring.primes[0]}, ring, 0)


def _parse_base(tag):
    tag = tag.strip()
    if tag in ("Z", "ZZ", "Integers"):
        return Integers()
    if tag.startswith("F") and tag.endswith("[t]"):
        return PolyOverPrimeField(int(tag[1:-3]))
    raise ValueError(f"unknown base ring {tag!r}")


def build_synthetic_poset(n, dims, relations):
    """Combinatorial poset: ``dims`` maps point -> closure dimension, relations are (a, b) for a < b."""
    points = list(dims)
    for a, b in relations:
        if a not in dims or b not in dims:
            raise NotAPartialOrder(f"relation ({a!r}, {b!r}) mentions an unknown point")
    below = _closure(points, relations)
    for p, d in dims.items():
        if not 0 <= d <= n:
            raise DimensionViolation(f"point {p!r} has dimension {d} outside [0, {n}]")
    for a, b in below:
        if dims[a] >= dims[b]:
            raise DimensionViolation(f"{a!r} < {b!r} but dim {dims[a]} >= {dims[b]}")
    if points and max(dims.values()) != n:
        raise DimensionViolation(f"declared dimension {n} but max point dimension is {max(dims.values())}")
    return SchemePoints(points, dict(dims), below, {}, None, n)


def flags(X, r, reduced=True):
    """All chains p_0 <= ... <= p_r (strict when reduced), in a deterministic order."""
    if r < 0:
        raise ValueError("r must be >= 0")
    rel = X.lt if reduced else X.le
    out = []

    def extend(chain):
        if len(chain) == r + 1:
            out.append(Flag(tuple(chain), reduced))
            return
        for q in X.points:
            if rel(chain[-1], q):
                extend(chain + [q])

    for p in X.points:
        extend([p])
    return out


def flag_type(X, flag):
    return tuple(X.dim[p] for p in flag.chain)


def stratify(fls, X):
    """Partition reduced flags by dimension type (delta(p_0), ..., delta(p_r))."""
    out = {}
    for f in fls:
        if not f.reduced or any(not X.lt(a, b) for a, b in zip(f.chain, f.chain[1:])):
            raise UnreducedFlag(f"flag {f.chain} is not strictly increasing")
        out.setdefault(flag_type(X, f), []).append(f)
    return out


def flags_of_type(X, typ):
    typ = tuple(typ)
    return [f for f in flags(X, len(typ) - 1, True) if flag_type(X, f) == typ]


def dimension_types(n):
    """All nonempty subsets of [n] as increasing tuples, ordered by size then lexicographically."""
    out = []
    for k in range(1, n + 2):
        out.extend(itertools.combinations(range(n + 1), k))
    return out


# -- the fibration P([n]) \ {} -> semi-simplex category -----------------------

def cube_to_simplex(S):
    S = tuple(sorted(S))
    if not S:
        raise EmptySubset("the empty subset has no ordinal")
    return len(S) - 1


def face(i, r):
    """Coface delta^i : [r-1] -> [r] omitting i, as the tuple of images."""
    if not 0 <= i <= r:
        raise ArityMismatch(f"face index {i} outside [0, {r}]")
    return tuple(k if k < i else k + 1 for k in range(r))


def identity_injection(r):
    return tuple(range(r + 1))


def compose(alpha, beta):
    """alpha o beta (apply beta first)."""
    return tuple(alpha[b] for b in beta)


def injections(r, rp):
    """All strictly increasing maps [r] -> [rp]."""
    return list(itertools.combinations(range(rp + 1), r + 1))


def missing(alpha, rp):
    return tuple(j for j in range(rp + 1) if j not in alpha)


def face_decomposition(alpha, rp):
    """Faces (i_1, ..., i_k) with alpha = delta^{j_k} o ... o delta^{j_1}, j increasing."""
    return missing(alpha, rp)


def _check_injection(alpha, size):
    alpha = tuple(alpha)
    if not alpha:
        raise ArityMismatch("an injection from [r] needs r >= 0")
    if any(b <= a for a, b in zip(alpha, alpha[1:])):
        raise ArityMismatch(f"{alpha} is not strictly increasing")
    if alpha[0] < 0 or alpha[-1] >= size:
        raise ArityMismatch(f"{alpha} does not land in [{size - 1}]")
    return alpha


def cartesian_lift(T, alpha):
    """The subset S = {i_alpha(k)} of T lying over alpha."""
    T = tuple(sorted(T))
    if not T:
        raise EmptySubset("cannot lift into the empty subset")
    alpha = _check_injection(alpha, len(T))
    return tuple(T[a] for a in alpha)


def inclusion_injection(S, T):
    """The injection c(S <= T): positions of S's elements inside T."""
    S, T = tuple(sorted(S)), tuple(sorted(T))
    if not set(S) <= set(T):
        raise ArityMismatch(f"{S} is not a subset of {T}")
    return tuple(T.index(s) for s in S)


def nonempty_subsets(T):
    T = tuple(sorted(T))
    for k in range(1, len(T) + 1):
        yield from itertools.combinations(T, k)


def verify_cartesian(T, alpha):
    """Brute-force check that the lift of alpha is Cartesian; returns a list of failures."""
    T = tuple(sorted(T))
    S = cartesian_lift(T, alpha)
    fails = []
    if inclusion_injection(S, T) != tuple(alpha):
        fails.append(("lies-over", S))
    # uniqueness of the subset over alpha
    for Sp in nonempty_subsets(T):
        if len(Sp) == len(alpha) and inclusion_injection(Sp, T) == tuple(alpha) and Sp != S:
            fails.append(("not-unique", Sp))
    # universal property: every S' <= T over alpha o beta factors uniquely through S over beta
    r = len(alpha) - 1
    for Sp in nonempty_subsets(T):
        gamma = inclusion_injection(Sp, T)
        for beta in injections(len(Sp) - 1, r):
            if compose(alpha, beta) != gamma:
                continue
            if not set(Sp) <= set(S) or inclusion_injection(Sp, S) != beta:
                fails.append(("no-factorization", Sp, beta))
    return fails
