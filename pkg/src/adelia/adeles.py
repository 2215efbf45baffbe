"""Adele modules A(T, F) on desk-scale schemes, their cofaces and cube diagrams.

Everything is generated from a *local system*: a module for each reduced flag
plus the canonical map from the factor of a subflag to the factor of a flag.
Three local systems are provided:

* FiniteLengthSystem -- exact recursion for finite-length coefficients: the
  outermost product runs over the last point x of a flag, F is replaced by its
  level-s stage at x (F/q^s F at a closed point, F (x) K at the generic point),
  and the recursion continues on the truncated flag.  All stages are quotients
  of F on the same generators, so every canonical map is the identity on
  generators.
* FreeCurveSystem -- closed forms for free coefficients on a semilocal curve:
  A(1) = K, A(0) = prod_q Z_q-model, A(01) = prod_q Q_q-model.
* PlaceholderSystem -- synthetic posets without ring data.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from . import matrices as mx
from . import modules as md
from .arith import valuation
from .diagrams import (CubeDiagram, SemiCosimplicialModule, dim_of, one_scalar, sum_objects,
                       zero_scalar)
from .errors import NotFiniteLength, PrecisionMismatch, UnsupportedFamily
from .rings import Integers, TruncatedCompletion
from .scheme import (Flag, cartesian_lift, dimension_types, face, flags,
                     flags_of_type, stratify)
from .valuation_modules import ValuationModule


def _check_precision(s):
    if not isinstance(s, int) or isinstance(s, bool) or s < 1:
        raise PrecisionMismatch(f"precision must be a positive integer, got {s!r}")
    return s


def stabilization_level(F, q):
    """Smallest k with F/q^k F = F_q: the largest q-valuation among the invariant factors."""
    rank, facs = md.fg_invariants(F)
    if rank:
        raise NotFiniteLength("free part never stabilizes")
    return max((valuation(d, q) for d in facs), default=0)


# -- local systems --------------------------------------------------------------

class LocalSystem:
    kind = "presented"

    def __init__(self, X, s):
        self.X = X
        self.s = _check_precision(s)
        self._cache = {}

    def factor(self, flag):
        key = tuple(flag.chain) if isinstance(flag, Flag) else tuple(flag)
        if key not in self._cache:
            self._cache[key] = self._factor(key)
        return self._cache[key]

    def _factor(self, chain):
        raise NotImplementedError

    def local_map(self, sub, flag):
        raise NotImplementedError

    def base(self):
        raise NotImplementedError

    def base_map(self, flag):
        raise NotImplementedError


class FiniteLengthSystem(LocalSystem):
    def __init__(self, X, F, s, exact=True):
        super().__init__(X, s)
        if X.base_ring is None:
            raise UnsupportedFamily("finite-length adeles need a scheme with ring data")
        if F.ring != X.base_ring:
            raise UnsupportedFamily(f"coefficient ring {F.ring} is not {X.base_ring}")
        if not md.is_finite_length(F):
            raise NotFiniteLength("coefficient has a free part; use the closed forms")
        self.F = F
        self.exact = exact
        self.level = {}
        for p in X.points:
            q = X.prime_of(p)
            if q is not None:
                stab = stabilization_level(F, q)
                self.level[p] = max(s, stab) if exact else s

    def stage(self, M, x):
        """Level-s replacement at the point x, kept on M's generators."""
        dom = M.domain
        q = self.X.prime_of(x)
        g = M.ngens
        if q is None:
            # generic point: M (x) K vanishes for torsion M
            rows = mx.identity(g, dom.zero, dom.one)
        else:
            qs = dom.coerce(q ** self.level[x])
            rows = [[qs if i == j else dom.zero for j in range(g)] for i in range(g)]
        return md.PresentedModule(M.ring, g, tuple(M.relations) + tuple(map(tuple, rows)))

    def _factor(self, chain):
        M = self.F
        for x in reversed(chain):
            M = self.stage(M, x)
        return M

    def local_map(self, sub, flag):
        dom = self.F.domain
        return mx.identity(self.F.ngens, dom.zero, dom.one)

    def base(self):
        return self.F

    def base_map(self, flag):
        return self.local_map(None, flag)


class FreeCurveSystem(LocalSystem):
    """F = R^k on a semilocal curve; factors are rational-model groups in K^k."""

    kind = "valuation"

    def __init__(self, X, k, s, base_override=None):
        super().__init__(X, s)
        if not X.is_curve:
            raise UnsupportedFamily("closed forms exist only for semilocal curves")
        self.k = k
        self.eb = X.base_ring.euclid
        self.base_override = base_override

    def _factor(self, chain):
        X = self.X
        if len(chain) == 1 and X.prime_of(chain[0]) is not None:
            return ValuationModule.integral_at(self.eb, self.k, [X.prime_of(chain[0])])
        return ValuationModule.full(self.eb, self.k)

    def local_map(self, sub, flag):
        d = self.base().dom
        return mx.identity(self.k, d.zero, d.one)

    def base(self):
        if self.base_override == "Z":
            return ValuationModule.integral_everywhere(self.eb, self.k)
        return ValuationModule.integral_at(self.eb, self.k, list(self.X.base_ring.primes))

    def base_map(self, flag):
        return self.local_map(None, flag)


class PlaceholderSystem(LocalSystem):
    """Z/2^{n+1-r} on each flag of length r+1; maps are identity on the generator."""

    def __init__(self, X, s=1):
        super().__init__(X, s)
        self.ring = Integers()

    def _factor(self, chain):
        return md.cyclic(self.ring, 2 ** (self.X.n + 2 - len(chain)))

    def local_map(self, sub, flag):
        return [[1]]

    def base(self):
        return md.cyclic(self.ring, 2 ** (self.X.n + 2))

    def base_map(self, flag):
        return [[1]]


def local_system(X, F, s, base_override=None):
    """Pick the local system matching the coefficient."""
    if X.base_ring is None:
        return PlaceholderSystem(X, s)
    if isinstance(F, int):
        return FreeCurveSystem(X, F, s, base_override)
    rank, facs = md.fg_invariants(F)
    if rank == 0:
        return FiniteLengthSystem(X, F, s)
    if not facs and X.is_curve:
        return FreeCurveSystem(X, rank, s, base_override)
    raise UnsupportedFamily("mixed coefficients: split into free and torsion parts first")


# -- adele objects ----------------------------------------------------------------

@dataclass
class AdeleObject:
    index: tuple            # dimension type, or the tuple of flags for an explicit set
    coefficient: object
    precision: int
    carrier: object         # PresentedModule or ValuationModule
    factors: dict           # flag chain -> module
    order: list             # flag chains in carrier block order
    regime: str
    truncation: list = field(default_factory=list)  # level-s stages (closed forms)

    def local_factor(self, flag):
        return self.factors[tuple(flag.chain) if isinstance(flag, Flag) else tuple(flag)]

    def embedding(self):
        """Matrix of carrier -> prod of local factors (block identity by construction)."""
        z, o = zero_scalar(self.carrier), one_scalar(self.carrier)
        return mx.identity(dim_of(self.carrier), z, o)


def adele_over_flags(system, fls, index=None, coefficient=None):
    fls = list(fls)
    factors = {tuple(f.chain): system.factor(f) for f in fls}
    carrier = sum_objects([factors[tuple(f.chain)] for f in fls], like=system.base())
    regime = "finite-length" if isinstance(system, FiniteLengthSystem) else (
        "rational" if system.kind == "valuation" else "placeholder")
    return AdeleObject(index if index is not None else tuple(tuple(f.chain) for f in fls),
                       coefficient, system.s, carrier, factors,
                       [tuple(f.chain) for f in fls], regime)


def adele_finite_length(typ, F, X, s, exact=True):
    """A(type, F) for finite-length F, by the flag recursion."""
    system = FiniteLengthSystem(X, F, s, exact=exact)
    return adele_over_flags(system, flags_of_type(X, typ), tuple(typ), F)


def truncation_stage(X, k, s):
    """prod_q R/q^s on k generators: the level-s stage of A(0) (x) R^k."""
    R = X.base_ring
    return [md.free(TruncatedCompletion(R, q, s), k) for q in R.primes]


def adele_closed_form(typ, F, X, s, base_override=None):
    """A(type, F) for free F on a semilocal curve, as a rational model."""
    _check_precision(s)
    if not X.is_curve:
        raise UnsupportedFamily("closed forms are implemented for semilocal curves only")
    if isinstance(F, int):
        k = F
    else:
        rank, facs = md.fg_invariants(F)
        if facs:
            raise UnsupportedFamily("closed forms need a free coefficient")
        k = rank
    system = FreeCurveSystem(X, k, s, base_override)
    obj = adele_over_flags(system, flags_of_type(X, typ), tuple(typ), F)
    if tuple(typ) == (0,):
        obj.truncation = truncation_stage(X, k, s)
    return obj


def adele(typ, F, X, s):
    if X.base_ring is None:
        return adele_over_flags(PlaceholderSystem(X, s), flags_of_type(X, typ), tuple(typ), None)
    if isinstance(F, int) or md.fg_invariants(F)[0]:
        return adele_closed_form(typ, F, X, s)
    return adele_finite_length(typ, F, X, s)


# -- cosimplicial object, complex, cube -----------------------------------------------

def _level_layout(system, X, r):
    """Flags at level r ordered by dimension type, then enumeration order."""
    strata = stratify(flags(X, r, True), X)
    out = []
    for typ in dimension_types(X.n):
        if len(typ) == r + 1:
            out.extend(strata.get(typ, []))
    return out


def _offsets(system, fls):
    offs, pos = {}, 0
    for f in fls:
        offs[tuple(f.chain)] = pos
        pos += dim_of(system.factor(f))
    return offs, pos


def coface_maps(X, F, s, system=None):
    """Reduced semi-cosimplicial module A^r = prod over reduced r-flags, with its cofaces."""
    system = system or local_system(X, F, s)
    if system.s != s:
        raise PrecisionMismatch(f"system built at precision {system.s}, asked for {s}")
    like = system.base()
    z = zero_scalar(like)
    layouts = [_level_layout(system, X, r) for r in range(X.n + 1)]
    levels, labels, offsets = [], [], []
    for fls in layouts:
        levels.append(sum_objects([system.factor(f) for f in fls], like=like))
        labels.append([(tuple(f.chain), dim_of(system.factor(f))) for f in fls])
        offsets.append(_offsets(system, fls))
    cofaces = {}
    for r in range(1, X.n + 1):
        src_off, src_dim = offsets[r - 1]
        tgt_off, tgt_dim = offsets[r]
        for i in range(r + 1):
            D = mx.zeros(src_dim, tgt_dim, z)
            for f in layouts[r]:
                chain = tuple(f.chain)
                sub = chain[:i] + chain[i + 1:]
                block = system.local_map(sub, chain)
                a, b = src_off[sub], tgt_off[chain]
                for u, row in enumerate(block):
                    for v, x in enumerate(row):
                        D[a + u][b + v] = x
            cofaces[(r, i)] = D
    base = system.base()
    off0, dim0 = offsets[0]
    eps = mx.zeros(dim_of(base), dim0, z)
    for f in layouts[0]:
        block = system.base_map(f)
        b = off0[tuple(f.chain)]
        for u, row in enumerate(block):
            for v, x in enumerate(row):
                eps[u][b + v] = x
    return SemiCosimplicialModule(levels, cofaces, labels, (base, eps))


def reduced_adele_complex(X, F, s, augmented=False, system=None):
    M = coface_maps(X, F, s, system)
    C = M.complex(augmented)
    C.check()
    return C


def _restrict_flag(X, chain, S):
    return tuple(p for p in chain if X.dim[p] in S)


def cube_diagram(X, F, s, system=None, with_initial=True):
    """T |-> A(T) (x) F over P([n]), with A(empty) = Gamma(F)."""
    system = system or local_system(X, F, s)
    like = system.base()
    z = zero_scalar(like)
    subsets = [()] + dimension_types(X.n)
    verts, labels, offs = {}, {}, {}
    for S in subsets:
        if not S:
            verts[S] = system.base()
            labels[S] = [((), dim_of(verts[S]))]
            offs[S] = {(): 0}
            continue
        fls = flags_of_type(X, S)
        verts[S] = sum_objects([system.factor(f) for f in fls], like=like)
        labels[S] = [(tuple(f.chain), dim_of(system.factor(f))) for f in fls]
        offs[S] = _offsets(system, fls)[0]
    edges = {}
    for S in subsets:
        for x in range(X.n + 1):
            if x in S:
                continue
            T = tuple(sorted(S + (x,)))
            E = mx.zeros(dim_of(verts[S]), dim_of(verts[T]), z)
            for chain, _ in labels[T]:
                if S:
                    sub = _restrict_flag(X, chain, S)
                    block = system.local_map(sub, chain)
                    a = offs[S][sub]
                else:
                    block = system.base_map(Flag(chain))
                    a = 0
                b = offs[T][chain]
                for u, row in enumerate(block):
                    for v, val in enumerate(row):
                        E[a + u][b + v] = val
            edges[(S, T)] = E
    D = CubeDiagram(X.n, verts, edges, labels)
    D.check_commutes()
    return D if with_initial else D.without_initial()


def kan_compare(cube):
    """Right Kan extension along c_n: level r is the product over |S| = r+1."""
    n = cube.n
    like = cube.vertices[(0,)]
    z = zero_scalar(like)
    by_level = [[S for S in dimension_types(n) if len(S) == r + 1] for r in range(n + 1)]
    levels, labels, offsets = [], [], []
    for subs in by_level:
        levels.append(sum_objects([cube.vertices[S] for S in subs], like=like))
        lab, off, pos = [], {}, 0
        for S in subs:
            off[S] = pos
            for blk, w in cube.labels.get(S, [(S, dim_of(cube.vertices[S]))]):
                lab.append((blk, w))
            pos += dim_of(cube.vertices[S])
        labels.append(lab)
        offsets.append((off, pos))
    cofaces = {}
    for r in range(1, n + 1):
        src_off, src_dim = offsets[r - 1]
        tgt_off, tgt_dim = offsets[r]
        for i in range(r + 1):
            D = mx.zeros(src_dim, tgt_dim, z)
            alpha = face(i, r)
            for T in by_level[r]:
                S = cartesian_lift(T, alpha)
                E = cube.edge(S, T)
                a, b = src_off[S], tgt_off[T]
                for u, row in enumerate(E):
                    for v, val in enumerate(row):
                        D[a + u][b + v] = val
            cofaces[(r, i)] = D
    aug = None
    if cube.has_initial:
        base = cube.vertices[()]
        off0, dim0 = offsets[0]
        eps = mx.zeros(dim_of(base), dim0, z)
        for S in by_level[0]:
            E = cube.edge((), S)
            for u, row in enumerate(E):
                for v, val in enumerate(row):
                    eps[u][off0[S] + v] = val
        aug = (base, eps)
    return SemiCosimplicialModule(levels, cofaces, labels, aug)


def label_permutation(labels_a, labels_b):
    """Generator permutation sending layout a to layout b (blocks matched by label)."""
    pos_b, p = {}, 0
    for lab, w in labels_b:
        pos_b[lab] = (p, w)
        p += w
    perm = []
    for lab, w in labels_a:
        if lab not in pos_b or pos_b[lab][1] != w:
            return None
        start = pos_b[lab][0]
        perm.extend(range(start, start + w))
    return perm


def permutation_matrix(perm, zero, one):
    n = len(perm)
    P = mx.zeros(n, n, zero)
    for i, j in enumerate(perm):
        P[i][j] = one
    return P


def compare_semicosimplicial(A, B):
    """Level-and-coface isomorphism of two semi-cosimplicial modules via label-matched blocks.

    Returns (ok, message).
    """
    from .diagrams import same_map
    if len(A.levels) != len(B.levels):
        return False, "different number of levels"
    perms = []
    for r, (la, lb) in enumerate(zip(A.labels, B.labels)):
        perm = label_permutation(la, lb)
        if perm is None or len(perm) != dim_of(B.levels[r]):
            return False, f"level {r}: blocks do not match"
        perms.append(perm)
        z, o = zero_scalar(A.levels[r]), one_scalar(A.levels[r])
        P = permutation_matrix(perm, z, o)
        if not _iso_via(A.levels[r], B.levels[r], P):
            return False, f"level {r}: permutation is not an isomorphism"
    for (r, i), Da in A.cofaces.items():
        Db = B.cofaces[(r, i)]
        z, o = zero_scalar(A.levels[r - 1]), one_scalar(A.levels[r - 1])
        P0 = permutation_matrix(perms[r - 1], z, o)
        P1 = permutation_matrix(perms[r], z, o)
        lhs = mx.matmul(Da, P1, z, inner=len(P1)) if Da else []
        rhs = mx.matmul(P0, Db, z, inner=len(Db)) if P0 else []
        if not same_map(lhs, rhs, B.levels[r]):
            return False, f"coface d^{i} at level {r} differs"
    return True, "isomorphic"


def _iso_via(M, N, P):
    if isinstance(M, ValuationModule):
        return M.image(P, N.N).equals(N) if M.m or N.m else True
    return md.is_well_defined(M, N, P) and md.is_isomorphism(M, N, P)


def decomposition_check(X, F, s, r, system=None):
    """carrier(A(S_r^red, F)) against the product over dimension types of A(type, F)."""
    system = system or local_system(X, F, s)
    whole = adele_over_flags(system, flags(X, r, True), None, F)
    parts = []
    for typ in dimension_types(X.n):
        if len(typ) == r + 1:
            parts.append(adele_over_flags(system, flags_of_type(X, typ), typ, F))
    prod_labels = [(c, dim_of(p.factors[c])) for p in parts for c in p.order]
    whole_labels = [(c, dim_of(whole.factors[c])) for c in whole.order]
    like = system.base()
    product = sum_objects([p.carrier for p in parts], like=like)
    perm = label_permutation(whole_labels, prod_labels)
    if perm is None:
        return False, whole, product
    P = permutation_matrix(perm, zero_scalar(like), one_scalar(like))
    return _iso_via(whole.carrier, product, P), whole, product
