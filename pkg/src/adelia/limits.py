"""Cohomology, strict limits of cube and semi-cosimplicial diagrams, and their comparison.

Limits are computed as submodules of the product of the singleton vertices
(cube) or of level 0 (semi-cosimplicial).  Every computation is paired with a
brute-force oracle over the full diagram; for small finite modules there is
also a literal enumeration of compatible families.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from . import matrices as mx
from . import modules as md
from .diagrams import dim_of, kind_of, one_scalar, sum_objects, zero_scalar
from .errors import UnsupportedFamily
from .scheme import dimension_types, injections
from .valuation_modules import ValuationModule


# -- cohomology ---------------------------------------------------------------------

def complex_cohomology(C):
    """H^i = ker d^i / im d^{i-1} for a complex of presented modules, as (rank, factors)."""
    C.check()
    out = []
    for i, M in enumerate(C.objects):
        if i < len(C.diffs):
            _, Z = md.module_kernel(M, C.objects[i + 1], C.diffs[i])
        else:
            Z = mx.identity(M.ngens, M.domain.zero, M.domain.one)
        B = M.full_relations()
        if i > 0:
            B = B + [list(r) for r in C.diffs[i - 1]]
        H = md.subquotient(Z, B, M.ring, M.ngens)
        out.append(md.fg_invariants(H))
    return out


def cohomology_modules(C):
    C.check()
    out = []
    for i, M in enumerate(C.objects):
        if i < len(C.diffs):
            _, Z = md.module_kernel(M, C.objects[i + 1], C.diffs[i])
        else:
            Z = mx.identity(M.ngens, M.domain.zero, M.domain.one)
        B = M.full_relations() + ([list(r) for r in C.diffs[i - 1]] if i else [])
        out.append(md.subquotient(Z, B, M.ring, M.ngens))
    return out


# -- shared kernel machinery ------------------------------------------------------

def _kernel_in(ambient, target, Phi):
    """Submodule of ``ambient`` killed by Phi, as (object, generators-or-None)."""
    if isinstance(ambient, ValuationModule):
        return ambient.kernel(Phi), None
    K, Z = md.module_kernel(ambient, target, Phi)
    return K, Z


def _place(M, a, b, block, sign=1):
    for u, row in enumerate(block):
        for v, x in enumerate(row):
            if x:
                M[a + u][b + v] = M[a + u][b + v] + (x if sign > 0 else -x)


def _layout(objs):
    offs, pos = [], 0
    for o in objs:
        offs.append(pos)
        pos += dim_of(o)
    return offs, pos


def _descriptor(obj):
    if isinstance(obj, ValuationModule):
        return obj.describe()
    rank, facs = md.fg_invariants(obj)
    return {"rank": rank, "invariant_factors": [repr(d) for d in facs]}


@dataclass
class LimitResult:
    kind: str
    ambient: object           # product of singleton vertices / level 0
    module: object            # limit as a module (presented or valuation)
    generators: list          # presented: limit generators inside the ambient; else None
    oracle_agrees: bool
    oracle: dict = field(default_factory=dict)
    defect: dict = None

    def descriptor(self):
        return _descriptor(self.module)

    def contains(self, x):
        if self.kind == "valuation":
            return self.module.contains(x)
        return md.express_in(self.generators, self.ambient, [x]) is not None


def _same_sub(kind, ambient, A, ZA, B, ZB):
    if kind == "valuation":
        return A.equals(B)
    return md.same_submodule(ZA, ZB, ambient)


# -- cube limits -------------------------------------------------------------------

def _cube_parts(D):
    if D.has_initial:
        D = D.without_initial()
    D.check_commutes()
    return D


def cube_limit(D, literal_bound=4096):
    """Strict limit over nonempty subsets, via the singleton/pair difference kernel."""
    D = _cube_parts(D)
    n = D.n
    singles = [(i,) for i in range(n + 1)]
    pairs = list(itertools.combinations(range(n + 1), 2))
    like = D.vertices[singles[0]]
    z = zero_scalar(like)
    A1 = sum_objects([D.vertices[S] for S in singles], like=like)
    A2 = sum_objects([D.vertices[P] for P in pairs], like=like)
    o1, d1 = _layout([D.vertices[S] for S in singles])
    o2, d2 = _layout([D.vertices[P] for P in pairs])
    Phi = mx.zeros(d1, d2, z)
    for k, (i, j) in enumerate(pairs):
        _place(Phi, o1[i], o2[k], D.edge((i,), (i, j)), +1)
        _place(Phi, o1[j], o2[k], D.edge((j,), (i, j)), -1)
    K, Z = _kernel_in(A1, A2, Phi)
    kind = kind_of(like)
    full, Zfull, ok_inj = full_family_limit(D, project=True)
    agrees = ok_inj and _same_sub(kind, A1, K, Z, full, Zfull)
    oracle = {"full_families": agrees}
    if kind == "presented":
        lit = literal_families(D, literal_bound)
        if lit is not None:
            count, members_ok = lit
            size = md.order(K)
            oracle["literal_count"] = count
            oracle["literal_agrees"] = (count == size) and members_ok(Z, A1)
            agrees = agrees and oracle["literal_agrees"]
    return LimitResult(kind, A1, K, Z, agrees, oracle)


def full_family_limit(D, project=True):
    """Compatible families over every vertex and covering inclusion (no shortcut).

    Returns (limit projected to singletons, generators, projection injective).
    """
    n = D.n
    subsets = dimension_types(n)
    like = D.vertices[subsets[0]]
    z, one = zero_scalar(like), one_scalar(like)
    objs = [D.vertices[S] for S in subsets]
    offs, total = _layout(objs)
    idx = {S: k for k, S in enumerate(subsets)}
    edges = [(S, T) for (S, T) in D.edges if S]
    targets = [D.vertices[T] for _, T in edges]
    eoffs, etotal = _layout(targets)
    Psi = mx.zeros(total, etotal, z)
    for k, (S, T) in enumerate(edges):
        _place(Psi, offs[idx[S]], eoffs[k], D.edges[(S, T)], +1)
        I = mx.identity(dim_of(D.vertices[T]), z, one)
        _place(Psi, offs[idx[T]], eoffs[k], I, -1)
    Aall = sum_objects(objs, like=like)
    Eall = sum_objects(targets, like=like)
    K, Z = _kernel_in(Aall, Eall, Psi)
    width1 = sum(dim_of(D.vertices[(i,)]) for i in range(n + 1))
    cols = list(range(width1))  # singletons come first in dimension_types order
    if kind_of(like) == "valuation":
        P = mx.zeros(total, width1, z)
        for c in cols:
            P[c][c] = one
        try:
            return K.image(P, width1), None, True
        except UnsupportedFamily:
            return K, None, False
    Zp = mx.select_cols(Z, cols)
    A1 = sum_objects([D.vertices[(i,)] for i in range(n + 1)], like=like)
    Kp, _ = md.module_kernel(K, A1, Zp) if Z else (md.zero_module(like.ring), None)
    return None, Zp, md.is_zero(Kp)


def literal_families(D, bound):
    """Enumerate compatible families element by element (tiny finite diagrams only)."""
    subsets = dimension_types(D.n)
    try:
        elems = {S: md.elements(D.vertices[S], limit=bound) for S in subsets}
    except Exception:
        return None
    singles = [(i,) for i in range(D.n + 1)]
    total = 1
    for S in singles:
        total *= len(elems[S])
    if total > bound:
        return None
    keyed = {S: {md.coords(D.vertices[S], x): x for x in elems[S]} for S in subsets}
    z = zero_scalar(D.vertices[singles[0]])
    found = []

    def image(S, T, x):
        return mx.vecmat(x, D.edges[(S, T)], z, width=dim_of(D.vertices[T]))

    def extend(k, assign):
        if k == len(subsets):
            found.append(dict(assign))
            return
        S = subsets[k]
        preds = [P for P in subsets[:k] if (P, S) in D.edges]
        for key, x in keyed[S].items():
            if all(md.coords(D.vertices[S], image(P, S, assign[P])) == key for P in preds):
                assign[S] = x
                extend(k + 1, assign)
                del assign[S]

    extend(0, {})

    def members_ok(Z, A1):
        vecs = [list(itertools.chain.from_iterable(fam[S] for S in singles)) for fam in found]
        return md.express_in(Z, A1, vecs) is not None

    return len(found), members_ok


# -- semi-cosimplicial limits ----------------------------------------------------------

def semicosimplicial_limit(M):
    """Equalizer of d^0, d^1 on M^0, checked against families over all injections."""
    M.check_identities()
    M0 = M.levels[0]
    z = zero_scalar(M0)
    if M.n >= 1:
        Phi = mx.sub(M.cofaces[(1, 0)], M.cofaces[(1, 1)])
        K, Z = _kernel_in(M0, M.levels[1], Phi)
    else:
        K, Z = _kernel_in(M0, sum_objects([], like=M0), [[] for _ in range(dim_of(M0))])
    kind = kind_of(M0)
    # oracle: x_r' = alpha_*(x_r) for every injection alpha : [r] -> [r'], r < r'
    objs = list(M.levels)
    offs, total = _layout(objs)
    arrows = [(r, rp, a) for rp in range(M.n + 1) for r in range(rp) for a in injections(r, rp)]
    targets = [M.levels[rp] for _, rp, _ in arrows]
    eoffs, etotal = _layout(targets)
    one = one_scalar(M0)
    Psi = mx.zeros(total, etotal, z)
    for k, (r, rp, a) in enumerate(arrows):
        _place(Psi, offs[r], eoffs[k], M.alpha_map(a, rp), +1)
        _place(Psi, offs[rp], eoffs[k], mx.identity(dim_of(M.levels[rp]), z, one), -1)
    Aall = sum_objects(objs, like=M0)
    Eall = sum_objects(targets, like=M0)
    Kf, Zf = _kernel_in(Aall, Eall, Psi)
    w0 = dim_of(M0)
    if kind == "valuation":
        P = mx.zeros(total, w0, z)
        for c in range(w0):
            P[c][c] = one
        try:
            proj = Kf.image(P, w0)
            agrees = proj.equals(K)
        except UnsupportedFamily:
            agrees = False
    else:
        Zp = mx.select_cols(Zf, list(range(w0)))
        inj = md.is_zero(md.module_kernel(Kf, M0, Zp)[0]) if Zf else True
        agrees = inj and md.same_submodule(Zp, Z, M0)
    return LimitResult(kind, M0, K, Z, agrees, {"all_injections": agrees})


# -- comparison ---------------------------------------------------------------------

def compare_limits(D, M):
    """cube_limit(D) against semicosimplicial_limit(M) inside the common level-0 product."""
    L1 = cube_limit(D)
    L2 = semicosimplicial_limit(M)
    if L1.kind != L2.kind or dim_of(L1.ambient) != dim_of(L2.ambient):
        return {"verdict": "fail", "defect": "ambient mismatch"}
    same = _same_sub(L1.kind, L2.ambient, L1.module, L1.generators, L2.module, L2.generators)
    rep = {
        "verdict": "pass" if same and L1.oracle_agrees and L2.oracle_agrees else "fail",
        "cube_limit": L1.descriptor(),
        "semicosimplicial_limit": L2.descriptor(),
        "maps": "identity on the product of singleton vertices (both directions)",
        "oracles": {"cube": L1.oracle, "semicosimplicial": L2.oracle},
    }
    if not same:
        rep["defect"] = "limits differ as submodules of level 0"
    return rep


def is_limit_cube(D):
    """Whether the vertex at the empty set maps isomorphically onto the limit of the rest."""
    if not D.has_initial:
        raise ValueError("is_limit_cube needs the initial vertex")
    D.check_commutes()
    rest = D.without_initial()
    L = cube_limit(rest)
    base = D.vertices[()]
    n = D.n
    psi = mx.hstack(*[D.edge((), (i,)) for i in range(n + 1)])
    if not psi:
        psi = [[] for _ in range(dim_of(base))]
    report = {"limit": L.descriptor(), "oracle_agrees": L.oracle_agrees}
    if L.kind == "valuation":
        ok, defect = _valuation_defect(base, L, psi)
    else:
        ok, defect = _presented_defect(base, L, psi)
    report["defect"] = defect
    report["criterion"] = fiberwise_criterion(D)
    report["verdict"] = ok and L.oracle_agrees
    return ok and L.oracle_agrees, report


def _presented_defect(base, L, psi):
    coords = md.express_in(L.generators, L.ambient, psi) if psi else []
    if coords is None:
        return False, {"not_a_cone": True}
    K, _ = md.module_kernel(base, L.module, coords)
    C, _ = md.module_cokernel(base, L.module, coords)
    kd, cd = _descriptor(K), _descriptor(C)
    ok = md.is_zero(K) and md.is_zero(C)
    return ok, {"kernel": kd, "cokernel": cd}


def _valuation_defect(base, L, psi):
    try:
        img = base.image(psi, L.ambient.N)
    except UnsupportedFamily:
        return False, {"kernel": "nonzero (map not injective on the K-span)"}
    inside, stray = img.subset_of(L.module)
    if not inside:
        return False, {"not_a_cone": [str(x) for x in stray]}
    onto, witness = L.module.subset_of(img)
    if onto:
        return True, {"kernel": "0", "cokernel": "0"}
    return False, {"kernel": "0", "cokernel": "nonzero",
                   "witness": [str(x) for x in witness]}


def _surjective(src, tgt, F):
    if isinstance(src, ValuationModule):
        try:
            return tgt.subset_of(src.image(F, tgt.N))[0]
        except UnsupportedFamily:
            return False
    C, _ = md.module_cokernel(src, tgt, F)
    return md.is_zero(C)


def fiberwise_criterion(D):
    """For squares with surjective edges in one direction: pullback iff fibers match.

    Returns "inapplicable" when no direction qualifies (always for n != 1).
    """
    if D.n != 1 or kind_of(D.vertices[()]) != "presented":
        return "criterion inapplicable"
    for d in (0, 1):
        e = 1 - d
        A, B, C, T = D.vertices[()], D.vertices[(e,)], D.vertices[(d,)], D.vertices[(0, 1)]
        if not (_surjective(A, C, D.edge((), (d,))) and _surjective(B, T, D.edge((e,), (0, 1)))):
            continue
        KA, ZA = md.module_kernel(A, C, D.edge((), (d,)))
        KB, ZB = md.module_kernel(B, T, D.edge((e,), (0, 1)))
        # induced map KA -> KB: push generators of KA along A -> B, express in KB
        pushed = mx.matmul(ZA, D.edge((), (e,)), A.domain.zero, inner=A.ngens) if ZA else []
        coords = md.express_in(ZB, B, pushed) if pushed else []
        if coords is None:
            return "criterion violated"
        fiber_iso = md.is_isomorphism(KA, KB, coords) if ZA or ZB else True
        if ZA and not ZB:
            fiber_iso = md.is_zero(KA)
        return f"direction {d}: fibers {'match' if fiber_iso else 'differ'}"
    return "criterion inapplicable"


# -- rational-model complexes --------------------------------------------------------

def rational_h0(M):
    """Kernel of the first differential on a rational-model semi-cosimplicial module."""
    D = M.alternating(1)
    return M.levels[0].kernel(D)


def principal_part(x, q, eb, dom):
    """The q-principal part of x: r / q^k with x - r/q^k integral at q, integral elsewhere."""
    from .arith import valuation
    if not x:
        return dom.zero
    v = valuation(x, q)
    if v >= 0:
        return dom.zero
    k = -v
    u = x * dom.coerce(q) ** k  # integral at q
    m = q ** k
    r = (u.numerator * eb.inverse_mod(u.denominator % m, m)) % m
    return dom.coerce(r) / dom.coerce(q) ** k


def strong_approximation(a, primes, eb, dom):
    """Write an adele-model element a = (a_q) as f - o with f global and o integral at each q."""
    f = dom.zero
    for x, q in zip(a, primes):
        f = f + principal_part(x, q, eb, dom)
    o = [f - x for x in a]
    return f, o
