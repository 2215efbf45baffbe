"""Rational-representative models of (products of) local rings and their fractions.

A ValuationModule is the subgroup of K^N (K = Q or F_p(t)) consisting of the
vectors c*B, where B is an m x N basis over K and the coordinate vector c
satisfies integrality constraints:

* ``local[q]`` : an m x a matrix M_q with c*M_q integral at the prime q;
* ``everywhere``: an m x e matrix E with c*E integral at every prime.

Z_(2)-points, the Z_q-model of integral adeles, Q_q-models, R itself and
plain Z all fit this shape, and kernels/images of K-linear maps preserve it,
so strict limits of these diagrams are computed exactly.  Membership and
inclusion are decided prime by prime; only finitely many primes can behave
differently from a generic one, and one generic representative is checked.
"""
from __future__ import annotations

from fractions import Fraction

from . import matrices as mx
from .arith import IntegerBase, Poly, valuation
from .errors import UnsupportedFamily
from .rings import SemilocalPID, base_spec_of
from .snf import FieldDomain, left_kernel, smith_normal_form, solve_left


def _primes_of(eb, x):
    if not x:
        return set()
    out = set()
    for part in (x.numerator, x.denominator):
        out.update(eb.factor(part).keys())
    return out


def _is_integral_everywhere(x):
    den = x.denominator
    return den == 1 or (isinstance(den, Poly) and den.degree == 0)


def _vals(vec, q):
    return [valuation(x, q) for x in vec if x]


class ValuationModule:
    def __init__(self, eb, basis, local=None, everywhere=None, ambient=None, check=True):
        self.eb = eb
        self.dom = FieldDomain(eb)
        f = self.dom.coerce
        self.basis = [[f(x) for x in r] for r in basis]
        self.m = len(self.basis)
        self.N = len(self.basis[0]) if self.basis else (ambient or 0)
        if ambient is not None and self.basis and ambient != self.N:
            raise ValueError("basis width does not match the ambient dimension")
        self.local = {}
        for q, Mq in (local or {}).items():
            Mq = [[f(x) for x in r] for r in Mq]
            if len(Mq) != self.m:
                raise ValueError("local form has the wrong number of rows")
            self.local[q] = Mq
        E = everywhere if everywhere is not None else [[] for _ in range(self.m)]
        self.everywhere = [[f(x) for x in r] for r in E]
        if len(self.everywhere) != self.m:
            raise ValueError("everywhere form has the wrong number of rows")
        if check and self.m:
            sf = smith_normal_form(self.basis, self.dom, cols=self.N)
            if sf.rank != self.m:
                raise ValueError("basis rows are linearly dependent")

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, eb, N):
        return cls(eb, [], ambient=N)

    @classmethod
    def full(cls, eb, N):
        """All of K^N (the fraction-field model)."""
        dom = FieldDomain(eb)
        return cls(eb, mx.identity(N, dom.zero, dom.one))

    @classmethod
    def integral_at(cls, eb, N, primes):
        """Vectors integral at every listed prime: R^N for R = semilocal ring at ``primes``."""
        dom = FieldDomain(eb)
        I = mx.identity(N, dom.zero, dom.one)
        return cls(eb, I, local={q: I for q in primes})

    @classmethod
    def integral_everywhere(cls, eb, N):
        dom = FieldDomain(eb)
        I = mx.identity(N, dom.zero, dom.one)
        return cls(eb, I, everywhere=I)

    @classmethod
    def componentwise(cls, eb, primes):
        """prod_q Z_(q)-model: the q-th coordinate is integral at q."""
        dom = FieldDomain(eb)
        n = len(primes)
        I = mx.identity(n, dom.zero, dom.one)
        return cls(eb, I, local={q: [[I[i][k]] for i in range(n)] for k, q in enumerate(primes)})

    # -- descriptors -------------------------------------------------------

    @property
    def ambient(self):
        return self.N

    def explicit_primes(self):
        return set(self.local)

    def has_everywhere(self):
        return any(any(r) for r in self.everywhere)

    def forms_at(self, q):
        """Constraint matrix active at q (explicit columns then everywhere columns)."""
        parts = []
        if q in self.local:
            parts.append(self.local[q])
        parts.append(self.everywhere)
        return mx.hstack(*parts) if self.m else []

    def describe(self):
        """Membership predicate as data, for reports."""
        out = {"ambient": self.N, "dimension": self.m,
               "integral_at": sorted(repr(q) for q in self.local)}
        if self.has_everywhere():
            out["integral_everywhere"] = True
        return out

    def __repr__(self):
        return f"ValuationModule(dim={self.m}, ambient={self.N}, primes={sorted(map(repr, self.local))})"

    # -- coordinates and membership ---------------------------------------

    def coordinates(self, x):
        if not self.m:
            return [] if not any(x) else None
        return solve_left(self.basis, [self.dom.coerce(a) for a in x], self.dom)

    def _satisfies(self, c):
        for q, Mq in self.local.items():
            if any(v < 0 for v in _vals(mx.vecmat(c, Mq, self.dom.zero, width=len(Mq[0]) if Mq else 0), q)):
                return False
        E = self.everywhere
        if E and E[0]:
            cE = mx.vecmat(c, E, self.dom.zero, width=len(E[0]))
            if not all(_is_integral_everywhere(x) for x in cE if x):
                return False
        return True

    def contains(self, x):
        c = self.coordinates(x)
        if c is None:
            return False
        return self._satisfies(c)

    def element(self, c):
        return mx.vecmat(c, self.basis, self.dom.zero, width=self.N)

    def valuation_profile(self, x, primes):
        """Per prime, the minimum valuation over the nonzero coordinates of x."""
        out = {}
        for q in primes:
            v = _vals(x, q)
            out[q] = min(v) if v else None
        return out

    # -- local lattices ----------------------------------------------------

    def local_lattice(self, q):
        """(lattice generators, free directions) of {c : c satisfies the forms at q}.

        The set is the Z_(q)-span of the generators plus the K-span of the free
        directions.
        """
        dom = self.dom
        W = self.forms_at(q)
        width = len(W[0]) if W else 0
        I = mx.identity(self.m, dom.zero, dom.one)
        if width == 0 or mx.is_zero(W):
            return [], I
        vals = [valuation(x, q) for r in W for x in r if x]
        e = max(0, -min(vals))
        qe = dom.coerce(q ** e)
        Wp = mx.scale(W, qe)
        local_ring = SemilocalPID(base_spec_of(self.eb), (q,))
        sf = smith_normal_form(Wp, local_ring, cols=width)
        gens, free = [], []
        for i in range(self.m):
            if i < sf.rank:
                ei = valuation(sf.diagonal[i], q)
                shift = dom.coerce(q) ** (e - ei) if e >= ei else dom.one / dom.coerce(q) ** (ei - e)
                gens.append([shift * x for x in sf.U[i]])
            else:
                free.append(list(sf.U[i]))
        return gens, free

    def _bad_primes(self, pulled_E=None):
        """Primes where the everywhere constraints of self (and pulled-back ones) are not generic."""
        eb, dom = self.eb, self.dom
        bad = set()
        E = self.everywhere
        width = len(E[0]) if E and E[0] else 0
        for r in self.basis:
            for x in r:
                bad |= _primes_of(eb, x)
        if width:
            for r in E:
                for x in r:
                    bad |= _primes_of(eb, x)
            den = 1 if isinstance(eb, IntegerBase) else eb.one
            for r in E:
                for x in r:
                    if x:
                        den = _lcm(eb, den, x.denominator)
            Ei = [[dom.coerce(den) * x for x in r] for r in E]
            base = base_spec_of(eb)
            sf = smith_normal_form(Ei, base, cols=width)
            for d in sf.diagonal:
                bad |= set(eb.factor(d).keys())
            if pulled_E is not None and pulled_E and pulled_E[0]:
                T = mx.matmul([[dom.coerce(x) for x in r] for r in sf.U], pulled_E, dom.zero)
                for r in T:
                    for x in r:
                        bad |= _primes_of(eb, x)
        elif pulled_E is not None:
            for r in pulled_E:
                for x in r:
                    bad |= _primes_of(eb, x)
        return bad

    def generic_prime(self, avoid):
        for q in self.eb.primes():
            if q not in avoid:
                return q

    def globalize(self, c, q):
        """Scale c by lambda with v_q(lambda) = 0 so that c*B lies in self (c is in L_q)."""
        eb, dom = self.eb, self.dom
        lam = dom.one
        for ell, Mq in self.local.items():
            if ell == q or not Mq or not Mq[0]:
                continue
            v = _vals(mx.vecmat(c, Mq, dom.zero, width=len(Mq[0])), ell)
            if v and min(v) < 0:
                lam = lam * dom.coerce(ell) ** (-min(v))
        E = self.everywhere
        if E and E[0]:
            cE = mx.vecmat([lam * x for x in c], E, dom.zero, width=len(E[0]))
            den = 1 if isinstance(eb, IntegerBase) else eb.one
            for x in cE:
                if x:
                    den = _lcm(eb, den, x.denominator)
            d = dom.coerce(den)
            if d:
                vq = valuation(d, q)
                d = d / dom.coerce(q) ** vq
                lam = lam * d
        return [lam * x for x in c]

    # -- inclusion ---------------------------------------------------------

    def subset_of(self, other):
        """(True, None) if self <= other, else (False, witness element of self not in other)."""
        if self.N != other.N:
            raise ValueError("ambient mismatch")
        dom = self.dom
        if not self.m:
            return True, None
        C = []
        for i, row in enumerate(self.basis):
            c = other.coordinates(row)
            if c is None:
                e = [dom.one if j == i else dom.zero for j in range(self.m)]
                return False, self._witness_outside_span(e)
            C.append(c)
        pulled_local = {q: mx.matmul(C, Mq, dom.zero, inner=other.m) if other.m else []
                        for q, Mq in other.local.items()}
        pulled_E = mx.matmul(C, other.everywhere, dom.zero, inner=other.m) \
            if other.has_everywhere() else None

        def pulled_forms(q):
            parts = []
            if q in pulled_local:
                parts.append(pulled_local[q])
            if pulled_E is not None:
                parts.append(pulled_E)
            return mx.hstack(*parts) if parts else [[] for _ in range(self.m)]

        primes = self.explicit_primes() | other.explicit_primes()
        if pulled_E is not None:
            primes |= self._bad_primes(pulled_E)
            primes.add(self.generic_prime(primes))
        for q in sorted(primes, key=_sort_key):
            W = pulled_forms(q)
            width = len(W[0]) if W and W[0] else 0
            if not width:
                continue
            gens, free = self.local_lattice(q)
            for g in gens:
                img = mx.vecmat(g, W, dom.zero, width=width)
                if any(v < 0 for v in _vals(img, q)):
                    return False, self.element(self.globalize(g, q))
            for f in free:
                img = mx.vecmat(f, W, dom.zero, width=width)
                v = _vals(img, q)
                if v:
                    shift = dom.one / dom.coerce(q) ** (min(v) + 1) if min(v) >= 0 \
                        else dom.one
                    c = [shift * x for x in f]
                    return False, self.element(self.globalize(c, q))
        return True, None

    def _witness_outside_span(self, e):
        # any X-element along a basis direction missing from the other span
        q = next(iter(self.local), None)
        if q is None:
            q = self.generic_prime(self._bad_primes())
        gens, free = self.local_lattice(q)
        for v in free + gens:
            if any(v):
                return self.element(self.globalize(v, q))
        return self.element(e)

    def equals(self, other):
        a, _ = self.subset_of(other)
        b, _ = other.subset_of(self)
        return a and b

    # -- constructions -----------------------------------------------------

    def kernel(self, Phi):
        """{x in self : x*Phi = 0}, in the same ambient."""
        dom = self.dom
        if not self.m:
            return self
        BP = mx.matmul(self.basis, Phi, dom.zero, inner=self.N)
        width = len(Phi[0]) if Phi else 0
        Z = left_kernel(BP, dom, cols=width) if width else mx.identity(self.m, dom.zero, dom.one)
        return self._restrict(Z)

    def _restrict(self, Z):
        dom = self.dom
        if not Z:
            return ValuationModule.zero(self.eb, self.N)
        basis = mx.matmul(Z, self.basis, dom.zero)
        local = {q: mx.matmul(Z, Mq, dom.zero, inner=self.m) if Mq and Mq[0] else [[] for _ in Z]
                 for q, Mq in self.local.items()}
        E = mx.matmul(Z, self.everywhere, dom.zero, inner=self.m) if self.has_everywhere() \
            else [[] for _ in Z]
        return ValuationModule(self.eb, basis, local, E, ambient=self.N, check=False)

    def image(self, Phi, target_dim=None):
        """Image under the ambient map Phi (N x N'); Phi must be injective on the span."""
        dom = self.dom
        width = len(Phi[0]) if Phi else (target_dim or 0)
        if not self.m:
            return ValuationModule.zero(self.eb, width)
        BP = mx.matmul(self.basis, Phi, dom.zero, inner=self.N)
        if smith_normal_form(BP, dom, cols=width).rank != self.m:
            raise UnsupportedFamily("image of a non-injective map on a rational model")
        return ValuationModule(self.eb, BP, self.local, self.everywhere, ambient=width, check=False)

    def maps_into(self, other, Phi):
        """(ok, witness): whether Phi carries self into other."""
        return self.image(Phi, other.N).subset_of(other)

    # -- sampling ----------------------------------------------------------

    def sample(self, rng):
        """A random element, scaled into the module; also varies by units off the primes."""
        dom, eb = self.dom, self.eb
        if not self.m:
            return [dom.zero] * self.N
        c = [_random_scalar(eb, dom, rng) for _ in range(self.m)]
        lam = dom.one
        for q in self.local:
            W = self.forms_at(q)
            if W and W[0]:
                v = _vals(mx.vecmat(c, W, dom.zero, width=len(W[0])), q)
                if v and min(v) < 0:
                    lam = lam * dom.coerce(q) ** (-min(v))
        c = [lam * x for x in c]
        if self.has_everywhere():
            den = 1 if isinstance(eb, IntegerBase) else eb.one
            for x in mx.vecmat(c, self.everywhere, dom.zero, width=len(self.everywhere[0])):
                if x:
                    den = _lcm(eb, den, x.denominator)
            c = [dom.coerce(den) * x for x in c]
        if not self.has_everywhere():
            avoid = set(self.local)
            u = eb.random_unit_part(rng, avoid)
            c = [x / dom.coerce(u) for x in c] if rng.random() < 0.5 else [x * dom.coerce(u) for x in c]
        return self.element(c)


def _sort_key(q):
    if isinstance(q, int):
        return (q,)
    return (q.degree,) + tuple(reversed(q.c))


def _lcm(eb, a, b):
    if isinstance(eb, IntegerBase):
        from math import gcd
        return abs(a * b) // gcd(a, b) if a and b else (a or b)
    from .arith import poly_gcd
    g = poly_gcd(a, b)
    return (a * b // g).monic()


def _random_scalar(eb, dom, rng):
    if isinstance(eb, IntegerBase):
        return Fraction(rng.randint(-30, 30), rng.randint(1, 30))
    num = Poly([rng.randrange(eb.p) for _ in range(rng.randint(0, 3))], eb.p)
    den = eb.random_unit_part(rng, ())
    return dom.coerce(num) / dom.coerce(den)


def direct_sum(mods):
    """Block-diagonal direct sum in the concatenated ambient."""
    mods = list(mods)
    eb = mods[0].eb
    dom = FieldDomain(eb)
    N = sum(M.N for M in mods)
    basis = mx.block_diag([M.basis for M in mods], [(M.m, M.N) for M in mods], dom.zero)
    m = sum(M.m for M in mods)
    primes = set()
    for M in mods:
        primes |= set(M.local)
    local = {}
    for q in primes:
        blocks, shapes = [], []
        for M in mods:
            Mq = M.local.get(q)
            if Mq is None or not Mq or not Mq[0]:
                blocks.append([[] for _ in range(M.m)])
                shapes.append((M.m, 0))
            else:
                blocks.append(Mq)
                shapes.append((M.m, len(Mq[0])))
        local[q] = mx.block_diag(blocks, shapes, dom.zero)
    eblocks, eshapes = [], []
    for M in mods:
        w = len(M.everywhere[0]) if M.everywhere and M.everywhere[0] else 0
        eblocks.append(M.everywhere if w else [[] for _ in range(M.m)])
        eshapes.append((M.m, w))
    E = mx.block_diag(eblocks, eshapes, dom.zero)
    if not any(len(r) for r in E):
        E = [[] for _ in range(m)]
    return ValuationModule(eb, basis, local, E, ambient=N, check=False)
