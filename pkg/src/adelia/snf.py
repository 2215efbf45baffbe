"""Smith normal form over the PID families, plus the lattice tools built on it.

Every routine works on row vectors: a matrix's rows span a submodule of R^k.
``smith_normal_form`` returns U, D, V (and V^{-1}) with U*m*V = D.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from . import matrices as mx
from .arith import IntegerBase, Poly, RatFunc, prime_part
from .errors import NonPIDRing
from .rings import (FractionField, Integers, LocalFractionModel, PolyOverPrimeField,
                    PrimeField, RationalFunctionField, Rationals, SemilocalPID)


class EuclidDomain:
    """Z or F_p[t] itself."""

    def __init__(self, eb):
        self.eb = eb
        self.zero = eb.zero
        self.one = eb.one

    def coerce(self, x):
        if type(x) is int:
            return x
        if isinstance(x, Fraction):
            if x.denominator != 1:
                raise NonPIDRing(f"{x} is not integral")
            return x.numerator
        if isinstance(x, RatFunc):
            if x.den.degree != 0:
                raise NonPIDRing(f"{x!r} is not a polynomial")
            return x.num
        if isinstance(self.eb, IntegerBase):
            return int(x)
        return self.eb.coerce(x)

    def size(self, a):
        return self.eb.size(a)

    def normalize(self, a):
        return self.eb.normalize(a)

    def divmod(self, a, b):
        return divmod(a, b)

    def inv_unit(self, u):
        if isinstance(u, Poly):
            return Poly((pow(u.lc, -1, u.p),), u.p)
        return u  # +-1

    def is_unit(self, a):
        return self.size(a) == 1

    def residue(self, a, d):
        """Canonical residue of ``a`` modulo the normalized nonunit ``d``."""
        return a % d


class FieldDomain:
    """Q or F_p(t); every nonzero element is a unit."""

    def __init__(self, eb):
        self.eb = eb
        self.zero = eb.to_field(0) if not isinstance(eb, IntegerBase) else Fraction(0)
        self.one = eb.to_field(1) if not isinstance(eb, IntegerBase) else Fraction(1)

    def coerce(self, x):
        if isinstance(self.eb, IntegerBase):
            return Fraction(x)
        return self.eb.to_field(x)

    def size(self, a):
        return 1 if a else 0

    def normalize(self, a):
        if not a:
            return a, self.one
        return self.one, a

    def divmod(self, a, b):
        return a / b, self.zero

    def inv_unit(self, u):
        return self.one / u

    def is_unit(self, a):
        return bool(a)

    def residue(self, a, d):
        return self.zero


class FpDomain:
    def __init__(self, p):
        self.p = p
        self.zero = 0
        self.one = 1

    def coerce(self, x):
        if isinstance(x, Fraction):
            return x.numerator * pow(x.denominator, -1, self.p) % self.p
        return int(x) % self.p

    def size(self, a):
        return 1 if a % self.p else 0

    def normalize(self, a):
        a %= self.p
        return (a, 1) if not a else (1, a)

    def divmod(self, a, b):
        return a * pow(b, -1, self.p) % self.p, 0

    def inv_unit(self, u):
        return pow(u, -1, self.p)

    def is_unit(self, a):
        return bool(a % self.p)

    def residue(self, a, d):
        return 0

    def reduce(self, x):
        return x % self.p


class SemilocalDomain:
    """Z_(P) or F_p[t]_(P): entries are fractions with denominators prime to P.

    The Euclidean size of a is the size of its P-part, so divmod by b only
    needs a residue of a modulo the P-part of b.
    """

    def __init__(self, eb, primes):
        self.eb = eb
        self.primes = tuple(primes)
        self.field = FieldDomain(eb)
        self.zero = self.field.zero
        self.one = self.field.one

    def coerce(self, x):
        return self.field.coerce(x)

    def ppart(self, a):
        return prime_part(a.numerator, self.primes)

    def size(self, a):
        if not a:
            return 0
        return self.eb.size(self.ppart(a))

    def normalize(self, a):
        if not a:
            return a, self.one
        c = self.field.coerce(self.ppart(a))
        return c, a / c

    def divmod(self, a, b):
        bp = self.ppart(b)
        if self.eb.size(bp) == 1:
            return a / b, self.zero
        r0 = self.field.coerce(self.residue(a, bp))
        return (a - r0) / b, r0

    def residue(self, a, d):
        """Canonical base residue of ``a`` modulo the P-part ``d`` (a base element)."""
        d = d.numerator if not isinstance(d, (int, Poly)) else d
        n, den = a.numerator, a.denominator
        return (n * self.eb.inverse_mod(den % d, d)) % d

    def inv_unit(self, u):
        return self.one / u

    def is_unit(self, a):
        return self.size(a) == 1


def domain_for(ring):
    if isinstance(ring, (Integers, PolyOverPrimeField)):
        return EuclidDomain(ring.euclid)
    if isinstance(ring, (Rationals, FractionField, RationalFunctionField, LocalFractionModel)):
        return FieldDomain(ring.euclid)
    if isinstance(ring, PrimeField):
        return FpDomain(ring.p)
    if isinstance(ring, SemilocalPID):
        return SemilocalDomain(ring.euclid, ring.primes)
    raise NonPIDRing(f"no Smith normal form over {ring}")


@dataclass
class SmithForm:
    U: list
    D: list
    V: list
    Vinv: list
    rank: int
    diagonal: list  # the nonzero normalized invariant factors d_1 | d_2 | ...


def smith_normal_form(m, ring, cols=None):
    """Smith form of ``m`` (rows x cols) over ``ring``; ``cols`` needed only when m has no rows."""
    dom = ring if not hasattr(ring, "contains") else domain_for(ring)
    n = len(m)
    k = len(m[0]) if m else (cols or 0)
    red = getattr(dom, "reduce", None)
    zero, one = dom.zero, dom.one
    A = [[dom.coerce(x) for x in row] for row in m]
    U = mx.identity(n, zero, one)
    V = mx.identity(k, zero, one)
    Vi = mx.identity(k, zero, one)

    def rowop(M, i, t, q):
        # row_i -= q * row_t
        ri, rt = M[i], M[t]
        for j in range(len(ri)):
            if rt[j]:
                v = ri[j] - q * rt[j]
                ri[j] = red(v) if red else v

    def colop(M, j, t, q):
        # col_j -= q * col_t
        for r in M:
            if r[t]:
                v = r[j] - q * r[t]
                r[j] = red(v) if red else v

    def addrow(M, t, i, q):
        # row_t += q * row_i
        rowop(M, t, i, -q)

    def swap_rows(a, b):
        if a != b:
            A[a], A[b] = A[b], A[a]
            U[a], U[b] = U[b], U[a]

    def swap_cols(a, b):
        if a != b:
            for r in A:
                r[a], r[b] = r[b], r[a]
            for r in V:
                r[a], r[b] = r[b], r[a]
            Vi[a], Vi[b] = Vi[b], Vi[a]

    rank = 0
    t = 0
    while t < min(n, k):
        best = None
        for i in range(t, n):
            for j in range(t, k):
                if A[i][j]:
                    s = dom.size(A[i][j])
                    if best is None or s < best[0]:
                        best = (s, i, j)
                        if s == 1:
                            break
            if best and best[0] == 1:
                break
        if best is None:
            break
        _, pi, pj = best
        swap_rows(t, pi)
        swap_cols(t, pj)
        while True:
            # move the smallest entry of row t / column t to the pivot
            pick = None
            for i in range(t, n):
                if A[i][t] and (pick is None or dom.size(A[i][t]) < pick[0]):
                    pick = (dom.size(A[i][t]), i, t)
            for j in range(t + 1, k):
                if A[t][j] and dom.size(A[t][j]) < pick[0]:
                    pick = (dom.size(A[t][j]), t, j)
            swap_rows(t, pick[1])
            swap_cols(t, pick[2])
            clear = True
            for i in range(t + 1, n):
                if A[i][t]:
                    q, _ = dom.divmod(A[i][t], A[t][t])
                    rowop(A, i, t, q)
                    rowop(U, i, t, q)
                    clear = clear and not A[i][t]
            for j in range(t + 1, k):
                if A[t][j]:
                    q, _ = dom.divmod(A[t][j], A[t][t])
                    colop(A, j, t, q)
                    colop(V, j, t, q)
                    addrow(Vi, t, j, q)
                    clear = clear and not A[t][j]
            if not clear:
                continue
            # pivot must divide the rest of the block for the divisibility chain
            bad = None
            if not dom.is_unit(A[t][t]):
                for i in range(t + 1, n):
                    for j in range(t + 1, k):
                        if A[i][j] and dom.divmod(A[i][j], A[t][t])[1]:
                            bad = i
                            break
                    if bad is not None:
                        break
            if bad is None:
                break
            addrow(A, t, bad, one)
            addrow(U, t, bad, one)
        c, u = dom.normalize(A[t][t])
        if u != one:
            ui = dom.inv_unit(u)
            A[t] = [red(ui * x) if red else ui * x for x in A[t]]
            U[t] = [red(ui * x) if red else ui * x for x in U[t]]
        rank += 1
        t += 1
    diagonal = [A[i][i] for i in range(rank)]
    return SmithForm(U, A, V, Vi, rank, diagonal)


def _domain(ring):
    return ring if not hasattr(ring, "contains") else domain_for(ring)


def left_kernel(m, ring, cols=None):
    """Rows spanning {x : x*m = 0} (a basis; free since the ring is a PID)."""
    sf = smith_normal_form(m, ring, cols)
    return [list(r) for r in sf.U[sf.rank:]]


def lattice_basis(m, ring, cols=None):
    """A basis of the row span of ``m``."""
    sf = smith_normal_form(m, ring, cols)
    return [[sf.diagonal[i] * x for x in sf.Vinv[i]] for i in range(sf.rank)]


def solve_left(m, b, ring, sf=None):
    """Some x with x*m = b, or None when b is not in the row span of m."""
    dom = _domain(ring)
    k = len(b)
    if sf is None:
        sf = smith_normal_form(m, dom, cols=k)
    bv = mx.vecmat([dom.coerce(x) for x in b], sf.V, dom.zero, width=k)
    y = [dom.zero] * len(m)
    for i, x in enumerate(bv):
        if i < sf.rank:
            q, r = dom.divmod(x, sf.diagonal[i])
            if r:
                return None
            y[i] = q
        elif x:
            return None
    return mx.vecmat(y, sf.U, dom.zero, width=len(m))


def rank(m, ring, cols=None):
    return smith_normal_form(m, ring, cols).rank


def nullspace_field(m, dom, cols=None):
    """Left null space basis over a field domain."""
    return left_kernel(m, dom, cols)
