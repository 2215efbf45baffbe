"""Exact scalars: F_p[t] polynomials, F_p(t) fractions, and the two Euclidean bases.

Integers and ``fractions.Fraction`` cover the Z / Q side.  ``Poly`` and
``RatFunc`` give the F_p[t] / F_p(t) side the same arithmetic surface
(``+ - * divmod``, ``.numerator``/``.denominator``) so the linear algebra in
:mod:`adelia.snf` can stay oblivious to which family it is working over.
"""
from __future__ import annotations

import itertools
from fractions import Fraction
from functools import lru_cache

import sympy
from sympy.polys.domains import ZZ
from sympy.polys.galoistools import gf_factor, gf_irreducible_p

from .errors import ZeroElement


class Poly:
    """Polynomial over F_p, coefficients stored low degree first."""

    __slots__ = ("c", "p")

    def __init__(self, coeffs, p):
        c = [int(a) % p for a in coeffs]
        while c and c[-1] == 0:
            c.pop()
        self.c = tuple(c)
        self.p = p

    @classmethod
    def const(cls, a, p):
        return cls((a,), p)

    @classmethod
    def t(cls, p):
        return cls((0, 1), p)

    def _lift(self, other):
        if isinstance(other, Poly):
            if other.p != self.p:
                raise ValueError("characteristic mismatch")
            return other
        if isinstance(other, int):
            return Poly((other,), self.p)
        return NotImplemented

    @property
    def degree(self):
        return len(self.c) - 1  # -1 for zero

    @property
    def lc(self):
        return self.c[-1] if self.c else 0

    @property
    def numerator(self):
        return self

    @property
    def denominator(self):
        return Poly((1,), self.p)

    def __bool__(self):
        return bool(self.c)

    def __eq__(self, other):
        o = self._lift(other) if isinstance(other, (int, Poly)) else None
        if o is None or o is NotImplemented:
            if isinstance(other, RatFunc):
                return other == self
            return False
        return self.c == o.c and self.p == o.p

    def __hash__(self):
        if len(self.c) <= 1:
            return hash(self.c[0] if self.c else 0)
        return hash((self.c, self.p))

    def __neg__(self):
        return Poly([-a for a in self.c], self.p)

    def __add__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return NotImplemented
        n = max(len(self.c), len(o.c))
        a = self.c + (0,) * (n - len(self.c))
        b = o.c + (0,) * (n - len(o.c))
        return Poly([x + y for x, y in zip(a, b)], self.p)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return NotImplemented
        if not self.c or not o.c:
            return Poly((), self.p)
        out = [0] * (len(self.c) + len(o.c) - 1)
        for i, a in enumerate(self.c):
            if a:
                for j, b in enumerate(o.c):
                    out[i + j] += a * b
        return Poly(out, self.p)

    __rmul__ = __mul__

    def __pow__(self, e):
        result = Poly((1,), self.p)
        base = self
        while e > 0:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __divmod__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return NotImplemented
        if not o.c:
            raise ZeroDivisionError("polynomial division by zero")
        p = self.p
        inv = pow(o.c[-1], -1, p)
        rem = list(self.c)
        dq = len(rem) - len(o.c)
        if dq < 0:
            return Poly((), p), self
        quo = [0] * (dq + 1)
        for k in range(dq, -1, -1):
            coef = rem[k + len(o.c) - 1] * inv % p
            quo[k] = coef
            if coef:
                for j, b in enumerate(o.c):
                    rem[k + j] = (rem[k + j] - coef * b) % p
        return Poly(quo, p), Poly(rem, p)

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def __truediv__(self, other):
        return RatFunc(self, other)

    def __rtruediv__(self, other):
        return RatFunc(other, self)

    def monic(self):
        if not self.c:
            return self
        return self * pow(self.c[-1], -1, self.p)

    def __call__(self, x):
        acc = 0
        for a in reversed(self.c):
            acc = (acc * x + a) % self.p
        return acc

    def __repr__(self):
        if not self.c:
            return "0"
        terms = []
        for k in range(len(self.c) - 1, -1, -1):
            a = self.c[k]
            if not a:
                continue
            if k == 0:
                terms.append(str(a))
            else:
                coef = "" if a == 1 else str(a)
                mono = "t" if k == 1 else f"t^{k}"
                terms.append(coef + mono)
        return "+".join(terms)


class RatFunc:
    """Element of F_p(t) kept as num/den with den monic and gcd(num, den) = 1."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=None):
        if isinstance(num, RatFunc) and den is None:
            self.num, self.den = num.num, num.den
            return
        if isinstance(num, RatFunc) or isinstance(den, RatFunc):
            q = _as_ratfunc(num) * _as_ratfunc(den).inverse()
            self.num, self.den = q.num, q.den
            return
        p = num.p if isinstance(num, Poly) else den.p
        num = num if isinstance(num, Poly) else Poly((num,), p)
        den = Poly((1,), p) if den is None else den
        den = den if isinstance(den, Poly) else Poly((den,), p)
        if not den:
            raise ZeroDivisionError("rational function with zero denominator")
        g = poly_gcd(num, den)
        num, den = num // g, den // g
        lc = den.lc
        if lc != 1:
            inv = pow(lc, -1, p)
            num, den = num * inv, den * inv
        self.num, self.den = num, den

    @property
    def p(self):
        return self.num.p

    @property
    def numerator(self):
        return self.num

    @property
    def denominator(self):
        return self.den

    def _lift(self, other):
        if isinstance(other, RatFunc):
            return other
        if isinstance(other, (Poly, int)):
            return RatFunc(other if isinstance(other, Poly) else Poly((other,), self.p))
        return NotImplemented

    def __bool__(self):
        return bool(self.num)

    def __eq__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return False
        return self.num == o.num and self.den == o.den

    def __hash__(self):
        if self.den.degree == 0:
            return hash(self.num)
        return hash((self.num, self.den))

    def __neg__(self):
        return RatFunc(-self.num, self.den)

    def __add__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return NotImplemented
        return RatFunc(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return NotImplemented
        return RatFunc(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def inverse(self):
        if not self.num:
            raise ZeroDivisionError("inverse of zero")
        return RatFunc(self.den, self.num)

    def __truediv__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, e):
        if e < 0:
            return self.inverse() ** (-e)
        return RatFunc(self.num ** e, self.den ** e)

    def __repr__(self):
        if self.den.degree == 0:
            return repr(self.num)
        return f"({self.num!r})/({self.den!r})"


def _as_ratfunc(x):
    return x if isinstance(x, RatFunc) else RatFunc(x)


def poly_gcd(a, b):
    while b:
        a, b = b, a % b
    return a.monic()


def numer(x):
    return x.numerator


def denom(x):
    return x.denominator


class IntegerBase:
    """Z as a Euclidean domain; fraction field Q via ``Fraction``."""

    name = "Z"
    zero = 0
    one = 1

    def __eq__(self, other):
        return isinstance(other, IntegerBase)

    def __hash__(self):
        return hash("Z")

    def __repr__(self):
        return "Z"

    def normalize(self, a):
        """Return (canonical associate, unit) with ``a == unit * canonical``."""
        if a < 0:
            return -a, -1
        return a, 1

    def size(self, a):
        return abs(a)

    def frac(self, n, d=1):
        return Fraction(n, d)

    def to_field(self, x):
        return x if isinstance(x, Fraction) else Fraction(x)

    def is_irreducible(self, q):
        return isinstance(q, int) and q > 1 and sympy.isprime(q)

    def factor(self, a):
        return {int(k): v for k, v in sympy.factorint(abs(int(a))).items()}

    def primes(self):
        q = 2
        while True:
            yield q
            q = sympy.nextprime(q)

    def residues(self, d):
        return range(abs(d))

    def inverse_mod(self, a, m):
        return pow(a, -1, m)

    def parse(self, s):
        if isinstance(s, bool):
            raise ValueError("expected an integer, got a boolean")
        if isinstance(s, int):
            return s
        return int(str(s).strip())

    def fmt(self, x):
        return str(x)

    def is_constant(self, a):
        return a in (1, -1)

    def random_unit_part(self, rng, avoid, bound=13):
        """A random nonzero integer coprime to every prime in ``avoid``."""
        while True:
            u = rng.randint(1, bound) * rng.choice((1, -1))
            if all(u % q for q in avoid):
                return u


class PolyBase:
    """F_p[t] as a Euclidean domain; fraction field F_p(t) via ``RatFunc``."""

    def __init__(self, p):
        if not sympy.isprime(p):
            raise ValueError(f"characteristic {p} is not prime")
        self.p = p
        self.name = f"F{p}[t]"
        self.zero = Poly((), p)
        self.one = Poly((1,), p)

    def __eq__(self, other):
        return isinstance(other, PolyBase) and other.p == self.p

    def __hash__(self):
        return hash(("Fp[t]", self.p))

    def __repr__(self):
        return self.name

    def normalize(self, a):
        a = self.coerce(a)
        if not a:
            return a, self.one
        lc = a.lc
        return a.monic(), Poly((lc,), self.p)

    def size(self, a):
        return a.degree + 1 if a else 0

    def coerce(self, a):
        return a if isinstance(a, Poly) else Poly((a,), self.p)

    def frac(self, n, d=1):
        return RatFunc(self.coerce(n), self.coerce(d))

    def to_field(self, x):
        if isinstance(x, RatFunc):
            return x
        return RatFunc(self.coerce(x))

    def is_irreducible(self, q):
        if not isinstance(q, Poly) or q.degree < 1 or q.lc != 1:
            return False
        return bool(gf_irreducible_p(list(reversed(q.c)), self.p, ZZ))

    def factor(self, a):
        a = self.coerce(a)
        if a.degree < 1:
            return {}
        _, facs = gf_factor(list(reversed(a.c)), self.p, ZZ)
        return {Poly([int(x) for x in reversed(f)], self.p): e for f, e in facs}

    def primes(self):
        for deg in itertools.count(1):
            for tail in itertools.product(range(self.p), repeat=deg):
                q = Poly(list(tail) + [1], self.p)
                if self.is_irreducible(q):
                    yield q

    def residues(self, d):
        deg = d.degree
        for coeffs in itertools.product(range(self.p), repeat=deg):
            yield Poly(coeffs, self.p)

    def inverse_mod(self, a, m):
        a = self.coerce(a) % m
        r0, r1 = m, a
        s0, s1 = self.zero, self.one
        while r1:
            qt, r = divmod(r0, r1)
            r0, r1 = r1, r
            s0, s1 = s1, s0 - qt * s1
        if r0.degree != 0:
            raise ValueError("not invertible modulo")
        return (s0 * pow(r0.lc, -1, self.p)) % m

    def parse(self, s):
        """Coefficient list (low degree first) or an int constant."""
        if isinstance(s, Poly):
            return s
        if isinstance(s, (list, tuple)):
            return Poly([int(str(x)) for x in s], self.p)
        if isinstance(s, int) and not isinstance(s, bool):
            return Poly((s,), self.p)
        return parse_poly(str(s), self.p)

    def fmt(self, x):
        return repr(x)

    def is_constant(self, a):
        return self.coerce(a).degree == 0

    def random_unit_part(self, rng, avoid, max_deg=2):
        while True:
            deg = rng.randint(0, max_deg)
            coeffs = [rng.randrange(self.p) for _ in range(deg)] + [rng.randrange(1, self.p)]
            u = Poly(coeffs, self.p)
            if all(u % q for q in avoid):
                return u


def parse_poly(text, p):
    """Parse strings like ``"t^2+4t+1"`` or ``"t-1"`` into a Poly over F_p."""
    s = text.replace(" ", "").replace("*", "")
    if not s:
        raise ValueError("empty polynomial")
    s = s.replace("-", "+-")
    coeffs = {}
    for term in filter(None, s.split("+")):
        sign = 1
        if term.startswith("-"):
            sign, term = -1, term[1:]
        if "t" in term:
            head, _, tail = term.partition("t")
            a = int(head) if head else 1
            e = int(tail[1:]) if tail.startswith("^") else 1
            if tail and not tail.startswith("^"):
                raise ValueError(f"cannot parse polynomial term {term!r}")
        else:
            a, e = int(term), 0
        coeffs[e] = coeffs.get(e, 0) + sign * a
    top = max(coeffs)
    return Poly([coeffs.get(k, 0) for k in range(top + 1)], p)


@lru_cache(maxsize=None)
def poly_base(p):
    return PolyBase(p)


def base_of(x):
    """Euclidean base matching a scalar's family."""
    if isinstance(x, (Poly, RatFunc)):
        return poly_base(x.p)
    return IntegerBase()


def _int_valuation(a, q):
    v = 0
    while a % q == 0:
        a //= q
        v += 1
    return v


def valuation(x, q):
    """q-adic valuation of a nonzero scalar of Q or F_p(t) (ints and polys allowed)."""
    if not x:
        raise ZeroElement("valuation of zero")
    num, den = x.numerator, x.denominator
    return _int_valuation(num, q) - _int_valuation(den, q)


def prime_part(a, primes):
    """Product of the prime-power factors of ``a`` supported on ``primes``."""
    out = 1 if isinstance(a, int) else Poly((1,), a.p)
    for q in primes:
        out = out * q ** _int_valuation(a, q)
    return out
