"""Ring specifications and elements for the supported exact families.

A RingSpec is a frozen dataclass, so structural equality and hashing come for
free.  Elements of every ring are plain Python scalars (int, Fraction, Poly,
RatFunc); ``RingElement`` wraps one together with its ring and keeps it in
canonical form.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .arith import IntegerBase, Poly, RatFunc, poly_base, valuation
from .errors import (BadPrime, DuplicatePrime, EmptyPrimeSet, NotIrreducible,
                     RingMismatch, ZeroElement)


class RingSpec:
    """Common behaviour; concrete families are the dataclasses below."""

    is_field = False

    @property
    def euclid(self):
        """The underlying Euclidean base (Z or F_p[t]), if the family has one."""
        raise RingMismatch(f"{self} has no Euclidean base")

    def contains(self, x):
        raise NotImplementedError

    def canonical(self, x):
        """Canonical scalar representing ``x`` in this ring."""
        if not self.contains(x):
            raise RingMismatch(f"{x!r} is not an element of {self}")
        return x

    def element(self, x):
        return RingElement(self, self.canonical(self.coerce(x)))

    def coerce(self, x):
        return x

    @property
    def zero(self):
        return self.coerce(0)

    @property
    def one(self):
        return self.coerce(1)


def _field_scalar(base, x):
    if isinstance(base, IntegerBase):
        if isinstance(x, (int, Fraction)):
            return Fraction(x)
        raise RingMismatch(f"{x!r} is not rational")
    if isinstance(x, RatFunc):
        return x
    if isinstance(x, (int, Poly)):
        return base.to_field(x)
    raise RingMismatch(f"{x!r} is not a rational function")


@dataclass(frozen=True)
class Integers(RingSpec):
    def __str__(self):
        return "Z"

    @property
    def euclid(self):
        return IntegerBase()

    def contains(self, x):
        return isinstance(x, int) or (isinstance(x, Fraction) and x.denominator == 1)

    def canonical(self, x):
        if not self.contains(x):
            raise RingMismatch(f"{x!r} is not an integer")
        return int(x)


@dataclass(frozen=True)
class Rationals(RingSpec):
    is_field = True

    def __str__(self):
        return "Q"

    @property
    def euclid(self):
        return IntegerBase()

    def coerce(self, x):
        return _field_scalar(IntegerBase(), x)

    def contains(self, x):
        return isinstance(x, (int, Fraction))

    def canonical(self, x):
        return Fraction(x)


@dataclass(frozen=True)
class IntegersModN(RingSpec):
    n: int

    def __post_init__(self):
        if self.n < 2:
            raise ValueError("IntegersModN needs n >= 2")

    def __str__(self):
        return f"Z/{self.n}"

    @property
    def euclid(self):
        return IntegerBase()

    def contains(self, x):
        return isinstance(x, int) or (isinstance(x, Fraction)
                                      and _coprime_int(x.denominator, self.n))

    def canonical(self, x):
        if isinstance(x, Fraction):
            return x.numerator * pow(x.denominator, -1, self.n) % self.n
        return x % self.n


def _coprime_int(a, b):
    from math import gcd
    return gcd(a, b) == 1


@dataclass(frozen=True)
class PrimeField(RingSpec):
    p: int
    is_field = True

    def __post_init__(self):
        if not IntegerBase().is_irreducible(self.p):
            raise NotIrreducible(f"{self.p} is not prime")

    def __str__(self):
        return f"F{self.p}"

    @property
    def euclid(self):
        return IntegerBase()

    def contains(self, x):
        return isinstance(x, int) or (isinstance(x, Fraction) and x.denominator % self.p != 0)

    def canonical(self, x):
        if isinstance(x, Fraction):
            return x.numerator * pow(x.denominator, -1, self.p) % self.p
        return x % self.p


@dataclass(frozen=True)
class PolyOverPrimeField(RingSpec):
    p: int

    def __post_init__(self):
        poly_base(self.p)

    def __str__(self):
        return f"F{self.p}[t]"

    @property
    def euclid(self):
        return poly_base(self.p)

    def coerce(self, x):
        return self.euclid.coerce(x) if isinstance(x, int) else x

    def contains(self, x):
        if isinstance(x, RatFunc):
            return x.den.degree == 0
        return isinstance(x, Poly) and x.p == self.p

    def canonical(self, x):
        if isinstance(x, RatFunc):
            x = x.num * pow(x.den.lc, -1, self.p)
        return super().canonical(x)


@dataclass(frozen=True)
class RationalFunctionField(RingSpec):
    p: int
    is_field = True

    def __str__(self):
        return f"F{self.p}(t)"

    @property
    def euclid(self):
        return poly_base(self.p)

    def coerce(self, x):
        return _field_scalar(self.euclid, x)

    def contains(self, x):
        return isinstance(x, (Poly, RatFunc)) and x.p == self.p

    def canonical(self, x):
        return _field_scalar(self.euclid, x)


def base_spec_of(euclid):
    return Integers() if isinstance(euclid, IntegerBase) else PolyOverPrimeField(euclid.p)


def _prime_key(q):
    if isinstance(q, int):
        return (q,)
    return (q.degree,) + tuple(reversed(q.c))


@dataclass(frozen=True)
class SemilocalPID(RingSpec):
    """Z or F_p[t] with every prime outside ``primes`` inverted."""

    base: RingSpec
    primes: tuple

    def __post_init__(self):
        if not isinstance(self.base, (Integers, PolyOverPrimeField)):
            raise RingMismatch(f"semilocal base must be Z or F_p[t], got {self.base}")
        if not self.primes:
            raise EmptyPrimeSet("a semilocal ring needs at least one prime")
        eb = self.base.euclid
        canon = []
        for q in self.primes:
            q = eb.parse(q) if not isinstance(q, Poly) else q
            q, _ = eb.normalize(q)
            if not eb.is_irreducible(q):
                raise NotIrreducible(f"{q!r} is not irreducible over {self.base}")
            if q in canon:
                raise DuplicatePrime(f"prime {q!r} listed twice (up to associates)")
            canon.append(q)
        object.__setattr__(self, "primes", tuple(sorted(canon, key=_prime_key)))

    def __str__(self):
        return f"{self.base}_({','.join(map(repr, self.primes))})"

    @property
    def euclid(self):
        return self.base.euclid

    def coerce(self, x):
        return _field_scalar(self.euclid, x)

    def contains(self, x):
        try:
            x = _field_scalar(self.euclid, x)
        except RingMismatch:
            return False
        if not x:
            return True
        return all(valuation(x, q) >= 0 for q in self.primes)

    def canonical(self, x):
        return super().canonical(_field_scalar(self.euclid, x))

    def prime_index(self, q):
        """Position of ``q`` in the prime list; BadPrime if q is invertible here."""
        eb = self.euclid
        if isinstance(q, int) or isinstance(q, Poly):
            q, _ = eb.normalize(q)
        if q not in self.primes:
            raise BadPrime(f"{q!r} is a unit in {self}")
        return self.primes.index(q)

    def localize_at(self, q):
        self.prime_index(q)
        return SemilocalPID(self.base, (q,))


@dataclass(frozen=True)
class FractionField(RingSpec):
    of: RingSpec
    is_field = True

    def __str__(self):
        return f"Frac({self.of})"

    @property
    def euclid(self):
        return self.of.euclid

    def coerce(self, x):
        return _field_scalar(self.euclid, x)

    def contains(self, x):
        try:
            _field_scalar(self.euclid, x)
            return True
        except RingMismatch:
            return False

    def canonical(self, x):
        return _field_scalar(self.euclid, x)


@dataclass(frozen=True)
class TruncatedCompletion(RingSpec):
    """Level-s stage R/q^s of the q-adic completion of a semilocal ring."""

    base: SemilocalPID
    prime: object
    level: int

    def __post_init__(self):
        if self.level < 1:
            raise ValueError("truncation level must be >= 1")
        eb = self.base.euclid
        q, _ = eb.normalize(eb.parse(self.prime) if not isinstance(self.prime, Poly) else self.prime)
        self.base.prime_index(q)
        object.__setattr__(self, "prime", q)

    def __str__(self):
        return f"{self.base.base}/{self.prime!r}^{self.level}"

    @property
    def euclid(self):
        return self.base.euclid

    @property
    def modulus(self):
        return self.prime ** self.level

    def coerce(self, x):
        return _field_scalar(self.euclid, x)

    def contains(self, x):
        try:
            x = _field_scalar(self.euclid, x)
        except RingMismatch:
            return False
        return not x or valuation(x, self.prime) >= 0

    def canonical(self, x):
        """Canonical residue of ``x`` modulo q^s, as a base scalar."""
        x = _field_scalar(self.euclid, x)
        if not self.contains(x):
            raise RingMismatch(f"{x!r} has a pole at {self.prime!r}")
        eb, m = self.euclid, self.modulus
        inv = eb.inverse_mod(x.denominator % m, m)
        return (x.numerator * inv) % m

    def residue_field(self):
        if isinstance(self.euclid, IntegerBase):
            return PrimeField(self.prime)
        return None


@dataclass(frozen=True)
class LocalFractionModel(RingSpec):
    """Rational-representative model of Frac of the q-adic completion.

    Elements are exact rationals (or rational functions); the q-valuation is
    the tracked coordinate.
    """

    base: SemilocalPID
    prime: object
    is_field = True

    def __post_init__(self):
        eb = self.base.euclid
        q, _ = eb.normalize(eb.parse(self.prime) if not isinstance(self.prime, Poly) else self.prime)
        self.base.prime_index(q)
        object.__setattr__(self, "prime", q)

    def __str__(self):
        return f"Q_{self.prime!r}-model"

    @property
    def euclid(self):
        return self.base.euclid

    def coerce(self, x):
        return _field_scalar(self.euclid, x)

    def contains(self, x):
        try:
            _field_scalar(self.euclid, x)
            return True
        except RingMismatch:
            return False

    def canonical(self, x):
        return _field_scalar(self.euclid, x)

    def valuation(self, x):
        return valuation(x, self.prime)


@dataclass(frozen=True)
class FiniteProduct(RingSpec):
    factors: tuple

    def __post_init__(self):
        if not self.factors:
            raise ValueError("FiniteProduct needs at least one factor")
        object.__setattr__(self, "factors", tuple(self.factors))

    def __str__(self):
        return " x ".join(map(str, self.factors))

    def coerce(self, x):
        if isinstance(x, tuple):
            return tuple(f.coerce(a) for f, a in zip(self.factors, x))
        return tuple(f.coerce(x) for f in self.factors)

    def contains(self, x):
        return (isinstance(x, tuple) and len(x) == len(self.factors)
                and all(f.contains(a) for f, a in zip(self.factors, x)))

    def canonical(self, x):
        if not self.contains(x):
            raise RingMismatch(f"{x!r} is not in {self}")
        return tuple(f.canonical(a) for f, a in zip(self.factors, x))


@dataclass(frozen=True)
class RingElement:
    ring: RingSpec
    value: object

    def _other(self, other):
        if isinstance(other, RingElement):
            if other.ring != self.ring:
                raise RingMismatch(f"{self.ring} vs {other.ring}")
            return other.value
        return self.ring.canonical(self.ring.coerce(other))

    def _wrap(self, v):
        return RingElement(self.ring, self.ring.canonical(v))

    def _op(self, other, fn):
        o = self._other(other)
        if isinstance(self.ring, FiniteProduct):
            return self._wrap(tuple(fn(a, b) for a, b in zip(self.value, o)))
        return self._wrap(fn(self.value, o))

    def __add__(self, other):
        return self._op(other, lambda a, b: a + b)

    __radd__ = __add__

    def __sub__(self, other):
        return self._op(other, lambda a, b: a - b)

    def __mul__(self, other):
        return self._op(other, lambda a, b: a * b)

    __rmul__ = __mul__

    def __neg__(self):
        return self._op(0, lambda a, b: -a)

    def __bool__(self):
        if isinstance(self.ring, FiniteProduct):
            return any(bool(a) for a in self.value)
        return bool(self.value)

    def inverse(self):
        r, v = self.ring, self.value
        if not self:
            raise ZeroElement("zero has no inverse")
        if r.is_field:
            if isinstance(r, PrimeField):
                return self._wrap(pow(v, -1, r.p))
            return self._wrap(1 / r.coerce(v) if not isinstance(v, Fraction) else 1 / v)
        if isinstance(r, IntegersModN):
            return self._wrap(pow(v, -1, r.n))
        if isinstance(r, TruncatedCompletion):
            return self._wrap(r.euclid.inverse_mod(v, r.modulus))
        inv = 1 / r.coerce(v)
        return self._wrap(inv)

    def valuation(self, q):
        return valuation(self.value, q)


def integers_localized(primes):
    return SemilocalPID(Integers(), tuple(primes))


def poly_localized(p, primes):
    return SemilocalPID(PolyOverPrimeField(p), tuple(primes))
