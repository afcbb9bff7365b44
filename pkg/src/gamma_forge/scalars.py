"""Exact coefficient rings and the combinatorial numbers used throughout.

Ring descriptors are small frozen dataclasses that also carry the arithmetic
on *raw* values:

    Integers          int
    Rationals         fractions.Fraction (always reduced, positive denominator)
    IntegersMod(n)    int in [0, n)
    Poly(base, vars)  tuple of (exponent tuple, base raw) pairs, sorted by
                      exponent tuple, no zero coefficients; exponent tuples are
                      aligned with ``vars`` which is kept sorted by name.

Raw values are what the algebra modules store internally.  ``Scalar`` wraps a
raw value together with its ring for the public API.
"""
from __future__ import annotations

import math
from random import Random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping

from .errors import (
    ModulusInvalid,
    NotIntegral,
    NotPrime,
    RingMismatch,
    UnsupportedRing,
)


class Ring:
    """Common interface; subclasses are frozen dataclasses."""

    zero: object
    one: object

    def add(self, a, b):
        raise NotImplementedError

    def neg(self, a):
        raise NotImplementedError

    def mul(self, a, b):
        raise NotImplementedError

    def normalize(self, value):
        raise NotImplementedError

    def random(self, rng: Random, bound: int = 9):
        raise NotImplementedError

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def is_zero(self, a) -> bool:
        return a == self.zero

    def from_int(self, n: int):
        return self.normalize(n)

    def pow(self, a, e: int):
        if e < 0:
            raise ValueError("negative exponent")
        result = self.one
        base = a
        while e:
            if e & 1:
                result = self.mul(result, base)
            e >>= 1
            if e:
                base = self.mul(base, base)
        return result

    def sum(self, values: Iterable):
        total = self.zero
        for v in values:
            total = self.add(total, v)
        return total

    @property
    def is_domain(self) -> bool:
        return True

    def __call__(self, value) -> "Scalar":
        return Scalar(self, value)


@dataclass(frozen=True)
class Integers(Ring):
    zero = 0
    one = 1

    def add(self, a, b):
        return a + b

    def neg(self, a):
        return -a

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def pow(self, a, e):
        return a**e

    def normalize(self, value):
        if isinstance(value, bool) or not isinstance(value, int):
            if isinstance(value, Fraction) and value.denominator == 1:
                return int(value)
            raise TypeError(f"not an integer: {value!r}")
        return value

    def random(self, rng, bound=9):
        return rng.randint(-bound, bound)

    def __str__(self):
        return "Z"


@dataclass(frozen=True)
class Rationals(Ring):
    zero = Fraction(0)
    one = Fraction(1)

    def add(self, a, b):
        return a + b

    def neg(self, a):
        return -a

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def pow(self, a, e):
        return a**e

    def normalize(self, value):
        if isinstance(value, bool):
            raise TypeError(f"not a rational: {value!r}")
        if isinstance(value, (int, Fraction)):
            return Fraction(value)
        raise TypeError(f"not a rational: {value!r}")

    def random(self, rng, bound=9):
        return Fraction(rng.randint(-bound, bound), rng.randint(1, bound))

    def __str__(self):
        return "Q"


@dataclass(frozen=True)
class IntegersMod(Ring):
    n: int

    def __post_init__(self):
        if isinstance(self.n, bool) or not isinstance(self.n, int) or self.n < 2:
            raise ModulusInvalid(f"modulus must be an integer >= 2, got {self.n!r}")

    @property
    def zero(self):
        return 0

    @property
    def one(self):
        return 1

    def add(self, a, b):
        return (a + b) % self.n

    def neg(self, a):
        return -a % self.n

    def sub(self, a, b):
        return (a - b) % self.n

    def mul(self, a, b):
        return a * b % self.n

    def pow(self, a, e):
        return pow(a, e, self.n)

    def normalize(self, value):
        if isinstance(value, bool) or not isinstance(value, int):
            raise TypeError(f"not a residue: {value!r}")
        return value % self.n

    def random(self, rng, bound=9):
        return rng.randrange(self.n)

    @property
    def is_domain(self):
        return _is_prime(self.n)

    def __str__(self):
        return f"Z/{self.n}"


@dataclass(frozen=True)
class Poly(Ring):
    """Sparse multivariate polynomials over a non-polynomial base ring."""

    base: Ring
    vars: tuple

    def __post_init__(self):
        if isinstance(self.base, Poly):
            raise UnsupportedRing("polynomials over polynomial rings are not supported")
        if not isinstance(self.base, Ring):
            raise UnsupportedRing(f"not a ring descriptor: {self.base!r}")
        names = tuple(sorted(self.vars))
        if not names:
            raise UnsupportedRing("a polynomial ring needs at least one variable")
        if len(set(names)) != len(names):
            raise UnsupportedRing(f"duplicate variable names: {self.vars!r}")
        object.__setattr__(self, "vars", names)
        object.__setattr__(self, "_pos", {v: i for i, v in enumerate(names)})
        object.__setattr__(self, "_zero_exps", (0,) * len(names))

    @property
    def zero(self):
        return ()

    @property
    def one(self):
        return ((self._zero_exps, self.base.one),)

    def _pack(self, terms: Mapping) -> tuple:
        base = self.base
        return tuple(sorted((e, c) for e, c in terms.items() if not base.is_zero(c)))

    def terms(self, a) -> dict:
        return dict(a)

    def add(self, a, b):
        if not a:
            return b
        if not b:
            return a
        out = dict(a)
        badd = self.base.add
        for e, c in b:
            out[e] = badd(out[e], c) if e in out else c
        return self._pack(out)

    def neg(self, a):
        bneg = self.base.neg
        return tuple((e, bneg(c)) for e, c in a)

    def mul(self, a, b):
        if not a or not b:
            return ()
        out: dict = {}
        badd, bmul = self.base.add, self.base.mul
        for e1, c1 in a:
            for e2, c2 in b:
                e = tuple(x + y for x, y in zip(e1, e2))
                c = bmul(c1, c2)
                out[e] = badd(out[e], c) if e in out else c
        return self._pack(out)

    def normalize(self, value):
        if isinstance(value, Mapping):
            items = value.items()
        elif isinstance(value, (tuple, list)):
            items = value
        else:
            return self.const(self.base.normalize(value))
        out: dict = {}
        for e, c in items:
            if isinstance(e, Mapping):
                e = self.exps_from_dict(e)
            e = tuple(e)
            if len(e) != len(self.vars) or any(x < 0 for x in e):
                raise ValueError(f"bad exponent vector {e!r} for {self}")
            c = self.base.normalize(c)
            out[e] = self.base.add(out[e], c) if e in out else c
        return self._pack(out)

    def exps_from_dict(self, exps: Mapping[str, int]) -> tuple:
        vec = [0] * len(self.vars)
        for name, k in exps.items():
            if name not in self._pos:
                raise ValueError(f"unknown variable {name!r} for {self}")
            vec[self._pos[name]] = k
        return tuple(vec)

    def exps_to_dict(self, exps: tuple) -> dict:
        return {v: k for v, k in zip(self.vars, exps) if k}

    def const(self, c):
        return self._pack({self._zero_exps: c})

    def var(self, name: str):
        return self.monomial({name: 1})

    def monomial(self, exps: Mapping[str, int], coeff=None):
        c = self.base.one if coeff is None else coeff
        return self._pack({self.exps_from_dict(exps): c})

    def coefficient(self, a, exps: Mapping[str, int]):
        return dict(a).get(self.exps_from_dict(exps), self.base.zero)

    def degree(self, a) -> int:
        return max((sum(e) for e, _ in a), default=-1)

    def random(self, rng, bound=9, max_terms=3, max_degree=2):
        out = {}
        for _ in range(rng.randint(0, max_terms)):
            e = [0] * len(self.vars)
            for _ in range(rng.randint(0, max_degree)):
                e[rng.randrange(len(self.vars))] += 1
            out[tuple(e)] = self.base.random(rng, bound)
        return self._pack(out)

    @property
    def is_domain(self):
        return self.base.is_domain

    def __str__(self):
        return f"{self.base}[{','.join(self.vars)}]"


# --------------------------------------------------------------------------
# Scalar wrapper


class Scalar:
    """An immutable ring element."""

    __slots__ = ("ring", "value")

    def __init__(self, ring: Ring, value):
        object.__setattr__(self, "ring", ring)
        object.__setattr__(self, "value", ring.normalize(value))

    @classmethod
    def _raw(cls, ring, value):
        s = object.__new__(cls)
        object.__setattr__(s, "ring", ring)
        object.__setattr__(s, "value", value)
        return s

    def __setattr__(self, name, value):
        raise AttributeError("Scalar is immutable")

    def _other(self, other):
        if isinstance(other, Scalar):
            if other.ring != self.ring:
                raise RingMismatch(f"{self.ring} vs {other.ring}")
            return other.value
        if isinstance(other, int) and not isinstance(other, bool):
            return self.ring.from_int(other)
        return NotImplemented

    def __add__(self, other):
        v = self._other(other)
        if v is NotImplemented:
            return v
        return Scalar._raw(self.ring, self.ring.add(self.value, v))

    __radd__ = __add__

    def __sub__(self, other):
        v = self._other(other)
        if v is NotImplemented:
            return v
        return Scalar._raw(self.ring, self.ring.sub(self.value, v))

    def __rsub__(self, other):
        v = self._other(other)
        if v is NotImplemented:
            return v
        return Scalar._raw(self.ring, self.ring.sub(v, self.value))

    def __mul__(self, other):
        v = self._other(other)
        if v is NotImplemented:
            return v
        return Scalar._raw(self.ring, self.ring.mul(self.value, v))

    __rmul__ = __mul__

    def __neg__(self):
        return Scalar._raw(self.ring, self.ring.neg(self.value))

    def __pow__(self, e: int):
        return Scalar._raw(self.ring, self.ring.pow(self.value, e))

    def __eq__(self, other):
        if isinstance(other, Scalar):
            return self.ring == other.ring and self.value == other.value
        if isinstance(other, int) and not isinstance(other, bool):
            return self.value == self.ring.from_int(other)
        return NotImplemented

    def __hash__(self):
        return hash((self.ring, self.value))

    def is_zero(self) -> bool:
        return self.ring.is_zero(self.value)

    def __repr__(self):
        return f"Scalar({self.ring}, {self.value!r})"


def ring_add(a: Scalar, b: Scalar) -> Scalar:
    _same_ring(a, b)
    return a + b


def ring_mul(a: Scalar, b: Scalar) -> Scalar:
    _same_ring(a, b)
    return a * b


def ring_neg(a: Scalar) -> Scalar:
    return -a


def ring_pow(a: Scalar, e: int) -> Scalar:
    return a**e


def _same_ring(a: Scalar, b: Scalar):
    if a.ring != b.ring:
        raise RingMismatch(f"{a.ring} vs {b.ring}")


# --------------------------------------------------------------------------
# Canonical embeddings between supported rings


def can_coerce(src: Ring, dst: Ring) -> bool:
    if src == dst:
        return True
    if isinstance(src, Integers):
        if isinstance(dst, (Rationals, IntegersMod)):
            return True
    if isinstance(dst, Poly):
        if isinstance(src, Poly):
            return set(src.vars) <= set(dst.vars) and can_coerce(src.base, dst.base)
        return can_coerce(src, dst.base)
    return False


def coerce(value, src: Ring, dst: Ring):
    """Image of a raw ``value`` under the canonical map ``src -> dst``."""
    if src == dst:
        return value
    if isinstance(src, Integers):
        if isinstance(dst, Rationals):
            return Fraction(value)
        if isinstance(dst, IntegersMod):
            return value % dst.n
    if isinstance(dst, Poly):
        if isinstance(src, Poly) and set(src.vars) <= set(dst.vars):
            out = {}
            for e, c in value:
                e2 = dst.exps_from_dict(dict(zip(src.vars, e)))
                out[e2] = coerce(c, src.base, dst.base)
            return dst._pack(out)
        if not isinstance(src, Poly):
            return dst.const(coerce(value, src, dst.base))
    raise UnsupportedRing(f"no canonical map {src} -> {dst}")


def coerce_scalar(a: Scalar, dst: Ring) -> Scalar:
    return Scalar._raw(dst, coerce(a.value, a.ring, dst))


def fraction_embed(a: Scalar) -> Scalar:
    """Embed an element of Z or Z[vars] into Q or Q[vars]."""
    if isinstance(a.ring, Integers):
        return coerce_scalar(a, Rationals())
    if isinstance(a.ring, Poly) and isinstance(a.ring.base, Integers):
        return coerce_scalar(a, Poly(Rationals(), a.ring.vars))
    raise UnsupportedRing(f"fraction field embedding is only defined on Z and Z[...], not {a.ring}")


def base_ring(ring: Ring) -> Ring:
    return ring.base if isinstance(ring, Poly) else ring


def adjoin(ring: Ring, *names: str) -> Poly:
    """``ring[names]``, flattening so that no polynomial nesting occurs."""
    if isinstance(ring, Poly):
        clash = set(names) & set(ring.vars)
        if clash:
            raise UnsupportedRing(f"variables already present: {sorted(clash)}")
        return Poly(ring.base, ring.vars + tuple(names))
    return Poly(ring, tuple(names))


@dataclass(frozen=True)
class SubstitutionHom:
    """Ring map ``src -> dst`` sending each variable of ``src`` to a raw value of ``dst``.

    Base coefficients travel along the canonical map ``base(src) -> dst``.
    Variables not listed are sent to themselves, which must then exist in dst.
    """

    src: Ring
    dst: Ring
    images: tuple = ()

    def __post_init__(self):
        imgs = dict(self.images)
        for name, val in list(imgs.items()):
            if isinstance(val, Scalar):
                if val.ring != self.dst:
                    raise RingMismatch(f"image of {name} lives in {val.ring}, not {self.dst}")
                imgs[name] = val.value
        if isinstance(self.src, Poly):
            for name in self.src.vars:
                if name not in imgs:
                    if not isinstance(self.dst, Poly) or name not in self.dst.vars:
                        raise UnsupportedRing(f"no image for variable {name}")
                    imgs[name] = self.dst.var(name)
        elif imgs:
            raise UnsupportedRing(f"{self.src} has no variables to substitute")
        if not can_coerce(base_ring(self.src), self.dst):
            raise UnsupportedRing(f"no canonical map {base_ring(self.src)} -> {self.dst}")
        object.__setattr__(self, "images", tuple(sorted(imgs.items())))

    def __call__(self, value):
        if isinstance(value, Scalar):
            if value.ring != self.src:
                raise RingMismatch(f"{value.ring} vs {self.src}")
            return Scalar._raw(self.dst, self.apply(value.value))
        return self.apply(value)

    def apply(self, value):
        src, dst = self.src, self.dst
        if not isinstance(src, Poly):
            return coerce(value, src, dst)
        imgs = dict(self.images)
        powers = {}
        total = dst.zero
        for e, c in value:
            term = coerce(c, src.base, dst)
            for name, k in zip(src.vars, e):
                if k:
                    key = (name, k)
                    if key not in powers:
                        powers[key] = dst.pow(imgs[name], k)
                    term = dst.mul(term, powers[key])
            total = dst.add(total, term)
        return total


# --------------------------------------------------------------------------
# Combinatorial coefficients


def binomial(a: int, b: int) -> int:
    """Binomial coefficient; zero when ``b > a``."""
    if a < 0 or b < 0:
        raise ValueError("binomial arguments must be natural numbers")
    return math.comb(a, b)


def multinomial(parts: Iterable[int]) -> int:
    parts = list(parts)
    if any(p < 0 for p in parts):
        raise ValueError("multinomial parts must be natural numbers")
    result = math.factorial(sum(parts))
    for p in parts:
        result //= math.factorial(p)
    return result


def exact_div(num: int, den: int) -> int:
    q, r = divmod(num, den)
    if r:
        raise NotIntegral(f"{num} is not divisible by {den}")
    return q


def uniform_dp_coeff(m: int, n: int) -> int:
    """(m*n)! / (m! * (n!)**m), the constant in gamma_m(gamma_n(x))."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if m < 0:
        raise ValueError("m must be a natural number")
    f = math.factorial
    return exact_div(f(m * n), f(m) * f(n) ** m)


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    i = 2
    while i * i <= p:
        if p % i == 0:
            return False
        i += 1
    return True


def padic_val_factorial(p: int, n: int) -> int:
    """Exponent of the prime p in n! (Legendre)."""
    if not _is_prime(p):
        raise NotPrime(f"{p} is not prime")
    if n < 0:
        raise ValueError("n must be a natural number")
    total, q = 0, p
    while q <= n:
        total += n // q
        q *= p
    return total


def parse_ring(tag: str) -> Ring:
    """Parse ``Z``, ``Q``, ``Z/6``, ``Z[X,Y]``, ``Q[t]``, ``Z/6[X]``."""
    tag = tag.strip()
    if tag.endswith("]") and "[" in tag:
        head, _, rest = tag.partition("[")
        names = [v.strip() for v in rest[:-1].split(",") if v.strip()]
        return Poly(parse_ring(head), tuple(names))
    if tag == "Z":
        return Integers()
    if tag == "Q":
        return Rationals()
    if tag.startswith("Z/"):
        try:
            n = int(tag[2:])
        except ValueError:
            raise UnsupportedRing(f"bad ring tag {tag!r}") from None
        return IntegersMod(n)
    raise UnsupportedRing(f"bad ring tag {tag!r}")


ZZ = Integers()
QQ = Rationals()
