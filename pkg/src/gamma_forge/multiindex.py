"""Finitely supported exponent maps on a finite, ordered label set."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterator, Mapping, Sequence

from .errors import BasisMismatch, EmptyIndex
from .scalars import binomial, exact_div


@dataclass(frozen=True)
class BasisLabels:
    labels: tuple
    _pos: dict = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        labels = tuple(self.labels)
        if len(set(labels)) != len(labels):
            raise BasisMismatch(f"duplicate basis labels: {labels!r}")
        if not all(isinstance(x, str) for x in labels):
            raise BasisMismatch("basis labels must be strings")
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "_pos", {x: i for i, x in enumerate(labels)})

    def __len__(self):
        return len(self.labels)

    def __iter__(self):
        return iter(self.labels)

    def __contains__(self, label):
        return label in self._pos

    def index(self, label: str) -> int:
        try:
            return self._pos[label]
        except KeyError:
            raise BasisMismatch(f"label {label!r} not in basis {self.labels!r}") from None


class MultiIndex:
    """Exponent map ``label -> nat`` stored densely along its basis.

    The dense tuple is an implementation detail; ``as_dict`` gives the sparse
    view with zero entries omitted.
    """

    __slots__ = ("basis", "exps", "_hash")

    def __init__(self, basis: BasisLabels, exps=None):
        if exps is None:
            vec = (0,) * len(basis)
        elif isinstance(exps, Mapping):
            v = [0] * len(basis)
            for label, k in exps.items():
                v[basis.index(label)] = k
            vec = tuple(v)
        else:
            vec = tuple(exps)
            if len(vec) != len(basis):
                raise BasisMismatch(f"exponent vector of length {len(vec)} on basis of size {len(basis)}")
        if any((not isinstance(k, int)) or k < 0 for k in vec):
            raise ValueError(f"exponents must be natural numbers: {vec!r}")
        self.basis = basis
        self.exps = vec
        self._hash = hash(vec)

    @classmethod
    def _make(cls, basis, vec):
        mi = object.__new__(cls)
        mi.basis = basis
        mi.exps = vec
        mi._hash = hash(vec)
        return mi

    def __eq__(self, other):
        if not isinstance(other, MultiIndex):
            return NotImplemented
        return self.exps == other.exps and (self.basis is other.basis or self.basis == other.basis)

    def __hash__(self):
        return self._hash

    def __lt__(self, other):
        return self.sort_key() < other.sort_key()

    def sort_key(self):
        """(degree, exponents lexicographic along the basis order)."""
        return (sum(self.exps), self.exps)

    @property
    def degree(self) -> int:
        return sum(self.exps)

    def __getitem__(self, label: str) -> int:
        return self.exps[self.basis.index(label)]

    def as_dict(self) -> dict:
        return {x: k for x, k in zip(self.basis.labels, self.exps) if k}

    def support(self) -> list:
        return [x for x, k in zip(self.basis.labels, self.exps) if k]

    def __add__(self, other):
        return mi_add(self, other)

    def label(self) -> str:
        """Readable name, e.g. ``b1^[2]*b2^[1]``; ``1`` for the empty index."""
        parts = [f"{x}^[{k}]" for x, k in zip(self.basis.labels, self.exps) if k]
        return "*".join(parts) if parts else "1"

    def __repr__(self):
        return f"MultiIndex({self.as_dict()!r})"


def _check(a: MultiIndex, b: MultiIndex):
    if a.basis is not b.basis and a.basis != b.basis:
        raise BasisMismatch(f"{a.basis.labels!r} vs {b.basis.labels!r}")


def mi_add(a: MultiIndex, b: MultiIndex) -> MultiIndex:
    _check(a, b)
    return MultiIndex._make(a.basis, tuple(x + y for x, y in zip(a.exps, b.exps)))


def mi_binomial_product(a: MultiIndex, b: MultiIndex) -> int:
    """prod_i C(a_i + b_i, a_i): the structure constant of b^[a] * b^[b]."""
    _check(a, b)
    out = 1
    for x, y in zip(a.exps, b.exps):
        if x and y:
            out *= math.comb(x + y, x)
    return out


def mi_scale(m: int, k: MultiIndex) -> MultiIndex:
    if m < 0:
        raise ValueError("scale factor must be a natural number")
    return MultiIndex._make(k.basis, tuple(m * x for x in k.exps))


def dp_coeff_multi(m: int, k: MultiIndex) -> int:
    """The integer c with gamma_m(b^[k]) = c * b^[m k].

    Equals (1/m!) * prod_i (m k_i)! / (k_i!)^m.
    """
    if k.degree == 0:
        raise EmptyIndex("dp_coeff_multi needs an index of positive degree")
    if m < 0:
        raise ValueError("m must be a natural number")
    f = math.factorial
    num, den = 1, f(m)
    for x in k.exps:
        if x:
            num *= f(m * x)
            den *= f(x) ** m
    return exact_div(num, den)


def weak_compositions(n: int, slots: Sequence) -> Iterator[dict]:
    """Every map ``slot -> nat`` with total ``n``, in lexicographic order
    (first slot largest first)."""
    slots = list(slots)
    if n < 0:
        return
    if not slots:
        if n == 0:
            yield {}
        return

    def rec(i, remaining, acc):
        if i == len(slots) - 1:
            acc[slots[i]] = remaining
            yield dict(acc)
            return
        for v in range(remaining, -1, -1):
            acc[slots[i]] = v
            yield from rec(i + 1, remaining - v, acc)

    yield from rec(0, n, {})


def compositions_of_degree(basis: BasisLabels, d: int) -> list:
    """All multi-indices of degree ``d`` on ``basis``, in canonical order."""
    out = [MultiIndex._make(basis, tuple(c[x] for x in basis.labels)) for c in weak_compositions(d, basis.labels)]
    out.sort(key=MultiIndex.sort_key)
    return out


def count_weak_compositions(n: int, s: int) -> int:
    if s == 0:
        return 1 if n == 0 else 0
    return binomial(n + s - 1, s - 1)
