"""The divided power algebra of a free module of finite rank.

Elements are stored in the monomial basis ``b^[k] = prod_i b_i^[k_i]``, with

    b^[j] * b^[k] = prod_i C(j_i + k_i, j_i) * b^[j + k].

On the augmentation ideal (zero constant term) the divided powers are

    gamma_e(r b^[k]) = r^e * dp_coeff_multi(e, k) * b^[e k]

for a single term, extended to sums by gamma_n(x + y) = sum_{i+j=n} gamma_i(x) gamma_j(y).
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable, Mapping

from .errors import (
    BudgetExceeded,
    EmptyQuotientBasis,
    ImageNotInIdeal,
    NotDegreeOne,
    NotInAugmentationIdeal,
    SpecMismatch,
)
from .multiindex import (
    BasisLabels,
    MultiIndex,
    compositions_of_degree,
    dp_coeff_multi,
    mi_binomial_product,
    mi_scale,
    weak_compositions,
)
from .scalars import Ring, Scalar

DEFAULT_BUDGET = 10**6


@dataclass(frozen=True)
class FreeModuleSpec:
    ring: Ring
    basis: BasisLabels

    def __post_init__(self):
        if not isinstance(self.basis, BasisLabels):
            object.__setattr__(self, "basis", BasisLabels(tuple(self.basis)))
        if len(self.basis) == 0:
            raise SpecMismatch("a free module needs a nonempty basis")

    @property
    def rank(self) -> int:
        return len(self.basis)

    def vector(self, coords: Mapping[str, object]) -> "ModuleVector":
        return ModuleVector(self, coords)

    def basis_vector(self, label: str) -> "ModuleVector":
        return ModuleVector(self, {label: self.ring.one})

    def zero_index(self) -> MultiIndex:
        return MultiIndex(self.basis)

    def index(self, exps) -> MultiIndex:
        return MultiIndex(self.basis, exps)


def _raw(ring: Ring, value):
    if isinstance(value, Scalar):
        if value.ring != ring:
            raise SpecMismatch(f"scalar in {value.ring}, expected {ring}")
        return value.value
    return ring.normalize(value)


class ModuleVector:
    """An element of the free module: sparse coordinates ``label -> raw scalar``."""

    __slots__ = ("spec", "coords")

    def __init__(self, spec: FreeModuleSpec, coords: Mapping[str, object] = ()):
        ring = spec.ring
        out = {}
        for label, c in dict(coords).items():
            spec.basis.index(label)
            c = _raw(ring, c)
            if not ring.is_zero(c):
                out[label] = c
        self.spec = spec
        self.coords = out

    @classmethod
    def _make(cls, spec, coords):
        v = object.__new__(cls)
        v.spec = spec
        v.coords = coords
        return v

    def __getitem__(self, label) -> Scalar:
        self.spec.basis.index(label)
        return Scalar._raw(self.spec.ring, self.coords.get(label, self.spec.ring.zero))

    def __eq__(self, other):
        if not isinstance(other, ModuleVector):
            return NotImplemented
        return self.spec == other.spec and self.coords == other.coords

    def __hash__(self):
        return hash((self.spec, frozenset(self.coords.items())))

    def __add__(self, other):
        _same_spec(self.spec, other.spec)
        ring = self.spec.ring
        out = dict(self.coords)
        for k, c in other.coords.items():
            out[k] = ring.add(out[k], c) if k in out else c
        return ModuleVector._make(self.spec, {k: c for k, c in out.items() if not ring.is_zero(c)})

    def __neg__(self):
        ring = self.spec.ring
        return ModuleVector._make(self.spec, {k: ring.neg(c) for k, c in self.coords.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, r) -> "ModuleVector":
        ring = self.spec.ring
        r = _raw(ring, r) if not isinstance(r, int) or isinstance(r, bool) else ring.from_int(r)
        out = {k: ring.mul(r, c) for k, c in self.coords.items()}
        return ModuleVector._make(self.spec, {k: c for k, c in out.items() if not ring.is_zero(c)})

    def __rmul__(self, r):
        return self.scale(r)

    def is_zero(self) -> bool:
        return not self.coords

    def __repr__(self):
        return f"ModuleVector({self.coords!r})"


def _same_spec(a: FreeModuleSpec, b: FreeModuleSpec):
    if a != b:
        raise SpecMismatch(f"{a.ring}{list(a.basis)} vs {b.ring}{list(b.basis)}")


class GammaElement:
    """Element of the divided power algebra: sparse ``MultiIndex -> raw scalar``."""

    __slots__ = ("spec", "terms")

    def __init__(self, spec: FreeModuleSpec, terms: Mapping = ()):
        ring = spec.ring
        out = {}
        for k, c in dict(terms).items():
            if not isinstance(k, MultiIndex):
                k = MultiIndex(spec.basis, k)
            elif k.basis != spec.basis:
                raise SpecMismatch(f"index on {k.basis.labels!r}, element on {spec.basis.labels!r}")
            c = _raw(ring, c)
            if not ring.is_zero(c):
                out[k] = ring.add(out[k], c) if k in out else c
        self.spec = spec
        self.terms = {k: c for k, c in out.items() if not ring.is_zero(c)}

    @classmethod
    def _make(cls, spec, terms):
        g = object.__new__(cls)
        g.spec = spec
        g.terms = terms
        return g

    # ---- construction helpers
    @classmethod
    def zero(cls, spec: FreeModuleSpec) -> "GammaElement":
        return cls._make(spec, {})

    @classmethod
    def one(cls, spec: FreeModuleSpec) -> "GammaElement":
        return cls._make(spec, {spec.zero_index(): spec.ring.one})

    @classmethod
    def constant(cls, spec: FreeModuleSpec, r) -> "GammaElement":
        return cls(spec, {spec.zero_index(): r})

    @classmethod
    def monomial(cls, spec: FreeModuleSpec, exps, coeff=None) -> "GammaElement":
        c = spec.ring.one if coeff is None else coeff
        return cls(spec, {MultiIndex(spec.basis, exps): c})

    # ---- arithmetic
    def __eq__(self, other):
        if not isinstance(other, GammaElement):
            return NotImplemented
        return self.spec == other.spec and self.terms == other.terms

    def __hash__(self):
        return hash((self.spec, frozenset(self.terms.items())))

    def __add__(self, other):
        if isinstance(other, int) and not isinstance(other, bool):
            other = GammaElement.constant(self.spec, other)
        if not isinstance(other, GammaElement):
            return NotImplemented
        return g_add(self, other)

    __radd__ = __add__

    def __neg__(self):
        ring = self.spec.ring
        return GammaElement._make(self.spec, {k: ring.neg(c) for k, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, GammaElement):
            return g_mul(self, other)
        if isinstance(other, Scalar) or (isinstance(other, int) and not isinstance(other, bool)):
            return self.scale(other)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, Scalar) or (isinstance(other, int) and not isinstance(other, bool)):
            return self.scale(other)
        return NotImplemented

    def __pow__(self, n: int):
        return g_pow(self, n)

    def scale(self, r) -> "GammaElement":
        ring = self.spec.ring
        r = ring.from_int(r) if isinstance(r, int) else _raw(ring, r)
        out = {}
        for k, c in self.terms.items():
            v = ring.mul(r, c)
            if not ring.is_zero(v):
                out[k] = v
        return GammaElement._make(self.spec, out)

    # ---- inspection
    def coefficient(self, exps) -> Scalar:
        k = exps if isinstance(exps, MultiIndex) else MultiIndex(self.spec.basis, exps)
        return Scalar._raw(self.spec.ring, self.terms.get(k, self.spec.ring.zero))

    def is_zero(self) -> bool:
        return not self.terms

    def degrees(self) -> set:
        return {k.degree for k in self.terms}

    def is_homogeneous(self, d: int | None = None) -> bool:
        degs = self.degrees()
        if d is None:
            return len(degs) <= 1
        return degs <= {d}

    def sorted_terms(self) -> list:
        return sorted(self.terms.items(), key=lambda kv: kv[0].sort_key())

    def __repr__(self):
        if not self.terms:
            return "GammaElement(0)"
        body = " + ".join(f"{c}*{k.label()}" for k, c in self.sorted_terms())
        return f"GammaElement({body})"


def _check_same(a: GammaElement, b: GammaElement):
    if a.spec != b.spec:
        raise SpecMismatch(
            f"{a.spec.ring}{list(a.spec.basis)} vs {b.spec.ring}{list(b.spec.basis)}"
        )


def g_add(a: GammaElement, b: GammaElement) -> GammaElement:
    _check_same(a, b)
    ring = a.spec.ring
    out = dict(a.terms)
    for k, c in b.terms.items():
        if k in out:
            v = ring.add(out[k], c)
            if ring.is_zero(v):
                del out[k]
            else:
                out[k] = v
        else:
            out[k] = c
    return GammaElement._make(a.spec, out)


def _accumulate(out: dict, ring: Ring, k, c):
    if k in out:
        out[k] = ring.add(out[k], c)
    else:
        out[k] = c


def _prune(ring: Ring, out: dict) -> dict:
    return {k: c for k, c in out.items() if not ring.is_zero(c)}


def g_mul(a: GammaElement, b: GammaElement) -> GammaElement:
    _check_same(a, b)
    ring = a.spec.ring
    basis = a.spec.basis
    out: dict = {}
    from_int, mul = ring.from_int, ring.mul
    for j, cj in a.terms.items():
        je = j.exps
        for k, ck in b.terms.items():
            coef = mi_binomial_product(j, k)
            c = mul(cj, ck)
            if coef != 1:
                c = mul(from_int(coef), c)
            key = MultiIndex._make(basis, tuple(x + y for x, y in zip(je, k.exps)))
            _accumulate(out, ring, key, c)
    return GammaElement._make(a.spec, _prune(ring, out))


def g_pow(a: GammaElement, n: int) -> GammaElement:
    if n < 0:
        raise ValueError("negative power")
    result = GammaElement.one(a.spec)
    for _ in range(n):
        result = g_mul(result, a)
    return result


def dp_generator(n: int, x: ModuleVector) -> GammaElement:
    """x^[n] = sum over deg k = n of (prod_i x_i^{k_i}) b^[k]."""
    spec = x.spec
    ring = spec.ring
    if n < 0:
        raise ValueError("n must be a natural number")
    if n == 0:
        return GammaElement.one(spec)
    support = [label for label in spec.basis.labels if label in x.coords]
    out = {}
    for comp in weak_compositions(n, support):
        c = ring.one
        for label, e in comp.items():
            if e:
                c = ring.mul(c, ring.pow(x.coords[label], e))
        if not ring.is_zero(c):
            out[MultiIndex(spec.basis, comp)] = c
    return GammaElement._make(spec, out)


def grade_component(d: int, a: GammaElement) -> GammaElement:
    return GammaElement._make(a.spec, {k: c for k, c in a.terms.items() if k.degree == d})


def grade_decompose(a: GammaElement) -> dict:
    out: dict = {}
    for k, c in a.terms.items():
        out.setdefault(k.degree, {})[k] = c
    return {d: GammaElement._make(a.spec, t) for d, t in sorted(out.items())}


def in_augmentation_ideal(a: GammaElement) -> bool:
    return not any(k.degree == 0 for k in a.terms)


def grade_zero_iso(spec: FreeModuleSpec, r) -> GammaElement:
    """R -> Gamma^0(M), r -> r * 1."""
    return GammaElement.constant(spec, r)


def grade_zero_inverse(a: GammaElement) -> Scalar:
    if any(k.degree != 0 for k in a.terms):
        raise SpecMismatch("element is not of degree 0")
    return a.coefficient(a.spec.zero_index())


def _single_term_gammas(spec, k: MultiIndex, r, n: int, single_coeff=dp_coeff_multi) -> list:
    """[gamma_e(r b^[k]) for e = 0..n], each as a (index, raw coeff) pair or None."""
    ring = spec.ring
    out = [(spec.zero_index(), ring.one)]
    rp = ring.one
    for e in range(1, n + 1):
        rp = ring.mul(rp, r)
        c = ring.mul(ring.from_int(single_coeff(e, k)), rp)
        out.append(None if ring.is_zero(c) else (mi_scale(e, k), c))
    return out


def _mul_by_term(a_terms: dict, ring, basis, k: MultiIndex, c, out: dict):
    ke = k.exps
    mul, from_int = ring.mul, ring.from_int
    for j, cj in a_terms.items():
        coef = mi_binomial_product(j, k)
        v = mul(cj, c)
        if coef != 1:
            v = mul(from_int(coef), v)
        key = MultiIndex._make(basis, tuple(x + y for x, y in zip(j.exps, ke)))
        _accumulate(out, ring, key, v)


def gamma_n(n: int, a: GammaElement, budget: int = DEFAULT_BUDGET, method: str = "dp",
            single_coeff=dp_coeff_multi) -> GammaElement:
    """Divided power gamma_n on the augmentation ideal.

    ``method="dp"`` folds the terms of ``a`` in one at a time, keeping
    gamma_j of the partial sum for every j <= n.  ``method="compositions"``
    sums over all weak compositions of n on the support directly.  Both compute
    the same sum; ``budget`` bounds the number of intermediate terms.
    ``single_coeff`` replaces the single-term constant; only mutation tests
    pass anything else.
    """
    spec = a.spec
    if n < 0:
        raise ValueError("n must be a natural number")
    if n == 0:
        return GammaElement.one(spec)
    if not in_augmentation_ideal(a):
        raise NotInAugmentationIdeal("gamma_n with n >= 1 needs an element with zero constant term")
    if method == "dp":
        return _gamma_dp(n, a, budget, single_coeff)
    if method == "compositions":
        return _gamma_compositions(n, a, budget, single_coeff)
    raise ValueError(f"unknown method {method!r}")


def _gamma_dp(n, a, budget, single_coeff):
    spec = a.spec
    ring, basis = spec.ring, spec.basis
    # partial[j] = gamma_j(sum of the terms folded in so far)
    partial = [{spec.zero_index(): ring.one}] + [{} for _ in range(n)]
    used = 0
    for k, r in a.sorted_terms():
        single = _single_term_gammas(spec, k, r, n, single_coeff)
        new = []
        for j in range(n + 1):
            acc: dict = {}
            for e in range(j + 1):
                if single[e] is None or not partial[j - e]:
                    continue
                used += len(partial[j - e])
                if used > budget:
                    raise BudgetExceeded(f"gamma_{n} exceeded the budget of {budget} intermediate terms")
                _mul_by_term(partial[j - e], ring, basis, single[e][0], single[e][1], acc)
            new.append(_prune(ring, acc))
        partial = new
    return GammaElement._make(spec, partial[n])


def _gamma_compositions(n, a, budget, single_coeff):
    spec = a.spec
    ring, basis = spec.ring, spec.basis
    items = a.sorted_terms()
    singles = [_single_term_gammas(spec, k, r, n, single_coeff) for k, r in items]
    out: dict = {}
    used = 0
    for comp in weak_compositions(n, list(range(len(items)))):
        used += 1
        if used > budget:
            raise BudgetExceeded(f"gamma_{n} exceeded the budget of {budget} compositions")
        prod = {spec.zero_index(): ring.one}
        for idx, e in comp.items():
            if e == 0:
                continue
            t = singles[idx][e]
            if t is None:
                prod = {}
                break
            nxt: dict = {}
            _mul_by_term(prod, ring, basis, t[0], t[1], nxt)
            prod = nxt
        for key, c in prod.items():
            _accumulate(out, ring, key, c)
    return GammaElement._make(spec, _prune(ring, out))


# --------------------------------------------------------------------------
# functoriality, quotients, grade one


def map_linear(columns: Mapping[str, ModuleVector], a: GammaElement,
               target: FreeModuleSpec | None = None) -> GammaElement:
    """Gamma(f) for the linear map f with ``f(b_i) = columns[b_i]``.

    Labels missing from ``columns`` are sent to zero.
    """
    if target is None:
        if not columns:
            raise SpecMismatch("target spec needed for an empty column map")
        target = next(iter(columns.values())).spec
    for v in columns.values():
        _same_spec(v.spec, target)
    if target.ring != a.spec.ring:
        raise SpecMismatch(f"map over {target.ring}, element over {a.spec.ring}")
    zero_vec = ModuleVector._make(target, {})
    cache: dict = {}

    def dp_of(label, e):
        key = (label, e)
        if key not in cache:
            cache[key] = dp_generator(e, columns.get(label, zero_vec))
        return cache[key]

    result = GammaElement.zero(target)
    for k, c in a.terms.items():
        img = GammaElement.one(target)
        for label, e in zip(a.spec.basis.labels, k.exps):
            if e:
                img = g_mul(img, dp_of(label, e))
        result = g_add(result, img.scale(Scalar._raw(target.ring, c)))
    return result


def compose_columns(g: Mapping[str, ModuleVector], f: Mapping[str, ModuleVector],
                    target: FreeModuleSpec) -> dict:
    """Columns of g o f, where f: M -> N and g: N -> P (``target`` = P)."""
    out = {}
    for label, v in f.items():
        acc = ModuleVector._make(target, {})
        for n_label, c in v.coords.items():
            if n_label in g:
                acc = acc + g[n_label].scale(Scalar._raw(target.ring, c))
        out[label] = acc
    return out


def identity_columns(spec: FreeModuleSpec) -> dict:
    return {x: spec.basis_vector(x) for x in spec.basis.labels}


def reduced_spec(spec: FreeModuleSpec, drop: Iterable[str]) -> FreeModuleSpec:
    drop = set(drop)
    for label in drop:
        spec.basis.index(label)
    kept = tuple(x for x in spec.basis.labels if x not in drop)
    if not kept:
        raise EmptyQuotientBasis("cannot drop every basis vector")
    return FreeModuleSpec(spec.ring, BasisLabels(kept))


def quotient_by_basis_span(drop: Iterable[str], a: GammaElement) -> GammaElement:
    """Image under Gamma(M) -> Gamma(M / span(drop))."""
    drop = set(drop)
    target = reduced_spec(a.spec, drop)
    keep_pos = [a.spec.basis.index(x) for x in target.basis.labels]
    drop_pos = [a.spec.basis.index(x) for x in drop]
    out = {}
    for k, c in a.terms.items():
        if any(k.exps[i] for i in drop_pos):
            continue
        out[MultiIndex._make(target.basis, tuple(k.exps[i] for i in keep_pos))] = c
    return GammaElement._make(target, out)


def include_reduced(a: GammaElement, full: FreeModuleSpec) -> GammaElement:
    """Section of the quotient map: relabel a reduced-basis element into the full basis."""
    if a.spec.ring != full.ring:
        raise SpecMismatch("ring mismatch")
    pos = [full.basis.index(x) for x in a.spec.basis.labels]
    out = {}
    for k, c in a.terms.items():
        vec = [0] * len(full.basis)
        for i, e in zip(pos, k.exps):
            vec[i] = e
        out[MultiIndex._make(full.basis, tuple(vec))] = c
    return GammaElement._make(full, out)


def grade_one_iota(x: ModuleVector) -> GammaElement:
    spec = x.spec
    out = {}
    for label, c in x.coords.items():
        vec = [0] * spec.rank
        vec[spec.basis.index(label)] = 1
        out[MultiIndex._make(spec.basis, tuple(vec))] = c
    return GammaElement._make(spec, out)


def grade_one_inverse(a: GammaElement) -> ModuleVector:
    coords = {}
    for k, c in a.terms.items():
        if k.degree != 1:
            raise NotDegreeOne(f"term {k.label()} has degree {k.degree}")
        coords[k.support()[0]] = c
    return ModuleVector._make(a.spec, coords)


def lift_to_dp(target, phi: Mapping[str, object], a: GammaElement):
    """The algebra map Gamma(M) -> A with b^[k] -> prod_i gamma_{k_i}(phi(b_i)).

    ``target`` is a divided power structure (see ``dpaxioms.DpStructure``);
    ``phi`` maps each basis label to an element of its ideal.
    """
    for label in a.spec.basis.labels:
        if label in phi and not target.contains(phi[label]):
            raise ImageNotInIdeal(f"phi({label}) is not in the ideal")
    zero = target.zero
    cache: dict = {}

    def gam(label, e):
        if (label, e) not in cache:
            cache[(label, e)] = target.gamma(e, phi.get(label, zero))
        return cache[(label, e)]

    result = zero
    for k, c in a.sorted_terms():
        img = target.one
        for label, e in zip(a.spec.basis.labels, k.exps):
            if e:
                img = img * gam(label, e)
        result = result + target.scalar(Scalar._raw(a.spec.ring, c)) * img
    return result


def rank_one(ring: Ring, label: str = "T") -> FreeModuleSpec:
    return FreeModuleSpec(ring, BasisLabels((label,)))


def t_power(spec: FreeModuleSpec, n: int, coeff=None) -> GammaElement:
    """T^(n) in the rank-one algebra."""
    (label,) = spec.basis.labels
    return GammaElement.monomial(spec, {label: n}, coeff)


def grade_basis(spec: FreeModuleSpec, d: int) -> list:
    """Monomial basis of Gamma^d(M)."""
    return compositions_of_degree(spec.basis, d)


def map_coefficients(a: GammaElement, target: FreeModuleSpec, fn: Callable) -> GammaElement:
    """Apply a ring map coefficient-wise (same basis labels)."""
    if target.basis != a.spec.basis:
        raise SpecMismatch("basis mismatch")
    out = {}
    for k, c in a.terms.items():
        v = fn(c)
        if not target.ring.is_zero(v):
            out[k if k.basis is target.basis else MultiIndex._make(target.basis, k.exps)] = v
    return GammaElement._make(target, out)
