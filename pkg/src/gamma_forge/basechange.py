"""Base change S (x)_R Gamma_R(M) -> Gamma_S(S (x)_R M) for free M.

For free M both sides have the monomial basis b^[k], so an element of
S (x) Gamma_R(M) is stored as an S-linear combination of R-monomials
(``TensorElement``).  Its product goes through Gamma_R: (s (x) a)(t (x) b) = st (x) ab.
theta itself is the relabelling b^[k] -> (1 (x) b)^[k]; what the checks exercise
is the generator formula theta(s (x) x^[n]) = s (1 (x) x)^[n] on non-basis x and
multiplicativity.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

from .errors import ExtensionMismatch, UnsupportedRing
from .gamma import (
    FreeModuleSpec,
    GammaElement,
    ModuleVector,
    dp_generator,
    g_mul,
    gamma_n,
    grade_basis,
    in_augmentation_ideal,
    map_coefficients,
)
from .multiindex import MultiIndex
from .sampling import (
    SamplerConfig,
    case_rng,
    random_gamma,
    random_unit_or_nonzero,
    random_vector,
    spec_of,
)
from .scalars import IntegersMod, Ring, Scalar, can_coerce, coerce, parse_ring, ZZ


@dataclass(frozen=True)
class Extension:
    base: Ring
    top: Ring

    def __post_init__(self):
        if not can_coerce(self.base, self.top):
            raise UnsupportedRing(f"no canonical map {self.base} -> {self.top}")

    def embed(self, value):
        return coerce(value, self.base, self.top)

    @property
    def tag(self) -> str:
        return f"{self.base}->{self.top}"

    def base_spec(self, spec: FreeModuleSpec) -> FreeModuleSpec:
        if spec.ring != self.base:
            raise ExtensionMismatch(f"module over {spec.ring}, extension from {self.base}")
        return spec

    def top_spec(self, spec: FreeModuleSpec) -> FreeModuleSpec:
        return FreeModuleSpec(self.top, spec.basis)


def parse_extension(tag: str) -> Extension:
    base, sep, top = tag.partition("->")
    if not sep:
        raise UnsupportedRing(f"extension tag must look like 'Z->Q', got {tag!r}")
    return Extension(parse_ring(base), parse_ring(top))


STANDARD_EXTENSIONS = ("Z->Q", "Z->Z[X]", "Q->Q[X,Y]", "Z->Z/6")


class TensorElement:
    """Element of S (x)_R Gamma_R(M): ``MultiIndex -> raw S scalar``."""

    __slots__ = ("ext", "spec", "terms")

    def __init__(self, ext: Extension, spec: FreeModuleSpec, terms: Mapping = ()):
        ext.base_spec(spec)
        S = ext.top
        out = {}
        for k, c in dict(terms).items():
            if not isinstance(k, MultiIndex):
                k = MultiIndex(spec.basis, k)
            if isinstance(c, Scalar):
                if c.ring != S:
                    raise ExtensionMismatch(f"coefficient in {c.ring}, expected {S}")
                c = c.value
            else:
                c = S.normalize(c)
            out[k] = S.add(out[k], c) if k in out else c
        self.ext = ext
        self.spec = spec
        self.terms = {k: c for k, c in out.items() if not S.is_zero(c)}

    @classmethod
    def from_gamma(cls, ext: Extension, a: GammaElement, s=None) -> "TensorElement":
        """s (x) a."""
        ext.base_spec(a.spec)
        S = ext.top
        s = S.one if s is None else (s.value if isinstance(s, Scalar) else S.normalize(s))
        return cls(ext, a.spec, {k: S.mul(s, ext.embed(c)) for k, c in a.terms.items()})

    def __eq__(self, other):
        if not isinstance(other, TensorElement):
            return NotImplemented
        return self.ext == other.ext and self.spec == other.spec and self.terms == other.terms

    def __hash__(self):
        return hash((self.ext, self.spec, frozenset(self.terms.items())))

    def _check(self, other):
        if self.ext != other.ext or self.spec != other.spec:
            raise ExtensionMismatch("tensor elements over different extensions or modules")

    def __add__(self, other):
        self._check(other)
        S = self.ext.top
        out = dict(self.terms)
        for k, c in other.terms.items():
            out[k] = S.add(out[k], c) if k in out else c
        return TensorElement(self.ext, self.spec, out)

    def __mul__(self, other):
        self._check(other)
        S = self.ext.top
        out: dict = {}
        for j, sj in self.terms.items():
            bj = GammaElement._make(self.spec, {j: self.spec.ring.one})
            for k, tk in other.terms.items():
                bk = GammaElement._make(self.spec, {k: self.spec.ring.one})
                st = S.mul(sj, tk)
                for key, c in g_mul(bj, bk).terms.items():
                    v = S.mul(st, self.ext.embed(c))
                    out[key] = S.add(out[key], v) if key in out else v
        return TensorElement(self.ext, self.spec, out)

    def scale(self, s) -> "TensorElement":
        S = self.ext.top
        s = s.value if isinstance(s, Scalar) else S.normalize(s)
        return TensorElement(self.ext, self.spec, {k: S.mul(s, c) for k, c in self.terms.items()})

    def __repr__(self):
        return f"TensorElement({self.ext.tag}, {self.terms!r})"


def theta_forward(ext: Extension, t: TensorElement) -> GammaElement:
    if t.ext != ext:
        raise ExtensionMismatch(f"element over {t.ext.tag}, map over {ext.tag}")
    top = ext.top_spec(t.spec)
    return GammaElement._make(top, {MultiIndex._make(top.basis, k.exps): c for k, c in t.terms.items()})


def theta_inverse(ext: Extension, a: GammaElement, base_spec: FreeModuleSpec | None = None) -> TensorElement:
    if a.spec.ring != ext.top:
        raise ExtensionMismatch(f"element over {a.spec.ring}, extension to {ext.top}")
    spec = base_spec or FreeModuleSpec(ext.base, a.spec.basis)
    if spec.basis != a.spec.basis:
        raise ExtensionMismatch("basis mismatch")
    return TensorElement(ext, spec, {MultiIndex._make(spec.basis, k.exps): c for k, c in a.terms.items()})


def embed_vector(ext: Extension, x: ModuleVector) -> ModuleVector:
    """1 (x) x in S (x) M."""
    ext.base_spec(x.spec)
    return ModuleVector._make(ext.top_spec(x.spec), {y: ext.embed(c) for y, c in x.coords.items()})


# --------------------------------------------------------------------------
# uniqueness certification


def theta_table(ext: Extension, spec: FreeModuleSpec, max_degree: int = 3) -> dict:
    """Images of 1 (x) b^[k] for all k of degree <= max_degree."""
    out = {}
    for d in range(max_degree + 1):
        for k in grade_basis(spec, d):
            out[k] = theta_forward(ext, TensorElement(ext, spec, {k: ext.top.one}))
    return out


def complete_multiplicatively(ext: Extension, spec: FreeModuleSpec, generator_images: Mapping,
                              max_degree: int = 3) -> dict:
    """Table on all monomials from images of the generators b_i^[n]."""
    top = ext.top_spec(spec)
    out = {}
    for d in range(max_degree + 1):
        for k in grade_basis(spec, d):
            img = GammaElement.one(top)
            for label, e in zip(spec.basis.labels, k.exps):
                if e:
                    img = g_mul(img, generator_images[(label, e)])
            out[k] = img
    return out


def apply_table(ext: Extension, table: Mapping, t: TensorElement) -> GammaElement:
    """S-linear map S (x) Gamma_R(M) -> Gamma_S given on the monomial basis."""
    top = ext.top_spec(t.spec)
    S = ext.top
    total = GammaElement.zero(top)
    for k, c in t.terms.items():
        img = table.get(k)
        if img is None:
            continue
        total = total + img.scale(Scalar._raw(S, c))
    return total


def uniqueness_test_set(ext: Extension, spec: FreeModuleSpec, seed: int, samples: int = 50,
                        cfg: SamplerConfig = SamplerConfig()) -> list:
    """Basis vectors followed by ``samples`` seeded vectors whose coordinates are
    nonzero-divisors (so every monomial shows up in x^[n])."""
    vectors = [spec.basis_vector(x) for x in spec.basis.labels]
    for i in range(samples):
        rng = case_rng(seed, "theta-unique", i)
        vectors.append(ModuleVector(spec, {x: random_unit_or_nonzero(rng, spec.ring, cfg)
                                           for x in spec.basis.labels}))
    return vectors


def theta_uniqueness(ext: Extension, spec: FreeModuleSpec, table: Mapping, seed: int,
                     samples: int = 50, max_degree: int = 3) -> bool:
    """Does the candidate agree with theta on every 1 (x) x^[n] of the test set?"""
    for x in uniqueness_test_set(ext, spec, seed, samples):
        ex = embed_vector(ext, x)
        for n in range(max_degree + 1):
            lhs = apply_table(ext, table, TensorElement.from_gamma(ext, dp_generator(n, x)))
            if lhs != dp_generator(n, ex):
                return False
    return True


# --------------------------------------------------------------------------
# property runs


def verify_extension(ext: Extension, rank: int, seed: int, samples: int = 200, max_n: int = 3,
                     cfg: SamplerConfig = SamplerConfig()) -> dict:
    """Counts of failures for each isomorphism property on seeded samples."""
    spec = spec_of(ext.base, rank)
    S = ext.top
    fails = {k: 0 for k in ("additive", "multiplicative", "unital", "roundtrip",
                            "roundtrip_top", "generator", "dp_compatible")}
    one = TensorElement.from_gamma(ext, GammaElement.one(spec))
    if theta_forward(ext, one) != GammaElement.one(ext.top_spec(spec)):
        fails["unital"] += 1
    top_spec = ext.top_spec(spec)
    for i in range(samples):
        rng = case_rng(seed, "theta", ext.tag, i)
        s1, s2 = S.random(rng, cfg.coeff_bound), S.random(rng, cfg.coeff_bound)
        a = TensorElement.from_gamma(ext, random_gamma(rng, spec, cfg, augmented=False), s1)
        b = TensorElement.from_gamma(ext, random_gamma(rng, spec, cfg, augmented=False), s2)
        ta, tb = theta_forward(ext, a), theta_forward(ext, b)
        if theta_forward(ext, a + b) != ta + tb:
            fails["additive"] += 1
        if theta_forward(ext, a * b) != g_mul(ta, tb):
            fails["multiplicative"] += 1
        if theta_inverse(ext, ta, spec) != a:
            fails["roundtrip"] += 1
        c = random_gamma(rng, top_spec, cfg, augmented=False)
        if theta_forward(ext, theta_inverse(ext, c, spec)) != c:
            fails["roundtrip_top"] += 1
        x = random_vector(rng, spec, cfg)
        n = rng.randint(0, max_n)
        s = S.random(rng, cfg.coeff_bound)
        lhs = theta_forward(ext, TensorElement.from_gamma(ext, dp_generator(n, x), s))
        rhs = dp_generator(n, embed_vector(ext, x)).scale(Scalar._raw(S, s))
        if lhs != rhs:
            fails["generator"] += 1
        z = random_gamma(rng, spec, cfg)
        n = rng.randint(0, max_n)
        if theta_forward(ext, TensorElement.from_gamma(ext, gamma_n(n, z))) != gamma_n(
                n, theta_forward(ext, TensorElement.from_gamma(ext, z))):
            fails["dp_compatible"] += 1
    return {"extension": ext.tag, "rank": rank, "samples": samples, "failures": fails,
            "ok": not any(fails.values())}


def reduce_mod(a: GammaElement, n: int) -> GammaElement:
    """Coefficient-wise reduction Gamma_Z(M) -> Gamma_{Z/n}(M)."""
    if a.spec.ring != ZZ:
        raise ExtensionMismatch("reduction mod n starts from Z")
    R = IntegersMod(n)
    return map_coefficients(a, FreeModuleSpec(R, a.spec.basis), lambda c: c % n)


def reduction_square(n: int, a: GammaElement, m: int) -> bool:
    """gamma_m over Z then reduce == reduce then gamma_m over Z/n."""
    if not in_augmentation_ideal(a) and m > 0:
        from .errors import NotInAugmentationIdeal

        raise NotInAugmentationIdeal("reduction_square needs an augmentation-ideal element")
    return reduce_mod(gamma_n(m, a), n) == gamma_n(m, reduce_mod(a, n))
