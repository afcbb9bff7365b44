"""Polynomial laws between free modules of finite rank.

A law ``f: M -> N`` with M free on labels I is determined by its coefficient
table ``k -> n_k`` (k a multi-index on I, n_k in N): for any test algebra S
(the base ring R or a polynomial ring over it) and m in S^I,

    f_S(m) = sum_k (prod_i m_i^{k_i}) n_k.
"""
from __future__ import annotations

from typing import Iterable, Mapping, Sequence

from .errors import AlgebraMismatch, NotHomogeneous, PartitionInvalid, SpecMismatch
from .gamma import FreeModuleSpec, GammaElement, ModuleVector, dp_generator, grade_basis
from .multiindex import BasisLabels, MultiIndex
from .scalars import Poly, Ring, Scalar, SubstitutionHom, adjoin, binomial, coerce


class PolyLaw:
    __slots__ = ("source", "target", "coeffs")

    def __init__(self, source: FreeModuleSpec, target: FreeModuleSpec, coeffs: Mapping = ()):
        if source.ring != target.ring:
            raise SpecMismatch(f"source over {source.ring}, target over {target.ring}")
        out = {}
        for k, v in dict(coeffs).items():
            if not isinstance(k, MultiIndex):
                k = MultiIndex(source.basis, k)
            elif k.basis != source.basis:
                raise SpecMismatch("coefficient index is not on the source basis")
            if not isinstance(v, ModuleVector):
                v = ModuleVector(target, v)
            elif v.spec != target:
                raise SpecMismatch("coefficient vector is not in the target module")
            out[k] = out[k] + v if k in out else v
        self.source = source
        self.target = target
        self.coeffs = {k: v for k, v in out.items() if not v.is_zero()}

    @property
    def ring(self) -> Ring:
        return self.source.ring

    def __eq__(self, other):
        if not isinstance(other, PolyLaw):
            return NotImplemented
        return self.source == other.source and self.target == other.target and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.source, self.target, frozenset(self.coeffs.items())))

    def __add__(self, other):
        if (self.source, self.target) != (other.source, other.target):
            raise SpecMismatch("laws between different modules")
        out = dict(self.coeffs)
        for k, v in other.coeffs.items():
            out[k] = out[k] + v if k in out else v
        return PolyLaw(self.source, self.target, out)

    def __neg__(self):
        return PolyLaw(self.source, self.target, {k: -v for k, v in self.coeffs.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, r) -> "PolyLaw":
        return PolyLaw(self.source, self.target, {k: v.scale(r) for k, v in self.coeffs.items()})

    def __rmul__(self, r):
        return self.scale(r)

    def degree(self) -> int:
        """Largest degree in the support; -1 for the zero law."""
        return max((k.degree for k in self.coeffs), default=-1)

    def degrees(self) -> set:
        return {k.degree for k in self.coeffs}

    def sorted_coeffs(self) -> list:
        return sorted(self.coeffs.items(), key=lambda kv: kv[0].sort_key())

    def is_zero(self) -> bool:
        return not self.coeffs

    def __repr__(self):
        body = ", ".join(f"{k.label()}: {v.coords}" for k, v in self.sorted_coeffs())
        return f"PolyLaw({body})"


def zero_law(source: FreeModuleSpec, target: FreeModuleSpec) -> PolyLaw:
    return PolyLaw(source, target, {})


def constant_law(source: FreeModuleSpec, v: ModuleVector) -> PolyLaw:
    return PolyLaw(source, v.spec, {source.zero_index(): v})


# --------------------------------------------------------------------------
# evaluation over test algebras


def check_test_algebra(S: Ring, R: Ring):
    """Test algebras are R itself or polynomial rings over R."""
    if S == R or (isinstance(S, Poly) and S.base == R):
        return
    raise AlgebraMismatch(f"{S} is not a test algebra over {R}")


def extend_spec(spec: FreeModuleSpec, S: Ring) -> FreeModuleSpec:
    """S (x) M, i.e. the free S-module on the same labels."""
    return FreeModuleSpec(S, spec.basis)


def base_change_vector(v: ModuleVector, S: Ring) -> ModuleVector:
    """1 (x) v in S (x) M."""
    R = v.spec.ring
    return ModuleVector._make(extend_spec(v.spec, S), {x: coerce(c, R, S) for x, c in v.coords.items()})


def eval_at(f: PolyLaw, m: ModuleVector) -> ModuleVector:
    """f_S(m) for m in S (x) M, where S = m.spec.ring."""
    S = m.spec.ring
    check_test_algebra(S, f.ring)
    if m.spec.basis != f.source.basis:
        raise AlgebraMismatch("argument is not on the source basis")
    R = f.ring
    zero = S.zero
    labels = f.source.basis.labels
    powers: dict = {}
    out: dict = {}
    for k, v in f.coeffs.items():
        mono = S.one
        for label, e in zip(labels, k.exps):
            if e:
                key = (label, e)
                if key not in powers:
                    powers[key] = S.pow(m.coords.get(label, zero), e)
                mono = S.mul(mono, powers[key])
        if S.is_zero(mono):
            continue
        for y, c in v.coords.items():
            t = S.mul(mono, coerce(c, R, S))
            out[y] = S.add(out[y], t) if y in out else t
    return ModuleVector._make(extend_spec(f.target, S), {y: c for y, c in out.items() if not S.is_zero(c)})


def generize(family: Mapping[str, ModuleVector], source: FreeModuleSpec) -> ModuleVector:
    """sum_i T_i (x) m_i over R[T_i], one variable per family label."""
    S = Poly(source.ring, tuple(family))
    spec = extend_spec(source, S)
    total = ModuleVector._make(spec, {})
    for name, v in family.items():
        if v.spec != source:
            raise SpecMismatch("family vector is not in the source module")
        t = S.var(name)
        total = total + ModuleVector._make(spec, {x: S.mul(t, S.const(c)) for x, c in v.coords.items()})
    return total


def coeff_of(f: PolyLaw, family: Mapping[str, ModuleVector]) -> dict:
    """Coefficients of f relative to a finite family, keyed by multi-indices on the family labels."""
    family = dict(family)
    if not family:
        value = f.coeffs.get(f.source.zero_index())
        basis = BasisLabels(())
        return {} if value is None else {MultiIndex(basis, ()): value}
    fam_basis = BasisLabels(tuple(family))
    gen = generize(family, f.source)
    S = gen.spec.ring
    image = eval_at(f, gen)
    out: dict = {}
    for y, poly in image.coords.items():
        for e, c in poly:
            k = MultiIndex(fam_basis, S.exps_to_dict(e))
            out.setdefault(k, {})[y] = c
    return {k: ModuleVector(f.target, v) for k, v in out.items()}


# --------------------------------------------------------------------------
# homogeneity and components


def is_homogeneous(f: PolyLaw, d: int) -> bool:
    return all(k.degree == d for k in f.coeffs)


def scaling_test(f: PolyLaw, d: int, m: ModuleVector, var: str = "t") -> bool:
    """Checks f(t m) == t^d f(m) over S[t], S the ring of m."""
    S0 = m.spec.ring
    check_test_algebra(S0, f.ring)
    S = adjoin(S0, var)
    t = S.var(var)
    lifted = ModuleVector._make(extend_spec(m.spec, S), {x: coerce(c, S0, S) for x, c in m.coords.items()})
    lhs = eval_at(f, lifted.scale(Scalar._raw(S, t)))
    rhs = eval_at(f, lifted).scale(Scalar._raw(S, S.pow(t, d)))
    return lhs == rhs


def component(f: PolyLaw, d: int) -> PolyLaw:
    return PolyLaw(f.source, f.target, {k: v for k, v in f.coeffs.items() if k.degree == d})


def components(f: PolyLaw) -> dict:
    return {d: component(f, d) for d in sorted(f.degrees())}


def component_sum(f: PolyLaw) -> PolyLaw:
    total = zero_law(f.source, f.target)
    for part in components(f).values():
        total = total + part
    return total


def component_at(f: PolyLaw, d: int, m: ModuleVector, var: str = "t") -> ModuleVector:
    """f_{d,S}(m): the t^d coefficient of f_{S[t]}(t m), computed from evaluations."""
    S0 = m.spec.ring
    check_test_algebra(S0, f.ring)
    S = adjoin(S0, var)
    lifted = ModuleVector._make(extend_spec(m.spec, S), {x: coerce(c, S0, S) for x, c in m.coords.items()})
    image = eval_at(f, lifted.scale(Scalar._raw(S, S.var(var))))
    ti = S.vars.index(var)
    out = {}
    for y, poly in image.coords.items():
        if isinstance(S0, Poly):
            keep = {}
            for e, c in poly:
                if e[ti] == d:
                    rest = {v: k for v, k in zip(S.vars, e) if v != var and k}
                    keep[S0.exps_from_dict(rest)] = c
            val = S0.normalize(list(keep.items()))
        else:
            val = S0.zero
            for e, c in poly:
                if e[ti] == d:
                    val = c
        if not S0.is_zero(val):
            out[y] = val
    return ModuleVector._make(extend_spec(f.target, S0), out)


def _check_partition(basis: BasisLabels, parts: Sequence[Iterable[str]]) -> list:
    parts = [list(p) for p in parts]
    flat = [x for p in parts for x in p]
    if sorted(flat) != sorted(basis.labels) or len(set(flat)) != len(flat):
        raise PartitionInvalid(f"{parts!r} is not a partition of {list(basis.labels)!r}")
    return [[basis.index(x) for x in p] for p in parts]


def multi_degree(k: MultiIndex, positions: list) -> tuple:
    return tuple(sum(k.exps[i] for i in pos) for pos in positions)


def multi_component(f: PolyLaw, parts: Sequence[Iterable[str]], degrees: Sequence[int]) -> PolyLaw:
    positions = _check_partition(f.source.basis, parts)
    degrees = tuple(degrees)
    if len(degrees) != len(positions):
        raise PartitionInvalid("one degree per factor is required")
    return PolyLaw(f.source, f.target,
                   {k: v for k, v in f.coeffs.items() if multi_degree(k, positions) == degrees})


def bi_component(f: PolyLaw, first: Iterable[str], second: Iterable[str], p: int, n: int) -> PolyLaw:
    return multi_component(f, [first, second], (p, n))


def is_multi_homogeneous(f: PolyLaw, parts, degrees) -> bool:
    return multi_component(f, parts, degrees) == f


# --------------------------------------------------------------------------
# divided differentials


def doubled_spec(spec: FreeModuleSpec) -> FreeModuleSpec:
    """M x M on labels ``L.1`` (first copy) then ``L.2`` (second copy)."""
    labels = tuple(f"{x}.1" for x in spec.basis.labels) + tuple(f"{x}.2" for x in spec.basis.labels)
    return FreeModuleSpec(spec.ring, BasisLabels(labels))


def factor_labels(spec: FreeModuleSpec) -> tuple:
    return [f"{x}.1" for x in spec.basis.labels], [f"{x}.2" for x in spec.basis.labels]


def pair_vector(z: ModuleVector, zp: ModuleVector) -> ModuleVector:
    """(z, z') in S (x) (M x M)."""
    if z.spec != zp.spec:
        raise SpecMismatch("pair components live in different modules")
    base = FreeModuleSpec(z.spec.ring, z.spec.basis)
    spec = doubled_spec(base)
    coords = {f"{x}.1": c for x, c in z.coords.items()}
    coords.update({f"{x}.2": c for x, c in zp.coords.items()})
    return ModuleVector._make(spec, coords)


def addition_law(spec: FreeModuleSpec) -> PolyLaw:
    """(m1, m2) -> m1 + m2 as a degree-one law on M x M."""
    dbl = doubled_spec(spec)
    coeffs = {}
    for x in spec.basis.labels:
        for suffix in (".1", ".2"):
            coeffs[MultiIndex(dbl.basis, {x + suffix: 1})] = spec.basis_vector(x)
    return PolyLaw(dbl, spec, coeffs)


def precompose_addition(f: PolyLaw) -> PolyLaw:
    """f o (addition law): expand each (z + z')^k with binomial splitting."""
    dbl = doubled_spec(f.source)
    out: dict = {}
    for k, v in f.coeffs.items():
        splits = [[]]
        for e in k.exps:
            splits = [s + [j] for s in splits for j in range(e + 1)]
        for j in splits:
            c = 1
            for e, ji in zip(k.exps, j):
                c *= binomial(e, ji)
            idx = MultiIndex(dbl.basis, tuple(j) + tuple(e - ji for e, ji in zip(k.exps, j)))
            w = v.scale(c)
            out[idx] = out[idx] + w if idx in out else w
    return PolyLaw(dbl, f.target, out)


def divided_differential_structural(n: int, f: PolyLaw) -> PolyLaw:
    """D^n f = sum_p of the (p, n) bihomogeneous components of f o add."""
    pi2 = precompose_addition(f)
    first, second = factor_labels(f.source)
    total = zero_law(pi2.source, f.target)
    for p in range(max(f.degree(), 0) + 1):
        total = total + bi_component(pi2, first, second, p, n)
    return total


def divided_differential_extraction(n: int, f: PolyLaw) -> PolyLaw:
    """Degree-n part in T2 of f(z T1 + z' T2), with symbolic z, z'."""
    labels = f.source.basis.labels
    zname = {x: f"z.{x}" for x in labels}
    wname = {x: f"w.{x}" for x in labels}
    S = Poly(f.ring, tuple(zname.values()) + tuple(wname.values()) + ("T1", "T2"))
    T1, T2 = S.var("T1"), S.var("T2")
    arg = ModuleVector._make(extend_spec(f.source, S), {
        x: S.add(S.mul(S.var(zname[x]), T1), S.mul(S.var(wname[x]), T2)) for x in labels
    })
    image = eval_at(f, arg)
    dbl = doubled_spec(f.source)
    i2 = S.vars.index("T2")
    out: dict = {}
    for y, poly in image.coords.items():
        for e, c in poly:
            if e[i2] != n:
                continue
            named = S.exps_to_dict(e)
            exps = {f"{x}.1": named.get(zname[x], 0) for x in labels}
            exps.update({f"{x}.2": named.get(wname[x], 0) for x in labels})
            k = MultiIndex(dbl.basis, exps)
            out.setdefault(k, {})
            out[k][y] = f.ring.add(out[k][y], c) if y in out[k] else c
    return PolyLaw(dbl, f.target, {k: ModuleVector(f.target, v) for k, v in out.items()})


def divided_differential(n: int, f: PolyLaw, method: str = "structural") -> PolyLaw:
    if method == "structural":
        return divided_differential_structural(n, f)
    if method == "extraction":
        return divided_differential_extraction(n, f)
    raise ValueError(f"unknown method {method!r}")


def taylor_sum_check(f: PolyLaw, z: ModuleVector, zp: ModuleVector) -> bool:
    """f(z + z') == sum_n D^n f(z, z')."""
    lhs = eval_at(f, z + zp)
    pair = pair_vector(z, zp)
    rhs = ModuleVector._make(lhs.spec, {})
    for n in range(max(f.degree(), 0) + 1):
        rhs = rhs + eval_at(divided_differential(n, f), pair)
    return lhs == rhs


# --------------------------------------------------------------------------
# the universal homogeneous law and factorization


def slice_spec(spec: FreeModuleSpec, d: int) -> FreeModuleSpec:
    """Gamma^d(M) as a free module on its monomial basis (labels like ``b1^[2]*b2^[1]``)."""
    return FreeModuleSpec(spec.ring, BasisLabels(tuple(k.label() for k in grade_basis(spec, d))))


def gamma_to_slice(a: GammaElement, d: int) -> ModuleVector:
    target = slice_spec(a.spec, d)
    coords = {}
    for k, c in a.terms.items():
        if k.degree != d:
            raise NotHomogeneous(f"term {k.label()} is not of degree {d}")
        coords[k.label()] = c
    return ModuleVector._make(target, coords)


def slice_to_gamma(v: ModuleVector, spec: FreeModuleSpec, d: int) -> GammaElement:
    by_label = {k.label(): k for k in grade_basis(spec, d)}
    return GammaElement(spec, {by_label[x]: c for x, c in v.coords.items()})


def delta_law(spec: FreeModuleSpec, d: int) -> PolyLaw:
    """m -> m^[d] read in the monomial basis of Gamma^d(M)."""
    target = slice_spec(spec, d)
    return PolyLaw(spec, target, {k: target.basis_vector(k.label()) for k in grade_basis(spec, d)})


def apply_linear(columns: Mapping[str, ModuleVector], v: ModuleVector, target: FreeModuleSpec) -> ModuleVector:
    """S-linear extension of an R-linear map given by its columns."""
    S = v.spec.ring
    R = target.ring
    out_spec = extend_spec(target, S)
    total = ModuleVector._make(out_spec, {})
    for x, c in v.coords.items():
        col = columns.get(x)
        if col is None:
            continue
        total = total + ModuleVector._make(out_spec, {
            y: S.mul(c, coerce(a, R, S)) for y, a in col.coords.items()
        })
    return ModuleVector._make(out_spec, {y: c for y, c in total.coords.items() if not S.is_zero(c)})


def factor_homogeneous(f: PolyLaw, d: int | None = None) -> dict:
    """Columns of the unique linear phi: Gamma^d(M) -> N with f = phi o delta_d."""
    if d is None:
        degs = f.degrees()
        if len(degs) > 1:
            raise NotHomogeneous(f"law has components in degrees {sorted(degs)}")
        d = degs.pop() if degs else 0
    if not is_homogeneous(f, d):
        raise NotHomogeneous(f"law is not homogeneous of degree {d}")
    zero = ModuleVector._make(f.target, {})
    return {k.label(): f.coeffs.get(k, zero) for k in grade_basis(f.source, d)}


def of_linear_map(columns: Mapping[str, ModuleVector], source: FreeModuleSpec, target: FreeModuleSpec) -> PolyLaw:
    """The degree-one law of a linear map given by its columns."""
    coeffs = {}
    for x, v in columns.items():
        coeffs[MultiIndex(source.basis, {x: 1})] = v
    return PolyLaw(source, target, coeffs)


def to_linear_map(f: PolyLaw) -> dict:
    if not is_homogeneous(f, 1):
        raise NotHomogeneous("only laws supported in degree one are linear maps")
    zero = ModuleVector._make(f.target, {})
    out = {x: zero for x in f.source.basis.labels}
    for k, v in f.coeffs.items():
        out[k.support()[0]] = v
    return out


def compat_check(f: PolyLaw, phi: SubstitutionHom, m: ModuleVector) -> bool:
    """(phi (x) id_N)(f_S(m)) == f_S'((phi (x) id_M)(m))."""
    if m.spec.ring != phi.src:
        raise AlgebraMismatch(f"argument over {m.spec.ring}, hom from {phi.src}")
    check_test_algebra(phi.dst, f.ring)

    def push(v: ModuleVector) -> ModuleVector:
        spec = extend_spec(v.spec, phi.dst)
        return ModuleVector._make(spec, {
            x: c for x, c in ((x, phi.apply(c)) for x, c in v.coords.items()) if not phi.dst.is_zero(c)
        })

    return push(eval_at(f, m)) == eval_at(f, push(m))


def law_from_gamma_table(spec: FreeModuleSpec, table: Mapping[MultiIndex, GammaElement], d: int) -> PolyLaw:
    """Helper: a law M -> Gamma^d(M) from gamma-valued coefficients."""
    target = slice_spec(spec, d)
    return PolyLaw(spec, target, {k: gamma_to_slice(g, d) for k, g in table.items()})


def delta_matches_dp(spec: FreeModuleSpec, d: int, x: ModuleVector) -> bool:
    """eval_at(delta_d, x) equals x^[d] read in coordinates (over R)."""
    return eval_at(delta_law(spec, d), x) == gamma_to_slice(dp_generator(d, x), d)


def random_law(rng, source: FreeModuleSpec, target: FreeModuleSpec, max_degree: int = 4,
               max_support: int = 4, degree: int | None = None, bound: int = 9) -> PolyLaw:
    """Seeded random law; ``degree`` forces homogeneity."""
    from .sampling import random_index

    coeffs = {}
    for _ in range(rng.randint(1, max_support)):
        lo, hi = (degree, degree) if degree is not None else (0, max_degree)
        k = random_index(rng, source.basis, lo, hi)
        v = ModuleVector(target, {y: target.ring.random(rng, bound) for y in target.basis.labels})
        coeffs[k] = coeffs[k] + v if k in coeffs else v
    return PolyLaw(source, target, coeffs)
