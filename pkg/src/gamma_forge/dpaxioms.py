"""Divided power structures and an exact, seeded axiom harness.

A ``DpStructure`` bundles an algebra (through its element type's ``+`` and
``*``), an ideal-membership predicate and the maps gamma_n.  ``check_axioms``
evaluates both sides of each of the seven divided power axioms on sampled
inputs and reports counts plus the first counterexample per axiom.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Callable, Optional

from .errors import (
    GammaForgeError,
    KernelNotStable,
    NotInAugmentationIdeal,
    NotIntegral,
    NotRationalAlgebra,
    UnsupportedRing,
)
from .gamma import (
    DEFAULT_BUDGET,
    FreeModuleSpec,
    GammaElement,
    dp_generator,
    g_mul,
    gamma_n,
    grade_one_iota,
    in_augmentation_ideal,
    include_reduced,
    quotient_by_basis_span,
    reduced_spec,
)
from .multiindex import MultiIndex
from .sampling import SamplerConfig, case_rng, random_gamma, random_vector
from .scalars import (
    QQ,
    Integers,
    Poly,
    Rationals,
    Ring,
    Scalar,
    binomial,
    uniform_dp_coeff,
)

AXIOMS = ("i", "ii", "iii", "iv", "v", "vi", "vii")


@dataclass
class DpStructure:
    name: str
    one: object
    zero: object
    contains: Callable[[object], bool]
    gamma: Callable[[int, object], object]
    sample: Callable  # rng -> ideal element
    sample_ring: Callable  # rng -> arbitrary ring element
    scalar: Callable  # base-ring Scalar -> algebra element
    spec: Optional[FreeModuleSpec] = None


@dataclass
class AxiomResult:
    axiom: str
    passed: int = 0
    failed: int = 0
    counterexample: Optional[dict] = None


@dataclass
class AxiomReport:
    structure: str
    seed: int
    samples: int
    max_n: int
    results: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(r.failed == 0 for r in self.results.values())

    def failing(self) -> list:
        return [a for a, r in self.results.items() if r.failed]

    def to_json(self) -> list:
        from .jsonio import to_json

        return [
            {
                "axiom": a,
                "pass": r.passed,
                "fail": r.failed,
                "counterexample": None if r.counterexample is None else to_json(r.counterexample),
                "seed": self.seed,
                "maxN": self.max_n,
            }
            for a, r in self.results.items()
        ]


def _eval_case(dp: DpStructure, axiom: str, seed: int, i: int, max_n: int):
    """Returns None on pass, or a counterexample dict."""
    rng = case_rng(seed, axiom, i)
    x = dp.sample(rng)
    inputs = {"x": x}
    try:
        if axiom == "i":
            lhs, rhs = dp.gamma(0, x), dp.one
        elif axiom == "ii":
            lhs, rhs = dp.gamma(1, x), x
        elif axiom == "iii":
            n = rng.randint(1, max_n)
            inputs["n"] = n
            lhs = dp.gamma(n, x)
            if dp.contains(lhs):
                return None
            return {"case": i, "inputs": inputs, "lhs": lhs, "rhs": "not in ideal"}
        elif axiom == "iv":
            y = dp.sample(rng)
            n = rng.randint(0, max_n)
            inputs.update(y=y, n=n)
            lhs = dp.gamma(n, x + y)
            rhs = dp.zero
            for j in range(n + 1):
                rhs = rhs + dp.gamma(j, x) * dp.gamma(n - j, y)
        elif axiom == "v":
            r = dp.sample_ring(rng)
            n = rng.randint(0, max_n)
            inputs.update(r=r, n=n)
            rn = dp.one
            for _ in range(n):
                rn = rn * r
            lhs, rhs = dp.gamma(n, r * x), rn * dp.gamma(n, x)
        elif axiom == "vi":
            m, n = rng.randint(0, max_n), rng.randint(0, max_n)
            inputs.update(m=m, n=n)
            lhs = dp.gamma(m, x) * dp.gamma(n, x)
            rhs = dp.gamma(m + n, x) * binomial(m + n, m)
        elif axiom == "vii":
            m, n = rng.randint(0, max_n), rng.randint(1, max_n)
            inputs.update(m=m, n=n)
            lhs = dp.gamma(m, dp.gamma(n, x))
            rhs = dp.gamma(m * n, x) * uniform_dp_coeff(m, n)
        else:
            raise ValueError(f"unknown axiom {axiom!r}")
    except GammaForgeError as exc:
        return {"case": i, "inputs": inputs, "error": {"kind": exc.kind, "detail": str(exc)}}
    if lhs == rhs:
        return None
    return {"case": i, "inputs": inputs, "lhs": lhs, "rhs": rhs}


def check_axioms(dp: DpStructure, seed: int, samples: int = 200, max_n: int = 4,
                 axioms=AXIOMS, jobs: int = 1) -> AxiomReport:
    if max_n < 2:
        raise ValueError("max_n must be >= 2")
    if samples < 1:
        raise ValueError("samples must be >= 1")
    report = AxiomReport(dp.name, seed, samples, max_n)
    for axiom in axioms:
        if jobs > 1:
            with ThreadPoolExecutor(max_workers=jobs) as pool:
                outcomes = list(pool.map(lambda i: _eval_case(dp, axiom, seed, i, max_n), range(samples)))
        else:
            outcomes = [_eval_case(dp, axiom, seed, i, max_n) for i in range(samples)]
        res = AxiomResult(axiom)
        for out in outcomes:
            if out is None:
                res.passed += 1
            else:
                res.failed += 1
                if res.counterexample is None:
                    res.counterexample = out
        report.results[axiom] = res
    return report


# --------------------------------------------------------------------------
# Canonical structures


def gamma_augmentation(spec: FreeModuleSpec, cfg: SamplerConfig = SamplerConfig(),
                       budget: int = DEFAULT_BUDGET) -> DpStructure:
    """The divided powers of the augmentation ideal of Gamma(M)."""
    return DpStructure(
        name=f"gamma[{spec.ring};{','.join(spec.basis.labels)}]",
        one=GammaElement.one(spec),
        zero=GammaElement.zero(spec),
        contains=in_augmentation_ideal,
        gamma=lambda n, x: gamma_n(n, x, budget=budget),
        sample=lambda rng: random_gamma(rng, spec, cfg),
        sample_ring=lambda rng: random_gamma(rng, spec, cfg, augmented=False),
        scalar=lambda r: GammaElement.constant(spec, r),
        spec=spec,
    )


def _monomial_generators(ring: Poly, generators) -> list:
    """Exponent tuples of the (monomial) ideal generators."""
    out = []
    for g in generators:
        if isinstance(g, str):
            g = ring.var(g)
        elif isinstance(g, Scalar):
            g = g.value
        else:
            g = ring.normalize(g)
        if len(g) != 1:
            raise UnsupportedRing("ideal generators must be monomials")
        out.append(g[0][0])
    return out


def rational_canonical(ring: Ring, generators=(), cfg: SamplerConfig = SamplerConfig()) -> DpStructure:
    """gamma_n(x) = x^n / n! on a monomial ideal of Q or Q[vars]."""
    if isinstance(ring, Rationals):
        whole = any(not QQ.is_zero(QQ.normalize(g.value if isinstance(g, Scalar) else g)) for g in generators)

        def contains(x):
            return whole or x.is_zero()

        def sample(rng):
            return Scalar._raw(ring, ring.random(rng, cfg.coeff_bound) if whole else ring.zero)

        def sample_ring(rng):
            return Scalar._raw(ring, ring.random(rng, cfg.coeff_bound))

        def inv_fact(n):
            return Fraction(1, math.factorial(n))

    elif isinstance(ring, Poly) and isinstance(ring.base, Rationals):
        gens = _monomial_generators(ring, generators)

        def contains(x):
            if x.ring != ring:
                return False
            return all(any(all(a >= b for a, b in zip(e, g)) for g in gens) for e, _ in x.value)

        def _rand_poly(rng, with_gen):
            total = ring.zero
            for _ in range(rng.randint(1, cfg.max_support)):
                e = [0] * len(ring.vars)
                for _ in range(rng.randint(0, cfg.max_degree - 1)):
                    e[rng.randrange(len(e))] += 1
                if with_gen:
                    g = rng.choice(gens)
                    e = [a + b for a, b in zip(e, g)]
                c = ring.base.random(rng, cfg.coeff_bound)
                total = ring.add(total, ring.normalize([(tuple(e), c)]))
            return total

        def sample(rng):
            return Scalar._raw(ring, _rand_poly(rng, True) if gens else ring.zero)

        def sample_ring(rng):
            return Scalar._raw(ring, _rand_poly(rng, False))

        def inv_fact(n):
            return ring.const(Fraction(1, math.factorial(n)))

    else:
        raise NotRationalAlgebra(f"x^n/n! needs a Q-algebra, not {ring}")

    def gamma(n, x):
        return Scalar._raw(ring, ring.mul(ring.pow(x.value, n), inv_fact(n)))

    def scalar(r):
        from .scalars import coerce

        return Scalar._raw(ring, coerce(r.value, r.ring, ring))

    return DpStructure(
        name=f"rational[{ring}]",
        one=Scalar._raw(ring, ring.one),
        zero=Scalar._raw(ring, ring.zero),
        contains=contains,
        gamma=gamma,
        sample=sample,
        sample_ring=sample_ring,
        scalar=scalar,
    )


def gamma_oracle(n: int, a: GammaElement) -> GammaElement:
    """gamma_n computed in Q[X_i] through b^[k] -> prod X_i^{k_i} / k_i!."""
    spec = a.spec
    if not isinstance(spec.ring, (Integers, Rationals)):
        raise UnsupportedRing(f"the fraction-field oracle needs Z or Q, not {spec.ring}")
    if n == 0:
        return GammaElement.one(spec)
    if not in_augmentation_ideal(a):
        raise NotInAugmentationIdeal("oracle gamma_n needs zero constant term")
    labels = spec.basis.labels
    P = Poly(QQ, labels)
    pos = [P.vars.index(x) for x in labels]
    image = P.zero
    for k, c in a.terms.items():
        vec = [0] * len(labels)
        den = 1
        for i, e in zip(pos, k.exps):
            vec[i] = e
            den *= math.factorial(e)
        image = P.add(image, P.normalize([(tuple(vec), Fraction(c) / den)]))
    power = P.pow(image, n)
    nf = math.factorial(n)
    out = {}
    for vec, c in power:
        c = c / nf
        for e in vec:
            c *= math.factorial(e)
        if isinstance(spec.ring, Integers):
            if c.denominator != 1:
                raise NotIntegral(f"oracle produced non-integral coefficient {c} at {vec}")
            c = c.numerator
        out[MultiIndex(spec.basis, tuple(vec[i] for i in pos))] = c
    return GammaElement(spec, out)


def oracle_structure(spec: FreeModuleSpec, cfg: SamplerConfig = SamplerConfig()) -> DpStructure:
    base = gamma_augmentation(spec, cfg)
    return replace(base, name=f"oracle[{spec.ring};{','.join(spec.basis.labels)}]", gamma=gamma_oracle)


def quotient_dp(dp: DpStructure, drop, seed: int = 0, max_n: int = 4, checks: int = 20,
                cfg: SamplerConfig = SamplerConfig()) -> DpStructure:
    """Divided powers on Gamma(M / span(drop)) by lifting, applying gamma, projecting.

    Raises KernelNotStable if gamma of a sampled kernel element, or of a
    sampled lift shifted by the kernel, does not project as it should.
    """
    if dp.spec is None:
        raise UnsupportedRing("quotient_dp needs a structure on a divided power algebra")
    full = dp.spec
    drop = sorted(set(drop))
    small = reduced_spec(full, drop)

    def project(z):
        return quotient_by_basis_span(drop, z)

    def lift(z):
        return include_reduced(z, full)

    zero_small = GammaElement.zero(small)
    for p in drop:
        for n in range(1, max_n + 1):
            gen = GammaElement.monomial(full, {p: n})
            for m in range(1, max_n + 1):
                if project(dp.gamma(m, gen)) != zero_small:
                    raise KernelNotStable(f"gamma_{m}({p}^[{n}]) leaves the kernel")
    for i in range(checks):
        rng = case_rng(seed, "kernel", i)
        p = rng.choice(drop)
        gen = GammaElement.monomial(full, {p: rng.randint(1, max_n)})
        k = g_mul(gen, random_gamma(rng, full, cfg, augmented=False))
        x = random_gamma(rng, small, cfg)
        m = rng.randint(1, max_n)
        if project(dp.gamma(m, k)) != zero_small:
            raise KernelNotStable(f"gamma_{m} of a kernel element leaves the kernel")
        if project(dp.gamma(m, lift(x) + k)) != project(dp.gamma(m, lift(x))):
            raise KernelNotStable(f"gamma_{m} is not well defined modulo the kernel")

    return DpStructure(
        name=f"{dp.name}/span({','.join(drop)})",
        one=GammaElement.one(small),
        zero=zero_small,
        contains=in_augmentation_ideal,
        gamma=lambda m, z: project(dp.gamma(m, lift(z))),
        sample=lambda rng: random_gamma(rng, small, cfg),
        sample_ring=lambda rng: random_gamma(rng, small, cfg, augmented=False),
        scalar=lambda r: GammaElement.constant(small, r),
        spec=small,
    )


def random_generated_element(rng, spec: FreeModuleSpec, max_n: int, cfg: SamplerConfig = SamplerConfig()) -> GammaElement:
    """sum of r * x_1^[n_1] ... x_k^[n_k] with random vectors x_j and n_j > 0."""
    total = GammaElement.zero(spec)
    for _ in range(rng.randint(1, 3)):
        prod = GammaElement.constant(spec, spec.ring.random(rng, cfg.coeff_bound))
        for _ in range(rng.randint(1, 2)):
            prod = g_mul(prod, dp_generator(rng.randint(1, max_n), random_vector(rng, spec, cfg)))
        total = total + prod
    return total


def generator_uniqueness(dp1: DpStructure, dp2: DpStructure, seed: int, samples: int = 100,
                         max_n: int = 4, cfg: SamplerConfig = SamplerConfig()) -> dict:
    """Compare two structures on x^[1] (generators) and on generated ideal elements."""
    spec = dp1.spec
    if spec is None or dp2.spec != spec:
        raise UnsupportedRing("generator_uniqueness compares two structures on the same Gamma(M)")
    gen_ok = True
    vectors = [spec.basis_vector(x) for x in spec.basis.labels]
    vectors += [random_vector(case_rng(seed, "gen", i), spec, cfg) for i in range(samples)]
    for v in vectors:
        g = grade_one_iota(v)
        for n in range(max_n + 1):
            if dp1.gamma(n, g) != dp2.gamma(n, g):
                gen_ok = False
    agree = 0
    for i in range(samples):
        rng = case_rng(seed, "generated", i)
        z = random_generated_element(rng, spec, 2, cfg)
        n = rng.randint(0, max_n)
        if dp1.gamma(n, z) == dp2.gamma(n, z):
            agree += 1
    return {"generators_agree": gen_ok, "agree": agree, "samples": samples}


# --------------------------------------------------------------------------
# Mutation testing of the harness

MUTATIONS = {
    "i": "gamma_0 returns 0",
    "ii": "gamma_1 doubles its argument",
    "iii": "gamma_n adds 1 for n >= 2",
    "iv": "gamma_n ignores cross terms between monomials for n >= 2",
    "v": "gamma_n normalises the sign of the leading coefficient first",
    "vi": "gamma_2 scaled by 2",
    "vii": "single-term constant dp_coeff_multi replaced by 1",
}


def _lead_negative(x: GammaElement) -> bool:
    if not x.terms:
        return False
    k, c = x.sorted_terms()[-1]
    ring = x.spec.ring
    if hasattr(ring, "n"):
        return c > ring.n // 2
    return c < 0


def corrupt(dp: DpStructure, target: str) -> DpStructure:
    """A deliberately wrong variant of a Gamma-based structure."""
    g = dp.gamma
    if target == "i":
        def bad(n, x):
            return dp.zero if n == 0 else g(n, x)
    elif target == "ii":
        def bad(n, x):
            return x + x if n == 1 else g(n, x)
    elif target == "iii":
        def bad(n, x):
            return g(n, x) + dp.one if n >= 2 else g(n, x)
    elif target == "iv":
        def bad(n, x):
            if n < 2:
                return g(n, x)
            total = dp.zero
            for k, c in x.terms.items():
                total = total + g(n, GammaElement._make(x.spec, {k: c}))
            return total
    elif target == "v":
        def bad(n, x):
            return g(n, -x) if _lead_negative(x) else g(n, x)
    elif target == "vi":
        def bad(n, x):
            return g(n, x) * 2 if n == 2 else g(n, x)
    elif target == "vii":
        def bad(n, x):
            return gamma_n(n, x, single_coeff=lambda e, k: 1)
    else:
        raise ValueError(f"unknown mutation {target!r}")
    return replace(dp, name=f"{dp.name}!{target}", gamma=bad)
