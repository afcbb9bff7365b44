"""Seeded random generators for the property suites and the CLI."""
from __future__ import annotations

import os
import random
from dataclasses import dataclass

from .gamma import FreeModuleSpec, GammaElement, ModuleVector
from .multiindex import BasisLabels, MultiIndex
from .scalars import IntegersMod, Poly, Ring

# 0xD1V1DED is not a hex literal; V -> 7 keeps the spelling recognisable.
DEFAULT_SEED = 0xD171DED
SEED_ENV = "GAMMA_FORGE_SEED"


def default_seed() -> int:
    env = os.environ.get(SEED_ENV)
    if env:
        return int(env, 0)
    return DEFAULT_SEED


def case_rng(seed: int, *tags) -> random.Random:
    """Independent, order-free stream for one sample case."""
    return random.Random(":".join(str(t) for t in (seed,) + tags))


@dataclass(frozen=True)
class SamplerConfig:
    coeff_bound: int = 9
    max_support: int = 4
    max_degree: int = 4
    min_degree: int = 1


def basis_labels(rank: int, prefix: str = "b") -> BasisLabels:
    return BasisLabels(tuple(f"{prefix}{i}" for i in range(1, rank + 1)))


def spec_of(ring: Ring, rank: int, prefix: str = "b") -> FreeModuleSpec:
    return FreeModuleSpec(ring, basis_labels(rank, prefix))


def random_scalar(rng: random.Random, ring: Ring, cfg: SamplerConfig = SamplerConfig()):
    return ring.random(rng, cfg.coeff_bound)


def random_unit_or_nonzero(rng: random.Random, ring: Ring, cfg: SamplerConfig = SamplerConfig()):
    """A raw scalar that is a nonzero-divisor: a unit for Z/n, nonzero otherwise."""
    if isinstance(ring, IntegersMod):
        from math import gcd

        units = [u for u in range(1, ring.n) if gcd(u, ring.n) == 1]
        return rng.choice(units)
    if isinstance(ring, Poly):
        return ring.const(random_unit_or_nonzero(rng, ring.base, cfg))
    while True:
        v = ring.random(rng, cfg.coeff_bound)
        if not ring.is_zero(v):
            return v


def random_index(rng: random.Random, basis: BasisLabels, lo: int, hi: int) -> MultiIndex:
    d = rng.randint(lo, hi)
    vec = [0] * len(basis)
    for _ in range(d):
        vec[rng.randrange(len(basis))] += 1
    return MultiIndex(basis, tuple(vec))


def random_vector(rng: random.Random, spec: FreeModuleSpec, cfg: SamplerConfig = SamplerConfig()) -> ModuleVector:
    return ModuleVector(spec, {x: random_scalar(rng, spec.ring, cfg) for x in spec.basis.labels})


def random_gamma(rng: random.Random, spec: FreeModuleSpec, cfg: SamplerConfig = SamplerConfig(),
                 augmented: bool = True) -> GammaElement:
    """Random element; ``augmented`` keeps the constant term zero."""
    lo = cfg.min_degree if augmented else 0
    terms = {}
    for _ in range(rng.randint(1, cfg.max_support)):
        k = random_index(rng, spec.basis, lo, cfg.max_degree)
        terms[k] = random_scalar(rng, spec.ring, cfg)
    return GammaElement(spec, terms)
