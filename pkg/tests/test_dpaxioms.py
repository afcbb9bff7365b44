import json
from fractions import Fraction

import pytest

from gamma_forge.dpaxioms import (
    AXIOMS,
    MUTATIONS,
    check_axioms,
    corrupt,
    gamma_augmentation,
    gamma_oracle,
    generator_uniqueness,
    oracle_structure,
    quotient_dp,
    rational_canonical,
)
from gamma_forge.errors import KernelNotStable, NotRationalAlgebra, UnsupportedRing
from gamma_forge.gamma import GammaElement, gamma_n, rank_one, t_power
from gamma_forge.jsonio import dumps
from gamma_forge.sampling import case_rng, random_gamma, spec_of
from gamma_forge.scalars import QQ, ZZ, IntegersMod, Poly, Scalar

SEED = 20240601


def test_rational_examples():
    P = Poly(QQ, ("X",))
    dp = rational_canonical(P, ["X"])
    X = Scalar(P, P.var("X"))
    assert dp.gamma(3, X) == X * X * X * Scalar(P, P.const(Fraction(1, 6)))
    assert dp.gamma(0, X) == Scalar(P, P.one)
    y = X + X * X
    assert dp.gamma(2, y) == y * y * Scalar(P, P.const(Fraction(1, 2)))
    with pytest.raises(NotRationalAlgebra):
        rational_canonical(ZZ)
    with pytest.raises(NotRationalAlgebra):
        rational_canonical(Poly(ZZ, ("X",)), ["X"])


@pytest.mark.parametrize("ring,gens", [(Poly(QQ, ("X",)), ["X"]), (Poly(QQ, ("X", "Y")), ["X", "Y"])], ids=["(X)", "(X,Y)"])
def test_rational_axioms(ring, gens):
    report = check_axioms(rational_canonical(ring, gens), SEED, samples=200, max_n=5)
    assert report.ok, report.to_json()


@pytest.mark.parametrize("ring", [ZZ, QQ, IntegersMod(6)], ids=str)
@pytest.mark.parametrize("rank", [1, 2, 3])
def test_gamma_augmentation_axioms(ring, rank):
    report = check_axioms(gamma_augmentation(spec_of(ring, rank)), SEED, samples=60, max_n=4)
    assert report.ok, report.to_json()


def test_report_shape():
    report = check_axioms(gamma_augmentation(spec_of(ZZ, 1)), 7, samples=5, max_n=3)
    rows = report.to_json()
    assert [r["axiom"] for r in rows] == list(AXIOMS)
    for r in rows:
        assert set(r) == {"axiom", "pass", "fail", "counterexample", "seed", "maxN"}
        assert r["pass"] == 5 and r["fail"] == 0 and r["counterexample"] is None
    json.loads(dumps(rows))


def test_harness_parallel_matches_serial():
    dp = corrupt(gamma_augmentation(spec_of(ZZ, 2)), "iv")
    a = check_axioms(dp, SEED, samples=40, max_n=3)
    b = check_axioms(dp, SEED, samples=40, max_n=3, jobs=4)
    assert dumps(a.to_json()) == dumps(b.to_json())


@pytest.mark.parametrize("target", sorted(MUTATIONS))
@pytest.mark.parametrize("ring", [ZZ, IntegersMod(6)], ids=str)
def test_mutations_caught(target, ring):
    dp = corrupt(gamma_augmentation(spec_of(ring, 2)), target)
    report = check_axioms(dp, SEED, samples=200, max_n=4)
    assert target in report.failing()
    res = report.results[target]
    assert res.counterexample is not None
    assert ("lhs" in res.counterexample and "rhs" in res.counterexample) or "error" in res.counterexample


def test_oracle_examples():
    spec = spec_of(ZZ, 2)
    b1 = GammaElement.monomial(spec, {"b1": 1})
    assert gamma_oracle(2, b1) == GammaElement.monomial(spec, {"b1": 2})
    T = rank_one(ZZ)
    assert gamma_oracle(2, t_power(T, 2)) == t_power(T, 4, 3)
    with pytest.raises(UnsupportedRing):
        gamma_oracle(2, GammaElement.monomial(spec_of(IntegersMod(6), 1), {"b1": 1}))


def test_oracle_equivalence():
    for i in range(200):
        rng = case_rng(SEED, "oracle-eq", i)
        spec = spec_of(ZZ, rng.randint(1, 3))
        a = random_gamma(rng, spec)
        n = rng.randint(0, 4)
        assert gamma_n(n, a) == gamma_oracle(n, a)


def test_oracle_structure_passes_harness():
    report = check_axioms(oracle_structure(spec_of(ZZ, 2)), SEED, samples=40, max_n=3)
    assert report.ok


def test_quotient_dp():
    spec = spec_of(ZZ, 2)
    q = quotient_dp(gamma_augmentation(spec), ["b2"], seed=SEED)
    small = q.spec
    x = GammaElement.monomial(small, {"b1": 1})
    assert q.gamma(2, x) == GammaElement.monomial(small, {"b1": 2})
    assert check_axioms(q, SEED, samples=100, max_n=4).ok


def test_quotient_detects_unstable_kernel():
    base = gamma_augmentation(spec_of(ZZ, 2))
    bad = corrupt(base, "iii")  # adds 1 to gamma_n, so kernel elements leave the kernel
    with pytest.raises(KernelNotStable):
        quotient_dp(bad, ["b2"], seed=SEED)


def test_generator_uniqueness():
    spec = spec_of(ZZ, 2)
    res = generator_uniqueness(gamma_augmentation(spec), oracle_structure(spec), SEED, samples=100)
    assert res["generators_agree"] and res["agree"] == 100
    res = generator_uniqueness(gamma_augmentation(spec), corrupt(gamma_augmentation(spec), "vi"), SEED, samples=30)
    assert not res["generators_agree"]
