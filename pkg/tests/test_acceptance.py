"""Acceptance criteria. Every check is exact (zero tolerance).

Run under pytest, or directly with ``python3 tests/test_acceptance.py`` to get
one PASS/FAIL line per criterion.
"""
from __future__ import annotations

import math
import os
import sys
import time

import pytest

sys.path.insert(0, os.path.dirname(__file__))

from gamma_forge.basechange import (  # noqa: E402
    STANDARD_EXTENSIONS,
    parse_extension,
    theta_table,
    theta_uniqueness,
    verify_extension,
)
from gamma_forge.dpaxioms import (  # noqa: E402
    MUTATIONS,
    check_axioms,
    corrupt,
    gamma_augmentation,
    gamma_oracle,
    quotient_dp,
)
from gamma_forge.errors import NotIntegral  # noqa: E402
from gamma_forge.gamma import (  # noqa: E402
    GammaElement,
    ModuleVector,
    dp_generator,
    g_mul,
    g_pow,
    gamma_n,
    grade_basis,
    grade_one_inverse,
    grade_one_iota,
    quotient_by_basis_span,
    rank_one,
    t_power,
)
from gamma_forge.polylaw import (  # noqa: E402
    PolyLaw,
    apply_linear,
    coeff_of,
    component,
    component_sum,
    components,
    divided_differential,
    eval_at,
    extend_spec,
    factor_homogeneous,
    gamma_to_slice,
    is_homogeneous,
    random_law,
    scaling_test,
    taylor_sum_check,
)
from gamma_forge.sampling import DEFAULT_SEED, case_rng, random_gamma, random_vector, spec_of  # noqa: E402
from gamma_forge.scalars import QQ, ZZ, IntegersMod, Poly, Scalar, padic_val_factorial  # noqa: E402

from oracles import gamma_via_fractions, pascal  # noqa: E402

SEED = DEFAULT_SEED


def _record(name, ok, detail):
    line = f"{'PASS' if ok else 'FAIL'}  {name}: {detail}"
    print(line)
    try:
        from conftest import record

        record(line)
    except ImportError:
        pass
    return ok


# --------------------------------------------------------------------------


def crit_axiom_suite():
    start = time.perf_counter()
    failures = []
    for ring in (ZZ, QQ, IntegersMod(6)):
        for rank in (1, 2, 3):
            report = check_axioms(gamma_augmentation(spec_of(ring, rank)), SEED, samples=200, max_n=4)
            failures += [f"{ring}/rank{rank}/{a}" for a in report.failing()]
    elapsed = time.perf_counter() - start
    ok = not failures and elapsed <= 60
    return ok, f"9 configurations x 7 axioms x 200 samples, failures={failures or 0}, {elapsed:.1f}s (limit 60s)"


def crit_power_identity():
    bad = 0
    for i in range(100):
        rng = case_rng(SEED, "power", i)
        ring = rng.choice([ZZ, QQ, IntegersMod(6)])
        a = random_gamma(rng, spec_of(ring, rng.randint(1, 3)))
        for n in range(6):
            if g_pow(a, n) != gamma_n(n, a).scale(math.factorial(n)):
                bad += 1
    return bad == 0, f"x^n = n! gamma_n(x), 100 samples, n <= 5, mismatches={bad}"


def crit_oracle():
    mismatches = integrality = independent = 0
    for i in range(200):
        rng = case_rng(SEED, "oracle", i)
        spec = spec_of(ZZ, rng.randint(1, 3))
        a = random_gamma(rng, spec)
        n = rng.randint(0, 4)
        try:
            oracle = gamma_oracle(n, a)
        except NotIntegral:
            integrality += 1
            continue
        ours = gamma_n(n, a)
        if ours != oracle:
            mismatches += 1
        # second, test-local oracle on plain dicts
        ref = gamma_via_fractions(n, {k.exps: c for k, c in a.terms.items()}, spec.rank)
        if {k.exps: c for k, c in ours.terms.items()} != ref:
            independent += 1
    ok = mismatches == integrality == independent == 0
    return ok, (f"200 Z cases, rank <= 3, n <= 4: mismatches={mismatches}, "
                f"independent-oracle mismatches={independent}, integrality failures={integrality}")


def crit_rank_one_table():
    T = rank_one(ZZ)
    bad = [(m, n) for m in range(9) for n in range(9)
           if g_mul(t_power(T, m), t_power(T, n)) != t_power(T, m + n, pascal(m + n, n))]
    return not bad, f"T^(m) T^(n) = C(m+n,n) T^(m+n) for m,n <= 8 (Pascal oracle), bad={bad or 0}"


def crit_universal_property():
    bad_gamma = bad_inj = bad_lin = 0
    for i in range(100):
        rng = case_rng(SEED, "iota", i)
        ring = rng.choice([ZZ, QQ, IntegersMod(6)])
        spec = spec_of(ring, rng.randint(1, 3))
        x, y = random_vector(rng, spec), random_vector(rng, spec)
        n = rng.randint(0, 4)
        if gamma_n(n, grade_one_iota(x)) != dp_generator(n, x):
            bad_gamma += 1
        if grade_one_inverse(grade_one_iota(x)) != x or (grade_one_iota(x) == grade_one_iota(y)) != (x == y):
            bad_inj += 1
        r = Scalar._raw(ring, ring.random(rng))
        if grade_one_iota(x.scale(r) + y) != grade_one_iota(x).scale(r) + grade_one_iota(y):
            bad_lin += 1
    ok = bad_gamma == bad_inj == bad_lin == 0
    return ok, f"gamma_n(iota x) = x^[n] on 100 x, n <= 4: bad={bad_gamma}; injective bad={bad_inj}; linear bad={bad_lin}"


def crit_base_change():
    parts = []
    ok = True
    for tag in STANDARD_EXTENSIONS:
        ext = parse_extension(tag)
        report = verify_extension(ext, 2, SEED, samples=200, max_n=3)
        spec = spec_of(ext.base, 2)
        table = theta_table(ext, spec, 3)
        unique = theta_uniqueness(ext, spec, table, SEED)
        one = GammaElement.one(ext.top_spec(spec))
        undetected = 0
        for k in table:
            bad = dict(table)
            bad[k] = table[k] + one
            if theta_uniqueness(ext, spec, bad, SEED):
                undetected += 1
        fails = sum(report["failures"].values())
        ok &= fails == 0 and unique and undetected == 0
        parts.append(f"{tag}: fails={fails} unique={unique} undetected-mutants={undetected}/{len(table)}")
    return ok, "200 samples per extension; " + "; ".join(parts)


def crit_quotient():
    spec = spec_of(ZZ, 3)
    drop = "b3"
    bad = 0
    for d in range(5):
        for k in grade_basis(spec, d):
            img = quotient_by_basis_span([drop], GammaElement._make(spec, {k: 1}))
            if k[drop]:
                bad += not img.is_zero()
            else:
                bad += img != GammaElement.monomial(img.spec, k.as_dict())
    q = quotient_dp(gamma_augmentation(spec), [drop], seed=SEED)
    report = check_axioms(q, SEED, samples=100, max_n=4)
    ok = bad == 0 and report.ok
    return ok, f"rank 3 mod span(b3): monomials mishandled={bad}; quotient axioms failing={report.failing() or 0} (100 samples)"


def crit_law_isomorphism():
    M, N = spec_of(ZZ, 2), spec_of(ZZ, 2, "n")
    bad_rt = 0
    for i in range(100):
        rng = case_rng(SEED, "law-rt", i)
        f = random_law(rng, M, N)
        if PolyLaw(M, N, coeff_of(f, {x: M.basis_vector(x) for x in M.basis.labels})) != f:
            bad_rt += 1
    ZXY = Poly(ZZ, ("X", "Y"))
    generic = ModuleVector(extend_spec(M, ZXY), {"b1": ZXY.var("X"), "b2": ZXY.var("Y")})
    fwd = bwd = 0
    for i in range(50):
        rng = case_rng(SEED, "law-hom", i)
        d = rng.randint(0, 3)
        f = random_law(rng, M, N, degree=d)
        m = random_vector(rng, M)
        fwd += not (is_homogeneous(f, d) and scaling_test(f, d, m) and scaling_test(f, d, generic))
        g = f + random_law(rng, M, N, degree=rng.choice([e for e in range(5) if e != d]))
        for e in range(6):
            if scaling_test(g, e, generic) and not is_homogeneous(g, e):
                bwd += 1
            if is_homogeneous(g, e) and not scaling_test(g, e, generic):
                bwd += 1
    ok = bad_rt == fwd == bwd == 0
    return ok, f"coefficient round-trip bad={bad_rt}/100; support => scaling bad={fwd}/50; scaling => support bad={bwd}"


def crit_components():
    M, N = spec_of(ZZ, 2), spec_of(ZZ, 2, "n")
    bad = 0
    for i in range(100):
        rng = case_rng(SEED, "components", i)
        f = random_law(rng, M, N)
        bad += component_sum(f) != f
        bad += any(not is_homogeneous(c, d) for d, c in components(f).items())
        bad += any(not component(f, d).is_zero() for d in range(5, 8))
    return bad == 0, f"sum_d f_d = f and each f_d homogeneous, 100 laws, bad={bad}"


def crit_differentials():
    N = spec_of(ZZ, 2, "n")
    disagree = nonvanish = taylor = 0
    for i in range(100):
        rng = case_rng(SEED, "diff", i)
        M = spec_of(ZZ, rng.randint(1, 2))
        f = random_law(rng, M, N)
        for n in range(f.degree() + 3):
            s = divided_differential(n, f, "structural")
            if s != divided_differential(n, f, "extraction"):
                disagree += 1
            if n > f.degree() and not s.is_zero():
                nonvanish += 1
        if not taylor_sum_check(f, random_vector(rng, M), random_vector(rng, M)):
            taylor += 1
    ok = disagree == nonvanish == taylor == 0
    return ok, f"100 laws: path disagreements={disagree}, nonzero D^n for n > deg={nonvanish}, Taylor failures={taylor}"


def crit_factorization():
    M, N = spec_of(ZZ, 2), spec_of(ZZ, 2, "n")
    ZT = Poly(ZZ, ("t",))
    bad = nonunique = 0
    for i in range(100):
        rng = case_rng(SEED, "factor", i)
        d = rng.randint(0, 4)
        f = random_law(rng, M, N, degree=d)
        phi = factor_homogeneous(f, d)
        m_r = random_vector(rng, M)
        m_t = ModuleVector(extend_spec(M, ZT), {x: ZT.random(rng) for x in M.basis.labels})
        for m in (m_r, m_t):
            if eval_at(f, m) != apply_linear(phi, gamma_to_slice(dp_generator(d, m), d), N):
                bad += 1
        # any psi with f = psi o delta_d must send b^[k] to f's coefficient at k
        for k in grade_basis(M, d):
            basis_image = apply_linear(phi, gamma_to_slice(GammaElement._make(M, {k: 1}), d), N)
            if basis_image != f.coeffs.get(k, ModuleVector(N, {})):
                nonunique += 1
    ok = bad == nonunique == 0
    return ok, f"f = phi o delta_d on 100 laws over Z and Z[t]: bad={bad}; basis-determination bad={nonunique}"


def crit_mutations():
    caught = []
    missed = []
    for target in sorted(MUTATIONS):
        report = check_axioms(corrupt(gamma_augmentation(spec_of(ZZ, 2)), target), SEED, samples=200, max_n=4)
        # the corrupted axiom itself must be among the failures
        (caught if target in report.failing() else missed).append(target)
    ext = parse_extension("Z->Z[X]")
    spec = spec_of(ZZ, 2)
    table = theta_table(ext, spec, 3)
    k = sorted(table)[-1]
    bad = dict(table)
    bad[k] = table[k].scale(2)
    theta_caught = not theta_uniqueness(ext, spec, bad, SEED)
    ok = not missed and theta_caught
    return ok, f"axiom mutants caught {len(caught)}/7 (missed={missed or 0}); theta mutant caught={theta_caught}"


def crit_padic():
    bad = [(p, n) for p in (2, 3, 5, 7) for n in range(201) if padic_val_factorial(p, n) > n]
    return not bad, f"v_p(n!) <= n for n <= 200, p in {{2,3,5,7}}, violations={bad or 0}"


CRITERIA = [
    ("divided power axiom suite", crit_axiom_suite),
    ("x^n = n! gamma_n(x)", crit_power_identity),
    ("oracle equivalence", crit_oracle),
    ("rank-1 multiplication table", crit_rank_one_table),
    ("gamma_n(iota x) = x^[n], iota injective and linear", crit_universal_property),
    ("base change isomorphism", crit_base_change),
    ("quotient kernel", crit_quotient),
    ("polynomial-law isomorphism", crit_law_isomorphism),
    ("component decomposition", crit_components),
    ("divided differentials", crit_differentials),
    ("universal factorization", crit_factorization),
    ("mutation sensitivity", crit_mutations),
    ("p-adic valuation bound", crit_padic),
]


@pytest.mark.parametrize("name,check", CRITERIA, ids=[c[0] for c in CRITERIA])
def test_criterion(name, check):
    ok, detail = check()
    _record(name, ok, detail)
    assert ok, detail


def main() -> int:
    results = []
    for name, check in CRITERIA:
        ok, detail = check()
        results.append(_record(name, ok, detail))
    print(f"{sum(results)}/{len(results)} criteria passed")
    return 0 if all(results) else 1


if __name__ == "__main__":
    sys.exit(main())
