import math
import random

import pytest
from hypothesis import given, strategies as st

from gamma_forge.errors import BasisMismatch, EmptyIndex
from gamma_forge.multiindex import (
    BasisLabels,
    MultiIndex,
    count_weak_compositions,
    dp_coeff_multi,
    mi_add,
    mi_binomial_product,
    mi_scale,
    weak_compositions,
)
from gamma_forge.scalars import uniform_dp_coeff

from oracles import brute_weak_compositions, gamma_via_fractions, pascal

B = BasisLabels(("b1", "b2", "b3"))
exps = st.tuples(*[st.integers(0, 5)] * 3)


def mi(**kw):
    return MultiIndex(B, kw)


def test_examples():
    assert mi_add(mi(b1=1), mi(b1=1)) == mi(b1=2)
    assert mi_add(mi(), mi(b2=3)) == mi(b2=3)
    assert mi_add(mi(b1=2, b2=1), mi(b2=2)) == mi(b1=2, b2=3)
    assert mi_binomial_product(mi(b1=1), mi(b1=1)) == 2
    assert mi_binomial_product(mi(b1=2), mi(b1=3)) == pascal(5, 2)
    assert mi_binomial_product(mi(b1=1), mi(b2=1)) == 1
    assert mi_scale(2, mi(b1=2, b2=1)) == mi(b1=4, b2=2)
    assert mi_scale(0, mi(b1=5)) == mi()
    assert mi(b1=2, b3=1).as_dict() == {"b1": 2, "b3": 1}
    assert mi(b1=2, b3=1).degree == 3


def test_basis_mismatch():
    other = BasisLabels(("c1",))
    with pytest.raises(BasisMismatch):
        mi_add(mi(b1=1), MultiIndex(other, {"c1": 1}))
    with pytest.raises(BasisMismatch):
        mi_binomial_product(mi(b1=1), MultiIndex(other, {"c1": 1}))


@given(exps, exps, exps)
def test_add_monoid(a, b, c):
    a, b, c = (MultiIndex(B, x) for x in (a, b, c))
    assert mi_add(a, b) == mi_add(b, a)
    assert mi_add(mi_add(a, b), c) == mi_add(a, mi_add(b, c))
    assert mi_add(a, mi()) == a


@given(exps, exps)
def test_binomial_product_symmetry(a, b):
    a, b = MultiIndex(B, a), MultiIndex(B, b)
    assert mi_binomial_product(a, b) == mi_binomial_product(b, a)
    assert mi_binomial_product(a, mi()) == 1
    expected = 1
    for x, y in zip(a.exps, b.exps):
        expected *= pascal(x + y, x)
    assert mi_binomial_product(a, b) == expected


def test_weak_compositions():
    assert [tuple(c.values()) for c in weak_compositions(2, ["s", "t"])] == [(2, 0), (1, 1), (0, 2)]
    assert list(weak_compositions(0, ["s", "t"])) == [{"s": 0, "t": 0}]
    assert list(weak_compositions(3, ["u"])) == [{"u": 3}]
    for n in range(7):
        for s in range(1, 7):
            got = [tuple(c.values()) for c in weak_compositions(n, list(range(s)))]
            assert len(got) == len(set(got)) == pascal(n + s - 1, s - 1) == count_weak_compositions(n, s)
            assert sorted(got, reverse=True) == got
            assert set(got) == set(brute_weak_compositions(n, s))


def test_dp_coeff_multi_examples():
    assert dp_coeff_multi(2, mi(b1=2)) == 3
    assert dp_coeff_multi(1, mi(b1=3, b2=1)) == 1
    # (X1 X2)^2 / 2 = 2 * X1^2 X2^2 / (2! 2!)
    assert dp_coeff_multi(2, mi(b1=1, b2=1)) == 2
    assert gamma_via_fractions(2, {(1, 1, 0): 1}, 3) == {(2, 2, 0): 2}
    with pytest.raises(EmptyIndex):
        dp_coeff_multi(2, mi())


def test_dp_coeff_multi_factorial_identity():
    rng = random.Random(5)
    for _ in range(300):
        vec = [0, 0, 0]
        for _ in range(rng.randint(1, 4)):
            vec[rng.randrange(3)] += 1
        k = MultiIndex(B, tuple(vec))
        m = rng.randint(0, 4)
        lhs = dp_coeff_multi(m, k) * math.factorial(m)
        rhs = 1
        for x in vec:
            lhs *= math.factorial(x) ** m
            rhs *= math.factorial(m * x)
        assert lhs == rhs


def test_dp_coeff_multi_single_variable():
    for m in range(6):
        for n in range(1, 6):
            assert dp_coeff_multi(m, mi(b2=n)) == uniform_dp_coeff(m, n)


def test_dp_coeff_multi_against_fraction_oracle():
    # gamma_m(b^[k]) computed through Q[X] must be dp_coeff_multi(m, k) b^[mk]
    rng = random.Random(6)
    for _ in range(100):
        vec = tuple(rng.randint(0, 3) for _ in range(3))
        if sum(vec) == 0:
            continue
        m = rng.randint(0, 4)
        got = gamma_via_fractions(m, {vec: 1}, 3)
        target = tuple(m * x for x in vec)
        assert got == {target: dp_coeff_multi(m, MultiIndex(B, vec))}
