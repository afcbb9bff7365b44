import json
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from gamma_forge.errors import MalformedInput
from gamma_forge.jsonio import (
    dumps,
    gamma_from_json,
    gamma_to_json,
    loads,
    polylaw_from_json,
    polylaw_to_json,
    scalar_from_json,
    scalar_to_json,
    vector_from_json,
    vector_to_json,
)
from gamma_forge.polylaw import random_law
from gamma_forge.sampling import random_gamma, random_vector, spec_of
from gamma_forge.scalars import QQ, ZZ, IntegersMod, Poly

RINGS = [ZZ, QQ, IntegersMod(6), Poly(ZZ, ("X", "Y")), Poly(QQ, ("X",)), Poly(IntegersMod(4), ("T",))]


def roundtrip(obj):
    return loads(dumps(obj))


def test_scalar_formats():
    assert scalar_to_json(ZZ, 12345678901234567890123) == "12345678901234567890123"
    assert scalar_to_json(QQ, Fraction(-3, 4)) == "-3/4"
    assert scalar_to_json(QQ, Fraction(5)) == "5/1"
    assert scalar_to_json(IntegersMod(6), 4) == {"mod": 6, "val": 4}
    P = Poly(ZZ, ("X",))
    assert scalar_to_json(P, P.add(P.var("X"), P.const(2))) == [
        {"exps": {}, "coeff": "2"}, {"exps": {"X": 1}, "coeff": "1"}]


def test_gamma_terms_sorted():
    spec = spec_of(ZZ, 2)
    doc = gamma_to_json(random_gamma(random.Random(1), spec, augmented=False))
    keys = [(sum(t["exps"].values()), tuple(t["exps"].get(x, 0) for x in spec.basis.labels)) for t in doc["terms"]]
    assert keys == sorted(keys)


@pytest.mark.parametrize("ring", RINGS, ids=str)
def test_round_trip_500(ring):
    rng = random.Random(f"json:{ring}")
    spec = spec_of(ring, 3)
    target = spec_of(ring, 2, "n")
    for _ in range(500):
        v = ring.random(rng)
        assert scalar_from_json(ring, roundtrip(scalar_to_json(ring, v))) == v
        a = random_gamma(rng, spec, augmented=False)
        assert gamma_from_json(roundtrip(gamma_to_json(a))) == a
        x = random_vector(rng, spec)
        assert vector_from_json(roundtrip(vector_to_json(x))) == x
    for _ in range(100):
        f = random_law(rng, spec, target)
        assert polylaw_from_json(roundtrip(polylaw_to_json(f))) == f


@settings(max_examples=300, deadline=None)
@given(st.fractions())
def test_rational_round_trip(q):
    assert scalar_from_json(QQ, json.loads(json.dumps(scalar_to_json(QQ, q)))) == q


@pytest.mark.parametrize("bad", ["not json", "{", "[1,"])
def test_loads_rejects(bad):
    with pytest.raises(MalformedInput):
        loads(bad)


@pytest.mark.parametrize("doc", [
    {"ring": "Z", "basis": ["b1"], "terms": [{"exps": {"b1": -1}, "coeff": "1"}]},
    {"ring": "Z", "basis": ["b1"], "terms": [{"exps": {"b1": 1}, "coeff": "x"}]},
    {"ring": "Z", "basis": ["b1"]},
    {"ring": 5, "basis": ["b1"], "terms": []},
    {"ring": "Z/6", "basis": ["b1"], "terms": [{"exps": {"b1": 1}, "coeff": {"mod": 4, "val": 1}}]},
])
def test_gamma_from_json_rejects(doc):
    with pytest.raises(Exception) as info:
        gamma_from_json(doc)
    assert getattr(info.value, "kind", None) is not None
