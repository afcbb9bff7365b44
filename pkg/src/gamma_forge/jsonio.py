"""Canonical JSON encodings.

Scalars: integers as decimal strings, rationals as ``"p/q"``, residues as
``{"mod": n, "val": v}``, polynomials as lists of ``{"exps": {...}, "coeff": ...}``.
Rings are tagged by strings such as ``"Z"``, ``"Q"``, ``"Z/6"``, ``"Z[X,Y]"``.
"""
from __future__ import annotations

import json
from fractions import Fraction

from .errors import GammaForgeError, MalformedInput
from .gamma import FreeModuleSpec, GammaElement, ModuleVector
from .multiindex import BasisLabels, MultiIndex
from .scalars import Integers, IntegersMod, Poly, Rationals, Ring, Scalar, parse_ring


def ring_to_json(ring: Ring) -> str:
    return str(ring)


def ring_from_json(obj) -> Ring:
    if not isinstance(obj, str):
        raise MalformedInput(f"ring must be a string tag, got {obj!r}")
    return parse_ring(obj)


def scalar_to_json(ring: Ring, value):
    if isinstance(ring, Integers):
        return str(value)
    if isinstance(ring, Rationals):
        return f"{value.numerator}/{value.denominator}"
    if isinstance(ring, IntegersMod):
        return {"mod": ring.n, "val": value}
    if isinstance(ring, Poly):
        return [
            {"exps": ring.exps_to_dict(e), "coeff": scalar_to_json(ring.base, c)}
            for e, c in value
        ]
    raise MalformedInput(f"unknown ring {ring!r}")


def scalar_from_json(ring: Ring, obj):
    try:
        if isinstance(ring, Integers):
            if isinstance(obj, bool):
                raise ValueError
            return int(obj) if isinstance(obj, (int, str)) else _bad(obj)
        if isinstance(ring, Rationals):
            if isinstance(obj, bool):
                raise ValueError
            if isinstance(obj, int):
                return Fraction(obj)
            if isinstance(obj, str):
                return Fraction(obj.strip())
            _bad(obj)
        if isinstance(ring, IntegersMod):
            if isinstance(obj, dict):
                if obj.get("mod") != ring.n:
                    raise MalformedInput(f"residue modulo {obj.get('mod')} in {ring}")
                return ring.normalize(int(obj["val"]))
            return ring.normalize(int(obj))
        if isinstance(ring, Poly):
            if not isinstance(obj, list):
                return ring.const(scalar_from_json(ring.base, obj))
            terms = [(ring.exps_from_dict(t["exps"]), scalar_from_json(ring.base, t["coeff"])) for t in obj]
            return ring.normalize(terms)
    except GammaForgeError:
        raise
    except (ValueError, TypeError, KeyError, ZeroDivisionError) as exc:
        raise MalformedInput(f"cannot read {obj!r} as an element of {ring}: {exc}") from None
    raise MalformedInput(f"unknown ring {ring!r}")


def _bad(obj):
    raise MalformedInput(f"bad scalar {obj!r}")


def spec_to_json(spec: FreeModuleSpec) -> dict:
    return {"ring": ring_to_json(spec.ring), "basis": list(spec.basis.labels)}


def spec_from_json(obj) -> FreeModuleSpec:
    try:
        return FreeModuleSpec(ring_from_json(obj["ring"]), BasisLabels(tuple(obj["basis"])))
    except (KeyError, TypeError) as exc:
        raise MalformedInput(f"bad module spec {obj!r}: {exc}") from None


def multiindex_to_json(k: MultiIndex) -> dict:
    return {"exps": k.as_dict()}


def multiindex_from_json(basis: BasisLabels, obj) -> MultiIndex:
    try:
        exps = obj["exps"]
        if not isinstance(exps, dict) or not all(isinstance(v, int) and v >= 0 for v in exps.values()):
            raise TypeError("exps must map labels to natural numbers")
        return MultiIndex(basis, exps)
    except GammaForgeError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise MalformedInput(f"bad multi-index {obj!r}: {exc}") from None


def coords_to_json(spec: FreeModuleSpec, coords: dict) -> dict:
    return {x: scalar_to_json(spec.ring, coords[x]) for x in spec.basis.labels if x in coords}


def vector_to_json(v: ModuleVector) -> dict:
    return {**spec_to_json(v.spec), "coords": coords_to_json(v.spec, v.coords)}


def coords_from_json(spec: FreeModuleSpec, obj) -> dict:
    if not isinstance(obj, dict):
        raise MalformedInput(f"coordinates must be an object, got {obj!r}")
    return {x: scalar_from_json(spec.ring, c) for x, c in obj.items()}


def vector_from_json(obj, spec: FreeModuleSpec | None = None) -> ModuleVector:
    try:
        spec = spec or spec_from_json(obj)
        return ModuleVector(spec, coords_from_json(spec, obj["coords"]))
    except KeyError as exc:
        raise MalformedInput(f"bad vector {obj!r}: missing {exc}") from None


def gamma_to_json(a: GammaElement) -> dict:
    return {
        **spec_to_json(a.spec),
        "terms": [
            {"exps": k.as_dict(), "coeff": scalar_to_json(a.spec.ring, c)}
            for k, c in a.sorted_terms()
        ],
    }


def gamma_from_json(obj, spec: FreeModuleSpec | None = None) -> GammaElement:
    try:
        spec = spec or spec_from_json(obj)
        terms = {}
        for t in obj["terms"]:
            k = multiindex_from_json(spec.basis, t)
            c = scalar_from_json(spec.ring, t["coeff"])
            terms[k] = spec.ring.add(terms[k], c) if k in terms else c
        return GammaElement(spec, terms)
    except (KeyError, TypeError) as exc:
        raise MalformedInput(f"bad divided power element: {exc}") from None


def polylaw_to_json(f) -> dict:
    return {
        "source": spec_to_json(f.source),
        "target": spec_to_json(f.target),
        "coeffs": [
            {"exps": k.as_dict(), "vector": coords_to_json(f.target, v.coords)}
            for k, v in f.sorted_coeffs()
        ],
    }


def polylaw_from_json(obj):
    from .polylaw import PolyLaw

    try:
        source = spec_from_json(obj["source"])
        target = spec_from_json(obj["target"])
        coeffs = {}
        for t in obj["coeffs"]:
            k = multiindex_from_json(source.basis, t)
            v = ModuleVector(target, coords_from_json(target, t["vector"]))
            coeffs[k] = coeffs[k] + v if k in coeffs else v
        return PolyLaw(source, target, coeffs)
    except (KeyError, TypeError) as exc:
        raise MalformedInput(f"bad polynomial law: {exc}") from None


def to_json(obj):
    """Best-effort canonical encoding of library values (used for reports)."""
    from .polylaw import PolyLaw

    if isinstance(obj, GammaElement):
        return gamma_to_json(obj)
    if isinstance(obj, ModuleVector):
        return vector_to_json(obj)
    if isinstance(obj, Scalar):
        return {"ring": ring_to_json(obj.ring), "value": scalar_to_json(obj.ring, obj.value)}
    if isinstance(obj, MultiIndex):
        return multiindex_to_json(obj)
    if isinstance(obj, PolyLaw):
        return polylaw_to_json(obj)
    if isinstance(obj, FreeModuleSpec):
        return spec_to_json(obj)
    if isinstance(obj, Ring):
        return ring_to_json(obj)
    if isinstance(obj, bool) or obj is None or isinstance(obj, str):
        return obj
    if isinstance(obj, int):
        return obj
    if isinstance(obj, Fraction):
        return f"{obj.numerator}/{obj.denominator}"
    if isinstance(obj, dict):
        return {str(k): to_json(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_json(v) for v in obj]
    if hasattr(obj, "to_json"):
        return obj.to_json()
    return repr(obj)


def dumps(doc, pretty: bool = False) -> str:
    if pretty:
        return json.dumps(doc, indent=2, ensure_ascii=False)
    return json.dumps(doc, separators=(",", ":"), ensure_ascii=False)


def loads(text: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise MalformedInput(f"invalid JSON: {exc}") from None
