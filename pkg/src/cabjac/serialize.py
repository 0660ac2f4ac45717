"""JSON schemas for every artifact that crosses a process boundary: curve
files, factor bases, relation dumps, SNF results, precomputation bundles,
class specifications and descent transcripts.

All canonical outputs are serialized with sorted keys and a trailing newline
so identical runs produce byte-identical files.  Big integers are decimal
strings.  Polynomials are little-endian coefficient arrays of residues.
"""

from __future__ import annotations

import json
from typing import List, Optional, Tuple

from .curve import (
    ClassNumberBounds,
    CurveModel,
    FactorBase,
    Place,
    build_factor_base,
    validate_curve,
)
from .errors import UsageError
from .fields import Field, FiniteField
from .ideals import IdealClass, JacobianGroup
from .intlinalg import RelationMatrix, SNFResult
from .pipeline import GroupStructure, derive_rng
from .poly import Poly
from .relations import FunctionPhi, ParameterPlan, Relation


def canonical_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


# --- curve files -------------------------------------------------------------


def field_from_descriptor(desc: dict) -> Field:
    p = int(desc["p"])
    k = int(desc.get("k", 1))
    modulus = desc.get("field_modulus")
    if modulus is not None:
        modulus = tuple(int(c) for c in modulus)
    return FiniteField(p, k, modulus)


def _coeff_to_int(field: Field, c) -> int:
    if isinstance(c, list):
        if field.k == 1:
            raise UsageError("coefficient vectors need an extension field")
        return field.encode(tuple(int(x) % field.char for x in c))
    return int(c)


def curve_from_dict(data: dict) -> CurveModel:
    field = field_from_descriptor(data)
    monomials = [
        (int(i), int(j), _coeff_to_int(field, c)) for i, j, c in data["monomials"]
    ]
    return validate_curve(field, int(data["n"]), int(data["d"]), monomials)


def curve_to_dict(model: CurveModel) -> dict:
    desc = model.field.descriptor()
    return {
        "p": desc["p"],
        "k": desc["k"],
        "field_modulus": desc["field_modulus"],
        "n": model.n,
        "d": model.d,
        "monomials": [[i, j, c] for i, j, c in model.monomials],
    }


def load_curve(path: str) -> CurveModel:
    with open(path) as f:
        return curve_from_dict(json.load(f))


# --- factor base -------------------------------------------------------------


def factor_base_rows(fb: FactorBase) -> List[str]:
    rows = []
    for place in fb.places:
        rows.append(
            json.dumps(
                {"u": list(place.u.c), "v": list(place.v.c), "deg": place.degree},
                sort_keys=True,
            )
        )
    return rows


# --- relations ---------------------------------------------------------------


def relation_to_dict(rel: Relation) -> dict:
    return {
        "a": list(rel.phi.a.c),
        "b": list(rel.phi.b.c),
        "exps": [[i, e] for i, e in rel.exponents],
    }


def relations_dump(relations: List[Relation]) -> str:
    return "\n".join(json.dumps(relation_to_dict(r), sort_keys=True) for r in relations) + "\n"


def relation_matrix_from_dump(text: str, t: int) -> RelationMatrix:
    """Replay interface: columns are taken as given (producer's integrity)."""
    columns = []
    sources = []
    for line in text.splitlines():
        line = line.strip()
        if not line:
            continue
        data = json.loads(line)
        columns.append({int(i): int(e) for i, e in data["exps"]})
        sources.append((tuple(data.get("a", ())), tuple(data.get("b", ()))))
    return RelationMatrix(t=t, columns=tuple(columns), sources=tuple(sources))


# --- SNF and precomputation ---------------------------------------------------


def _matrix_to_strings(m: List[List[int]]) -> List[List[str]]:
    return [[str(x) for x in row] for row in m]


def _matrix_from_strings(m) -> List[List[int]]:
    return [[int(x) for x in row] for row in m]


def snf_to_dict(snf: SNFResult) -> dict:
    return {
        "factors": [str(f) for f in snf.factors],
        "h": str(snf.h),
        "diag": [str(x) for x in snf.diag],
        "T": _matrix_to_strings(snf.transform_left),
        "Tinv": _matrix_to_strings(snf.transform_left_inv),
        "U": _matrix_to_strings(snf.transform_right),
    }


def snf_from_dict(data: dict) -> SNFResult:
    return SNFResult(
        factors=tuple(int(f) for f in data["factors"]),
        diag=tuple(int(x) for x in data["diag"]),
        transform_left=_matrix_from_strings(data["T"]),
        transform_left_inv=_matrix_from_strings(data["Tinv"]),
        transform_right=_matrix_from_strings(data["U"]),
        h=int(data["h"]),
    )


def bounds_to_dict(b: ClassNumberBounds) -> dict:
    return {
        "h_minus": str(b.h_minus),
        "h_plus": str(b.h_plus),
        "exact": b.exact,
        "h": str(b.h) if b.h is not None else None,
    }


def bounds_from_dict(data: dict) -> ClassNumberBounds:
    return ClassNumberBounds(
        h_minus=int(data["h_minus"]),
        h_plus=int(data["h_plus"]),
        exact=bool(data["exact"]),
        h=int(data["h"]) if data.get("h") is not None else None,
    )


def precomp_to_dict(gs: GroupStructure) -> dict:
    return {
        "curve": curve_to_dict(gs.model),
        "B": gs.fb.bound,
        "plan": {
            "B": gs.plan.B,
            "m": gs.plan.m,
            "s": gs.plan.s,
            "rho": gs.plan.rho,
            "sigma": gs.plan.sigma,
        },
        "snf": snf_to_dict(gs.snf),
        "bounds": bounds_to_dict(gs.bounds),
        "h": str(gs.h),
    }


def precomp_from_dict(data: dict) -> GroupStructure:
    model = curve_from_dict(data["curve"])
    fb = build_factor_base(model, int(data["B"]))
    snf = snf_from_dict(data["snf"])
    if len(snf.transform_left) != fb.t:
        raise UsageError("precomputation does not match the rebuilt factor base")
    plan = ParameterPlan(
        n0=0.0,
        d0=0.0,
        big_m=0.0,
        rho=float(data["plan"].get("rho", 0.0)),
        sigma=float(data["plan"].get("sigma", 0.0)),
        tau=0.0,
        B=int(data["plan"]["B"]),
        m=int(data["plan"]["m"]),
        s=data["plan"]["s"],
        overridden=("B", "m", "s"),
    )
    return GroupStructure(
        model=model,
        fb=fb,
        plan=plan,
        bounds=bounds_from_dict(data["bounds"]),
        relations=[],
        matrix=RelationMatrix(t=fb.t, columns=()),
        snf=snf,
        stats={"loaded": True},
    )


# --- class specifications ------------------------------------------------------


def resolve_class_spec(
    group: JacobianGroup,
    fb: FactorBase,
    spec,
    seed: int = 0,
    label: str = "class",
) -> IdealClass:
    """Build a divisor class from a JSON spec.

    Kinds: identity | fb-combo {exps} | place {u, v} | random {size?} |
    scalar {base, x}.
    """
    if isinstance(spec, str):
        spec = json.loads(spec)
    kind = spec.get("kind")
    if kind == "identity":
        return group.identity()
    if kind == "fb-combo":
        acc = group.identity()
        for idx, e in spec["exps"]:
            acc = group.add(
                acc, group.scalar_mul(group.class_from_place(fb.places[int(idx)]), int(e))
            )
        return acc
    if kind == "place":
        F = group.model.field
        u = Poly(F, [int(c) for c in spec["u"]])
        v = Poly(F, [int(c) for c in spec["v"]])
        return group.class_from_place(Place.affine(u, v))
    if kind == "random":
        rng = derive_rng(seed, "class-spec", label, spec.get("tag", 0))
        size = int(spec.get("size", 3))
        acc = group.identity()
        for _ in range(size):
            idx = rng.randrange(fb.t)
            e = rng.choice((1, 2))
            acc = group.add(
                acc, group.scalar_mul(group.class_from_place(fb.places[idx]), e)
            )
        return acc
    if kind == "scalar":
        base = resolve_class_spec(group, fb, spec["base"], seed, label + "-base")
        return group.scalar_mul(base, int(spec["x"]))
    raise UsageError(f"unknown class spec kind: {kind!r}")
