"""Drivers wiring the stages together: the group structure computation
(approximate class number, factor base, relations, rank, SNF, order check)
and the precomputation bundle consumed by discrete log runs.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import List, Optional, Tuple

from .curve import (
    ClassNumberBounds,
    CurveModel,
    DEFAULT_ENUM_CEILING,
    FactorBase,
    build_factor_base,
    class_number_bounds,
)
from .errors import OrderFailureError, RankFailureError
from .intlinalg import RelationMatrix, SNFResult, integer_rank, smith_normal_form
from .relations import ParameterPlan, Relation, collect_relations, plan_parameters


def derive_rng(seed: int, *labels) -> random.Random:
    """Deterministic substream from the run seed and a label path."""
    import hashlib

    material = repr((seed,) + tuple(labels)).encode()
    digest = hashlib.sha256(material).digest()
    return random.Random(int.from_bytes(digest[:16], "big"))


@dataclass
class GroupStructure:
    model: CurveModel
    fb: FactorBase
    plan: ParameterPlan
    bounds: ClassNumberBounds
    relations: List[Relation]
    matrix: RelationMatrix
    snf: SNFResult
    stats: dict

    @property
    def h(self) -> int:
        return self.snf.h

    def generators(self) -> List[Tuple[int, List[Tuple[int, int]]]]:
        """(order, combination) per cyclic factor: the divisor class of the
        j-th diagonal entry is the j-th column of T^{-1} over the factor
        base places (paper output convention, largest factor first)."""
        out = []
        tinv = self.snf.transform_left_inv
        r = self.snf.r
        for pos in range(r):
            order = self.snf.diag[pos]
            combo = [
                (i, tinv[i][pos]) for i in range(self.fb.t) if tinv[i][pos] != 0
            ]
            out.append((order, combo))
        return out


def group_structure(
    model: CurveModel,
    seed: int,
    overrides: Optional[dict] = None,
    lam: Optional[int] = None,
    ceiling: int = DEFAULT_ENUM_CEILING,
    relations_override: Optional[RelationMatrix] = None,
) -> GroupStructure:
    """Run the five group-structure steps; failures raise typed errors.

    lam=None uses the exact class number oracle (desk scale default); a
    truncation level exercises the approximate interface.  A pre-supplied
    relation matrix replaces sampling (replay and failure-path testing).
    """
    bounds = class_number_bounds(model, lam=lam, ceiling=ceiling)
    plan = plan_parameters(model, overrides)
    fb = build_factor_base(model, plan.B)
    plan = plan.finalized(fb, model)
    if relations_override is not None:
        relations: List[Relation] = []
        matrix = relations_override
        stats: dict = {"trials": 0, "hits": matrix.s, "replayed": True}
    else:
        rng = derive_rng(seed, "relations")
        relations, stats = collect_relations(model, fb, plan, rng)
        matrix = RelationMatrix.from_relations(fb.t, relations)
    if matrix.s < fb.t:
        stats["warning"] = f"s = {matrix.s} below t = {fb.t}"
    rank = integer_rank(matrix)
    if rank < fb.t:
        raise RankFailureError(
            f"relation matrix rank {rank} < t = {fb.t}: declare failure"
        )
    snf = smith_normal_form(matrix)
    if not bounds.admits(snf.h):
        if bounds.exact:
            detail = f"product of invariant factors {snf.h} != exact h = {bounds.h}"
        else:
            detail = (
                f"product of invariant factors {snf.h} outside "
                f"({bounds.h_minus}, {bounds.h_plus})"
            )
        raise OrderFailureError(detail)
    return GroupStructure(
        model=model,
        fb=fb,
        plan=plan,
        bounds=bounds,
        relations=relations,
        matrix=matrix,
        snf=snf,
        stats=stats,
    )
