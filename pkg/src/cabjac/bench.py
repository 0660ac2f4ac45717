"""Empirical harness for the smoothness heuristics.

Two estimators per (m, B) cell: the smoothness frequency of div(phi) for
random functions phi = a + bY (what relation collection actually sees), and
the smoothness frequency of uniformly random monic polynomials of the
matched degree nu = n*m + d (the stand-in for a random effective divisor,
exact for the places of the X-line).  Both are compared against the crude
lower-bound prediction exp(-u log u) with u = nu/mu and the correction term
dropped.
"""

from __future__ import annotations

import math
from typing import List, Optional

from .curve import CurveModel
from .pipeline import derive_rng
from .poly import is_smooth, random_monic
from .relations import PhiSampler, norm_of_phi


def prediction(u: float) -> float:
    """exp(-u log u), clamped to 1 for u <= 1 (everything is smooth)."""
    if u <= 1.0:
        return 1.0
    return math.exp(-u * math.log(u))


def bench_cell(model: CurveModel, m: int, bound: int, trials: int, seed: int) -> dict:
    nu = model.n * m + model.d
    u = nu / bound
    rng_phi = derive_rng(seed, "bench", "phi", m, bound)
    rng_poly = derive_rng(seed, "bench", "poly", m, bound)
    sampler = PhiSampler(model, m, rng_phi, dedup=False)
    phi_hits = 0
    for _ in range(trials):
        phi = sampler.sample_raw()
        if is_smooth(norm_of_phi(model, phi), bound):
            phi_hits += 1
    poly_hits = 0
    F = model.field
    for _ in range(trials):
        if is_smooth(random_monic(F, nu, rng_poly), bound):
            poly_hits += 1
    return {
        "m": m,
        "mu": bound,
        "nu": nu,
        "u": u,
        "trials": trials,
        "phi_smooth": phi_hits,
        "phi_probability": phi_hits / trials,
        "poly_smooth": poly_hits,
        "poly_probability": poly_hits / trials,
        "prediction": prediction(u),
    }


def smoothness_report(
    model: CurveModel,
    m_list: List[int],
    bound_list: List[int],
    trials: int,
    seed: int,
) -> dict:
    """Grid of cells ordered by (mu, m); cells also report the ratio of each
    estimator to the prediction for quick reading."""
    cells = []
    for bound in bound_list:
        for m in m_list:
            cell = bench_cell(model, m, bound, trials, seed)
            pred = cell["prediction"]
            cell["phi_over_prediction"] = (
                cell["phi_probability"] / pred if pred > 0 else None
            )
            cell["poly_over_prediction"] = (
                cell["poly_probability"] / pred if pred > 0 else None
            )
            cells.append(cell)
    return {
        "curve": {"n": model.n, "d": model.d, "genus": model.genus,
                  "q": model.field.order},
        "trials_per_cell": trials,
        "cells": cells,
    }
