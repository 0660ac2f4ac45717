"""Discrete logarithms by special-Q descent.

Both input classes are first smoothed Hafner-McCurley style (random factor
base combinations added until the reduced representative decomposes into
small places).  Every place still above the factor base bound is then
rewritten through functions in its lattice

    L_Q = { lambda(X) u(X) + mu(X) (Y - v(X)) }

whose divisors contain Q by construction, descending one degree bound at a
time until everything lives in the factor base.  The final logarithm is
solved in the product of cyclic groups from the Smith normal form and
verified against the ideal arithmetic oracle before being returned.

Only witnesses containing Q with multiplicity exactly one are accepted, so
the tree bookkeeping stays integral (no division in the class group).
"""

from __future__ import annotations

import itertools
import math
import random
import time
from dataclasses import dataclass, field as dc_field
from typing import Dict, List, Optional, Sequence, Tuple

from .curve import CurveModel, Divisor, FactorBase, Place
from .errors import BudgetError, IntegrityError, UsageError
from .ideals import IdealClass, JacobianGroup
from .intlinalg import coordinate_order, group_coordinates, solve_cyclic_dlog
from .pipeline import GroupStructure, derive_rng
from .poly import Poly, inverse_mod, is_smooth, lift_root, poly_factor, poly_gcd
from .relations import norm_of_phi, FunctionPhi


@dataclass(frozen=True)
class DescentSchedule:
    """Strictly decreasing per-level degree bounds; the first entry is the
    smoothing bound, the last equals the factor base bound."""

    epsilon: float
    nu: float
    bounds: Tuple[int, ...]
    warnings: Tuple[str, ...] = ()

    def __post_init__(self):
        if any(a <= b for a, b in zip(self.bounds, self.bounds[1:])):
            raise UsageError("schedule bounds must be strictly decreasing")

    @property
    def depth(self) -> int:
        return len(self.bounds)

    def target_for(self, degree: int) -> int:
        """Largest bound strictly below the degree (the next level down)."""
        for b in self.bounds:
            if b < degree:
                return b
        return self.bounds[-1]

    @classmethod
    def explicit(cls, bounds: Sequence[int], epsilon: float = 0.1, nu: float = 1.0):
        return cls(epsilon=epsilon, nu=nu, bounds=tuple(bounds))

    @classmethod
    def default_for(
        cls,
        model: CurveModel,
        fb: FactorBase,
        epsilon: float = 0.1,
        nu: float = 1.0,
        n0: Optional[float] = None,
        rho: Optional[float] = None,
    ) -> "DescentSchedule":
        """Level bounds from the c_k recursion, clamped to a usable integer
        ladder at desk scale.

        The asymptotic schedule sets c_0 = (1/3 + eps)/nu and
        c_{k+1} = c_k n0 (1/3 + eps)/nu, each level bounding degrees by
        log_q L(2/3 - (k+1) eps, c_k).  For the small genera this package
        runs on, those values collapse below the factor base bound after one
        level, so they are clamped into the strictly decreasing integer
        ladder genus, genus-1, ..., B; the formulas remain visible in the
        reported c_k values.
        """
        g = model.genus
        q = model.field.order
        B = fb.bound
        big_m = math.log(g * math.log(q)) / math.log(q)
        if n0 is None:
            n0 = model.n / (g ** (1.0 / 3.0) * big_m ** (-1.0 / 3.0))
        warnings: List[str] = []
        c = (1.0 / 3.0 + epsilon) / nu
        raw: List[int] = []
        k = 0
        while True:
            alpha = 2.0 / 3.0 - (k + 1) * epsilon
            if alpha <= 1.0 / 3.0 + epsilon:
                break
            bound = c * g**alpha * big_m ** (1.0 - alpha)
            raw.append(max(B, int(math.floor(bound))))
            c = c * n0 * (1.0 / 3.0 + epsilon) / nu
            k += 1
            if k > 60:
                break
        if rho is not None and not rho > (1.0 / 3.0 + epsilon) * n0 / 2.0:
            warnings.append(
                "asymptotic precondition rho > (1/3+eps) n0/2 is not met at this "
                f"size ({rho:.3f} <= {(1.0/3.0+epsilon)*n0/2.0:.3f}); integer "
                "degree thresholds are used regardless"
            )
        top = max(B + 1, min(g, max(raw) if raw else g))
        ladder = list(range(top, B - 1, -1))
        return cls(
            epsilon=epsilon, nu=nu, bounds=tuple(ladder), warnings=tuple(warnings)
        )


@dataclass
class DescentNode:
    place: Place
    witness: Optional[FunctionPhi]  # None for a factor base leaf
    children: Tuple[Tuple[Place, int], ...]
    level: int

    def verify(self, model: CurveModel) -> bool:
        """Recheck: div(witness) = Q + children exactly."""
        if self.witness is None:
            return True
        dec = decompose_function(model, self.witness.a, self.witness.b)
        if dec is None:
            return False
        want = {self.place: 1}
        for p, e in self.children:
            want[p] = want.get(p, 0) + e
        return dec == want


@dataclass
class SearchOptions:
    hm_budget: int = 400
    hm_subset_scale: int = 1  # subset size = min(t, scale * genus) draws
    node_candidate_budget: int = 200000
    delta_max: int = 4
    max_nodes: int = 20000


def decompose_function(
    model: CurveModel,
    a: Poly,
    b: Poly,
    bound: Optional[int] = None,
    exempt: Optional[Poly] = None,
) -> Optional[Dict[Place, int]]:
    """Full place decomposition of div(a + bY), inertia degree one only.

    None when a place of higher inertia degree or a ramified place carries
    valuation, or (with a bound) when a non-exempt factor exceeds it.  The
    b = 0 case demands totally split factors.  On success the degree sum
    matches the norm degree exactly; a mismatch raises, never passes.
    """
    F = model.field
    cy = model.curve_ypoly()
    out: Dict[Place, int] = {}
    if b.is_zero():
        if a.is_zero():
            raise UsageError("zero function has no divisor")
        degsum = 0
        for w, ew in poly_factor(a)[1]:
            if bound is not None and w.degree > bound and (
                exempt is None or w.c != exempt.c
            ):
                return None
            from .ideals import _curve_roots_mod

            roots = _curve_roots_mod(model, w)
            if len(roots) != model.n or any(m != 1 for _, m in roots):
                return None  # not totally split: higher inertia or ramified
            for v, _ in roots:
                out[Place.affine(w, v)] = ew
                degsum += ew * w.degree
        if degsum != model.n * a.degree:
            raise IntegrityError("split divisor degree mismatch")
        return out
    phi = FunctionPhi(a, b)
    norm = norm_of_phi(model, phi)
    if norm.degree == 0:
        return {}
    degsum = 0
    for u, eu in poly_factor(norm)[1]:
        if bound is not None and u.degree > bound and (
            exempt is None or u.c != exempt.c
        ):
            return None
        bmod = b % u
        if bmod.is_zero():
            return None  # gcd(a, b) != 1 style degeneracy: reject candidate
        v0 = (-a) * inverse_mod(bmod, u) % u
        roots = dict()
        from .ideals import _curve_roots_mod

        for v, mult in _curve_roots_mod(model, u):
            roots[v.c] = mult
        mult = roots.get(v0.c)
        if mult is None:
            raise IntegrityError("norm factor without matching curve root")
        if mult != 1:
            return None  # ramified place
        vlift = lift_root(cy, u, v0, eu + 1)
        mod = u
        for _ in range(eu):
            mod = mod * u
        z = (a + b * vlift) % mod
        val = 0
        while val <= eu:
            q, r = divmod(z, u)
            if not r.is_zero() or z.is_zero():
                break
            z = q
            val += 1
        if val == 0 or val > eu:
            return None  # valuation absorbed elsewhere: higher inertia present
        place = Place.affine(u, v0)
        out[place] = out.get(place, 0) + val
        degsum += val * u.degree
    if degsum != norm.degree:
        return None  # inertia degree >= 2 places carry the rest
    return out


def hm_smooth(
    group: JacobianGroup,
    cls: IdealClass,
    bound: int,
    fb: FactorBase,
    rng: random.Random,
    options: SearchOptions = SearchOptions(),
) -> Tuple[List[Tuple[Place, int]], Dict[int, int], dict]:
    """Randomize with factor base combinations until the reduced
    representative splits into inertia-one places of degree <= bound.

    Returns (decomposition, randomizer exponents by factor base index,
    statistics).  The zero randomizer is tried first, so already smooth
    classes cost one reduction.
    """
    t = fb.t
    genus = group.model.genus
    subset = min(t, max(1, options.hm_subset_scale * genus))
    fb_classes: Dict[int, IdealClass] = {}

    def fb_class(idx: int) -> IdealClass:
        if idx not in fb_classes:
            fb_classes[idx] = group.class_from_place(fb.places[idx])
        return fb_classes[idx]

    stats = {"trials": 0}
    for trial in range(options.hm_budget):
        stats["trials"] += 1
        randomizer: Dict[int, int] = {}
        if trial > 0:
            for idx in rng.sample(range(t), subset):
                m = rng.choice((-1, 1))
                randomizer[idx] = m
        shifted = cls
        for idx, m in randomizer.items():
            other = fb_class(idx)
            shifted = group.add(shifted, other if m > 0 else group.neg(other))
        dec = group.decompose_ideal(shifted.matrix)
        if dec is None:
            continue
        if any(p.degree > bound for p in dec):
            continue
        out = sorted(dec.items(), key=lambda pe: pe[0].key())
        return out, randomizer, stats
    raise BudgetError(
        f"smoothing budget of {options.hm_budget} trials exhausted", stats=stats
    )


def _lattice_candidates(field, delta: int, rng: random.Random):
    """(lambda, mu) pairs in shells of increasing max degree, shuffled
    within each shell for fairness, deterministically under the rng."""
    q = field.order
    for shell in range(delta + 1):
        # max(deg lambda, deg mu) == shell
        lower = [
            Poly(field, tail)
            for size in range(shell)
            for tail in itertools.product(range(q), repeat=size + 1)
        ] + [Poly.zero(field)]
        exact = [
            Poly(field, tail + (lead,))
            for tail in itertools.product(range(q), repeat=shell)
            for lead in range(1, q)
        ]
        pairs = (
            [(l, m) for l in exact for m in exact]
            + [(l, m) for l in exact for m in lower]
            + [(l, m) for l in lower for m in exact]
        )
        rng.shuffle(pairs)
        yield from pairs


def descent_step(
    model: CurveModel,
    fb: FactorBase,
    place: Place,
    target: int,
    rng: random.Random,
    options: SearchOptions = SearchOptions(),
    level: int = 0,
) -> DescentNode:
    """One special-Q step: find phi in the lattice of Q whose divisor is
    Q (multiplicity one) plus places of degree <= target."""
    if fb.place_index(place) is not None:
        return DescentNode(place=place, witness=None, children=(), level=level)
    if place.kind != "affine":
        raise UsageError("can only descend affine places")
    if target < fb.bound:
        raise UsageError("target below the factor base bound")
    u, v = place.u, place.v
    tried = 0
    stats_rejects = 0
    for lam, mu in _lattice_candidates(model.field, options.delta_max, rng):
        if lam.is_zero() and mu.is_zero():
            continue
        tried += 1
        if tried > options.node_candidate_budget:
            break
        a = lam * u - mu * v
        b = mu
        if a.is_zero() and b.is_zero():
            continue
        if not b.is_zero() and not poly_gcd(a, b).is_one():
            continue
        # cheap pre-test: strip the exempt factor, then test smoothness
        if not b.is_zero():
            norm = norm_of_phi(model, FunctionPhi(a, b))
            rest, ucount = norm, 0
            while rest.degree > 0:
                qq, rr = divmod(rest, u)
                if not rr.is_zero():
                    break
                rest = qq
                ucount += 1
            if ucount == 0:
                raise IntegrityError("lattice function norm lost the Q factor")
            if rest.degree > 0 and not is_smooth(rest, target):
                stats_rejects += 1
                continue
        dec = decompose_function(model, a, b, bound=target, exempt=u)
        if dec is None:
            stats_rejects += 1
            continue
        e_q = dec.get(place, 0)
        if e_q == 0:
            raise IntegrityError("lattice function missing its special place")
        if e_q != 1:
            stats_rejects += 1
            continue
        children = tuple(
            sorted(
                ((p, e) for p, e in dec.items() if p != place),
                key=lambda pe: pe[0].key(),
            )
        )
        if any(p.degree > target for p, _ in children):
            stats_rejects += 1
            continue
        node = DescentNode(
            place=place, witness=FunctionPhi(a, b), children=children, level=level
        )
        if not node.verify(model):
            raise IntegrityError("descent witness failed re-verification")
        return node
    raise BudgetError(
        f"descent at degree {place.degree} -> {target} exhausted "
        f"{tried} lattice candidates (coefficient degree <= {options.delta_max}); "
        "raise the coefficient degree bound",
        stats={"tried": tried, "rejected": stats_rejects},
    )


def final_descent_step(
    model: CurveModel,
    fb: FactorBase,
    place: Place,
    rng: random.Random,
    options: SearchOptions = SearchOptions(),
    level: int = 0,
) -> DescentNode:
    """Last level: all children must land in the factor base."""
    node = descent_step(model, fb, place, fb.bound, rng, options, level)
    for p, _ in node.children:
        if fb.place_index(p) is None:
            raise IntegrityError("final descent produced a place outside the base")
    return node


@dataclass
class DlogResult:
    x: Optional[int]
    order_base: Optional[int]
    verified: bool
    transcript: dict
    stats: dict
    failure: Optional[str] = None


def _express_over_base(
    group: JacobianGroup,
    precomp: GroupStructure,
    cls: IdealClass,
    schedule: DescentSchedule,
    rng: random.Random,
    options: SearchOptions,
    label: str,
) -> Tuple[Dict[int, int], dict]:
    """Write a class as an exponent vector over the factor base, descending
    through the schedule; returns the vector and a replayable transcript."""
    model = group.model
    fb = precomp.fb
    decomp, randomizer, hm_stats = hm_smooth(
        group, cls, schedule.bounds[0], fb, rng, options
    )
    vec: Dict[int, int] = {}
    for idx, m in randomizer.items():
        vec[idx] = vec.get(idx, 0) - m
    queue: List[Tuple[Place, int, int]] = []
    nodes: List[DescentNode] = []
    node_cache: Dict[tuple, DescentNode] = {}
    for p, e in decomp:
        idx = fb.place_index(p)
        if idx is not None:
            vec[idx] = vec.get(idx, 0) + e
        else:
            queue.append((p, e, 0))
    node_count = 0
    while queue:
        place, coeff, level = queue.pop()
        node_count += 1
        if node_count > options.max_nodes:
            raise BudgetError(
                f"descent tree exceeded {options.max_nodes} nodes", stats={}
            )
        node = node_cache.get(place.key())
        if node is None:
            target = schedule.target_for(place.degree)
            if target <= fb.bound:
                node = final_descent_step(model, fb, place, rng, options, level)
            else:
                node = descent_step(model, fb, place, target, rng, options, level)
            node_cache[place.key()] = node
            nodes.append(node)
        # div(phi) = Q + sum e_i P_i - deg P_inf, so [Q] = -sum e_i [P_i]
        for p, e in node.children:
            idx = fb.place_index(p)
            if idx is not None:
                vec[idx] = vec.get(idx, 0) - coeff * e
            else:
                queue.append((p, -coeff * e, level + 1))
    transcript = {
        "label": label,
        "randomizer": sorted(randomizer.items()),
        "smoothing": [[_place_json(p), e] for p, e in decomp],
        "nodes": [_node_json(n) for n in nodes],
        "vector": sorted((i, c) for i, c in vec.items() if c),
        "hm_trials": hm_stats["trials"],
    }
    return vec, transcript


def _place_json(p: Place) -> list:
    return [list(p.u.c), list(p.v.c)]


def _node_json(n: DescentNode) -> dict:
    return {
        "place": _place_json(n.place),
        "witness": [list(n.witness.a.c), list(n.witness.b.c)] if n.witness else None,
        "children": [[_place_json(p), e] for p, e in n.children],
        "level": n.level,
    }


def verify_transcript(
    precomp: GroupStructure,
    transcript: dict,
    group: Optional[JacobianGroup] = None,
) -> None:
    """Re-check a descent transcript without any searching.

    Every node witness is re-decomposed and compared against its recorded
    children; each side's factor base vector is re-accumulated in the ideal
    oracle and compared with the class rebuilt from its stored spec; the
    final logarithm is re-verified.  Raises on the first mismatch.
    """
    from .serialize import resolve_class_spec

    model = precomp.model
    group = group or JacobianGroup(model)
    fb = precomp.fb
    F = model.field
    seed = transcript.get("seed", 0)
    classes = {}
    for label in ("d1", "d2"):
        side = transcript[label]
        for nd in side["nodes"]:
            place = Place.affine(Poly(F, nd["place"][0]), Poly(F, nd["place"][1]))
            witness = None
            if nd["witness"] is not None:
                witness = FunctionPhi(
                    Poly(F, nd["witness"][0]), Poly(F, nd["witness"][1])
                )
            children = tuple(
                (Place.affine(Poly(F, pj[0]), Poly(F, pj[1])), int(e))
                for pj, e in nd["children"]
            )
            node = DescentNode(
                place=place, witness=witness, children=children, level=nd["level"]
            )
            if not node.verify(model):
                raise IntegrityError(f"transcript node failed re-check ({label})")
        spec = transcript.get(label + "_spec")
        if spec is None:
            raise IntegrityError("transcript lacks the class specs")
        cls = resolve_class_spec(group, fb, spec, seed, label)
        acc = group.identity()
        for idx, c in side["vector"]:
            acc = group.add(
                acc, group.scalar_mul(group.class_from_place(fb.places[int(idx)]), int(c))
            )
        if acc != cls:
            raise IntegrityError(f"transcript vector does not reproduce {label}")
        classes[label] = cls
    x = transcript.get("x")
    if x is not None:
        if group.scalar_mul(classes["d1"], int(x)) != classes["d2"]:
            raise IntegrityError("transcript logarithm failed re-verification")


def discrete_log(
    precomp: GroupStructure,
    d1: IdealClass,
    d2: IdealClass,
    schedule: Optional[DescentSchedule] = None,
    seed: int = 0,
    options: SearchOptions = SearchOptions(),
    group: Optional[JacobianGroup] = None,
) -> DlogResult:
    """x with d2 = x * d1, via smoothing + descent + SNF coordinates.

    The answer is verified with the ideal arithmetic oracle before being
    returned; an unverifiable answer raises an integrity error instead of
    being reported.  An inconsistent system (d2 outside the subgroup
    generated by d1) is reported as a failure result, not an exception.
    """
    model = precomp.model
    group = group or JacobianGroup(model)
    if schedule is None:
        schedule = DescentSchedule.default_for(model, precomp.fb)
    stats: dict = {"started": time.perf_counter()}
    vec1, tr1 = _express_over_base(
        group, precomp, d1, schedule, derive_rng(seed, "dlog", "d1"), options, "d1"
    )
    vec2, tr2 = _express_over_base(
        group, precomp, d2, schedule, derive_rng(seed, "dlog", "d2"), options, "d2"
    )
    t = precomp.fb.t
    def dense(v):
        out = [0] * t
        for i, c in v.items():
            out[i] = c
        return out

    alpha = group_coordinates(precomp.snf, dense(vec1))
    beta = group_coordinates(precomp.snf, dense(vec2))
    x = solve_cyclic_dlog(alpha, beta, precomp.snf.factors)
    transcript = {
        "schedule": list(schedule.bounds),
        "seed": seed,
        "d1": tr1,
        "d2": tr2,
        "alpha": list(alpha),
        "beta": list(beta),
        "moduli": list(precomp.snf.factors),
        "x": x,
    }
    stats["seconds"] = time.perf_counter() - stats.pop("started")
    order_base = coordinate_order(alpha, precomp.snf.factors)
    if x is None:
        return DlogResult(
            x=None,
            order_base=order_base,
            verified=False,
            transcript=transcript,
            stats=stats,
            failure="no-solution: target outside the subgroup generated by the base",
        )
    if group.scalar_mul(d1, x) != d2:
        raise IntegrityError(
            "solved logarithm failed oracle verification x*D1 != D2"
        )
    return DlogResult(
        x=x,
        order_base=order_base,
        verified=True,
        transcript=transcript,
        stats=stats,
    )
