"""Relation collection: sample functions a(X) + b(X)Y, test the norm for
smoothness, and decompose smooth divisors over the factor base; plus the
parameter planner tying the smoothness bound and sieving degree together.

Sign convention: the sampled function is phi = a + b*Y.  Its norm is
(-a)^n + sum c X^i (-a)^j b^(n-j) over the curve monomials, which equals
Res_Y(phi, curve) under the fixed Sylvester convention.
"""

from __future__ import annotations

import math
import random
import time
from dataclasses import dataclass, replace
from typing import Dict, Iterator, List, Optional, Tuple

from .curve import CurveModel, FactorBase
from .errors import BudgetError, IntegrityError, PlannerError, UsageError
from .poly import (
    Poly,
    inverse_mod,
    is_smooth,
    lift_root,
    poly_factor,
    poly_gcd,
    random_poly,
)

_ENUM_LIMIT = 1 << 18


@dataclass(frozen=True)
class FunctionPhi:
    a: Poly
    b: Poly

    def key(self) -> tuple:
        return (self.a.key(), self.b.key())

    def __repr__(self):
        return f"FunctionPhi(a={self.a!r}, b={self.b!r})"


@dataclass(frozen=True)
class Relation:
    """Sparse exponent vector of div(phi) over the affine factor base.

    The infinite exponent is -deg Norm(phi) and is omitted from matrices:
    with the infinite place as base point it is linearly determined by the
    affine part."""

    exponents: Tuple[Tuple[int, int], ...]  # (factor base index, e), sorted
    infinite_exponent: int
    phi: FunctionPhi

    def as_dict(self) -> Dict[int, int]:
        return dict(self.exponents)


@dataclass(frozen=True)
class ParameterPlan:
    n0: float
    d0: float
    big_m: float  # log(g log q) / log q
    rho: float
    sigma: float
    tau: float
    B: int
    m: int
    s: Optional[int]
    overridden: Tuple[str, ...] = ()
    warnings: Tuple[str, ...] = ()

    def finalized(self, fb: FactorBase, model: CurveModel) -> "ParameterPlan":
        """Fill s (default 2t) and run the search-space check."""
        plan = self
        if plan.s is None:
            plan = replace(plan, s=2 * fb.t)
        q = model.field.order
        nu = model.n * plan.m + model.d
        u = nu / plan.B
        p_hat = math.exp(-u * math.log(u)) if u > 1 else 1.0
        required = math.ceil(plan.s / p_hat)
        if q ** (2 * plan.m) < required:
            msg = (
                f"search space q^(2m) = {q**(2*plan.m)} is below the expected "
                f"{required} trials for s = {plan.s} relations; increase m"
            )
            if "m" in plan.overridden or "s" in plan.overridden:
                plan = replace(plan, warnings=plan.warnings + (msg,))
            else:
                raise PlannerError(msg)
        return plan


def sigma_from_quadratic(n0: float, d0: float) -> float:
    """Positive root of sigma^2 - (4/9) n0 sigma - (4/9) d0 = 0."""
    return (2.0 / 9.0) * n0 + math.sqrt((4.0 / 81.0) * n0 * n0 + (4.0 / 9.0) * d0)


def plan_parameters(model: CurveModel, overrides: Optional[dict] = None) -> ParameterPlan:
    """Evaluate the asymptotic parameter formulas for this curve.

    n0 and d0 are inferred minimally from n = n0 g^(1/3) M^(-1/3) and
    d = d0 g^(2/3) M^(1/3); sigma solves its quadratic, tau = (n0 sigma + d0)/3,
    rho = sqrt(tau/3), B = ceil(rho g^(1/3) M^(2/3)), m = floor(sigma g^(1/3)
    M^(2/3)).  Overrides pin B, m, s directly at desk scale.
    """
    overrides = dict(overrides or {})
    g = model.genus
    q = model.field.order
    if g < 1:
        raise UsageError("parameter planning needs genus >= 1")
    big_m = math.log(g * math.log(q)) / math.log(q)
    n0 = model.n / (g ** (1.0 / 3.0) * big_m ** (-1.0 / 3.0))
    d0 = model.d / (g ** (2.0 / 3.0) * big_m ** (1.0 / 3.0))
    sigma = float(overrides.get("sigma", sigma_from_quadratic(n0, d0)))
    tau = (n0 * sigma + d0) / 3.0
    rho = float(overrides.get("rho", math.sqrt(tau / 3.0)))
    scale = g ** (1.0 / 3.0) * big_m ** (2.0 / 3.0)
    B = int(overrides.get("B", math.ceil(rho * scale)))
    m = int(overrides.get("m", math.floor(sigma * scale)))
    if B < 1 or m < 1:
        raise PlannerError(f"degenerate plan (B={B}, m={m}); pin both by override")
    s = overrides.get("s")
    return ParameterPlan(
        n0=n0,
        d0=d0,
        big_m=big_m,
        rho=rho,
        sigma=sigma,
        tau=tau,
        B=B,
        m=m,
        s=int(s) if s is not None else None,
        overridden=tuple(k for k in ("B", "m", "s", "rho", "sigma") if k in overrides),
    )


def count_coprime_pairs(q: int, m: int) -> int:
    """#{(a, b): deg <= m, b != 0, gcd(a, b) = 1}, exact."""
    n = [0] * (m + 1)
    for j in range(m + 1):
        total = q ** (j + 1) * (q ** (j + 1) - 1)
        for k in range(1, j + 1):
            total -= q**k * n[j - k]
        n[j] = total
    return n[m]


class PhiSampler:
    """Uniform sampler over valid (a, b) pairs with in-run deduplication.

    Small spaces are materialized and shuffled, which draws the same
    distribution as rejection sampling with a seen-set (a uniform random
    permutation) and makes exhaustion exact.
    """

    def __init__(self, model: CurveModel, m: int, rng: random.Random, dedup: bool = True):
        self.field = model.field
        self.m = m
        self.rng = rng
        self.dedup = dedup
        self.total = count_coprime_pairs(self.field.order, m)
        self._seen: set = set()
        self._queue: Optional[List[FunctionPhi]] = None
        self._pos = 0
        q = self.field.order
        if dedup and q ** (2 * (m + 1)) <= _ENUM_LIMIT:
            self._queue = self._enumerate_all()
            rng.shuffle(self._queue)

    def _enumerate_all(self) -> List[FunctionPhi]:
        import itertools

        F = self.field
        out = []
        polys = [
            Poly(F, tail) for tail in itertools.product(range(F.order), repeat=self.m + 1)
        ]
        for a in polys:
            for b in polys:
                if b.is_zero():
                    continue
                if poly_gcd(a, b).is_one():
                    out.append(FunctionPhi(a, b))
        if len(out) != self.total:
            raise IntegrityError("coprime pair count mismatch")
        return out

    def sample_raw(self) -> FunctionPhi:
        """One valid pair, no deduplication (resampled until valid)."""
        F, m, rng = self.field, self.m, self.rng
        while True:
            a = random_poly(F, m, rng)
            b = random_poly(F, m, rng)
            if b.is_zero():
                continue
            if poly_gcd(a, b).is_one():
                return FunctionPhi(a, b)

    def sample(self) -> FunctionPhi:
        """Next unseen pair; raises BudgetError when the space is exhausted."""
        if self._queue is not None:
            if self._pos >= len(self._queue):
                raise BudgetError(
                    f"all {self.total} coprime pairs of degree <= {self.m} tried"
                )
            phi = self._queue[self._pos]
            self._pos += 1
            return phi
        if not self.dedup:
            return self.sample_raw()
        while True:
            if len(self._seen) >= self.total:
                raise BudgetError(
                    f"all {self.total} coprime pairs of degree <= {self.m} tried"
                )
            phi = self.sample_raw()
            if phi.key() not in self._seen:
                self._seen.add(phi.key())
                return phi


def norm_of_phi(model: CurveModel, phi: FunctionPhi) -> Poly:
    """(-a)^n + sum over monomials c X^i (-a)^j b^(n-j); degree <= n m + d."""
    F = model.field
    n = model.n
    na = -phi.a
    b = phi.b
    na_pow = [Poly.one(F)]
    b_pow = [Poly.one(F)]
    for _ in range(n):
        na_pow.append(na_pow[-1] * na)
        b_pow.append(b_pow[-1] * b)
    acc = na_pow[n]
    for i, j, c in model.monomials:
        term = (na_pow[j] * b_pow[n - j]).scale(c).shift(i)
        acc = acc + term
    return acc


def decompose_divisor(
    model: CurveModel,
    fb: FactorBase,
    phi: FunctionPhi,
    stats: Optional[dict] = None,
) -> Optional[Relation]:
    """Relation for div(phi) when it is smooth over the factor base.

    Returns None when the norm has a factor above the bound or meets a
    ramified place.  Valuations are computed by adic root lifting rather than
    assigned from the norm multiplicity; the degree sum is then checked
    against deg Norm exactly and any mismatch is an integrity error.
    """
    norm = norm_of_phi(model, phi)
    if norm.is_zero():
        raise IntegrityError("vanishing norm for nonzero phi")
    if not is_smooth(norm, fb.bound):
        if stats is not None:
            stats["not_smooth"] = stats.get("not_smooth", 0) + 1
        return None
    _, factors = poly_factor(norm)
    cy = model.curve_ypoly()
    exps: Dict[int, int] = {}
    degsum = 0
    for u, eu in factors:
        bmod = phi.b % u
        if bmod.is_zero():
            raise IntegrityError("norm factor divides b despite gcd(a, b) = 1")
        v0 = (-phi.a) * inverse_mod(bmod, u) % u
        idx = fb.lookup(u, v0)
        if idx is None:
            # the matching root is ramified (excluded from the factor base)
            if stats is not None:
                stats["ramified"] = stats.get("ramified", 0) + 1
            return None
        vlift = lift_root(cy, u, v0, eu + 1)
        mod = u
        for _ in range(eu):
            mod = mod * u
        z = (phi.a + phi.b * vlift) % mod
        val = 0
        while val <= eu:
            q, r = divmod(z, u)
            if not r.is_zero() or z.is_zero():
                break
            z = q
            val += 1
        exps[idx] = exps.get(idx, 0) + val
        degsum += val * u.degree
    if degsum != norm.degree:
        raise IntegrityError(
            f"valuation degree sum {degsum} != deg Norm = {norm.degree}"
        )
    if stats is not None:
        stats["smooth"] = stats.get("smooth", 0) + 1
    return Relation(
        exponents=tuple(sorted(exps.items())),
        infinite_exponent=-norm.degree,
        phi=phi,
    )


def relation_stream(
    model: CurveModel,
    fb: FactorBase,
    m: int,
    rng: random.Random,
    stats: Optional[dict] = None,
) -> Iterator[Relation]:
    """Accepted relations from the deduplicated sampler, until exhaustion."""
    sampler = PhiSampler(model, m, rng)
    stats = stats if stats is not None else {}
    while True:
        try:
            phi = sampler.sample()
        except BudgetError:
            return
        stats["trials"] = stats.get("trials", 0) + 1
        rel = decompose_divisor(model, fb, phi, stats)
        if rel is not None:
            yield rel


def collect_relations(
    model: CurveModel,
    fb: FactorBase,
    plan: ParameterPlan,
    rng: random.Random,
) -> Tuple[List[Relation], dict]:
    """Collect s relations; raises BudgetError with statistics on exhaustion.

    Columns are sorted by the (a, b) key so any collection order produces
    the same matrix.
    """
    if plan.s is None:
        raise UsageError("plan is not finalized (s unknown)")
    started = time.perf_counter()
    stats: dict = {"trials": 0}
    out: List[Relation] = []
    if plan.s > 0:
        for rel in relation_stream(model, fb, plan.m, rng, stats):
            out.append(rel)
            if len(out) >= plan.s:
                break
    stats["hits"] = len(out)
    stats["probability"] = stats["hits"] / stats["trials"] if stats["trials"] else 0.0
    stats["seconds"] = time.perf_counter() - started
    if len(out) < plan.s:
        raise BudgetError(
            f"sampler exhausted after {stats['trials']} trials with "
            f"{len(out)} < {plan.s} relations",
            stats=stats,
        )
    out.sort(key=lambda r: r.phi.key())
    return out, stats
