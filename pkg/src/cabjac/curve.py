"""Plane models Y^n + F(X, Y) over F_q: validation, places, point counts,
the zeta L-polynomial, class number bounds, and the factor base.

Only the strict shape is accepted: gcd(n, d) = 1, a nonzero X^d term, every
other monomial X^i Y^j of weight n*i + d*j < n*d, characteristic not dividing
n, and no affine singular points.  Such a curve has a unique rational place
at infinity and genus (n-1)(d-1)/2, so degree zero divisor classes biject
with classes of effective affine divisors.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .errors import IntegrityError, ResourceError, UsageError, ValidationError
from .fields import Field, extension_by_degree, extension_of
from .poly import (
    Poly,
    count_distinct_roots,
    irreducibles_up_to,
    poly_factor,
    poly_gcd,
    poly_roots,
    ypoly,
    ypoly_derivative_x,
    ypoly_derivative_y,
)

DEFAULT_ENUM_CEILING = 1 << 16


@dataclass(frozen=True)
class Place:
    """Prime divisor of inertia degree one: the ideal (u, Y - v), or infinity."""

    kind: str  # "affine" | "infinite"
    u: Optional[Poly]
    v: Optional[Poly]
    degree: int

    @classmethod
    def affine(cls, u: Poly, v: Poly) -> "Place":
        return cls("affine", u, v, u.degree)

    @classmethod
    def infinite(cls) -> "Place":
        return cls("infinite", None, None, 1)

    def key(self) -> tuple:
        if self.kind == "infinite":
            return (1,)
        return (0, self.u.key(), self.v.key())

    def __repr__(self):
        if self.kind == "infinite":
            return "Place(oo)"
        return f"Place({self.u!r}, Y-{self.v!r})"


class Divisor:
    """Finite integer-weighted formal sum of places."""

    __slots__ = ("support",)

    def __init__(self, support: Optional[Dict[Place, int]] = None):
        self.support = {p: e for p, e in (support or {}).items() if e != 0}

    def degree(self) -> int:
        return sum(e * p.degree for p, e in self.support.items())

    def affine(self) -> "Divisor":
        return Divisor({p: e for p, e in self.support.items() if p.kind == "affine"})

    def is_effective(self) -> bool:
        return all(e > 0 for e in self.support.values())

    def __add__(self, other: "Divisor") -> "Divisor":
        out = dict(self.support)
        for p, e in other.support.items():
            out[p] = out.get(p, 0) + e
        return Divisor(out)

    def __neg__(self) -> "Divisor":
        return Divisor({p: -e for p, e in self.support.items()})

    def items(self):
        return self.support.items()

    def __eq__(self, other):
        return isinstance(other, Divisor) and self.support == other.support

    def __len__(self):
        return len(self.support)

    def __repr__(self):
        return f"Divisor({self.support!r})"


@dataclass(frozen=True)
class CurveModel:
    field: Field
    n: int
    d: int
    monomials: Tuple[Tuple[int, int, int], ...]
    genus: int
    y_coeffs: Tuple[Poly, ...]  # length n+1, top entry 1

    def curve_ypoly(self) -> List[Poly]:
        return list(self.y_coeffs)

    def weight(self, i: int, j: int) -> int:
        """Pole order at infinity of the monomial X^i Y^j."""
        return self.n * i + self.d * j

    def __repr__(self):
        return f"CurveModel(n={self.n}, d={self.d}, g={self.genus}, {self.field!r})"


def validate_curve(
    field: Field, n: int, d: int, monomials: Iterable[Sequence[int]]
) -> CurveModel:
    """Check the strict shape and reject singular or inseparable models.

    Distinct rejection reasons: "gcd-violation", "inseparable",
    "singular-curve", plus "shape"/"weight-violation" for malformed input.
    """
    if n < 2 or d < 1:
        raise ValidationError("shape", f"need n >= 2 and d >= 1, got n={n}, d={d}")
    if math.gcd(n, d) != 1:
        raise ValidationError("gcd-violation", f"gcd({n}, {d}) != 1")
    if n % field.char == 0:
        raise ValidationError(
            "inseparable", f"characteristic {field.char} divides n = {n}"
        )
    seen = {}
    for entry in monomials:
        i, j, c = int(entry[0]), int(entry[1]), int(entry[2])
        if field.k == 1:
            c %= field.order
        elif not 0 <= c < field.order:
            raise ValidationError(
                "shape", f"coefficient {c} is not a valid encoding in {field!r}"
            )
        if c == 0:
            continue
        if i < 0 or j < 0 or j >= n:
            raise ValidationError("shape", f"monomial X^{i} Y^{j} out of range")
        if (i, j) in seen:
            raise ValidationError("shape", f"duplicate monomial X^{i} Y^{j}")
        seen[(i, j)] = c
    if seen.get((d, 0), 0) == 0:
        raise ValidationError("shape", f"missing X^{d} term")
    for (i, j), c in seen.items():
        if (i, j) == (d, 0):
            continue
        if n * i + d * j >= n * d:
            raise ValidationError(
                "weight-violation",
                f"monomial X^{i} Y^{j} has weight {n*i+d*j} >= nd = {n*d}",
            )
    mono = tuple(sorted((i, j, c) for (i, j), c in seen.items()))
    y_coeffs = []
    for j in range(n):
        coeffs: Dict[int, int] = {}
        for i, jj, c in mono:
            if jj == j:
                coeffs[i] = c
        size = max(coeffs) + 1 if coeffs else 0
        y_coeffs.append(Poly(field, [coeffs.get(i, 0) for i in range(size)]))
    y_coeffs.append(Poly.one(field))
    model = CurveModel(
        field=field,
        n=n,
        d=d,
        monomials=mono,
        genus=(n - 1) * (d - 1) // 2,
        y_coeffs=tuple(y_coeffs),
    )
    _check_nonsingular(model)
    return model


def _specialize(model: CurveModel, fy: Sequence[Poly], K: Field, xbar: int) -> Poly:
    return Poly(K, [c.eval(xbar, K) for c in fy])


def _check_nonsingular(model: CurveModel) -> None:
    """No common zero of (C, C_X, C_Y) over the algebraic closure.

    Any affine singular point lies over an irreducible factor u of
    Res_Y(C, C_Y); in the residue field F_q[X]/(u) the three specializations
    must then share a root, which is detected by a gcd of degree >= 1.
    """
    F = model.field
    cy = model.curve_ypoly()
    cY = ypoly_derivative_y(cy)
    cX = ypoly_derivative_x(cy)
    from .poly import poly_resultant

    res = poly_resultant(cy, cY)
    if res.is_zero():
        raise IntegrityError("discriminant resultant vanished on a separable model")
    for u, _ in poly_factor(res)[1]:
        if u.degree == 1:
            K: Field = F
            xbar = F.neg(u.c[0])
        else:
            K = extension_of(F, u.c)
            xbar = K.encode((0, 1))
        h = _specialize(model, cy, K, xbar)
        hy = _specialize(model, cY, K, xbar)
        hx = _specialize(model, cX, K, xbar)
        g = poly_gcd(poly_gcd(h, hy), hx)
        if g.degree >= 1:
            raise ValidationError(
                "singular-curve",
                f"singular point above u = {u!r} (common root of C, C_X, C_Y)",
            )


def count_points(model: CurveModel, i: int, ceiling: int = DEFAULT_ENUM_CEILING) -> int:
    """Projective points of the nonsingular model over F_{q^i}.

    Affine solutions are counted per x fiber by the distinct roots of the
    Y-specialization; the unique place at infinity is rational and adds one.
    """
    if i < 1:
        raise UsageError("extension degree must be >= 1")
    q = model.field.order
    if q**i > ceiling:
        raise ResourceError(
            f"q^i = {q**i} exceeds the enumeration ceiling {ceiling}"
        )
    K = extension_by_degree(model.field, i)
    total = 0
    cy = model.y_coeffs
    for x in K.elements():
        h = Poly(K, [c.eval(x, K) for c in cy])
        total += count_distinct_roots(h)
    return total + 1


@dataclass(frozen=True)
class ZetaData:
    counts: Tuple[int, ...]
    coeffs: Tuple[int, ...]  # L-polynomial a_0 .. a_{2g}
    h: int


def hasse_weil_interval(q: int, g: int) -> Tuple[int, int]:
    """Exact floor((sqrt(q)-1)^2g) and ceil((sqrt(q)+1)^2g), no float rounding."""

    def pow_in_zsqrt(a0: int, b0: int, e: int) -> Tuple[int, int]:
        # (a0 + b0 sqrt(q))^e as A + B sqrt(q)
        ra, rb = 1, 0
        for _ in range(e):
            ra, rb = ra * a0 + rb * b0 * q, ra * b0 + rb * a0
        return ra, rb

    def bracket(a: int, b: int) -> Tuple[int, int]:
        # (floor, ceil) of a + b sqrt(q)
        s = math.isqrt(b * b * q)
        exact = s * s == b * b * q
        if b >= 0:
            return a + s, a + s + (0 if exact else 1)
        return a - s - (0 if exact else 1), a - s

    lo_f, _ = bracket(*pow_in_zsqrt(q + 1, -2, g))
    _, hi_c = bracket(*pow_in_zsqrt(q + 1, 2, g))
    return lo_f, hi_c


def zeta_from_counts(model: CurveModel, counts: Sequence[int]) -> ZetaData:
    """L-polynomial from N_1..N_g by Newton's identities, then the
    functional equation a_{2g-i} = q^{g-i} a_i; h = L(1)."""
    g = model.genus
    q = model.field.order
    counts = tuple(int(c) for c in counts)
    if len(counts) != g:
        raise UsageError(f"need exactly g = {g} point counts, got {len(counts)}")
    if g == 0:
        return ZetaData(counts=(), coeffs=(1,), h=1)
    p = [0] * (g + 1)  # power sums of the inverse roots
    for i in range(1, g + 1):
        p[i] = q**i + 1 - counts[i - 1]
    e = [0] * (g + 1)
    for k in range(1, g + 1):
        acc = p[k]
        for j in range(1, k):
            term = e[j] * p[k - j]
            acc += term if j % 2 == 0 else -term
        acc = acc if k % 2 == 1 else -acc
        if acc % k != 0:
            raise IntegrityError(f"Newton identity gave non-integer e_{k}")
        e[k] = acc // k
    a = [0] * (2 * g + 1)
    a[0] = 1
    for i in range(1, g + 1):
        a[i] = e[i] if i % 2 == 0 else -e[i]
    for i in range(g):
        a[2 * g - i] = q ** (g - i) * a[i]
    h = sum(a)
    lo, hi = hasse_weil_interval(q, g)
    if not (lo <= h <= hi):
        raise IntegrityError(
            f"h = {h} outside the Hasse-Weil interval [{lo}, {hi}]: counts inconsistent"
        )
    return ZetaData(counts=counts, coeffs=tuple(a), h=h)


def counts_from_zeta(model: CurveModel, zeta: ZetaData, upto: int) -> List[int]:
    """Recover N_1..N_upto from the L-polynomial, exactly (reverse Newton)."""
    q = model.field.order
    g = model.genus
    e = [0] * (upto + 1)
    for i in range(1, upto + 1):
        if i <= 2 * g:
            e[i] = zeta.coeffs[i] if i % 2 == 0 else -zeta.coeffs[i]
    p = [0] * (upto + 1)
    for k in range(1, upto + 1):
        acc = 0
        for j in range(1, k):
            term = e[j] * p[k - j]
            acc += term if j % 2 == 1 else -term
        acc += k * e[k] if k % 2 == 1 else -k * e[k]
        p[k] = acc
    return [q**i + 1 - p[i] for i in range(1, upto + 1)]


@dataclass(frozen=True)
class ClassNumberBounds:
    h_minus: int
    h_plus: int
    exact: bool
    h: Optional[int] = None
    estimate: Optional[float] = None

    def admits(self, order: int) -> bool:
        if self.exact:
            return order == self.h
        return self.h_minus < order < self.h_plus


def class_number_bounds(
    model: CurveModel,
    lam: Optional[int] = None,
    ceiling: int = DEFAULT_ENUM_CEILING,
) -> ClassNumberBounds:
    """Bounds h- < h < h+ from truncated L-series data.

    lam=None computes the exact class number (degenerate interval).  With a
    truncation the estimate is h~ = q^g exp(sum_{i<=lam} (N_i - 1 - q^i)/(i q^i));
    the window is sqrt(2) on both sides per the analysis, widened by the exact
    tail bound when lam is too small for the sqrt(2) window to be valid, and
    always clamped to the Hasse-Weil interval.  lam=0 returns Hasse-Weil.
    """
    g = model.genus
    q = model.field.order
    if g == 0:
        return ClassNumberBounds(h_minus=1, h_plus=1, exact=True, h=1)
    if lam is None:
        counts = [count_points(model, i, ceiling) for i in range(1, g + 1)]
        h = zeta_from_counts(model, counts).h
        return ClassNumberBounds(h_minus=h, h_plus=h, exact=True, h=h)
    if lam < 0 or lam > g:
        raise UsageError("truncation level must lie in [0, g]")
    log_est = g * math.log(q)
    for i in range(1, lam + 1):
        n_i = count_points(model, i, ceiling)
        log_est += (n_i - 1 - q**i) / (i * q**i)
    # |N_i - q^i - 1| <= 2 g q^{i/2} bounds the dropped tail
    tail = 0.0
    if lam < g or True:
        rs = q ** (-0.5)
        tail = 2 * g * rs ** (lam + 1) / ((lam + 1) * (1 - rs))
    spread = max(math.log(math.sqrt(2.0)), tail)
    lo, hi = hasse_weil_interval(q, g)
    h_minus = max(int(math.floor(math.exp(log_est - spread))), lo - 1)
    h_plus = min(int(math.ceil(math.exp(log_est + spread))), hi + 1)
    return ClassNumberBounds(
        h_minus=h_minus, h_plus=h_plus, exact=False, estimate=math.exp(log_est)
    )


@dataclass(frozen=True)
class FactorBase:
    """Affine places of degree <= B (unramified, inertia degree 1), ordered
    by the fixed total order, plus the infinite place.  t counts the affine
    members; matrix rows are indexed by them alone."""

    bound: int
    places: Tuple[Place, ...]
    infinite: Place
    ramified_excluded: Tuple[Tuple[Poly, Poly, int], ...]
    index: Dict[tuple, int] = dc_field(repr=False, default_factory=dict)

    @property
    def t(self) -> int:
        return len(self.places)

    def place_index(self, place: Place) -> Optional[int]:
        return self.index.get(place.key())

    def lookup(self, u: Poly, v: Poly) -> Optional[int]:
        return self.index.get((0, u.key(), v.key()))

    def __iter__(self):
        return iter(self.places)


def build_factor_base(model: CurveModel, bound: int) -> FactorBase:
    """Factor the curve polynomial over every residue field F_q[X]/(u) with
    deg u <= bound; each simple linear factor Y - v yields a place.  Roots of
    multiplicity > 1 sit under ramified places and are excluded but logged."""
    if bound < 1:
        raise UsageError("factor base bound must be >= 1")
    F = model.field
    places: List[Place] = []
    ramified: List[Tuple[Poly, Poly, int]] = []
    for u in irreducibles_up_to(F, bound):
        if u.degree == 1:
            K: Field = F
            xbar = F.neg(u.c[0])
        else:
            K = extension_of(F, u.c)
            xbar = K.encode((0, 1))
        h = Poly(K, [c.eval(xbar, K) for c in model.y_coeffs])
        group: List[Place] = []
        for ybar, mult in poly_roots(h):
            if u.degree == 1:
                v = Poly.const(F, ybar)
            else:
                v = Poly(F, K.digits(ybar))
            if mult == 1:
                group.append(Place.affine(u, v))
            else:
                ramified.append((u, v, mult))
        group.sort(key=lambda p: p.v.key())
        places.extend(group)
    fb = FactorBase(
        bound=bound,
        places=tuple(places),
        infinite=Place.infinite(),
        ramified_excluded=tuple(ramified),
    )
    for idx, pl in enumerate(fb.places):
        fb.index[pl.key()] = idx
    return fb
