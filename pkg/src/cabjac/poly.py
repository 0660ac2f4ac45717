"""Univariate polynomials over a finite field, plus the bivariate helpers
needed for curve norms: resultants in Y, adic root lifting, factorization.

Coefficients are stored little-endian in a tuple with no trailing zeros; the
zero polynomial is the empty tuple and reports degree -1.  The total order
used everywhere for reproducible enumeration and sorting is
(degree, coefficient tuple), comparing coefficient tuples left to right, i.e.
the constant term is most significant within a degree.
"""

from __future__ import annotations

import itertools
import random
from typing import Iterable, Iterator, List, Optional, Sequence, Tuple

from .errors import RamifiedPlaceError, UsageError
from .fields import Field, _factor_small


class Poly:
    __slots__ = ("f", "c")

    def __init__(self, field: Field, coeffs: Iterable[int] = ()):
        c = list(coeffs)
        while c and c[-1] == 0:
            c.pop()
        self.f = field
        self.c = tuple(c)

    @classmethod
    def _make(cls, field: Field, coeffs: Tuple[int, ...]) -> "Poly":
        p = object.__new__(cls)
        p.f = field
        p.c = coeffs
        return p

    @classmethod
    def zero(cls, field: Field) -> "Poly":
        return cls._make(field, ())

    @classmethod
    def one(cls, field: Field) -> "Poly":
        return cls._make(field, (1,))

    @classmethod
    def x(cls, field: Field) -> "Poly":
        return cls._make(field, (0, 1))

    @classmethod
    def const(cls, field: Field, a: int) -> "Poly":
        return cls._make(field, (a,)) if a else cls._make(field, ())

    @classmethod
    def monomial(cls, field: Field, deg: int, coeff: int = 1) -> "Poly":
        if coeff == 0:
            return cls.zero(field)
        return cls._make(field, (0,) * deg + (coeff,))

    @property
    def degree(self) -> int:
        """Degree; -1 is the sentinel for the zero polynomial."""
        return len(self.c) - 1

    def is_zero(self) -> bool:
        return not self.c

    def is_one(self) -> bool:
        return self.c == (1,)

    @property
    def lc(self) -> int:
        return self.c[-1] if self.c else 0

    def key(self) -> tuple:
        return (len(self.c), self.c)

    def _check(self, other: "Poly"):
        if self.f is not other.f:
            raise UsageError("polynomials over different fields")

    def __eq__(self, other):
        return isinstance(other, Poly) and self.f is other.f and self.c == other.c

    def __hash__(self):
        return hash((id(self.f), self.c))

    def __add__(self, other: "Poly") -> "Poly":
        self._check(other)
        F = self.f
        a, b = self.c, other.c
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, y in enumerate(b):
            out[i] = F.add(out[i], y)
        while out and out[-1] == 0:
            out.pop()
        return Poly._make(F, tuple(out))

    def __sub__(self, other: "Poly") -> "Poly":
        self._check(other)
        F = self.f
        n = max(len(self.c), len(other.c))
        out = []
        a, b = self.c, other.c
        for i in range(n):
            x = a[i] if i < len(a) else 0
            y = b[i] if i < len(b) else 0
            out.append(F.sub(x, y))
        while out and out[-1] == 0:
            out.pop()
        return Poly._make(F, tuple(out))

    def __neg__(self) -> "Poly":
        F = self.f
        return Poly._make(F, tuple(F.neg(x) for x in self.c))

    def __mul__(self, other: "Poly") -> "Poly":
        self._check(other)
        F = self.f
        a, b = self.c, other.c
        if not a or not b:
            return Poly.zero(F)
        out = [0] * (len(a) + len(b) - 1)
        add, mul = F.add, F.mul
        for i, x in enumerate(a):
            if x == 0:
                continue
            for j, y in enumerate(b):
                if y:
                    out[i + j] = add(out[i + j], mul(x, y))
        return Poly._make(F, tuple(out))

    def scale(self, a: int) -> "Poly":
        F = self.f
        if a == 0:
            return Poly.zero(F)
        return Poly._make(F, tuple(F.mul(a, x) for x in self.c))

    def shift(self, k: int) -> "Poly":
        """Multiply by X^k."""
        if not self.c:
            return self
        return Poly._make(self.f, (0,) * k + self.c)

    def __divmod__(self, other: "Poly") -> Tuple["Poly", "Poly"]:
        self._check(other)
        F = self.f
        b = other.c
        if not b:
            raise ZeroDivisionError("polynomial division by zero")
        a = list(self.c)
        db, da = len(b) - 1, len(a) - 1
        if da < db:
            return Poly.zero(F), self
        binv = F.inv(b[-1])
        q = [0] * (da - db + 1)
        sub, mul = F.sub, F.mul
        for i in range(da - db, -1, -1):
            c = mul(a[i + db], binv)
            if c:
                q[i] = c
                for j in range(db + 1):
                    if b[j]:
                        a[i + j] = sub(a[i + j], mul(c, b[j]))
        while a and a[-1] == 0:
            a.pop()
        while q and q[-1] == 0:
            q.pop()
        return Poly._make(F, tuple(q)), Poly._make(F, tuple(a))

    def __floordiv__(self, other: "Poly") -> "Poly":
        return divmod(self, other)[0]

    def __mod__(self, other: "Poly") -> "Poly":
        return divmod(self, other)[1]

    def monic(self) -> "Poly":
        if not self.c or self.c[-1] == 1:
            return self
        return self.scale(self.f.inv(self.c[-1]))

    def derivative(self) -> "Poly":
        F = self.f
        out = []
        for i in range(1, len(self.c)):
            out.append(F.mul(i % F.char, self.c[i]))
        while out and out[-1] == 0:
            out.pop()
        return Poly._make(F, tuple(out))

    def eval(self, a: int, field: Optional[Field] = None) -> int:
        """Evaluate at a, optionally inside an extension of the coefficient field."""
        F = field or self.f
        acc = 0
        for c in reversed(self.c):
            acc = F.add(F.mul(acc, a), c)
        return acc

    def pow_mod(self, e: int, mod: "Poly") -> "Poly":
        result = Poly.one(self.f) % mod
        a = self % mod
        while e:
            if e & 1:
                result = result * a % mod
            a = a * a % mod
            e >>= 1
        return result

    def __repr__(self):
        if not self.c:
            return "Poly(0)"
        terms = []
        for i, c in enumerate(self.c):
            if c:
                terms.append(f"{c}*X^{i}" if i else f"{c}")
        return "Poly(" + " + ".join(terms) + ")"


def poly_gcd(a: Poly, b: Poly) -> Poly:
    """Monic gcd; gcd(0, 0) = 0."""
    a._check(b)
    while not b.is_zero():
        a, b = b, a % b
    return a.monic()


def poly_xgcd(a: Poly, b: Poly) -> Tuple[Poly, Poly, Poly]:
    """(g, s, t) with s*a + t*b = g, g monic (or zero)."""
    a._check(b)
    F = a.f
    r0, r1 = a, b
    s0, s1 = Poly.one(F), Poly.zero(F)
    t0, t1 = Poly.zero(F), Poly.one(F)
    while not r1.is_zero():
        q, r = divmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    if r0.is_zero():
        return r0, s0, t0
    c = F.inv(r0.lc)
    return r0.scale(c), s0.scale(c), t0.scale(c)


def inverse_mod(a: Poly, m: Poly) -> Poly:
    g, s, _ = poly_xgcd(a, m)
    if not g.is_one():
        raise ZeroDivisionError("element not invertible modulo m")
    return s % m


def random_poly(field: Field, deg_bound: int, rng: random.Random) -> Poly:
    """Uniform over all polynomials of degree <= deg_bound (zero included)."""
    return Poly(field, [field.random(rng) for _ in range(deg_bound + 1)])


def random_monic(field: Field, deg: int, rng: random.Random) -> Poly:
    return Poly(field, [field.random(rng) for _ in range(deg)] + [1])


# factorization --------------------------------------------------------------


def _stable_seed(f: Poly) -> int:
    acc = f.f.order
    for c in f.c:
        acc = (acc * 1099511628211 + c + 1) % (1 << 63)
    return acc


def _pth_root_coeff(field: Field, a: int) -> int:
    # a^(q/p) is the p-th root in F_q
    return field.pow(a, field.order // field.char)


def squarefree_decomposition(f: Poly) -> List[Tuple[Poly, int]]:
    """Monic squarefree parts with multiplicities, valid in characteristic p."""
    F = f.f
    f = f.monic()
    out: List[Tuple[Poly, int]] = []
    if f.degree <= 0:
        return out
    fp = f.derivative()
    if fp.is_zero():
        # f = h(X^p); take p-th roots of the surviving coefficients
        p = F.char
        h = Poly(F, [_pth_root_coeff(F, f.c[i]) for i in range(0, len(f.c), p)])
        return [(g, m * p) for g, m in squarefree_decomposition(h)]
    c = poly_gcd(f, fp)
    w = f // c
    i = 1
    while not w.is_one():
        y = poly_gcd(w, c)
        z = w // y
        if not z.is_one():
            out.append((z, i))
        i += 1
        w = y
        c = c // y
    if not c.is_one():
        # c keeps its original p-divisible multiplicities; the recursion's
        # zero-derivative branch performs the p-th root rescaling itself
        out.extend(squarefree_decomposition(c))
    return out


def _distinct_degree(f: Poly) -> List[Tuple[Poly, int]]:
    """Splits squarefree monic f into products of irreducibles of equal degree."""
    F = f.f
    q = F.order
    out = []
    x = Poly.x(F)
    h = x % f
    d = 0
    while f.degree > 0:
        d += 1
        if 2 * d > f.degree:
            out.append((f, f.degree))
            break
        h = h.pow_mod(q, f)
        g = poly_gcd(h - x, f)
        if not g.is_one():
            out.append((g, d))
            f = f // g
            h = h % f
    return out


def _split_equal_degree(f: Poly, d: int, rng: random.Random) -> List[Poly]:
    """Cantor-Zassenhaus splitting of monic squarefree f, all factors of degree d."""
    F = f.f
    if f.degree == d:
        return [f]
    q = F.order
    while True:
        r = random_poly(F, f.degree - 1, rng)
        if r.degree < 1:
            continue
        if F.char == 2:
            # trace map over F_2
            bits = 0
            qq = q**d
            while (1 << bits) < qq:
                bits += 1
            s = Poly.zero(F)
            t = r % f
            for _ in range(bits):
                s = (s + t) % f
                t = t * t % f
            g = poly_gcd(s, f)
        else:
            s = r.pow_mod((q**d - 1) // 2, f)
            g = poly_gcd(s - Poly.one(F), f)
        if 0 < g.degree < f.degree:
            return _split_equal_degree(g, d, rng) + _split_equal_degree(f // g, d, rng)


def poly_factor(f: Poly, rng: Optional[random.Random] = None) -> Tuple[int, List[Tuple[Poly, int]]]:
    """Complete factorization (lc, [(monic irreducible, multiplicity)]).

    The randomized splitting is self-seeded from the input so results do not
    depend on call order; the factor list is sorted by the fixed total order.
    """
    if f.is_zero():
        raise UsageError("cannot factor the zero polynomial")
    rng = rng or random.Random(_stable_seed(f))
    lc = f.lc
    out: List[Tuple[Poly, int]] = []
    for g, mult in squarefree_decomposition(f):
        for h, d in _distinct_degree(g):
            for irr in _split_equal_degree(h, d, rng):
                out.append((irr, mult))
    out.sort(key=lambda t: t[0].key())
    return lc, out


def poly_roots(f: Poly) -> List[Tuple[int, int]]:
    """Roots in the coefficient field with multiplicities."""
    F = f.f
    out = []
    for g, mult in poly_factor(f)[1]:
        if g.degree == 1:
            out.append((F.neg(g.c[0]), mult))
    out.sort()
    return out


def count_distinct_roots(f: Poly) -> int:
    """Number of distinct roots of f in its coefficient field."""
    F = f.f
    x = Poly.x(F)
    g = f.monic()
    h = x.pow_mod(F.order, g)
    return poly_gcd(h - x, g).degree


def is_smooth(f: Poly, bound: int) -> bool:
    """True when every irreducible factor of f has degree <= bound."""
    if f.is_zero():
        raise UsageError("zero polynomial has no factorization")
    g = f.monic()
    if g.degree <= bound:
        return True
    F = f.f
    x = Poly.x(F)
    h = x % g
    for _ in range(bound):
        h = h.pow_mod(F.order, g)
        while True:
            w = poly_gcd(h - x, g)
            if w.is_one():
                break
            g = g // w
            if g.degree == 0:
                return True
        h = h % g
    return g.degree == 0


def is_irreducible(f: Poly) -> bool:
    F = f.f
    d = f.degree
    if d <= 0:
        return False
    if d == 1:
        return True
    f = f.monic()
    q = F.order
    x = Poly.x(F)
    if not (x.pow_mod(q**d, f) - x % f).is_zero():
        return False
    for ell in _factor_small(d):
        g = poly_gcd(x.pow_mod(q ** (d // ell), f) - x, f)
        if not g.is_one():
            return False
    return True


def irreducibles_up_to(field: Field, bound: int) -> Iterator[Poly]:
    """All monic irreducibles of degree <= bound, in the fixed total order."""
    if bound < 1:
        raise UsageError("degree bound must be >= 1")
    for d in range(1, bound + 1):
        for tail in itertools.product(range(field.order), repeat=d):
            f = Poly(field, tail + (1,))
            if is_irreducible(f):
                yield f


def count_irreducibles(field: Field, d: int) -> int:
    """Necklace count (1/d) * sum_{e | d} mu(e) q^(d/e)."""
    q = field.order
    total = 0
    for e in range(1, d + 1):
        if d % e == 0:
            mu = _moebius(e)
            if mu:
                total += mu * q ** (d // e)
    return total // d


def _moebius(n: int) -> int:
    if n == 1:
        return 1
    mu = 1
    for p in _factor_small(n):
        if n % (p * p) == 0:
            return 0
        mu = -mu
    return mu


def lagrange_interpolate(field: Field, points: Sequence[Tuple[int, int]]) -> Poly:
    result = Poly.zero(field)
    for i, (xi, yi) in enumerate(points):
        num = Poly.const(field, yi)
        den = 1
        for j, (xj, _) in enumerate(points):
            if i == j:
                continue
            num = num * Poly(field, (field.neg(xj), 1))
            den = field.mul(den, field.sub(xi, xj))
        result = result + num.scale(field.inv(den))
    return result


# bivariate (Y-polynomial) helpers -------------------------------------------
#
# A polynomial in Y over F_q[X] is a list of Poly, index = power of Y.


def ypoly(coeffs: Sequence[Poly]) -> List[Poly]:
    c = list(coeffs)
    while c and c[-1].is_zero():
        c.pop()
    return c


def ypoly_deg(fy: Sequence[Poly]) -> int:
    return len(fy) - 1


def ypoly_eval(fy: Sequence[Poly], v: Poly, mod: Optional[Poly] = None) -> Poly:
    """f(X, v(X)), optionally reduced modulo mod after every step."""
    F = v.f
    acc = Poly.zero(F)
    for c in reversed(list(fy)):
        acc = acc * v + c
        if mod is not None:
            acc = acc % mod
    return acc


def ypoly_derivative_y(fy: Sequence[Poly]) -> List[Poly]:
    if not fy:
        return []
    F = fy[0].f
    out = []
    for j in range(1, len(fy)):
        out.append(fy[j].scale(j % F.char))
    return ypoly(out)


def ypoly_derivative_x(fy: Sequence[Poly]) -> List[Poly]:
    return ypoly([c.derivative() for c in fy])


def _sylvester(fy: Sequence[Poly], gy: Sequence[Poly]) -> List[List[Poly]]:
    F = fy[0].f
    m, n = len(fy) - 1, len(gy) - 1
    size = m + n
    zero = Poly.zero(F)
    rows = []
    frow = list(reversed(list(fy)))
    grow = list(reversed(list(gy)))
    for i in range(n):
        rows.append([zero] * i + frow + [zero] * (size - m - 1 - i))
    for i in range(m):
        rows.append([zero] * i + grow + [zero] * (size - n - 1 - i))
    return rows


def _bareiss_det(rows: List[List[Poly]]) -> Poly:
    """Fraction-free determinant over F_q[X]; all divisions are exact."""
    n = len(rows)
    F = rows[0][0].f
    if n == 0:
        return Poly.one(F)
    m = [row[:] for row in rows]
    sign = 1
    prev = Poly.one(F)
    for k in range(n - 1):
        if m[k][k].is_zero():
            for i in range(k + 1, n):
                if not m[i][k].is_zero():
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return Poly.zero(F)
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = m[k][k] * m[i][j] - m[i][k] * m[k][j]
                q, r = divmod(num, prev)
                if not r.is_zero():
                    raise AssertionError("Bareiss division not exact")
                m[i][j] = q
            m[i][k] = Poly.zero(F)
        prev = m[k][k]
    det = m[n - 1][n - 1]
    if sign < 0:
        det = -det
    return det


def resultant_scalar(field: Field, a: Poly, b: Poly) -> int:
    """Res(a, b) for univariate polynomials, Sylvester convention."""
    if a.is_zero() or b.is_zero():
        return 0
    res = 1
    while b.degree > 0:
        r = a % b
        if r.is_zero():
            return 0
        res = field.mul(res, field.pow(b.lc, a.degree - r.degree))
        if (a.degree * b.degree) % 2 == 1:
            res = field.neg(res)
        a, b = b, r
    return field.mul(res, field.pow(b.c[0], a.degree))


def resultant_y_sylvester(fy: Sequence[Poly], gy: Sequence[Poly]) -> Poly:
    return _bareiss_det(_sylvester(fy, gy))


def resultant_y_eval(fy: Sequence[Poly], gy: Sequence[Poly]) -> Optional[Poly]:
    """Evaluation-interpolation resultant; None when the field is too small."""
    F = fy[0].f
    dxf = max(c.degree for c in fy)
    dxg = max(c.degree for c in gy)
    bound = (len(fy) - 1) * dxg + (len(gy) - 1) * dxf
    lcf, lcg = fy[-1], gy[-1]
    points = []
    for x0 in F.elements():
        if lcf.eval(x0) == 0 or lcg.eval(x0) == 0:
            continue
        a = Poly(F, [c.eval(x0) for c in fy])
        b = Poly(F, [c.eval(x0) for c in gy])
        points.append((x0, resultant_scalar(F, a, b)))
        if len(points) == bound + 1:
            return lagrange_interpolate(F, points)
    return None


def poly_resultant(fy: Sequence[Poly], gy: Sequence[Poly]) -> Poly:
    """Res_Y(f, g) in F_q[X], Sylvester determinant sign convention.

    Uses evaluation-interpolation when the field offers enough sample points
    with non-vanishing leading coefficients, else the fraction-free
    determinant.  Both paths agree identically.
    """
    fy, gy = ypoly(fy), ypoly(gy)
    if len(fy) <= 1 and len(gy) <= 1:
        raise UsageError("resultant needs positive degree in Y")
    if not fy or not gy:
        return Poly.zero((fy or gy)[0].f)
    r = resultant_y_eval(fy, gy)
    if r is not None:
        return r
    return resultant_y_sylvester(fy, gy)


def lift_root(gy: Sequence[Poly], u: Poly, v0: Poly, e: int) -> Poly:
    """Newton lift of a simple root: returns v with G(X, v) = 0 mod u^e.

    Requires G(X, v0) = 0 mod u and dG/dY(X, v0) invertible mod u; a vanishing
    derivative signals a ramified place and the candidate must be discarded.
    """
    if e < 1:
        raise UsageError("precision must be >= 1")
    gy = ypoly(gy)
    dgy = ypoly_derivative_y(gy)
    if not ypoly_eval(gy, v0, u).is_zero():
        raise UsageError("v0 is not a root modulo u")
    if ypoly_eval(dgy, v0, u).is_zero():
        raise RamifiedPlaceError("derivative vanishes mod u: ramified place")
    v = v0 % u
    prec = 1
    while prec < e:
        prec = min(2 * prec, e)
        mod = u
        for _ in range(prec - 1):
            mod = mod * u
        gv = ypoly_eval(gy, v, mod)
        dv = ypoly_eval(dgy, v, mod)
        v = (v - gv * inverse_mod(dv, mod)) % mod
    return v
