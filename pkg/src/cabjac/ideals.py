"""Independent group law for degree zero divisor classes, via ideal
arithmetic in the coordinate ring O = F_q[X][Y]/(curve).

The affine model is nonsingular, so O is a Dedekind domain and its ideal
class group realizes the Jacobian with the infinite place as base point.
An ideal is a rank-n F_q[X]-lattice stored as an upper triangular Hermite
basis (row i pivots at Y^i, monic diagonal, higher rows reduced).

Reduction uses the star map I -> (f) : I with f the minimal nonzero element
of I under the pole-order weight w(X^i Y^j) = n*i + d*j.  Because infinity
is a single place, the minimal element is unique up to scalars and star
depends only on the ideal class; star(star(I)) is therefore a canonical
class representative, of degree at most g by Riemann-Roch.  This module is
an oracle: correctness outranks speed everywhere.
"""

from __future__ import annotations

import math
import random
from typing import Dict, List, Optional, Sequence, Tuple

from .curve import CurveModel, Divisor, Place
from .errors import BudgetError, IntegrityError, UsageError
from .fields import Field
from .poly import Poly, lift_root, poly_factor, poly_roots

OVec = Tuple[Poly, ...]  # element of O in the basis 1, Y, ..., Y^{n-1}


class JacobianArithmetic:
    def __init__(self, model: CurveModel):
        self.model = model
        self.F: Field = model.field
        self.n = model.n
        self.d = model.d
        # Y^m mod curve for m up to 2n-2
        n, F = self.n, self.F
        minus_f = [(-c) for c in model.y_coeffs[:n]]
        pows: List[List[Poly]] = []
        for m in range(2 * n - 1):
            if m < n:
                row = [Poly.zero(F)] * n
                row[m] = Poly.one(F)
            else:
                prev = pows[m - 1]
                row = [Poly.zero(F)] + prev[: n - 1]
                top = prev[n - 1]
                if not top.is_zero():
                    row = [row[j] + top * minus_f[j] for j in range(n)]
            pows.append(row)
        self._ypow = pows

    # --- O-element helpers -------------------------------------------------

    def o_zero(self) -> OVec:
        return tuple(Poly.zero(self.F) for _ in range(self.n))

    def o_one(self) -> OVec:
        one = [Poly.zero(self.F)] * self.n
        one[0] = Poly.one(self.F)
        return tuple(one)

    def o_from_xpoly(self, a: Poly) -> OVec:
        v = [Poly.zero(self.F)] * self.n
        v[0] = a
        return tuple(v)

    def o_mul(self, a: Sequence[Poly], b: Sequence[Poly]) -> OVec:
        n = self.n
        conv = [Poly.zero(self.F)] * (2 * n - 1)
        for i, x in enumerate(a):
            if x.is_zero():
                continue
            for j, y in enumerate(b):
                if not y.is_zero():
                    conv[i + j] = conv[i + j] + x * y
        out = list(conv[:n])
        for m in range(n, 2 * n - 1):
            c = conv[m]
            if c.is_zero():
                continue
            row = self._ypow[m]
            for j in range(n):
                if not row[j].is_zero():
                    out[j] = out[j] + c * row[j]
        return tuple(out)

    def weight(self, vec: Sequence[Poly]) -> Tuple[int, int]:
        """(pole order at infinity, leading Y-index); weights are distinct
        across Y-indices since gcd(n, d) = 1."""
        best = (-1, -1)
        for j, c in enumerate(vec):
            if not c.is_zero():
                w = self.n * c.degree + self.d * j
                if w > best[0]:
                    best = (w, j)
        return best

    # --- lattices -----------------------------------------------------------

    def hnf(self, rows: Sequence[Sequence[Poly]]) -> Tuple[OVec, ...]:
        """Hermite basis of the lattice spanned by rows; must have rank n."""
        n, F = self.n, self.F
        pool = [list(r) for r in rows if any(not p.is_zero() for p in r)]
        result: List[List[Poly]] = []
        for col in range(n):
            work = [r for r in pool if not r[col].is_zero()]
            pool = [r for r in pool if r[col].is_zero()]
            if not work:
                raise IntegrityError("lattice rank below n in hnf")
            while len(work) > 1:
                work.sort(key=lambda r: r[col].degree)
                r0 = work[0]
                nxt = [r0]
                for r in work[1:]:
                    q = r[col] // r0[col]
                    rr = [a - q * b for a, b in zip(r, r0)]
                    if rr[col].is_zero():
                        if any(not p.is_zero() for p in rr):
                            pool.append(rr)
                    else:
                        nxt.append(rr)
                work = nxt
            piv = work[0]
            c = piv[col].lc
            if c != 1:
                ci = F.inv(c)
                piv = [p.scale(ci) for p in piv]
            result.append(piv)
        for i in range(n - 1, -1, -1):
            for k in range(i):
                q = result[k][i] // result[i][i]
                if not q.is_zero():
                    result[k] = [a - q * b for a, b in zip(result[k], result[i])]
        return tuple(tuple(r) for r in result)

    def ideal_from_generators(self, gens: Sequence[OVec]) -> Tuple[OVec, ...]:
        rows = []
        for gen in gens:
            g = tuple(gen)
            for j in range(self.n):
                rows.append(self.o_mul(g, self._ypow[j]))
        return self.hnf(rows)

    def ideal_mul(self, A: Sequence[OVec], B: Sequence[OVec]) -> Tuple[OVec, ...]:
        rows = [self.o_mul(a, b) for a in A for b in B]
        return self.hnf(rows)

    def ideal_degree(self, M: Sequence[OVec]) -> int:
        return sum(M[i][i].degree for i in range(self.n))

    def unit_ideal(self) -> Tuple[OVec, ...]:
        return self.ideal_from_generators([self.o_one()])

    def minimal_element(self, M: Sequence[OVec]) -> OVec:
        """Weight-minimal nonzero element, by reducing the basis until the
        leading Y-indices are pairwise distinct."""
        F = self.F
        rows = [list(r) for r in M]
        info = [self.weight(r) for r in rows]
        while True:
            by_lead: Dict[int, int] = {}
            clash = None
            for idx, (_, lead) in enumerate(info):
                if lead in by_lead:
                    clash = (by_lead[lead], idx)
                    break
                by_lead[lead] = idx
            if clash is None:
                break
            a, b = clash
            if info[a][0] < info[b][0]:
                a, b = b, a
            wa, ja = info[a]
            wb, _ = info[b]
            e = (wa - wb) // self.n
            ca = rows[a][ja].lc
            cb = rows[b][ja].lc
            c = F.mul(ca, F.inv(cb))
            mono = Poly.monomial(F, e, c)
            rows[a] = [x - mono * y for x, y in zip(rows[a], rows[b])]
            info[a] = self.weight(rows[a])
            if info[a][0] < 0:
                raise IntegrityError("basis row vanished during weight reduction")
        best = min(range(len(rows)), key=lambda i: info[i][0])
        return tuple(rows[best])

    # --- star reduction -----------------------------------------------------

    def _reduce_mod(self, hnf_rows: Sequence[OVec], vec: Sequence[Poly]) -> List[Poly]:
        out = list(vec)
        for i in range(self.n):
            q = out[i] // hnf_rows[i][i]
            if not q.is_zero():
                out = [a - q * b for a, b in zip(out, hnf_rows[i])]
        return out

    def star(self, M: Sequence[OVec]) -> Tuple[OVec, ...]:
        """(f) : M for the minimal f in M; equals f * M^{-1}, the canonical
        representative of the inverse class."""
        F = self.F
        n = self.n
        f = self.minimal_element(M)
        wf, _ = self.weight(f)
        Ff = self.ideal_from_generators([f])
        dims = [Ff[j][j].degree for j in range(n)]
        tdim = sum(dims)
        if tdim != wf:
            raise IntegrityError("principal ideal degree differs from pole order")
        if tdim == 0:
            return self.unit_ideal()
        basis = [(a, j) for j in range(n) for a in range(dims[j])]
        pos = {m: idx for idx, m in enumerate(basis)}

        def coords(vec: Sequence[Poly]) -> List[int]:
            red = self._reduce_mod(Ff, vec)
            out = [0] * tdim
            for j in range(n):
                for a, c in enumerate(red[j].c):
                    if c:
                        out[pos[(a, j)]] = c
            return out

        # stacked multiplication maps T -> T^n for the basis rows of M
        mat: List[List[int]] = []
        for a, j in basis:
            mono = [Poly.zero(F)] * n
            mono[j] = Poly.monomial(F, a)
            mono = tuple(mono)
            row: List[int] = []
            for b in M:
                row.extend(coords(self.o_mul(mono, b)))
            mat.append(row)
        kernel = _left_kernel_mod_p(F, mat)
        lifts: List[OVec] = []
        for kv in kernel:
            acc = [dict() for _ in range(n)]
            for idx, c in enumerate(kv):
                if c:
                    a, j = basis[idx]
                    acc[j][a] = c
            lifts.append(
                tuple(
                    Poly(F, [acc[j].get(i, 0) for i in range(max(acc[j]) + 1)])
                    if acc[j]
                    else Poly.zero(F)
                    for j in range(n)
                )
            )
        J = self.hnf(list(lifts) + list(Ff))
        if self.ideal_degree(J) != wf - self.ideal_degree(M):
            raise IntegrityError("ideal quotient degree mismatch")
        return J

    def canonical(self, M: Sequence[OVec]) -> Tuple[OVec, ...]:
        return self.star(self.star(M))


def _left_kernel_mod_p(F: Field, mat: List[List[int]]) -> List[List[int]]:
    """Basis of {v : v * mat = 0} over the field F (entries are F-elements)."""
    rows = len(mat)
    if rows == 0:
        return []
    cols = len(mat[0])
    # augment with identity to track row operations
    aug = [list(mat[i]) + [1 if k == i else 0 for k in range(rows)] for i in range(rows)]
    pivot_row = 0
    for col in range(cols):
        sel = None
        for r in range(pivot_row, rows):
            if aug[r][col] != 0:
                sel = r
                break
        if sel is None:
            continue
        aug[pivot_row], aug[sel] = aug[sel], aug[pivot_row]
        inv = F.inv(aug[pivot_row][col])
        aug[pivot_row] = [F.mul(inv, x) for x in aug[pivot_row]]
        for r in range(rows):
            if r != pivot_row and aug[r][col] != 0:
                c = aug[r][col]
                aug[r] = [F.sub(x, F.mul(c, y)) for x, y in zip(aug[r], aug[pivot_row])]
        pivot_row += 1
        if pivot_row == rows:
            break
    return [row[cols:] for row in aug[pivot_row:]]


class IdealClass:
    """Canonical reduced representative of a divisor class (degree <= genus)."""

    __slots__ = ("jac", "matrix", "degree")

    def __init__(self, jac: JacobianArithmetic, matrix: Tuple[OVec, ...]):
        self.jac = jac
        self.matrix = matrix
        self.degree = jac.ideal_degree(matrix)

    def key(self) -> tuple:
        return tuple(tuple(p.c for p in row) for row in self.matrix)

    def __eq__(self, other):
        return isinstance(other, IdealClass) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def is_identity(self) -> bool:
        return self.degree == 0

    def __repr__(self):
        return f"IdealClass(deg={self.degree})"


class JacobianGroup:
    """Class group operations on canonical representatives."""

    def __init__(self, model: CurveModel):
        self.model = model
        self.jac = JacobianArithmetic(model)

    def identity(self) -> IdealClass:
        return IdealClass(self.jac, self.jac.unit_ideal())

    def from_ideal(self, M: Sequence[OVec]) -> IdealClass:
        return IdealClass(self.jac, self.jac.canonical(M))

    def ideal_from_divisor(self, divisor) -> Tuple[OVec, ...]:
        """Integral ideal of an effective affine divisor (no reduction)."""
        items = divisor.items()
        jac = self.jac
        F = self.model.field
        acc = jac.unit_ideal()
        for place, e in items:
            if place.kind != "affine":
                raise UsageError("divisor must be affine")
            if e < 0:
                raise UsageError("divisor must be effective")
            gen_u = jac.o_from_xpoly(place.u)
            gen_yv = [Poly.zero(F)] * jac.n
            gen_yv[0] = -place.v
            gen_yv[1] = Poly.one(F)
            P = jac.ideal_from_generators([gen_u, tuple(gen_yv)])
            acc = self._ideal_pow_mul(acc, P, e)
        return acc

    def _ideal_pow_mul(self, acc, P, e):
        jac = self.jac
        sq = P
        while e:
            if e & 1:
                acc = jac.ideal_mul(acc, sq)
            e >>= 1
            if e:
                sq = jac.ideal_mul(sq, sq)
        return acc

    def class_from_divisor(self, divisor) -> IdealClass:
        return self.from_ideal(self.ideal_from_divisor(divisor))

    def class_from_place(self, place: Place) -> IdealClass:
        return self.class_from_divisor(Divisor({place: 1}))

    def add(self, A: IdealClass, B: IdealClass) -> IdealClass:
        M = self.jac.ideal_mul(A.matrix, B.matrix)
        return IdealClass(self.jac, self.jac.canonical(M))

    def neg(self, A: IdealClass) -> IdealClass:
        return IdealClass(self.jac, self.jac.star(A.matrix))

    def scalar_mul(self, A: IdealClass, m: int) -> IdealClass:
        if m < 0:
            return self.scalar_mul(self.neg(A), -m)
        result = self.identity()
        sq = A
        while m:
            if m & 1:
                result = self.add(result, sq)
            m >>= 1
            if m:
                sq = self.add(sq, sq)
        return result

    def sub(self, A: IdealClass, B: IdealClass) -> IdealClass:
        return self.add(A, self.neg(B))

    # --- divisor extraction -------------------------------------------------

    def decompose_ideal(self, M: Sequence[OVec]) -> Optional[Dict[Place, int]]:
        """Places and exponents of the ideal's divisor, or None when support
        involves ramified or higher-inertia places (degree bookkeeping must
        balance exactly, else the ideal is rejected rather than guessed)."""
        jac = self.jac
        F = self.model.field
        det = Poly.one(F)
        for i in range(jac.n):
            det = det * M[i][i]
        if det.is_zero():
            raise IntegrityError("ideal with zero determinant")
        out: Dict[Place, int] = {}
        for u, eu in poly_factor(det)[1]:
            acc = 0
            for v, mult in _curve_roots_mod(self.model, u):
                if mult != 1:
                    continue
                place = Place.affine(u, v)
                val = self._ideal_valuation(M, u, v, eu + 1)
                if val > 0:
                    out[place] = val
                    acc += val
            if acc != eu:
                return None
        return out

    def _ideal_valuation(self, M, u: Poly, v: Poly, cap: int) -> int:
        """min over basis rows of the P-adic valuation at P = (u, Y - v)."""
        cy = self.model.curve_ypoly()
        vlift = lift_root(cy, u, v, cap)
        mod = u
        for _ in range(cap - 1):
            mod = mod * u
        best = cap
        for row in M:
            z = Poly.zero(self.model.field)
            ypow = Poly.one(self.model.field)
            for j in range(self.jac.n):
                if not row[j].is_zero():
                    z = (z + row[j] * ypow) % mod
                ypow = ypow * vlift % mod
            val = 0
            if z.is_zero():
                val = cap
            else:
                while val < cap:
                    q, r = divmod(z, u)
                    if not r.is_zero():
                        break
                    z = q
                    val += 1
            best = min(best, val)
            if best == 0:
                return 0
        return best

    def prime_ideals_up_to(self, bound: int) -> List[Tuple[Tuple[OVec, ...], int]]:
        """All affine prime ideals of degree <= bound, any inertia degree or
        ramification, as (hnf matrix, degree).  The coordinate ring is the
        maximal order, so factoring the curve polynomial in each residue
        field gives the full splitting (Dedekind-Kummer)."""
        from .poly import irreducibles_up_to
        from .fields import extension_of

        jac = self.jac
        F = self.model.field
        n = jac.n
        out = []
        for u in irreducibles_up_to(F, bound):
            if u.degree == 1:
                K: Field = F
                xbar = F.neg(u.c[0])
            else:
                K = extension_of(F, u.c)
                xbar = K.encode((0, 1))
            h = Poly(K, [c.eval(xbar, K) for c in self.model.y_coeffs])
            for gbar, _mult in poly_factor(h)[1]:
                f_deg = gbar.degree
                if u.degree * f_deg > bound:
                    continue

                def lift_coeff(c):
                    if u.degree == 1:
                        return Poly.const(F, c)
                    return Poly(F, K.digits(c))

                if f_deg < n:
                    vec = [Poly.zero(F)] * n
                    for j in range(f_deg):
                        vec[j] = lift_coeff(gbar.c[j])
                    vec[f_deg] = Poly.one(F)
                else:
                    # monic degree-n factor: lift minus the curve polynomial
                    vec = [
                        lift_coeff(gbar.c[j]) - self.model.y_coeffs[j]
                        for j in range(n)
                    ]
                P = jac.ideal_from_generators(
                    [jac.o_from_xpoly(u), tuple(vec)]
                )
                deg = jac.ideal_degree(P)
                if deg != u.degree * f_deg:
                    raise IntegrityError("prime ideal degree mismatch")
                out.append((P, deg))
        return out

    # --- generic group algorithms --------------------------------------------

    def order_of(self, A: IdealClass, group_order: int) -> int:
        """Order of A given a multiple of it (the class number)."""
        order = group_order
        for p in _prime_divisors(group_order):
            while order % p == 0 and self.scalar_mul(A, order // p).is_identity():
                order //= p
        return order

    def brute_force_dlog(
        self, base: IdealClass, target: IdealClass, order_bound: int, table_limit: int = 1 << 20
    ) -> Optional[int]:
        """Baby-step giant-step: least x >= 0 with x*base = target, or None."""
        if target.is_identity():
            return 0
        m = math.isqrt(order_bound) + 1
        if m > table_limit:
            raise BudgetError(f"baby step table of size {m} exceeds the limit")
        baby: Dict[tuple, int] = {}
        cur = self.identity()
        for j in range(m):
            baby.setdefault(cur.key(), j)
            cur = self.add(cur, base)
        giant = self.neg(cur)  # -m * base
        gamma = target
        for i in range(m + 1):
            j = baby.get(gamma.key())
            if j is not None:
                x = i * m + j
                if 0 <= x <= order_bound and self.scalar_mul(base, x) == target:
                    return x
            gamma = self.add(gamma, giant)
        return None


def _curve_roots_mod(model: CurveModel, u: Poly) -> List[Tuple[Poly, int]]:
    """Roots (with multiplicity) of the curve polynomial over F_q[X]/(u),
    returned as polynomials v of degree < deg u."""
    from .fields import extension_of

    F = model.field
    if u.degree == 1:
        K: Field = F
        xbar = F.neg(u.c[0])
    else:
        K = extension_of(F, u.c)
        xbar = K.encode((0, 1))
    h = Poly(K, [c.eval(xbar, K) for c in model.y_coeffs])
    out = []
    for ybar, mult in poly_roots(h):
        if u.degree == 1:
            v = Poly.const(F, ybar)
        else:
            v = Poly(F, K.digits(ybar))
        out.append((v, mult))
    return out


def _prime_divisors(n: int) -> List[int]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        out.append(n)
    return out
