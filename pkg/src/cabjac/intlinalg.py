"""Exact integer linear algebra: rank of the relation matrix, Smith normal
form with verified unimodular transforms, the coordinate map onto the product
of cyclic groups, and discrete log solving there.

Everything runs on arbitrary-precision Python ints; entries of the transforms
grow and must never be truncated.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

from .errors import IntegrityError, UsageError
from .relations import Relation

# fixed word-size prime moduli for the fast rank path
_RANK_PRIMES = (2147483647, 2147483629, 2147483587)


@dataclass
class RelationMatrix:
    """t x s integer matrix, columns = relations over the affine factor base."""

    t: int
    columns: Tuple[Dict[int, int], ...]
    sources: Tuple[tuple, ...] = ()

    @property
    def s(self) -> int:
        return len(self.columns)

    @classmethod
    def from_relations(cls, t: int, relations: Sequence[Relation]) -> "RelationMatrix":
        return cls(
            t=t,
            columns=tuple(rel.as_dict() for rel in relations),
            sources=tuple(rel.phi.key() for rel in relations),
        )

    def dense(self) -> List[List[int]]:
        out = [[0] * self.s for _ in range(self.t)]
        for j, col in enumerate(self.columns):
            for i, e in col.items():
                out[i][j] = e
        return out


def _rank_mod_p(dense: List[List[int]], p: int) -> int:
    rows = [[x % p for x in row] for row in dense]
    nrows = len(rows)
    ncols = len(rows[0]) if rows else 0
    rank = 0
    for col in range(ncols):
        piv = None
        for r in range(rank, nrows):
            if rows[r][col]:
                piv = r
                break
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        inv = pow(rows[rank][col], p - 2, p)
        rows[rank] = [x * inv % p for x in rows[rank]]
        for r in range(nrows):
            if r != rank and rows[r][col]:
                c = rows[r][col]
                rows[r] = [(x - c * y) % p for x, y in zip(rows[r], rows[rank])]
        rank += 1
        if rank == nrows:
            break
    return rank


def rank_bareiss(dense: List[List[int]]) -> int:
    """Certified rank by fraction-free elimination over the integers."""
    m = [row[:] for row in dense]
    nrows, ncols = len(m), len(m[0]) if m else 0
    prev = 1
    rank = 0
    row = 0
    for col in range(ncols):
        piv = None
        for r in range(row, nrows):
            if m[r][col]:
                piv = r
                break
        if piv is None:
            continue
        m[row], m[piv] = m[piv], m[row]
        for r in range(row + 1, nrows):
            for c in range(col + 1, ncols):
                m[r][c] = (m[row][col] * m[r][c] - m[r][col] * m[row][c]) // prev
            m[r][col] = 0
        prev = m[row][col]
        rank += 1
        row += 1
        if row == nrows:
            break
    return rank


def integer_rank(matrix) -> int:
    """Rank over Q: agreeing word-size prime moduli, else exact fallback.

    Rank mod p never exceeds the true rank, so the maximum over moduli is a
    lower bound; disagreement forces the certified Bareiss path.
    """
    dense = matrix.dense() if isinstance(matrix, RelationMatrix) else [row[:] for row in matrix]
    if not dense or not dense[0]:
        return 0
    ranks = [_rank_mod_p(dense, p) for p in _RANK_PRIMES]
    if len(set(ranks)) == 1:
        return ranks[0]
    return rank_bareiss(dense)


@dataclass
class SNFResult:
    """T R U = (S | 0) with S = diag(h_r, ..., h_1, 1, ..., 1), h_1 | ... | h_r."""

    factors: Tuple[int, ...]  # h_1 | h_2 | ... | h_r, all > 1
    diag: Tuple[int, ...]
    transform_left: List[List[int]]  # T, t x t
    transform_left_inv: List[List[int]]
    transform_right: List[List[int]]  # U, s x s
    h: int

    @property
    def r(self) -> int:
        return len(self.factors)


def _mat_mul(a: List[List[int]], b: List[List[int]]) -> List[List[int]]:
    n, k = len(a), len(b)
    mm = len(b[0]) if b else 0
    out = [[0] * mm for _ in range(n)]
    for i in range(n):
        ai = a[i]
        oi = out[i]
        for kk in range(k):
            v = ai[kk]
            if v:
                bk = b[kk]
                for j in range(mm):
                    if bk[j]:
                        oi[j] += v * bk[j]
    return out


def _identity(n: int) -> List[List[int]]:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


class _SNFWorker:
    def __init__(self, dense: List[List[int]]):
        self.a = [row[:] for row in dense]
        self.t = len(self.a)
        self.s = len(self.a[0]) if self.a else 0
        self.T = _identity(self.t)
        self.Tinv = _identity(self.t)
        self.U = _identity(self.s)

    # row operations track T (left) and its inverse; column ops track U.

    def swap_rows(self, i, j):
        if i == j:
            return
        self.a[i], self.a[j] = self.a[j], self.a[i]
        self.T[i], self.T[j] = self.T[j], self.T[i]
        for row in self.Tinv:
            row[i], row[j] = row[j], row[i]

    def add_row(self, i, j, c):
        # row_i += c * row_j
        if c == 0:
            return
        self.a[i] = [x + c * y for x, y in zip(self.a[i], self.a[j])]
        self.T[i] = [x + c * y for x, y in zip(self.T[i], self.T[j])]
        for row in self.Tinv:
            row[j] -= c * row[i]

    def neg_row(self, i):
        self.a[i] = [-x for x in self.a[i]]
        self.T[i] = [-x for x in self.T[i]]
        for row in self.Tinv:
            row[i] = -row[i]

    def swap_cols(self, i, j):
        if i == j:
            return
        for row in self.a:
            row[i], row[j] = row[j], row[i]
        for row in self.U:
            row[i], row[j] = row[j], row[i]

    def add_col(self, i, j, c):
        # col_i += c * col_j
        if c == 0:
            return
        for row in self.a:
            row[i] += c * row[j]
        for row in self.U:
            row[i] += c * row[j]

    def _min_pivot(self, k) -> Optional[Tuple[int, int]]:
        best = None
        for i in range(k, self.t):
            row = self.a[i]
            for j in range(k, self.s):
                v = row[j]
                if v:
                    if best is None or abs(v) < best[0]:
                        best = (abs(v), i, j)
                        if best[0] == 1:
                            return (i, j)
        return None if best is None else (best[1], best[2])

    def diagonalize(self):
        k = 0
        while k < self.t:
            piv = self._min_pivot(k)
            if piv is None:
                break
            self.swap_rows(k, piv[0])
            self.swap_cols(k, piv[1])
            dirty = True
            while dirty:
                dirty = False
                for i in range(k + 1, self.t):
                    if self.a[i][k]:
                        q = self.a[i][k] // self.a[k][k]
                        self.add_row(i, k, -q)
                        if self.a[i][k]:
                            self.swap_rows(i, k)
                            dirty = True
                for j in range(k + 1, self.s):
                    if self.a[k][j]:
                        q = self.a[k][j] // self.a[k][k]
                        self.add_col(j, k, -q)
                        if self.a[k][j]:
                            self.swap_cols(j, k)
                            dirty = True
            if self.a[k][k] < 0:
                self.neg_row(k)
            k += 1
        return k  # number of nonzero diagonal entries

    def fix_divisibility(self, rank):
        changed = True
        while changed:
            changed = False
            for i in range(rank - 1):
                d1, d2 = self.a[i][i], self.a[i + 1][i + 1]
                if d2 % d1 != 0:
                    changed = True
                    # fold the pair into (gcd, lcm) by euclidean 2x2 clearing
                    self.add_col(i, i + 1, 1)
                    while self.a[i + 1][i] or self.a[i][i + 1]:
                        if self.a[i + 1][i]:
                            if self.a[i][i] == 0 or abs(self.a[i + 1][i]) < abs(
                                self.a[i][i]
                            ):
                                self.swap_rows(i, i + 1)
                            if self.a[i + 1][i]:
                                q = self.a[i + 1][i] // self.a[i][i]
                                self.add_row(i + 1, i, -q)
                        if self.a[i][i + 1]:
                            if self.a[i][i] == 0 or abs(self.a[i][i + 1]) < abs(
                                self.a[i][i]
                            ):
                                self.swap_cols(i, i + 1)
                            if self.a[i][i + 1]:
                                q = self.a[i][i + 1] // self.a[i][i]
                                self.add_col(i + 1, i, -q)
                    if self.a[i][i] < 0:
                        self.neg_row(i)
                    if self.a[i + 1][i + 1] < 0:
                        self.neg_row(i + 1)

    def reverse_diagonal(self, rank):
        for i in range(rank // 2):
            j = rank - 1 - i
            self.swap_rows(i, j)
            self.swap_cols(i, j)


def smith_normal_form(matrix) -> SNFResult:
    """SNF with transforms, verified by exact multiplication before return.

    Requires full row rank (the caller has already applied the rank check).
    Diagonal ordered per the output convention diag(h_r, ..., h_1, 1, ..., 1).
    """
    if isinstance(matrix, RelationMatrix):
        dense = matrix.dense()
    else:
        dense = [row[:] for row in matrix]
    if not dense or not dense[0]:
        raise UsageError("empty matrix has no Smith normal form here")
    t, s = len(dense), len(dense[0])
    if s < t:
        raise UsageError("matrix must have at least t columns")
    w = _SNFWorker(dense)
    rank = w.diagonalize()
    if rank < t:
        raise UsageError(f"rank {rank} < t = {t}; caller must fail at the rank step")
    w.fix_divisibility(rank)
    w.reverse_diagonal(rank)
    diag = tuple(w.a[i][i] for i in range(t))
    factors = tuple(sorted(d for d in diag if d > 1))
    for i in range(len(factors) - 1):
        if factors[i + 1] % factors[i] != 0:
            raise IntegrityError("invariant factors do not form a chain")
    # exact verification T R U = (S | 0)
    tru = _mat_mul(_mat_mul(w.T, dense), w.U)
    for i in range(t):
        for j in range(s):
            want = diag[i] if i == j else 0
            if tru[i][j] != want:
                raise IntegrityError("transform verification failed: T R U != (S|0)")
    tt = _mat_mul(w.T, w.Tinv)
    for i in range(t):
        for j in range(t):
            if tt[i][j] != (1 if i == j else 0):
                raise IntegrityError("left transform inverse verification failed")
    h = 1
    for f in factors:
        h *= f
    return SNFResult(
        factors=factors,
        diag=diag,
        transform_left=w.T,
        transform_left_inv=w.Tinv,
        transform_right=w.U,
        h=h,
    )


def group_coordinates(snf: SNFResult, vector: Sequence[int]) -> Tuple[int, ...]:
    """Image of an exponent vector in Z_{h_1} x ... x Z_{h_r}.

    The quotient Z^t / col(R) maps through T; coordinate i sits at diagonal
    position r - i (the diagonal is written largest factor first).
    """
    t = len(snf.transform_left)
    if len(vector) != t:
        raise UsageError(f"vector length {len(vector)} != t = {t}")
    w = [sum(row[j] * vector[j] for j in range(t)) for row in snf.transform_left]
    r = snf.r
    return tuple(w[r - 1 - i] % snf.factors[i] for i in range(r))


def coordinate_order(alpha: Sequence[int], moduli: Sequence[int]) -> int:
    """Order of an element given by coordinates in the product group."""
    order = 1
    for a, h in zip(alpha, moduli):
        order = order * (h // math.gcd(a, h)) // math.gcd(order, h // math.gcd(a, h))
    return order


def solve_cyclic_dlog(
    alpha: Sequence[int], beta: Sequence[int], moduli: Sequence[int]
) -> Optional[int]:
    """Least x >= 0 with x*alpha = beta componentwise, or None.

    Per component the solution set is a congruence class; classes are merged
    by the general CRT (non-coprime moduli allowed).
    """
    if len(alpha) != len(beta) or len(alpha) != len(moduli):
        raise UsageError("dimension mismatch")
    x, mod = 0, 1
    for a, b, h in zip(alpha, beta, moduli):
        a %= h
        b %= h
        g = math.gcd(a, h)
        if b % g:
            return None
        mi = h // g
        if mi == 1:
            continue
        xi = (b // g) * pow(a // g, -1, mi) % mi
        gg = math.gcd(mod, mi)
        if (xi - x) % gg:
            return None
        lcm = mod // gg * mi
        step = ((xi - x) // gg * pow(mod // gg, -1, mi // gg)) % (mi // gg)
        x = x + mod * step
        mod = lcm
    return x % mod
