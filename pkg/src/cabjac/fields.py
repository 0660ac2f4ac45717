"""Finite fields F_q = F_{p^k} with q of machine-word size.

Elements are plain Python ints in [0, q).  For an extension field the int
encodes the coefficient vector of the element in base |base field|, least
significant digit first, so constants of the base field embed as themselves.
Multiplication and inversion go through lazily built exp/log tables whenever
the field is small enough; otherwise they fall back to polynomial arithmetic
modulo the defining polynomial.

Extension fields can be stacked: residue fields F_q[X]/(u) used elsewhere in
the package are just extensions with base F_q.
"""

from __future__ import annotations

import random
from typing import Iterator, Optional, Sequence, Tuple

from .errors import UsageError

_TABLE_LIMIT = 1 << 16
_WORD_LIMIT = 1 << 62


def is_probable_prime(n: int) -> bool:
    """Deterministic Miller-Rabin for word-sized n."""
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    d = n - 1
    r = 0
    while d % 2 == 0:
        d //= 2
        r += 1
    # Bases certify all n < 3.3 * 10^24.
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _factor_small(n: int) -> list:
    """Prime factors of n by trial division; n stays small in this package."""
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


class Field:
    """Common interface: elements are ints in [0, order)."""

    order: int
    char: int
    zero = 0
    one = 1

    def add(self, a: int, b: int) -> int:
        raise NotImplementedError

    def sub(self, a: int, b: int) -> int:
        raise NotImplementedError

    def neg(self, a: int) -> int:
        raise NotImplementedError

    def mul(self, a: int, b: int) -> int:
        raise NotImplementedError

    def inv(self, a: int) -> int:
        raise NotImplementedError

    def pow(self, a: int, e: int) -> int:
        """Square-and-multiply; negative exponents invert first."""
        if e < 0:
            a = self.inv(a)
            e = -e
        result = 1
        while e:
            if e & 1:
                result = self.mul(result, a)
            a = self.mul(a, a)
            e >>= 1
        return result

    def random(self, rng: random.Random) -> int:
        return rng.randrange(self.order)

    def random_nonzero(self, rng: random.Random) -> int:
        return 1 + rng.randrange(self.order - 1)

    def elements(self) -> Iterator[int]:
        return iter(range(self.order))

    def descriptor(self) -> dict:
        raise NotImplementedError


class PrimeField(Field):
    def __init__(self, p: int):
        if not is_probable_prime(p):
            raise UsageError(f"{p} is not prime")
        if p >= _WORD_LIMIT:
            raise UsageError("field order does not fit a machine word")
        self.p = p
        self.k = 1
        self.order = p
        self.char = p
        self.modulus = None

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def neg(self, a):
        return -a % self.p

    def mul(self, a, b):
        return a * b % self.p

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inversion of zero")
        return pow(a, self.p - 2, self.p)

    def descriptor(self):
        return {"p": self.p, "k": 1, "field_modulus": None}

    def __repr__(self):
        return f"F_{self.p}"


class ExtensionField(Field):
    """base[t]/(modulus), elements encoded as ints base |base|.

    Residue fields built internally may exceed the machine-word guard that
    applies to ground fields; they then run on the slow polynomial path.
    The exp/log tables are only built for fields flagged as hot (ground
    fields and the enumeration fields of point counting).
    """

    def __init__(self, base: Field, modulus: Sequence[int], want_tables: bool = False):
        modulus = tuple(modulus)
        if len(modulus) < 2 or modulus[-1] != 1:
            raise UsageError("modulus must be monic of degree >= 1")
        if not _irreducible_over(base, modulus):
            raise UsageError("modulus is reducible")
        self.base = base
        self.modulus = modulus
        self.deg = len(modulus) - 1
        self.order = base.order ** self.deg
        self._want_tables = want_tables
        self.char = base.char
        self.p = base.char
        self.k = self.deg * getattr(base, "k", 1)
        self._b = base.order
        # X^deg reduced: -(m_0 + ... + m_{deg-1} t^{deg-1})
        self._top = tuple(base.neg(c) for c in modulus[:-1])
        self._exp: Optional[list] = None
        self._log: Optional[list] = None
        self.generator: Optional[int] = None

    # encoding helpers -------------------------------------------------

    def digits(self, v: int) -> Tuple[int, ...]:
        b = self._b
        out = []
        for _ in range(self.deg):
            out.append(v % b)
            v //= b
        return tuple(out)

    def encode(self, digits: Sequence[int]) -> int:
        v = 0
        for d in reversed(list(digits)):
            v = v * self._b + d
        return v

    # arithmetic -------------------------------------------------------

    def add(self, a, b):
        base, bb = self.base, self._b
        v = 0
        mul = 1
        for _ in range(self.deg):
            v += base.add(a % bb, b % bb) * mul
            a //= bb
            b //= bb
            mul *= bb
        return v

    def sub(self, a, b):
        base, bb = self.base, self._b
        v = 0
        mul = 1
        for _ in range(self.deg):
            v += base.sub(a % bb, b % bb) * mul
            a //= bb
            b //= bb
            mul *= bb
        return v

    def neg(self, a):
        base, bb = self.base, self._b
        v = 0
        mul = 1
        for _ in range(self.deg):
            v += base.neg(a % bb) * mul
            a //= bb
            mul *= bb
        return v

    def _mul_slow(self, a, b):
        base = self.base
        da, db = self.digits(a), self.digits(b)
        prod = [0] * (2 * self.deg - 1)
        for i, x in enumerate(da):
            if x == 0:
                continue
            for j, y in enumerate(db):
                if y:
                    prod[i + j] = base.add(prod[i + j], base.mul(x, y))
        # reduce by the monic modulus
        for i in range(len(prod) - 1, self.deg - 1, -1):
            c = prod[i]
            if c:
                prod[i] = 0
                for j, t in enumerate(self._top):
                    if t:
                        prod[i - self.deg + j] = base.add(
                            prod[i - self.deg + j], base.mul(c, t)
                        )
        return self.encode(prod[: self.deg])

    def mul(self, a, b):
        if a == 0 or b == 0:
            return 0
        if self._exp is None and self._want_tables and self.order <= _TABLE_LIMIT:
            self._build_tables()
        if self._exp is not None:
            return self._exp[self._log[a] + self._log[b]]
        return self._mul_slow(a, b)

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inversion of zero")
        if self._exp is None and self._want_tables and self.order <= _TABLE_LIMIT:
            self._build_tables()
        if self._exp is not None:
            return self._exp[self.order - 1 - self._log[a]]
        return self._inv_slow(a)

    def _inv_slow(self, a):
        # extended Euclid on coefficient vectors over the base field
        base = self.base
        r0 = list(self.modulus)
        r1 = list(self.digits(a))
        s0, s1 = [0], [1]
        while any(r1):
            q, r = _vdivmod(base, r0, r1)
            r0, r1 = r1, r
            s0, s1 = s1, _vsub(base, s0, _vmul(base, q, s1))
        c = _vlead(r0)
        ci = base.inv(c)
        s0 = [base.mul(ci, x) for x in s0]
        s0 = (s0 + [0] * self.deg)[: self.deg]
        return self.encode(s0)

    def _build_tables(self):
        n = self.order
        g = self._find_generator()
        exp = [0] * (2 * (n - 1))
        log = [0] * n
        acc = 1
        for i in range(n - 1):
            exp[i] = acc
            exp[i + n - 1] = acc
            log[acc] = i
            acc = self._mul_slow(acc, g)
        if acc != 1:
            raise AssertionError("generator order mismatch")
        self._exp, self._log = exp, log
        self.generator = g

    def _find_generator(self):
        n1 = self.order - 1
        primes = _factor_small(n1)
        for g in range(2, self.order):
            if all(self._pow_slow(g, n1 // ell) != 1 for ell in primes):
                return g
        raise AssertionError("no generator found")

    def _pow_slow(self, a, e):
        result = 1
        while e:
            if e & 1:
                result = self._mul_slow(result, a)
            a = self._mul_slow(a, a)
            e >>= 1
        return result

    def descriptor(self):
        if isinstance(self.base, PrimeField):
            return {"p": self.p, "k": self.deg, "field_modulus": list(self.modulus)}
        raise UsageError("only ground fields have a serializable descriptor")

    def __repr__(self):
        return f"F_{self.base.order}^{self.deg}"


# raw coefficient-vector helpers over an arbitrary Field --------------------


def _vlead(v):
    for c in reversed(v):
        if c:
            return c
    return 0


def _vstrip(v):
    i = len(v)
    while i > 0 and v[i - 1] == 0:
        i -= 1
    return v[:i]


def _vsub(base, a, b):
    n = max(len(a), len(b))
    a = list(a) + [0] * (n - len(a))
    b = list(b) + [0] * (n - len(b))
    return _vstrip([base.sub(x, y) for x, y in zip(a, b)])


def _vmul(base, a, b):
    a, b = _vstrip(list(a)), _vstrip(list(b))
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x == 0:
            continue
        for j, y in enumerate(b):
            if y:
                out[i + j] = base.add(out[i + j], base.mul(x, y))
    return out


def _vdivmod(base, a, b):
    a = _vstrip(list(a))
    b = _vstrip(list(b))
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    if len(a) < len(b):
        return [], a
    binv = base.inv(b[-1])
    q = [0] * (len(a) - len(b) + 1)
    r = list(a)
    for i in range(len(q) - 1, -1, -1):
        c = base.mul(r[i + len(b) - 1], binv)
        q[i] = c
        if c:
            for j, y in enumerate(b):
                if y:
                    r[i + j] = base.sub(r[i + j], base.mul(c, y))
    return q, _vstrip(r)


def _vpowmod(base, a, e, mod):
    result = [1]
    a = _vdivmod(base, a, mod)[1]
    while e:
        if e & 1:
            result = _vdivmod(base, _vmul(base, result, a), mod)[1]
        a = _vdivmod(base, _vmul(base, a, a), mod)[1]
        e >>= 1
    return result


def _vgcd(base, a, b):
    a, b = _vstrip(list(a)), _vstrip(list(b))
    while b:
        a, b = b, _vdivmod(base, a, b)[1]
    return a


def _irreducible_over(base: Field, f: Sequence[int]) -> bool:
    """Monic f irreducible over base: X^(q^d) = X mod f and no proper subfield root."""
    d = len(f) - 1
    if d == 1:
        return True
    q = base.order
    x = [0, 1]
    if _vdivmod(base, _vsub(base, _vpowmod(base, x, q**d, f), x), f)[1]:
        return False
    for ell in _factor_small(d):
        g = _vgcd(base, _vsub(base, _vpowmod(base, x, q ** (d // ell), f), x), f)
        if len(_vstrip(g)) > 1:
            return False
    return True


def _first_irreducible(base: Field, d: int) -> Tuple[int, ...]:
    """Smallest monic irreducible of degree d in the fixed enumeration order."""
    import itertools

    for tail in itertools.product(range(base.order), repeat=d):
        cand = tuple(tail) + (1,)
        if _irreducible_over(base, cand):
            return cand
    raise AssertionError("no irreducible found")


_field_cache: dict = {}


def FiniteField(p: int, k: int = 1, modulus: Optional[Sequence[int]] = None) -> Field:
    """Ground field F_{p^k}; the modulus is auto-chosen deterministically if omitted."""
    if k < 1:
        raise UsageError("extension degree must be >= 1")
    key = (p, k, tuple(modulus) if modulus else None)
    if key in _field_cache:
        return _field_cache[key]
    prime = _field_cache.get((p, 1, None))
    if prime is None:
        prime = PrimeField(p)
        _field_cache[(p, 1, None)] = prime
    if k == 1:
        field = prime
    else:
        mod = tuple(modulus) if modulus else _first_irreducible(prime, k)
        if len(mod) - 1 != k:
            raise UsageError("modulus degree does not match k")
        field = ExtensionField(prime, mod, want_tables=True)
        if field.order >= _WORD_LIMIT:
            raise UsageError("field order does not fit a machine word")
    _field_cache[key] = field
    return field


_ext_cache: dict = {}


def extension_of(base: Field, modulus: Sequence[int]) -> ExtensionField:
    """Residue field base[t]/(modulus), cached per (base, modulus)."""
    key = (id(base), tuple(modulus))
    if key not in _ext_cache:
        _ext_cache[key] = ExtensionField(base, modulus)
    return _ext_cache[key]


def extension_by_degree(base: Field, d: int) -> Field:
    """F_{q^d} over base F_q with the deterministic smallest modulus.

    Used for whole-field enumeration (point counting), so tables are on.
    """
    if d == 1:
        return base
    key = (id(base), d)
    if key not in _ext_cache:
        _ext_cache[key] = ExtensionField(base, _first_irreducible(base, d), want_tables=True)
    return _ext_cache[key]
