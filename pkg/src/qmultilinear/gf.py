"""Finite fields GF(p^e) with integer-encoded elements.

An element of GF(p^e) is the integer ``sum(c_i * p**i)`` where ``c_i`` is the
coefficient of ``x**i`` in its polynomial representative modulo the fixed
irreducible polynomial.  Multiplication goes through log/antilog tables; all
operations accept Python ints or numpy integer arrays.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import (
    DegreeTooLarge,
    DivideByZero,
    FieldMismatch,
    NotABasis,
    NotASubfield,
    NotPrime,
)

MAX_ORDER = 1 << 16
_ADD_TABLE_LIMIT = 1024


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    i = 2
    while i * i <= p:
        if p % i == 0:
            return False
        i += 1
    return True


def prime_power(q: int):
    """Return ``(p, e)`` with ``q == p**e``, or None when q is not a prime power."""
    if q < 2:
        return None
    p = 2
    while p * p <= q and q % p:
        p += 1
    if q % p:
        p = q
    e, r = 0, q
    while r % p == 0:
        r //= p
        e += 1
    return (p, e) if r == 1 else None


# -- polynomials over GF(p) as coefficient lists, lowest degree first ---------

def _trim(c):
    while len(c) > 1 and c[-1] == 0:
        c.pop()
    return c


def _polymod(a, b, p):
    a = list(a)
    inv_lead = pow(b[-1], p - 2, p)
    db = len(b) - 1
    for i in range(len(a) - 1, db - 1, -1):
        f = a[i] * inv_lead % p
        if f:
            for j in range(db + 1):
                a[i - db + j] = (a[i - db + j] - f * b[j]) % p
    return _trim(a[:db] if len(a) > db else a) or [0]


def _polymulmod(a, b, mod, p):
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return _polymod(out, mod, p)


def _digits(v: int, p: int, n: int) -> list[int]:
    out = []
    for _ in range(n):
        v, r = divmod(v, p)
        out.append(r)
    return out


def _undigits(c, p: int) -> int:
    v = 0
    for x in reversed(c):
        v = v * p + int(x)
    return v


def is_irreducible(poly, p: int) -> bool:
    """Trial division by every monic polynomial of degree 1..deg/2."""
    e = len(poly) - 1
    for d in range(1, e // 2 + 1):
        for low in range(p**d):
            div = _digits(low, p, d) + [1]
            if _polymod(poly, div, p) == [0]:
                return False
    return True


class GF:
    """The finite field GF(p^e); build instances with :func:`field_make`."""

    def __init__(self, p: int, e: int):
        self.p = p
        self.e = e
        self.q = p**e
        q = self.q
        if e == 1:
            self.modpoly = [0, 1]
        else:
            for low in range(1, p**e):
                cand = _digits(low, p, e) + [1]
                if cand[0] and is_irreducible(cand, p):
                    self.modpoly = cand
                    break
        self._build_tables()
        self.elements = np.arange(q, dtype=np.int64)

    # -- construction helpers --------------------------------------------
    def _slow_mul(self, a: int, b: int) -> int:
        if self.e == 1:
            return a * b % self.p
        pa = _digits(a, self.p, self.e)
        pb = _digits(b, self.p, self.e)
        return _undigits(_polymulmod(pa, pb, self.modpoly, self.p), self.p)

    def _order(self, a: int) -> int:
        x, k = a, 1
        while x != 1:
            x = self._slow_mul(x, a)
            k += 1
        return k

    def _build_tables(self):
        q = self.q
        if q == 2:
            self.primitive = 1
        else:
            self.primitive = next(a for a in range(2, q) if self._order(a) == q - 1)
        exp = np.zeros(2 * (q - 1), dtype=np.int64)
        log = np.zeros(q, dtype=np.int64)
        x = 1
        for i in range(q - 1):
            exp[i] = x
            log[x] = i
            x = self._slow_mul(x, self.primitive)
        exp[q - 1:] = exp[: q - 1]
        self.exp = exp
        self.log = log
        self._exp_list = exp.tolist()
        self._log_list = log.tolist()
        if self.e > 1 and self.p > 2 and q <= _ADD_TABLE_LIMIT:
            digs = np.array([_digits(v, self.p, self.e) for v in range(q)])
            w = self.p ** np.arange(self.e)
            s = (digs[:, None, :] + digs[None, :, :]) % self.p
            self._add_table = (s @ w).astype(np.int64)
            neg = ((-digs) % self.p) @ w
            self._neg_table = neg.astype(np.int64)
        else:
            self._add_table = None

    def __repr__(self):
        return f"GF({self.q})" if self.e == 1 else f"GF({self.p}^{self.e})"

    def __reduce__(self):
        return (field_make, (self.p, self.e))

    @property
    def key(self):
        return (self.p, self.e)

    @property
    def is_prime_field(self) -> bool:
        return self.e == 1

    # -- elementwise arithmetic ------------------------------------------
    def add(self, a, b):
        if self.e == 1:
            return (a + b) % self.p
        if self.p == 2:
            return a ^ b
        if self._add_table is not None:
            return self._add_table[a, b]
        return self._digitwise(a, b, 1)

    def _digitwise(self, a, b, sign):
        p = self.p
        out = 0
        w = 1
        for _ in range(self.e):
            out = out + ((a % p + sign * (b % p)) % p) * w
            a = a // p
            b = b // p
            w *= p
        return out

    def neg(self, a):
        if self.e == 1:
            return (-a) % self.p
        if self.p == 2:
            return a
        if self._add_table is not None:
            return self._neg_table[a]
        return self._digitwise(0 * a, a, -1)

    def sub(self, a, b):
        if self.e == 1:
            return (a - b) % self.p
        if self.p == 2:
            return a ^ b
        return self.add(a, self.neg(b))

    def mul(self, a, b):
        if self.e == 1:
            return a * b % self.p
        if isinstance(a, (int, np.integer)) and isinstance(b, (int, np.integer)):
            if a == 0 or b == 0:
                return 0
            return self._exp_list[self._log_list[a] + self._log_list[b]]
        a = np.asarray(a)
        b = np.asarray(b)
        r = self.exp[self.log[a] + self.log[b]]
        return np.where((a == 0) | (b == 0), 0, r)

    def inv(self, a):
        if isinstance(a, (int, np.integer)):
            if a == 0:
                raise DivideByZero("inverse of zero")
            if self.e == 1:
                return pow(int(a), self.p - 2, self.p)
            return self._exp_list[(self.q - 1 - self._log_list[a]) % (self.q - 1)]
        a = np.asarray(a)
        if np.any(a == 0):
            raise DivideByZero("inverse of zero")
        return self.exp[(self.q - 1 - self.log[a]) % (self.q - 1)]

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def power(self, a: int, k: int) -> int:
        if a == 0:
            return 0 if k > 0 else 1
        return self._exp_list[(self._log_list[a] * k) % (self.q - 1)]

    def digits(self, a: int) -> list[int]:
        """Coefficients of the polynomial representative of ``a``, low degree first."""
        return _digits(int(a), self.p, self.e)


@lru_cache(maxsize=None)
def field_make(p: int, e: int = 1) -> GF:
    """The field GF(p^e) with the least monic irreducible modulus (by integer code)."""
    if not is_prime(p):
        raise NotPrime(f"{p} is not prime")
    if e < 1 or e > 16 or p**e > MAX_ORDER:
        raise DegreeTooLarge(f"GF({p}^{e}) exceeds the supported range")
    return GF(p, e)


def field_of_order(q: int) -> GF:
    pe = prime_power(q)
    if pe is None:
        raise NotPrime(f"{q} is not a prime power")
    return field_make(*pe)


@dataclass(frozen=True)
class FieldElem:
    value: int
    field: GF

    def __post_init__(self):
        if not 0 <= self.value < self.field.q:
            raise ValueError(f"{self.value} is not an element of {self.field}")

    def _check(self, other):
        if not isinstance(other, FieldElem) or other.field.key != self.field.key:
            raise FieldMismatch(f"cannot combine {self.field} with {getattr(other, 'field', other)}")

    def __add__(self, other):
        return f_arith(self, other, "add")

    def __sub__(self, other):
        return f_arith(self, other, "sub")

    def __mul__(self, other):
        return f_arith(self, other, "mul")

    def __truediv__(self, other):
        return f_arith(self, other, "div")

    def __int__(self):
        return self.value


def f_arith(a: FieldElem, b: FieldElem, op: str) -> FieldElem:
    a._check(b)
    F = a.field
    if op == "div" and b.value == 0:
        raise DivideByZero("division by zero")
    fn = {"add": F.add, "sub": F.sub, "mul": F.mul, "div": F.div}[op]
    return FieldElem(int(fn(a.value, b.value)), F)


# -- subfields --------------------------------------------------------------

def _check_subfield(big: GF, small: GF) -> int:
    if big.p != small.p or big.e % small.e:
        raise NotASubfield(f"{small} is not a subfield of {big}")
    return big.e // small.e


@lru_cache(maxsize=None)
def _embedding_cached(bkey, skey):
    big, small = field_make(*bkey), field_make(*skey)
    if small.e == 1:
        emb = list(range(small.p))
    else:
        root = None
        for r in range(big.q):
            acc = 0
            for c in reversed(small.modpoly):
                acc = big.add(big.mul(acc, r), c)
            if acc == 0:
                root = r
                break
        pw = [1]
        for _ in range(small.e - 1):
            pw.append(big.mul(pw[-1], root))
        emb = []
        for v in range(small.q):
            acc = 0
            for c, w in zip(small.digits(v), pw):
                acc = big.add(acc, big.mul(c, w))
            emb.append(acc)
    back = {b: s for s, b in enumerate(emb)}
    return tuple(emb), back


def embedding(big: GF, small: GF):
    """Ring embedding of ``small`` into ``big`` as a list indexed by small's elements."""
    _check_subfield(big, small)
    return _embedding_cached(big.key, small.key)[0]


def restrict_to_subfield(big: GF, small: GF, value: int) -> int:
    _check_subfield(big, small)
    back = _embedding_cached(big.key, small.key)[1]
    if value not in back:
        raise NotASubfield(f"{value} does not lie in the image of {small}")
    return back[value]


def f_trace(a: FieldElem, down_to: GF) -> FieldElem:
    """Relative trace of ``a`` to the subfield ``down_to``."""
    big = a.field
    m = _check_subfield(big, down_to)
    s, x = 0, a.value
    for _ in range(m):
        s = big.add(s, x)
        x = big.power(x, down_to.q)
    return FieldElem(restrict_to_subfield(big, down_to, s), down_to)


class ExtensionBasis:
    """A basis of ``big`` over the subfield ``sub``, with coordinate lookup."""

    def __init__(self, big: GF, sub: GF, gammas):
        m = _check_subfield(big, sub)
        gammas = [int(g) for g in gammas]
        if len(gammas) != m:
            raise NotABasis(f"need {m} elements, got {len(gammas)}")
        emb = embedding(big, sub)
        coords = np.full((big.q, m), -1, dtype=np.int64)
        for c in itertools.product(range(sub.q), repeat=m):
            v = 0
            for ci, g in zip(c, gammas):
                v = big.add(v, big.mul(emb[ci], g))
            if coords[v, 0] >= 0:
                raise NotABasis("elements are linearly dependent")
            coords[v] = c
        self.big = big
        self.sub = sub
        self.m = m
        self.gammas = gammas
        self.coords = coords

    def expand(self, x):
        """Coordinates over ``sub``; works elementwise on arrays (adds a last axis)."""
        return self.coords[np.asarray(x, dtype=np.int64)]

    def combine(self, c) -> int:
        emb = embedding(self.big, self.sub)
        v = 0
        for ci, g in zip(c, self.gammas):
            v = self.big.add(v, self.big.mul(emb[int(ci)], g))
        return v


def polynomial_basis(big: GF, sub: GF) -> ExtensionBasis:
    """The basis 1, x, ..., x^(m-1) where x is the class of the variable."""
    m = _check_subfield(big, sub)
    x = big.p if big.e > 1 else 1
    g = [1]
    for _ in range(m - 1):
        g.append(big.mul(g[-1], x))
    return ExtensionBasis(big, sub, g)


def regular_rep(a, basis: ExtensionBasis) -> np.ndarray:
    """Matrix of right multiplication by ``a``: expand(x*a) == expand(x) @ M over ``sub``."""
    a = int(a.value if isinstance(a, FieldElem) else a)
    big = basis.big
    return np.array([basis.expand(big.mul(g, a)) for g in basis.gammas], dtype=np.int64)
