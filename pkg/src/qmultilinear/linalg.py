"""Matrices and subspaces over GF(q).

Matrices are plain ``numpy`` int64 arrays paired with a :class:`~qmultilinear.gf.GF`.
Over GF(2) row reduction runs on rows packed into Python ints.  Subspaces
are stored by their reduced row echelon basis, which makes equality and
hashing canonical.
"""

from __future__ import annotations

import itertools
from functools import lru_cache

import numpy as np

from .errors import AmbientMismatch, BudgetExceeded, FieldMismatch, NotInvertible
from .gf import GF, field_make


def zeros(r: int, c: int) -> np.ndarray:
    return np.zeros((r, c), dtype=np.int64)


def identity(n: int) -> np.ndarray:
    return np.eye(n, dtype=np.int64)


def matmul(A, B, F: GF) -> np.ndarray:
    A = np.asarray(A, dtype=np.int64)
    B = np.asarray(B, dtype=np.int64)
    if F.e == 1:
        return (A @ B) % F.p
    if F.p == 2:
        out = np.zeros((A.shape[0], B.shape[1]), dtype=np.int64)
        for i in range(A.shape[1]):
            out ^= F.mul(A[:, i:i + 1], B[i:i + 1, :])
        return out
    out = np.zeros((A.shape[0], B.shape[1]), dtype=np.int64)
    for i in range(A.shape[1]):
        out = F.add(out, F.mul(A[:, i:i + 1], B[i:i + 1, :]))
    return out


def madd(A, B, F: GF) -> np.ndarray:
    return np.asarray(F.add(np.asarray(A), np.asarray(B)), dtype=np.int64)


def scale(c: int, A, F: GF) -> np.ndarray:
    return np.asarray(F.mul(np.asarray(A), c), dtype=np.int64)


# -- GF(2) packed rows ------------------------------------------------------

def pack_rows(M) -> list[int]:
    """Pack 0/1 rows into ints, column 0 as the most significant bit."""
    M = np.asarray(M, dtype=np.int64)
    c = M.shape[1]
    if c <= 62:
        w = np.left_shift(1, np.arange(c - 1, -1, -1, dtype=np.int64))
        return (M @ w).tolist() if c else [0] * M.shape[0]
    return [int("".join(map(str, row)), 2) for row in M.tolist()]


def unpack_rows(rows, c: int) -> np.ndarray:
    if not rows:
        return zeros(0, c)
    if c <= 62:
        a = np.asarray(rows, dtype=np.int64)
        sh = np.arange(c - 1, -1, -1, dtype=np.int64)
        return (a[:, None] >> sh[None, :]) & 1
    return np.array([[(r >> (c - 1 - j)) & 1 for j in range(c)] for r in rows], dtype=np.int64)


def rref_gf2(rows, ncols: int):
    """Reduced echelon form of packed GF(2) rows; returns (rows, pivot columns)."""
    rows = [r for r in rows if r]
    piv = []
    r = 0
    for c in range(ncols):
        if r == len(rows):
            break
        bit = 1 << (ncols - 1 - c)
        for i in range(r, len(rows)):
            if rows[i] & bit:
                break
        else:
            continue
        rows[r], rows[i] = rows[i], rows[r]
        pr = rows[r]
        for j in range(len(rows)):
            if j != r and rows[j] & bit:
                rows[j] ^= pr
        piv.append(c)
        r += 1
    return rows[:r], piv


def rank_gf2(rows) -> int:
    """Rank of packed GF(2) rows (xor basis, no echelon bookkeeping)."""
    basis = []
    for v in rows:
        for b in basis:
            v = min(v, v ^ b)
        if v:
            basis.append(v)
            basis.sort(reverse=True)
    return len(basis)


# -- generic elimination ------------------------------------------------------

def rref(M, F: GF):
    """Reduced row echelon form without zero rows, and the pivot columns."""
    M = np.asarray(M, dtype=np.int64)
    if M.ndim != 2:
        raise ValueError("expected a matrix")
    rows, cols = M.shape
    if F.q == 2:
        r, piv = rref_gf2(pack_rows(M), cols)
        return unpack_rows(r, cols), piv
    R = M.copy() % F.q if F.e == 1 else M.copy()
    r = 0
    piv = []
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(R[r:, c])[0]
        if len(nz) == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            R[[r, i]] = R[[i, r]]
        R[r] = F.mul(R[r], F.inv(int(R[r, c])))
        col = R[:, c].copy()
        col[r] = 0
        hit = np.nonzero(col)[0]
        if len(hit):
            R[hit] = F.sub(R[hit], F.mul(col[hit, None], R[r][None, :]))
        piv.append(c)
        r += 1
    return R[:r], piv


def rref_rank(M, F: GF):
    R, piv = rref(M, F)
    return R, len(piv)


def rank(M, F: GF) -> int:
    M = np.asarray(M, dtype=np.int64)
    if M.size == 0:
        return 0
    if F.q == 2:
        return rank_gf2(pack_rows(M))
    return len(rref(M, F)[1])


def nullspace(M, F: GF) -> np.ndarray:
    """Basis (as rows) of the right kernel {x : M x = 0}."""
    M = np.asarray(M, dtype=np.int64)
    n = M.shape[1]
    if M.shape[0] == 0:
        return identity(n)
    R, piv = rref(M, F)
    free = [c for c in range(n) if c not in set(piv)]
    out = zeros(len(free), n)
    for t, f in enumerate(free):
        out[t, f] = 1
        for i, pc in enumerate(piv):
            out[t, pc] = F.neg(int(R[i, f]))
    return out


def inverse(A, F: GF) -> np.ndarray:
    A = np.asarray(A, dtype=np.int64)
    n = A.shape[0]
    if A.shape != (n, n):
        raise NotInvertible("not square")
    R, piv = rref(np.hstack([A, identity(n)]), F)
    if piv[:n] != list(range(n)):
        raise NotInvertible("matrix is singular")
    return R[:n, n:].copy()


def is_invertible(A, F: GF) -> bool:
    A = np.asarray(A)
    return A.shape[0] == A.shape[1] and rank(A, F) == A.shape[0]


def batch_rank(mats, F: GF) -> np.ndarray:
    """Ranks of a stack of matrices of shape (B, r, c), eliminated in lockstep."""
    A = np.array(mats, dtype=np.int64, copy=True)
    if A.ndim != 3:
        raise ValueError("expected a stack of matrices")
    if A.shape[2] > A.shape[1]:
        A = np.ascontiguousarray(A.transpose(0, 2, 1))
    B, nr, nc = A.shape
    rk = np.zeros(B, dtype=np.int64)
    if B == 0 or nr == 0 or nc == 0:
        return rk
    rowidx = np.arange(nr)
    for col in range(nc):
        mask = (A[:, :, col] != 0) & (rowidx[None, :] >= rk[:, None])
        has = mask.any(axis=1)
        if not has.any():
            continue
        b = np.nonzero(has)[0]
        pr = mask[b].argmax(axis=1)
        tr = rk[b]
        rowp = A[b, pr].copy()
        A[b, pr] = A[b, tr]
        A[b, tr] = rowp
        pv = A[b, tr, col]
        A[b, tr] = F.mul(A[b, tr], F.inv(pv)[:, None])
        fac = A[b, :, col].copy()
        fac[np.arange(len(b)), tr] = 0
        A[b] = F.sub(A[b], F.mul(fac[:, :, None], A[b, tr][:, None, :]))
        rk[b] += 1
    return rk


# -- subspaces ----------------------------------------------------------------

class Subspace:
    """A subspace of GF(q)^n held by its canonical RREF basis."""

    __slots__ = ("n", "field", "rows", "_hash", "_packed")

    def __init__(self, n: int, field: GF, rows):
        self.n = n
        self.field = field
        self.rows = tuple(tuple(int(x) for x in r) for r in rows)
        self._hash = hash((field.key, n, self.rows))
        self._packed = None

    @classmethod
    def span(cls, generators, field: GF, n: int | None = None) -> "Subspace":
        return subspace_canon(generators, field, n)

    @classmethod
    def zero(cls, n: int, field: GF) -> "Subspace":
        return cls(n, field, ())

    @classmethod
    def full(cls, n: int, field: GF) -> "Subspace":
        return cls(n, field, identity(n).tolist())

    @classmethod
    def coordinate(cls, idx, n: int, field: GF) -> "Subspace":
        """Span of the standard vectors e_i for i in ``idx`` (0-based)."""
        rows = []
        for i in sorted(set(idx)):
            r = [0] * n
            r[i] = 1
            rows.append(r)
        return cls(n, field, rows)

    @property
    def dim(self) -> int:
        return len(self.rows)

    @property
    def matrix(self) -> np.ndarray:
        if not self.rows:
            return zeros(0, self.n)
        return np.array(self.rows, dtype=np.int64)

    @property
    def packed(self) -> list[int]:
        if self._packed is None:
            self._packed = pack_rows(self.matrix) if self.rows else []
        return self._packed

    def _check(self, other):
        if other.n != self.n:
            raise AmbientMismatch(f"ambient dimensions {self.n} and {other.n} differ")
        if other.field.key != self.field.key:
            raise FieldMismatch("subspaces over different fields")

    def __eq__(self, other):
        return (isinstance(other, Subspace) and self._hash == other._hash
                and self.n == other.n and self.rows == other.rows
                and self.field.key == other.field.key)

    def __hash__(self):
        return self._hash

    def __le__(self, other: "Subspace") -> bool:
        """Inclusion of subspaces."""
        self._check(other)
        if self.dim > other.dim:
            return False
        if self.dim == 0:
            return True
        if self.field.q == 2:
            return rank_gf2(other.packed + self.packed) == other.dim
        return rank(np.vstack([other.matrix, self.matrix]), self.field) == other.dim

    def __lt__(self, other):
        return self.dim < other.dim and self <= other

    def __add__(self, other):
        return sum_intersect(self, other)[0]

    def __and__(self, other):
        return sum_intersect(self, other)[1]

    def contains_vector(self, v) -> bool:
        v = np.asarray(v, dtype=np.int64).reshape(1, -1)
        return Subspace.span(np.vstack([self.matrix, v]), self.field, self.n).dim == self.dim

    def perp(self) -> "Subspace":
        return orth_comp(self)

    def vectors(self) -> np.ndarray:
        """Every vector of the subspace, in coefficient-lexicographic order."""
        F = self.field
        if self.dim == 0:
            return zeros(1, self.n)
        coeffs = np.array(list(itertools.product(range(F.q), repeat=self.dim)), dtype=np.int64)
        return matmul(coeffs, self.matrix, F)

    def to_text(self) -> str:
        return "\n".join(format_row(r, self.field.q) for r in self.rows)

    def to_json(self):
        return [format_row(r, self.field.q) for r in self.rows]

    def __repr__(self):
        body = ",".join(format_row(r, self.field.q) for r in self.rows) or "0"
        return f"<{body}>"


def format_row(row, q: int) -> str:
    if q <= 10:
        return "".join(str(int(x)) for x in row)
    return " ".join(str(int(x)) for x in row)


def parse_row(text: str, q: int) -> list[int]:
    text = text.strip()
    if q <= 10 and " " not in text:
        vals = [int(ch) for ch in text]
    else:
        vals = [int(t) for t in text.split()]
    if any(not 0 <= v < q for v in vals):
        from .errors import FormatError
        raise FormatError(f"entry out of range in {text!r}")
    return vals


def subspace_from_text(text: str, n: int, field: GF) -> Subspace:
    rows = [parse_row(line, field.q) for line in text.replace(",", "\n").splitlines() if line.strip()]
    if any(len(r) != n for r in rows):
        from .errors import FormatError
        raise FormatError("row length does not match the ambient dimension")
    return subspace_canon(np.array(rows, dtype=np.int64).reshape(len(rows), n), field, n)


def subspace_canon(generators, field: GF, n: int | None = None) -> Subspace:
    G = np.asarray(generators, dtype=np.int64)
    if G.ndim == 1:
        G = G.reshape(1, -1) if G.size else G.reshape(0, n or 0)
    if n is None:
        n = G.shape[1]
    if G.shape[0] == 0:
        return Subspace(n, field, ())
    if G.shape[1] != n:
        raise AmbientMismatch(f"generators have {G.shape[1]} columns, expected {n}")
    R, _ = rref(G, field)
    return Subspace(n, field, R.tolist())


def orth_comp(U: Subspace) -> Subspace:
    """Orthogonal complement for the standard dot product."""
    if U.dim == 0:
        return Subspace.full(U.n, U.field)
    return subspace_canon(nullspace(U.matrix, U.field), U.field, U.n)


def sum_intersect(U: Subspace, V: Subspace):
    U._check(V)
    F = U.field
    S = subspace_canon(np.vstack([U.matrix, V.matrix]), F, U.n)
    # U ∩ V = (U^⊥ + V^⊥)^⊥
    if U.dim == 0 or V.dim == 0:
        return S, Subspace.zero(U.n, F)
    W = subspace_canon(np.vstack([orth_comp(U).matrix, orth_comp(V).matrix]), F, U.n)
    return S, orth_comp(W)


# -- counting and enumeration -------------------------------------------------

def gaussian_binom(n: int, k: int, q: int) -> int:
    if k < 0 or k > n:
        return 0
    num = den = 1
    for i in range(k):
        num *= q ** (n - i) - 1
        den *= q ** (k - i) - 1
    return num // den


def gl_order(n: int, q: int) -> int:
    out = 1
    for i in range(n):
        out *= q**n - q**i
    return out


def pivot_profiles(n: int, d: int):
    return list(itertools.combinations(range(n), d))


def free_positions(profile, n: int):
    piv = set(profile)
    return [(r, c) for r, p in enumerate(profile) for c in range(p + 1, n) if c not in piv]


def profile_size(profile, n: int, q: int) -> int:
    return q ** len(free_positions(profile, n))


def enum_subspaces(n: int, field: GF, d: int, profiles=None):
    """Every d-dimensional subspace of GF(q)^n exactly once.

    Ordered by pivot profile, then by the free entries in lexicographic
    order.  ``profiles`` restricts the stream to the given profile indices so
    that disjoint workers can share one enumeration.
    """
    allp = pivot_profiles(n, d)
    idx = range(len(allp)) if profiles is None else profiles
    q = field.q
    for pi in idx:
        prof = allp[pi]
        free = free_positions(prof, n)
        base = [[0] * n for _ in range(d)]
        for r, p in enumerate(prof):
            base[r][p] = 1
        for vals in itertools.product(range(q), repeat=len(free)):
            rows = [row[:] for row in base]
            for (r, c), v in zip(free, vals):
                rows[r][c] = v
            yield Subspace(n, field, rows)


def enum_rref_gf2(n: int, d: int, profile):
    """Packed-int RREF bases for one pivot profile over GF(2), as an array (count, d)."""
    free = free_positions(profile, n)
    cnt = 1 << len(free)
    out = np.zeros((cnt, d), dtype=np.int64)
    for r, p in enumerate(profile):
        out[:, r] = 1 << (n - 1 - p)
    vals = np.arange(cnt, dtype=np.int64)
    nf = len(free)
    for t, (r, c) in enumerate(free):
        bit = (vals >> (nf - 1 - t)) & 1
        out[:, r] |= bit << (n - 1 - c)
    return out


def gl_enum(n: int, field: GF, budget: int = 100_000):
    """Every invertible n x n matrix once, rows chosen lexicographically."""
    total = gl_order(n, field.q)
    if total > budget:
        raise BudgetExceeded(f"|GL({n},{field.q})| = {total} exceeds budget {budget}")
    vecs = np.array(list(itertools.product(range(field.q), repeat=n)), dtype=np.int64)

    def rec(chosen):
        if len(chosen) == n:
            yield np.array(chosen, dtype=np.int64)
            return
        span = Subspace.span(np.array(chosen, dtype=np.int64).reshape(len(chosen), n), field, n)
        inside = {tuple(v) for v in span.vectors().tolist()}
        for v in vecs.tolist():
            if tuple(v) not in inside:
                yield from rec(chosen + [v])

    yield from rec([])


def projective_points(n: int, field: GF) -> np.ndarray:
    """Representatives with first nonzero coordinate 1, in lexicographic order."""
    pts = [v for v in itertools.product(range(field.q), repeat=n)
           if any(v) and v[next(i for i, x in enumerate(v) if x)] == 1]
    return np.array(pts, dtype=np.int64).reshape(len(pts), n)


class Lattice:
    """All subspaces of GF(q)^n with index, complement and inclusion tables."""

    def __init__(self, n: int, field: GF, budget: int = 50_000):
        total = sum(gaussian_binom(n, d, field.q) for d in range(n + 1))
        if total > budget:
            raise BudgetExceeded(f"lattice of GF({field.q})^{n} has {total} elements")
        self.n = n
        self.field = field
        self.subspaces = [U for d in range(n + 1) for U in enum_subspaces(n, field, d)]
        self.index = {U: i for i, U in enumerate(self.subspaces)}
        self._perp = None
        self._below = None

    def __len__(self):
        return len(self.subspaces)

    def __iter__(self):
        return iter(self.subspaces)

    def of_dim(self, d: int):
        return [U for U in self.subspaces if U.dim == d]

    @property
    def perp(self) -> list[int]:
        if self._perp is None:
            self._perp = [self.index[orth_comp(U)] for U in self.subspaces]
        return self._perp

    @property
    def below(self) -> list[int]:
        """Bitmask per subspace of the indices of all its subspaces."""
        if self._below is None:
            vecsets = [self._vector_mask(U) for U in self.subspaces]
            self._below = [sum(1 << j for j, vj in enumerate(vecsets) if vj & vi == vj)
                           for vi in vecsets]
        return self._below

    def _vector_mask(self, U: Subspace) -> int:
        q = self.field.q
        w = q ** np.arange(self.n - 1, -1, -1, dtype=np.int64)
        mask = 0
        for code in (U.vectors() @ w).tolist():
            mask |= 1 << code
        return mask

    def vector_masks(self) -> list[int]:
        return [self._vector_mask(U) for U in self.subspaces]


@lru_cache(maxsize=None)
def _lattice_cached(n: int, key):
    return Lattice(n, field_make(*key))


def lattice(n: int, field: GF) -> Lattice:
    return _lattice_cached(n, field.key)


# -- random objects -----------------------------------------------------------

def random_matrix(r: int, c: int, field: GF, rng) -> np.ndarray:
    return rng.integers(0, field.q, size=(r, c)).astype(np.int64)


def random_invertible(n: int, field: GF, rng) -> np.ndarray:
    while True:
        A = random_matrix(n, n, field, rng)
        if rank(A, field) == n:
            return A


def random_subspace(n: int, d: int, field: GF, rng) -> Subspace:
    while True:
        U = subspace_canon(random_matrix(d, n, field, rng), field, n) if d else Subspace.zero(n, field)
        if U.dim == d:
            return U
