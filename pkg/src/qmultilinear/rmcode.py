"""Matrix and vector rank-metric codes."""

from __future__ import annotations

import itertools
import json
from fractions import Fraction

import numpy as np

from . import linalg as la
from .errors import (
    AmbientMismatch,
    BadIndexSet,
    BudgetExceeded,
    EmptyCode,
    FormatError,
    IdealizerTooLarge,
    NotInvertible,
    ShapeMismatch,
)
from .gf import GF, ExtensionBasis, embedding, field_of_order
from .linalg import Subspace

ENUM_BUDGET = 1 << 24
IDEALIZER_CAP = 1 << 20
_CHUNK = 1 << 14


class MatrixCode:
    """An F_q-linear subspace of n x m matrices, kept by a canonical basis.

    The basis is the reduced echelon form of the row-major flattening, so two
    codes compare equal exactly when they are the same subspace.
    """

    def __init__(self, n: int, m: int, field: GF, flat):
        self.n = n
        self.m = m
        self.field = field
        self.flat = np.asarray(flat, dtype=np.int64).reshape(-1, n * m)

    @property
    def k(self) -> int:
        return self.flat.shape[0]

    @property
    def basis(self) -> np.ndarray:
        return self.flat.reshape(self.k, self.n, self.m)

    @property
    def q(self) -> int:
        return self.field.q

    def __eq__(self, other):
        return (isinstance(other, MatrixCode) and (self.n, self.m) == (other.n, other.m)
                and self.field.key == other.field.key and np.array_equal(self.flat, other.flat))

    def __hash__(self):
        return hash((self.n, self.m, self.field.key, self.flat.tobytes()))

    def __repr__(self):
        return f"MatrixCode(F_{self.q}-[{self.n}x{self.m}, {self.k}])"

    def __le__(self, other: "MatrixCode") -> bool:
        if self.k == 0:
            return True
        return la.rank(np.vstack([other.flat, self.flat]), self.field) == other.k

    def contains(self, M) -> bool:
        M = np.asarray(M, dtype=np.int64).reshape(1, -1)
        return la.rank(np.vstack([self.flat, M]), self.field) == self.k

    def codewords(self, chunk: int = _CHUNK, budget: int = ENUM_BUDGET):
        """Yield arrays of shape (c, n, m) covering all q^k codewords once."""
        total = self.q ** self.k
        if total > budget:
            raise BudgetExceeded(f"{total} codewords exceed budget {budget}")
        F = self.field
        coeffs = itertools.product(range(F.q), repeat=self.k)
        while True:
            block = list(itertools.islice(coeffs, chunk))
            if not block:
                return
            c = np.array(block, dtype=np.int64).reshape(len(block), self.k)
            words = la.matmul(c, self.flat, F) if self.k else np.zeros((len(block), self.n * self.m), dtype=np.int64)
            yield words.reshape(len(block), self.n, self.m)

    # -- serialization ------------------------------------------------------
    def to_text(self) -> str:
        head = f"{self.q} {self.n} {self.m} {self.k}"
        blocks = ["\n".join(la.format_row(r, self.q) for r in B) for B in self.basis.tolist()]
        return head + ("\n" + "\n\n".join(blocks) if blocks else "") + "\n"

    @classmethod
    def from_text(cls, text: str) -> "MatrixCode":
        lines = text.strip().splitlines()
        if not lines:
            raise FormatError("empty code file")
        try:
            q, n, m, k = map(int, lines[0].split())
        except ValueError as exc:
            raise FormatError(f"bad header {lines[0]!r}") from exc
        F = field_of_order(q)
        rows = [la.parse_row(line, q) for line in lines[1:] if line.strip()]
        if len(rows) != k * n or any(len(r) != m for r in rows):
            raise FormatError("block layout does not match header")
        gens = np.array(rows, dtype=np.int64).reshape(k, n, m)
        return code_make(n, m, F, gens)

    def to_json(self) -> dict:
        return {"q": self.q, "n": self.n, "m": self.m, "k": self.k, "basis": self.basis.tolist()}

    @classmethod
    def from_json(cls, obj) -> "MatrixCode":
        if isinstance(obj, str):
            obj = json.loads(obj)
        F = field_of_order(obj["q"])
        gens = np.array(obj["basis"], dtype=np.int64).reshape(-1, obj["n"], obj["m"])
        return code_make(obj["n"], obj["m"], F, gens)


def code_make(n: int, m: int, field: GF, generators) -> MatrixCode:
    gens = [np.asarray(g, dtype=np.int64) for g in generators]
    for g in gens:
        if g.shape != (n, m):
            raise ShapeMismatch(f"generator of shape {g.shape}, expected {(n, m)}")
    if not gens:
        return MatrixCode(n, m, field, np.zeros((0, n * m), dtype=np.int64))
    R, _ = la.rref(np.stack(gens).reshape(len(gens), n * m), field)
    return MatrixCode(n, m, field, R)


def zero_code(n: int, m: int, field: GF) -> MatrixCode:
    return code_make(n, m, field, [])


def full_code(n: int, m: int, field: GF) -> MatrixCode:
    return MatrixCode(n, m, field, la.identity(n * m))


def random_code(n: int, m: int, k: int, field: GF, rng) -> MatrixCode:
    while True:
        C = code_make(n, m, field, list(la.random_matrix(k, n * m, field, rng).reshape(k, n, m)))
        if C.k == k:
            return C


# -- C(U) and the induced rank function ---------------------------------------

def _annihilator_system(C: MatrixCode, W) -> np.ndarray:
    """Columns indexed by basis matrices; row block (s, l) holds (W B_i)[s, l]."""
    F = C.field
    W = np.asarray(W, dtype=np.int64)
    if F.e == 1:
        prods = np.einsum("sn,knm->ksm", W, C.basis) % F.p
    else:
        prods = np.stack([la.matmul(W, B, F) for B in C.basis])
    return prods.reshape(C.k, -1).T


def c_sub(C: MatrixCode, U: Subspace) -> MatrixCode:
    """The subcode of codewords whose column space lies in U."""
    if U.n != C.n:
        raise AmbientMismatch(f"subspace of F^{U.n} for a code with n = {C.n}")
    if C.k == 0 or U.dim == C.n:
        return C
    W = la.orth_comp(U).matrix
    S = _annihilator_system(C, W)
    coeffs = la.nullspace(S, C.field)
    if coeffs.shape[0] == 0:
        return zero_code(C.n, C.m, C.field)
    gens = la.matmul(coeffs, C.flat, C.field).reshape(-1, C.n, C.m)
    return code_make(C.n, C.m, C.field, list(gens))


def c_sub_dim(C: MatrixCode, U: Subspace) -> int:
    if U.n != C.n:
        raise AmbientMismatch(f"subspace of F^{U.n} for a code with n = {C.n}")
    if C.k == 0 or U.dim == C.n:
        return C.k
    S = _annihilator_system(C, la.orth_comp(U).matrix)
    return C.k - la.rank(S, C.field)


def rho_c(C: MatrixCode, U: Subspace) -> Fraction:
    return Fraction(C.k - c_sub_dim(C, la.orth_comp(U)), C.m)


# -- distances and distributions ----------------------------------------------

def rank_distribution(C: MatrixCode, budget: int = ENUM_BUDGET) -> list[int]:
    N = min(C.n, C.m)
    A = [0] * (N + 1)
    for words in C.codewords(budget=budget):
        ranks = la.batch_rank(words, C.field)
        for r, c in zip(*np.unique(ranks, return_counts=True)):
            A[int(r)] += int(c)
    return A


def singleton_bound(n: int, m: int, d: int) -> int:
    return max(n, m) * (min(n, m) - d + 1)


def min_distance(C: MatrixCode, budget: int = ENUM_BUDGET) -> int:
    if C.k == 0:
        raise EmptyCode("minimum distance of the zero code")
    A = rank_distribution(C, budget)
    d = next(i for i in range(1, len(A)) if A[i])
    assert C.k <= singleton_bound(C.n, C.m, d), "Singleton bound violated"
    return d


def dual(C: MatrixCode) -> MatrixCode:
    """Dual for the trace form Tr(M N^T), i.e. the entrywise dot product."""
    if C.k == 0:
        return full_code(C.n, C.m, C.field)
    K = la.nullspace(C.flat, C.field)
    return code_make(C.n, C.m, C.field, list(K.reshape(-1, C.n, C.m)))


def macwilliams_coefficient(j: int, r: int, t: int, n: int, m: int, q: int) -> Fraction:
    """Weight of A_j(C^⊥) in the right-hand side of the identity for a given r."""
    N, M = min(n, m), max(n, m)
    total = Fraction(0)
    for nu in range(j, r + 1):
        prod = 1
        for s in range(nu):
            prod *= q**nu - q**s
        total += (Fraction(q) ** (t - M * nu) * la.gaussian_binom(N - j, nu - j, q)
                  * la.gaussian_binom(r, nu, q) * prod)
    return total


def macwilliams_sides(A, A_dual, t: int, n: int, m: int, q: int, r: int):
    N = min(n, m)
    lhs = sum(q ** ((N - i) * r) * A[i] for i in range(N + 1))
    rhs = sum(A_dual[j] * macwilliams_coefficient(j, r, t, n, m, q) for j in range(r + 1))
    return lhs, rhs


def macwilliams_verify(C: MatrixCode, r: int, budget: int = ENUM_BUDGET):
    """Both sides of the rank MacWilliams identity, using brute-force distributions."""
    N = min(C.n, C.m)
    if not 0 <= r <= N:
        raise ValueError(f"r must lie in [0, {N}]")
    A = rank_distribution(C, budget)
    B = rank_distribution(dual(C), budget)
    lhs, rhs = macwilliams_sides(A, B, C.k, C.n, C.m, C.q, r)
    if isinstance(rhs, Fraction) and rhs.denominator == 1:
        rhs = int(rhs)
    return lhs, rhs, lhs == rhs


# -- restriction and shortening -----------------------------------------------

def restrict_shorten(C: MatrixCode, A, I, mode: str = "restrict", axis: str = "rows") -> MatrixCode:
    """Row (or column) restricted / shortened code for an invertible A and 0-based indices I."""
    F = C.field
    side = C.n if axis == "rows" else C.m
    A = np.asarray(A, dtype=np.int64)
    I = sorted(set(int(i) for i in I))
    if not I or len(I) >= side or I[0] < 0 or I[-1] >= side:
        raise BadIndexSet(f"need 0 < |I| < {side} with indices in range")
    if A.shape != (side, side) or not la.is_invertible(A, F):
        raise NotInvertible("transform must be invertible of matching size")
    if axis == "rows":
        moved = [la.matmul(A, B, F) for B in C.basis]
    elif axis == "cols":
        moved = [la.matmul(B, A, F).T for B in C.basis]
    else:
        raise ValueError("axis must be 'rows' or 'cols'")
    rest = [i for i in range(side) if i not in I]
    if mode == "shorten" and moved:
        S = np.stack([M[rest] for M in moved]).reshape(len(moved), -1).T
        coeffs = la.nullspace(S, F)
        moved = [la.matmul(c[None, :], np.stack(moved).reshape(len(moved), -1), F).reshape(side, -1)
                 for c in coeffs]
    elif mode != "restrict" and mode != "shorten":
        raise ValueError("mode must be 'restrict' or 'shorten'")
    out = [M[I] for M in moved]
    if axis == "cols":
        out = [M.T for M in out]
        return code_make(C.n, len(I), F, out)
    return code_make(len(I), C.m, F, out)


# -- right idealizer ----------------------------------------------------------

def right_idealizer_basis(C: MatrixCode) -> np.ndarray:
    """Basis of {B in F^(m x m) : C B ⊆ C}, as an array (dim, m, m)."""
    F, n, m = C.field, C.n, C.m
    H = la.nullspace(C.flat, F).reshape(-1, n, m) if C.k else np.zeros((0, n, m), dtype=np.int64)
    if C.k == 0 or H.shape[0] == 0:
        return la.identity(m * m).reshape(m * m, m, m)
    rows = []
    for M in C.basis:
        for h in H:
            rows.append(la.matmul(M.T, h, F).reshape(-1))
    return la.nullspace(np.array(rows, dtype=np.int64), F).reshape(-1, m, m)


def divisors_above_one(m: int):
    return [e for e in range(2, m + 1) if m % e == 0]


def _generates_field(X, e: int, F: GF) -> bool:
    """True iff F_q[X] is a field with q^e elements."""
    m = X.shape[0]
    powers = [la.identity(m)]
    for _ in range(e):
        powers.append(la.matmul(powers[-1], X, F))
    flat = np.stack([P.reshape(-1) for P in powers])
    if la.rank(flat[:e], F) != e or la.rank(flat, F) != e:
        return False
    coeffs = np.array(list(itertools.product(range(F.q), repeat=e))[1:], dtype=np.int64)
    elems = la.matmul(coeffs, flat[:e], F).reshape(-1, m, m)
    return bool(np.all(la.batch_rank(elems, F) == m))


def right_idealizer(C: MatrixCode, cap: int = IDEALIZER_CAP):
    """Idealizer basis and, for each divisor e > 1 of m, whether it holds a copy of GF(q^e)."""
    F, m = C.field, C.m
    R = right_idealizer_basis(C)
    dimR = R.shape[0]
    flags = {}
    if dimR == m * m:
        return R, {e: True for e in divisors_above_one(m)}
    if F.q ** dimR > cap:
        raise IdealizerTooLarge(f"|R(C)| = {F.q}^{dimR} exceeds the cap")
    Rflat = R.reshape(dimR, -1)
    elems = None
    if dimR:
        coeffs = np.array(list(itertools.product(range(F.q), repeat=dimR)), dtype=np.int64)
        elems = la.matmul(coeffs, Rflat, F).reshape(-1, m, m)
        invertible = la.batch_rank(elems, F) == m
    for e in divisors_above_one(m):
        found = False
        if elems is not None:
            for X in elems[invertible]:
                if _generates_field(X, e, F):
                    found = True
                    break
        flags[e] = found
    return R, flags


def is_right_linear(C: MatrixCode) -> bool:
    """Right F_{q^m}-linearity: the idealizer contains a copy of GF(q^m)."""
    if C.m == 1:
        return True
    return right_idealizer(C)[1][C.m]


# -- vector codes ---------------------------------------------------------------

class VectorCode:
    """An F_{q^m}-linear code given by a generator matrix over the big field."""

    def __init__(self, G, big: GF, sub: GF):
        G = np.asarray(G, dtype=np.int64)
        if G.ndim == 1:
            G = G.reshape(1, -1)
        self.G = G
        self.big = big
        self.sub = sub
        self.n = G.shape[1]
        self.m = big.e // sub.e
        R, piv = la.rref(G, big) if G.shape[0] else (G, [])
        if len(piv) != G.shape[0]:
            raise ValueError("generator matrix must have full row rank")

    @property
    def K(self) -> int:
        return self.G.shape[0]

    def rank(self, W: Subspace) -> int:
        """K minus the F_{q^m}-dimension of C(W^⊥), computed over the big field."""
        if self.K == 0:
            return 0
        Wp = la.orth_comp(W)
        Y = la.orth_comp(Wp).matrix
        if Y.shape[0] == 0:
            return 0
        emb = np.asarray(embedding(self.big, self.sub))
        GY = la.matmul(self.G, emb[Y].T, self.big)
        # C(W^⊥) = {λG : λ G Y^T = 0}
        return self.K - (self.K - la.rank(GY, self.big))


def expand_vector_code(V: VectorCode, basis: ExtensionBasis) -> MatrixCode:
    """The matrix code {Γ(x) : x in V}, Γ the coordinate expansion in ``basis``."""
    n, m = V.n, basis.m
    if V.K == 0:
        return zero_code(n, m, basis.sub)
    gens = []
    for g in V.G:
        for gamma in basis.gammas:
            x = V.big.mul(g, gamma)
            gens.append(basis.expand(x))
    return code_make(n, m, basis.sub, gens)


def is_almost_affine(C: MatrixCode, m_block: int | None = None, budget: int = 50_000):
    """Check that every dim C(U) is a multiple of the block size; return a witness otherwise."""
    m_block = C.m if m_block is None else m_block
    L = la.Lattice(C.n, C.field, budget) if C.n > 4 else la.lattice(C.n, C.field)
    for U in L:
        if c_sub_dim(C, U) % m_block:
            return False, U
    return True, None


def expand_additive(vectors, basis: ExtensionBasis) -> MatrixCode:
    """F_q-span of the expansions Γ(x) of the given vectors over the big field."""
    vectors = np.asarray(vectors, dtype=np.int64)
    if vectors.ndim == 1:
        vectors = vectors.reshape(1, -1)
    n = vectors.shape[1]
    return code_make(n, basis.m, basis.sub, [basis.expand(x) for x in vectors])
