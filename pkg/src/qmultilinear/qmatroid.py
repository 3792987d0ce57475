"""q-(poly)matroids as memoized rank oracles on the subspace lattice."""

from __future__ import annotations

import json
import threading
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

import numpy as np

from . import linalg as la
from .errors import BadFamily, BadLoopDim, BadRank, BudgetExceeded, NotABasis, NotAMatroid
from .gf import GF
from .linalg import Subspace

NONPAPPUS_LINES = ("123", "168", "157", "247", "269", "348", "359", "456")


class QMatroid:
    """Rank oracle on L(F_q^n) with a thread-safe memo keyed by canonical subspaces."""

    def __init__(self, n: int, field: GF, rank_fn: Callable[[Subspace], object], name: str = ""):
        self.n = n
        self.field = field
        self.name = name
        self._fn = rank_fn
        self._memo: dict[Subspace, Fraction] = {}
        self._lock = threading.Lock()

    def __repr__(self):
        return f"QMatroid({self.name or '?'}, n={self.n}, q={self.field.q})"

    def rank(self, U: Subspace) -> Fraction:
        val = self._memo.get(U)
        if val is None:
            val = Fraction(self._fn(U))
            with self._lock:
                self._memo.setdefault(U, val)
        return val

    __call__ = rank

    @property
    def full_rank(self) -> Fraction:
        return self.rank(Subspace.full(self.n, self.field))

    def table(self, L: la.Lattice | None = None) -> list[Fraction]:
        L = L or la.lattice(self.n, self.field)
        return [self.rank(U) for U in L]

    def is_matroid(self, L: la.Lattice | None = None) -> bool:
        return all(r.denominator == 1 for r in self.table(L))

    def same_as(self, other: "QMatroid", L: la.Lattice | None = None) -> bool:
        return self.table(L) == other.table(L)

    def to_json(self, L: la.Lattice | None = None) -> dict:
        L = L or la.lattice(self.n, self.field)
        return {"n": self.n, "q": self.field.q, "name": self.name,
                "ranks": [[U.to_json(), _frac_out(self.rank(U))] for U in L]}

    def dumps(self) -> str:
        return json.dumps(self.to_json())


def _frac_out(x: Fraction):
    return int(x) if x.denominator == 1 else str(x)


def from_table(obj, field: GF) -> QMatroid:
    """Inverse of QMatroid.to_json; the oracle is the stored table."""
    n = obj["n"]
    def space(rows):
        gens = [la.parse_row(r, field.q) if isinstance(r, str) else r for r in rows]
        return la.subspace_canon(np.array(gens, dtype=np.int64).reshape(-1, n), field, n)

    table = {space(b): Fraction(r) for b, r in obj["ranks"]}
    return QMatroid(n, field, table.__getitem__, obj.get("name", "table"))


# -- constructions --------------------------------------------------------------

def qm_from_code(C) -> QMatroid:
    from .rmcode import MatrixCode, rho_c

    if isinstance(C, MatrixCode):
        return QMatroid(C.n, C.field, lambda U: rho_c(C, U), f"M[C {C.n}x{C.m},{C.k}]")
    return QMatroid(C.n, C.sub, C.rank, f"M[V {C.n},{C.K}]")


def uniform_make(k: int, n: int, field: GF) -> QMatroid:
    if not 0 <= k <= n:
        raise BadRank(f"rank {k} outside [0, {n}]")
    return QMatroid(n, field, lambda U: min(k, U.dim), f"U{k},{n}")


def paving_make(S, k: int, n: int, field: GF, name: str = "") -> QMatroid:
    """ρ(V) = k-1 on the members of S, min(dim V, k) elsewhere."""
    S = [la.subspace_canon(V.matrix, field, n) for V in S]
    for V in S:
        if V.dim != k:
            raise BadFamily(f"member of dimension {V.dim}, expected {k}")
    for i in range(len(S)):
        for j in range(i + 1, len(S)):
            if (S[i] & S[j]).dim > k - 2:
                raise BadFamily(f"members {i} and {j} meet in dimension > {k - 2}")
    members = frozenset(S)

    def rank(U):
        if U.dim == k and U in members:
            return k - 1
        return min(U.dim, k)

    return QMatroid(n, field, rank, name or f"paving{k},{n}|S|={len(S)}")


def almost_uniform_make(k: int, n: int, field: GF, X: Subspace) -> QMatroid:
    return paving_make([X], k, n, field, f"AU{k},{n}")


def nonpappus_family(field: GF) -> list[Subspace]:
    return [Subspace.coordinate([int(c) - 1 for c in line], 9, field) for line in NONPAPPUS_LINES]


def nonpappus_make(field: GF) -> QMatroid:
    return paving_make(nonpappus_family(field), 3, 9, field, "nonpappus")


def rank1_make(n: int, t: int, field: GF) -> QMatroid:
    """Rank one with loop space ⟨e_1..e_t⟩."""
    if not 0 <= t <= n - 1:
        raise BadLoopDim(f"loop dimension {t} outside [0, {n - 1}]")
    loops = Subspace.coordinate(range(t), n, field)
    return QMatroid(n, field, lambda U: 0 if U <= loops else 1, f"rank1({n},{t})")


def qm_dual(M: QMatroid) -> QMatroid:
    top = M.full_rank
    return QMatroid(M.n, M.field, lambda V: V.dim + M.rank(la.orth_comp(V)) - top, f"{M.name}*")


# -- axioms -------------------------------------------------------------------

@dataclass
class AxiomReport:
    ok: bool
    checked: int
    axiom: str | None = None
    witness: tuple | None = None


def _meet_join(L: la.Lattice):
    cached = getattr(L, "_meet_join", None)
    if cached is None:
        masks = L.vector_masks()
        by_mask = {mk: i for i, mk in enumerate(masks)}
        size = len(L)
        meet = np.empty((size, size), dtype=np.int32)
        join = np.empty((size, size), dtype=np.int32)
        subs = L.subspaces
        for i in range(size):
            for j in range(i, size):
                meet[i, j] = meet[j, i] = by_mask[masks[i] & masks[j]]
                join[i, j] = join[j, i] = L.index[subs[i] + subs[j]]
        cached = L._meet_join = (meet, join)
    return cached


def axioms_check(M: QMatroid, scope: str = "exhaustive", seed: int = 0, count: int = 10_000,
                 budget: int = 50_000, anchors=None) -> AxiomReport:
    """Boundedness, monotonicity and submodularity, over all pairs or a seeded sample.

    Sampled pairs are uniform in dimension; with ``anchors`` given, half of the
    samples are an anchor plus a small random subspace, so that special members
    of a family actually get hit.
    """
    if scope == "exhaustive":
        L = la.Lattice(M.n, M.field, budget) if M.n > 4 else la.lattice(M.n, M.field)
        r = M.table(L)
        for i, U in enumerate(L):
            if not 0 <= r[i] <= U.dim:
                return AxiomReport(False, i + 1, "R1", (U,))
        meet, join = _meet_join(L)
        below = L.below
        size = len(L)
        for i in range(size):
            for j in range(size):
                if below[j] >> i & 1 and r[i] > r[j]:
                    return AxiomReport(False, size, "R2", (L.subspaces[i], L.subspaces[j]))
                if r[meet[i, j]] + r[join[i, j]] > r[i] + r[j]:
                    return AxiomReport(False, size, "R3", (L.subspaces[i], L.subspaces[j]))
        return AxiomReport(True, size * size)
    if scope != "sampled":
        raise ValueError("scope must be 'exhaustive' or 'sampled'")
    rng = np.random.default_rng(seed)
    anchors = list(anchors or [])

    def draw():
        if anchors and rng.random() < 0.5:
            X = anchors[int(rng.integers(len(anchors)))]
            return X + la.random_subspace(M.n, int(rng.integers(0, 2)), M.field, rng)
        return la.random_subspace(M.n, int(rng.integers(0, M.n + 1)), M.field, rng)

    for t in range(count):
        A, B = draw(), draw()
        S, I = A + B, A & B
        rA, rB, rS, rI = M(A), M(B), M(S), M(I)
        for U, rU in ((A, rA), (B, rB), (S, rS), (I, rI)):
            if not 0 <= rU <= U.dim:
                return AxiomReport(False, t + 1, "R1", (U,))
        if not (rI <= rA <= rS and rI <= rB <= rS):
            return AxiomReport(False, t + 1, "R2", (A, B))
        if rI + rS > rA + rB:
            return AxiomReport(False, t + 1, "R3", (A, B))
    return AxiomReport(True, count)


# -- derived objects ----------------------------------------------------------

def qm_objects(M: QMatroid, what: str, L: la.Lattice | None = None) -> list[Subspace]:
    L = L or la.lattice(M.n, M.field)
    r = M.table(L)
    if any(x.denominator != 1 for x in r):
        raise NotAMatroid(f"{M.name} has non-integral ranks")
    subs = L.subspaces
    indep = [r[i] == U.dim for i, U in enumerate(subs)]
    top = M.full_rank
    below = L.below
    # immediate neighbours in the inclusion order
    covers_down = [[j for j in range(len(subs)) if below[i] >> j & 1 and subs[j].dim == U.dim - 1]
                   for i, U in enumerate(subs)]
    if what == "independents":
        return [U for i, U in enumerate(subs) if indep[i]]
    if what == "bases":
        return [U for i, U in enumerate(subs) if indep[i] and U.dim == top]
    if what == "circuits":
        return [U for i, U in enumerate(subs)
                if not indep[i] and all(indep[j] for j in covers_down[i])]
    if what in ("flats", "hyperplanes"):
        covers_up = [[] for _ in subs]
        for i, lows in enumerate(covers_down):
            for j in lows:
                covers_up[j].append(i)
        flats = [U for i, U in enumerate(subs) if all(r[j] > r[i] for j in covers_up[i])]
        if what == "flats":
            return flats
        return [F for F in flats if M(F) == top - 1]
    raise ValueError(f"unknown family {what!r}")


# -- classical matroids ---------------------------------------------------------

class ClassicalMatroid:
    """Rank table over all subsets of {0..N-1}, indexed by bitmask."""

    def __init__(self, N: int, table):
        self.N = N
        self.table = [Fraction(x) for x in table]

    def rank(self, X) -> Fraction:
        return self.table[_mask(X)]

    @property
    def full_rank(self):
        return self.table[-1]

    def check_axioms(self):
        """Return None if r is a matroid rank function, else a description of the failure."""
        t = self.table
        if t[0] != 0:
            return "r(empty) != 0"
        for X in range(1 << self.N):
            if t[X].denominator != 1:
                return f"non-integral rank at {X}"
            for e in range(self.N):
                if not X >> e & 1:
                    d = t[X | 1 << e] - t[X]
                    if d not in (0, 1):
                        return f"unit increase fails at {X} + {e}"
            # submodularity follows from the local form r(X+e)+r(X+f) >= r(X)+r(X+e+f)
            for e in range(self.N):
                for f in range(e + 1, self.N):
                    if not (X >> e & 1 or X >> f & 1):
                        if t[X | 1 << e] + t[X | 1 << f] < t[X] + t[X | 1 << e | 1 << f]:
                            return f"submodularity fails at {X}, {e}, {f}"
        return None

    def sets_of_rank(self, size: int, r: int) -> list[tuple[int, ...]]:
        return [tuple(i for i in range(self.N) if X >> i & 1) for X in range(1 << self.N)
                if bin(X).count("1") == size and self.table[X] == r]

    def __eq__(self, other):
        return isinstance(other, ClassicalMatroid) and self.N == other.N and self.table == other.table


def _mask(X) -> int:
    if isinstance(X, int):
        return X
    out = 0
    for i in X:
        out |= 1 << i
    return out


def classical_uniform(k: int, N: int) -> ClassicalMatroid:
    return ClassicalMatroid(N, [min(k, bin(X).count("1")) for X in range(1 << N)])


def induced_matroid(M: QMatroid, B=None) -> ClassicalMatroid:
    """r(A) = ρ(span of the basis vectors indexed by A)."""
    n, F = M.n, M.field
    B = la.identity(n) if B is None else np.asarray(B, dtype=np.int64)
    if B.shape != (n, n) or la.rank(B, F) != n:
        raise NotABasis("need n independent vectors")
    if n > 20:
        raise BudgetExceeded("induced matroid tables are limited to n <= 20")
    table = []
    for X in range(1 << n):
        rows = [B[i] for i in range(n) if X >> i & 1]
        table.append(M(la.subspace_canon(np.array(rows, dtype=np.int64).reshape(-1, n), F, n)))
    return ClassicalMatroid(n, table)


# -- isomorphism ----------------------------------------------------------------

def signature(M: QMatroid, L: la.Lattice | None = None):
    L = L or la.lattice(M.n, M.field)
    return tuple(sorted(Counter((U.dim, r) for U, r in zip(L, M.table(L))).items()))


def qm_isomorphic(M1: QMatroid, M2: QMatroid, scale=1, budget: int = 100_000):
    """Search GL(n,q) for α with ρ2(αV) = scale·ρ1(V) on every V; α acts on row vectors by v ↦ vα."""
    if (M1.n, M1.field.key) != (M2.n, M2.field.key):
        return False, None
    n, F = M1.n, M1.field
    L = la.lattice(n, F)
    scale = Fraction(scale)
    r1 = [scale * x for x in M1.table(L)]
    r2 = M2.table(L)
    if sorted(Counter((U.dim, r) for U, r in zip(L, r1)).items()) != list(signature(M2, L)):
        return False, None
    qn = F.q ** n
    if qn > 62:
        raise BudgetExceeded("isomorphism search needs q^n <= 62")
    vecs = np.array(np.meshgrid(*[np.arange(F.q)] * n, indexing="ij")).reshape(n, -1).T
    w = F.q ** np.arange(n - 1, -1, -1)
    masks = L.vector_masks()
    member = np.array([[mk >> v & 1 for v in range(qn)] for mk in masks], dtype=np.int64)
    key_index = {mk: i for i, mk in enumerate(masks)}
    D = 1
    for x in r1 + r2:
        D = D * x.denominator // np.gcd(D, x.denominator)
    r1a = np.array([int(x * D) for x in r1], dtype=np.int64)
    r2a = np.array([int(x * D) for x in r2], dtype=np.int64)
    if r1 == r2:
        return True, la.identity(n)
    for alpha in la.gl_enum(n, F, budget):
        perm = la.matmul(vecs, alpha, F) @ w
        keys = member @ (np.int64(1) << perm)
        idx = [key_index[int(k)] for k in keys]
        if np.array_equal(r2a[idx], r1a):
            return True, alpha
    return False, None
