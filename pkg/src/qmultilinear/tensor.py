"""3-tensors over GF(q), the tensor rank function and projectivization."""

from __future__ import annotations

import threading
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import linalg as la
from .errors import BudgetExceeded, EmptyCode, FormatError, GroundMismatch, NotInvertible, ShapeMismatch
from .gf import GF, field_of_order
from .linalg import Subspace
from .rmcode import MatrixCode, code_make

AH_POINT_BUDGET = 1 << 16


class Tensor3:
    def __init__(self, data, field: GF):
        data = np.asarray(data, dtype=np.int64)
        if data.ndim != 3:
            raise ShapeMismatch(f"expected a 3-way array, got shape {data.shape}")
        if data.size and (data.min() < 0 or data.max() >= field.q):
            raise ValueError("entries must lie in [0, q)")
        self.data = data
        self.field = field

    @property
    def shape(self):
        return self.data.shape

    def __eq__(self, other):
        return (isinstance(other, Tensor3) and self.field.key == other.field.key
                and np.array_equal(self.data, other.data))

    def __repr__(self):
        k, n, m = self.shape
        return f"Tensor3({k}x{n}x{m} over F_{self.field.q})"

    def to_text(self) -> str:
        k, n, m = self.shape
        q = self.field.q
        blocks = ["\n".join(la.format_row(r, q) for r in S) for S in self.data.tolist()]
        return f"{q} {k} {n} {m}\n" + "\n\n".join(blocks) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "Tensor3":
        lines = text.strip().splitlines()
        try:
            q, k, n, m = map(int, lines[0].split())
        except (ValueError, IndexError) as exc:
            raise FormatError("bad tensor header") from exc
        rows = [la.parse_row(line, q) for line in lines[1:] if line.strip()]
        if len(rows) != k * n or any(len(r) != m for r in rows):
            raise FormatError("block layout does not match header")
        return cls(np.array(rows, dtype=np.int64).reshape(k, n, m), field_of_order(q))


def t_mul(X: Tensor3, A, axis: int):
    """Contract axis 1, 2 or 3 of X with the columns of A; a 1-row A gives a matrix."""
    F = X.field
    A = np.asarray(A, dtype=np.int64)
    single = A.ndim == 1
    A = A.reshape(1, -1) if single else A
    k, n, m = X.shape
    size = (k, n, m)[axis - 1] if axis in (1, 2, 3) else None
    if size is None:
        raise ValueError("axis must be 1, 2 or 3")
    if A.shape[1] != size:
        raise ShapeMismatch(f"A has {A.shape[1]} columns, axis {axis} has length {size}")
    r = A.shape[0]
    if axis == 1:
        out = la.matmul(A, X.data.reshape(k, n * m), F).reshape(r, n, m)
    elif axis == 2:
        moved = X.data.transpose(1, 0, 2).reshape(n, k * m)
        out = la.matmul(A, moved, F).reshape(r, k, m).transpose(1, 0, 2)
    else:
        moved = X.data.transpose(2, 0, 1).reshape(m, k * n)
        out = la.matmul(A, moved, F).reshape(r, k, n).transpose(1, 2, 0)
    if single:
        return np.ascontiguousarray(out[0] if axis == 1 else (out[:, 0, :] if axis == 2 else out[:, :, 0]))
    return Tensor3(np.ascontiguousarray(out), F)


def slices(X: Tensor3, axis: int) -> list[np.ndarray]:
    d = X.data
    if axis == 1:
        return [d[j] for j in range(d.shape[0])]
    if axis == 2:
        return [d[:, j, :] for j in range(d.shape[1])]
    if axis == 3:
        return [d[:, :, j] for j in range(d.shape[2])]
    raise ValueError("axis must be 1, 2 or 3")


def slice_space(X: Tensor3, axis: int):
    """Basis of the axis-i slice space, its dimension, and whether it is nondegenerate."""
    sl = slices(X, axis)
    if not sl or sl[0].size == 0:
        return np.zeros((0,), dtype=np.int64), 0, not sl
    shape = sl[0].shape
    R, piv = la.rref(np.stack(sl).reshape(len(sl), -1), X.field)
    return R.reshape((-1,) + shape), len(piv), len(piv) == len(sl)


def gen_tensor(C: MatrixCode) -> Tensor3:
    if C.k == 0:
        raise EmptyCode("the zero code has no generator tensor")
    return Tensor3(C.basis.copy(), C.field)


def code_of(T: Tensor3) -> MatrixCode:
    k, n, m = T.shape
    return code_make(n, m, T.field, slices(T, 1))


def _complete_basis(B: np.ndarray, n: int, F: GF) -> np.ndarray:
    """Standard vectors, in index order, that extend the rows of B to a basis."""
    extra = []
    rows = B
    for i in range(n):
        e = np.zeros((1, n), dtype=np.int64)
        e[0, i] = 1
        cand = np.vstack([rows, e])
        if la.rank(cand, F) == cand.shape[0]:
            rows = cand
            extra.append(e[0])
    return np.array(extra, dtype=np.int64).reshape(len(extra), n)


def default_A(U: Subspace) -> np.ndarray:
    """A with U^⊥ spanned by the last n-u columns of A^{-1}."""
    n, F = U.n, U.field
    P = la.orth_comp(U).matrix
    cols = np.vstack([_complete_basis(P, n, F), P])
    return la.inverse(cols.T, F)


def random_A(U: Subspace, rng) -> np.ndarray:
    n, F = U.n, U.field
    P = la.orth_comp(U).matrix
    if P.shape[0]:
        P = la.matmul(la.random_invertible(P.shape[0], F, rng), P, F)
    while True:
        head = la.random_matrix(n - P.shape[0], n, F, rng)
        cols = np.vstack([head, P])
        if la.rank(cols, F) == n:
            return la.inverse(cols.T, F)


def valid_A(A, U: Subspace) -> bool:
    F, n, u = U.field, U.n, U.dim
    try:
        Ainv = la.inverse(A, F)
    except NotInvertible:
        return False
    tail = Subspace.span(Ainv[:, u:].T, F, n)
    return tail == la.orth_comp(U)


def rho_t(T: Tensor3, U: Subspace, A=None) -> Fraction:
    """dim ss_1(m_2(A_I, T)) / m with I = {1..dim U}."""
    k, n, m = T.shape
    if U.n != n:
        raise ShapeMismatch("subspace lives in the wrong ambient space")
    u = U.dim
    if u == 0:
        return Fraction(0)
    if u == n:
        return Fraction(slice_space(T, 1)[1], m)
    if A is None:
        A = default_A(U)
    elif not valid_A(A, U):
        raise ValueError("A does not satisfy U^⊥ = A^{-1} V_{bar I}")
    sub = t_mul(T, np.asarray(A)[:u], 2)
    return Fraction(slice_space(sub, 1)[1], m)


# -- additive Hamming code and projectivization ---------------------------------

def ah_code(T: Tensor3, budget: int = AH_POINT_BUDGET) -> np.ndarray:
    """Concatenation of the k x m blocks m_2(u, T) over projective representatives u."""
    k, n, m = T.shape
    N = (T.field.q ** n - 1) // (T.field.q - 1)
    if N > budget:
        raise BudgetExceeded(f"{N} projective points exceed budget {budget}")
    pts = la.projective_points(n, T.field)
    blocks = [t_mul(T, u, 2) for u in pts]
    return np.hstack(blocks) if blocks else np.zeros((k, 0), dtype=np.int64)


class Polymatroid:
    """Rational rank function on subsets of {0..N-1} (bitmasks or iterables)."""

    def __init__(self, N: int, rank_fn, name: str = ""):
        self.N = N
        self.name = name
        self._fn = rank_fn
        self._memo: dict[int, Fraction] = {}
        self._lock = threading.Lock()

    def rank(self, X) -> Fraction:
        mask = X if isinstance(X, (int, np.integer)) else sum(1 << int(i) for i in X)
        mask = int(mask)
        v = self._memo.get(mask)
        if v is None:
            v = Fraction(self._fn(mask))
            with self._lock:
                self._memo.setdefault(mask, v)
        return v

    __call__ = rank


def _members(mask: int, N: int) -> list[int]:
    return [i for i in range(N) if mask >> i & 1]


def projectivize(M) -> Polymatroid:
    pts = la.projective_points(M.n, M.field)
    N = len(pts)

    def rank(mask):
        rows = pts[_members(mask, N)]
        return M(la.subspace_canon(rows.reshape(-1, M.n), M.field, M.n))

    return Polymatroid(N, rank, f"Proj({M.name})")


def ah_polymatroid(G, m: int, field: GF) -> Polymatroid:
    G = np.asarray(G, dtype=np.int64)
    N = G.shape[1] // m

    def rank(mask):
        cols = [c for i in _members(mask, N) for c in range(i * m, (i + 1) * m)]
        if not cols:
            return 0
        return Fraction(la.rank(G[:, cols], field), m)

    return Polymatroid(N, rank, "AH")


@dataclass
class CompareReport:
    ok: bool
    scope: str
    checked: int
    witness: int | None = None
    seed: int | None = None


def compare(P1: Polymatroid, P2: Polymatroid, psi=None, full_limit: int = 20, seed: int = 0,
            samples: int = 10_000) -> CompareReport:
    """r1(A) == r2(ψ(A)) for every subset (N <= full_limit) or a seeded sample."""
    if P1.N != P2.N:
        raise GroundMismatch(f"ground sizes {P1.N} and {P2.N}")
    N = P1.N
    psi = list(range(N)) if psi is None else list(psi)

    def image(mask):
        return sum(1 << psi[i] for i in _members(mask, N))

    if N <= full_limit:
        masks = range(1 << N)
        scope, used_seed = "exhaustive", None
    else:
        rng = np.random.default_rng(seed)
        masks = (int.from_bytes(rng.bytes((N + 7) // 8), "little") & ((1 << N) - 1)
                 for _ in range(samples))
        scope, used_seed = "sampled", seed
    count = 0
    for mask in masks:
        count += 1
        if P1(mask) != P2(image(mask)):
            return CompareReport(False, scope, count, mask, used_seed)
    return CompareReport(True, scope, count, None, used_seed)


def point_bijection(pts_from, pts_to, field: GF) -> list[int]:
    """ψ matching each projective point with the representative of the same line."""
    index = {}
    for j, v in enumerate(pts_to):
        index[la.subspace_canon(np.asarray(v).reshape(1, -1), field)] = j
    return [index[la.subspace_canon(np.asarray(v).reshape(1, -1), field)] for v in pts_from]


def random_tensor(k: int, n: int, m: int, field: GF, rng) -> Tensor3:
    return Tensor3(rng.integers(0, field.q, size=(k, n, m)), field)

