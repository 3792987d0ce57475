"""Linear block codes over (F_q^m)^n and the matroids of almost affine ones."""

from __future__ import annotations

import hashlib

import numpy as np

from . import linalg as la
from .errors import BudgetExceeded, FormatError
from .gf import GF, field_make, field_of_order
from .qmatroid import ClassicalMatroid

# Rows of blocks; each two-digit token is one block (a, b) of F_q^2.
NONPAPPUS_F3 = """\
10 10 00 10 00 10 10 10 00
01 01 00 01 00 01 01 01 00
00 00 00 10 10 21 01 10 10
00 00 00 02 01 20 12 02 01
00 10 10 01 00 01 00 11 10
00 01 01 21 00 21 00 10 01
"""

U24_F2 = """\
10 00 10 10
01 00 01 01
00 10 10 01
00 01 01 11
"""

FIXTURE_SHA256 = {
    "nonpappus_f3": "9b151ede1ff449ca86a4d6f2faa854c2560cf3bd1509b9fb8a933b9caf59818c",
    "u24_f2": "f3a4ca8aa196ca61b54f18cb81ccfb9c89421cad5ba0a43e6572c55320a6098b",
}


class BlockCode:
    def __init__(self, G, m: int, field: GF):
        G = np.asarray(G, dtype=np.int64)
        if G.ndim != 2 or G.shape[1] % m:
            raise ValueError("generator width must be a multiple of the block size")
        self.G = G
        self.m = m
        self.field = field
        self.n = G.shape[1] // m
        self.k = la.rank(G, field)

    def columns(self, X) -> list[int]:
        return [i * self.m + j for i in sorted(X) for j in range(self.m)]

    def to_text(self) -> str:
        q, m = self.field.q, self.m
        lines = [f"block {q} {self.n} {m} {self.G.shape[0]}"]
        for row in self.G.tolist():
            lines.append(" ".join(la.format_row(row[i * m:(i + 1) * m], q) for i in range(self.n)))
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "BlockCode":
        lines = [line for line in text.strip().splitlines() if line.strip()]
        head = lines[0].split() if lines else []
        if len(head) != 5 or head[0] != "block":
            raise FormatError("expected header 'block q n m k'")
        q, n, m, k = map(int, head[1:])
        rows = [parse_blocks(line, q, m) for line in lines[1:]]
        if len(rows) != k or any(len(r) != n * m for r in rows):
            raise FormatError("rows do not match header")
        return cls(np.array(rows, dtype=np.int64).reshape(k, n * m), m, field_of_order(q))


def parse_blocks(line: str, q: int, m: int) -> list[int]:
    out = []
    for tok in line.split():
        if len(tok) != m:
            raise FormatError(f"block {tok!r} does not have width {m}")
        out.extend(la.parse_row(tok, q))
    return out


def block_projection_dim(C: BlockCode, X) -> int:
    cols = C.columns(X)
    if not cols:
        return 0
    return la.rank(C.G[:, cols], C.field)


def matroid_from_block_code(C: BlockCode, max_n: int = 20):
    """(matroid or None, almost affine flag, first violating subset or None)."""
    if C.n > max_n:
        raise BudgetExceeded(f"2^{C.n} subsets exceed the limit")
    table = []
    for mask in range(1 << C.n):
        d = block_projection_dim(C, [i for i in range(C.n) if mask >> i & 1])
        if d % C.m:
            return None, False, tuple(i for i in range(C.n) if mask >> i & 1)
        table.append(d // C.m)
    return ClassicalMatroid(C.n, table), True, None


def fixture_text(name: str) -> str:
    return {"nonpappus_f3": NONPAPPUS_F3, "u24_f2": U24_F2}[name]


def fixture_digest(name: str) -> str:
    return hashlib.sha256(fixture_text(name).encode()).hexdigest()


def load_fixture(name: str) -> BlockCode:
    if fixture_digest(name) != FIXTURE_SHA256[name]:
        raise FormatError(f"fixture {name} does not match its pinned checksum")
    q = {"nonpappus_f3": 3, "u24_f2": 2}[name]
    rows = [parse_blocks(line, q, 2) for line in fixture_text(name).splitlines() if line.strip()]
    return BlockCode(np.array(rows, dtype=np.int64), 2, field_make(q))


def block_to_matrix_code(C: BlockCode):
    """Read each generator row as an n x m matrix (row i = block i)."""
    from .rmcode import code_make

    return code_make(C.n, C.m, C.field, [row.reshape(C.n, C.m) for row in C.G])
