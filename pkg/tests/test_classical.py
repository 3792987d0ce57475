import itertools

import numpy as np
import pytest

from qmultilinear import classical as cl
from qmultilinear import linalg as la
from qmultilinear.errors import BudgetExceeded, FormatError
from qmultilinear.gf import field_make, polynomial_basis
from qmultilinear.qmatroid import NONPAPPUS_LINES, classical_uniform
from qmultilinear.rmcode import VectorCode, expand_vector_code

F2, F3, F4 = field_make(2), field_make(3), field_make(2, 2)
LINES = {tuple(int(c) - 1 for c in line) for line in NONPAPPUS_LINES}


def test_fixture_checksums_are_pinned():
    assert cl.fixture_digest("nonpappus_f3") == "9b151ede1ff449ca86a4d6f2faa854c2560cf3bd1509b9fb8a933b9caf59818c"
    assert cl.fixture_digest("u24_f2") == "f3a4ca8aa196ca61b54f18cb81ccfb9c89421cad5ba0a43e6572c55320a6098b"
    C = cl.load_fixture("nonpappus_f3")
    assert C.G.shape == (6, 18) and C.k == 6 and C.n == 9
    U = cl.load_fixture("u24_f2")
    assert U.G.shape == (4, 8) and U.k == 4


def test_tampered_fixture_is_rejected(monkeypatch):
    monkeypatch.setattr(cl, "U24_F2", cl.U24_F2.replace("11", "10"))
    with pytest.raises(FormatError):
        cl.load_fixture("u24_f2")


def test_projection_examples():
    NP = cl.load_fixture("nonpappus_f3")
    U = cl.load_fixture("u24_f2")
    assert cl.block_projection_dim(NP, []) == 0
    assert cl.block_projection_dim(NP, [0, 1, 2]) == 4
    assert cl.block_projection_dim(U, [1]) == 2


def test_nonpappus_block_code():
    NP = cl.load_fixture("nonpappus_f3")
    M, aa, witness = cl.matroid_from_block_code(NP)
    assert aa and witness is None
    assert all(cl.block_projection_dim(NP, X) % 2 == 0
               for r in range(10) for X in itertools.combinations(range(9), r))
    assert M.full_rank == 3 and M.check_axioms() is None
    assert set(M.sets_of_rank(3, 2)) == LINES
    assert len(M.sets_of_rank(3, 3)) == 84 - 8


def test_u24_block_code():
    M, aa, _ = cl.matroid_from_block_code(cl.load_fixture("u24_f2"))
    assert aa and M == classical_uniform(2, 4)


def test_identity_blocks_give_free_matroid():
    C = cl.BlockCode(np.eye(5, dtype=np.int64), 1, F3)
    M, aa, _ = cl.matroid_from_block_code(C)
    assert aa and M == classical_uniform(5, 5)


def test_non_almost_affine_witness():
    G = np.array([[1, 0, 1, 0], [0, 1, 0, 0]])
    M, aa, witness = cl.matroid_from_block_code(cl.BlockCode(G, 2, F2))
    assert M is None and not aa
    assert cl.block_projection_dim(cl.BlockCode(G, 2, F2), witness) % 2 == 1


def test_block_codes_passing_the_filter_are_matroids():
    rng = np.random.default_rng(3)
    seen = 0
    for t in range(200):
        if t % 2:
            V = VectorCode(rng.integers(0, 4, size=(int(rng.integers(1, 3)), 5)), F4, F2)
            C = expand_vector_code(V, polynomial_basis(F4, F2))
            # codeword matrices n x m, row i = block i
            G = C.basis.reshape(C.k, -1)
            code = cl.BlockCode(G, 2, F2)
        else:
            code = cl.BlockCode(rng.integers(0, 2, size=(4, 10)), 2, F2)
        M, aa, _ = cl.matroid_from_block_code(code)
        if aa:
            seen += 1
            assert M.check_axioms() is None
    assert seen >= 100


def test_text_round_trip():
    C = cl.load_fixture("nonpappus_f3")
    text = C.to_text()
    assert text.splitlines()[0] == "block 3 9 2 6"
    back = cl.BlockCode.from_text(text)
    assert np.array_equal(back.G, C.G) and back.m == 2


@pytest.mark.parametrize("text", ["3 9 2 6\n", "block 2 2 2 1\n10 0\n", "block 2 2 2 2\n10 01\n"])
def test_text_errors(text):
    with pytest.raises(FormatError):
        cl.BlockCode.from_text(text)


def test_block_to_matrix_code():
    C = cl.block_to_matrix_code(cl.load_fixture("u24_f2"))
    assert (C.n, C.m, C.k) == (4, 2, 4)


def test_budget_and_shape_guards():
    with pytest.raises(BudgetExceeded):
        cl.matroid_from_block_code(cl.BlockCode(np.eye(21, dtype=np.int64), 1, F2))
    with pytest.raises(ValueError):
        cl.BlockCode(np.zeros((1, 3), dtype=np.int64), 2, F2)
    assert la.rank(cl.load_fixture("u24_f2").G, F2) == 4
