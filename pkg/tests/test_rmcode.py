import itertools
from fractions import Fraction

import numpy as np
import pytest
from conftest import e11
from hypothesis import given, settings
from hypothesis import strategies as st

from qmultilinear import linalg as la
from qmultilinear import rmcode as rc
from qmultilinear.errors import AmbientMismatch, BadIndexSet, EmptyCode, NotInvertible, ShapeMismatch
from qmultilinear.gf import ExtensionBasis, field_make, polynomial_basis
from qmultilinear.linalg import Subspace

F2, F3, F4 = field_make(2), field_make(3), field_make(2, 2)


def brute_c_sub_dim(C, U):
    count = 0
    for block in C.codewords():
        for M in block:
            if la.subspace_canon(M.T, C.field, C.n) <= U:
                count += 1
    return round(np.log(count) / np.log(C.q))


def brute_rank_distribution(C):
    A = [0] * (min(C.n, C.m) + 1)
    for block in C.codewords():
        for M in block:
            A[la.rank(M, C.field)] += 1
    return A


def random_codes(count, seed, nm_max=12, k_max=6, qs=(2, 3)):
    rng = np.random.default_rng(seed)
    out = []
    while len(out) < count:
        q = int(rng.choice(qs))
        F = field_make(q)
        n = int(rng.integers(1, 5))
        m = int(rng.integers(1, 5))
        if n * m > nm_max:
            continue
        k = int(rng.integers(0, min(k_max, n * m) + 1))
        out.append(rc.random_code(n, m, k, F, rng))
    return out


# -- construction -------------------------------------------------------------------

def test_code_make_examples(u24_code):
    assert rc.code_make(3, 2, F2, [np.zeros((3, 2), dtype=np.int64)]).k == 0
    assert rc.code_make(3, 3, F2, [np.eye(3, dtype=np.int64)]).k == 1
    assert u24_code.k == 4 and (u24_code.n, u24_code.m) == (4, 2)
    with pytest.raises(ShapeMismatch):
        rc.code_make(3, 2, F2, [np.zeros((2, 3), dtype=np.int64)])


def test_text_and_json_round_trip(additive_code):
    text = additive_code.to_text()
    assert text.splitlines()[0] == "2 3 2 3"
    assert rc.MatrixCode.from_text(text) == additive_code
    assert rc.MatrixCode.from_json(additive_code.to_json()) == additive_code
    C = rc.random_code(3, 3, 4, field_make(13), np.random.default_rng(0))
    assert rc.MatrixCode.from_text(C.to_text()) == C


# -- C(U) and rho -------------------------------------------------------------------

def test_c_sub_examples(additive_code):
    E = Subspace.full(3, F2)
    assert rc.c_sub(additive_code, E) == additive_code
    assert rc.c_sub(additive_code, Subspace.zero(3, F2)).k == 0
    assert rc.c_sub_dim(additive_code, Subspace.coordinate([2], 3, F2)) == 0
    with pytest.raises(AmbientMismatch):
        rc.c_sub(additive_code, Subspace.zero(4, F2))


def test_rho_examples(additive_code, u24_code):
    assert rc.rho_c(additive_code, Subspace.zero(3, F2)) == 0
    assert rc.rho_c(additive_code, Subspace.coordinate([0, 1], 3, F2)) == Fraction(3, 2)
    # 2-almost affine with m < n, so not uniform: one loop, eleven rank-1 planes
    L = la.lattice(4, F2)
    points = [rc.rho_c(u24_code, U) for U in L.of_dim(1)]
    planes = [rc.rho_c(u24_code, U) for U in L.of_dim(2)]
    assert sorted(points) == [0] + [1] * 14
    assert sorted(planes) == [1] * 11 + [2] * 24
    assert rc.rho_c(u24_code, Subspace.full(4, F2)) == 2


def test_c_sub_matches_enumeration():
    for C in random_codes(25, seed=11, nm_max=9, k_max=5):
        for U in la.lattice(C.n, C.field):
            assert rc.c_sub_dim(C, U) == brute_c_sub_dim(C, U)


# -- distances -----------------------------------------------------------------------

def test_min_distance_examples(u24_code):
    assert rc.min_distance(rc.code_make(3, 3, F2, [np.eye(3, dtype=np.int64)])) == 3
    assert rc.min_distance(e11()) == 1
    assert rc.min_distance(u24_code) == 1
    with pytest.raises(EmptyCode):
        rc.min_distance(rc.zero_code(2, 2, F2))


def test_rank_distribution_examples(u24_code):
    assert rc.rank_distribution(rc.zero_code(2, 3, F2)) == [1, 0, 0]
    assert rc.rank_distribution(e11()) == [1, 1, 0]
    A = rc.rank_distribution(u24_code)
    assert A == [1, 3, 12] and sum(A) == 16


def test_singleton_bound_on_random_codes():
    for C in random_codes(60, seed=4):
        if C.k:
            d = rc.min_distance(C)
            assert C.k <= rc.singleton_bound(C.n, C.m, d)
            assert rc.rank_distribution(C) == brute_rank_distribution(C)


# -- dual and MacWilliams -------------------------------------------------------------

def test_dual_examples():
    Z = rc.zero_code(2, 3, F2)
    assert rc.dual(Z) == rc.full_code(2, 3, F2)
    assert rc.dual(rc.full_code(2, 3, F2)) == Z
    D = rc.dual(e11())
    assert D.k == 3
    for block in D.codewords():
        assert (block[:, 0, 0] == 0).all()


def test_dual_involution_random():
    for C in random_codes(40, seed=8, nm_max=16, k_max=16):
        D = rc.dual(C)
        assert C.k + D.k == C.n * C.m
        assert rc.dual(D) == C
        for M, N in itertools.product(C.basis, D.basis):
            assert int((M * N).sum()) % C.q == 0


def test_macwilliams_examples():
    C = e11()
    lhs, rhs, ok = rc.macwilliams_verify(C, 0)
    assert ok and lhs == rhs == 2
    assert rc.rank_distribution(rc.dual(C)) == [1, 5, 2]
    assert rc.macwilliams_verify(C, 1)[2]


def test_macwilliams_random():
    for C in random_codes(30, seed=21):
        for r in range(min(C.n, C.m) + 1):
            lhs, rhs, ok = rc.macwilliams_verify(C, r)
            assert ok and lhs == rhs


# -- restriction and shortening ---------------------------------------------------------

def test_restrict_shorten_examples(additive_code):
    I3 = np.eye(3, dtype=np.int64)
    assert rc.restrict_shorten(rc.zero_code(3, 2, F2), I3, [0, 1]).k == 0
    R = rc.restrict_shorten(additive_code, I3, [0, 1], "restrict")
    assert R.k == 3 and (R.n, R.m) == (2, 2)
    S = rc.restrict_shorten(additive_code, I3, [0, 1], "shorten")
    # codewords with zero third row: only M1
    assert S.k == 1 == rc.c_sub_dim(additive_code, Subspace.coordinate([0, 1], 3, F2))


def test_restrict_shorten_errors(additive_code):
    I3 = np.eye(3, dtype=np.int64)
    with pytest.raises(BadIndexSet):
        rc.restrict_shorten(additive_code, I3, [0, 1, 2])
    with pytest.raises(BadIndexSet):
        rc.restrict_shorten(additive_code, I3, [])
    with pytest.raises(NotInvertible):
        rc.restrict_shorten(additive_code, np.ones((3, 3), dtype=np.int64), [0])


def test_first_isomorphism_dimension_identity():
    rng = np.random.default_rng(2)
    for C in random_codes(30, seed=5, nm_max=12):
        if C.n < 2:
            continue
        A = la.random_invertible(C.n, C.field, rng)
        size = int(rng.integers(1, C.n))
        I = sorted(rng.choice(C.n, size=size, replace=False).tolist())
        rest = [i for i in range(C.n) if i not in I]
        Ainv = la.inverse(A, C.field)
        V = Subspace.span(Ainv[:, rest].T, C.field, C.n)
        R = rc.restrict_shorten(C, A, I, "restrict")
        assert R.k + rc.c_sub_dim(C, V) == C.k
        S = rc.restrict_shorten(C, A, I, "shorten")
        assert S.k == rc.c_sub_dim(C, Subspace.span(Ainv[:, I].T, C.field, C.n))


def test_shorten_column_axis(additive_code):
    I2 = np.eye(2, dtype=np.int64)
    R = rc.restrict_shorten(additive_code, I2, [0], "restrict", axis="cols")
    assert (R.n, R.m) == (3, 1) and R.k == 3


# -- idealizer and almost affine ----------------------------------------------------------

def test_idealizer_examples(u24_code):
    _, flags = rc.right_idealizer(rc.full_code(2, 4, F2))
    assert flags == {2: True, 4: True}
    R, flags = rc.right_idealizer(e11())
    assert R.shape[0] == 3 and flags == {2: False}
    # R(<E11>) = {B : B[0,1] = 0}
    for coeffs in itertools.product(range(2), repeat=3):
        B = la.matmul(np.array([coeffs]), R.reshape(3, -1), F2).reshape(2, 2)
        assert B[0, 1] == 0
    assert rc.right_idealizer(u24_code)[1] == {2: True}


def test_idealizer_of_expanded_vector_code():
    V = rc.VectorCode(np.array([[1, 2, 3]]), F4, F2)
    C = rc.expand_vector_code(V, polynomial_basis(F4, F2))
    assert C.k == 2 and rc.is_right_linear(C)
    rng = np.random.default_rng(0)
    F8 = field_make(2, 3)
    G = rng.integers(0, 8, size=(2, 4))
    C8 = rc.expand_vector_code(rc.VectorCode(G, F8, F2), polynomial_basis(F8, F2))
    assert C8.k == 6 and rc.right_idealizer(C8)[1] == {3: True}


def test_idealizer_closure():
    for C in random_codes(20, seed=9, nm_max=9):
        R = rc.right_idealizer_basis(C)
        for B in R:
            for M in C.basis:
                assert C.contains(la.matmul(M, B, C.field))


def test_almost_affine_examples(u24_code):
    assert rc.is_almost_affine(u24_code) == (True, None)
    ok, witness = rc.is_almost_affine(e11())
    assert not ok and witness == Subspace.coordinate([0], 2, F2)


def test_expanded_codes_are_almost_affine():
    rng = np.random.default_rng(1)
    for big, K, n in ((F4, 1, 3), (F4, 2, 3), (field_make(2, 3), 1, 3), (field_make(3, 2), 1, 3)):
        sub = field_make(big.p)
        G = rng.integers(0, big.q, size=(K, n))
        try:
            V = rc.VectorCode(G, big, sub)
        except ValueError:
            continue
        C = rc.expand_vector_code(V, polynomial_basis(big, sub))
        assert C.k == K * V.m
        assert rc.is_almost_affine(C)[0]
        for U in la.lattice(n, sub):
            assert rc.rho_c(C, U) == V.rank(U)


def test_expand_zero_and_rank_one_generator():
    V = rc.VectorCode(np.zeros((0, 3), dtype=np.int64), F4, F2)
    assert rc.expand_vector_code(V, polynomial_basis(F4, F2)).k == 0
    from qmultilinear.qmatroid import rank1_make
    from qmultilinear.verify.checkers import rank1_generator

    V = rank1_generator(4, 1, 2)
    C = rc.expand_vector_code(V, polynomial_basis(V.big, V.sub))
    M = rank1_make(4, 1, F2)
    assert all(rc.rho_c(C, U) == M(U) for U in la.lattice(4, F2))


def test_induced_qmatroid_independent_of_basis():
    V = rc.VectorCode(np.array([[1, 0, 2], [0, 1, 3]]), F4, F2)
    C1 = rc.expand_vector_code(V, polynomial_basis(F4, F2))
    C2 = rc.expand_vector_code(V, ExtensionBasis(F4, F2, [2, 3]))
    assert all(rc.rho_c(C1, U) == rc.rho_c(C2, U) for U in la.lattice(3, F2))


def test_additive_expansion_of_f4_generators(additive_code):
    g = np.array([[1, 0, 0], [0, 1, 2], [2, 0, 1]])  # gamma = 2
    assert rc.expand_additive(g, polynomial_basis(F4, F2)) == additive_code


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**31 - 1))
def test_rho_is_a_q_polymatroid(seed):
    rng = np.random.default_rng(seed)
    m = int(rng.integers(1, 4))
    C = rc.random_code(4, m, int(rng.integers(0, 4 * m + 1)), F2, rng)
    L = la.lattice(4, F2)
    r = {U: rc.rho_c(C, U) for U in L}
    idx = rng.integers(0, len(L), size=(40, 2))
    for i, j in idx:
        A, B = L.subspaces[i], L.subspaces[j]
        assert 0 <= r[A] <= A.dim
        if A <= B:
            assert r[A] <= r[B]
        assert r[A + B] + r[A & B] <= r[A] + r[B]
