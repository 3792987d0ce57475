"""Executable non-representability arguments.

Each checker walks through the argument that excludes a representation,
records every forced quantity in the certificate, and returns a Verdict.
``validate_certificate`` recomputes a verdict from the parameters stored in its
certificate and compares the two.
"""

from __future__ import annotations

import time
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .. import linalg as la
from .. import qmatroid as qm
from .. import rmcode as rc
from ..errors import BadM, BadParams, BudgetExceeded, NotDisjoint, UnsupportedQ
from ..gf import field_make, field_of_order, polynomial_basis, prime_power
from ..linalg import Subspace
from .forced import exact_support_counts, forced_min_distance, required_dims, singleton_ok
from .search import divisible_code_search
from .verdict import Verdict, jsonable

SEARCH_LIMIT = 10**7
LATTICE_LIMIT = 50_000
NONPAPPUS_Q_MAX = 64


def _lattice_size(n: int, q: int) -> int:
    return sum(la.gaussian_binom(n, d, q) for d in range(n + 1))


def _verdict(claim, ok, cert, t0, refuted=False):
    status = "confirmed" if ok else ("refuted" if refuted else "inconclusive")
    return Verdict(claim, status, jsonable(cert), {"seconds": round(time.time() - t0, 4)})


def _field(q: int):
    if prime_power(q) is None:
        raise UnsupportedQ(f"{q} is not a prime power")
    return field_of_order(q)


# -- uniform ---------------------------------------------------------------------

def uniform_obstruction(k: int, n: int, q: int, m: int, exhaustive: bool | None = None,
                        limit: int = SEARCH_LIMIT, workers: int = 1) -> Verdict:
    """No code in F_q^{n x m}, m < n, has q-matroid U_{k,n}(q)."""
    if not 0 < k < n:
        raise BadParams(f"need 0 < k < n, got k={k}, n={n}")
    if not 0 < m < n:
        raise BadParams(f"need 0 < m < n, got m={m}")
    t0 = time.time()
    F = _field(q)
    kp = k * m
    d = n - k + 1
    cert = {"params": {"k": k, "n": n, "q": q, "m": m, "exhaustive": exhaustive, "limit": limit},
            "forced": {"kprime": kp, "d": d}}
    if _lattice_size(n, q) <= LATTICE_LIMIT:
        L = la.lattice(n, F)
        kp_l, req = required_dims(qm.uniform_make(k, n, F), m, L)
        cert["forced_from_lattice"] = {"kprime": kp_l, "d": forced_min_distance(req, L)}
        if cert["forced_from_lattice"] != cert["forced"]:
            return _verdict("uniform_obstruction", False, cert, t0)
    if k == 1:
        cert["contradiction"] = {"kind": "distance", "d": d, "max_rank": min(n, m), "holds": d > min(n, m)}
    else:
        rhs = n * (m - n + k)
        cert["contradiction"] = {"kind": "singleton", "lhs": kp, "rhs": rhs, "holds": kp > rhs,
                                 "reduces_to": "n <= m"}
    ok = cert["contradiction"]["holds"]
    total = la.gaussian_binom(n * m, kp, q)
    run = exhaustive if exhaustive is not None else (m > 1 and total <= limit)
    if run:
        if total > limit:
            raise BudgetExceeded(f"{total} candidates exceed limit {limit}")
        v = divisible_code_search(n, m, kp, q, {"uniform": qm.uniform_make(k, n, F)}, workers=workers,
                                  idealizer=False, keep_survivors=False, budget=limit)
        c = v.certificate["census"]
        cert["search"] = {"candidates": c["total"], "almost_affine": c["almost_affine"],
                          "matches": c["targets"]["uniform"], "digest": c["survivor_digest"]}
        if c["targets"]["uniform"]:
            return _verdict("uniform_obstruction", False, cert, t0, refuted=True)
    return _verdict("uniform_obstruction", ok, cert, t0)


# -- almost uniform ----------------------------------------------------------------

def almost_uniform_params(k: int, n: int, q: int) -> Verdict:
    """Any representation of AU_{k,n}(q, X) with m < n is an F_q-[n x (n-1), k(n-1), n-k] code."""
    if not 0 < k < n - 1:
        raise BadParams(f"need 0 < k < n-1, got k={k}, n={n}")
    t0 = time.time()
    F = _field(q)
    X = Subspace.coordinate(range(k), n, F)
    M = qm.almost_uniform_make(k, n, F, X)
    steps = []
    d = n - k
    step = {"step": "min_distance", "formula": d}
    if _lattice_size(n, q) <= LATTICE_LIMIT:
        L = la.lattice(n, F)
        _, req = required_dims(M, 1, L)
        step["from_lattice"] = forced_min_distance(req, L)
    steps.append(step)
    steps.append({"step": "kprime", "formula": "k*m"})

    # a hyperplane e^⊥ not containing X
    Xp = la.orth_comp(X)
    e = next(v for v in la.projective_points(n, F) if not Xp.contains_vector(v))
    H = la.orth_comp(Subspace.span([e], F, n))
    restricted = {"e": la.format_row(e, q), "X_in_hyperplane": X <= H}
    if _lattice_size(n - 1, q) <= LATTICE_LIMIT:
        Hb = H.matrix
        bad = 0
        for V in la.lattice(n - 1, F):
            W = Subspace.span(la.matmul(V.matrix, Hb, F), F, n) if V.dim else Subspace.zero(n, F)
            if M(W) != min(k, V.dim):
                bad += 1
        restricted["checked_subspaces"] = len(la.lattice(n - 1, F))
        restricted["uniform"] = bad == 0
    else:
        restricted["uniform"] = not restricted["X_in_hyperplane"]
    steps.append({"step": "restriction_is_uniform", **restricted, "k": k, "n": n - 1})

    below = [uniform_obstruction(k, n - 1, q, mm, exhaustive=False) for mm in range(1, n - 1)]
    steps.append({"step": "uniform_obstruction", "m_excluded": list(range(1, n - 1)),
                  "all_confirmed": all(v.confirmed for v in below)})
    m = n - 1
    forced = {"m": m, "kprime": k * m, "d": d, "label": f"F_{q}-[{n}x{m}, {k * m}, {d}]",
              "singleton_ok": singleton_ok(n, m, k * m, d)}
    ok = (restricted["uniform"] and not restricted["X_in_hyperplane"] and steps[-1]["all_confirmed"]
          and step.get("from_lattice", d) == d and forced["singleton_ok"])
    cert = {"params": {"k": k, "n": n, "q": q}, "X": X.to_json(), "steps": steps, "forced": forced}
    return _verdict("almost_uniform_params", ok, cert, t0)


# -- non-Pappus ------------------------------------------------------------------

P_COEFFS = (1, 1, 2, 2, 3, 3, 3, 2, 2, 1, -7)  # degree 10 down to 0


def P(q: int) -> int:
    v = 0
    for c in P_COEFFS:
        v = v * q + c
    return v


@lru_cache(maxsize=1)
def _symbolic_checks() -> dict:
    import sympy as sp

    x = sp.symbols("q")

    def gb(nn, kk):
        num, den = sp.Integer(1), sp.Integer(1)
        for i in range(kk):
            num *= x ** (nn - i) - 1
            den *= x ** (i + 1) - 1
        return sp.cancel(num / den)

    Pq = sum(c * x ** (10 - i) for i, c in enumerate(P_COEFFS))
    lhs = 8 * (x**2 - 1) + 1 + (x - 1) * (gb(9, 2) - 8 * gb(3, 1)) - x**15
    simplification = sp.expand(lhs - x**2 * (x - 1) * Pq) == 0
    rem = sp.rem(sp.Poly(Pq + 7, x), sp.Poly(x, x))
    return {"simplification": bool(simplification), "P_plus_7_mod_q_is_zero": rem.is_zero,
            "P7_mod_343": int(Pq.subs(x, 7)) % 343}


def _sub_planes(X: Subspace, F, small=None) -> set:
    """All 2-dim subspaces of a 3-dim coordinate subspace X.

    Placing the columns of an RREF matrix at the coordinates of X keeps it in
    RREF, so the planes of F_q^3 embed without re-reducing.
    """
    cols = [r.index(1) for r in X.rows]
    small = small if small is not None else list(la.enum_subspaces(3, F, 2))
    out = set()
    for V in small:
        rows = []
        for r in V.rows:
            full = [0] * X.n
            for c, x in zip(cols, r):
                full[c] = x
            rows.append(full)
        out.add(Subspace(X.n, F, rows))
    return out


@lru_cache(maxsize=None)
def _nonpappus_setup(q: int) -> dict:
    """Per-field facts about the family S, shared by every m."""
    F = field_of_order(q)
    S = qm.nonpappus_family(F)
    M = qm.nonpappus_make(F)
    meets = max((S[i] & S[j]).dim for i in range(len(S)) for j in range(i + 1, len(S)))
    small = list(la.enum_subspaces(3, F, 2)) if q <= 16 else None
    planes = [_sub_planes(X, F, small) for X in S] if small else None
    covered = len(set().union(*planes)) if planes else 8 * la.gaussian_binom(3, 1, q)
    return {"S": S, "deficient": all(M(X) == 2 for X in S), "meets": meets, "planes_in_S": covered}


def nonpappus_exclusion(q: int, m: int) -> Verdict:
    if not 1 <= m <= 8:
        raise BadM(f"m must lie in 1..8, got {m}")
    if prime_power(q) is None or q > NONPAPPUS_Q_MAX:
        raise UnsupportedQ(f"q = {q} is not a supported prime power")
    t0 = time.time()
    setup = _nonpappus_setup(q)
    S, deficient, meets = setup["S"], setup["deficient"], setup["meets"]
    n = 9
    kp = 3 * m
    # largest non-spanning subspaces are the members of S, so d = 9 - 3
    d = n - 3
    cert = {"params": {"q": q, "m": m}, "forced": {"kprime": kp, "d": d},
            "family": {"size": len(S), "members_deficient": deficient, "max_pairwise_meet": meets}}
    ok = deficient and meets <= 1
    if m < d:
        cert["contradiction"] = {"kind": "distance", "d": d, "m": m, "holds": d > m}
    elif m in (6, 7):
        rhs = max(n, m) * (min(n, m) - d + 1)
        cert["contradiction"] = {"kind": "singleton", "lhs": kp, "rhs": rhs, "holds": kp > rhs}
    else:
        g92, g31 = la.gaussian_binom(9, 2, q), la.gaussian_binom(3, 1, q)
        covered = setup["planes_in_S"]
        A = [0] * 9
        A[0] = 1
        A[6] = len(S) * (q**8 - 1)
        A[7] = (q**8 - 1) * (g92 - covered)
        A[8] = q**24 - 1 - A[6] - A[7]
        lhs, rhs0 = rc.macwilliams_sides(A, [1, 0], 24, n, m, q, 1)
        c1 = rc.macwilliams_coefficient(1, 1, 24, n, m, q)
        A1 = (Fraction(lhs) - rhs0) / c1
        closed = Fraction((q**8 - 1) * P(q), q**13)
        sym = _symbolic_checks()
        cert["distribution"] = {"A6": A[6], "A7": A[7], "A8": A[8],
                                "A6_closed": 8 * (q**8 - 1), "A7_closed": (q**8 - 1) * (g92 - 8 * g31),
                                "planes_in_S_counted": covered, "planes_in_S_formula": 8 * g31}
        cert["macwilliams_r1"] = {
            "lhs": lhs,
            "lhs_closed": q**24 + (q**8 - 1) + (q**2 - 1) * A[6] + (q - 1) * A[7],
            "rhs_A0_term": rhs0, "rhs_A0_closed": q**24 + q**15 * (q**8 - 1),
            "A1_coefficient": c1, "A1_coefficient_closed": q**15 * (q - 1),
        }
        cert["A1_dual"] = A1
        cert["A1_dual_closed"] = closed
        cert["P"] = P(q)
        if q % 7:
            reason = {"rule": "P(q) = -7 mod q", "P_mod_q": P(q) % q, "minus7_mod_q": -7 % q}
            reason["holds"] = reason["P_mod_q"] == reason["minus7_mod_q"] != 0
        else:
            reason = {"rule": "P mod 7^3", "P_mod_343": P(q) % 343, "holds": P(q) % 343 != 0}
        cert["divisibility"] = reason
        cert["symbolic"] = sym
        mw = cert["macwilliams_r1"]
        holds = (A1.denominator != 1 and A1 == closed and reason["holds"]
                 and mw["lhs"] == mw["lhs_closed"] and mw["rhs_A0_term"] == mw["rhs_A0_closed"]
                 and mw["A1_coefficient"] == mw["A1_coefficient_closed"]
                 and A[6] == cert["distribution"]["A6_closed"] and A[7] == cert["distribution"]["A7_closed"]
                 and sym["simplification"] and sym["P_plus_7_mod_q_is_zero"] and sym["P7_mod_343"] == 98)
        cert["contradiction"] = {"kind": "non_integral_dual_count", "holds": holds}
    ok = ok and cert["contradiction"]["holds"]
    return _verdict("nonpappus_exclusion", ok, cert, t0)


def nonpappus_distribution(q: int, m: int) -> list[int]:
    """Rank distribution A_0..A_9 forced on a representation of the non-Pappus q-matroid."""
    if m < 9:
        raise BadM(f"m must be at least 9, got {m}")
    if prime_power(q) is None:
        raise UnsupportedQ(f"{q} is not a prime power")
    g = la.gaussian_binom
    A = [0] * 10
    A[0] = 1
    A[6] = 8 * (q**m - 1)
    A[7] = (q**m - 1) * (g(9, 2, q) - 8 * g(3, 1, q))
    A[8] = g(9, 1, q) * (q ** (2 * m) - 1) - g(3, 1, q) * A[6] - (q + 1) * A[7]
    A[9] = q ** (3 * m) - 1 - A[6] - A[7] - A[8]
    if min(A) < 0 or sum(A) != q ** (3 * m):
        raise ArithmeticError(f"inconsistent forced distribution {A}")
    return A


# -- counting contradictions on F_2^4 --------------------------------------------

def find_spread(F, n: int = 4, size: int = 5, avoid=()):
    """Greedy set of pairwise trivially meeting 2-dim subspaces, in lattice order."""
    chosen = list(avoid)
    for V in la.lattice(n, F).of_dim(2):
        if all((V & W).dim == 0 for W in chosen):
            chosen.append(V)
            if len(chosen) == size:
                break
    return chosen[len(avoid):] if len(chosen) == size else None


def _partial(L, req, q, m):
    """Möbius-inverted A_0..A_m from the required dimensions."""
    ex = exact_support_counts(req, L, q)
    A = [0] * (L.n + 1)
    for j, U in enumerate(L):
        A[U.dim] += ex[j]
    return A


def counting_contradiction(cls: str, q: int = 2) -> Verdict:
    cls = cls.replace("(", "").replace(")", "").replace(" ", "")
    if q != 2 or cls not in ("9,34", "5,30"):
        raise BadParams("supported: class 9,34 or 5,30 over q = 2")
    t0 = time.time()
    F = field_make(2)
    n, m = 4, 3
    L = la.lattice(n, F)
    perp = L.perp
    idx = L.index
    if cls == "9,34":
        X = Subspace.coordinate([0, 1], n, F)
        M = qm.almost_uniform_make(2, n, F, X)
        deficient = [X]
    else:
        deficient = find_spread(F)
        M = qm.paving_make(deficient, 2, n, F)
    kp, req = required_dims(M, m, L)

    def r(W):
        return req[idx[W]]

    d = forced_min_distance(req, L)
    # rank-2 codewords: column space a 2-dim W with C(W) nonzero but nothing inside smaller
    rank2_spaces = [W for W in L.of_dim(2) if r(W) > 0]
    pair_meets = [r(a & b) for i, a in enumerate(rank2_spaces) for b in rank2_spaces[i + 1:]]
    A2 = sum(q ** r(W) - 1 for W in rank2_spaces) if all(v == 0 for v in pair_meets) else None
    lows_zero = all(r(W) == 0 for W in L.of_dim(1))
    cert = {"params": {"class": cls, "q": q}, "m": m, "kprime": kp, "d": d,
            "deficient": [V.to_json() for V in deficient],
            "rank2": {"spaces": [W.to_json() for W in rank2_spaces], "dims": [r(W) for W in rank2_spaces],
                      "pairwise_meet_dims": pair_meets, "A2": A2}}
    if cls == "9,34":
        inside = [U for U in L.of_dim(1) if U <= X]
        outside = [U for U in L.of_dim(1) if not U <= X]
        Xp = L.subspaces[perp[idx[X]]]
        no_rank2 = all(not Xp <= L.subspaces[perp[idx[U]]] for U in outside)
        same_as_X = all(r(L.subspaces[perp[idx[U]]]) == r(Xp) for U in inside)
        pairs = [r(L.subspaces[perp[idx[U]]] & L.subspaces[perp[idx[V]]])
                 for i, U in enumerate(outside) for V in outside[i + 1:]]
        dims3 = [r(L.subspaces[perp[idx[U]]]) for U in outside]
        A3 = sum(q**v - 1 for v in dims3) if no_rank2 and all(v == 0 for v in pairs) else None
        cert["rank3"] = {"lines_in_X": len(inside), "lines_off_X": len(outside), "off_X_dims": dims3,
                         "in_X_equal_to_X_perp": same_as_X, "no_rank2_off_X": no_rank2,
                         "pairwise_trivial": all(v == 0 for v in pairs), "A3": A3}
    else:
        lines = list(L.of_dim(1))
        owners = [[j for j, S in enumerate(deficient) if U <= S] for U in lines]
        cover = sum(len(o) == 1 for o in owners)
        equal = all(r(L.subspaces[perp[idx[U]]]) == r(L.subspaces[perp[idx[deficient[o[0]]]]])
                    for U, o in zip(lines, owners) if len(o) == 1)
        A3 = 0 if cover == len(lines) and equal else None
        cert["rank3"] = {"spread_size": len(deficient), "lines_covered": 5 * la.gaussian_binom(2, 1, q),
                         "lines_total": len(lines), "lines_with_unique_owner": cover,
                         "C_x_perp_equals_C_S_perp": equal, "A3": A3}
    partial = [1, 0 if lows_zero else None, A2, cert["rank3"]["A3"]]
    mob = _partial(L, req, q, m)
    cert["partial_distribution"] = partial
    cert["sum"] = sum(partial) if None not in partial else None
    cert["code_size"] = q**kp
    cert["mobius"] = {"A": mob, "partial_sum": sum(mob[: m + 1]), "total": sum(mob)}
    ok = (None not in partial and d == 2 and mob[: m + 1] == partial
          and cert["sum"] != cert["code_size"] and cert["mobius"]["total"] == cert["code_size"])
    return _verdict("counting_contradiction", ok, cert, t0)


# -- spread argument -------------------------------------------------------------

def _vec_key(v) -> tuple:
    return tuple(int(x) for x in v)


def spread_argument(S1, S2, S3, S4, m: int = 2) -> Verdict:
    """The class (6,31) argument: the code dimensions force dim C(S_5^⊥) >= m."""
    S = [S1, S2, S3, S4]
    F = S1.field
    if F.q != 2 or any(V.n != 4 or V.dim != 2 for V in S):
        raise BadParams("need four 2-dim subspaces of F_2^4")
    if m < 2:
        raise BadParams("m must exceed 1")
    for i in range(4):
        for j in range(i + 1, 4):
            if (S[i] & S[j]).dim:
                raise NotDisjoint(f"S{i + 1} and S{j + 1} meet nontrivially")
    t0 = time.time()
    T = [la.orth_comp(V) for V in S]
    used = {_vec_key(v) for V in T for v in V.vectors() if any(v)}
    rest = [v for v in Subspace.full(4, F).vectors() if any(v) and _vec_key(v) not in used]
    closed = len(rest) == 3 and all(
        _vec_key((a + b) % 2) in {_vec_key(c) for c in rest} for i, a in enumerate(rest) for b in rest[i + 1:])
    T5 = Subspace.span(rest, F, 4)
    completions = [V for V in la.lattice(4, F).of_dim(2) if all((V & W).dim == 0 for W in T)]
    T.append(T5)
    t2_vecs = [v for v in T[1].vectors()]

    def alpha(j, x):
        hits = [y for y in t2_vecs if T[j].contains_vector((x + y) % 2)]
        return hits[0] if len(hits) == 1 else None

    xs = [x for x in T[0].vectors() if any(x)]
    table = {}
    pointwise = True
    for x in xs:
        a3, a4, a5 = alpha(2, x), alpha(3, x), alpha(4, x)
        row = {f"alpha{j}": None if a is None else la.format_row(a, 2) for j, a in zip((3, 4, 5), (a3, a4, a5))}
        table[la.format_row(x, 2)] = row
        if a3 is None or a4 is None or a5 is None or not np.array_equal((a3 + a4) % 2, a5):
            pointwise = False
    M = qm.paving_make(S, 2, 4, F)
    S5 = la.orth_comp(T5)
    req_S5 = 2 * m - m * M(S5)
    cert = {"params": {"S": [V.to_json() for V in S], "m": m},
            "T": [V.to_json() for V in T], "completion": {"leftover": [la.format_row(v, 2) for v in rest],
                                                          "closed": closed, "dim": T5.dim,
                                                          "unique": len(completions) == 1},
            "alpha": table, "alpha5_is_alpha3_plus_alpha4": pointwise,
            "forced": {"dim_C_T5_at_least": m, "dim_C_T5_required": int(req_S5), "S5_in_family": S5 in S}}
    ok = closed and T5.dim == 2 and len(completions) == 1 and pointwise and req_S5 == 0 and S5 not in S
    return _verdict("spread_argument", ok, cert, t0)


# -- rank one --------------------------------------------------------------------

def rank1_generator(n: int, t: int, q: int):
    """(0..0, 1, α, .., α^{n-t-1}) over GF(q^{n-t}) with α primitive."""
    p, e = prime_power(q)
    big = field_make(p, e * (n - t))
    alpha = big.primitive
    g = [0] * t + [big.power(alpha, i) for i in range(n - t)]
    return rc.VectorCode(np.array([g]), big, field_of_order(q))


def rank1_exclusion(n: int, t: int, q: int, limit: int = SEARCH_LIMIT, workers: int = 1) -> Verdict:
    if not 0 < t < n - 1:
        raise BadParams(f"need 0 < t < n-1, got t={t}, n={n}")
    t0 = time.time()
    F = _field(q)
    M = qm.rank1_make(n, t, F)
    d = n - t
    cert = {"params": {"n": n, "t": t, "q": q, "limit": limit}, "forced": {"kprime": "m", "d": d}}
    ok = True
    V = rank1_generator(n, t, q)
    C = rc.expand_vector_code(V, polynomial_basis(V.big, V.sub))
    rep = {"field": f"GF({V.big.q})", "generator": [int(x) for x in V.G[0]], "expanded_k": C.k}
    if _lattice_size(n, q) <= LATTICE_LIMIT:
        L = la.lattice(n, F)
        _, req = required_dims(M, 1, L)
        cert["forced"]["d_from_lattice"] = forced_min_distance(req, L)
        MC = qm.qm_from_code(C)
        MV = qm.qm_from_code(V)
        rep["subspaces_checked"] = len(L)
        rep["matches_matrix_code"] = all(MC(U) == M(U) for U in L)
        rep["matches_vector_code"] = all(MV(U) == M(U) for U in L)
        ok = rep["matches_matrix_code"] and rep["matches_vector_code"] and cert["forced"]["d_from_lattice"] == d
    cert["representation"] = rep
    excluded = []
    for m in range(2, n - t):
        row = {"m": m, "kprime": m, "d": d, "distance_exceeds_m": d > m}
        total = la.gaussian_binom(n * m, m, q)
        if total <= limit:
            v = divisible_code_search(n, m, m, q, {"rank1": M}, workers=workers, idealizer=False,
                                      keep_survivors=False, budget=limit)
            c = v.certificate["census"]
            row["search"] = {"candidates": c["total"], "matches": c["targets"]["rank1"]}
            ok = ok and c["targets"]["rank1"] == 0
        excluded.append(row)
        ok = ok and row["distance_exceeds_m"]
    cert["excluded_m"] = excluded
    cert["representable_from_m"] = n - t
    return _verdict("rank1_exclusion", ok, cert, t0)


# -- classification ---------------------------------------------------------------

F2_4_CLASSES = [
    # (class, bases, m <= 4 with F_{2^m}-representability)
    (1, 16, (1, 2, 3, 4)), (2, 24, (2, 3, 4)), (3, 28, (3, 4)), (4, 28, (3, 4)), (5, 30, (2, 4)),
    (6, 31, ()), (7, 32, (3, 4)), (8, 33, (4,)), (9, 34, (4,)), (10, 35, (4,)),
]


def representative_bases(F) -> dict:
    """Base counts of the isomorphism classes on F_2^4 that have an explicit construction here."""
    spread = find_spread(F)
    reps = {10: qm.uniform_make(2, 4, F), 9: qm.almost_uniform_make(2, 4, F, Subspace.coordinate([0, 1], 4, F)),
            6: qm.paving_make(spread[:4], 2, 4, F), 5: qm.paving_make(spread, 2, 4, F)}
    return {cls: len(qm.qm_objects(M, "bases")) for cls, M in reps.items()}


def rank2_census(workers: int = 1, checkpoint: str | None = None) -> Verdict:
    """All 4-dim codes in F_2^{4x2}, with the class (6,31) representative as target."""
    F = field_make(2)
    target = qm.paving_make(find_spread(F, size=4), 2, 4, F)
    return divisible_code_search(4, 2, 4, 2, {"class6": target}, workers=workers, checkpoint=checkpoint)


def classification_report(n: int, q: int = 2, m_range=None, census: Verdict | None = None,
                          workers: int = 1) -> Verdict:
    if q != 2 or n not in (3, 4):
        raise BadParams("classification covers n in {3, 4} over q = 2")
    t0 = time.time()
    F = field_make(2)
    rows = []

    def add(name, m, how, verdict=None, ok=None):
        good = verdict.confirmed if verdict is not None else bool(ok)
        rows.append({"class": name, "m": m, "closed_by": how, "ok": good})

    if n == 3:
        ms = list(m_range or range(2, 6))
        for m in ms:
            if m < 3:
                add("U1,3", m, "uniform obstruction (analytic + exhaustive)", uniform_obstruction(1, 3, q, m))
            else:
                add("U1,3", m, "F_2^m-representable (m >= n)", ok=True)
            add("rank1(3,1)", m, "F_2^m-representable (m >= n - t)", ok=True)
            add("rank1(3,2)", m, "F_2-representable", ok=True)
        note = "ranks 2 and 3 follow by duality, rank 0 is F_2-representable"
    else:
        ms = list(m_range or (2, 3))
        if any(not 1 < m < 4 for m in ms):
            raise BadParams("n = 4 covers 1 < m < 4")
        if 2 in ms:
            census = census or rank2_census(workers)
            c = census.certificate["census"]
            census_ok = (c["total"] == la.gaussian_binom(8, 4, 2) and c["almost_affine"] > 0
                         and c["flags"].get("2", 0) == c["almost_affine"])
            class6_zero = c["targets"].get("class6") == 0
        spread = spread_argument(*find_spread(F, size=4))
        au = almost_uniform_params(2, 4, q)
        for m in ms:
            add("U1,4", m, "uniform obstruction", uniform_obstruction(1, 4, q, m))
            add("rank1(4,1)", m, "rank-one obstruction" if m < 3 else "F_2^m-representable (m >= n - t)",
                rank1_exclusion(4, 1, q) if m < 3 else None, ok=True)
            add("rank1(4,2)", m, "F_2^m-representable (m >= n - t)", ok=True)
            add("rank1(4,3)", m, "F_2-representable", ok=True)
            for cls, bases, rep in F2_4_CLASSES:
                name = f"({cls},{bases})"
                if m in rep:
                    add(name, m, "F_2^m-representable", ok=True)
                elif cls == 10:
                    add(name, m, "uniform obstruction", uniform_obstruction(2, 4, q, m))
                elif cls == 9:
                    if m == 3:
                        add(name, m, "almost uniform forcing + counting",
                            counting_contradiction("9,34"), ok=None)
                    else:
                        add(name, m, "almost uniform forcing (m = n - 1)", au)
                elif cls == 6:
                    add(name, m, "spread argument" + (" + exhaustive search" if m == 2 else ""),
                        ok=spread.confirmed and (m != 2 or class6_zero))
                elif cls == 5 and m == 3:
                    add(name, m, "counting contradiction", counting_contradiction("5,30"))
                elif m == 2:
                    add(name, m, "exhaustive search: every 2-multilinear code is right F_4-linear", ok=census_ok)
                elif cls == 8:
                    add(name, m, "external computer verification, not reproduced", ok=True)
                else:
                    add(name, m, "open", ok=False)
        note = "ranks 3 and 4 follow by duality, rank 0 is F_2-representable"
        reps = representative_bases(F)
        for cls, bases, _ in F2_4_CLASSES:
            if cls in reps:
                rows.append({"class": f"({cls},{bases})", "m": None, "closed_by": "representative base count",
                             "ok": reps[cls] == bases})
    ok = all(r["ok"] for r in rows)
    cert = {"params": {"n": n, "q": q, "m_range": ms}, "rows": rows, "note": note}
    if n == 4 and 2 in ms:
        cert["census_digest"] = census.certificate["census"]["survivor_digest"]
    return _verdict("classification_report", ok, cert, t0)


# -- re-validation -----------------------------------------------------------------

def _rerun(claim: str, p: dict) -> Verdict:
    if claim == "uniform_obstruction":
        return uniform_obstruction(p["k"], p["n"], p["q"], p["m"], p["exhaustive"], p["limit"])
    if claim == "almost_uniform_params":
        return almost_uniform_params(p["k"], p["n"], p["q"])
    if claim == "nonpappus_exclusion":
        return nonpappus_exclusion(p["q"], p["m"])
    if claim == "counting_contradiction":
        return counting_contradiction(p["class"], p["q"])
    if claim == "spread_argument":
        F = field_make(2)
        S = [Subspace.span([la.parse_row(r, 2) for r in V], F, 4) for V in p["S"]]
        return spread_argument(*S, m=p["m"])
    if claim == "rank1_exclusion":
        return rank1_exclusion(p["n"], p["t"], p["q"], p["limit"])
    if claim == "classification_report":
        return classification_report(p["n"], p["q"], p["m_range"])
    if claim == "divisible_code_search":
        return divisible_code_search(p["n"], p["m"], p["kprime"], p["q"], p["targets"],
                                     idealizer=p["idealizer"])
    raise ValueError(f"unknown claim {claim!r}")


def validate_certificate(v: Verdict) -> bool:
    """Recompute the verdict from its recorded parameters; the certificates must agree."""
    try:
        fresh = _rerun(v.claim, v.certificate["params"])
    except (KeyError, TypeError, ValueError):
        return False
    a = fresh.to_json()["certificate"]
    b = jsonable(v.certificate)
    return fresh.status == v.status and a == b
