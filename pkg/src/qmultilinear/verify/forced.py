"""Quantities forced on a hypothetical code C with M[C] equal to a given q-matroid.

If ρ_C = ρ_M and the block size is m, then k' = m·ρ(E) and for every
subspace W we need dim C(W) = k' - m·ρ(W^⊥).  Everything here is derived
from those required dimensions alone, without any code in hand.
"""

from __future__ import annotations

from fractions import Fraction

from .. import linalg as la
from ..errors import BadParams


def required_dims(M, m: int, L: la.Lattice | None = None):
    L = L or la.lattice(M.n, M.field)
    kp = m * M.full_rank
    if kp.denominator != 1:
        raise BadParams("m * rho(E) is not an integer")
    perp = L.perp
    req = []
    for j in range(len(L)):
        v = kp - m * M(L.subspaces[perp[j]])
        if v.denominator != 1:
            raise BadParams(f"non-integral required dimension at {L.subspaces[j]}")
        req.append(int(v))
    return int(kp), req


def forced_min_distance(req, L: la.Lattice):
    """Least dim W with C(W) required nonzero: the minimum rank of a codeword."""
    dims = [L.subspaces[j].dim for j in range(len(L)) if req[j] > 0]
    return min(dims) if dims else None


def mobius(k: int, q: int) -> int:
    return (-1) ** k * q ** (k * (k - 1) // 2)


def exact_support_counts(req, L: la.Lattice, q: int) -> list[int]:
    """For each W, the number of codewords with column space exactly W.

    |C(W)| = sum over W' <= W of exact(W'), inverted with the Möbius function
    of the subspace lattice.
    """
    below = L.below
    dims = [U.dim for U in L]
    out = []
    for j in range(len(L)):
        tot = 0
        b = below[j]
        i = 0
        while b:
            if b & 1:
                tot += mobius(dims[j] - dims[i], q) * q ** req[i]
            b >>= 1
            i += 1
        out.append(tot)
    return out


def forced_distribution(M, m: int, L: la.Lattice | None = None):
    """(k', A_0..A_n) forced by the required dimensions, via Möbius inversion."""
    L = L or la.lattice(M.n, M.field)
    kp, req = required_dims(M, m, L)
    ex = exact_support_counts(req, L, M.field.q)
    A = [0] * (M.n + 1)
    for j, U in enumerate(L):
        A[U.dim] += ex[j]
    return kp, A


def forced_parameters(M, m: int, L: la.Lattice | None = None) -> dict:
    L = L or la.lattice(M.n, M.field)
    kp, req = required_dims(M, m, L)
    return {"kprime": kp, "d": forced_min_distance(req, L)}


def singleton_ok(n: int, m: int, k: int, d: int) -> bool:
    return k <= max(n, m) * (min(n, m) - d + 1)


def frac_str(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
