"""Exhaustive enumeration of k'-dimensional codes in F_q^{n x m}.

Each pivot profile of the flattened k' x nm echelon basis is one chunk.  Chunks
are independent, processed in a fixed order and merged in that order, so the
census does not depend on the number of workers.  Over GF(2) a chunk is
handled with packed integers: codewords are xor combinations of the basis and
|C(W)| is a lookup into a containment table.  Other fields go through the
annihilator system of rmcode.
"""

from __future__ import annotations

import hashlib
import json
import logging
import multiprocessing as mp
import os
import time
from functools import lru_cache

import numpy as np

from .. import linalg as la
from .. import rmcode as rc
from ..errors import BudgetExceeded
from ..gf import field_make, field_of_order
from .verdict import Verdict

log = logging.getLogger(__name__)

DEFAULT_BUDGET = 10**8
_SLICE = 1 << 13


# -- tables ---------------------------------------------------------------------

@lru_cache(maxsize=8)
def _gf2_tables(n: int, m: int):
    """colsp index of every packed n x m matrix, and the containment table."""
    F = field_make(2)
    L = la.lattice(n, F)
    nm = n * m
    if nm > 16:
        raise BudgetExceeded("packed tables need n*m <= 16")
    mats = la.unpack_rows(list(range(1 << nm)), nm).reshape(-1, n, m)
    colsp = np.empty(1 << nm, dtype=np.int64)
    for x in range(1 << nm):
        colsp[x] = L.index[la.subspace_canon(mats[x].T, F, n)]
    below = L.below
    contain = np.zeros((len(L), 1 << nm), dtype=bool)
    for j in range(len(L)):
        inside = np.array([below[j] >> i & 1 for i in range(len(L))], dtype=bool)
        contain[j] = inside[colsp]
    return contain


def _xor_span(bases: np.ndarray) -> np.ndarray:
    """All 2^k codewords of each packed basis, shape (count, 2^k)."""
    cnt, k = bases.shape
    cw = np.zeros((cnt, 1 << k), dtype=np.int64)
    for s in range(1, 1 << k):
        low = (s & -s).bit_length() - 1
        cw[:, s] = cw[:, s & (s - 1)] ^ bases[:, low]
    return cw


# -- chunk workers ----------------------------------------------------------------

def _dims_gf2(bases, n, m):
    contain = _gf2_tables(n, m)
    cw = _xor_span(bases)
    counts = contain[:, cw].sum(axis=2)
    return np.log2(counts).round().astype(np.int64)  # exact: counts are powers of two


def _dims_generic(codes, L):
    return np.array([[rc.c_sub_dim(C, W) for C in codes] for W in L], dtype=np.int64).reshape(len(L), len(codes))


def _survivor_record(C: rc.MatrixCode):
    return C.flat.tolist()


def _code_from_packed(row, n, m, F):
    flat = la.unpack_rows(list(map(int, row)), n * m)
    return rc.MatrixCode(n, m, F, flat)


def run_chunk(job) -> dict:
    n, m, k, q, pidx, targets, fast, want_flags = job
    F = field_of_order(q)
    L = la.lattice(n, F)
    prof = la.pivot_profiles(n * m, k)[pidx]
    out = {"profile": pidx, "total": 0, "almost_affine": 0, "survivors": [],
           "targets": {name: 0 for name in targets}, "target_survivors": {name: [] for name in targets},
           "flags": {}, "not_right_linear": 0}
    need = {name: np.asarray(v, dtype=np.int64) for name, v in targets.items()}

    def absorb(dims, codes_of):
        aa = (dims % m == 0).all(axis=0)
        out["total"] += dims.shape[1]
        out["almost_affine"] += int(aa.sum())
        hits = {name: (dims == v[:, None]).all(axis=0) for name, v in need.items()}
        for idx in np.nonzero(aa | np.any(list(hits.values()) or [np.zeros_like(aa)], axis=0))[0]:
            C = codes_of(idx)
            rec = _survivor_record(C)
            if aa[idx]:
                out["survivors"].append(rec)
                if want_flags:
                    _, flags = rc.right_idealizer(C)
                    for e, f in flags.items():
                        out["flags"][str(e)] = out["flags"].get(str(e), 0) + int(f)
                    if not flags.get(m, m == 1):
                        out["not_right_linear"] += 1
            for name, h in hits.items():
                if h[idx]:
                    out["targets"][name] += 1
                    out["target_survivors"][name].append(rec)

    if fast:
        bases_all = la.enum_rref_gf2(n * m, k, prof)
        for start in range(0, len(bases_all), _SLICE):
            bases = bases_all[start:start + _SLICE]
            dims = _dims_gf2(bases, n, m)
            absorb(dims, lambda i, b=bases: _code_from_packed(b[i], n, m, F))
    else:
        codes = []
        for S in la.enum_subspaces(n * m, F, k, profiles=[pidx]):
            codes.append(rc.MatrixCode(n, m, F, S.matrix))
            if len(codes) == _SLICE:
                absorb(_dims_generic(codes, L), lambda i, c=codes: c[i])
                codes = []
        if codes:
            absorb(_dims_generic(codes, L), lambda i, c=codes: c[i])
    return out


# -- driver ---------------------------------------------------------------------

def _merge(parts, targets, m):
    census = {"total": 0, "almost_affine": 0, "targets": {t: 0 for t in targets},
              "flags": {}, "not_right_linear": 0, "survivors": [],
              "target_survivors": {t: [] for t in targets}}
    for p in parts:
        census["total"] += p["total"]
        census["almost_affine"] += p["almost_affine"]
        census["not_right_linear"] += p["not_right_linear"]
        census["survivors"].extend(p["survivors"])
        for t in targets:
            census["targets"][t] += p["targets"][t]
            census["target_survivors"][t].extend(p["target_survivors"][t])
        for e, c in p["flags"].items():
            census["flags"][e] = census["flags"].get(e, 0) + c
    census["survivor_digest"] = hashlib.sha256(json.dumps(census["survivors"]).encode()).hexdigest()
    return census


def _load_checkpoint(path, config):
    if not path or not os.path.exists(path):
        return {}
    with open(path) as fh:
        data = json.load(fh)
    if data.get("config") != config:
        raise ValueError("checkpoint belongs to a different search")
    return {int(k): v for k, v in data["chunks"].items()}


def _save_checkpoint(path, config, done):
    tmp = path + ".tmp"
    with open(tmp, "w") as fh:
        json.dump({"config": config, "chunks": {str(k): v for k, v in sorted(done.items())}}, fh)
    os.replace(tmp, path)


def target_requirements(M, m: int, kprime: int, L) -> list[int]:
    """dim C(W) required of a code with M[C] = M, in lattice order."""
    perp = L.perp
    out = []
    for j in range(len(L)):
        v = kprime - m * M(L.subspaces[perp[j]])
        out.append(int(v) if v.denominator == 1 else -1)
    return out


def divisible_code_search(n: int, m: int, kprime: int, q: int, targets=None, *, workers: int = 1,
                          budget: int = DEFAULT_BUDGET, checkpoint: str | None = None,
                          fast: bool | None = None, idealizer: bool = True, keep_survivors: bool = True) -> Verdict:
    """Census of all k'-dim codes: almost affine ones, target matches, idealizer flags.

    ``targets`` maps names to q-matroids on F_q^n, or directly to the lists of
    required dim C(W) in lattice order.  A target is matched when every dim C(W)
    equals the required value.
    """
    F = field_of_order(q)
    total = la.gaussian_binom(n * m, kprime, q)
    if total > budget:
        raise BudgetExceeded(f"{total} candidates exceed budget {budget}")
    L = la.lattice(n, F)
    targets = dict(targets or {})
    reqs = {name: list(M) if isinstance(M, (list, tuple)) else target_requirements(M, m, kprime, L)
            for name, M in targets.items()}
    if fast is None:
        fast = q == 2 and n * m <= 16
    profiles = la.pivot_profiles(n * m, kprime)
    config = {"n": n, "m": m, "kprime": kprime, "q": q, "targets": reqs, "fast": fast,
              "idealizer": idealizer}
    done = _load_checkpoint(checkpoint, config)
    pending = [i for i in range(len(profiles)) if i not in done]
    jobs = [(n, m, kprime, q, i, reqs, fast, idealizer) for i in pending]
    t0 = time.time()
    if workers > 1 and len(jobs) > 1:
        ctx = mp.get_context("fork") if "fork" in mp.get_all_start_methods() else mp.get_context()
        with ctx.Pool(workers) as pool:
            for res in pool.imap_unordered(run_chunk, jobs):
                done[res["profile"]] = res
                if checkpoint:
                    _save_checkpoint(checkpoint, config, done)
    else:
        for job in jobs:
            res = run_chunk(job)
            done[res["profile"]] = res
            if checkpoint:
                _save_checkpoint(checkpoint, config, done)
    census = _merge([done[i] for i in range(len(profiles))], reqs, m)
    if census["total"] != total:
        raise RuntimeError(f"enumerated {census['total']} codes, expected {total}")
    census["expected_total"] = total
    census["chunks"] = len(profiles)
    if not keep_survivors:
        census.pop("survivors")
    status = "confirmed"
    if idealizer and census["not_right_linear"]:
        status = "refuted"
    cert = {"params": {"n": n, "m": m, "kprime": kprime, "q": q, "targets": reqs, "idealizer": idealizer},
            "census": census}
    return Verdict("divisible_code_search", status, cert,
                   {"seconds": round(time.time() - t0, 3), "workers": workers, "fast_path": fast})
