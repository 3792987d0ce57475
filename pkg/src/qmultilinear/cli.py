"""Command-line front end.

Exit codes: 0 confirmed or pass, 1 refuted or fail, 2 inconclusive or over
budget, 3 usage error.  Every report is a ``report_v1`` JSON object (or a
Markdown/CSV rendering of it) echoing the configuration.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import time

import numpy as np

from . import classical as cl
from . import linalg as la
from . import qmatroid as qm
from . import rmcode as rc
from . import tensor as tn
from .errors import BudgetExceeded, IdealizerTooLarge, QMError, UsageError
from .gf import field_of_order
from .verify import checkers as ck
from .verify.search import DEFAULT_BUDGET, divisible_code_search
from .verify.verdict import jsonable

REPORT_VERSION = "report_v1"
WORKERS_ENV = "QMULTILINEAR_WORKERS"
EXIT = {"confirmed": 0, "pass": 0, "refuted": 1, "fail": 1, "inconclusive": 2}
TIMING_KEYS = ("wall_time", "stats")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _ints(text: str) -> list[int]:
    return [int(x) for x in text.replace(",", " ").split()]


def _m_range(text: str) -> list[int]:
    if "-" in text or ".." in text:
        a, b = text.replace("..", "-").split("-")
        return list(range(int(a), int(b) + 1))
    return _ints(text)


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path) as fh:
        return fh.read()


def _subspace(text: str, n: int, F) -> la.Subspace:
    """Comma-separated rows, e.g. '100,010'; an empty string is the zero space."""
    rows = [la.parse_row(r, F.q) for r in text.split(",") if r.strip()] if text else []
    for r in rows:
        if len(r) != n:
            raise UsageError(f"row of length {len(r)}, expected {n}")
    return la.Subspace.span(np.array(rows, dtype=np.int64).reshape(-1, n), F, n)


def _load_code(path: str):
    text = _read(path)
    if text.lstrip().startswith("block"):
        return cl.block_to_matrix_code(cl.BlockCode.from_text(text))
    if text.lstrip().startswith("{"):
        return rc.MatrixCode.from_json(text)
    return rc.MatrixCode.from_text(text)


def _construction(args, F) -> qm.QMatroid:
    kind = args.construction
    n = args.n
    if kind == "uniform":
        return qm.uniform_make(args.k, n, F)
    if kind == "almost-uniform":
        return qm.almost_uniform_make(args.k, n, F, la.Subspace.coordinate(range(args.k), n, F))
    if kind == "rank1":
        return qm.rank1_make(n, args.t, F)
    if kind == "spread":
        if n != 4 or F.q != 2:
            raise UsageError("spread paving q-matroids live on F_2^4")
        return qm.paving_make(ck.find_spread(F)[: args.size], 2, 4, F)
    if kind == "nonpappus":
        return qm.nonpappus_make(F)
    raise UsageError(f"unknown construction {kind!r}")


def _target(spec: str, n: int, F) -> tuple[str, qm.QMatroid]:
    """uniform:K, almost-uniform:K, rank1:T, spread:SIZE, or a q-matroid JSON file."""
    if os.path.exists(spec):
        return os.path.basename(spec), qm.from_table(json.loads(_read(spec)), F)
    kind, _, val = spec.partition(":")
    ns = argparse.Namespace(construction=kind, n=n, k=int(val or 0), t=int(val or 0), size=int(val or 4))
    return spec, _construction(ns, F)


# -- command handlers: each returns (status, result dict) ---------------------------

def _from_verdict(v):
    return v.status, {"claim": v.claim, "certificate": v.certificate, "stats": v.stats}


def cmd_verify_uniform(a):
    return _from_verdict(ck.uniform_obstruction(a.k, a.n, a.q, a.m, a.exhaustive, a.budget, a.workers))


def cmd_verify_almost_uniform(a):
    return _from_verdict(ck.almost_uniform_params(a.k, a.n, a.q))


def cmd_verify_nonpappus(a):
    if a.m >= 9:
        A = ck.nonpappus_distribution(a.q, a.m)
        return "inconclusive", {"claim": "nonpappus_distribution", "distribution": A,
                                "sum": sum(A), "expected_sum": a.q ** (3 * a.m)}
    return _from_verdict(ck.nonpappus_exclusion(a.q, a.m))


def cmd_verify_rank1(a):
    return _from_verdict(ck.rank1_exclusion(a.n, a.t, a.q, a.budget, a.workers))


def cmd_verify_class(a):
    cls = a.cls.strip("()").replace(" ", "")
    if cls in ("9,34", "5,30"):
        return _from_verdict(ck.counting_contradiction(cls, a.q))
    if cls == "6,31":
        F = field_of_order(2)
        return _from_verdict(ck.spread_argument(*ck.find_spread(F, size=4), m=a.m))
    raise UsageError("class must be one of 9,34 5,30 6,31")


def cmd_search_divisible(a):
    F = field_of_order(a.q)
    targets = dict(_target(t, a.n, F) for t in a.target)
    v = divisible_code_search(a.n, a.m, a.k, a.q, targets, workers=a.workers, budget=a.budget,
                              checkpoint=a.checkpoint, keep_survivors=a.survivors)
    return _from_verdict(v)


def cmd_classify(a):
    return _from_verdict(ck.classification_report(a.n, a.q, a.m_range, workers=a.workers))


def cmd_code_info(a):
    C = _load_code(a.file)
    out = {"q": C.q, "n": C.n, "m": C.m, "k": C.k}
    A = rc.rank_distribution(C, budget=a.budget)
    out["rank_distribution"] = A
    out["min_distance"] = next((i for i, x in enumerate(A) if i and x), None)
    if C.n <= 6:
        aa, witness = rc.is_almost_affine(C)
        out["almost_affine"] = aa
        out["witness"] = witness.to_json() if witness is not None else None
    try:
        _, flags = rc.right_idealizer(C)
        out["idealizer_subfields"] = {str(e): f for e, f in flags.items()}
    except IdealizerTooLarge as exc:
        out["idealizer_subfields"] = str(exc)
    return "pass", out


def cmd_code_dual(a):
    C = rc.dual(_load_code(a.file))
    return "pass", {"dual": C.to_text(), "k": C.k}


def cmd_code_distribution(a):
    C = _load_code(a.file)
    D = rc.dual(C)
    A, B = rc.rank_distribution(C, a.budget), rc.rank_distribution(D, a.budget)
    checks = [rc.macwilliams_verify(C, r, a.budget)[2] for r in range(min(C.n, C.m) + 1)]
    return ("pass" if all(checks) else "fail"), {"rank_distribution": A, "dual_distribution": B,
                                                 "macwilliams": checks}


def cmd_qm_dump(a):
    F = field_of_order(a.q)
    if a.code:
        M = qm.qm_from_code(_load_code(a.code))
    else:
        M = _construction(a, F)
    return "pass", {"qmatroid": M.to_json()}


def _qm_table(path: str) -> dict:
    """A rank table, either bare or inside a `qm dump --json` report."""
    obj = json.loads(_read(path))
    if obj.get("schema") == REPORT_VERSION:
        obj = obj["result"]["qmatroid"]
    return obj


def cmd_qm_iso(a):
    A, B = _qm_table(a.first), _qm_table(a.second)
    F = field_of_order(A["q"])
    M1, M2 = qm.from_table(A, F), qm.from_table(B, field_of_order(B["q"]))
    ok, alpha = qm.qm_isomorphic(M1, M2, budget=a.budget)
    return ("pass" if ok else "fail"), {"isomorphic": ok, "alpha": alpha}


def cmd_tensor_rho(a):
    T = tn.gen_tensor(_load_code(a.file)) if a.code else tn.Tensor3.from_text(_read(a.file))
    k, n, m = T.shape
    U = _subspace(a.U, n, T.field)
    A = None
    if a.A:
        A = np.array([la.parse_row(r, T.field.q) for r in a.A.split(",")], dtype=np.int64)
    rng = np.random.default_rng(a.seed)
    out = {"U": U.to_json(), "rho_T": tn.rho_t(T, U, A)}
    out["rho_C"] = rc.rho_c(tn.code_of(T), U)
    out["random_A"] = [tn.rho_t(T, U, tn.random_A(U, rng)) for _ in range(a.samples)]
    ok = all(x == out["rho_T"] for x in out["random_A"] + [out["rho_C"]])
    return ("pass" if ok else "fail"), out


def cmd_fixtures_check(a):
    out = {}
    ok = True
    for name in ("nonpappus_f3", "u24_f2"):
        digest_ok = cl.fixture_digest(name) == cl.FIXTURE_SHA256[name]
        C = cl.load_fixture(name)
        mat, aa, witness = cl.matroid_from_block_code(C)
        row = {"checksum": digest_ok, "n": C.n, "m": C.m, "almost_affine": aa}
        if name == "nonpappus_f3":
            lines = mat.sets_of_rank(3, 2) if mat else []
            want = sorted(tuple(int(c) - 1 for c in ln) for ln in qm.NONPAPPUS_LINES)
            row["rank"] = int(mat.full_rank) if mat else None
            row["lines"] = ["".join(str(i + 1) for i in t) for t in lines]
            row["lines_ok"] = sorted(lines) == want
            row["axioms_ok"] = mat is not None and mat.check_axioms() is None
            good = row["lines_ok"] and row["rank"] == 3 and row["axioms_ok"]
        else:
            row["is_U24"] = mat == qm.classical_uniform(2, 4)
            _, flags = rc.right_idealizer(cl.block_to_matrix_code(C))
            row["idealizer_F4"] = flags.get(2, False)
            good = row["is_U24"] and row["idealizer_F4"]
        row["ok"] = digest_ok and aa and good
        ok = ok and row["ok"]
        out[name] = row
    return ("pass" if ok else "fail"), out


# -- parser -----------------------------------------------------------------------

def _common(p):
    p.add_argument("--json", action="store_true", help="shorthand for --format json")
    p.add_argument("--format", choices=("json", "markdown", "csv"), default=None)
    p.add_argument("--out", help="write the report here instead of stdout")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET, help="candidate cap")
    p.add_argument("--time-cap", type=float, default=None, help="seconds; reported, checked after the run")
    p.add_argument("--workers", type=int, default=None)
    p.add_argument("--checkpoint", default=None)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="qmultilinear", description="Multilinear representability of q-matroids.")
    sub = p.add_subparsers(dest="group", required=True, parser_class=_Parser)

    def leaf(parent, name, fn, **kw):
        s = parent.add_parser(name, **kw)
        _common(s)
        s.set_defaults(fn=fn)
        return s

    v = sub.add_parser("verify").add_subparsers(dest="what", required=True, parser_class=_Parser)
    s = leaf(v, "uniform", cmd_verify_uniform)
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--m", type=int, required=True)
    s.add_argument("--q", type=int, default=2)
    s.add_argument("--exhaustive", action=argparse.BooleanOptionalAction, default=None)
    s = leaf(v, "almost-uniform", cmd_verify_almost_uniform)
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--q", type=int, default=2)
    s = leaf(v, "nonpappus", cmd_verify_nonpappus)
    s.add_argument("--q", type=int, required=True)
    s.add_argument("--m", type=int, required=True)
    s = leaf(v, "rank1", cmd_verify_rank1)
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--t", type=int, required=True)
    s.add_argument("--q", type=int, default=2)
    s = leaf(v, "class", cmd_verify_class)
    s.add_argument("--class", dest="cls", required=True, help="9,34  5,30  or 6,31")
    s.add_argument("--q", type=int, default=2)
    s.add_argument("--m", type=int, default=2)

    sr = sub.add_parser("search").add_subparsers(dest="what", required=True, parser_class=_Parser)
    s = leaf(sr, "divisible", cmd_search_divisible)
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--m", type=int, required=True)
    s.add_argument("--k", type=int, required=True, help="code dimension k'")
    s.add_argument("--q", type=int, default=2)
    s.add_argument("--target", action="append", default=[],
                   help="uniform:K, almost-uniform:K, rank1:T, spread:SIZE or a q-matroid JSON file")
    s.add_argument("--survivors", action=argparse.BooleanOptionalAction, default=False,
                   help="include survivor bases in the report")

    s = leaf(sub, "classify", cmd_classify)
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--q", type=int, default=2)
    s.add_argument("--m-range", type=_m_range, default=None)

    c = sub.add_parser("code").add_subparsers(dest="what", required=True, parser_class=_Parser)
    for name, fn in (("info", cmd_code_info), ("dual", cmd_code_dual), ("distribution", cmd_code_distribution)):
        s = leaf(c, name, fn)
        s.add_argument("file")
    c.choices["info"].set_defaults(budget=1 << 24)
    c.choices["distribution"].set_defaults(budget=1 << 24)

    qq = sub.add_parser("qm").add_subparsers(dest="what", required=True, parser_class=_Parser)
    s = leaf(qq, "dump", cmd_qm_dump)
    s.add_argument("--construction", choices=("uniform", "almost-uniform", "rank1", "spread", "nonpappus"),
                   default="uniform")
    s.add_argument("--code", help="dump the q-matroid of a code file instead")
    s.add_argument("--n", type=int, default=4)
    s.add_argument("--k", type=int, default=2)
    s.add_argument("--t", type=int, default=1)
    s.add_argument("--size", type=int, default=4)
    s.add_argument("--q", type=int, default=2)
    s = leaf(qq, "iso", cmd_qm_iso)
    s.add_argument("first")
    s.add_argument("second")
    s.set_defaults(budget=100_000)

    t = sub.add_parser("tensor").add_subparsers(dest="what", required=True, parser_class=_Parser)
    s = leaf(t, "rho", cmd_tensor_rho)
    s.add_argument("file")
    s.add_argument("--U", required=True, help="rows of a basis, comma separated, e.g. 100,010")
    s.add_argument("--A", help="rows of an invertible A, comma separated")
    s.add_argument("--code", action="store_true", help="the file holds a code rather than a tensor")
    s.add_argument("--samples", type=int, default=10)

    f = sub.add_parser("fixtures").add_subparsers(dest="what", required=True, parser_class=_Parser)
    leaf(f, "check", cmd_fixtures_check)
    return p


# -- rendering --------------------------------------------------------------------

def _flatten(obj, prefix=""):
    if isinstance(obj, dict):
        for k, v in obj.items():
            yield from _flatten(v, f"{prefix}.{k}" if prefix else str(k))
    elif isinstance(obj, list) and len(obj) > 16:
        yield prefix, json.dumps(obj)
    elif isinstance(obj, list):
        if all(not isinstance(x, (dict, list)) for x in obj):
            yield prefix, json.dumps(obj)
        else:
            for i, v in enumerate(obj):
                yield from _flatten(v, f"{prefix}[{i}]")
    else:
        yield prefix, obj


def render(report: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(report, indent=2) + "\n"
    rows = list(_flatten(report))
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["key", "value"])
        w.writerows(rows)
        return buf.getvalue()
    lines = [f"## {report['command']}: {report['status']}", "", "| key | value |", "|---|---|"]
    for k, v in rows:
        lines.append(f"| {k} | {str(v).replace('|', '/')} |")
    return "\n".join(lines) + "\n"


def comparable(report: dict) -> dict:
    """The report without timing fields, for reproducibility checks."""
    out = {k: v for k, v in report.items() if k not in TIMING_KEYS}
    if isinstance(out.get("result"), dict):
        out["result"] = {k: v for k, v in out["result"].items() if k not in TIMING_KEYS}
    return out


def run(argv=None) -> tuple[int, dict]:
    t0 = time.time()
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        return 3, {"schema": REPORT_VERSION, "status": "usage_error", "error": str(exc)}
    if args.workers is None:
        args.workers = int(os.environ.get(WORKERS_ENV, "1"))
    if args.budget <= 0 or args.workers <= 0:
        return 3, {"schema": REPORT_VERSION, "status": "usage_error", "error": "budget and workers must be positive"}
    command = " ".join(x for x in (args.group, getattr(args, "what", None)) if x)
    config = {k: v for k, v in vars(args).items() if k not in ("fn", "group", "what", "json", "format", "out")}
    report = {"schema": REPORT_VERSION, "command": command, "config": config, "seed": args.seed}
    try:
        status, result = args.fn(args)
    except BudgetExceeded as exc:
        status, result = "inconclusive", {"error": f"budget: {exc}"}
    except (UsageError, QMError, ValueError, OSError) as exc:
        report.update(status="usage_error", error=f"{type(exc).__name__}: {exc}")
        return 3, report
    wall = time.time() - t0
    if args.time_cap is not None and wall > args.time_cap and status in ("confirmed", "pass"):
        status = "inconclusive"
        result["time_cap_exceeded"] = True
    report["status"] = status
    report["result"] = jsonable(result)
    report["wall_time"] = round(wall, 3)
    return EXIT[status], report


def _output_options(argv) -> tuple[str, str | None]:
    ns, _ = _Options().parse_known_args(argv)
    return ("json" if ns.json else ns.format or "markdown"), ns.out


class _Options(argparse.ArgumentParser):
    """Just the rendering flags, so usage errors can still honour them."""

    def __init__(self):
        super().__init__(add_help=False)
        self.add_argument("--json", action="store_true")
        self.add_argument("--format", choices=("json", "markdown", "csv"), default=None)
        self.add_argument("--out", default=None)

    def error(self, message):
        raise UsageError(message)


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    code, report = run(argv)
    try:
        fmt, out = _output_options(argv)
    except UsageError:
        fmt, out = "json", None
    text = render(report, fmt) if "command" in report else json.dumps(report) + "\n"
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if code == 3:
        print(f"error: {report.get('error')}", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
