"""Command-line interface: ``maxdet <command> ...``.

Exit codes: 0 success, 1 verification failure, 2 invalid arguments or input,
3 registry too small, 4 no witness constructible.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import math
import os
import sys
from pathlib import Path

from . import bounds, oracle, orders, witnesses
from .linalg import (
    MatrixFormatError,
    PreconditionError,
    SignMatrix,
    complementary_split,
    det_exact,
    is_hadamard,
    read_matrix,
)

log = logging.getLogger("maxdet")

EXIT_VERIFY_FAILED = 1
EXIT_USAGE = 2
EXIT_REGISTRY = 3
EXIT_NO_WITNESS = 4


def _data_dir() -> Path | None:
    d = os.environ.get("MAXDET_DATA_DIR")
    return Path(d) if d else None


def make_registry(cap: int, mode: str) -> orders.OrderRegistry:
    """Registry with every Hadamard matrix file found in $MAXDET_DATA_DIR loaded."""
    d = _data_dir()
    paths = sorted(d.glob("*.txt")) if d and d.is_dir() else []
    return orders.build_registry(cap, mode, paths)


def _cap(args, n: int) -> int:
    return args.cap if args.cap is not None else 2 * n + 8


def _emit(obj) -> None:
    print(json.dumps(obj, indent=2))


# ---------------------------------------------------------------------------

def cmd_bound(args) -> int:
    reg = make_registry(_cap(args, args.n), args.mode)
    report = bounds.bound_report(args.n, reg, oracle.reference_D(args.n, oracle_cap=5))
    sys.stdout.write(report.to_csv() if args.format == "csv" else report.to_json() + "\n")
    return 0


def write_certificate(cert: witnesses.WitnessCertificate, prefix: str) -> tuple[Path, Path]:
    prefix = Path(prefix)
    matrix_path = prefix.with_name(prefix.name + ".txt")
    cert_path = prefix.with_name(prefix.name + ".json")
    matrix_path.write_text(cert.matrix_text())
    payload = cert.as_dict()
    payload["matrix_file"] = matrix_path.name
    cert_path.write_text(json.dumps(payload, indent=2) + "\n")
    return cert_path, matrix_path


def cmd_witness(args) -> int:
    reg = make_registry(_cap(args, args.n), args.mode)
    cert = witnesses.best_witness(args.n, reg, restarts=args.restarts, seed=args.seed)
    payload = cert.as_dict()
    if args.out:
        _, matrix_path = write_certificate(cert, args.out)
        payload["matrix_file"] = matrix_path.name
    _emit(payload)
    return 0 if cert.verified else EXIT_VERIFY_FAILED


TABLE_COLUMNS = [
    "n", "n_mod_4", "delta",
    "unconditional_R", "conditional_R", "conditional_proof_R", "sylvester_doubling_R",
    "kms_R", "de_launey_levin_R", "clements_lindstrom_R",
    "ln_hadamard_upper", "ln_barba_upper",
    "witness_det", "witness_R", "reference_D", "reference_R",
]


def table_rows(n_min: int, n_max: int, mode: str, with_witness: bool = False, seed: int = 0,
               restarts: int = witnesses.DEFAULT_RESTARTS) -> list[dict]:
    reg = make_registry(2 * n_max + 8, mode)
    refs = oracle.default_table()
    rows = []
    for n in range(n_min, n_max + 1):
        report = bounds.bound_report(n, reg)
        row = {"n": n, "n_mod_4": n % 4, "delta": report.delta}
        for e in report.entries:
            row[f"{e.name}_R"] = e.R
        row["ln_hadamard_upper"] = report.upper["hadamard"]
        row["ln_barba_upper"] = report.upper.get("barba")
        if with_witness:
            try:
                cert = witnesses.best_witness(n, reg, restarts=restarts, seed=seed)
            except witnesses.NoWitness:
                pass
            else:
                row["witness_det"] = cert.det_abs
                row["witness_R"] = math.exp(cert.ln_R)
        ref = oracle.reference_D(n, refs, oracle_cap=5)
        if ref is not None:
            row["reference_D"] = ref
            row["reference_R"] = math.exp(math.log(ref) - bounds.ln_hadamard(n))
        rows.append(row)
    return rows


def _cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, float):
        return f"{v:.6g}"
    return str(v)


def cmd_table(args) -> int:
    if args.n_min < 1 or args.n_max < args.n_min:
        raise PreconditionError("need 1 <= n_min <= n_max")
    rows = table_rows(args.n_min, args.n_max, args.mode, args.witness, args.seed, args.restarts)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(TABLE_COLUMNS)
    for row in rows:
        w.writerow([_cell(row.get(c)) for c in TABLE_COLUMNS])
    sys.stdout.write(buf.getvalue())
    return 0


def cmd_orders(args) -> int:
    print(make_registry(args.cap, args.mode).to_json())
    return 0


def cmd_gaps(args) -> int:
    reg = make_registry(args.cap, args.mode)
    table = orders.GapTable.build(args.cap)
    out = []
    for n in range(1, args.cap // 2 + 1):
        out.append({
            "n": n,
            "lambda": orders.lambda_(n, table),
            "gamma": orders.gamma(n, reg),
            "delta": orders.delta(n, reg).delta,
        })
    print(json.dumps({"cap": args.cap, "mode": args.mode, "rows": out}))
    return 0


def cmd_excess(args) -> int:
    reg = make_registry(max(args.h, 2), "constructive")
    if not reg.has_matrix(args.h):
        raise witnesses.NoWitness(f"no matrix of order {args.h} available")
    H = reg.matrix(args.h)
    S = witnesses.maximize_excess(H, restarts=args.restarts, seed=args.seed)
    sigma = witnesses.excess(S)
    _emit({
        "h": args.h,
        "tag": reg.tag(args.h),
        "sigma_achieved": sigma,
        "sigma_floor": witnesses.excess_floor(args.h) if args.h >= 4 else None,
        "exhaustive": args.h <= witnesses.EXHAUSTIVE_EXCESS_LIMIT,
        "hadamard": is_hadamard(S),
    })
    return 0


def cmd_oracle(args) -> int:
    D = oracle.brute_force_D(args.n)
    _emit({"n": args.n, "D": str(D), "source": "exhaustive enumeration"})
    return 0


def verify_certificate(cert_path) -> dict:
    """Recompute everything a certificate claims.  Returns a result dict with ``verified``."""
    cert_path = Path(cert_path)
    cert = json.loads(cert_path.read_text())
    M = read_matrix(cert_path.parent / cert["matrix_file"])
    if not isinstance(M, SignMatrix) or M.order != cert["n"]:
        return {"verified": False, "reason": "matrix file does not match certificate"}
    det_abs = abs(det_exact(M))
    result = {
        "n": M.order,
        "det_abs": str(det_abs),
        "det_matches": str(det_abs) == cert["det_abs"],
        "meets_claim": det_abs > 0 and math.log(det_abs) >= cert["claimed_ln_D"] - witnesses.LOG_TOL,
    }
    ok = result["det_matches"] and result["meets_claim"] and bool(cert.get("verified"))
    if cert["construction"].startswith("minor"):
        h = cert["h"]
        reg = make_registry(max(2, h), "conjecture")
        if reg.has_matrix(h):
            H = reg.matrix(h)
            small, A = complementary_split(H, cert["rows"], cert["cols"])
            result["block_matches"] = A == M
            result["block_identity"] = witnesses.verify_block_identity(H, cert["rows"], cert["cols"])
            ok = ok and result["block_matches"] and result["block_identity"]
        else:
            result["block_identity"] = None
    result["verified"] = bool(ok)
    return result


def cmd_verify(args) -> int:
    path = Path(args.path)
    if path.suffix == ".json":
        result = verify_certificate(path)
    else:
        M = read_matrix(path)
        result = {"order": M.order, "det_abs": str(abs(det_exact(M)))}
        if isinstance(M, SignMatrix):
            result["hadamard"] = is_hadamard(M)
        result["verified"] = True
    _emit(result)
    return 0 if result["verified"] else EXIT_VERIFY_FAILED


def cmd_selftest(args) -> int:
    from .acceptance import run_all

    results = run_all()
    for r in results:
        print(r.line())
    return 0 if all(r.ok for r in results) else EXIT_VERIFY_FAILED


# ---------------------------------------------------------------------------

def _positive(s: str) -> int:
    v = int(s)
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {s}")
    return v


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="maxdet", description=__doc__.splitlines()[0])
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    def mode_flags(sp, default="conjecture"):
        sp.add_argument("--mode", choices=orders.MODES, default=default)
        sp.add_argument("--cap", type=_positive, default=None, help="registry cap (default 2n+8)")

    sp = sub.add_parser("bound", help="lower and upper bounds for one order")
    sp.add_argument("n", type=_positive)
    mode_flags(sp)
    sp.add_argument("--format", choices=("json", "csv"), default="json")
    sp.set_defaults(func=cmd_bound)

    sp = sub.add_parser("witness", help="build and certify a witness matrix")
    sp.add_argument("n", type=_positive)
    mode_flags(sp)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--restarts", type=_positive, default=witnesses.DEFAULT_RESTARTS)
    sp.add_argument("--out", help="write PREFIX.txt (matrix) and PREFIX.json (certificate)")
    sp.set_defaults(func=cmd_witness)

    sp = sub.add_parser("table", help="comparison table over a range of orders (CSV)")
    sp.add_argument("n_min", type=_positive)
    sp.add_argument("n_max", type=_positive)
    sp.add_argument("--mode", choices=orders.MODES, default="conjecture")
    sp.add_argument("--witness", action="store_true", help="also build witnesses")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--restarts", type=_positive, default=witnesses.DEFAULT_RESTARTS)
    sp.set_defaults(func=cmd_table)

    sp = sub.add_parser("orders", help="dump the order registry")
    sp.add_argument("--cap", type=_positive, default=64)
    sp.add_argument("--mode", choices=orders.MODES, default="conjecture")
    sp.set_defaults(func=cmd_orders)

    sp = sub.add_parser("gaps", help="lambda, gamma and delta for n <= cap/2")
    sp.add_argument("--cap", type=_positive, default=200)
    sp.add_argument("--mode", choices=orders.MODES, default="constructive")
    sp.set_defaults(func=cmd_gaps)

    sp = sub.add_parser("excess", help="maximize the excess of a constructed Hadamard matrix")
    sp.add_argument("h", type=_positive)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--restarts", type=_positive, default=witnesses.DEFAULT_RESTARTS)
    sp.set_defaults(func=cmd_excess)

    sp = sub.add_parser("oracle", help="exhaustive D(n) for n <= 6")
    sp.add_argument("n", type=_positive)
    sp.set_defaults(func=cmd_oracle)

    sp = sub.add_parser("verify", help="re-verify a certificate (.json) or matrix file")
    sp.add_argument("path")
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("selftest", help="run the acceptance checks")
    sp.set_defaults(func=cmd_selftest)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except orders.RegistryTooSmall as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_REGISTRY
    except witnesses.NoWitness as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NO_WITNESS
    except (PreconditionError, MatrixFormatError, OSError, ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
