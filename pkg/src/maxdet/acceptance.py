"""Acceptance checks, shared by ``maxdet selftest`` and the test suite.

Each check returns a :class:`CriterionResult`; tolerances and runtime limits
are fixed here.
"""

from __future__ import annotations

import contextlib
import io
import json
import logging
import math
import time
from dataclasses import dataclass

import numpy as np

from . import bounds, oracle, orders, witnesses
from .linalg import det_exact

log = logging.getLogger(__name__)


@dataclass
class CriterionResult:
    number: int
    name: str
    ok: bool
    detail: str
    seconds: float
    limit: float | None = None

    @property
    def in_time(self) -> bool:
        return self.limit is None or self.seconds < self.limit

    @property
    def passed(self) -> bool:
        return self.ok and self.in_time

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        limit = f" (limit {self.limit:g}s)" if self.limit else ""
        return f"[{status}] {self.number:2d}. {self.name}: {self.detail} [{self.seconds:.2f}s{limit}]"


def _cli_json(argv) -> dict:
    from .cli import main

    buf = io.StringIO()
    with contextlib.redirect_stdout(buf):
        code = main(argv)
    if code != 0:
        raise RuntimeError(f"maxdet {' '.join(argv)} exited with {code}")
    return json.loads(buf.getvalue())


def _entry_R(report: dict, name: str) -> float:
    for e in report["entries"]:
        if e["name"] == name:
            return e["R_if_representable"]
    raise KeyError(name)


def check_d13() -> tuple[bool, str]:
    rep = _cli_json(["bound", "13", "--mode", "conjecture"])
    cond, kms, ref = _entry_R(rep, "conditional"), _entry_R(rep, "kms"), rep["reference"]["R"]
    ok = (abs(cond - 0.4839) <= 5e-4 and abs(kms - 0.2410) <= 5e-4
          and abs(ref - 0.8579) <= 1e-4 and rep["reference"]["D"] == "14929920")
    return ok, f"conditional R>={cond:.5f}, KMS R>={kms:.5f}, R(13)={ref:.5f}"


def check_n94() -> tuple[bool, str]:
    rep = _cli_json(["bound", "94", "--mode", "conjecture"])
    cond, kms = _entry_R(rep, "conditional"), _entry_R(rep, "kms")
    ok = abs(cond - 0.0605) <= 5e-4 and abs(kms - 0.0560) <= 5e-4
    return ok, f"conditional R>={cond:.5f}, KMS R>={kms:.5f}"


TABLE_ONE = {"ours_1": 0.4839, "ours_2": 0.5871, "ours_3": 1.649, "kms_1": 17.93, "kms_2": 5.437}


def check_table_one() -> tuple[bool, str]:
    got = bounds.table_one(10 ** 6)
    rel = {k: abs(got[k] - v) / v for k, v in TABLE_ONE.items()}
    worst = max(rel, key=rel.get)
    return all(r <= 1e-3 for r in rel.values()), f"worst relative error {rel[worst]:.2e} ({worst})"


def check_crossover(n_max: int = 500) -> tuple[bool, str]:
    bad = []
    for n in range(3, n_max + 1):
        r = n % 4
        if r == 0:
            continue
        ours = bounds.conditional_bound(n).ln_R
        kms = bounds.kms_bound(n).ln - bounds.ln_hadamard(n)
        if r == 1 and n >= 9 and not ours > kms:
            bad.append(n)
        elif r == 2 and n >= 82 and not ours > kms:
            bad.append(n)
        elif r == 3 and abs(ours - kms) > 1e-9 * max(1.0, abs(kms)):
            bad.append(n)
    return not bad, f"violations: {bad[:10] or 'none'} for n <= {n_max}"


def check_witnesses(n_max: int = 64) -> tuple[bool, str]:
    reg = orders.build_registry(2 * n_max + 8, "conjecture")
    constructive = orders.build_registry(2 * n_max + 8, "constructive")
    missing = [h for h in range(4, 69, 4) if not reg.has_matrix(h)]
    failures, skipped = [], []
    for n in range(3, n_max + 1):
        cert = witnesses.best_witness(n, reg)
        recheck = abs(det_exact(cert.matrix)) == cert.det_abs
        # the constructive-mode bound only uses orders with explicit matrices
        floor_c = bounds.unconditional_bound(n, constructive)
        if not (cert.verified and recheck and cert.ln_det >= floor_c.ln_D - 1e-9):
            failures.append(n)
            continue
        floor = bounds.unconditional_bound(n, reg)
        if not reg.has_matrix(floor.extra["h"]):
            skipped.append(n)
            log.info("n=%d: bound relies on order %d with no constructed matrix; skipped", n, floor.extra["h"])
            continue
        if cert.ln_det < floor.ln_D - 1e-9:
            failures.append(n)
    detail = (f"failures {failures or 'none'}; non-constructible orders {missing}; "
              f"skipped n {skipped or 'none'}")
    return not failures, detail


def check_oracle() -> tuple[bool, str]:
    Ds = [oracle.brute_force_D(n) for n in range(1, 6)]
    ok = Ds == [1, 2, 4, 16, 48]
    reg = orders.build_registry(40, "conjecture")
    for n in (3, 5):
        ok &= witnesses.best_witness(n, reg).det_abs == Ds[n - 1]
    worst = -math.inf
    for n in range(1, 6):
        report = bounds.bound_report(n, orders.build_registry(2 * n + 8, "conjecture"))
        ln_D = math.log(Ds[n - 1])
        for e in report.entries:
            worst = max(worst, e.ln_D - ln_D)
    ok &= worst <= 1e-9
    return ok, f"D(1..5)={Ds}; max(lower bound - ln D) = {worst:.3g}"


def check_block_identity(draws: int = 1000, seed: int = 0) -> tuple[bool, str]:
    rng = np.random.default_rng(seed)
    reg = orders.build_registry(32, "constructive")
    fails = 0
    for h in (4, 8, 12, 16, 20, 24, 32):
        H = reg.matrix(h)
        for _ in range(draws):
            d = int(rng.integers(1, h))
            rows = rng.choice(h, size=d, replace=False)
            cols = rng.choice(h, size=d, replace=False)
            if not witnesses.verify_block_identity(H, rows, cols):
                fails += 1
    return fails == 0, f"{fails} failures over {draws} splits x 7 orders"


def check_gap_inequalities(n_max: int = 1000) -> tuple[bool, str]:
    reg = orders.build_registry(2000, "constructive")
    table = orders.GapTable.build(2000)
    v_gamma, v_delta, v_three = [], [], []
    for n in range(1, n_max + 1):
        dn = orders.delta(n, reg).delta
        if n < 3 * dn:
            v_three.append(n)
        if n >= 8:
            lam = orders.lambda_(n / 2 - 1, table)
            if orders.gamma(n, reg) > 2 * lam:
                v_gamma.append(n)
            if dn > lam:
                v_delta.append(n)
    ok = not (v_gamma or v_delta or v_three)
    return ok, f"violations: gamma {len(v_gamma)}, delta {len(v_delta)}, n>=3delta {len(v_three)}"


def check_excess() -> tuple[bool, str]:
    reg = orders.build_registry(20, "constructive")
    sig = {h: witnesses.excess(witnesses.maximize_excess(reg.matrix(h))) for h in (4, 8, 12, 16, 20)}
    ok = sig[4] == 8 and sig[8] == 20
    ok &= all(s >= witnesses.excess_floor(h) for h, s in sig.items())
    det5 = witnesses.witness_excess_border(reg.matrix(4)).det_abs
    ok &= det5 == 48
    return ok, f"sigma {sig}; order-5 excess-border det {det5}"


def check_improved(n_max: int = 1000) -> tuple[bool, str]:
    bad = [n for n in range(1, n_max + 1) if not bounds.meets_sqrt3n_floor(n)]
    return not bad, f"violations: {bad[:10] or 'none'} for n <= {n_max}"


CRITERIA = [
    (1, "D(13) reproduction", check_d13, 1.0),
    (2, "n=94 reproduction", check_n94, 1.0),
    (3, "asymptotic table constants", check_table_one, None),
    (4, "crossover against KMS", check_crossover, None),
    (5, "witness certification 3..64", check_witnesses, 60.0),
    (6, "oracle agreement", check_oracle, 30.0),
    (7, "complementary block identity", check_block_identity, None),
    (8, "gap inequalities", check_gap_inequalities, None),
    (9, "excess maximization", check_excess, None),
    (10, "R(n) >= (3n)^(-1/2)", check_improved, None),
]


def run_criterion(number: int) -> CriterionResult:
    num, name, fn, limit = CRITERIA[number - 1]
    t0 = time.perf_counter()
    try:
        ok, detail = fn()
    except Exception as exc:  # a crash is a failed criterion, reported as such
        ok, detail = False, f"raised {type(exc).__name__}: {exc}"
    return CriterionResult(num, name, ok, detail, time.perf_counter() - t0, limit)


def run_all() -> list[CriterionResult]:
    return [run_criterion(c[0]) for c in CRITERIA]
