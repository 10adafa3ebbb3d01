"""Exact maximal determinants at tiny orders, and reference values.

``brute_force_D`` enumerates every {0,1} matrix of order n - 1 (the image of
the beta map), so D(n) = 2**(n-1) * max |det|.  The last row enters the
determinant linearly through its cofactors, so for each choice of the other
rows the best last row is read off from the cofactor signs.
"""

from __future__ import annotations

import csv
import functools
import io
import math
import os
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .linalg import PreconditionError

ORACLE_CAP = 6
CITED_REFERENCES = {13: (14929920, "Raghavarao (cited value for D(13))")}
REFERENCE_FILE = "reference_D.csv"


def _batch_det(A: np.ndarray) -> np.ndarray:
    """Exact determinants of a stack of small integer matrices (Laplace expansion)."""
    k = A.shape[-1]
    if k == 1:
        return A[:, 0, 0].copy()
    if k == 2:
        return A[:, 0, 0] * A[:, 1, 1] - A[:, 0, 1] * A[:, 1, 0]
    total = np.zeros(A.shape[0], dtype=np.int64)
    for j in range(k):
        sub = np.delete(A[:, 1:, :], j, axis=2)
        term = A[:, 0, j] * _batch_det(sub)
        total += term if j % 2 == 0 else -term
    return total


def _max_bin_det(m: int, chunk: int = 1 << 15) -> int:
    """max |det| over all m x m {0,1} matrices."""
    if m == 1:
        return 1
    bits = (m - 1) * m
    best = 0
    weights = 1 << np.arange(bits, dtype=np.int64)
    for start in range(0, 1 << bits, chunk):
        codes = np.arange(start, min(start + chunk, 1 << bits), dtype=np.int64)
        top = ((codes[:, None] & weights) != 0).astype(np.int64).reshape(-1, m - 1, m)
        # cofactors of the last row: det(A) = sum_j x_j * cof_j
        cof = np.stack([
            (-1) ** (m - 1 + j) * _batch_det(np.delete(top, j, axis=2)) for j in range(m)
        ], axis=1)
        pos = np.where(cof > 0, cof, 0).sum(axis=1)
        neg = np.where(cof < 0, -cof, 0).sum(axis=1)
        best = max(best, int(pos.max()), int(neg.max()))
    return best


@functools.lru_cache(maxsize=None)
def brute_force_D(n: int, cap: int = ORACLE_CAP) -> int:
    """D(n) by exhaustive enumeration, for 1 <= n <= cap."""
    if not 1 <= n <= cap:
        raise PreconditionError(f"brute_force_D supports 1 <= n <= {cap}, got {n}")
    if n == 1:
        return 1
    return 2 ** (n - 1) * _max_bin_det(n - 1)


@dataclass
class ReferenceTable:
    """Known maximal determinants with their provenance."""

    values: dict[int, tuple[int, str]] = field(default_factory=dict)

    def load_csv(self, path) -> list[int]:
        """Read ``n,D,source`` rows; returns the orders accepted.

        A row is rejected if the source is missing, if 2**(n-1) does not
        divide D, if D exceeds the Hadamard bound, or if any proven lower
        bound exceeds it.
        """
        accepted = []
        text = Path(path).read_text()
        for row in csv.reader(io.StringIO(text)):
            if not row or row[0].strip().lower() in ("n", "") or row[0].startswith("#"):
                continue
            if len(row) < 3 or not row[2].strip():
                raise ValueError(f"{path}: row {row} needs n, D and a source")
            n, D, source = int(row[0]), int(row[1]), row[2].strip()
            check_reference(n, D)
            self.values[n] = (D, source)
            accepted.append(n)
        return accepted

    def get(self, n: int) -> int | None:
        hit = self.values.get(n)
        return hit[0] if hit else None

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["n", "D", "source"])
        for n in sorted(self.values):
            w.writerow([n, self.values[n][0], self.values[n][1]])
        return buf.getvalue()


def check_reference(n: int, D: int) -> None:
    """Raise ValueError unless D is consistent with every bound we can prove for n."""
    from .bounds import bound_report
    from .orders import build_registry

    if n < 1 or D < 1:
        raise ValueError(f"invalid reference n={n}, D={D}")
    if D % 2 ** (n - 1):
        raise ValueError(f"D({n})={D} is not divisible by 2**{n - 1}")
    if D * D > n ** n:
        raise ValueError(f"D({n})={D} exceeds the Hadamard bound")
    report = bound_report(n, build_registry(2 * n + 8, "known-orders"))
    ln_D = math.log(D)
    for e in report.entries:
        if e.ln_D > ln_D + 1e-9:
            raise ValueError(f"D({n})={D} is below the {e.name} lower bound")


def default_table(data_dir: str | os.PathLike | None = None) -> ReferenceTable:
    """The cited value of D(13) plus ``reference_D.csv`` from ``data_dir`` or $MAXDET_DATA_DIR."""
    table = ReferenceTable({n: v for n, v in CITED_REFERENCES.items()})
    data_dir = data_dir or os.environ.get("MAXDET_DATA_DIR")
    if data_dir:
        path = Path(data_dir) / REFERENCE_FILE
        if path.exists():
            table.load_csv(path)
    return table


def reference_D(n: int, table: ReferenceTable | None = None, oracle_cap: int = ORACLE_CAP) -> int | None:
    """A known value of D(n), or None.

    Orders up to ``oracle_cap`` come from exhaustive search; others from
    ``table`` (default: :func:`default_table`).
    """
    if 1 <= n <= oracle_cap:
        return brute_force_D(n)
    table = table if table is not None else default_table()
    return table.get(n)


def oracle_csv(ns) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["n", "D", "source"])
    for n in ns:
        w.writerow([n, brute_force_D(n), "exhaustive enumeration"])
    return buf.getvalue()
