"""Exact integer linear algebra on dense {+1,-1} and {0,1} matrices.

Determinants are computed by fraction-free (Bareiss) elimination over Python
integers, so every value is exact regardless of size.  Matrices are stored as
read-only ``int8`` numpy arrays; arithmetic that can overflow is always done
on Python ints.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

DEFAULT_ORDER_CAP = 256


class PreconditionError(ValueError):
    """Raised when an operation is called outside its domain."""


class MatrixFormatError(ValueError):
    """Raised when matrix text cannot be parsed."""


def _frozen_square(entries, allowed: tuple[int, ...], kind: str) -> np.ndarray:
    arr = np.array(entries, dtype=np.int64)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] < 1:
        raise PreconditionError(f"{kind} must be a non-empty square array, got shape {arr.shape}")
    if not np.isin(arr, allowed).all():
        raise PreconditionError(f"{kind} entries must lie in {allowed}")
    arr = arr.astype(np.int8)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class SignMatrix:
    """Square matrix with every entry equal to +1 or -1."""

    entries: np.ndarray

    def __init__(self, entries):
        object.__setattr__(self, "entries", _frozen_square(entries, (-1, 1), "SignMatrix"))

    @property
    def order(self) -> int:
        return self.entries.shape[0]

    def __eq__(self, other):
        if not isinstance(other, SignMatrix):
            return NotImplemented
        return np.array_equal(self.entries, other.entries)

    def __hash__(self):
        return hash(self.entries.tobytes())

    def __repr__(self):
        return f"SignMatrix(order={self.order})"


@dataclass(frozen=True, eq=False)
class BinMatrix:
    """Square matrix with every entry equal to 0 or 1."""

    entries: np.ndarray

    def __init__(self, entries):
        object.__setattr__(self, "entries", _frozen_square(entries, (0, 1), "BinMatrix"))

    @property
    def order(self) -> int:
        return self.entries.shape[0]

    def __eq__(self, other):
        if not isinstance(other, BinMatrix):
            return NotImplemented
        return np.array_equal(self.entries, other.entries)

    def __hash__(self):
        return hash(self.entries.tobytes())

    def __repr__(self):
        return f"BinMatrix(order={self.order})"


def _rows(M) -> list[list[int]]:
    if isinstance(M, (SignMatrix, BinMatrix)):
        M = M.entries
    return [[int(x) for x in row] for row in np.asarray(M)]


def bareiss_det(rows: list[list[int]]) -> int:
    """Determinant of an integer matrix given as a list of rows.

    The input list is consumed (rows are overwritten).  Pivoting takes the
    first nonzero entry at or below the diagonal in the current column.
    """
    n = len(rows)
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if rows[k][k] == 0:
            for i in range(k + 1, n):
                if rows[i][k] != 0:
                    rows[k], rows[i] = rows[i], rows[k]
                    sign = -sign
                    break
            else:
                return 0
        rk = rows[k]
        pk = rk[k]
        tail = rk[k + 1:]
        for i in range(k + 1, n):
            ri = rows[i]
            a = ri[k]
            ri[k + 1:] = [(pk * x - a * y) // prev for x, y in zip(ri[k + 1:], tail)]
        prev = pk
    return sign * rows[-1][-1]


def det_exact(M) -> int:
    """Exact determinant of a SignMatrix, BinMatrix or square integer array."""
    return bareiss_det(_rows(M))


def is_hadamard(M: SignMatrix) -> bool:
    """True iff ``M @ M.T == order * I`` in exact integer arithmetic."""
    A = np.asarray(M.entries, dtype=np.int64)
    n = A.shape[0]
    return bool(np.array_equal(A @ A.T, n * np.eye(n, dtype=np.int64)))


def normalize(A: SignMatrix) -> SignMatrix:
    """Negate rows and columns so that the first row and column are all +1."""
    E = np.asarray(A.entries, dtype=np.int64)
    E = E * E[:, :1]
    E = E * E[:1, :]
    return SignMatrix(E)


def beta_map(A: SignMatrix) -> BinMatrix:
    """Map an order-n sign matrix to an order-(n-1) 0/1 matrix.

    After normalizing the first row and column to +1 they are dropped and the
    remaining entries are mapped by +1 -> 0, -1 -> 1.  The result satisfies
    ``|det A| == 2**(n-1) * |det beta_map(A)|``.
    """
    if A.order < 2:
        raise PreconditionError("beta_map needs order >= 2")
    E = normalize(A).entries.astype(np.int64)
    return BinMatrix((1 - E[1:, 1:]) // 2)


def beta_inverse(B: BinMatrix) -> SignMatrix:
    """Inverse of :func:`beta_map`: border with +1 and map 0 -> +1, 1 -> -1."""
    m = B.order
    E = np.ones((m + 1, m + 1), dtype=np.int64)
    E[1:, 1:] = 1 - 2 * np.asarray(B.entries, dtype=np.int64)
    return SignMatrix(E)


def excess(A: SignMatrix) -> int:
    """Sum of all entries."""
    return int(np.asarray(A.entries, dtype=np.int64).sum())


def _check_index_set(idx: Iterable[int], h: int, name: str) -> list[int]:
    idx = [int(i) for i in idx]
    if len(set(idx)) != len(idx) or any(i < 0 or i >= h for i in idx):
        raise PreconditionError(f"{name} must be distinct indices in [0, {h})")
    return sorted(idx)


def complementary_split(H: SignMatrix, rows: Sequence[int], cols: Sequence[int]) -> tuple[SignMatrix, SignMatrix]:
    """Split ``H`` into the block ``H[rows, cols]`` and the complementary block.

    Returns ``(minor, complement)`` where ``minor`` has order ``d = len(rows)``
    and ``complement`` keeps the remaining rows and columns in their
    original order.
    """
    h = H.order
    rows = _check_index_set(rows, h, "rows")
    cols = _check_index_set(cols, h, "cols")
    d = len(rows)
    if len(cols) != d or not 0 < d < h:
        raise PreconditionError(f"need |rows| == |cols| == d with 0 < d < {h}")
    other_rows = [i for i in range(h) if i not in set(rows)]
    other_cols = [j for j in range(h) if j not in set(cols)]
    E = H.entries
    return SignMatrix(E[np.ix_(rows, cols)]), SignMatrix(E[np.ix_(other_rows, other_cols)])


def nonsingular_complement(H: SignMatrix, d: int) -> tuple[list[int], list[int]]:
    """Pick row and column sets of size ``d`` spanning a nonsingular block of ``H``.

    Runs fraction-free elimination with full pivoting, scanning the remaining
    submatrix in row-major order for the first nonzero pivot.  After ``k``
    steps the pivot equals (up to sign) the leading ``k x k`` minor of the
    permuted matrix, so the first ``d`` pivot rows and columns span a
    nonsingular block.  The elimination is carried to the end so a singular
    ``H`` is rejected.
    """
    h = H.order
    if not 0 < d < h:
        raise PreconditionError(f"need 0 < d < {h}, got d={d}")
    M = _rows(H)
    row_ids = list(range(h))
    col_ids = list(range(h))
    prev = 1
    for k in range(h):
        pivot = None
        for i in range(k, h):
            Mi = M[i]
            for j in range(k, h):
                if Mi[j] != 0:
                    pivot = (i, j)
                    break
            if pivot:
                break
        if pivot is None:
            raise PreconditionError(f"matrix is singular (rank {k}); no nonsingular complement of size {d}")
        i, j = pivot
        if i != k:
            M[k], M[i] = M[i], M[k]
            row_ids[k], row_ids[i] = row_ids[i], row_ids[k]
        if j != k:
            for row in M:
                row[k], row[j] = row[j], row[k]
            col_ids[k], col_ids[j] = col_ids[j], col_ids[k]
        rk = M[k]
        pk = rk[k]
        tail = rk[k + 1:]
        for i in range(k + 1, h):
            ri = M[i]
            a = ri[k]
            ri[k] = 0
            ri[k + 1:] = [(pk * x - a * y) // prev for x, y in zip(ri[k + 1:], tail)]
        prev = pk
    return sorted(row_ids[:d]), sorted(col_ids[:d])


# ---------------------------------------------------------------------------
# text format

def format_matrix(M) -> str:
    """Serialize: order on the first line, then one row per line."""
    if isinstance(M, SignMatrix):
        body = ["".join("+" if x > 0 else "-" for x in row) for row in M.entries]
    elif isinstance(M, BinMatrix):
        body = ["".join("1" if x else "0" for x in row) for row in M.entries]
    else:
        raise TypeError(f"cannot format {type(M).__name__}")
    return "\n".join([str(M.order), *body]) + "\n"


def parse_matrix(text: str):
    """Parse the text format, returning a SignMatrix ('+'/'-') or BinMatrix ('1'/'0')."""
    lines = text.rstrip("\n").split("\n")
    try:
        n = int(lines[0].strip())
    except ValueError:
        raise MatrixFormatError(f"first line must be the order, got {lines[0]!r}") from None
    if n < 1:
        raise MatrixFormatError(f"order must be positive, got {n}")
    body = [line.rstrip("\r") for line in lines[1:]]
    if len(body) != n:
        raise MatrixFormatError(f"expected {n} rows, found {len(body)}")
    for r, line in enumerate(body):
        if len(line) != n:
            raise MatrixFormatError(f"row {r} has length {len(line)}, expected {n}")
    chars = set("".join(body))
    if chars <= set("+-"):
        return SignMatrix([[1 if c == "+" else -1 for c in line] for line in body])
    if chars <= set("01"):
        return BinMatrix([[int(c) for c in line] for line in body])
    raise MatrixFormatError(f"unexpected characters {sorted(chars - set('+-01'))}")


def read_matrix(path):
    return parse_matrix(Path(path).read_text())


def write_matrix(M, path) -> None:
    Path(path).write_text(format_matrix(M))
