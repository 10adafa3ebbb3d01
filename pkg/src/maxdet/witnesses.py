"""Explicit matrices certifying lower bounds on D(n).

Every certificate carries its witness matrix and an absolute determinant
recomputed with :func:`maxdet.linalg.det_exact` at creation time.
"""

from __future__ import annotations

import itertools
import json
import logging
import math
from dataclasses import dataclass, field

import numpy as np

from .bounds import SQRT_2_OVER_PI, ln_hadamard
from .linalg import (
    BinMatrix,
    PreconditionError,
    SignMatrix,
    beta_inverse,
    beta_map,
    complementary_split,
    det_exact,
    excess,
    format_matrix,
    is_hadamard,
    nonsingular_complement,
)
from .orders import OrderRegistry

log = logging.getLogger(__name__)

LOG_TOL = 1e-9
DEFAULT_RESTARTS = 32
EXHAUSTIVE_EXCESS_LIMIT = 8


class NoWitness(PreconditionError):
    """No realizable Hadamard matrix is available to build a witness."""


@dataclass
class WitnessCertificate:
    n: int
    matrix: SignMatrix
    det_abs: int
    claimed_ln: float
    construction: str
    verified: bool
    details: dict = field(default_factory=dict)

    @property
    def ln_det(self) -> float:
        return math.log(self.det_abs) if self.det_abs else -math.inf

    @property
    def ln_R(self) -> float:
        return self.ln_det - ln_hadamard(self.n)

    def as_dict(self) -> dict:
        d = {
            "n": self.n,
            "det_abs": str(self.det_abs),
            "ln_det": self.ln_det,
            "ln_R": self.ln_R,
            "claimed_ln_D": self.claimed_ln,
            "construction": self.construction,
            "verified": self.verified,
        }
        d.update(self.details)
        return d

    def to_json(self) -> str:
        return json.dumps(self.as_dict(), indent=2)

    def matrix_text(self) -> str:
        return format_matrix(self.matrix)


def certify(matrix: SignMatrix, claimed_ln: float, construction: str, checks: bool = True, **details) -> WitnessCertificate:
    """Recompute |det| exactly and mark verified iff it meets the claim and ``checks`` holds."""
    det_abs = abs(det_exact(matrix))
    ok = bool(checks) and det_abs > 0 and math.log(det_abs) >= claimed_ln - LOG_TOL
    return WitnessCertificate(matrix.order, matrix, det_abs, claimed_ln, construction, ok, details)


def verify_block_identity(H: SignMatrix, rows, cols) -> bool:
    """Check |det A| = h**(h/2 - d) |det D| exactly, where D = H[rows, cols] is d x d
    and A is the complementary block.

    Squared to stay in the integers: det(A)**2 * h**(2d) == det(D)**2 * h**h.
    """
    h = H.order
    if not is_hadamard(H):
        raise PreconditionError("verify_block_identity needs a Hadamard matrix")
    D, A = complementary_split(H, rows, cols)
    d = D.order
    return det_exact(A) ** 2 * h ** (2 * d) == det_exact(D) ** 2 * h ** h


def _border_up(A: SignMatrix, n: int) -> SignMatrix:
    """Extend A to order n through the 0/1 domain, multiplying |det| by 2**(n - order(A))."""
    h = A.order
    if n < h:
        raise PreconditionError(f"cannot border order {h} down to {n}")
    B = np.eye(n - 1, dtype=np.int64)
    if h >= 2:
        B[:h - 1, :h - 1] = beta_map(A).entries
    return beta_inverse(BinMatrix(B))


def witness_minor(H: SignMatrix, n: int) -> WitnessCertificate:
    """Order-n block of a Hadamard matrix H whose complementary d x d block is nonsingular."""
    h = H.order
    if not 0 < n < h:
        raise PreconditionError(f"witness_minor needs 0 < n < h, got n={n}, h={h}")
    d = h - n
    rows, cols = nonsingular_complement(H, d)
    small, A = complementary_split(H, rows, cols)
    det_small = det_exact(small)
    det_A = det_exact(A)
    identity = det_A ** 2 * h ** (2 * d) == det_small ** 2 * h ** h
    claimed = (d - 1) * math.log(2) + (h / 2 - d) * math.log(h)
    cert = certify(A, claimed, f"minor(h={h})", identity,
                   h=h, rows=rows, cols=cols, complement_det_abs=str(abs(det_small)))
    return cert


def witness_major(H: SignMatrix, n: int) -> WitnessCertificate:
    """Border a Hadamard matrix of order h up to order n; |det| = 2**(n-h) h**(h/2) exactly."""
    h = H.order
    if n <= h:
        raise PreconditionError(f"witness_major needs n > h, got n={n}, h={h}")
    W = _border_up(H, n)
    target = 2 ** (n - h) * math.isqrt(h ** h)
    claimed = (n - h) * math.log(2) + ln_hadamard(h)
    cert = certify(W, claimed, f"major(h={h})", h=h)
    cert.verified = cert.verified and cert.det_abs == target
    return cert


# ---------------------------------------------------------------------------
# excess

def _exhaustive_excess(E: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Row and column signs maximizing the excess over the whole switching class.

    For fixed row signs r the best column signs are sign(r @ E), so it is
    enough to enumerate r (with r[0] = +1 by global symmetry).
    """
    h = E.shape[0]
    best, best_r = -1, None
    for tail in itertools.product((1, -1), repeat=h - 1):
        r = np.array((1, *tail), dtype=np.int64)
        s = int(np.abs(r @ E).sum())
        if s > best:
            best, best_r = s, r
    col = best_r @ E
    c = np.where(col >= 0, 1, -1)
    return best_r, c


def _hill_climb(E: np.ndarray, r: np.ndarray, c: np.ndarray) -> tuple[np.ndarray, np.ndarray, int]:
    """First-improvement single row/column negations until no flip raises the excess."""
    h = E.shape[0]
    M = (r[:, None] * E) * c[None, :]
    row_sums = M.sum(axis=1)
    col_sums = M.sum(axis=0)
    improved = True
    while improved:
        improved = False
        for i in range(h):
            if row_sums[i] < 0:
                col_sums -= 2 * M[i]
                M[i] = -M[i]
                row_sums[i] = -row_sums[i]
                r[i] = -r[i]
                improved = True
        for j in range(h):
            if col_sums[j] < 0:
                row_sums -= 2 * M[:, j]
                M[:, j] = -M[:, j]
                col_sums[j] = -col_sums[j]
                c[j] = -c[j]
                improved = True
    return r, c, int(row_sums.sum())


def maximize_excess(H: SignMatrix, restarts: int = DEFAULT_RESTARTS, seed: int = 0,
                    exhaustive_limit: int = EXHAUSTIVE_EXCESS_LIMIT) -> SignMatrix:
    """Negate rows and columns of H to make its entry sum as large as possible.

    Orders up to ``exhaustive_limit`` are solved exactly.  Larger orders use
    hill climbing from the identity switching and from ``restarts - 1``
    random switchings drawn from ``numpy.random.default_rng(seed)``.  A flip
    of row i changes the excess by -2 * (row sum i), so a move is taken
    exactly when that row (or column) sum is negative.
    """
    E = np.asarray(H.entries, dtype=np.int64)
    h = E.shape[0]
    if h <= exhaustive_limit:
        r, c = _exhaustive_excess(E)
    else:
        rng = np.random.default_rng(seed)
        best = None
        for k in range(max(restarts, 1)):
            if k == 0:
                r0 = np.ones(h, dtype=np.int64)
                c0 = np.ones(h, dtype=np.int64)
            else:
                r0 = rng.choice(np.array([1, -1]), size=h)
                c0 = rng.choice(np.array([1, -1]), size=h)
            r, c, s = _hill_climb(E, r0.copy(), c0.copy())
            if best is None or s > best[2]:
                best = (r, c, s)
        r, c, _ = best
    out = SignMatrix((r[:, None] * E) * c[None, :])
    if excess(out) < excess(H):
        # cannot happen: restart 0 starts from H itself and never decreases
        raise AssertionError("excess decreased")
    return out


def excess_floor(h: int) -> float:
    """(2/pi)**(1/2) h**(3/2)."""
    return SQRT_2_OVER_PI * h ** 1.5


def _excess_bordered(H: SignMatrix) -> SignMatrix:
    """[[1, 1...], [-1, H]]: |det| = h**(h/2) (1 + excess(H)/h) for Hadamard H."""
    h = H.order
    E = np.ones((h + 1, h + 1), dtype=np.int64)
    E[1:, 0] = -1
    E[1:, 1:] = H.entries
    return SignMatrix(E)


def witness_excess_border(H: SignMatrix, restarts: int = DEFAULT_RESTARTS, seed: int = 0) -> WitnessCertificate:
    """Order h+1 witness: maximize the excess of H, then border it.

    With top row +1, corner +1 and left column -1 the determinant is
    det(H) (1 + e^T H^{-1} e) = det(H) (1 + sigma/h) because H^{-1} = H^T / h.
    """
    h = H.order
    if h < 4 or not is_hadamard(H):
        raise PreconditionError("witness_excess_border needs a Hadamard matrix of order >= 4")
    S = maximize_excess(H, restarts, seed)
    sigma = excess(S)
    W = _excess_bordered(S)
    root = math.isqrt(h ** h)
    claimed = ln_hadamard(h) + math.log1p(sigma / h)
    cert = certify(W, claimed, f"excess-border(h={h})", h=h, sigma_achieved=sigma,
                   sigma_floor=excess_floor(h))
    cert.verified = cert.verified and cert.det_abs * h == root * (h + sigma)
    return cert


def witness_double_border(H: SignMatrix, restarts: int = DEFAULT_RESTARTS, seed: int = 0) -> WitnessCertificate:
    """Order h+2 witness: the excess-border witness bordered once more (|det| doubles)."""
    inner = witness_excess_border(H, restarts, seed)
    W = _border_up(inner.matrix, H.order + 2)
    h = H.order
    cert = certify(W, inner.claimed_ln + math.log(2), f"double-border(h={h})", inner.verified,
                   h=h, sigma_achieved=inner.details["sigma_achieved"], sigma_floor=inner.details["sigma_floor"])
    cert.verified = cert.verified and cert.det_abs == 2 * inner.det_abs
    return cert


def sylvester_double(A: SignMatrix) -> SignMatrix:
    """[[A, A], [A, -A]]: |det| = 2**m det(A)**2 for A of order m."""
    E = np.asarray(A.entries, dtype=np.int64)
    return SignMatrix(np.block([[E, E], [E, -E]]))


def witness_sylvester_double(inner: WitnessCertificate) -> WitnessCertificate:
    m = inner.n
    W = sylvester_double(inner.matrix)
    claimed = m * math.log(2) + 2 * inner.claimed_ln
    cert = certify(W, claimed, f"sylvester-double({inner.construction})", inner.verified,
                   **{k: v for k, v in inner.details.items() if k in ("h", "sigma_achieved")})
    cert.verified = cert.verified and cert.det_abs == 2 ** m * inner.det_abs ** 2
    return cert


# ---------------------------------------------------------------------------

def best_witness(n: int, reg: OrderRegistry, restarts: int = DEFAULT_RESTARTS, seed: int = 0) -> WitnessCertificate:
    """Build every applicable witness for order n and keep the largest determinant.

    Candidates: the Hadamard matrix itself, a minor of the nearest larger
    order with a matrix, a bordering of the nearest smaller one, the excess
    border (n = 1 mod 4), the double border (n = 2 mod 4) and the Sylvester
    double of an order n/2 excess border (n = 2 mod 8).  Orders in the
    registry without an explicit matrix are skipped.
    """
    if n < 1:
        raise PreconditionError("n must be positive")
    usable = [h for h in reg.orders if reg.has_matrix(h)]
    skipped = [h for h in reg.orders if not reg.has_matrix(h) and h <= reg.exact_cap]
    if skipped:
        near = [h for h in skipped if abs(h - n) <= 4]
        if near:
            log.info("n=%d: no matrix for orders %s, skipped", n, near)
    candidates: list[WitnessCertificate] = []
    if n in usable:
        H = reg.matrix(n)
        candidates.append(certify(H, ln_hadamard(n), "hadamard", is_hadamard(H), h=n, tag=reg.tag(n)))
    above = [h for h in usable if h > n]
    below = [h for h in usable if h < n]
    if n not in usable and above:
        h = above[0]
        c = witness_minor(reg.matrix(h), n)
        c.details["tag"] = reg.tag(h)
        candidates.append(c)
    if n not in usable and below:
        h = below[-1]
        c = witness_major(reg.matrix(h), n)
        c.details["tag"] = reg.tag(h)
        candidates.append(c)
    if n % 4 == 1 and n >= 5 and reg.has_matrix(n - 1):
        candidates.append(witness_excess_border(reg.matrix(n - 1), restarts, seed))
    if n % 4 == 2 and n >= 6 and reg.has_matrix(n - 2):
        candidates.append(witness_double_border(reg.matrix(n - 2), restarts, seed))
    if n % 8 == 2 and n >= 10 and reg.has_matrix(n // 2 - 1):
        inner = witness_excess_border(reg.matrix(n // 2 - 1), restarts, seed)
        candidates.append(witness_sylvester_double(inner))
    candidates = [c for c in candidates if c.verified]
    if not candidates:
        raise NoWitness(f"no verified witness for n={n}: no usable Hadamard matrix in range")
    return max(candidates, key=lambda c: c.det_abs)
