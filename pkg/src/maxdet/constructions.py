"""Hadamard matrices from the Sylvester, Paley I, Paley II and Kronecker constructions.

Only prime fields are supported.  Every matrix returned here passes the
Gram check of :func:`maxdet.linalg.is_hadamard`.
"""

from __future__ import annotations

import math

import numpy as np

from .linalg import DEFAULT_ORDER_CAP, PreconditionError, SignMatrix, is_hadamard

_SYLVESTER_2 = np.array([[1, 1], [1, -1]], dtype=np.int64)


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    for f in range(3, math.isqrt(n) + 1, 2):
        if n % f == 0:
            return False
    return True


def sylvester(k: int, cap: int = DEFAULT_ORDER_CAP) -> SignMatrix:
    """k-fold Kronecker power of [[1, 1], [1, -1]] (order 2**k)."""
    if k < 0:
        raise PreconditionError("k must be nonnegative")
    if 2 ** k > cap:
        raise PreconditionError(f"order 2**{k} exceeds cap {cap}")
    H = np.ones((1, 1), dtype=np.int64)
    for _ in range(k):
        H = np.kron(_SYLVESTER_2, H)
    return SignMatrix(H)


def quadratic_character(a: int, p: int) -> int:
    """Legendre symbol (a/p) by Euler's criterion; p must be an odd prime."""
    if p < 3 or not is_prime(p):
        raise PreconditionError(f"{p} is not an odd prime")
    a %= p
    if a == 0:
        return 0
    return 1 if pow(a, (p - 1) // 2, p) == 1 else -1


def jacobsthal(p: int) -> np.ndarray:
    """The p x p matrix Q with Q[i, j] equal to the quadratic character of j - i."""
    chi = np.array([quadratic_character(a, p) for a in range(p)], dtype=np.int64)
    idx = (np.arange(p)[None, :] - np.arange(p)[:, None]) % p
    return chi[idx]


def _normalize_first_row(H: np.ndarray) -> np.ndarray:
    return H * H[:1, :]


def paley_one(p: int, cap: int = DEFAULT_ORDER_CAP) -> SignMatrix:
    """Paley I Hadamard matrix of order p + 1 for a prime p = 3 (mod 4)."""
    if not is_prime(p) or p % 4 != 3:
        raise PreconditionError(f"paley_one needs a prime p = 3 mod 4, got {p}")
    if p + 1 > cap:
        raise PreconditionError(f"order {p + 1} exceeds cap {cap}")
    S = np.zeros((p + 1, p + 1), dtype=np.int64)
    S[0, 1:] = 1
    S[1:, 0] = -1
    S[1:, 1:] = jacobsthal(p)
    H = S + np.eye(p + 1, dtype=np.int64)
    return SignMatrix(_normalize_first_row(H))


def paley_two(p: int, cap: int = DEFAULT_ORDER_CAP) -> SignMatrix:
    """Paley II Hadamard matrix of order 2(p + 1) for a prime p = 1 (mod 4).

    Each entry of the symmetric conference matrix C of order p + 1 is
    replaced by a 2 x 2 block: zeros by [[1, -1], [-1, -1]] and +-1 by
    +-[[1, 1], [1, -1]].
    """
    if not is_prime(p) or p % 4 != 1:
        raise PreconditionError(f"paley_two needs a prime p = 1 mod 4, got {p}")
    if 2 * (p + 1) > cap:
        raise PreconditionError(f"order {2 * (p + 1)} exceeds cap {cap}")
    C = np.zeros((p + 1, p + 1), dtype=np.int64)
    C[0, 1:] = 1
    C[1:, 0] = 1
    C[1:, 1:] = jacobsthal(p)
    zero_block = np.array([[1, -1], [-1, -1]], dtype=np.int64)
    H = np.kron(C, _SYLVESTER_2) + np.kron(np.eye(p + 1, dtype=np.int64), zero_block)
    return SignMatrix(_normalize_first_row(H))


def kronecker(H1: SignMatrix, H2: SignMatrix, cap: int = DEFAULT_ORDER_CAP) -> SignMatrix:
    """Kronecker product of two Hadamard matrices."""
    if H1.order * H2.order > cap:
        raise PreconditionError(f"order {H1.order * H2.order} exceeds cap {cap}")
    if not (is_hadamard(H1) and is_hadamard(H2)):
        raise PreconditionError("kronecker needs Hadamard inputs")
    return SignMatrix(np.kron(H1.entries.astype(np.int64), H2.entries.astype(np.int64)))
