"""Registries of Hadamard orders and the gap functions delta, gamma and lambda.

Three registry modes bracket the unknown set of all Hadamard orders:

``constructive``
    orders realized by Sylvester, Paley I/II over prime fields, Kronecker
    products of those, and any loaded matrices.
``known-orders``
    constructive orders plus every multiple of 4 up to 664, the range in
    which Hadamard matrices are known to exist (tagged ``assumed`` when no
    matrix is at hand).
``conjecture``
    1, 2 and every multiple of 4 up to the cap.
"""

from __future__ import annotations

import bisect
import json
import logging
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import NamedTuple

import numpy as np

from . import constructions
from .linalg import (
    DEFAULT_ORDER_CAP,
    MatrixFormatError,
    PreconditionError,
    SignMatrix,
    is_hadamard,
    read_matrix,
)

log = logging.getLogger(__name__)

MODES = ("constructive", "known-orders", "conjecture")
KNOWN_ORDER_LIMIT = 664
DEFAULT_SIEVE_BOUND = 10 ** 6


class RegistryTooSmall(PreconditionError):
    """The registry cap (or sieve bound) cannot answer the query exactly."""


# ---------------------------------------------------------------------------
# primes and lambda

def sieve(bound: int) -> np.ndarray:
    """All primes <= bound (sieve of Eratosthenes)."""
    if bound < 2:
        return np.zeros(0, dtype=np.int64)
    is_p = np.ones(bound + 1, dtype=bool)
    is_p[:2] = False
    for q in range(2, math.isqrt(bound) + 1):
        if is_p[q]:
            is_p[q * q::q] = False
    return np.flatnonzero(is_p).astype(np.int64)


def _record_breakpoints(starts, gaps) -> list[tuple[int, int]]:
    """Breakpoints (x, value) where the running maximum gap strictly increases."""
    points = []
    best = 0
    for s, g in zip(starts, gaps):
        if g > best:
            best = int(g)
            points.append((int(s), best))
    return points


def _step_value(points: list[tuple[int, int]], x: float) -> int:
    i = bisect.bisect_right([p for p, _ in points], x)
    return points[i - 1][1] if i else 0


@dataclass(frozen=True)
class GapTable:
    """Primes up to ``bound`` with the prime gap step function.

    The sieve runs to ``2 * bound + 2`` internally so that the successor of
    every prime <= bound is available (Bertrand's postulate).
    """

    bound: int
    primes: tuple[int, ...]
    lambda_values: tuple[tuple[int, int], ...]

    @classmethod
    def build(cls, bound: int = DEFAULT_SIEVE_BOUND) -> "GapTable":
        ps = sieve(2 * bound + 2)
        covered = ps[ps <= bound]
        gaps = ps[1:len(covered) + 1] - covered
        return cls(bound, tuple(int(p) for p in covered), tuple(_record_breakpoints(covered, gaps)))


def lambda_(x: float, table: GapTable) -> int:
    """Largest gap p_{i+1} - p_i over primes p_i <= x (0 when x < 2)."""
    if x > table.bound:
        raise RegistryTooSmall(f"x={x} exceeds sieve bound {table.bound}")
    return _step_value(list(table.lambda_values), x)


# ---------------------------------------------------------------------------
# registry

def _base_tags(cap: int) -> dict[int, str]:
    """Orders realized directly by one construction, with their preferred tag."""
    tags: dict[int, str] = {}
    k = 0
    while 2 ** k <= cap:
        tags[2 ** k] = f"sylvester({k})"
        k += 1
    for p in sieve(cap):
        p = int(p)
        if p % 4 == 3 and p + 1 <= cap:
            tags.setdefault(p + 1, f"paley1({p})")
    for p in sieve(cap // 2):
        p = int(p)
        if p % 4 == 1 and 2 * (p + 1) <= cap:
            tags.setdefault(2 * (p + 1), f"paley2({p})")
    return tags


def _closure(cap: int, base: dict[int, str]) -> dict[int, str]:
    """Close ``base`` under products, tagging new orders ``kronecker(a,b)`` with smallest a."""
    tags = dict(base)
    for n in range(4, cap + 1, 4):
        if n in tags:
            continue
        for a in range(2, math.isqrt(n) + 1):
            if n % a == 0 and a in tags and n // a in tags:
                tags[n] = f"kronecker({a},{n // a})"
                break
    return tags


class Nearest(NamedTuple):
    """Distance from n to the registry, with the achieving orders."""

    delta: int
    h: int
    below: int | None
    above: int | None


@dataclass
class OrderRegistry:
    """A set of Hadamard orders up to ``cap`` with how each one is realized.

    Build with :func:`build_registry`; :meth:`load_matrix` may add orders
    during setup, after which the registry is treated as read-only.
    """

    cap: int
    mode: str
    realization: dict[int, str]
    exact_cap: int = DEFAULT_ORDER_CAP
    loaded: dict[int, tuple[str, SignMatrix]] = field(default_factory=dict)
    _cache: dict[int, SignMatrix] = field(default_factory=dict, repr=False)

    @property
    def orders(self) -> list[int]:
        return sorted(self.realization)

    def __contains__(self, n) -> bool:
        return n in self.realization

    def tag(self, n: int) -> str:
        return self.realization[n]

    def has_matrix(self, n: int) -> bool:
        return n in self.realization and self.realization[n] != "assumed" and n <= self.exact_cap

    def matrix(self, n: int) -> SignMatrix:
        """Replay the realization tag of ``n`` into an explicit Hadamard matrix."""
        if n not in self.realization:
            raise PreconditionError(f"{n} is not in the registry")
        if not self.has_matrix(n):
            raise PreconditionError(f"no matrix available for order {n} ({self.realization[n]})")
        if n not in self._cache:
            self._cache[n] = self._realize(self.realization[n], n)
        return self._cache[n]

    def _realize(self, tag: str, n: int) -> SignMatrix:
        name, _, args = tag.partition("(")
        args = args.rstrip(")")
        cap = self.exact_cap
        if name == "sylvester":
            return constructions.sylvester(int(args), cap)
        if name == "paley1":
            return constructions.paley_one(int(args), cap)
        if name == "paley2":
            return constructions.paley_two(int(args), cap)
        if name == "kronecker":
            a, b = (int(v) for v in args.split(","))
            return constructions.kronecker(self.matrix(a), self.matrix(b), cap)
        if name == "loaded":
            return self.loaded[n][1]
        raise PreconditionError(f"cannot realize tag {tag!r}")

    def load_matrix(self, path) -> int:
        """Add a Hadamard matrix from a text file; returns its order.

        The matrix is rejected (registry unchanged) if it does not parse as a
        sign matrix or fails the Gram check.
        """
        M = read_matrix(path)
        if not isinstance(M, SignMatrix):
            raise MatrixFormatError(f"{path}: expected a +/- matrix")
        if not is_hadamard(M):
            raise PreconditionError(f"{path}: matrix of order {M.order} is not Hadamard")
        n = M.order
        if n > self.cap:
            raise PreconditionError(f"{path}: order {n} exceeds registry cap {self.cap}")
        self.loaded[n] = (str(path), M)
        self._rebuild()
        return n

    def _rebuild(self) -> None:
        base = _base_tags(self.cap)
        for n, (path, _) in self.loaded.items():
            base.setdefault(n, f"loaded({Path(path).name})")
        tags = _closure(self.cap, base)
        if self.mode == "known-orders":
            for n in range(4, min(self.cap, KNOWN_ORDER_LIMIT) + 1, 4):
                tags.setdefault(n, "assumed")
        elif self.mode == "conjecture":
            for n in range(4, self.cap + 1, 4):
                tags.setdefault(n, "assumed")
        self.realization = dict(sorted(tags.items()))
        self._cache.clear()

    def to_json(self) -> str:
        return json.dumps({
            "cap": self.cap,
            "mode": self.mode,
            "orders": [{"order": n, "tag": t} for n, t in self.realization.items()],
        })


def build_registry(cap: int, mode: str = "constructive", matrices=(), exact_cap: int = DEFAULT_ORDER_CAP) -> OrderRegistry:
    """Build the registry of Hadamard orders <= cap for the given mode."""
    if cap < 2:
        raise PreconditionError("cap must be >= 2")
    if mode not in MODES:
        raise PreconditionError(f"mode must be one of {MODES}, got {mode!r}")
    reg = OrderRegistry(cap=cap, mode=mode, realization={}, exact_cap=exact_cap)
    reg._rebuild()
    for path in matrices:
        try:
            reg.load_matrix(path)
        except (MatrixFormatError, PreconditionError) as exc:
            log.warning("skipping %s: %s", path, exc)
    return reg


def delta(n: int, reg: OrderRegistry) -> Nearest:
    """Distance from n to the nearest registry order.

    Ties are reported on both sides; ``h`` prefers the order below n.
    """
    if n < 1:
        raise PreconditionError("n must be positive")
    if reg.cap < 2 * n:
        raise RegistryTooSmall(f"registry cap {reg.cap} < 2n = {2 * n}")
    orders = reg.orders
    i = bisect.bisect_left(orders, n)
    if i < len(orders) and orders[i] == n:
        return Nearest(0, n, n, n)
    below = orders[i - 1] if i > 0 else None
    above = orders[i] if i < len(orders) else None
    d_below = n - below if below is not None else math.inf
    d_above = above - n if above is not None else math.inf
    d = int(min(d_below, d_above))
    return Nearest(
        d,
        below if d_below <= d_above else above,
        below if d_below == d else None,
        above if d_above == d else None,
    )


def neighbours(n: int, reg: OrderRegistry) -> tuple[int | None, int | None]:
    """Consecutive registry orders with n_i < n < n_{i+1} (either may be None)."""
    orders = reg.orders
    lo = bisect.bisect_left(orders, n)
    hi = bisect.bisect_right(orders, n)
    return (orders[lo - 1] if lo > 0 else None, orders[hi] if hi < len(orders) else None)


def gamma(x: float, reg: OrderRegistry) -> int:
    """Largest gap n_{i+1} - n_i over registry orders n_i <= x (0 when x < 1)."""
    orders = reg.orders
    k = bisect.bisect_right(orders, x)
    if k == 0:
        return 0
    if k >= len(orders):
        raise RegistryTooSmall(f"no registry order above x={x} (cap {reg.cap})")
    return int(np.diff(orders[:k + 1]).max())
