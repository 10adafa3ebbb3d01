"""Lower and upper bounds on D(n) and R(n) = D(n) / n**(n/2), in log space.

D(n) overflows floats near n = 180 and R(n) underflows for large n, so every
bound is carried as a natural logarithm.  When the bounded quantity is an
integer of manageable size it is also materialized exactly.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field

import mpmath

from .linalg import PreconditionError
from .orders import OrderRegistry, delta, neighbours

LN2 = math.log(2)
SQRT_2_OVER_PI = math.sqrt(2 / math.pi)
IMPROVED_CONSTANT = math.pi * math.e ** 2 / 8
# exact integers are materialized below this many nats (~3000 digits)
_EXACT_LN_LIMIT = 7000.0


def _is_hadamard_order(h: int) -> bool:
    return h in (1, 2) or (h > 0 and h % 4 == 0)


@dataclass(frozen=True)
class LogValue:
    """Natural log of a positive quantity, optionally with its exact integer value."""

    ln: float
    exact: int | None = None

    def __post_init__(self):
        if not math.isfinite(self.ln):
            raise ValueError(f"log value must be finite, got {self.ln}")
        if self.exact is not None:
            if self.exact <= 0:
                raise ValueError("exact value must be positive")
            if abs(math.log(self.exact) - self.ln) > 1e-9 * max(1.0, abs(self.ln)):
                raise ValueError(f"exact value {self.exact} disagrees with ln {self.ln}")

    @classmethod
    def of_power_product(cls, factors: list[tuple[int, int]]) -> "LogValue":
        """Value of prod(base ** exp), exact when it is a manageable integer."""
        ln = sum(e * math.log(b) for b, e in factors)
        exact = None
        if all(e >= 0 or b == 1 for b, e in factors) and ln < _EXACT_LN_LIMIT:
            exact = 1
            for b, e in factors:
                exact *= b ** max(e, 0)
        return cls(ln, exact)

    def __float__(self):
        return self.ln


def ln_hadamard(n: int) -> float:
    """ln n**(n/2)."""
    return 0.5 * n * math.log(n)


@dataclass
class BoundEntry:
    name: str
    n: int
    ln_D: float
    source: str
    exact_D: int | None = None
    extra: dict = field(default_factory=dict)

    @property
    def ln_R(self) -> float:
        return self.ln_D - ln_hadamard(self.n)

    @property
    def R(self) -> float | None:
        r = self.ln_R
        return math.exp(r) if r > -700 else None

    def as_dict(self) -> dict:
        d = {
            "name": self.name,
            "n": self.n,
            "ln_D": self.ln_D,
            "ln_R": self.ln_R,
            "R_if_representable": self.R,
            "source": self.source,
        }
        if self.exact_D is not None:
            d["D_exact"] = str(self.exact_D)
        d.update(self.extra)
        return d


def _entry(name: str, n: int, value: LogValue, source: str, **extra) -> BoundEntry:
    return BoundEntry(name, n, value.ln, source, value.exact, extra)


# ---------------------------------------------------------------------------
# elementary bounds

def check_ineq1(alpha: float, n: int, tol: float = 1e-12) -> bool:
    """Check (n - a)**(n - a) / n**n > (n e)**(-a) for n > |a| > 0.

    The difference of logs equals n * ((1 - x) ln(1 - x) + x) with x = a / n,
    which is evaluated at 50 significant digits to avoid cancellation.
    """
    if not (n > abs(alpha) > 0):
        raise PreconditionError(f"need n > |alpha| > 0, got alpha={alpha}, n={n}")
    with mpmath.workdps(50):
        x = mpmath.mpf(alpha) / n
        diff = n * ((1 - x) * mpmath.log1p(-x) + x)
    return bool(diff > -tol)


def minor_bound(h: int, n: int) -> LogValue:
    """ln(2**(d-1) * h**(h/2 - d)) with d = h - n: minors of a Hadamard matrix of order h."""
    if not _is_hadamard_order(h) or not 0 < n < h:
        raise PreconditionError(f"minor_bound needs a Hadamard order h > n > 0, got h={h}, n={n}")
    d = h - n
    return LogValue.of_power_product([(2, d - 1), (h, h // 2 - d)])


def major_bound(h: int, n: int) -> LogValue:
    """ln(2**(n-h) * h**(h/2)): a Hadamard matrix of order h bordered up to order n."""
    if not _is_hadamard_order(h) or not n > h >= 1:
        raise PreconditionError(f"major_bound needs n > h >= 1 with h a Hadamard order, got h={h}, n={n}")
    if h == 1:
        return LogValue.of_power_product([(2, n - 1)])
    return LogValue.of_power_product([(2, n - h), (h, h // 2)])


def unconditional_bound(n: int, reg: OrderRegistry) -> BoundEntry:
    """Best of the minor and bordering branches at distance delta(n).

    Also records the closed form ln R >= (delta/2) ln(4/(n e)) and checks
    that the branch maximum dominates it.
    """
    near = delta(n, reg)
    floor_ln_R = 0.5 * near.delta * math.log(4 / (n * math.e))
    if near.delta == 0:
        value = LogValue.of_power_product([(n, n // 2)])
        return _entry("unconditional", n, value, "Hadamard order", delta=0, h=n, branch="hadamard",
                      floor_ln_R=0.0)
    branches = []
    if near.above is not None:
        branches.append(("minor", near.above, minor_bound(near.above, n)))
    if near.below is not None:
        branches.append(("major", near.below, major_bound(near.below, n)))
    # ties keep the order below n, matching delta's primary choice
    branch, h, value = max(branches, key=lambda b: (b[2].ln, b[0] == "major"))
    entry = _entry("unconditional", n, value, "nearest Hadamard order: complementary minor or bordering",
                   delta=near.delta, h=h, branch=branch, floor_ln_R=floor_ln_R)
    if entry.ln_R < floor_ln_R - 1e-12:
        raise ArithmeticError(f"branch bound {entry.ln_R} below closed form {floor_ln_R} at n={n}")
    return entry


def excess_lower(h: int) -> LogValue:
    """ln((2/pi)**(1/2) * h**(3/2)), a lower bound on the maximal excess."""
    if h < 4 or not _is_hadamard_order(h):
        raise PreconditionError(f"excess_lower needs a Hadamard order h >= 4, got {h}")
    return LogValue(math.log(SQRT_2_OVER_PI) + 1.5 * math.log(h))


def plus_one_bound(h: int) -> LogValue:
    """ln(h**(h/2) * (1 + (2h/pi)**(1/2))), lower bound on D(h + 1)."""
    if h < 4 or h % 4:
        raise PreconditionError(f"plus_one_bound needs h = 0 mod 4, h >= 4, got {h}")
    return LogValue(ln_hadamard(h) + math.log1p(math.sqrt(2 * h / math.pi)))


def plus_two_bound(h: int) -> LogValue:
    """plus_one_bound(h) + ln 2, lower bound on D(h + 2)."""
    return LogValue(plus_one_bound(h).ln + LN2)


def _simplified_ln_R(n: int) -> float:
    r = n % 4
    if r == 1:
        return 0.5 * math.log(2 / (math.pi * math.e))
    if r == 2:
        return 0.5 * math.log(8 / (math.pi * math.e ** 2 * n))
    if r == 3:
        return 0.5 * math.log(math.e / n)
    return 0.0


def conditional_bound(n: int, reg: OrderRegistry | None = None) -> BoundEntry:
    """Lower bound on R(n) assuming a Hadamard matrix exists at every multiple of 4.

    ``ln_R`` is the bound as stated for each residue class: the constant
    (2/(pi e))**(1/2) for n = 1 mod 4, (8/(pi e**2 n))**(1/2) for n = 2 mod 4,
    and (n+1)**((n-1)/2) / n**(n/2) for n = 3 mod 4.  The sharper value
    obtained before simplifying (excess bordering of order n - 1 or n - 2) is
    reported as ``proof_ln_R``; for n = 1, 2 mod 4 it must strictly exceed
    the stated constant.

    If ``reg`` is given, the Hadamard order the argument relies on must be in
    it.
    """
    if n < 1:
        raise PreconditionError("n must be positive")
    r = n % 4
    src = "excess bordering; assumes the Hadamard conjecture"
    if n in (1, 2) or r == 0:
        h = n
        proof = LogValue(ln_hadamard(n))
        stated_ln_R = 0.0
        src = "Hadamard order; assumes the Hadamard conjecture" if r == 0 else "R(1) = R(2) = 1"
    elif r == 1:
        h = n - 1
        proof = plus_one_bound(h)
        stated_ln_R = _simplified_ln_R(n)
    elif r == 2:
        h = n - 2
        proof = plus_two_bound(h)
        stated_ln_R = _simplified_ln_R(n)
    else:
        h = n + 1
        proof = LogValue.of_power_product([(n + 1, (n - 1) // 2)])
        stated_ln_R = proof.ln - ln_hadamard(n)
        src = "complementary minor of order n+1; assumes the Hadamard conjecture"
    if reg is not None and h not in reg:
        raise PreconditionError(f"order {h} needed for n={n} is not in the registry")
    proof_ln_R = proof.ln - ln_hadamard(n)
    if r in (1, 2) and n > 2 and not proof_ln_R > stated_ln_R:
        raise ArithmeticError(f"proof value {proof_ln_R} does not exceed stated constant at n={n}")
    ln_D = stated_ln_R + ln_hadamard(n)
    exact = proof.exact if r in (0, 3) or n <= 2 else None
    return BoundEntry("conditional", n, ln_D, src, exact, {
        "h": h,
        "proof_ln_R": proof_ln_R,
        "simplified_ln_R": _simplified_ln_R(n),
    })


def meets_sqrt3n_floor(n: int, tol: float = 1e-12) -> bool:
    """Check conditional ln R(n) >= -(1/2) ln(3n).

    The constant 3 can be lowered to pi e**2 / 8 (see IMPROVED_CONSTANT).
    """
    return conditional_bound(n).ln_R >= -0.5 * math.log(3 * n) - tol


def sylvester_doubling_bound(n: int, reg: OrderRegistry | None = None) -> BoundEntry:
    """For n = 2 mod 8: double an order n/2 = 1 mod 4 matrix, R(n) >= R(n/2)**2 >= 2/(pi e)."""
    if n % 8 != 2 or n < 10:
        raise PreconditionError(f"sylvester doubling needs n = 2 mod 8, n >= 10, got {n}")
    half = conditional_bound(n // 2, reg)
    ln_R = 2 * half.ln_R
    return BoundEntry("sylvester_doubling", n, ln_R + ln_hadamard(n),
                      "Sylvester doubling of an order n/2 bordered matrix; assumes the Hadamard conjecture",
                      extra={"h": half.extra["h"], "proof_ln_R": 2 * half.extra["proof_ln_R"]})


# ---------------------------------------------------------------------------
# earlier bounds, for comparison

def kms_bound(n: int) -> LogValue:
    """Koukouvinos-Mitrouli-Seberry lower bound on D(n), with 4t = v + 1 a Hadamard order.

    n = v:     (4t)**(2t-1)
    n = v - 1: 2 (4t)**(2t-2)
    n = v - 2: 4 (4t)**(2t-3)
    """
    r = n % 4
    if r == 0 or n < 1:
        raise PreconditionError(f"KMS comparison needs n = 1, 2 or 3 mod 4, got {n}")
    v = {3: n, 2: n + 1, 1: n + 2}[r]
    t = (v + 1) // 4
    coeff, exp = {3: (1, 2 * t - 1), 2: (2, 2 * t - 2), 1: (4, 2 * t - 3)}[r]
    if exp < 0:
        return LogValue(math.log(coeff) + exp * math.log(4 * t))
    return LogValue.of_power_product([(coeff, 1), (4 * t, exp)])


def ll_bound(n: int, reg: OrderRegistry) -> LogValue:
    """de Launey-Levin: ln R(n) >= -(d/2) ln n with d the distance to the next registry order.

    Returned as ln D.
    """
    if n in reg:
        raise PreconditionError(f"{n} is a registry order")
    _, above = neighbours(n, reg)
    if above is None:
        raise PreconditionError(f"no registry order above {n}")
    d = above - n
    return LogValue(-0.5 * d * math.log(n) + ln_hadamard(n))


def cl_bound(n: int) -> LogValue:
    """Clements-Lindstrom: n ln n - 2 ln D(n) <= n ln(4/3).  Returned as ln D."""
    if n < 1:
        raise PreconditionError("n must be positive")
    return LogValue(ln_hadamard(n) - 0.5 * n * math.log(4 / 3))


def upper_bounds(n: int) -> dict[str, float]:
    """ln of Hadamard's bound, plus Barba's bound with h = n - 1 when n = 1 mod 4."""
    out = {"hadamard": ln_hadamard(n)}
    if n % 4 == 1 and n > 1:
        out["barba"] = 0.5 * math.log(2 * n - 1) + 0.5 * (n - 1) * math.log(n - 1)
    return out


def table_one(n: int) -> dict[str, float]:
    """Coefficients c in R(n) ~ c * n**(-k) for the asymptotic comparison table.

    Each value is the bound at the first integer >= n in the relevant residue
    class, multiplied by the matching power of that integer.
    """
    m1, m2, m3 = (n + (r - n) % 4 for r in (1, 2, 3))
    return {
        "kms_1": math.exp(kms_bound(m1).ln - ln_hadamard(m1)) * m1 ** 1.5,
        "ours_1": math.exp(_simplified_ln_R(m1)),
        "kms_2": math.exp(kms_bound(m2).ln - ln_hadamard(m2)) * m2,
        "ours_2": math.exp(_simplified_ln_R(m2)) * m2 ** 0.5,
        "kms_3": math.exp(kms_bound(m3).ln - ln_hadamard(m3)) * m3 ** 0.5,
        "ours_3": math.exp(conditional_bound(m3).ln_R) * m3 ** 0.5,
    }


# ---------------------------------------------------------------------------
# reports

@dataclass
class BoundReport:
    n: int
    mode: str
    delta: int
    entries: list[BoundEntry]
    upper: dict[str, float]
    reference: dict | None = None

    def entry(self, name: str) -> BoundEntry:
        for e in self.entries:
            if e.name == name:
                return e
        raise KeyError(name)

    def names(self) -> list[str]:
        return [e.name for e in self.entries]

    def as_dict(self) -> dict:
        d = {
            "n": self.n,
            "mode": self.mode,
            "delta": self.delta,
            "entries": [e.as_dict() for e in self.entries],
            "upper": {k: {"ln_D": v, "ln_R": v - ln_hadamard(self.n)} for k, v in self.upper.items()},
        }
        if self.reference is not None:
            d["reference"] = self.reference
        return d

    def to_json(self) -> str:
        return json.dumps(self.as_dict(), indent=2)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["name", "n", "ln_D", "ln_R", "R_if_representable", "source"])
        for e in self.entries:
            w.writerow([e.name, e.n, repr(e.ln_D), repr(e.ln_R), "" if e.R is None else repr(e.R), e.source])
        for k, v in self.upper.items():
            w.writerow([f"{k}_upper", self.n, repr(v), repr(v - ln_hadamard(self.n)), "", "upper bound"])
        return buf.getvalue()


def bound_report(n: int, reg: OrderRegistry, reference_D: int | None = None) -> BoundReport:
    """Every applicable lower bound on D(n) for this registry, plus upper bounds."""
    entries = [unconditional_bound(n, reg)]
    near_delta = entries[0].extra["delta"]
    try:
        entries.append(conditional_bound(n, reg))
    except PreconditionError:
        pass
    else:
        c = entries[-1]
        if n % 4 in (1, 2) and n > 2:
            entries.append(BoundEntry("conditional_proof", n, c.extra["proof_ln_R"] + ln_hadamard(n),
                                      "excess bordering before simplification; assumes the Hadamard conjecture",
                                      extra={"h": c.extra["h"]}))
    if n % 8 == 2 and n >= 10:
        try:
            entries.append(sylvester_doubling_bound(n, reg))
        except PreconditionError:
            pass
    if n % 4:
        r = n % 4
        t = ({3: n, 2: n + 1, 1: n + 2}[r] + 1) // 4
        if 4 * t in reg:
            entries.append(_entry("kms", n, kms_bound(n), "Koukouvinos-Mitrouli-Seberry", t=t))
    if n not in reg and neighbours(n, reg)[1] is not None:
        _, above = neighbours(n, reg)
        entries.append(_entry("de_launey_levin", n, ll_bound(n, reg), "de Launey-Levin", d=above - n))
    entries.append(_entry("clements_lindstrom", n, cl_bound(n), "Clements-Lindstrom"))
    upper = upper_bounds(n)
    for e in entries:
        if e.ln_D > upper["hadamard"] + 1e-9:
            raise ArithmeticError(f"{e.name} lower bound exceeds the Hadamard bound at n={n}")
    ref = None
    if reference_D is not None:
        ref = {"D": str(reference_D), "ln_R": math.log(reference_D) - ln_hadamard(n)}
        ref["R"] = math.exp(ref["ln_R"])
    return BoundReport(n, reg.mode, near_delta, entries, upper, ref)
