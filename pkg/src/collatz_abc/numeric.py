"""Big-integer arithmetic services: bracketed logarithms, inverses mod 2^j,
3-adic valuation, and lcm.

Strict comparisons elsewhere in the package are always done on exact
integers; logarithms are only needed for reported quantities (quality,
gain, entropy margins).  To keep those reproducible and trustworthy,
``ln_nat`` returns a certified two-sided bracket instead of a bare float:
the true logarithm is guaranteed to lie inside the interval, and the
interval is narrow enough (relative width <= 2^-40) that downstream
tolerances are never at risk.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable

_LN2 = 0.6931471805599453  # nearest double to ln 2
_LN2_LO = math.nextafter(_LN2, 0.0)
_LN2_HI = math.nextafter(_LN2, 1.0)

# Leading window retained when taking the log of a huge integer.  The
# truncation error ln(1 + 2^-127) is negligible next to double rounding.
_WINDOW_BITS = 128

# ulps of one-sided slack granted to the C library log (observed < 1 ulp).
_LIBM_SLACK = 2


def _down(x: float) -> float:
    return math.nextafter(x, -math.inf)


def _up(x: float) -> float:
    return math.nextafter(x, math.inf)


@dataclass(frozen=True)
class LogInterval:
    """Closed interval [lo, hi] certified to contain a real number."""

    lo: float
    hi: float

    def __post_init__(self) -> None:
        if not self.lo <= self.hi:
            raise ValueError(f"interval bounds out of order: [{self.lo}, {self.hi}]")

    @property
    def width(self) -> float:
        return self.hi - self.lo

    @property
    def mid(self) -> float:
        return 0.5 * (self.lo + self.hi)

    def __add__(self, other: "LogInterval") -> "LogInterval":
        return LogInterval(_down(self.lo + other.lo), _up(self.hi + other.hi))

    def __sub__(self, other: "LogInterval") -> "LogInterval":
        return LogInterval(_down(self.lo - other.hi), _up(self.hi - other.lo))

    def __neg__(self) -> "LogInterval":
        return LogInterval(-self.hi, -self.lo)

    def contains(self, x: float) -> bool:
        return self.lo <= x <= self.hi

    def overlaps(self, other: "LogInterval") -> bool:
        return self.lo <= other.hi and other.lo <= self.hi

    def divide_by(self, other: "LogInterval") -> "LogInterval":
        """Interval quotient, requiring the divisor to be strictly positive."""
        if other.lo <= 0.0:
            raise ValueError("interval division requires a positive divisor")
        return LogInterval(_down(self.lo / other.hi), _up(self.hi / other.lo))


def ln_nat(v: int) -> LogInterval:
    """Bracket ln(v) for a positive integer of any size.

    The top _WINDOW_BITS bits of v pin the value between w*2^s and
    (w+1)*2^s; both endpoint logs are then evaluated in doubles with
    directed widening that absorbs libm rounding.  Deterministic.
    """
    if v < 1:
        raise ValueError("ln_nat requires v >= 1")
    if v == 1:
        return LogInterval(0.0, 0.0)
    shift = v.bit_length() - _WINDOW_BITS
    if shift <= 0:
        w_lo = w_hi = v
        shift = 0
    else:
        w_lo = v >> shift
        w_hi = w_lo + 1
    lo = math.log(w_lo)
    hi = math.log(w_hi)
    for _ in range(_LIBM_SLACK):
        lo = _down(lo)
        hi = _up(hi)
    if shift:
        lo = _down(lo + _down(shift * _LN2_LO))
        hi = _up(hi + _up(shift * _LN2_HI))
    return LogInterval(lo, hi)


def log2_nat(v: int) -> LogInterval:
    """Bracket log2(v); exact for powers of two below 2^53."""
    if v >= 1 and v & (v - 1) == 0:
        e = v.bit_length() - 1
        if e < 2**53:
            return LogInterval(float(e), float(e))
    nat = ln_nat(v)
    return LogInterval(_down(nat.lo / _LN2_HI), _up(nat.hi / _LN2_LO))


def ln_range(lo: int, hi: int) -> LogInterval:
    """Bracket ln(x) for an unknown integer x with lo <= x <= hi."""
    if lo > hi:
        raise ValueError("empty integer range")
    return LogInterval(ln_nat(lo).lo, ln_nat(hi).hi)


def mod_inv_pow2(odd: int, j: int) -> int:
    """The unique x < 2^j with odd*x = 1 (mod 2^j)."""
    if j < 1:
        raise ValueError("modulus exponent j must be >= 1")
    if odd < 1 or odd % 2 == 0:
        raise ValueError("inverse mod 2^j requires a positive odd value")
    return pow(odd, -1, 1 << j)


def v3(v: int) -> int:
    """Largest e with 3^e dividing v."""
    if v < 1:
        raise ValueError("v3 requires v >= 1")
    e = 0
    while v % 3 == 0:
        v //= 3
        e += 1
    return e


def lcm_all(values: Iterable[int]) -> int:
    """Least common multiple of a non-empty collection of positive integers."""
    vals = list(values)
    if not vals:
        raise ValueError("lcm of an empty list")
    if any(v < 1 for v in vals):
        raise ValueError("lcm requires positive integers")
    return math.lcm(*vals)
