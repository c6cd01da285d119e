"""The compressed radical M(n) = prod(p*e) over prime powers p^e of n,
its logarithm mu(n) = ln M(n), radicals, and the triple classifiers.

For a triple of coprime positive integers a + b = c the three verdicts are

    abc-hit:  c > rad(abc)
    mu-hit:   c > M(abc)        (equivalently ln c > mu(abc))
    good:     quality = ln c / ln rad(abc) > 1.4

The mu-hit and abc-hit predicates are decided on exact integers whenever
the factorizations are complete; with a surviving composite/unknown
cofactor m (all prime factors above the trial-division bound B) they are
decided against rigorous two-sided bounds instead:

    upper: m's contribution to M is at most m itself (mu <= ln),
    lower: it is at least B * max(1, floor(log_B m)), the minimum over
           feasible prime-power shapes with every prime above B.

A verdict is "uncertain" exactly when c falls inside the bound gap;
nothing is ever guessed from an incomplete factorization.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import InvariantViolation
from .factorize import COFACTOR_PRIME, Factorization, get_factorizer
from .numeric import LogInterval, ln_nat, ln_range

YES = "yes"
NO = "no"
UNCERTAIN = "uncertain"

GOOD_QUALITY_THRESHOLD = 1.4


@dataclass(frozen=True)
class MuInterval:
    """Integer bounds m_lo <= M <= m_hi on a compressed radical."""

    m_lo: int
    m_hi: int

    def __post_init__(self) -> None:
        if not 1 <= self.m_lo <= self.m_hi:
            raise ValueError(f"bad MuInterval [{self.m_lo}, {self.m_hi}]")

    @property
    def exact(self) -> bool:
        return self.m_lo == self.m_hi

    def __mul__(self, other: "MuInterval") -> "MuInterval":
        return MuInterval(self.m_lo * other.m_lo, self.m_hi * other.m_hi)

    def log(self) -> LogInterval:
        return ln_range(self.m_lo, self.m_hi)


def _min_cofactor_exponent(cofactor: int, bound: int) -> int:
    """max(1, floor(log_bound(cofactor))), adjusted to be exact."""
    e = max(1, int(math.log(cofactor) / math.log(bound)))
    while bound ** (e + 1) <= cofactor:
        e += 1
    while e > 1 and bound**e > cofactor:
        e -= 1
    return e


def m_of(f: Factorization) -> MuInterval:
    """M bounds for a (possibly partial) factorization.

    Complete factorizations (unit or prime cofactor) give an exact M.
    """
    m = 1
    for p, e in f.factors:
        m *= p * e
    if f.cofactor == 1:
        return MuInterval(m, m)
    if f.cofactor_class == COFACTOR_PRIME:
        m *= f.cofactor
        return MuInterval(m, m)
    e_min = _min_cofactor_exponent(f.cofactor, f.bound)
    return MuInterval(m * f.bound * e_min, m * f.cofactor)


def radical_of(f: Factorization) -> tuple[int, int]:
    """Exact radical when complete, otherwise rigorous integer bounds."""
    r = f.known_radical()
    if f.cofactor == 1:
        return (r, r)
    if f.cofactor_class == COFACTOR_PRIME:
        return (r * f.cofactor, r * f.cofactor)
    # composite/unknown: at least one unseen prime > bound, radical <= cofactor
    return (r * (f.bound + 1), r * f.cofactor)


@dataclass(frozen=True)
class TripleRecord:
    """Classified coprime triple a + b = c (canonical order a <= b)."""

    a: int
    b: int
    c: int
    fa: Factorization
    fb: Factorization
    fc: Factorization
    radical_interval: tuple[int, int]
    m_interval: MuInterval
    quality: LogInterval
    gain: LogInterval
    is_abc_hit: str
    is_good: str
    is_mu_hit: str

    def __post_init__(self) -> None:
        if self.is_mu_hit == YES and self.is_abc_hit != YES:
            raise InvariantViolation(
                f"mu-hit without abc-hit for ({self.a}, {self.b}, {self.c})"
            )

    @property
    def complete(self) -> bool:
        return self.fa.complete and self.fb.complete and self.fc.complete


def _verdict(c: int, lo: int, hi: int) -> str:
    """Is c > X certain, given only lo <= X <= hi?"""
    if c > hi:
        return YES
    if c <= lo:
        return NO
    return UNCERTAIN


def classify_factored(
    fa: Factorization, fb: Factorization, fc: Factorization
) -> TripleRecord:
    """Classification core for already-factored triple parts.

    The parts of a valid triple are pairwise coprime, so M and rad both
    multiply across them without overlap.
    """
    a, b, c = fa.value, fb.value, fc.value
    if a + b != c:
        raise ValueError(f"not a triple: {a} + {b} != {c}")
    if math.gcd(a, b) != 1:
        raise ValueError(f"triple parts not coprime: gcd({a}, {b}) > 1")
    if a > b:
        a, b = b, a
        fa, fb = fb, fa

    m_int = m_of(fa) * m_of(fb) * m_of(fc)
    ra = radical_of(fa)
    rb = radical_of(fb)
    rc = radical_of(fc)
    rad_lo = ra[0] * rb[0] * rc[0]
    rad_hi = ra[1] * rb[1] * rc[1]

    ln_c = ln_nat(c)
    quality = ln_c.divide_by(ln_range(max(rad_lo, 2), max(rad_hi, 2)))
    gain = ln_c - m_int.log()

    is_mu = _verdict(c, m_int.m_lo, m_int.m_hi)
    is_abc = _verdict(c, rad_lo, rad_hi)
    if quality.lo > GOOD_QUALITY_THRESHOLD:
        is_good = YES
    elif quality.hi <= GOOD_QUALITY_THRESHOLD:
        is_good = NO
    else:
        is_good = UNCERTAIN

    return TripleRecord(
        a=a, b=b, c=c, fa=fa, fb=fb, fc=fc,
        radical_interval=(rad_lo, rad_hi),
        m_interval=m_int,
        quality=quality,
        gain=gain,
        is_abc_hit=is_abc,
        is_good=is_good,
        is_mu_hit=is_mu,
    )


def classify_triple(
    a: int, b: int, c: int, bound: int = 10**6
) -> TripleRecord:
    """Factor a, b, c up to the bound and classify the triple."""
    if min(a, b, c) < 1:
        raise ValueError("triple parts must be positive")
    if a + b != c:
        raise ValueError(f"not a triple: {a} + {b} != {c}")
    if math.gcd(a, b) != 1:
        raise ValueError(f"not coprime: gcd({a}, {b}) = {math.gcd(a, b)}")
    fz = get_factorizer(bound)
    return classify_factored(fz.factor(a), fz.factor(b), fz.factor(c))


def gain_of_factored(
    fa: Factorization, fb: Factorization, fc: Factorization
) -> LogInterval:
    """Gain ln c - mu(abc) of a valid factored triple, as an interval."""
    return classify_factored(fa, fb, fc).gain
