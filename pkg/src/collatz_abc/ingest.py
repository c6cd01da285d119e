"""Streaming ingestion of abc-triple lists, batch classification with
cumulative counts, the small-range brute-force oracle, and power-law
fitting.

File format (one triple per line): three ASCII decimal integers
separated by single spaces, ``a b c``; lines starting with '#' are
ignored.  A two-column variant ``a c`` (with b = c - a) is accepted via
``two_column=True``.  Malformed lines are reported with their line
numbers and skipped; the stream continues.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Iterable, Iterator, Optional

import numpy as np

from .errors import ResourceGuardError
from .factorize import sieve_smallest_prime_factor
from .mu import UNCERTAIN, YES, TripleRecord, classify_triple

BRUTE_FORCE_GUARD = 10**6


@dataclass(frozen=True)
class RejectedLine:
    lineno: int
    line: str
    reason: str


def parse_triples(
    lines: Iterable[str],
    two_column: bool = False,
    on_reject: Optional[Callable[[RejectedLine], None]] = None,
) -> Iterator[tuple[int, int, int]]:
    """Yield validated (a, b, c) triples, canonicalized to a <= b."""
    for lineno, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        reason = None
        a = b = c = 0
        try:
            if two_column:
                if len(parts) != 2:
                    raise ValueError("expected 2 fields")
                a, c = int(parts[0]), int(parts[1])
                b = c - a
            else:
                if len(parts) != 3:
                    raise ValueError("expected 3 fields")
                a, b, c = (int(x) for x in parts)
        except ValueError as exc:
            reason = str(exc)
        if reason is None:
            if min(a, b, c) < 1:
                reason = "parts must be positive"
            elif a + b != c:
                reason = f"{a} + {b} != {c}"
            elif math.gcd(a, b) != 1:
                reason = f"gcd({a}, {b}) = {math.gcd(a, b)} > 1"
        if reason is not None:
            if on_reject is not None:
                on_reject(RejectedLine(lineno, line, reason))
            continue
        yield (a, b, c) if a <= b else (b, a, c)


@dataclass
class ThresholdCounts:
    x: int
    mu: int = 0
    abc: int = 0
    good: int = 0


@dataclass
class ScanSummary:
    """Classification totals plus cumulative counts below thresholds."""

    total: int = 0
    abc_hits: int = 0
    mu_hits_certain: int = 0
    mu_hits_uncertain: int = 0
    good_triples: int = 0
    good_and_mu: int = 0
    max_gain: float = -math.inf
    positive_gains: int = 0
    thresholds: list[ThresholdCounts] = field(default_factory=list)

    def add(self, rec: TripleRecord) -> None:
        self.total += 1
        is_mu = rec.is_mu_hit == YES
        is_abc = rec.is_abc_hit == YES
        is_good = rec.is_good == YES
        if is_abc:
            self.abc_hits += 1
        if is_mu:
            self.mu_hits_certain += 1
        elif rec.is_mu_hit == UNCERTAIN:
            self.mu_hits_uncertain += 1
        if is_good:
            self.good_triples += 1
            if is_mu or rec.is_mu_hit == UNCERTAIN:
                self.good_and_mu += 1
        if rec.gain.lo > 0:
            self.positive_gains += 1
        self.max_gain = max(self.max_gain, rec.gain.mid)
        for t in self.thresholds:
            if rec.c <= t.x:
                if is_mu:
                    t.mu += 1
                if is_abc:
                    t.abc += 1
                if is_good:
                    t.good += 1

    def merge(self, other: "ScanSummary") -> "ScanSummary":
        """Combine summaries of disjoint chunks (associative, commutative)."""
        if [t.x for t in self.thresholds] != [t.x for t in other.thresholds]:
            raise ValueError("summaries built with different thresholds")
        out = ScanSummary(
            total=self.total + other.total,
            abc_hits=self.abc_hits + other.abc_hits,
            mu_hits_certain=self.mu_hits_certain + other.mu_hits_certain,
            mu_hits_uncertain=self.mu_hits_uncertain + other.mu_hits_uncertain,
            good_triples=self.good_triples + other.good_triples,
            good_and_mu=self.good_and_mu + other.good_and_mu,
            max_gain=max(self.max_gain, other.max_gain),
            positive_gains=self.positive_gains + other.positive_gains,
            thresholds=[
                ThresholdCounts(a.x, a.mu + b.mu, a.abc + b.abc, a.good + b.good)
                for a, b in zip(self.thresholds, other.thresholds)
            ],
        )
        return out


@dataclass
class DatasetScan:
    summary: ScanSummary
    records: list[TripleRecord]


def scan_dataset(
    triples: Iterable[tuple[int, int, int]],
    bound: int = 10**6,
    thresholds: Iterable[int] = (),
    on_record: Optional[Callable[[TripleRecord], None]] = None,
) -> DatasetScan:
    """Classify every triple; returns the summary and records sorted by c."""
    summary = ScanSummary(
        thresholds=[ThresholdCounts(int(x)) for x in sorted(thresholds)]
    )
    records = []
    for a, b, c in triples:
        rec = classify_triple(a, b, c, bound)
        summary.add(rec)
        records.append(rec)
        if on_record is not None:
            on_record(rec)
    records.sort(key=lambda r: (r.c, r.a))
    return DatasetScan(summary=summary, records=records)


def mu_rad_tables(limit: int) -> tuple[np.ndarray, np.ndarray]:
    """Exact M(n) and rad(n) for all 0 <= n <= limit (index 0 unused).

    Built by walking the smallest-prime-factor sieve; int64 is safe for
    limit <= 10^6 since M(n) <= n and rad(n) <= n.
    """
    spf = sieve_smallest_prime_factor(limit)
    m = np.ones(limit + 1, dtype=np.int64)
    rad = np.ones(limit + 1, dtype=np.int64)
    for n in range(2, limit + 1):
        p = int(spf[n])
        e = 1
        rest = n // p
        while rest % p == 0:
            rest //= p
            e += 1
        m[n] = m[rest] * p * e
        rad[n] = rad[rest] * p
    return m, rad


def brute_force_mu_hits(c_max: int) -> list[tuple[int, int, int]]:
    """Exhaustive mu-hits with c <= c_max by the exact M predicate.

    Independent oracle path: per-n M values come from the spf sieve, the
    hit test is the raw integer comparison M(a) M(b) M(c) <= c - 1, and
    c values with M(c) >= c are pruned outright (they cannot head a hit).
    """
    if c_max < 2:
        raise ValueError("c_max must be >= 2")
    if c_max > BRUTE_FORCE_GUARD:
        raise ResourceGuardError(
            f"brute force above c_max = {BRUTE_FORCE_GUARD} is not supported"
        )
    m, _ = mu_rad_tables(c_max)
    hits = []
    for c in range(2, c_max + 1):
        mc = int(m[c])
        if mc >= c:
            continue
        thr = (c - 1) // mc
        half = c // 2
        prod = m[1 : half + 1] * m[c - 1 : c - half - 1 : -1]
        for i in np.nonzero(prod <= thr)[0]:
            a = int(i) + 1
            if math.gcd(a, c) == 1:
                hits.append((a, c - a, c))
    return hits


def fit_power_law(counts: list[tuple[float, float]]) -> tuple[float, float]:
    """Least-squares fit of N = (x / x0)^alpha on log-log axes.

    Returns (alpha, x0); requires >= 3 points with N >= 1 and at least
    two distinct x values.
    """
    if len(counts) < 3:
        raise ValueError("need at least 3 points")
    xs = [float(x) for x, _ in counts]
    ns = [float(n) for _, n in counts]
    if any(x <= 0 for x in xs) or any(n < 1 for n in ns):
        raise ValueError("need x > 0 and N >= 1")
    if len(set(xs)) < 2:
        raise ValueError("degenerate fit: all x equal")
    lx = np.log(xs)
    ln = np.log(ns)
    alpha, intercept = np.polyfit(lx, ln, 1)
    if abs(alpha) < 1e-12:
        raise ValueError("flat fit: alpha ~ 0 leaves x0 undefined")
    try:
        x0 = math.exp(-intercept / alpha)
    except OverflowError as exc:
        raise ValueError("fit produced an unrepresentable x0") from exc
    return float(alpha), float(x0)
