"""Prime sieves, bounded trial-division factorization, and primality testing.

Factorizations are *partial by design*: every prime factor up to a fixed
bound is extracted with its exact exponent, and whatever remains is kept
as a classified cofactor (unit / prime / composite / unknown).  Nothing
is ever guessed; the product of the parts always reconstructs the input.

For large inputs, dividing by each of the ~78k primes below 10^6 one at
a time is the bottleneck, so a factorizer built for a bound precomputes
a product tree over its prime list: one gcd against the root reveals
whether any listed prime divides the value, and a short descent locates
the divisors.  The result is identical to the plain prime-by-prime loop
(asserted in tests); only the route differs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional

import numpy as np

from .errors import ResourceGuardError

COFACTOR_UNIT = "unit"
COFACTOR_PRIME = "prime"
COFACTOR_COMPOSITE = "composite"
COFACTOR_UNKNOWN = "unknown"

_SPF_GUARD = 200_000_000  # entries; ~0.8 GB of int32 beyond this

# Strong-pseudoprime bases proving primality for all n < 2^64.
_DET64_BASES = (2, 325, 9375, 28178, 450775, 9780504, 1795265022)

# Fixed schedule above 2^64: the first 40 primes (>= 40 independent bases).
_BIG_BASES = (
    2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61,
    67, 71, 73, 79, 83, 89, 97, 101, 103, 107, 109, 113, 127, 131, 137,
    139, 149, 151, 157, 163, 167, 173,
)

# Cofactors wider than this skip the primality test and stay "unknown";
# a 40-base test on such values costs minutes and never changes a verdict
# that matters here.
PRIME_TEST_BIT_LIMIT = 16384


def sieve_smallest_prime_factor(limit: int) -> np.ndarray:
    """Smallest-prime-factor table for 0..limit (spf[0]=0, spf[1]=1)."""
    if limit < 2:
        raise ValueError("sieve limit must be >= 2")
    if limit > _SPF_GUARD:
        raise ResourceGuardError(
            f"spf table for limit={limit} needs ~{4 * limit / 1e9:.1f} GB; "
            f"raise the guard or use factor_bounded instead"
        )
    spf = np.zeros(limit + 1, dtype=np.int32)
    for p in range(2, math.isqrt(limit) + 1):
        if spf[p] == 0:
            block = spf[p * p :: p]
            block[block == 0] = p
    untouched = np.nonzero(spf == 0)[0]
    spf[untouched] = untouched  # primes (and 0, 1)
    spf[1] = 1
    return spf


def factor_small(n: int, spf: np.ndarray) -> list[tuple[int, int]]:
    """Full factorization of 1 <= n < len(spf) by spf-table walk."""
    if n < 1:
        raise ValueError("factor_small requires n >= 1")
    out: list[tuple[int, int]] = []
    while n > 1:
        p = int(spf[n])
        e = 0
        while n % p == 0:
            n //= p
            e += 1
        out.append((p, e))
    return out


def primes_up_to(limit: int) -> list[int]:
    """Ascending primes <= limit."""
    spf = sieve_smallest_prime_factor(max(limit, 2))
    idx = np.arange(len(spf))
    return [int(p) for p in idx[2 : limit + 1][spf[2 : limit + 1] == idx[2 : limit + 1]]]


def _strong_probable_prime(n: int, base: int, d: int, s: int) -> bool:
    base %= n
    if base == 0:
        return True
    x = pow(base, d, n)
    if x == 1 or x == n - 1:
        return True
    for _ in range(s - 1):
        x = x * x % n
        if x == n - 1:
            return True
    return False


def is_probable_prime(v: int) -> bool:
    """Deterministic below 2^64; 40 fixed strong-pseudoprime bases above."""
    if v < 2:
        raise ValueError("primality test requires v >= 2")
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if v == p:
            return True
        if v % p == 0:
            return False
    d = v - 1
    s = 0
    while d % 2 == 0:
        d //= 2
        s += 1
    bases = _DET64_BASES if v < 1 << 64 else _BIG_BASES
    return all(_strong_probable_prime(v, b, d, s) for b in bases)


@dataclass(frozen=True)
class Factorization:
    """value = prod(p^e) * cofactor, all listed primes <= bound, ascending.

    cofactor_class:
      unit      - cofactor == 1, factorization complete
      prime     - cofactor passed the primality test (kept out of factors
                  so the "<= bound" invariant stays true)
      composite - cofactor failed the test; all its primes exceed bound
      unknown   - cofactor too wide to test; primes still exceed bound
    """

    value: int
    factors: tuple[tuple[int, int], ...]
    cofactor: int
    bound: int
    cofactor_class: str

    def __post_init__(self) -> None:
        prod = self.cofactor
        last = 1
        for p, e in self.factors:
            if p <= last or e < 1 or p > self.bound:
                raise ValueError(f"bad factor list entry ({p}, {e})")
            last = p
            prod *= p**e
        if prod != self.value:
            raise ValueError(f"factor parts do not reconstruct {self.value}")
        if (self.cofactor == 1) != (self.cofactor_class == COFACTOR_UNIT):
            raise ValueError("cofactor/unit classification mismatch")

    @property
    def complete(self) -> bool:
        """True when the full prime factorization is known exactly."""
        return self.cofactor_class in (COFACTOR_UNIT, COFACTOR_PRIME)

    def known_radical(self) -> int:
        r = 1
        for p, _ in self.factors:
            r *= p
        return r

    @staticmethod
    def from_factors(
        factors: list[tuple[int, int]] | tuple[tuple[int, int], ...],
    ) -> "Factorization":
        """Exact factorization from an explicit (prime, exponent) list."""
        fs = tuple(sorted(factors))
        value = 1
        for p, e in fs:
            value *= p**e
        bound = max((p for p, _ in fs), default=2)
        return Factorization(value, fs, 1, bound, COFACTOR_UNIT)


class BoundedFactorizer:
    """Trial division by every prime <= bound, with exact exponents.

    Work is layered: primes up to _SCAN_CAP are stripped by direct
    division with the usual early exit (p^2 > cofactor means the rest is
    prime); any factors left in (_SCAN_CAP, bound] are then located with
    a single gcd against a product tree of the tail primes.  The result
    is identical to the plain prime-by-prime loop, only cheaper for wide
    values.  All precomputed state is read-only after construction.
    """

    _SCAN_CAP = 1 << 12  # direct-division stage covers primes up to here
    _TREE_LEAF = 64  # primes per product-tree leaf block
    _BATCH_BITS = 1 << 14  # cofactor product size per batched root gcd

    def __init__(self, bound: int = 10**6,
                 prime_test_bit_limit: int = PRIME_TEST_BIT_LIMIT):
        if bound < 2:
            raise ValueError("factor bound must be >= 2")
        self.bound = bound
        self.prime_test_bit_limit = prime_test_bit_limit
        self.primes = primes_up_to(bound)
        self._scan_cap = min(bound, self._SCAN_CAP)
        self._scan_primes = [p for p in self.primes if 2 < p <= self._scan_cap]
        self._tail_primes = [p for p in self.primes if p > self._scan_cap]
        self._tree: Optional[list[list[int]]] = None

    # -- product tree over the tail primes -----------------------------

    def _tree_levels(self) -> list[list[int]]:
        if self._tree is None:
            leaves = [
                math.prod(self._tail_primes[i : i + self._TREE_LEAF])
                for i in range(0, len(self._tail_primes), self._TREE_LEAF)
            ] or [1]
            levels = [leaves]
            while len(levels[-1]) > 1:
                prev = levels[-1]
                levels.append(
                    [
                        prev[i] * prev[i + 1] if i + 1 < len(prev) else prev[i]
                        for i in range(0, len(prev), 2)
                    ]
                )
            self._tree = levels
        return self._tree

    def _tail_primes_dividing(self, v: int) -> list[int]:
        """Tail primes dividing v, via product-tree descent."""
        levels = self._tree_levels()
        found: list[int] = []
        stack = [(len(levels) - 1, 0)]
        while stack:
            level, idx = stack.pop()
            node = levels[level][idx]
            if math.gcd(v, node) == 1:
                continue
            if level == 0:
                base = idx * self._TREE_LEAF
                for p in self._tail_primes[base : base + self._TREE_LEAF]:
                    if v % p == 0:
                        found.append(p)
            else:
                right = 2 * idx + 1
                if right < len(levels[level - 1]):
                    stack.append((level - 1, right))
                stack.append((level - 1, 2 * idx))
        found.sort()
        return found

    # -- factorization --------------------------------------------------

    def _classify_cofactor(self, cof: int) -> str:
        if cof == 1:
            return COFACTOR_UNIT
        if cof < self.bound * self.bound:
            return COFACTOR_PRIME  # composite would need two primes > bound
        if cof.bit_length() > self.prime_test_bit_limit:
            return COFACTOR_UNKNOWN
        return COFACTOR_PRIME if is_probable_prime(cof) else COFACTOR_COMPOSITE

    def _scan_stage(self, v: int) -> tuple[list[tuple[int, int]], int, bool]:
        """Strip 2 and the scan primes; True when nothing can remain in
        (scan_cap, bound] so the tail stage is unnecessary."""
        factors: list[tuple[int, int]] = []
        cof = v
        tz = (cof & -cof).bit_length() - 1
        if tz:
            factors.append((2, tz))
            cof >>= tz
        if cof > 1:
            for p in self._scan_primes:
                if p * p > cof:
                    break
                if cof % p == 0:
                    e = 1
                    cof //= p
                    while cof % p == 0:
                        e += 1
                        cof //= p
                    factors.append((p, e))
        settled = (
            cof == 1
            or cof < self._scan_cap * self._scan_cap  # survivor: prime
            or not self._tail_primes
        )
        return factors, cof, settled

    def _finalize(
        self, v: int, factors: list[tuple[int, int]], cof: int
    ) -> Factorization:
        if 1 < cof <= self.bound:
            factors.append((cof, 1))  # a listed prime left standing
            cof = 1
        factors.sort()
        return Factorization(
            v, tuple(factors), cof, self.bound, self._classify_cofactor(cof)
        )

    def _extract_tail(
        self, factors: list[tuple[int, int]], cof: int, tail_ps: list[int]
    ) -> int:
        for p in tail_ps:
            if cof % p == 0:
                e = 1
                cof //= p
                while cof % p == 0:
                    e += 1
                    cof //= p
                factors.append((p, e))
        return cof

    def factor(self, v: int) -> Factorization:
        if v < 1:
            raise ValueError("factor requires v >= 1")
        factors, cof, settled = self._scan_stage(v)
        if not settled:
            cof = self._extract_tail(factors, cof, self._tail_primes_dividing(cof))
        return self._finalize(v, factors, cof)

    def factor_many(self, values: list[int]) -> list[Factorization]:
        """Factor a batch, sharing one product-tree gcd across the batch.

        Cofactors surviving the scan stage are multiplied together until
        the product reaches _BATCH_BITS; a single gcd of that product
        against the tree root reveals every tail prime involved, and one
        descent on the (small) gcd locates them.  Per-value results are
        identical to factor().
        """
        if any(v < 1 for v in values):
            raise ValueError("factor requires v >= 1")
        results: list[Optional[Factorization]] = [None] * len(values)
        pending: list[tuple[int, list[tuple[int, int]], int]] = []
        root = self._tree_levels()[-1][0]

        def flush() -> None:
            if not pending:
                return
            prod = 1
            for _, _, cof in pending:
                prod *= cof
            g = math.gcd(prod, root)
            tail_ps = self._tail_primes_dividing(g) if g > 1 else []
            for i, factors, cof in pending:
                if tail_ps:
                    cof = self._extract_tail(factors, cof, tail_ps)
                results[i] = self._finalize(values[i], factors, cof)
            pending.clear()

        batch_bits = 0
        for i, v in enumerate(values):
            factors, cof, settled = self._scan_stage(v)
            if settled:
                results[i] = self._finalize(v, factors, cof)
                continue
            pending.append((i, factors, cof))
            batch_bits += cof.bit_length()
            if batch_bits >= self._BATCH_BITS:
                flush()
                batch_bits = 0
        flush()
        return results  # type: ignore[return-value]


@lru_cache(maxsize=8)
def get_factorizer(bound: int = 10**6) -> BoundedFactorizer:
    """Shared factorizer per bound (prime list built once per process)."""
    return BoundedFactorizer(bound)


def factor_bounded(v: int, bound: int = 10**6) -> Factorization:
    """Extract all prime factors <= bound of v, classifying the remainder."""
    return get_factorizer(bound).factor(v)
