"""Wieferich primes (p^2 divides 2^(p-1) - 1) and the mu-hit families
they generate.

A certified divisor D of 2^E - 1 lower-bounds the gain of the triple
(1, 2^E - 1, 2^E):

    g(1, 2^E - 1, 2^E) > ln D - mu(D) - ln(2E),

because the unseen part (2^E - 1)/D contributes at most its own log.
Squared Wieferich primes make ln D - mu(D) large, which is what pushes
these enormous triples over the mu-hit threshold.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

from .collatz import t_step
from .errors import InvariantViolation
from .factorize import (
    Factorization,
    factor_small,
    get_factorizer,
    is_probable_prime,
    primes_up_to,
    sieve_smallest_prime_factor,
)
from .mu import TripleRecord, classify_factored, classify_triple, m_of
from .numeric import lcm_all, ln_nat, v3

KNOWN_WIEFERICH = (1093, 3511)

# Triples whose power exponent exceeds this many bits are not classified in
# full; only divisor certificates and gain bounds are computed.
CLASSIFY_BIT_CAP = 200_000


def is_wieferich(p: int) -> bool:
    """True iff prime p satisfies 2^(p-1) = 1 (mod p^2)."""
    if p < 2 or not is_probable_prime(p):
        raise ValueError(f"is_wieferich requires a prime, got {p}")
    return pow(2, p - 1, p * p) == 1


def wieferich_search(limit: int) -> list[int]:
    """All Wieferich primes <= limit, ascending."""
    if limit < 2:
        raise ValueError("search limit must be >= 2")
    return [p for p in primes_up_to(limit) if pow(2, p - 1, p * p) == 1]


def lemma_gain_bound(
    primes: list[int] | tuple[int, ...], assume_wieferich: bool = False
) -> tuple[int, float]:
    """(L, bound) with L = lcm(p_i - 1) and
    bound = ln(p_1 ... p_k / (2^(k+1) L))."""
    ps = list(primes)
    if not ps:
        raise ValueError("need at least one prime")
    if len(set(ps)) != len(ps):
        raise ValueError("primes must be distinct")
    for p in ps:
        if not assume_wieferich and not is_wieferich(p):
            raise ValueError(f"{p} is not a Wieferich prime")
    L = lcm_all([p - 1 for p in ps])
    prod = math.prod(ps)
    bound = math.log(prod) - math.log((1 << (len(ps) + 1)) * L)
    return L, bound


def refine_gain_bound(E: int, D: Factorization) -> float:
    """Gain lower bound ln D - mu(D) - ln(2E) from a certified divisor.

    Every prime power of D is re-verified to divide 2^E - 1 by modular
    exponentiation; an empty divisor (D = 1) degrades to -ln(2E).
    """
    if E < 1:
        raise ValueError("exponent E must be >= 1")
    if D.cofactor != 1:
        raise ValueError("divisor certificate must be fully factored")
    for p, e in D.factors:
        if pow(2, E, p**e) != 1:
            raise ValueError(f"certificate failure: {p}^{e} does not divide 2^{E}-1")
    ln_d = ln_nat(D.value).mid
    mu_d = ln_nat(m_of(D).m_lo).mid
    return ln_d - mu_d - math.log(2 * E)


@dataclass(frozen=True)
class WieferichFamilyItem:
    """A triple (1, 2^E - 1, 2^E) tied to Wieferich primes, with its
    certified divisor of 2^E - 1 and the implied gain lower bound."""

    primes: tuple[int, ...]
    L: int
    m: int
    E: int
    known_divisor: Factorization
    gain_lower_bound: float


@dataclass(frozen=True)
class FamilyGeneration:
    """family_generate output: the item, its Collatz linkage, and (when
    the exponent is under the classification cap) the classified triple."""

    item: WieferichFamilyItem
    j: int
    k: int
    n: int
    triple: Optional[TripleRecord]
    iterates_verified: bool


def family_generate(
    p: int,
    m: int,
    bound: int = 10**6,
    classify_bit_cap: int = CLASSIFY_BIT_CAP,
) -> FamilyGeneration:
    """Build the triple (1, 2^(m(p-1)) - 1, 2^(m(p-1))) for Wieferich p
    and link it to its length-j Collatz sequence.

    With E = m(p-1), k the 3-adic valuation of 2^E - 1 and j = E + k, the
    sequence starts at n = (2^j - 3^k - 2^k) / 3^k and must satisfy
    T^k(n) = 2^(j-k) - 2 and T^j(n) = 3^(j-k-1) - 1 exactly; both are
    re-verified by direct iteration (checking parities along the way).
    """
    if m < 1:
        raise ValueError("multiplier m must be >= 1")
    if not is_wieferich(p):
        raise ValueError(f"{p} is not a Wieferich prime")
    E = m * (p - 1)
    b = (1 << E) - 1
    k = v3(b)
    j = E + k
    pow3k = 3**k
    n, rem = divmod((1 << j) - pow3k - (1 << k), pow3k)
    if rem:
        raise InvariantViolation(
            f"(2^{j} - 3^{k} - 2^{k}) not divisible by 3^{k} for p={p}, m={m}"
        )

    cur = n
    for i in range(j):
        if (cur % 2 == 0) != (i == k):
            raise InvariantViolation(
                f"parity break at index {i} of the (p={p}, m={m}) sequence"
            )
        cur = t_step(cur)
        if i + 1 == k and cur != (1 << (j - k)) - 2:
            raise InvariantViolation(
                f"T^{k}(n) != 2^{j - k} - 2 for p={p}, m={m}"
            )
    if cur != 3 ** (j - k - 1) - 1:
        raise InvariantViolation(f"T^{j}(n) != 3^{j - k - 1} - 1 for p={p}, m={m}")

    triple = None
    if E <= classify_bit_cap:
        fz = get_factorizer(bound)
        fb = fz.factor(b)
        fc = Factorization(1 << E, ((2, E),), 1, bound, "unit")
        triple = classify_factored(fz.factor(1), fb, fc)
        divisor = Factorization.from_factors(fb.factors)
    else:
        divisor = Factorization.from_factors([(p, 2)])
    item = WieferichFamilyItem(
        primes=(p,),
        L=p - 1,
        m=m,
        E=E,
        known_divisor=divisor,
        gain_lower_bound=refine_gain_bound(E, divisor),
    )
    return FamilyGeneration(
        item=item, j=j, k=k, n=n, triple=triple, iterates_verified=True
    )


@dataclass(frozen=True)
class LangResult:
    """Triple (1, n^(2^k) - 1, n^(2^k)) with its classification."""

    n: int
    k: int
    triple: TripleRecord
    in_canonical_range: bool  # n < 2^(k+1); reported, not enforced
    predicted_gain_bound: Optional[float]  # the n = 239 family prediction


def lang_formula(n: int, k: int, bound: int = 10**6) -> LangResult:
    """Power-of-two tower triple; for n = 239 also reports the predicted
    gain lower bound ln(2 * 13^3 / 239) - ln(k + 4)."""
    if n < 3 or n % 2 == 0:
        raise ValueError("lang_formula requires odd n >= 3")
    if k < 0:
        raise ValueError("k must be >= 0")
    c = n ** (1 << k)
    record = classify_triple(1, c - 1, c, bound)
    predicted = None
    if n == 239:
        predicted = math.log(2 * 13**3 / 239.0) - math.log(k + 4)
    return LangResult(
        n=n,
        k=k,
        triple=record,
        in_canonical_range=n < (1 << (k + 1)),
        predicted_gain_bound=predicted,
    )


def qk_family(
    q: int, k: int, base_L: int, base_D: Factorization
) -> WieferichFamilyItem:
    """Scale a base exponent L by q^k for an odd prime q with (q-1) | L.

    2^(q^k L) - 1 inherits the base divisor times q^k; the exponent of q
    is promoted by one more when 2^L - 1 is verified not divisible by
    q^2 (then its q-valuation is exactly 1 and lifting adds k).
    """
    if k < 0:
        raise ValueError("k must be >= 0")
    if q < 3 or q % 2 == 0 or not is_probable_prime(q):
        raise ValueError(f"q must be an odd prime, got {q}")
    if base_D.cofactor != 1:
        raise ValueError("base divisor must be fully factored")
    if base_L % (q - 1) != 0:
        raise ValueError(f"(q-1) = {q - 1} does not divide L = {base_L}")
    E = q**k * base_L
    fs = dict(base_D.factors)
    e_base = fs.get(q, 0)
    if pow(2, base_L, q * q) != 1:
        v_claim = 1 + k
    else:
        v_claim = max(e_base, 2) + k
    fs[q] = max(v_claim, e_base)
    divisor = Factorization.from_factors(sorted(fs.items()))
    base_primes = tuple(
        p
        for p, _ in base_D.factors
        if is_probable_prime(p) and pow(2, p - 1, p * p) == 1
    )
    return WieferichFamilyItem(
        primes=base_primes,
        L=base_L,
        m=q**k,
        E=E,
        known_divisor=divisor,
        gain_lower_bound=refine_gain_bound(E, divisor),
    )


def chain_exponents(
    primes: list[int] | tuple[int, ...], assume_wieferich: bool = False
) -> list[tuple[int, float]]:
    """(L_t, gain bound) for each prefix of a (possibly hypothetical)
    Wieferich prime list; L_t >= p_t - 1, so the exponents are unbounded
    whenever the list is."""
    ps = list(primes)
    out = []
    for t in range(1, len(ps) + 1):
        out.append(lemma_gain_bound(ps[:t], assume_wieferich=assume_wieferich))
    return out


def _vp(x: int, q: int) -> int:
    e = 0
    while x % q == 0:
        x //= q
        e += 1
    return e


def _order_of_two(q: int, spf) -> int:
    o = q - 1
    for r, _ in factor_small(q - 1, spf):
        while o % r == 0 and pow(2, o // r, q) == 1:
            o //= r
    return o


def family_mu_hit_proportion(
    p: int, m_max: int, prime_limit: int = 10**6
) -> float:
    """Fraction of m <= m_max for which small-prime power certificates
    alone already prove (1, 2^(m(p-1)) - 1, 2^(m(p-1))) is a mu-hit.

    Works entirely through multiplicative orders and valuation lifting;
    no big numbers are ever formed, so m_max in the thousands is cheap.
    This is a lower bound on the true proportion of mu-hits.
    """
    if not is_wieferich(p):
        raise ValueError(f"{p} is not a Wieferich prime")
    if m_max < 1:
        raise ValueError("m_max must be >= 1")
    base = p - 1
    spf = sieve_smallest_prime_factor(prime_limit)
    contrib = [0.0] * (m_max + 1)
    for q in primes_up_to(prime_limit):
        if q == 2:
            continue  # 2^E - 1 is odd
        o = _order_of_two(q, spf)
        step = o // math.gcd(o, base)
        if step > m_max:
            continue
        vq_base = 1
        while pow(2, o, q ** (vq_base + 1)) == 1:
            vq_base += 1
        lnq = math.log(q)
        for m in range(step, m_max + 1, step):
            v = vq_base + _vp(m * base // o, q)
            if v >= 2:
                contrib[m] += (v - 1) * lnq - math.log(v)
    hits = sum(
        1
        for m in range(1, m_max + 1)
        if contrib[m] - math.log(2.0 * m * base) > 0.0
    )
    return hits / m_max
