"""The shortcut Collatz map, parity traces, and the sets N(j) of starting
values whose first j iterates contain exactly one even term.

For each j >= 2 and each position k of the single even term there is
exactly one residue class mod 2^j, obtained from the congruence
n = -1 - (2/3)^k (mod 2^j).  Every element decomposes as

    n + 1 = 2^k * A   (A odd),      1 + 3^k * A = 2^(j-k) * B,

with B <= 3^k.  Both identities are re-verified exactly on construction;
the parity-vector verification (one even term, at index k) is optional
because it costs O(j^2) big-integer work per j.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .errors import InvariantViolation
from .numeric import mod_inv_pow2


def t_step(n: int) -> int:
    """One application of the shortcut map: (3n+1)/2 if odd, n/2 if even."""
    if n < 1:
        raise ValueError("t_step requires n >= 1")
    return (3 * n + 1) >> 1 if n & 1 else n >> 1


@dataclass(frozen=True)
class CollatzTrace:
    """Parity record of the first j iterates (n, T(n), ..., T^(j-1)(n))."""

    start: int
    parities: tuple[int, ...]
    q: int
    even_indices: tuple[int, ...]
    terms: Optional[tuple[int, ...]] = None  # opt-in, memory-heavy for big j

    @property
    def length(self) -> int:
        return len(self.parities)


def trace(n: int, j: int, keep_terms: bool = False) -> CollatzTrace:
    """Parity vector, odd count q, and even-term indices over j iterates."""
    if n < 1:
        raise ValueError("trace requires n >= 1")
    if j < 1:
        raise ValueError("trace requires j >= 1")
    cur = n
    parities = []
    evens = []
    terms = [] if keep_terms else None
    for i in range(j):
        bit = cur & 1
        parities.append(bit)
        if not bit:
            evens.append(i)
        if terms is not None:
            terms.append(cur)
        if i + 1 < j:
            cur = t_step(cur)
    return CollatzTrace(
        start=n,
        parities=tuple(parities),
        q=sum(parities),
        even_indices=tuple(evens),
        terms=tuple(terms) if terms is not None else None,
    )


@dataclass(frozen=True)
class NjElement:
    """Element n of N(j) with its even-term index k and split n+1 = 2^k*A,
    1 + 3^k*A = 2^(j-k)*B."""

    j: int
    k: int
    n: int
    A: int
    B: int


def nj_residues(j: int) -> list[tuple[int, int]]:
    """(k, n) pairs of N(j) in k order, without the A/B split.

    Evaluates (2/3)^k mod 2^j incrementally, one modular multiplication
    per k.  This is the cheap path used by large batch scans that only
    need the starting values.
    """
    if j < 2:
        raise ValueError("N(j) requires j >= 2")
    mod = 1 << j
    mask = mod - 1
    step = (2 * mod_inv_pow2(3, j)) & mask
    out = []
    r = 1  # (2/3)^k mod 2^j
    for k in range(j):
        n = (-1 - r) & mask
        if not 1 <= n <= mod - 2:
            raise InvariantViolation(f"N({j}) residue out of range: n={n}")
        out.append((k, n))
        r = (r * step) & mask
    return out


def _split(j: int, k: int, n: int, pow3_k: int) -> tuple[int, int]:
    """Exact A, B split of an N(j) element; raises if any identity fails."""
    m = n + 1
    A = m >> k
    if A << k != m or A % 2 == 0:
        raise InvariantViolation(
            f"n+1 = 2^{k}*A split failed for n={n}, j={j}: A={A}"
        )
    num = 1 + pow3_k * A
    B = num >> (j - k)
    if B << (j - k) != num:
        raise InvariantViolation(
            f"1 + 3^{k}*A not divisible by 2^{j - k} for n={n}, j={j}"
        )
    if B > pow3_k:
        raise InvariantViolation(f"B={B} exceeds 3^{k} for n={n}, j={j}")
    return A, B


def enumerate_nj(j: int, verify: bool = True) -> list[NjElement]:
    """All j elements of N(j), sorted by n, with exact A/B splits.

    The algebraic identities are always checked.  With verify=True each
    element's parity trace is recomputed and must show exactly one even
    term, at index k; disable for large-j batch work where the O(j^2)
    cost per j is prohibitive and the identities already pin the element.
    """
    elems = []
    pow3 = 1
    for k, n in nj_residues(j):
        A, B = _split(j, k, n, pow3)
        elems.append(NjElement(j=j, k=k, n=n, A=A, B=B))
        pow3 *= 3
    elems.sort(key=lambda e: e.n)
    if verify:
        for e in elems:
            tr = trace(e.n, j)
            if tr.even_indices != (e.k,):
                raise InvariantViolation(
                    f"trace of n={e.n} in N({j}) has even terms at "
                    f"{tr.even_indices}, expected ({e.k},)"
                )
    return elems


def nj_decompose(n: int, j: int, k: int) -> tuple[int, int]:
    """A and B for a claimed N(j) element with even term at index k."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if j < 2 or not 0 <= k <= j - 1:
        raise ValueError(f"need j >= 2 and 0 <= k < j, got j={j}, k={k}")
    return _split(j, k, n, 3**k)


def verify_parity_bijection(j: int) -> bool:
    """Exhaustively check that residues mod 2^j map one-to-one onto the
    2^j parity vectors of length j."""
    if not 1 <= j <= 16:
        raise ValueError("exhaustive bijection check supported for 1 <= j <= 16")
    total = 1 << j
    seen = set()
    for n in range(total):
        r = n
        bits = 0
        for i in range(j):
            if r & 1:
                bits |= 1 << i
                r = (3 * r + 1) >> 1
            else:
                r >>= 1
        seen.add(bits)
    return len(seen) == total
