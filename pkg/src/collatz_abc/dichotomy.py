"""Scan of the N(j) dichotomy: every start value n with a single even
term either satisfies the exact lower bound

    n >= 2^(j+1) / (3 j^2) - 1                            (statement 1)

or exposes a mu-hit (1, b, b+1) with b = T^k(n) + 1 = 3^k * A odd and
b + 1 = 2^(j-k) * B                                       (statement 2).

Statement 1 is decided by the exact integer comparison
3 j^2 (n + 1) >= 2^(j+1); statement 2 by the triple classifier on
bounded factorizations of A and B.  A scan returns every record plus a
violations list that must stay empty; long scans are resumable through
a hash-checked checkpoint file.
"""

from __future__ import annotations

import hashlib
import json
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass
from fractions import Fraction
from typing import Optional

from . import lbh
from .collatz import enumerate_nj
from .errors import InvariantViolation
from .factorize import Factorization, get_factorizer
from .mu import NO, YES, classify_factored

MODE_FULL = "full"
MODE_NEAR_MISS = "near_miss_restricted"


def theorem_bound(j: int) -> int:
    """Smallest integer n with n >= 2^(j+1)/(3j^2) - 1 (0 when vacuous)."""
    if j < 2:
        raise ValueError("theorem_bound requires j >= 2")
    den = 3 * j * j
    num = (1 << (j + 1)) - den
    if num <= 0:
        return 0
    return -(-num // den)  # ceil


def statement1_holds(n: int, j: int) -> bool:
    """Exact test of n >= 2^(j+1)/(3j^2) - 1."""
    return 3 * j * j * (n + 1) >= 1 << (j + 1)


@dataclass(frozen=True)
class DichotomyRecord:
    """One scanned element of N(j) and its dichotomy verdicts.

    The same triple (1, b, b+1) surfaces at every (j, k) with
    k <= v3(b) and j - k <= v2(b+1); the representative with A coprime
    to 3 and B odd (so k = v3(b), j - k = v2(b+1), maximal j) is marked
    canonical, and reports list each hit once, at its canonical spot.
    """

    j: int
    k: int
    n: int
    c_digits: int
    pow_a: tuple[tuple[int, int], ...]  # repeated primes (e >= 2) of A
    pow_b: tuple[tuple[int, int], ...]  # repeated primes (e >= 2) of B
    quality_lo: float
    quality_hi: float
    gain_lo: float
    gain_hi: float
    c_equal: float
    statement1: bool
    statement2: str
    canonical: bool

    def to_json(self) -> str:
        d = asdict(self)
        d["pow_a"] = [list(t) for t in self.pow_a]
        d["pow_b"] = [list(t) for t in self.pow_b]
        return json.dumps(d, sort_keys=True, separators=(",", ":"))

    @staticmethod
    def from_json(line: str) -> "DichotomyRecord":
        d = json.loads(line)
        d["pow_a"] = tuple(tuple(t) for t in d["pow_a"])
        d["pow_b"] = tuple(tuple(t) for t in d["pow_b"])
        return DichotomyRecord(**d)


@dataclass
class ScanResult:
    j_lo: int
    j_hi: int
    bound: int
    mode: str
    records: list[DichotomyRecord]
    violations: list[DichotomyRecord]

    def mu_hits(self) -> list[DichotomyRecord]:
        """Certified mu-hits, one record per distinct triple."""
        return [r for r in self.records if r.statement2 == YES and r.canonical]


def _merge_power(base: tuple[int, int], f: Factorization) -> Factorization:
    """Factorization of p^e * f.value; exponents add if p already divides f."""
    p0, e0 = base
    if e0 == 0:
        return f
    fs = dict(f.factors)
    fs[p0] = fs.get(p0, 0) + e0
    return Factorization(
        value=f.value * p0**e0,
        factors=tuple(sorted(fs.items())),
        cofactor=f.cofactor,
        bound=f.bound,
        cofactor_class=f.cofactor_class,
    )


def _repeated_powers(f: Factorization) -> tuple[tuple[int, int], ...]:
    return tuple((p, e) for p, e in f.factors if e >= 2)


def _scan_single_j(args: tuple[int, int, str]) -> tuple[list[DichotomyRecord], int]:
    j, bound, mode = args
    fz = get_factorizer(bound)
    records: list[DichotomyRecord] = []
    skipped = 0
    chosen = []
    for e in enumerate_nj(j, verify=False):
        if mode == MODE_NEAR_MISS and statement1_holds(e.n, j):
            holds_at_c0, _ = lbh.lbh_check(e.n, j, j - 1, 0.0)
            if holds_at_c0:  # bound held at C=0: not a near miss, skip
                skipped += 1
                continue
        chosen.append(e)
    flat: list[int] = []
    for e in chosen:
        flat.append(e.A)
        flat.append(e.B)
    factored = fz.factor_many(flat)
    for idx, e in enumerate(chosen):
        s1 = statement1_holds(e.n, j)
        f_a = factored[2 * idx]
        f_b = factored[2 * idx + 1]
        fb = _merge_power((3, e.k), f_a)
        fc = _merge_power((2, j - e.k), f_b)
        if fb.value + 1 != fc.value:
            raise InvariantViolation(
                f"triple shape broken at (j={j}, k={e.k}): 3^k*A + 1 != 2^(j-k)*B"
            )
        triple = classify_factored(fz.factor(1), fb, fc)
        records.append(
            DichotomyRecord(
                j=j,
                k=e.k,
                n=e.n,
                c_digits=len(str(triple.c)),
                pow_a=_repeated_powers(f_a),
                pow_b=_repeated_powers(f_b),
                quality_lo=triple.quality.lo,
                quality_hi=triple.quality.hi,
                gain_lo=triple.gain.lo,
                gain_hi=triple.gain.hi,
                c_equal=lbh.c_equal(e.n, j, j - 1),
                statement1=s1,
                statement2=triple.is_mu_hit,
                canonical=(e.A % 3 != 0) and (e.B % 2 == 1),
            )
        )
    return records, skipped


def _records_hash(records: list[DichotomyRecord]) -> str:
    h = hashlib.sha256()
    for r in records:
        h.update(r.to_json().encode())
        h.update(b"\n")
    return h.hexdigest()


class _Checkpoint:
    """JSONL record store plus a '<j> <sha256>' completion ledger.

    Resume re-reads the stored records for each completed j, recomputes
    their content hash, and refuses to continue on any mismatch.
    """

    def __init__(self, path: str):
        self.path = path
        self.state_path = path + ".state"

    def load(self) -> dict[int, list[DichotomyRecord]]:
        if not (os.path.exists(self.state_path) and os.path.exists(self.path)):
            return {}
        expected: dict[int, str] = {}
        with open(self.state_path, encoding="utf-8") as fh:
            for line in fh:
                if line.strip():
                    j_str, digest = line.split()
                    expected[int(j_str)] = digest
        by_j: dict[int, list[DichotomyRecord]] = {}
        with open(self.path, encoding="utf-8") as fh:
            for line in fh:
                if line.strip():
                    rec = DichotomyRecord.from_json(line)
                    by_j.setdefault(rec.j, []).append(rec)
        done: dict[int, list[DichotomyRecord]] = {}
        for j, digest in expected.items():
            recs = by_j.get(j, [])
            if _records_hash(recs) != digest:
                raise InvariantViolation(
                    f"checkpoint content hash mismatch for j={j} in {self.path}"
                )
            done[j] = recs
        return done

    def append(self, j: int, records: list[DichotomyRecord]) -> None:
        with open(self.path, "a", encoding="utf-8", newline="\n") as fh:
            for r in records:
                fh.write(r.to_json() + "\n")
        with open(self.state_path, "a", encoding="utf-8", newline="\n") as fh:
            fh.write(f"{j} {_records_hash(records)}\n")


def scan(
    j_lo: int,
    j_hi: int,
    bound: int = 10**6,
    mode: str = MODE_FULL,
    jobs: int = 1,
    checkpoint_path: Optional[str] = None,
) -> ScanResult:
    """Run the dichotomy over every N(j), j_lo <= j <= j_hi.

    In near-miss mode only elements whose entropy bound already fails at
    C = 0 (plus any element failing statement 1) are classified; statement
    1 itself is still checked exactly for every element.
    """
    if not 2 <= j_lo <= j_hi:
        raise ValueError("need 2 <= j_lo <= j_hi")
    if mode not in (MODE_FULL, MODE_NEAR_MISS):
        raise ValueError(f"unknown scan mode: {mode}")
    ckpt = _Checkpoint(checkpoint_path) if checkpoint_path else None
    done = ckpt.load() if ckpt else {}

    get_factorizer(bound)  # build once in the parent so workers inherit it
    pending = [j for j in range(j_lo, j_hi + 1) if j not in done]
    fresh: dict[int, list[DichotomyRecord]] = {}
    if jobs <= 1:
        for j in pending:
            fresh[j], _ = _scan_single_j((j, bound, mode))
    else:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            args = [(j, bound, mode) for j in pending]
            for (j, _, _), (recs, _) in zip(args, pool.map(_scan_single_j, args)):
                fresh[j] = recs
    if ckpt:
        for j in sorted(fresh):
            ckpt.append(j, fresh[j])

    records: list[DichotomyRecord] = []
    for j in range(j_lo, j_hi + 1):
        records.extend(done.get(j) or fresh.get(j, []))
    records.sort(key=lambda r: (r.j, r.k))
    violations = [
        r for r in records if not r.statement1 and r.statement2 == NO
    ]
    return ScanResult(
        j_lo=j_lo, j_hi=j_hi, bound=bound, mode=mode,
        records=records, violations=violations,
    )


def sharpness_report(record: DichotomyRecord) -> float:
    """Relative slack (n - bound)/bound of statement 1, linear domain."""
    exact = Fraction(1 << (record.j + 1), 3 * record.j * record.j) - 1
    if exact <= 0:
        raise ValueError(f"bound is vacuous at j={record.j}")
    return float((Fraction(record.n) - exact) / exact)


def _format_powers(powers: tuple[tuple[int, int], ...]) -> str:
    if not powers:
        return "-"
    return "*".join(f"{p}^{e}" for p, e in powers)


def report_rows(records: list[DichotomyRecord]) -> list[dict]:
    """Table rows (one per certified mu-hit), sorted by (j, k).

    The q and g columns are the interval lower endpoints, which equal the
    exact values for fully factored triples and otherwise coincide with
    the convention of treating unfactored cofactors as squarefree.
    """
    rows = []
    for r in sorted(records, key=lambda r: (r.j, r.k)):
        if r.statement2 != YES or not r.canonical:
            continue
        rows.append(
            {
                "j": r.j,
                "k": r.k,
                "digits": r.c_digits,
                "pow_A": _format_powers(r.pow_a),
                "pow_B": _format_powers(r.pow_b),
                "q": r.quality_lo,
                "g": r.gain_lo,
                "C": r.c_equal,
            }
        )
    return rows


def report_text(records: list[DichotomyRecord]) -> str:
    lines = [
        f"{'j':>6} {'k':>6} {'digits':>7} {'pow(A)':>24} {'pow(B)':>24} "
        f"{'q':>8} {'g':>8} {'C':>8}"
    ]
    for row in report_rows(records):
        lines.append(
            f"{row['j']:>6} {row['k']:>6} {row['digits']:>7} "
            f"{row['pow_A']:>24} {row['pow_B']:>24} "
            f"{row['q']:>8.3f} {row['g']:>8.3f} {row['C']:>8.3f}"
        )
    return "\n".join(lines) + "\n"
