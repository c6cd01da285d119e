"""Binary entropy, the entropy lower-bound inequality on Collatz parity
vectors, its equality constant, miss counting over N(j), and the
comparison bounds used for tabulation.

The inequality under test, for a start value n whose first j iterates
contain q odd terms, is

    n >= j^(-C) * 2^((1 - H(q/j)) * j)

with H the binary entropy.  All checks run in the log2 domain against
the certified bracket of log2(n); a sample counts as a miss only when
its margin is certainly below -BOUNDARY_TOL, so counts are reproducible
across platforms and parallel partitionings.
"""

from __future__ import annotations

import math
from bisect import bisect_left, bisect_right
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from .collatz import nj_residues
from .numeric import LogInterval, log2_nat

RHO = math.log2(3.0)
BOUNDARY_TOL = 1e-9

_MILESTONES = (1000, 3000, 10000, 30000)


def entropy(x: float) -> float:
    """Binary entropy H(x) = -x log2 x - (1-x) log2 (1-x), H(0) = H(1) = 0."""
    if not 0.0 <= x <= 1.0:
        raise ValueError(f"entropy requires 0 <= x <= 1, got {x}")
    if x == 0.0 or x == 1.0:
        return 0.0
    return -x * math.log2(x) - (1.0 - x) * math.log2(1.0 - x)


def _validate_sample(n: int, j: int, q: int) -> None:
    if n < 1 or j < 1:
        raise ValueError("need n >= 1 and j >= 1")
    if not 0 <= q <= j:
        raise ValueError(f"odd count q={q} outside [0, {j}]")
    if j == 1 and n == 1:
        raise ValueError("the pair (j, n) = (1, 1) is excluded")


def margin_interval(n: int, j: int, q: int, C: float) -> LogInterval:
    """Bracket of log2 n + C log2 j - (1 - H(q/j)) j."""
    _validate_sample(n, j, q)
    l2n = log2_nat(n)
    shift = C * math.log2(j) - (1.0 - entropy(q / j)) * j
    return LogInterval(l2n.lo + shift, l2n.hi + shift)


def lbh_check(n: int, j: int, q: int, C: float) -> tuple[bool, float]:
    """(holds, margin in log2 domain); a certain miss needs margin < -tol."""
    m = margin_interval(n, j, q, C)
    return (m.hi >= -BOUNDARY_TOL, m.mid)


def c_equal(n: int, j: int, q: int) -> float:
    """The C for which the bound is an equality at (n, j, q)."""
    if j < 2:
        raise ValueError("c_equal requires j >= 2")
    _validate_sample(n, j, q)
    l2n = log2_nat(n).mid
    return ((1.0 - entropy(q / j)) * j - l2n) / math.log2(j)


@dataclass(frozen=True)
class LbhSample:
    """One (n, j, q) sample with its log size and equality constant."""

    j: int
    q: int
    n: int
    log2_n: float
    c_equal: float


def sample(n: int, j: int, q: int) -> LbhSample:
    _validate_sample(n, j, q)
    return LbhSample(j=j, q=q, n=n, log2_n=log2_nat(n).mid,
                     c_equal=c_equal(n, j, q))


@dataclass
class MissCounts:
    """Miss counts over the q = j-1 family for a grid of C values."""

    j_max: int
    c_grid: tuple[float, ...]
    per_j: dict[int, tuple[int, ...]] = field(default_factory=dict)
    boundary_per_j: dict[int, tuple[int, ...]] = field(default_factory=dict)

    def totals(self, up_to: int | None = None) -> tuple[int, ...]:
        cap = self.j_max if up_to is None else up_to
        sums = [0] * len(self.c_grid)
        for j, counts in self.per_j.items():
            if j <= cap:
                for i, v in enumerate(counts):
                    sums[i] += v
        return tuple(sums)

    def total(self, C: float, up_to: int | None = None) -> int:
        return self.totals(up_to)[self.c_grid.index(C)]

    def cumulative_milestones(self) -> dict[int, tuple[int, ...]]:
        return {m: self.totals(m) for m in _MILESTONES if m <= self.j_max}


def _count_misses_for_j(j: int, c_grid: tuple[float, ...]) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Per-C miss and boundary counts over N(j), q = j-1.

    The C grid is ascending, so each element contributes misses to the
    prefix of C values below its own violation threshold; one bisect per
    element replaces a loop over the grid.
    """
    target = (1.0 - entropy((j - 1) / j)) * j
    l2j = math.log2(j)
    miss_hist = [0] * (len(c_grid) + 1)
    boundary = [0] * len(c_grid)
    for _, n in nj_residues(j):
        l2n = log2_nat(n)
        x_hi = l2n.hi - target
        x_lo = l2n.lo - target
        # miss at C  <=>  x_hi + C*l2j < -tol  <=>  C < (-tol - x_hi)/l2j
        thr = (-BOUNDARY_TOL - x_hi) / l2j
        idx = bisect_left(c_grid, thr)
        miss_hist[idx] += 1
        # boundary band: margin interval intersects [-tol, +tol]
        for i in range(idx, bisect_right(c_grid, (BOUNDARY_TOL - x_lo) / l2j)):
            boundary[i] += 1
    misses = []
    acc = 0
    for i in range(len(c_grid) - 1, -1, -1):
        acc += miss_hist[i + 1]
        misses.append(acc)
    misses.reverse()
    return tuple(misses), tuple(boundary)


def _grid_worker(args: tuple[int, int, tuple[float, ...]]):
    j_lo, j_hi, c_grid = args
    return [
        (j, *_count_misses_for_j(j, c_grid)) for j in range(j_lo, j_hi + 1)
    ]


def miss_count_grid(
    j_max: int, c_grid: tuple[float, ...] | list[float], jobs: int = 1
) -> MissCounts:
    """Miss counts for every 2 <= j <= j_max across an ascending C grid."""
    if j_max < 2:
        raise ValueError("j_max must be >= 2")
    grid = tuple(c_grid)
    if list(grid) != sorted(grid):
        raise ValueError("C grid must be ascending")
    result = MissCounts(j_max=j_max, c_grid=grid)
    if jobs <= 1:
        for j in range(2, j_max + 1):
            misses, boundary = _count_misses_for_j(j, grid)
            result.per_j[j] = misses
            result.boundary_per_j[j] = boundary
        return result
    block = max(16, (j_max - 1) // (8 * jobs) + 1)
    chunks = [
        (lo, min(lo + block - 1, j_max), grid)
        for lo in range(2, j_max + 1, block)
    ]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        for rows in pool.map(_grid_worker, chunks):
            for j, misses, boundary in rows:
                result.per_j[j] = misses
                result.boundary_per_j[j] = boundary
    return result


def miss_count(j_max: int, C: float, jobs: int = 1) -> MissCounts:
    """Miss counts for a single C over 2 <= j <= j_max."""
    return miss_count_grid(j_max, (C,), jobs=jobs)


@dataclass(frozen=True)
class ComparisonBounds:
    """log2-domain values of the three lower bounds at a given j:

      power_law:   2^(j/(1+rho)) - 2
      conditional: (1/6) 2^((1-rho*eps) j) - 1
      dichotomy:   2^(j+1)/(3 j^2) - 1

    plus the entropy bound j^(-C) 2^((1-H(1-1/j)) j) for reference.
    """

    j: int
    C: float
    eps: float
    log2_power_law: float
    log2_conditional: float
    log2_dichotomy: float
    log2_entropy_bound: float

    @staticmethod
    def _linear(log2_value: float, offset: float) -> float:
        try:
            return 2.0**log2_value - offset
        except OverflowError:
            return math.inf

    @property
    def power_law(self) -> float:
        return self._linear(self.log2_power_law, 2.0)

    @property
    def conditional(self) -> float:
        return self._linear(self.log2_conditional, 1.0)

    @property
    def dichotomy(self) -> float:
        return self._linear(self.log2_dichotomy, 1.0)


def comparison_bounds(j: int, C: float = 1.0, eps: float = 0.1) -> ComparisonBounds:
    if j < 2:
        raise ValueError("comparison bounds need j >= 2")
    if eps <= 0:
        raise ValueError("eps must be positive")
    l2j = math.log2(j)
    return ComparisonBounds(
        j=j,
        C=C,
        eps=eps,
        log2_power_law=j / (1.0 + RHO),
        log2_conditional=(1.0 - RHO * eps) * j - math.log2(6.0),
        log2_dichotomy=(j + 1) - math.log2(3.0) - 2.0 * l2j,
        log2_entropy_bound=(1.0 - entropy((j - 1) / j)) * j - C * l2j,
    )
