import math
import random

import mpmath as mp
import pytest

from collatz_abc.numeric import (
    LogInterval,
    lcm_all,
    ln_nat,
    ln_range,
    log2_nat,
    mod_inv_pow2,
    v3,
)
from conftest import RNG_SEED

mp.mp.dps = 60


def assert_brackets(iv: LogInterval, v: int):
    true = mp.log(v)
    assert iv.lo <= true <= iv.hi, (v, iv)


class TestLnNat:
    def test_one_is_exact_zero(self):
        iv = ln_nat(1)
        assert iv.lo == 0.0 and iv.hi == 0.0

    def test_brackets_57122(self):
        iv = ln_nat(57122)
        assert_brackets(iv, 57122)
        # high-precision reference: 10.95294461040609...
        assert abs(iv.mid - 10.952944610406092) < 1e-12

    def test_power_of_two_exponent(self):
        iv = ln_nat(1 << 1092)
        assert_brackets(iv, 1 << 1092)
        assert abs(iv.mid - 1092 * math.log(2)) < 1e-9

    def test_zero_rejected(self):
        with pytest.raises(ValueError):
            ln_nat(0)

    @pytest.mark.parametrize(
        "v",
        [2, 3, 10, 10**6, 2**200 + 12345, 57122**8, (1 << 4099) - 1, 3**10000],
        ids=["2", "3", "10", "1e6", "2^200", "57122^8", "2^4099-1", "3^10000"],
    )
    def test_relative_width_contract(self, v):
        iv = ln_nat(v)
        assert iv.width <= 2**-40 * max(1.0, iv.hi)
        assert_brackets(iv, v)

    def test_brackets_random(self):
        rng = random.Random(RNG_SEED)
        for _ in range(200):
            v = rng.randrange(1, 1 << rng.randrange(1, 2000))
            assert_brackets(ln_nat(v), v)

    def test_multiplicativity_overlap(self):
        # ln(vw) must overlap ln(v) + ln(w) within summed widths
        rng = random.Random(RNG_SEED)
        for _ in range(300):
            v = rng.randrange(1, 1 << 256)
            w = rng.randrange(1, 1 << 256)
            assert ln_nat(v * w).overlaps(ln_nat(v) + ln_nat(w)), (v, w)

    def test_deterministic(self):
        v = 3**777 + 1
        assert ln_nat(v) == ln_nat(v)


class TestLog2Nat:
    def test_exact_powers_of_two(self):
        assert log2_nat(1) == LogInterval(0.0, 0.0)
        assert log2_nat(1 << 10) == LogInterval(10.0, 10.0)

    def test_brackets(self):
        iv = log2_nat(1000)
        assert iv.lo <= 9.965784284662087 <= iv.hi


class TestLogInterval:
    def test_ordering_enforced(self):
        with pytest.raises(ValueError):
            LogInterval(1.0, 0.0)

    def test_arithmetic(self):
        a = LogInterval(1.0, 2.0)
        b = LogInterval(0.5, 0.75)
        s = a + b
        assert s.lo <= 1.5 and s.hi >= 2.75
        d = a - b
        assert d.lo <= 0.25 and d.hi >= 1.5
        assert (-a).lo == -2.0

    def test_divide_requires_positive(self):
        with pytest.raises(ValueError):
            LogInterval(1.0, 2.0).divide_by(LogInterval(-1.0, 1.0))

    def test_ln_range(self):
        iv = ln_range(10, 1000)
        assert iv.lo <= math.log(10) and iv.hi >= math.log(1000)
        with pytest.raises(ValueError):
            ln_range(5, 4)


class TestModInvPow2:
    @pytest.mark.parametrize("odd,j,expected", [(3, 2, 3), (3, 10, 683), (1, 7, 1)])
    def test_examples(self, odd, j, expected):
        assert mod_inv_pow2(odd, j) == expected

    def test_even_rejected(self):
        with pytest.raises(ValueError):
            mod_inv_pow2(6, 5)

    def test_bad_exponent(self):
        with pytest.raises(ValueError):
            mod_inv_pow2(3, 0)

    def test_random_exact(self):
        # 10^4 random (odd, j <= 4096) pairs, verified by exact multiplication
        rng = random.Random(RNG_SEED)
        for _ in range(10_000):
            j = rng.randrange(1, 4097)
            odd = rng.randrange(1, 1 << j) | 1
            x = mod_inv_pow2(odd, j)
            assert 0 < x < (1 << j)
            assert (odd * x) % (1 << j) == 1


class TestV3:
    @pytest.mark.parametrize("v,expected", [(9, 2), (7, 0), (1, 0), (3, 1)])
    def test_examples(self, v, expected):
        assert v3(v) == expected

    def test_wieferich_exponent_value(self):
        # 3-adic valuation behind the length-1094 family row
        assert v3((1 << 1092) - 1) == 2

    def test_zero_rejected(self):
        with pytest.raises(ValueError):
            v3(0)

    def test_random_construction(self):
        rng = random.Random(RNG_SEED)
        for _ in range(200):
            e = rng.randrange(0, 51)
            m = rng.randrange(1, 10**6)
            while m % 3 == 0:
                m += 1
            assert v3(3**e * m) == e


class TestLcmAll:
    def test_wieferich_orders(self):
        assert lcm_all([1092, 3510]) == 49140

    @pytest.mark.parametrize("vals,expected", [([6], 6), ([4, 6], 12), ([1, 1], 1)])
    def test_examples(self, vals, expected):
        assert lcm_all(vals) == expected

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            lcm_all([])

    def test_nonpositive_rejected(self):
        with pytest.raises(ValueError):
            lcm_all([4, 0])
