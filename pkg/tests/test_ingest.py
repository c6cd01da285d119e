import io
import math

import pytest

from collatz_abc.errors import ResourceGuardError
from collatz_abc.ingest import (
    RejectedLine,
    brute_force_mu_hits,
    fit_power_law,
    mu_rad_tables,
    parse_triples,
    scan_dataset,
)
TABLE1 = """\
# five smallest hits
1 57121 57122
2 6436341 6436343
11 9565927 9565938
1 20709375 20709376
4 71744535 71744539
"""


class TestParseTriples:
    def test_basic(self):
        got = list(parse_triples(io.StringIO("1 57121 57122\n")))
        assert got == [(1, 57121, 57122)]

    def test_comments_and_blanks_skipped(self):
        got = list(parse_triples(io.StringIO("# c\n\n1 2 3\n")))
        assert got == [(1, 2, 3)]

    def test_sum_mismatch_rejected_with_lineno(self):
        rejects = []
        got = list(
            parse_triples(io.StringIO("1 7 9\n1 8 9\n"), on_reject=rejects.append)
        )
        assert got == [(1, 8, 9)]
        assert len(rejects) == 1
        assert rejects[0].lineno == 1
        assert "1 + 7 != 9" in rejects[0].reason

    def test_gcd_rejected(self):
        rejects = []
        assert not list(
            parse_triples(io.StringIO("3 6 9\n"), on_reject=rejects.append)
        )
        assert "gcd" in rejects[0].reason

    def test_non_integer_rejected(self):
        rejects = []
        assert not list(
            parse_triples(io.StringIO("a b c\n"), on_reject=rejects.append)
        )
        assert rejects[0].lineno == 1

    def test_canonical_swap(self):
        assert list(parse_triples(io.StringIO("57121 1 57122\n"))) == [
            (1, 57121, 57122)
        ]

    def test_two_column_mode(self):
        got = list(parse_triples(io.StringIO("1 57122\n"), two_column=True))
        assert got == [(1, 57121, 57122)]

    def test_rejection_record_type(self):
        rejects: list[RejectedLine] = []
        list(parse_triples(io.StringIO("0 1 1\n"), on_reject=rejects.append))
        assert rejects[0].reason == "parts must be positive"


class TestScanDataset:
    def test_five_smallest(self):
        result = scan_dataset(
            parse_triples(io.StringIO(TABLE1)),
            thresholds=[10**5, 10**7, 10**8],
        )
        s = result.summary
        assert s.total == 5
        assert s.mu_hits_certain == 5
        assert s.mu_hits_uncertain == 0
        assert s.abc_hits == 5
        assert s.good_triples == 3  # qualities 1.63, 1.428, 1.4497 exceed 1.4
        assert s.good_and_mu == 3
        assert [(t.x, t.mu) for t in s.thresholds] == [
            (10**5, 1),
            (10**7, 3),
            (10**8, 5),
        ]
        assert [r.c for r in result.records] == sorted(r.c for r in result.records)

    def test_merge_matches_single_pass(self):
        lines = TABLE1.strip().splitlines()
        full = scan_dataset(parse_triples(iter(lines)), thresholds=[10**6])
        a = scan_dataset(parse_triples(iter(lines[:3])), thresholds=[10**6])
        b = scan_dataset(parse_triples(iter(lines[3:])), thresholds=[10**6])
        merged = a.summary.merge(b.summary)
        assert merged == full.summary

    def test_merge_threshold_mismatch(self):
        a = scan_dataset(iter([]), thresholds=[10])
        b = scan_dataset(iter([]), thresholds=[20])
        with pytest.raises(ValueError):
            a.summary.merge(b.summary)

    def test_record_callback(self):
        seen = []
        scan_dataset(iter([(1, 8, 9)]), on_record=seen.append)
        assert len(seen) == 1 and seen[0].c == 9


class TestBruteForce:
    def test_below_thousand_empty(self):
        assert brute_force_mu_hits(10**3) == []

    def test_below_half_lakh_empty(self):
        assert brute_force_mu_hits(5 * 10**4) == []

    def test_guard(self):
        with pytest.raises(ResourceGuardError):
            brute_force_mu_hits(10**6 + 1)
        with pytest.raises(ValueError):
            brute_force_mu_hits(1)

    def test_tables_match_classifier_route(self, factorizer):
        from collatz_abc.mu import m_of, radical_of

        m, rad = mu_rad_tables(3000)
        for n in range(1, 3001):
            f = factorizer.factor(n)
            assert int(m[n]) == m_of(f).m_lo, n
            assert int(rad[n]) == radical_of(f)[0], n


class TestFitPowerLaw:
    def test_exact_recovery(self):
        pts = [(x, (x / 1000.0) ** 0.1818) for x in (10**3, 10**6, 10**9, 10**12)]
        alpha, x0 = fit_power_law(pts)
        assert abs(alpha - 0.1818) < 1e-9
        assert abs(x0 - 1000.0) < 1e-6

    def test_requires_three_points(self):
        with pytest.raises(ValueError):
            fit_power_law([(10.0, 1.0), (10.0, 1.0)])

    def test_degenerate_x(self):
        with pytest.raises(ValueError):
            fit_power_law([(10.0, 1.0), (10.0, 2.0), (10.0, 3.0)])

    def test_counts_below_one_rejected(self):
        with pytest.raises(ValueError):
            fit_power_law([(10.0, 0.5), (100.0, 1.0), (1000.0, 2.0)])

    def test_flat_rejected(self):
        with pytest.raises(ValueError):
            fit_power_law([(10.0, 2.0), (100.0, 2.0), (1000.0, 2.0)])


class TestOracleAgreement:
    def test_classifier_matches_oracle_small(self):
        # both hit sets empty below 2500, and the near misses agree
        hits = brute_force_mu_hits(2500)
        assert hits == []
        m, _ = mu_rad_tables(2500)
        for c in range(2, 2501):
            for a in range(1, c // 2 + 1):
                if math.gcd(a, c) != 1:
                    continue
                oracle = c > int(m[a]) * int(m[c - a]) * int(m[c])
                assert not oracle  # consistent with empty hit list
