import math

import mpmath
import pandas as pd
import pytest

from glaisher_kinkelin import (
    BigReal,
    GlaisherKinkelin,
    IdentityName,
    IdentityReport,
    IdentityVariant,
    PrecisionError,
    QuadratureConfig,
    Representation,
    Series2Mode,
)
from conftest import close

SMALL = QuadratureConfig(intervals = 1000)


class TestRepresentation:

    def test_tags(self):
        assert Representation.R3_CI_SERIES.tag == 'R3_ci_series'
        assert Representation('r6') is Representation.R6_HYPERGEOMETRIC_SERIES
        assert len(Representation) == 6

    def test_identity_names_and_aliases(self):
        assert [name.value for name in IdentityName] == ['eq15_ci', 'eq24_si', 'eq27_i3_series', 'eq29_hyp', 'zeta2_assembly']
        assert IdentityName('eq15_ci') is IdentityName.CI_INTEGRAL
        assert IdentityName('ci_integral') is IdentityName.CI_INTEGRAL
        assert IdentityName('hyp_log_integral') is IdentityName.HYP_LOG_INTEGRAL
        assert IdentityName('EQ24_SI') is IdentityName.SI_INTEGRAL
        with pytest.raises(ValueError):
            IdentityName('eq99')

    def test_report_verdict_must_follow_threshold(self):
        one = BigReal.from_value(1, 128)
        with pytest.raises(ValueError):
            IdentityReport(identity_name = 'eq15_ci', k_or_s = 1, lhs = one, rhs = one,
                           rel_error = 1e-3, threshold = 1e-8, verdict = 'match', notes = 'x')


class TestReference:

    def test_frozen_value(self, gk, literals):
        assert close(gk.ln_a_reference(256), literals['ln_a'], 1e-39)

    def test_128_bits(self, reference, literals):
        assert reference.converged
        assert close(reference.value, literals['ln_a'], 1e-36)

    def test_rejects_low_precision(self, gk):
        with pytest.raises(ValueError):
            gk.ln_a_reference(64)

    def test_stable_under_precision_doubling(self, gk):
        difference = abs(gk.ln_a_reference(256) - gk.ln_a_reference(512))
        assert difference.precision_bits == 512
        assert float(difference) <= 1e-60

    def test_closes_with_zeta_prime_2(self, gk, reference, literals):
        consts = gk.constants
        closure = (12 * reference.value - consts.euler_gamma - consts.ln_2pi) * consts.pi * consts.pi / 6
        assert close(closure, -literals['zeta_prime_2'], 1e-30)

    def test_agrees_with_r1(self, reference, r1_result):
        assert close(reference.value, r1_result.value, 1e-8)

    def test_s_series(self, gk, literals):
        result = gk.s_series(128)
        assert result.converged
        with mpmath.workdps(50):
            ln_a = literals['ln_a'].magnitude
            expected = 3 * (ln_a - mpmath.ln(2) / 36 - mpmath.ln(mpmath.pi) / 6) + mpmath.euler / 4
        assert close(result.value, expected, 1e-35)
        assert result.value.to_decimal_string(6) == '0.260440'

    def test_s_partial_sums_bracket_the_limit(self, gk):
        s = gk.s_series(128).value
        table = gk.s_partial_sums(10)
        assert list(table['r']) == list(range(2, 11))
        for row in table.itertuples(index = False):
            assert abs(row.partial_sum - s) <= abs(row.next_term)


class TestR1:

    def test_within_1e8(self, r1_result, literals):
        assert close(r1_result.value, literals['ln_a'], 1e-8)
        assert r1_result.converged

    def test_is_one_twelfth_minus_zeta_prime(self, gk):
        cfg = QuadratureConfig(intervals = 200)
        expected = BigReal.from_value('1', 128) / 12 - gk.zeta_prime_apostol(-1, cfg)
        assert gk.ln_a_r1(cfg) == expected

    def test_coarse_grid_within_reported_bound(self, gk, reference):
        result = gk.ln_a_r1_result(QuadratureConfig(intervals = 100))
        assert close(result.value, reference.value, float(result.tail_bound + reference.tail_bound))


class TestR3:

    def test_single_term(self, gk):
        result = gk.ln_a_r3(1, 1e-25)
        pi = gk.constants.pi
        expected = (1 + 2 * gk.ci(2 * gk._pi(), 1e-25) / (pi * pi)) / 4
        assert close(result.value, expected, 1e-24)
        assert result.terms_used == 1
        assert result.converged

    def test_tail_bound(self, gk):
        result = gk.ln_a_r3(10, 1e-12)
        expected = 1 / (12 * math.pi**4 * 1000) + 1e-12 / 24
        assert float(result.tail_bound) == pytest.approx(expected, rel = 1e-9)

    @pytest.mark.parametrize('K', [10, 100, 1000])
    def test_tail_bound_covers_error(self, gk, reference, K):
        result = gk.ln_a_r3(K, 1e-14)
        assert close(result.value, reference.value, float(result.tail_bound))

    def test_ten_thousand_terms(self, gk, reference):
        result = gk.ln_a_r3(10_000, 1e-14)
        assert close(result.value, reference.value, 1e-10)

    def test_rejects_zero_terms(self, gk):
        with pytest.raises(ValueError):
            gk.ln_a_r3(0)


class TestR4:

    def test_direct_series(self, gk, reference):
        result = gk.ln_a_r4_result(1e-12)
        assert result.converged
        assert close(result.value, reference.value, 2e-12)

    def test_apostol_substitution(self, gk, reference):
        zeta_prime_2 = gk.zeta_prime_apostol_result(2, SMALL)
        value = gk.ln_a_from_zeta_prime_2(zeta_prime_2.value)
        assert close(value, reference.value, float(zeta_prime_2.tail_bound) + 1e-7)


class TestR5:

    def test_n_equals_one(self, gk):
        assert gk.ln_a_r5(1) == BigReal.from_value('0.25', 128)

    def test_thousand(self, gk, reference):
        result = gk.ln_a_r5_result(1000)
        error = float(abs(result.value - reference.value))
        assert error < 1e-8
        assert error <= float(result.tail_bound)
        assert error == pytest.approx(1 / (720 * 1000**2), rel = 1e-5)

    def test_error_falls_quadratically(self, gk, reference):
        coarse = float(abs(gk.ln_a_r5(500) - reference.value))
        fine = float(abs(gk.ln_a_r5(1000) - reference.value))
        assert 3 <= coarse / fine <= 5

    def test_rejects_zero(self, gk):
        with pytest.raises(ValueError):
            gk.ln_a_r5(0)


class TestR6:

    def test_reconciled_fifty_terms(self, r6_reconciled, reference):
        assert r6_reconciled.converged
        assert r6_reconciled.terms_used == 50
        assert close(r6_reconciled.value, reference.value, 1e-6)

    def test_reconciled_zeta_prime_2(self, gk, literals):
        result = gk.zeta_prime_2_reconciled(20, 1e-12)
        assert close(result.value, literals['zeta_prime_2'], float(result.tail_bound) + 1e-10)

    def test_reconciled_zeta_prime_2_agrees_with_direct_sum(self, gk):
        reconciled = gk.zeta_prime_2_reconciled(20, 1e-12)
        direct = gk.zeta_prime_direct(2, 1e-14)
        assert close(reconciled.value, direct.value, float(reconciled.tail_bound + direct.tail_bound))

    def test_cap_names_k(self, gk):
        with pytest.raises(PrecisionError) as excinfo:
            gk.ln_a_r6(201)
        assert excinfo.value.k == 201

    def test_paper_mode_reports(self):
        gk = GlaisherKinkelin(128)
        result = gk.ln_a_r6(8, Series2Mode.PAPER, 1e-10)
        assert 'boxed series vs reconciled terms' in result.notes
        assert gk.series2_report.verdict in ('match', 'mismatch')
        assert list(gk.series2_terms_df['k']) == list(range(1, 9))
        assert {'paper_term', 'reconciled_term', 'delta'} <= set(gk.series2_terms_df.columns)
        if not result.converged:
            assert math.isinf(result.tail_bound)

    def test_adjudication_notes(self):
        gk = GlaisherKinkelin(128)
        report = gk.adjudicate_series2(6, 1e-10)
        assert report.identity_name == 'series2_boxed'
        assert 'constant part delta' in report.notes
        assert 'per-term deltas' in report.notes
        assert (report.verdict == 'match') == (report.rel_error <= report.threshold)

    def test_paper_base_equals_reconciled_base(self, gk):
        paper = gk._series2_paper_base()
        reconciled = gk._ln_a_from_zeta_prime_2(gk.ctx.mpf(-11) / 12)
        assert close(paper, reconciled, 1e-35)


class TestVerifyIdentity:

    @pytest.mark.parametrize('k', range(1, 9))
    def test_cosine_identity_matches(self, gk, k):
        report = gk.verify_identity('eq15_ci', k, 1e-9)
        assert report.identity_name == 'eq15_ci'
        assert report.verdict == 'match'
        assert report.rel_error <= 1e-9

    @pytest.mark.parametrize('k', range(1, 9))
    def test_corrected_sine_identity_matches(self, gk, k):
        report = gk.verify_identity('eq24_si', k, 1e-8, IdentityVariant.CORRECTED)
        assert report.verdict == 'match'

    def test_printed_sine_identity_is_reported(self, gk):
        report = gk.verify_identity('eq24_si', 2, 1e-8, 'printed')
        assert report.verdict in ('match', 'mismatch')
        assert report.corrected_rel_error <= 1e-8
        if report.verdict == 'mismatch':
            assert 'suspect' in report.notes

    @pytest.mark.parametrize('k', range(1, 7))
    def test_corrected_log_sine_identity_matches(self, gk, k):
        report = gk.verify_identity('eq29_hyp', k, 1e-8, 'corrected')
        assert report.verdict == 'match'

    @pytest.mark.parametrize('k', range(1, 7))
    def test_printed_log_sine_reports_corrected_error(self, gk, k):
        report = gk.verify_identity('eq29_hyp', k, 1e-8)
        assert report.k_or_s == k
        assert (report.verdict == 'match') == (report.rel_error <= report.threshold)
        assert report.corrected_rel_error <= 1e-8

    def test_descriptive_alias_is_accepted(self, gk):
        report = gk.verify_identity('ci_integral', 1, 1e-9)
        assert report.identity_name == 'eq15_ci'

    def test_printed_log_sine_identity_is_reported(self, gk):
        report = gk.verify_identity('eq29_hyp', 3, 1e-8)
        assert report.notes
        assert report.variant == 'printed'
        assert 'corrected form rel error' in report.notes

    def test_i3_series(self, gk):
        report = gk.verify_identity('eq27_i3_series', 1, 1e-8)
        assert report.verdict in ('match', 'mismatch')
        assert 'doubling' in report.notes
        assert report.k_or_s >= 1

    def test_zeta2_assembly(self, gk):
        printed = gk.verify_identity('zeta2_assembly', tol = 1e-8)
        corrected = gk.verify_identity('zeta2_assembly', tol = 1e-8, variant = 'corrected')
        assert corrected.verdict == 'match'
        assert printed.verdict == 'mismatch'
        assert '11/12' in printed.notes

    def test_reports_are_collected(self, gk):
        gk.verify_identity('eq15_ci', 1, 1e-9)
        table = gk.identity_reports_df
        assert isinstance(table, pd.DataFrame)
        assert 'eq15_ci' in set(table['identity_name'])

    def test_rejects_bad_input(self, gk):
        with pytest.raises(ValueError):
            gk.verify_identity('eq15_ci', 0)
        with pytest.raises(ValueError):
            gk.verify_identity('not_an_identity', 1)


class TestConvergence:

    def test_ci_series_error_shrinks_cubically(self, gk):
        trace = gk.convergence_trace('r3', 1, 1000, 1e-14)
        assert len(trace) == 1000
        errors = trace.set_index('k')['error_vs_reference']
        assert float(errors[1000]) * 1e4 <= float(errors[10])

    def test_hyperfactorial_error_is_monotone(self, gk):
        trace = gk.convergence_trace(Representation.R5_HYPERFACTORIAL, 100, 800)
        errors = [float(e) for e in trace['error_vs_reference']]
        assert len(errors) == 701
        assert all(b < a for a, b in zip(errors, errors[1:]))

    def test_s_series_trace_starts_at_two(self, gk):
        trace = gk.convergence_trace('r2', 1, 6)
        assert list(trace['k']) == [2, 3, 4, 5, 6]
        assert gk.convergence_df is trace

    def test_rejects_unindexed_routes(self, gk):
        with pytest.raises(ValueError):
            gk.convergence_trace('r1', 1, 5)

    def test_rejects_empty_range(self, gk):
        with pytest.raises(ValueError):
            gk.convergence_trace('r3', 5, 2)
