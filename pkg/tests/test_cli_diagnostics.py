import json

import pytest

from glaisher_kinkelin import BigReal, GlaisherKinkelin
from glaisher_kinkelin.cli_diagnostics import (
    CSV_COLUMNS,
    EXIT_ERROR,
    EXIT_MISMATCH,
    EXIT_NOT_CONVERGED,
    EXIT_OK,
    EXIT_USAGE,
    JSON_KEYS,
    OutputFormat,
    RunConfig,
    build_parser,
    main,
)


def run_json(capsys, *argv, environ = None):
    code = main(list(argv) + ['--format', 'json'], environ = environ or {})
    return code, json.loads(capsys.readouterr().out)


def significant_digits(text):
    mantissa = text.lstrip('-').partition('e')[0]
    return len(mantissa.replace('.', '').lstrip('0'))


class TestRunConfig:

    def test_defaults(self):
        args = build_parser().parse_args(['compute'])
        cfg = RunConfig.from_args(args, environ = {})
        assert cfg.precision_bits == 128
        assert cfg.max_terms == 10_000
        assert cfg.quadrature_intervals == 10_000
        assert cfg.output_format is OutputFormat.TEXT
        assert cfg.series2_terms == 50

    def test_environment_sets_precision(self):
        args = build_parser().parse_args(['compute'])
        assert RunConfig.from_args(args, environ = {'GK_PRECISION_BITS': '256'}).precision_bits == 256

    def test_flag_beats_environment(self):
        args = build_parser().parse_args(['compute', '--precision', '192'])
        assert RunConfig.from_args(args, environ = {'GK_PRECISION_BITS': '256'}).precision_bits == 192

    def test_all_expands_to_six_routes(self):
        args = build_parser().parse_args(['compare'])
        assert len(RunConfig.from_args(args, environ = {}).representations) == 6


class TestCompute:

    def test_reference_route(self, capsys):
        code, record = run_json(capsys, 'compute', '--rep', 'r2', '--precision', '256')
        assert code == EXIT_OK
        assert list(record) == JSON_KEYS
        assert record['representation'] == 'r2'
        assert record['value'].startswith('0.24875447703378')
        assert record['elapsed_ms'] is None
        assert record['converged'] is True

    def test_single_ci_term(self, capsys):
        code, record = run_json(capsys, 'compute', '--rep', 'r3', '--max-terms', '1')
        assert code == EXIT_OK
        assert record['terms_used'] == 1
        expected = GlaisherKinkelin(128).ln_a_r3(1, 1e-10)
        assert record['digits_claimed'] == expected.digits_claimed
        assert record['value'] == expected.value.to_decimal_string(expected.digits_claimed)

    def test_value_carries_only_claimed_digits(self, capsys):
        _, record = run_json(capsys, 'compute', '--rep', 'r3', '--max-terms', '1')
        assert record['digits_claimed'] < 10
        assert significant_digits(record['value']) == record['digits_claimed']

    def test_value_parses_back_within_claimed_digits(self, capsys):
        _, record = run_json(capsys, 'compute', '--rep', 'r5', '--n', '1000')
        parsed = BigReal.from_value(record['value'], 128)
        reference = GlaisherKinkelin(128).ln_a_reference()
        assert float(abs(parsed - reference)) <= 10.0 ** (1 - record['digits_claimed']) * float(reference)

    def test_repeated_runs_are_byte_identical(self, capsys):
        argv = ['compute', '--rep', 'r2,r3,r5', '--max-terms', '20', '--n', '50', '--format', 'json']
        assert main(argv, environ = {}) == EXIT_OK
        first = capsys.readouterr().out
        assert main(argv, environ = {}) == EXIT_OK
        assert capsys.readouterr().out == first

    def test_timings(self, capsys):
        _, record = run_json(capsys, 'compute', '--rep', 'r5', '--n', '50', '--timings')
        assert isinstance(record['elapsed_ms'], int)

    def test_paper_mode_never_crashes(self, capsys):
        code, record = run_json(capsys, 'compute', '--rep', 'r6', '--series2-mode', 'paper', '--series2-terms', '6')
        assert code in (EXIT_OK, EXIT_NOT_CONVERGED)
        assert record['mode'] == 'paper'
        assert record['notes']

    def test_text_output(self, capsys):
        code = main(['compute', '--rep', 'r5', '--n', '10'], environ = {})
        out = capsys.readouterr().out
        assert code == EXIT_OK
        assert 'representation: r5' in out

    def test_out_file(self, capsys, tmp_path):
        target = tmp_path / 'result.json'
        code = main(['compute', '--rep', 'r5', '--n', '10', '--format', 'json', '--out', str(target)], environ = {})
        assert code == EXIT_OK
        assert capsys.readouterr().out == ''
        assert json.loads(target.read_text())['representation'] == 'r5'

    def test_environment_precision(self, capsys):
        _, record = run_json(capsys, 'compute', '--rep', 'r2', environ = {'GK_PRECISION_BITS': '256'})
        assert record['digits_claimed'] == 72
        assert significant_digits(record['value']) == 72


class TestCompare:

    def test_four_routes_agree(self, capsys):
        code, rows = run_json(capsys, 'compare', '--reps', 'r1,r2,r3,r4')
        assert code == EXIT_OK
        assert [row['representation'] for row in rows] == ['r1', 'r2', 'r3', 'r4']
        assert all(row['within_bounds'] for row in rows)

    def test_hyperfactorial(self, capsys):
        code, rows = run_json(capsys, 'compare', '--reps', 'r5', '--n', '1000')
        assert code == EXIT_OK
        assert len(rows) == 1
        assert float(rows[0]['error_vs_reference']) < 1e-8

    def test_unknown_route(self, capsys):
        assert main(['compare', '--reps', 'r1,r9'], environ = {}) == EXIT_USAGE


class TestConvergence:

    def test_ci_series_csv(self, capsys):
        code = main(['convergence', '--rep', 'r3', '--k-range', '1:1000', '--tol', '1e-14', '--format', 'csv'], environ = {})
        lines = capsys.readouterr().out.splitlines()
        assert code == EXIT_OK
        assert lines[0] == ','.join(CSV_COLUMNS)
        assert len(lines) == 1001
        error_at = {int(line.split(',')[0]): float(line.split(',')[3]) for line in lines[1:]}
        assert error_at[1000] * 1e4 <= error_at[10]

    def test_hyperfactorial_is_monotone(self, capsys):
        code = main(['convergence', '--rep', 'r5', '--k-range', '100:800'], environ = {})
        lines = capsys.readouterr().out.splitlines()
        assert code == EXIT_OK
        errors = [float(line.split(',')[3]) for line in lines[1:]]
        assert len(errors) == 701
        assert all(b < a for a, b in zip(errors, errors[1:]))

    def test_rows_increase(self, capsys):
        code, rows = run_json(capsys, 'convergence', '--rep', 'r2', '--k-range', '1:5')
        assert code == EXIT_OK
        assert [row['k'] for row in rows] == [2, 3, 4, 5]

    @pytest.mark.parametrize('argv', [
        ['convergence', '--k-range', '5:2'],
        ['convergence', '--k-range', 'nonsense'],
        ['convergence', '--rep', 'r1'],
        ['convergence', '--rep', 'r4'],
        ['convergence', '--rep', 'r2', '--k-range', '1:1'],
    ])
    def test_usage_errors(self, capsys, argv):
        assert main(argv, environ = {}) == EXIT_USAGE


class TestVerify:

    def test_cosine_identity(self, capsys):
        code, rows = run_json(capsys, 'verify', '--names', 'eq15_ci', '--k-max', '5')
        assert code == EXIT_OK
        assert len(rows) == 5
        assert all(row['verdict'] == 'match' for row in rows)
        assert {row['identity_name'] for row in rows} == {'eq15_ci'}

    def test_corrected_sine_identity(self, capsys):
        code, rows = run_json(capsys, 'verify', '--names', 'eq24_si', '--k-max', '3', '--variant', 'corrected')
        assert code == EXIT_OK
        assert [row['k_or_s'] for row in rows] == [1, 2, 3]

    def test_i3_series_report(self, capsys):
        code, rows = run_json(capsys, 'verify', '--names', 'eq27_i3_series')
        assert len(rows) == 1
        assert rows[0]['notes']
        assert code == (EXIT_OK if rows[0]['verdict'] == 'match' else EXIT_MISMATCH)

    def test_printed_assembly_mismatch(self, capsys):
        code, rows = run_json(capsys, 'verify', '--names', 'zeta2_assembly')
        assert code == EXIT_MISMATCH
        assert rows[0]['verdict'] == 'mismatch'

    def test_descriptive_alias(self, capsys):
        code, rows = run_json(capsys, 'verify', '--names', 'ci_integral', '--k-max', '1')
        assert code == EXIT_OK
        assert rows[0]['identity_name'] == 'eq15_ci'

    def test_unknown_identity(self, capsys):
        assert main(['verify', '--names', 'eq99'], environ = {}) == EXIT_USAGE


class TestExitCodes:

    def test_missing_command(self, capsys):
        assert main([], environ = {}) == EXIT_USAGE

    def test_low_precision(self, capsys):
        assert main(['compute', '--precision', '32'], environ = {}) == EXIT_USAGE

    def test_bad_environment(self, capsys):
        assert main(['compute'], environ = {'GK_PRECISION_BITS': 'lots'}) == EXIT_USAGE

    @pytest.mark.parametrize('intervals', ['1', '8', '15'])
    def test_too_few_quadrature_intervals(self, capsys, intervals):
        assert main(['compute', '--rep', 'r1', '--intervals', intervals], environ = {}) == EXIT_USAGE
        assert 'intervals' in capsys.readouterr().err

    def test_r6_cap(self, capsys):
        assert main(['compute', '--rep', 'r6', '--series2-terms', '201'], environ = {}) == EXIT_USAGE

    def test_failure_maps_to_one(self, capsys, monkeypatch):
        def boom(self, n):
            raise RuntimeError("boom")

        monkeypatch.setattr(GlaisherKinkelin, 'ln_a_r5_result', boom)
        assert main(['compute', '--rep', 'r5'], environ = {}) == EXIT_ERROR
