import mpmath
import pandas as pd

from glaisher_kinkelin import BigReal, merge_reports
from glaisher_kinkelin.report_utils import format_bound, format_decimal


def test_merge_stacks_rows():
    first = pd.DataFrame({'representation': ['r1'], 'value': ['0.24']})
    second = pd.DataFrame({'representation': ['r2', 'r3'], 'value': ['0.248', '0.2487']})
    merged = merge_reports(first, second)
    assert list(merged['representation']) == ['r1', 'r2', 'r3']
    assert list(merged.index) == [0, 1, 2]


def test_merge_custom_key():
    first = pd.DataFrame({'identity_name': ['eq15_ci']})
    second = pd.DataFrame({'identity_name': ['eq24_si'], 'notes': ['x']})
    merged = merge_reports(first, second, key = 'identity_name')
    assert merged.shape == (2, 2)


def test_merge_missing_key_returns_none():
    first = pd.DataFrame({'representation': ['r1']})
    second = pd.DataFrame({'other': [1]})
    assert merge_reports(first, second) is None


def test_merge_none_input_returns_none():
    assert merge_reports(pd.DataFrame({'representation': ['r1']}), None) is None
    assert merge_reports() is None


def test_format_decimal_truncates():
    value = BigReal.from_value('0.2487544770337842625', 128)
    assert format_decimal(value, 6) == '0.248754'


def test_format_bound():
    assert format_bound(mpmath.inf) == 'inf'
    assert float(format_bound(mpmath.mpf('1.25e-9'))) == 1.25e-9
