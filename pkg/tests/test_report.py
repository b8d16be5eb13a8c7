import csv
import io
import json
import re

import pytest
from hypothesis import given
from hypothesis import strategies as st

from gammabench.analysis import percentage_error
from gammabench.approx import MethodId
from gammabench.errors import DomainError, FormatError, UsageError
from gammabench.mpcore import HPReal, PrecisionContext, ln_factorial_exact
from gammabench.report import (
    EXIT_OK,
    JSON_DIGITS,
    EXIT_USAGE,
    SUSPECTED_TYPOS,
    TableRequest,
    cli_main,
    format_factorial,
    format_number,
    render_table,
)

NUMBER = re.compile(r'^-?\d(\.\d+)?(e-?\d+)?$')
T1 = (MethodId.S, MethodId.B, MethodId.G)


@pytest.mark.parametrize('value,text', [
    (4.0, '4.0'),
    (1.7, '1.7'),
    (0.13, '1.3e-1'),
    (8.6e-6, '8.6e-6'),
    (12, '1.2e1'),
    (9.96, '1.0e1'),
    (0.0999, '1.0e-1'),
    (-0.5, '-5.0e-1'),
    (6.5e12, '6.5e12'),
    (0, '0'),
])
def test_format_number(value, text):
    assert format_number(value) == text


def test_format_number_significant_figures():
    assert format_number(4.0, sig_figs=1) == '4'
    assert format_number(4.17e-23, sig_figs=3) == '4.17e-23'
    assert format_number(0.13, sig_figs=1) == '1e-1'


def test_format_number_unicode():
    assert format_number(8.6e-6, unicode=True) == '8.6×10⁻⁶'
    assert format_number(3.6e6, unicode=True) == '3.6×10⁶'


def test_format_number_accepts_hpreal(ctx):
    assert format_number(HPReal.of('4.17e-23', ctx)) == '4.2e-23'


@pytest.mark.parametrize('value', [float('nan'), float('inf'), float('-inf')])
def test_format_number_rejects_non_finite(value):
    with pytest.raises(FormatError):
        format_number(value)


@given(st.floats(min_value=-1e300, max_value=1e300).filter(lambda v: abs(v) > 1e-300))
def test_format_number_is_total(value):
    text = format_number(value)
    assert NUMBER.match(text)
    assert float(text) == pytest.approx(value, rel=0.051)


@pytest.mark.parametrize('n,text', [
    (1, '1'),
    (2, '2'),
    (5, '1.2e2'),
    (10, '3.6e6'),
    (20, '2.4e18'),
    (50, '3.0e64'),
    (100, '9.3e157'),
    (10 ** 3, '4.0e2567'),
    (10 ** 4, '2.8e35659'),
    pytest.param(10 ** 6, '8.3e5565708', marks=pytest.mark.slow),
])
def test_format_factorial(ctx, n, text):
    assert format_factorial(n, ln_factorial_exact(n, ctx)) == text


def test_markdown_row(ctx):
    out = render_table(TableRequest.custom(T1, [2]), ctx)
    lines = out.splitlines()
    assert lines[0] == '| n | n! | S %error | B %error | G %error |'
    assert lines[2] == '| 2 | 2 | 4.0 | 1.7 | 1.3e-1 |'


def test_custom_table_single_cell(ctx):
    out = render_table(TableRequest.custom([MethodId.S], [1], format='csv'), ctx)
    assert out == 'n,n!,S\r\n1,1,7.8\r\n'


def test_custom_tables_carry_no_footnotes(ctx):
    out = render_table(TableRequest.custom([MethodId.S], [100]), ctx)
    assert '†' not in out
    assert '| 100 | 9.3e157 | 8.3e-2 |' in out


def test_json_agrees_with_csv(ctx):
    csv_out = render_table(TableRequest.custom([MethodId.R, MethodId.C], [10, 20], format='csv'), ctx)
    json_out = render_table(TableRequest.custom([MethodId.R, MethodId.C], [10, 20], format='json'), ctx)
    rows = list(csv.DictReader(io.StringIO(csv_out)))
    cells = json.loads(json_out)
    assert len(cells) == 4
    for cell in cells:
        assert set(cell) == {'n', 'method', 'pct_error_decimal_string', 'bits_used'}
        row = next(r for r in rows if int(r['n']) == cell['n'])
        assert format_number(abs(float(cell['pct_error_decimal_string']))) == row[cell['method']]


def test_rendering_is_deterministic(ctx):
    req = TableRequest.custom([MethodId.HV, MethodId.SAM], [2, 50], format='markdown')
    assert render_table(req, ctx) == render_table(req, ctx)


def test_render_table_rejects_bad_requests(ctx):
    with pytest.raises(DomainError):
        render_table(TableRequest.custom([], [2]), ctx)
    with pytest.raises(UsageError):
        render_table(TableRequest.custom([MethodId.S], [2], format='xml'), ctx)
    with pytest.raises(UsageError):
        render_table(TableRequest.custom([MethodId.S], [2], sig_figs=0), ctx)


@pytest.mark.slow
def test_preset_table_shapes(ctx):
    rows = list(csv.reader(io.StringIO(render_table(TableRequest.preset('T3', format='csv'), ctx))))
    assert len(rows) == 10
    assert all(len(r) == 6 for r in rows)
    assert rows[0] == ['n', 'n!', 'W', 'HV', 'C', 'SAM']
    assert rows[-1][1] == '8.3e5565708'


def test_misprints_differ_from_computed_values(ctx):
    for (method, n), printed in SUSPECTED_TYPOS.items():
        assert format_number(abs(percentage_error(method, n, ctx).pct_error)) != printed, (method, n)


def test_json_cells_are_certified_at_low_precision():
    req = TableRequest.custom([MethodId.S], [10], format='json')
    cell, = json.loads(render_table(req, PrecisionContext(bits=128)))
    reference = percentage_error(MethodId.S, 10, PrecisionContext(bits=1024), JSON_DIGITS)
    assert cell['bits_used'] > 128
    assert cell['pct_error_decimal_string'] == reference.pct_error.to_decimal_string(JSON_DIGITS)


@pytest.mark.slow
def test_preset_table_flags_misprints(ctx):
    out = render_table(TableRequest.preset('T1'), ctx)
    assert '| 2 | 2 | 4.0 | 1.7 | 1.3e-1 |' in out
    assert '8.3e-2†' in out
    assert f"published as {SUSPECTED_TYPOS[(MethodId.S, 100)]}" in out


def test_cli_error(capsys):
    assert cli_main(['error', '--method', 'R', '--n', '10']) == EXIT_OK
    assert capsys.readouterr().out == '8.6e-6\n'


def test_cli_error_digits_do_not_depend_on_bits(capsys):
    argv = ['error', '--method', 'S', '--n', '10', '--digits', '50']
    assert cli_main(['--bits', '128'] + argv) == EXIT_OK
    low = capsys.readouterr().out
    assert cli_main(['--bits', '1024'] + argv) == EXIT_OK
    assert low == capsys.readouterr().out
    assert len(low.strip().split('e')[0].replace('.', '')) == 50


def test_cli_custom_table(capsys):
    assert cli_main(['table', '--methods', 's', '--ns', '1', '--format', 'csv']) == EXIT_OK
    assert capsys.readouterr().out == 'n,n!,S\r\n1,1,7.8\r\n'


def test_cli_theta(capsys):
    assert cli_main(['theta', '--n', '1']) == EXIT_OK
    out = capsys.readouterr().out
    assert 'theta = 3.359' in out
    assert out.count('PASS') == 4
    assert 'FAIL' not in out


def test_cli_order(capsys):
    assert cli_main(['order', '--method', 'C', '--ns', '100,1000,10^4']) == EXIT_OK
    out = capsys.readouterr().out
    assert 'method = C' in out
    assert 'claimed = -7' in out


def test_cli_fit_a(capsys):
    assert cli_main(['fit-a', '--ns', '10,100']) == EXIT_OK
    out = capsys.readouterr().out
    assert 'A = 380279456577/722091376690' in out
    assert 'A_100 = ' in out


def test_cli_compare(capsys):
    assert cli_main(['compare', '--better', 'R', '--worse', 'G', '--n', '1e4']) == EXIT_OK
    assert capsys.readouterr().out.strip().endswith('e8')


def test_cli_quick_selftest(capsys):
    assert cli_main(['selftest', '--quick']) == EXIT_OK
    assert 'FAIL' not in capsys.readouterr().out


@pytest.mark.parametrize('argv', [
    ['error', '--method', 'Q', '--n', '10'],
    ['error', '--method', 'R', '--n', 'ten'],
    ['error', '--method', 'R', '--n', '0'],
    ['error', '--method', 'R', '--n', '10', '--digits', '0'],
    ['--bits', '64', 'error', '--method', 'R', '--n', '10'],
    ['order', '--method', 'R', '--ns', '10,100'],
    ['order', '--method', 'R', '--ns', '100,10,1000'],
    ['fit-a', '--ns', '5'],
    ['table', '--methods', 'L4', '--ns', '1,,x'],
])
def test_cli_usage_errors(capsys, argv):
    assert cli_main(argv) == EXIT_USAGE
    assert '❌' in capsys.readouterr().err


def test_cli_rejects_unknown_format():
    with pytest.raises(SystemExit) as exc:
        cli_main(['table', '--format', 'xml'])
    assert exc.value.code == EXIT_USAGE
