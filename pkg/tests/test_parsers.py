import time
from fractions import Fraction

import pytest

from gammabench.approx import MethodId
from gammabench.errors import UsageError
from gammabench.parsers import parse_method, parse_method_list, parse_n, parse_n_list, parse_rational
from gammabench.validators import (
    is_strictly_increasing,
    is_valid_bits,
    is_valid_format,
    is_valid_method_id,
    is_valid_n,
    is_valid_sig_figs,
)


@pytest.mark.parametrize('text,n', [
    ('1000', 1000),
    ('1_000', 1000),
    ('1e3', 1000),
    ('10^6', 10 ** 6),
    (' 42 ', 42),
    ('1E+4', 10 ** 4),
])
def test_parse_n(text, n):
    assert parse_n(text) == n


@pytest.mark.parametrize('text', ['', 'ten', '-5', '0', '2.5', '1e8', '10^^3', '²', '0^3'])
def test_parse_n_rejects(text):
    with pytest.raises(UsageError):
        parse_n(text)


@pytest.mark.parametrize('text', ['10^30000000', '1e30000000', '9' * 5000, '2^' + '9' * 5000])
def test_parse_n_rejects_huge_values_quickly(text):
    start = time.perf_counter()
    with pytest.raises(UsageError):
        parse_n(text)
    assert time.perf_counter() - start < 0.5


def test_parse_n_list():
    assert parse_n_list('2, 5,10 1e3') == [2, 5, 10, 1000]
    assert parse_n_list('10,100,1000', increasing=True) == [10, 100, 1000]
    with pytest.raises(UsageError):
        parse_n_list('100,10', increasing=True)
    with pytest.raises(UsageError):
        parse_n_list(' ')


@pytest.mark.parametrize('text,method', [
    ('S', MethodId.S),
    ('sam', MethodId.SAM),
    ('Hv', MethodId.HV),
    ('L(4)', MethodId.L4),
    ('l2', MethodId.L2),
    ('PATH', MethodId.PATH),
])
def test_parse_method(text, method):
    assert parse_method(text) is method


@pytest.mark.parametrize('text', ['', 'L5', 'Q', 'L(0)', 'STIRLING', 'L(4', 'L4)'])
def test_parse_method_rejects(text):
    with pytest.raises(UsageError):
        parse_method(text)


def test_parse_method_list():
    assert parse_method_list('W,HV, C SAM') == [MethodId.W, MethodId.HV, MethodId.C, MethodId.SAM]


def test_parse_rational():
    assert parse_rational('380279456577/722091376690') == Fraction(380279456577, 722091376690)
    assert parse_rational('-139 / 51840') == Fraction(-139, 51840)
    assert parse_rational('7') == 7
    for text in ('1/0', '0.5', 'a/b'):
        with pytest.raises(UsageError):
            parse_rational(text)


def test_validators():
    assert is_valid_n(1) and is_valid_n(10 ** 7)
    assert not is_valid_n(0) and not is_valid_n(True) and not is_valid_n(2.0)
    assert is_valid_bits(128) and not is_valid_bits(127)
    assert is_valid_method_id('L(3)') and not is_valid_method_id('L(5)')
    assert is_valid_method_id('l2') and not is_valid_method_id('L(4')
    assert is_valid_format('json') and not is_valid_format('tsv')
    assert is_strictly_increasing([1, 2, 3]) and not is_strictly_increasing([1, 1, 2])
    assert is_valid_sig_figs(60) and not is_valid_sig_figs(61)
