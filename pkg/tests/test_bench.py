import pytest

from gammabench import GammaBench, MethodId, TableRequest, percentage_error
from gammabench.mpcore import PrecisionContext


@pytest.fixture
def bench(ctx):
    return GammaBench(ctx)


def test_bench_uses_its_context(bench, ctx):
    record = bench.percentage_error('R', 10)
    assert record.pct_error.value == percentage_error(MethodId.R, 10, ctx).pct_error.value
    assert bench.percentage_error(MethodId.S, 10, sig_figs=40).bits_used >= ctx.bits


def test_bench_follows_a_replaced_context(bench):
    bench.ctx = PrecisionContext(bits=128)
    assert bench.percentage_error(MethodId.S, 10, sig_figs=50).bits_used > 128


def test_bench_compare(bench):
    assert 6e8 < float(bench.compare(MethodId.R, MethodId.G, 10 ** 4)) < 9e8


def test_bench_theta_and_A(bench):
    assert bench.theta(1).in_hv_bounds
    assert 0.5 < float(bench.estimate_A(100)) < 0.54


def test_bench_order(bench):
    assert bench.order(MethodId.R, (100, 10 ** 3, 10 ** 4)).claimed_order == 4


def test_bench_table(bench):
    assert bench.table(TableRequest.custom([MethodId.S], [1], format='csv')) == 'n,n!,S\r\n1,1,7.8\r\n'


def test_bench_quick_selftest(bench):
    results = bench.selftest(include_large=False)
    assert results[0].name == 'backend constants'
    assert all(r.passed for r in results), [r for r in results if not r.passed]
