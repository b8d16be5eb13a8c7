from .backend import ArithmeticBackend
from .errors import DomainError, FormatError, GammaBenchError, InsufficientPrecisionError, UsageError
from .mpcore import (
    BigNat,
    HPReal,
    PrecisionContext,
    Validation,
    factorial_exact,
    ln_big,
    ln_factorial_exact,
    ln_factorial_sum,
)
from .approx import MethodId, MethodSpec, correction_factor, ln_approx, method_spec
from .analysis import (
    CheckResult,
    ErrorRecord,
    OrderFit,
    ThetaRecord,
    estimate_A,
    estimate_order,
    improvement_factor,
    invariant_suite,
    percentage_error,
    theta_of_n,
)
from .report import TableRequest, cli_main, render_table


class GammaBench:
    def __init__(self, ctx=None):
        self.backend = ArithmeticBackend()
        self.ctx = ctx or PrecisionContext.from_env(self.backend)
        self.workers = self.backend.settings['workers']

    def test_backend(self, bits=None):
        return self.backend.test_backend(bits or self.ctx.bits)

    def percentage_error(self, method, n, sig_figs=2):
        return percentage_error(method, n, self.ctx, sig_figs)

    def compare(self, better, worse, n, sig_figs=2):
        return improvement_factor(better, worse, n, self.ctx, sig_figs)

    def theta(self, n):
        return theta_of_n(n, self.ctx)

    def order(self, method, sample_ns):
        return estimate_order(method, sample_ns, self.ctx)

    def estimate_A(self, n):
        return estimate_A(n, self.ctx)

    def table(self, req):
        return render_table(req, self.ctx, workers=self.workers)

    def selftest(self, include_large=True):
        results = [CheckResult('backend constants', self.test_backend())]
        return results + invariant_suite(self.ctx, include_large=include_large)


__all__ = [
    'GammaBench', 'ArithmeticBackend', 'PrecisionContext', 'Validation', 'HPReal', 'BigNat',
    'MethodId', 'MethodSpec', 'ErrorRecord', 'ThetaRecord', 'OrderFit', 'TableRequest',
    'factorial_exact', 'ln_big', 'ln_factorial_exact', 'ln_factorial_sum',
    'ln_approx', 'correction_factor', 'method_spec',
    'percentage_error', 'improvement_factor', 'theta_of_n', 'estimate_order', 'estimate_A',
    'render_table', 'cli_main',
    'GammaBenchError', 'DomainError', 'InsufficientPrecisionError', 'UsageError', 'FormatError',
]
