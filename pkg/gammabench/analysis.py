"""Percentage errors, Ramanujan's theta, convergence orders and the SAM constant."""
from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import approx
from .approx import HV_COEFFICIENTS, HV_TAIL, MethodId
from .backend import error_logger, get_logger
from .errors import DomainError, GammaBenchError, InsufficientPrecisionError
from .mpcore import (
    HPReal,
    factorial_exact,
    ln_factorial_digits,
    ln_factorial_exact,
    to_mpf,
    ulps_apart,
    validated,
)
from .validators import is_strictly_increasing, is_valid_n

analysis_logger = get_logger('analysis')

# digits resolved below the leading digit of a percentage error
ERROR_DIGITS = 20
# decimal digits between the requested significant figures and the doubling tolerance
CERTIFY_MARGIN = 2
THETA_DIGITS = 25
THETA_REL_TOL = 1e-20
A_REL_TOL = 1e-10
RAM_LO = Fraction(3, 10)
RAM_HI = Fraction(1)

# orders stated for these methods alongside the tables
CLAIMED_ORDERS = {
    MethodId.B: 1,
    MethodId.R: 4,
    MethodId.N: 5,
    MethodId.W: 5,
    MethodId.C: 7,
}

ACCURACY_ORDER = (MethodId.S, MethodId.B, MethodId.G, MethodId.M, MethodId.R, MethodId.N, MethodId.W,
                  MethodId.HV, MethodId.C, MethodId.SAM)


@dataclass(frozen=True)
class ErrorRecord:
    n: int
    method: MethodId
    ln_exact: HPReal
    ln_approx: HPReal
    pct_error: HPReal
    bits_used: int


@dataclass(frozen=True)
class ThetaRecord:
    n: int
    theta: HPReal
    hv_lo: HPReal
    hv_hi: HPReal
    in_ram_bounds: bool
    in_hv_bounds: bool
    ram_lo: Fraction = RAM_LO
    ram_hi: Fraction = RAM_HI


@dataclass(frozen=True)
class OrderFit:
    method: MethodId
    sample_ns: tuple
    slope: HPReal
    intercept: HPReal

    @property
    def claimed_order(self):
        return CLAIMED_ORDERS.get(self.method)


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str = ''


def _require_n(n):
    if not is_valid_n(n):
        error_logger.error(f"Invalid n: {n!r}")
        raise DomainError(f"n must be an integer in [1, 10^7], got {n!r}")


def _error_record(method, n, ctx):
    ln_exact = ln_factorial_exact(n, ctx)
    ln_value = approx.ln_approx(method, n, ctx)
    work = ctx.work
    pct = 100 * work.expm1(to_mpf(work, ln_value) - to_mpf(work, ln_exact))
    return ErrorRecord(n, MethodId(method), ln_exact, ln_value, ctx.round(pct), ctx.bits)


def certify_tolerance(ctx, sig_figs):
    return min(ctx.rel_tol, 10.0 ** -(sig_figs + CERTIFY_MARGIN))


def _error_context(method, n, ctx, sig_figs):
    first_pass = _error_record(method, n, ctx)
    if first_pass.pct_error.is_zero():
        analysis_logger.info(f"{method} at n = {n} cancelled to zero at {ctx.bits} bits, doubling")
        return ctx.with_bits(2 * ctx.bits)
    exponent = first_pass.pct_error.decimal_exponent()
    error_digits = max(ERROR_DIGITS, sig_figs + CERTIFY_MARGIN)
    return ctx.adapted(ln_factorial_digits(n), max(-exponent, 0) + error_digits)


def percentage_error(method, n, ctx, sig_figs=2):
    """100 (approximation - n!)/n!, signed, certified to sig_figs digits by precision doubling."""
    method = MethodId(method)
    _require_n(n)
    work_ctx = _error_context(method, n, ctx, sig_figs)
    record = validated(lambda c: _error_record(method, n, c), work_ctx, key=lambda r: r.pct_error,
                       rel_tol=certify_tolerance(ctx, sig_figs), what=f"{method} error at n = {n}")
    if record.pct_error.is_zero():
        error_logger.error(f"{method} error at n = {n} is zero at {work_ctx.bits} bits")
        raise InsufficientPrecisionError(f"{method} error at n = {n} cannot be certified nonzero")
    analysis_logger.info(f"{method} n={n}: {record.pct_error.to_decimal_string(6)}% ({record.bits_used} bits)")
    return record


def _cell(args):
    return percentage_error(*args)


def error_grid(methods, ns, ctx, workers=1, sig_figs=2):
    """ErrorRecords for every (n, method) cell, ordered row by row."""
    cells = [(MethodId(m), n, ctx, sig_figs) for n in ns for m in methods]
    if workers > 1 and len(cells) > 1:
        analysis_logger.info(f"Evaluating {len(cells)} cells on {workers} processes")
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(_cell, cells))
    return [_cell(c) for c in cells]


def hv_bounds(n):
    """Exact Hirschhorn-Villarino bounds (lower, upper) on theta_n."""
    a, b = HV_COEFFICIENTS
    lower = 1 + a / n + b / n ** 2
    return lower, lower + HV_TAIL / n ** 3


def _theta_context(n, ctx, extra_digits=0):
    # exp(...) is ~8n^3 and is cancelled down to theta ~ 1
    magnitude = ln_factorial_digits(n) + 3 * len(str(n)) + 4
    return ctx.adapted(magnitude, THETA_DIGITS + extra_digits)


def _theta_value(n, ctx):
    work = ctx.work
    ln_fact = to_mpf(work, ln_factorial_exact(n, ctx))
    x = work.mpf(n)
    inner = 6 * (ln_fact - x * work.log(x) + x - work.log(work.pi) / 2)
    cubic = work.mpf(8 * n ** 3 + 4 * n ** 2 + n)
    return ctx.round(30 * (work.exp(inner) - cubic))


def theta_of_n(n, ctx):
    _require_n(n)
    theta_ctx = _theta_context(n, ctx)
    theta = validated(lambda c: _theta_value(n, c), theta_ctx, rel_tol=THETA_REL_TOL, what=f"theta_{n}")
    lo, hi = hv_bounds(n)
    mp = theta_ctx.work
    value = to_mpf(mp, theta)
    in_ram = to_mpf(mp, RAM_LO) < value < to_mpf(mp, RAM_HI)
    in_hv = to_mpf(mp, lo) < value < to_mpf(mp, hi)
    if not (in_ram and in_hv):
        error_logger.error(f"theta_{n} = {theta.to_decimal_string(25)} outside bounds (ram={in_ram}, hv={in_hv})")
    return ThetaRecord(n, theta, HPReal.of(lo, theta_ctx), HPReal.of(hi, theta_ctx), bool(in_ram), bool(in_hv))


def theta_sequence(ns, ctx):
    return [theta_of_n(n, ctx) for n in ns]


def _a_value(n, ctx):
    work = ctx.work
    lo, _ = hv_bounds(n)
    return ctx.round((to_mpf(work, _theta_value(n, ctx)) - to_mpf(work, lo)) * n ** 3)


def estimate_A(n, ctx):
    """n^3 (theta_n - 1 + 11/(8n) - 79/(112n^2)), which tends to the SAM constant."""
    _require_n(n)
    if n < 10:
        raise DomainError(f"estimate_A needs n >= 10, got {n}")
    a_ctx = _theta_context(n, ctx, extra_digits=3 * len(str(n)) + 12)
    value = validated(lambda c: _a_value(n, c), a_ctx, rel_tol=A_REL_TOL, what=f"A_{n}")
    analysis_logger.info(f"A_{n} = {value.to_decimal_string(15)} ({a_ctx.bits} bits)")
    return value


def estimate_order(method, sample_ns, ctx):
    """Least-squares slope of ln|pct error| against ln n."""
    method = MethodId(method)
    ns = list(sample_ns)
    if len(ns) < 3:
        raise DomainError(f"Order fit needs at least 3 sample points, got {len(ns)}")
    if not is_strictly_increasing(ns):
        raise DomainError(f"Sample points must be strictly increasing: {ns}")
    records = [percentage_error(method, n, ctx) for n in ns]
    mp = ctx.work
    xs = np.log(np.array(ns, dtype=float))
    ys = np.array([float(mp.log(abs(to_mpf(mp, r.pct_error)))) for r in records])
    slope, intercept = np.polyfit(xs, ys, 1)
    fit = OrderFit(method, tuple(ns), ctx.round(float(slope)), ctx.round(float(intercept)))
    analysis_logger.info(f"Order fit {method} over {ns}: slope {float(slope):.4f}")
    return fit


def improvement_factor(better, worse, n, ctx, sig_figs=2):
    """How many times smaller |error| of `better` is than that of `worse` at n."""
    good = percentage_error(better, n, ctx, sig_figs).pct_error
    bad = percentage_error(worse, n, ctx, sig_figs).pct_error
    return abs(bad) / abs(good)


def _check(name, fn):
    try:
        passed, detail = fn()
    except GammaBenchError as e:
        passed, detail = False, str(e)
    if not passed:
        error_logger.error(f"Self-test {name} failed: {detail}")
    return CheckResult(name, passed, detail)


def _factorial_recurrence():
    bad = [n for n in range(2, 201) if factorial_exact(n) != factorial_exact(n - 1) * n]
    return not bad, f"mismatch at {bad}" if bad else 'n = 2..200'


def _oracle_agreement(ctx):
    def check():
        for n in (1, 2, 10, 100, 1000):
            ln_factorial_exact(n, ctx, cross_check=True)
        return True, 'n in {1, 2, 10, 100, 1000}'
    return check


def _theta_bounds(ctx):
    def check():
        records = theta_sequence(range(1, 51), ctx)
        outside = [r.n for r in records if not (r.in_ram_bounds and r.in_hv_bounds)]
        increasing = all(a.theta < b.theta for a, b in zip(records, records[1:]))
        return not outside and increasing, f"outside: {outside}, increasing: {increasing}"
    return check


def _correction_equivalence(ctx):
    def check():
        worst = 0
        for spec in approx.all_methods():
            if spec.id is MethodId.S:
                continue
            for x in (1, 2, 5, 10, 100, 10 ** 4):
                ratio = approx.correction_factor(spec.id, x, ctx)
                closed = approx.closed_form_factor(spec.id, x, ctx)
                worst = max(worst, float(ulps_apart(ratio, closed, ctx.bits)))
        return worst <= 10, f"worst disagreement {worst:.2f} ulps"
    return check


def _accuracy_ordering(ctx):
    def check():
        errors = [abs(percentage_error(m, 10 ** 6, ctx).pct_error) for m in ACCURACY_ORDER]
        ordered = all(a > b for a, b in zip(errors, errors[1:]))
        return ordered, ' > '.join(str(m) for m in ACCURACY_ORDER)
    return check


def invariant_suite(ctx, include_large=True):
    checks = [
        ('factorial recurrence', _factorial_recurrence),
        ('product tree vs log sum', _oracle_agreement(ctx)),
        ('theta bounds n = 1..50', _theta_bounds(ctx)),
        ('correction factor closed forms', _correction_equivalence(ctx)),
    ]
    if include_large:
        checks.append(('accuracy ordering at n = 10^6', _accuracy_ordering(ctx)))
    return [_check(name, fn) for name, fn in checks]
