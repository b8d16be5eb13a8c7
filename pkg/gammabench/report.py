"""Tables, single-cell queries and the command-line surface."""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass
from enum import Enum

from mpmath.libmp.libmpf import to_digits_exp

from . import analysis
from .approx import SAM_A, MethodId
from .backend import error_logger, get_logger
from .errors import DomainError, FormatError, GammaBenchError, InsufficientPrecisionError, UsageError
from .mpcore import HPReal, PrecisionContext, Validation, factorial_exact, to_mpf
from .parsers import format_rational, parse_method, parse_method_list, parse_n, parse_n_list
from .validators import is_valid_bits, is_valid_format, is_valid_sig_figs

report_logger = get_logger('report')

EXIT_OK = 0
EXIT_UNEXPECTED = 1
EXIT_USAGE = 2
EXIT_NUMERIC = 3

PRESET_NS = (2, 5, 10, 20, 50, 100, 10 ** 3, 10 ** 4, 10 ** 6)
JSON_DIGITS = 30

# cells printed differently in the published tables, with the printed text
SUSPECTED_TYPOS = {
    (MethodId.S, 100): '8.3e-1',
    (MethodId.N, 100): '6.5e12',
    (MethodId.L4, 2): '1.4e-2',
    (MethodId.L4, 5): '3.5e-4',
    (MethodId.W, 50): '2.1e-10',
}

_SUPERSCRIPTS = str.maketrans('-0123456789', '⁻⁰¹²³⁴⁵⁶⁷⁸⁹')


class Table(str, Enum):
    T1 = 'T1'
    T2 = 'T2'
    T3 = 'T3'
    CUSTOM = 'custom'


PRESETS = {
    Table.T1: (MethodId.S, MethodId.B, MethodId.G),
    Table.T2: (MethodId.M, MethodId.R, MethodId.L4, MethodId.N),
    Table.T3: (MethodId.W, MethodId.HV, MethodId.C, MethodId.SAM),
}


@dataclass(frozen=True)
class TableRequest:
    table: Table
    methods: tuple
    ns: tuple
    format: str = 'markdown'
    sig_figs: int = 2
    unicode: bool = False

    @classmethod
    def preset(cls, which, format='markdown', sig_figs=2):
        table = Table(which)
        return cls(table, PRESETS[table], PRESET_NS, format, sig_figs)

    @classmethod
    def custom(cls, methods, ns, format='markdown', sig_figs=2):
        return cls(Table.CUSTOM, tuple(MethodId(m) for m in methods), tuple(ns), format, sig_figs)


def _digits(value, sig_figs):
    """Sign, `sig_figs` rounded decimal digits and the decimal exponent of the leading one."""
    if isinstance(value, HPReal):
        value = value.value
    mpf_value = value if hasattr(value, '_mpf_') else PrecisionContext().mp.mpf(value)
    sign, digits, exponent = to_digits_exp(mpf_value._mpf_, sig_figs + 6)
    head = int(digits[:sig_figs])
    if digits[sig_figs] in '56789':
        head += 1
        if head >= 10 ** sig_figs:
            head //= 10
            exponent += 1
    return sign, str(head), exponent


def format_number(value, sig_figs=2, unicode=False):
    """d.d for 1 <= |v| < 10, d.de<k> otherwise; zero prints as 0."""
    raw = value.value if isinstance(value, HPReal) else value
    mp = PrecisionContext().mp
    if not hasattr(raw, '_mpf_'):
        raw = mp.mpf(raw)
    if mp.isnan(raw) or mp.isinf(raw):
        error_logger.error(f"Cannot format non-finite value {raw}")
        raise FormatError(f"cannot format non-finite value {raw}")
    if not raw:
        return '0'
    sign, digits, exponent = _digits(raw, sig_figs)
    mantissa = digits[0] + ('.' + digits[1:] if len(digits) > 1 else '')
    if exponent == 0:
        return sign + mantissa
    if unicode:
        return f"{sign}{mantissa}×10{str(exponent).translate(_SUPERSCRIPTS)}"
    return f"{sign}{mantissa}e{exponent}"


def format_factorial(n, ln_n_factorial, sig_figs=2, unicode=False):
    """n! exactly while it has at most sig_figs digits, otherwise from ln n!."""
    if n < 20 and int(factorial_exact(n)) < 10 ** sig_figs:
        return str(int(factorial_exact(n)))
    mp = PrecisionContext(bits=max(ln_n_factorial.precision_bits, 128)).work
    log10 = to_mpf(mp, ln_n_factorial) / mp.ln10
    exponent = int(mp.floor(log10))
    _, digits, shift = _digits(mp.power(10, log10 - exponent), sig_figs)
    mantissa = digits[0] + ('.' + digits[1:] if len(digits) > 1 else '')
    exponent += shift
    if unicode:
        return f"{mantissa}×10{str(exponent).translate(_SUPERSCRIPTS)}"
    return f"{mantissa}e{exponent}"


def _rows(req, records):
    by_cell = {(r.n, r.method): r for r in records}
    rows = []
    for n in req.ns:
        first = by_cell[(n, req.methods[0])]
        row = [str(n), format_factorial(n, first.ln_exact, req.sig_figs, req.unicode)]
        row += [format_number(abs(by_cell[(n, m)].pct_error), req.sig_figs, req.unicode) for m in req.methods]
        rows.append(row)
    return rows


def _markdown(req, rows):
    header = ['n', 'n!'] + [f"{m} %error" for m in req.methods]
    lines = ['| ' + ' | '.join(header) + ' |', '|' + '---|' * len(header)]
    notes = []
    for n, row in zip(req.ns, rows):
        cells = list(row)
        for j, m in enumerate(req.methods):
            printed = SUSPECTED_TYPOS.get((m, n)) if req.table is not Table.CUSTOM else None
            if printed:
                cells[j + 2] += '†'
                notes.append(f"† {m} at n = {n}: published as {printed}; computed value shown.")
        lines.append('| ' + ' | '.join(cells) + ' |')
    if notes:
        lines.append('')
        lines.extend(notes)
    return '\n'.join(lines) + '\n'


def _csv(req, rows):
    buffer = io.StringIO()
    writer = csv.writer(buffer)
    writer.writerow(['n', 'n!'] + [str(m) for m in req.methods])
    writer.writerows(rows)
    return buffer.getvalue()


def _json(records, digits=JSON_DIGITS):
    cells = [{
        'n': r.n,
        'method': str(r.method),
        'pct_error_decimal_string': r.pct_error.to_decimal_string(digits),
        'bits_used': r.bits_used,
    } for r in records]
    return json.dumps(cells, indent=2) + '\n'


def render_table(req, ctx, workers=1):
    if not req.methods or not req.ns:
        raise DomainError("a table needs at least one method and one n")
    if not is_valid_format(req.format):
        raise UsageError(f"unknown format: {req.format!r}")
    _require_sig_figs(req.sig_figs)
    report_logger.info(f"Rendering {req.table.value} ({len(req.ns)} x {len(req.methods)}) as {req.format}")
    sig_figs = JSON_DIGITS if req.format == 'json' else req.sig_figs
    records = analysis.error_grid(req.methods, req.ns, ctx, workers=workers, sig_figs=sig_figs)
    if req.format == 'json':
        return _json(records)
    rows = _rows(req, records)
    if req.format == 'csv':
        return _csv(req, rows)
    return _markdown(req, rows)


def _require_sig_figs(digits):
    if not is_valid_sig_figs(digits):
        raise UsageError(f"--digits must be between 1 and 60, got {digits}")


def _pass(flag):
    return 'PASS' if flag else 'FAIL'


def _cmd_table(args, bench):
    if args.methods or args.ns:
        methods = parse_method_list(args.methods) if args.methods else list(PRESETS[Table.T1])
        ns = parse_n_list(args.ns) if args.ns else list(PRESET_NS)
        req = TableRequest.custom(methods, ns, args.format, args.digits)
    else:
        req = TableRequest.preset(f"T{args.which}", args.format, args.digits)
    if args.unicode:
        req = TableRequest(req.table, req.methods, req.ns, req.format, req.sig_figs, True)
    sys.stdout.write(bench.table(req))
    return EXIT_OK


def _cmd_error(args, bench):
    _require_sig_figs(args.digits)
    record = bench.percentage_error(parse_method(args.method), parse_n(args.n), args.digits)
    print(format_number(abs(record.pct_error), args.digits))
    return EXIT_OK


def _cmd_theta(args, bench):
    record = bench.theta(parse_n(args.n))
    mp = bench.ctx.mp
    theta = record.theta.value
    print(f"n = {record.n}")
    print(f"theta = {record.theta.to_decimal_string(25)}")
    print(f"ramanujan_lo = {format_rational(record.ram_lo)}  {_pass(theta > to_mpf(mp, record.ram_lo))}")
    print(f"ramanujan_hi = {format_rational(record.ram_hi)}  {_pass(theta < to_mpf(mp, record.ram_hi))}")
    print(f"hv_lo = {record.hv_lo.to_decimal_string(25)}  {_pass(theta > record.hv_lo.value)}")
    print(f"hv_hi = {record.hv_hi.to_decimal_string(25)}  {_pass(theta < record.hv_hi.value)}")
    if not (record.in_ram_bounds and record.in_hv_bounds):
        print(f"❌ theta_{record.n} violates a bound", file=sys.stderr)
        return EXIT_NUMERIC
    return EXIT_OK


def _cmd_order(args, bench):
    fit = bench.order(parse_method(args.method), parse_n_list(args.ns, increasing=True))
    print(f"method = {fit.method}")
    print(f"ns = {','.join(str(n) for n in fit.sample_ns)}")
    print(f"slope = {float(fit.slope):.4f}")
    print(f"intercept = {float(fit.intercept):.4f}")
    if fit.claimed_order is not None:
        print(f"claimed = -{fit.claimed_order}")
    return EXIT_OK


def _cmd_fit_a(args, bench):
    mp = bench.ctx.mp
    target = to_mpf(mp, SAM_A)
    print(f"A = {format_rational(SAM_A)} = {mp.nstr(target, 15)}")
    for n in parse_n_list(args.ns, increasing=True):
        value = bench.estimate_A(n)
        gap = to_mpf(mp, value) - target
        print(f"A_{n} = {value.to_decimal_string(15)}  gap = {mp.nstr(gap, 3)}")
    return EXIT_OK


def _cmd_compare(args, bench):
    _require_sig_figs(args.digits)
    factor = bench.compare(parse_method(args.better), parse_method(args.worse), parse_n(args.n), args.digits)
    print(format_number(factor, args.digits))
    return EXIT_OK


def _cmd_selftest(args, bench):
    results = bench.selftest(include_large=not args.quick)
    for r in results:
        print(f"{_pass(r.passed)}  {r.name}" + (f"  ({r.detail})" if r.detail else ''))
    failed = [r for r in results if not r.passed]
    if failed:
        print(f"❌ {len(failed)} check(s) failed", file=sys.stderr)
        return EXIT_NUMERIC
    return EXIT_OK


def build_parser():
    parser = argparse.ArgumentParser(prog='gammabench', description="Benchmark closed-form approximations of n!.")
    parser.add_argument('--bits', type=int, help="working precision in bits (default: GAMMABENCH_BITS or 384)")
    parser.add_argument('--validate', choices=('none', 'double'), help="precision-doubling validation")
    parser.add_argument('--workers', type=int, help="processes used for table cells")
    sub = parser.add_subparsers(dest='command', required=True)

    table = sub.add_parser('table', help="reproduce a published table or a custom grid")
    table.add_argument('--which', choices=('1', '2', '3'), default='1')
    table.add_argument('--methods', help="comma-separated method ids for a custom table")
    table.add_argument('--ns', help="comma-separated n values for a custom table")
    table.add_argument('--format', choices=('markdown', 'csv', 'json'), default='markdown')
    table.add_argument('--digits', type=int, default=2, help="significant figures")
    table.add_argument('--unicode', action='store_true', help="print powers of ten with superscripts")
    table.set_defaults(handler=_cmd_table)

    error = sub.add_parser('error', help="percentage error of one method at one n")
    error.add_argument('--method', required=True)
    error.add_argument('--n', required=True)
    error.add_argument('--digits', type=int, default=2)
    error.set_defaults(handler=_cmd_error)

    theta = sub.add_parser('theta', help="Ramanujan's theta_n with both pairs of bounds")
    theta.add_argument('--n', required=True)
    theta.set_defaults(handler=_cmd_theta)

    order = sub.add_parser('order', help="fit the convergence order of a method")
    order.add_argument('--method', required=True)
    order.add_argument('--ns', required=True)
    order.set_defaults(handler=_cmd_order)

    fit_a = sub.add_parser('fit-a', help="estimate the SAM constant from theta_n")
    fit_a.add_argument('--ns', required=True)
    fit_a.set_defaults(handler=_cmd_fit_a)

    compare = sub.add_parser('compare', help="ratio |error(worse)| / |error(better)| at n")
    compare.add_argument('--better', required=True)
    compare.add_argument('--worse', required=True)
    compare.add_argument('--n', required=True)
    compare.add_argument('--digits', type=int, default=2)
    compare.set_defaults(handler=_cmd_compare)

    selftest = sub.add_parser('selftest', help="run the invariant suite")
    selftest.add_argument('--quick', action='store_true', help="skip the n = 10^6 checks")
    selftest.set_defaults(handler=_cmd_selftest)
    return parser


def _context(args, bench):
    ctx = bench.ctx
    if args.bits is not None:
        if not is_valid_bits(args.bits):
            raise UsageError(f"--bits must be at least 128, got {args.bits}")
        ctx = ctx.with_bits(args.bits)
    if args.validate is not None:
        ctx = PrecisionContext(ctx.bits, Validation.parse(args.validate), ctx.guard_bits, ctx.rel_tol)
    if args.workers is not None:
        bench.workers = max(1, args.workers)
    return ctx


def cli_main(argv=None):
    from . import GammaBench

    args = build_parser().parse_args(argv)
    try:
        bench = GammaBench()
        bench.ctx = _context(args, bench)
        return args.handler(args, bench)
    except (UsageError, DomainError) as e:
        print(f"❌ usage error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (InsufficientPrecisionError, FormatError) as e:
        print(f"❌ numeric failure: {e}", file=sys.stderr)
        return EXIT_NUMERIC
    except GammaBenchError as e:
        print(f"❌ {e}", file=sys.stderr)
        return EXIT_NUMERIC
    except Exception as e:
        error_logger.error(f"Unexpected failure in {args.command}: {e}")
        import traceback
        error_logger.error(traceback.format_exc())
        print(f"❌ unexpected error: {e}", file=sys.stderr)
        return EXIT_UNEXPECTED
