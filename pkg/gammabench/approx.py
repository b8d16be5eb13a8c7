"""Closed-form approximations of Gamma(x+1), evaluated as logs with exact rational constants."""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

from .backend import error_logger, get_logger
from .errors import DomainError
from .mpcore import to_mpf

approx_logger = get_logger('approx')


class MethodId(str, Enum):
    S = 'S'
    B = 'B'
    G = 'G'
    M = 'M'
    R = 'R'
    L1 = 'L1'
    L2 = 'L2'
    L3 = 'L3'
    L4 = 'L4'
    N = 'N'
    W = 'W'
    HV = 'HV'
    C = 'C'
    SAM = 'SAM'
    PATH = 'PATH'

    @classmethod
    def laplace(cls, k):
        if not 1 <= k <= len(LAPLACE_COEFFICIENTS):
            raise DomainError(f"Laplace series is defined for 1 <= k <= {len(LAPLACE_COEFFICIENTS)}, got {k}")
        return cls(f'L{k}')

    @property
    def laplace_order(self):
        return int(self.value[1:]) if self.value.startswith('L') else None

    def __str__(self):
        return self.value


LAPLACE_COEFFICIENTS = (
    Fraction(1, 12),
    Fraction(1, 288),
    Fraction(-139, 51840),
    Fraction(-571, 2488320),
)

RAMANUJAN_CONSTANT = Fraction(1, 30)
HV_COEFFICIENTS = (Fraction(-11, 8), Fraction(79, 112))
HV_TAIL = Fraction(20, 33)
SAM_A = Fraction(380279456577, 722091376690)
NEMES_SHIFT = Fraction(1, 10)
CHEN_COEFFICIENTS = (Fraction(24, 7), Fraction(1, 2), Fraction(53, 210))
PATH_NUMERATOR = Fraction(10 ** 100)


@dataclass(frozen=True)
class MethodSpec:
    id: MethodId
    name: str
    constants: tuple
    description: str


_SPECS = {
    MethodId.S: MethodSpec(MethodId.S, 'Stirling', (), 'sqrt(2 pi x) (x/e)^x'),
    MethodId.B: MethodSpec(MethodId.B, 'Burnside', (Fraction(1, 2),), 'sqrt(2 pi) ((x + 1/2)/e)^(x + 1/2)'),
    MethodId.G: MethodSpec(MethodId.G, 'Gosper', (Fraction(1, 3),), 'sqrt(pi) (x/e)^x sqrt(2x + 1/3)'),
    MethodId.M: MethodSpec(MethodId.M, 'Mortici', (Fraction(1, 12),), 'sqrt(2 pi x) (x/e + 1/(12 e x))^x'),
    MethodId.R: MethodSpec(MethodId.R, 'Ramanujan', (RAMANUJAN_CONSTANT,),
                           'sqrt(pi) (x/e)^x (8x^3 + 4x^2 + x + 1/30)^(1/6)'),
    MethodId.N: MethodSpec(MethodId.N, 'Nemes', (NEMES_SHIFT,),
                           'sqrt(2 pi x) (x/e)^x (1 + 1/(12x^2 - 1/10))^x'),
    MethodId.W: MethodSpec(MethodId.W, 'Windschitl', (), 'sqrt(2 pi x) (x/e)^x (x sinh(1/x))^(x/2)'),
    MethodId.HV: MethodSpec(MethodId.HV, 'Hirschhorn-Villarino', (Fraction(11, 8), Fraction(79, 112)),
                            'sqrt(pi) (x/e)^x (8x^3 + 4x^2 + x + (1 - 11/(8x) + 79/(112x^2))/30)^(1/6)'),
    MethodId.C: MethodSpec(MethodId.C, 'Chen', CHEN_COEFFICIENTS,
                           'sqrt(2 pi x) (x/e)^x (1 + 1/(12x^3 + 24/7 x - 1/2))^(x^2 + 53/210)'),
    MethodId.SAM: MethodSpec(MethodId.SAM, 'SAM', (Fraction(11, 8), Fraction(79, 112), SAM_A),
                             'sqrt(pi) (x/e)^x (8x^3 + 4x^2 + x + (1 - 11/(8x) + 79/(112x^2) + A/x^3)/30)^(1/6)'),
    MethodId.PATH: MethodSpec(MethodId.PATH, 'Chen x (1 + 10^100/x^8)', CHEN_COEFFICIENTS + (PATH_NUMERATOR,),
                              'Chen formula times (1 + 10^100/x^8)'),
}
for _k in range(1, len(LAPLACE_COEFFICIENTS) + 1):
    _SPECS[MethodId.laplace(_k)] = MethodSpec(
        MethodId.laplace(_k), f'Laplace series to x^-{_k}', LAPLACE_COEFFICIENTS[:_k],
        f'e^-x x^(x + 1/2) sqrt(2 pi) (1 + sum of the first {_k} series terms)')

TABLE_ORDER = (MethodId.S, MethodId.B, MethodId.G, MethodId.M, MethodId.R, MethodId.L1, MethodId.L2,
               MethodId.L3, MethodId.L4, MethodId.N, MethodId.W, MethodId.HV, MethodId.C, MethodId.SAM,
               MethodId.PATH)


def method_spec(method):
    return _SPECS[MethodId(method)]


def all_methods():
    return [_SPECS[m] for m in TABLE_ORDER]


def _q(mp, fraction):
    return mp.mpf(fraction.numerator) / fraction.denominator


def _x(mp, x):
    value = to_mpf(mp, x)
    if value <= 0:
        error_logger.error(f"Approximation requested at non-positive x = {value}")
        raise DomainError(f"x must be positive, got {value}")
    return value


def _log_positive(mp, value, what):
    if value <= 0:
        error_logger.error(f"{what} is not positive ({value})")
        raise DomainError(f"{what} is not positive at this x")
    return mp.log(value)


def _reciprocal(value, what):
    if not value:
        error_logger.error(f"{what} vanishes")
        raise DomainError(f"{what} vanishes at this x")
    return 1 / value


def _log1p_positive(mp, u, what):
    """ln(1 + u) without forming 1 + u; u must exceed -1."""
    if u <= -1:
        error_logger.error(f"{what} is not positive (1 + {u})")
        raise DomainError(f"{what} is not positive at this x")
    return mp.log1p(u)


def _stirling_core(mp, x):
    # x ln x - x
    return x * (mp.log(x) - 1)


def _ln_stirling(mp, x):
    return (mp.log(2 * mp.pi) + mp.log(x)) / 2 + _stirling_core(mp, x)


def _ln_burnside(mp, x):
    h = x + mp.mpf(1) / 2
    return mp.log(2 * mp.pi) / 2 + h * (mp.log(h) - 1)


def _ln_gosper(mp, x):
    return mp.log(mp.pi) / 2 + _stirling_core(mp, x) + mp.log(2 * x + mp.mpf(1) / 3) / 2


def _ln_mortici(mp, x):
    return (mp.log(2 * mp.pi) + mp.log(x)) / 2 + x * (mp.log(x + 1 / (12 * x)) - 1)


def _hv_theta(mp, x):
    a, b = HV_COEFFICIENTS
    return 1 + _q(mp, a) / x + _q(mp, b) / x ** 2


def ramanujan_cubic(mp, x, theta):
    return 8 * x ** 3 + 4 * x ** 2 + x + theta * _q(mp, RAMANUJAN_CONSTANT)


def _ln_ramanujan_family(mp, x, theta):
    cubic = ramanujan_cubic(mp, x, theta)
    return _stirling_core(mp, x) + mp.log(mp.pi) / 2 + _log_positive(mp, cubic, 'Ramanujan cubic') / 6


def _ln_ramanujan(mp, x):
    return _ln_ramanujan_family(mp, x, mp.mpf(1))


def _ln_hv(mp, x):
    return _ln_ramanujan_family(mp, x, _hv_theta(mp, x))


def _ln_sam(mp, x):
    return _ln_ramanujan_family(mp, x, _hv_theta(mp, x) + _q(mp, SAM_A) / x ** 3)


def _laplace_sum(mp, x, k):
    return mp.fsum(_q(mp, c) / x ** (i + 1) for i, c in enumerate(LAPLACE_COEFFICIENTS[:k]))


def _ln_laplace(mp, x, k):
    return -x + (x + mp.mpf(1) / 2) * mp.log(x) + mp.log(2 * mp.pi) / 2 + mp.log1p(_laplace_sum(mp, x, k))


def _ln_nemes(mp, x):
    denominator = 12 * x ** 2 - _q(mp, NEMES_SHIFT)
    u = _reciprocal(denominator, 'Nemes denominator')
    return _ln_stirling(mp, x) + x * _log1p_positive(mp, u, 'Nemes base')


def _ln_windschitl(mp, x):
    return _ln_stirling(mp, x) + x / 2 * mp.log(x * mp.sinh(1 / x))


def _chen_denominator(mp, x):
    a, b, _ = CHEN_COEFFICIENTS
    return 12 * x ** 3 + _q(mp, a) * x - _q(mp, b)


def _ln_chen(mp, x):
    power = x ** 2 + _q(mp, CHEN_COEFFICIENTS[2])
    u = _reciprocal(_chen_denominator(mp, x), 'Chen denominator')
    return _ln_stirling(mp, x) + power * _log1p_positive(mp, u, 'Chen base')


def _ln_path(mp, x):
    return _ln_chen(mp, x) + mp.log1p(_q(mp, PATH_NUMERATOR) / x ** 8)


_EVALUATORS = {
    MethodId.S: _ln_stirling,
    MethodId.B: _ln_burnside,
    MethodId.G: _ln_gosper,
    MethodId.M: _ln_mortici,
    MethodId.R: _ln_ramanujan,
    MethodId.N: _ln_nemes,
    MethodId.W: _ln_windschitl,
    MethodId.HV: _ln_hv,
    MethodId.C: _ln_chen,
    MethodId.SAM: _ln_sam,
    MethodId.PATH: _ln_path,
}


def _ln_at(method, mp, x):
    method = MethodId(method)
    x = _x(mp, x)
    k = method.laplace_order
    if k is not None:
        if x < 1:
            error_logger.error(f"Laplace series {method} requested at x = {x} < 1")
            raise DomainError(f"{method} requires x >= 1")
        return _ln_laplace(mp, x, k)
    return _EVALUATORS[method](mp, x)


def ln_approx(method, x, ctx):
    """ln of the named approximation to Gamma(x+1), rounded to ctx.bits."""
    approx_logger.debug(f"ln_approx {method} at x = {x} ({ctx.bits} bits)")
    return ctx.round(_ln_at(method, ctx.work, x))


def ln_ramanujan_theta(x, theta, ctx):
    """ln of sqrt(pi) (x/e)^x (8x^3 + 4x^2 + x + theta/30)^(1/6) for a given theta."""
    mp = ctx.work
    return ctx.round(_ln_ramanujan_family(mp, _x(mp, x), to_mpf(mp, theta)))


def correction_factor(method, x, ctx):
    """f(x) = approximation / Stirling, from the difference of the two logs."""
    method = MethodId(method)
    if method is MethodId.S:
        raise DomainError("Stirling is the reference; its correction factor is identically 1")
    mp = ctx.work
    return ctx.round(mp.exp(_ln_at(method, mp, x) - _ln_at(MethodId.S, mp, x)))


def _f_burnside(mp, x):
    u = 1 + 1 / (2 * x)
    return u ** x * mp.sqrt(u / mp.e)


def _f_ramanujan_family(mp, x, theta):
    return mp.root(1 + 1 / (2 * x) + 1 / (8 * x ** 2) + theta / (240 * x ** 3), 6)


def _f_chen(mp, x):
    return mp.power(1 + 1 / _chen_denominator(mp, x), x ** 2 + _q(mp, CHEN_COEFFICIENTS[2]))


_CLOSED_FORMS = {
    MethodId.B: _f_burnside,
    MethodId.G: lambda mp, x: mp.sqrt(1 + 1 / (6 * x)),
    MethodId.M: lambda mp, x: mp.power(1 + 1 / (12 * x ** 2), x),
    MethodId.R: lambda mp, x: _f_ramanujan_family(mp, x, mp.mpf(1)),
    MethodId.N: lambda mp, x: mp.power(1 + 1 / (12 * x ** 2 - _q(mp, NEMES_SHIFT)), x),
    MethodId.W: lambda mp, x: mp.power(x * mp.sinh(1 / x), x / 2),
    MethodId.HV: lambda mp, x: _f_ramanujan_family(mp, x, _hv_theta(mp, x)),
    MethodId.C: _f_chen,
    MethodId.SAM: lambda mp, x: _f_ramanujan_family(mp, x, _hv_theta(mp, x) + _q(mp, SAM_A) / x ** 3),
    MethodId.PATH: lambda mp, x: _f_chen(mp, x) * (1 + _q(mp, PATH_NUMERATOR) / x ** 8),
}


def closed_form_factor(method, x, ctx):
    """f(x) written directly as the product factor multiplying Stirling's formula."""
    method = MethodId(method)
    if method is MethodId.S:
        raise DomainError("Stirling is the reference; its correction factor is identically 1")
    mp = ctx.work
    x = _x(mp, x)
    k = method.laplace_order
    if k is not None:
        if x < 1:
            raise DomainError(f"{method} requires x >= 1")
        return ctx.round(1 + _laplace_sum(mp, x, k))
    return ctx.round(_CLOSED_FORMS[method](mp, x))
