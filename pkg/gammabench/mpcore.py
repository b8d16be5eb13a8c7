"""Precision contract, exact factorial and big-integer logs."""
from __future__ import annotations

import math
from dataclasses import dataclass, replace
from enum import Enum
from fractions import Fraction
from functools import lru_cache

from mpmath import libmp
from mpmath.libmp.libmpf import to_digits_exp, to_str

from .backend import MPZ, ArithmeticBackend, error_logger, get_logger, mp_context
from .errors import DomainError, InsufficientPrecisionError

mpcore_logger = get_logger('mpcore')

MIN_BITS = 128
DOUBLING_STEP = 64
MAX_FACTORIAL_N = 10 ** 7
LOG2_10 = 3.33

# below this many factors the product tree multiplies sequentially
_LEAF_SIZE = 32


class Validation(str, Enum):
    NONE = 'none'
    PRECISION_DOUBLING = 'precision_doubling'

    @classmethod
    def parse(cls, text):
        text = (text or '').strip().lower()
        if text in ('double', 'doubling', 'precision_doubling'):
            return cls.PRECISION_DOUBLING
        if text == 'none':
            return cls.NONE
        raise DomainError(f"Unknown validation policy: {text!r}")


@dataclass(frozen=True)
class PrecisionContext:
    bits: int = 384
    validation: Validation = Validation.PRECISION_DOUBLING
    guard_bits: int = 64
    rel_tol: float = 1e-12

    def __post_init__(self):
        if not isinstance(self.bits, int) or self.bits < MIN_BITS:
            raise DomainError(f"Working precision must be an integer >= {MIN_BITS} bits, got {self.bits!r}")
        if not isinstance(self.guard_bits, int) or self.guard_bits < 0:
            raise DomainError(f"guard_bits must be a non-negative integer, got {self.guard_bits!r}")
        if not isinstance(self.validation, Validation):
            object.__setattr__(self, 'validation', Validation.parse(self.validation))

    @classmethod
    def from_env(cls, backend=None):
        settings = (backend or ArithmeticBackend()).settings
        return cls(
            bits=settings['bits'],
            validation=Validation.parse(settings['validate']),
            guard_bits=settings['guard_bits'],
            rel_tol=float(settings['rel_tol']),
        )

    @property
    def mp(self):
        return mp_context(self.bits)

    @property
    def work(self):
        return mp_context(self.bits + self.guard_bits)

    def with_bits(self, bits):
        return replace(self, bits=bits)

    def required_bits(self, magnitude_digits, error_digits):
        needed = math.ceil(LOG2_10 * (max(magnitude_digits, 0) + max(error_digits, 0))) + self.guard_bits
        return max(self.bits, needed)

    def adapted(self, magnitude_digits, error_digits):
        bits = self.required_bits(magnitude_digits, error_digits)
        if bits != self.bits:
            mpcore_logger.info(f"Raising working precision {self.bits} -> {bits} bits "
                               f"(magnitude {magnitude_digits} digits, {error_digits} error digits)")
        return self.with_bits(bits)

    def round(self, value):
        return HPReal(self.mp.mpf(value), self.bits)


def to_mpf(mp, value):
    if isinstance(value, HPReal):
        return mp.mpf(value.value)
    if isinstance(value, Fraction):
        return mp.mpf(value.numerator) / value.denominator
    return mp.mpf(value)


def _restore_hpreal(pickled, bits):
    return HPReal(mp_context(bits).make_mpf(libmp.from_pickable(pickled)), bits)


@dataclass(frozen=True)
class HPReal:
    value: object
    precision_bits: int

    @classmethod
    def of(cls, value, ctx):
        return cls(to_mpf(ctx.mp, value), ctx.bits)

    def __reduce__(self):
        return _restore_hpreal, (libmp.to_pickable(self.value._mpf_), self.precision_bits)

    @property
    def _mp(self):
        return mp_context(self.precision_bits)

    def _binary(self, other, op):
        if isinstance(other, HPReal):
            bits = min(self.precision_bits, other.precision_bits)
            other = other.value
        else:
            bits = self.precision_bits
        mp = mp_context(bits)
        return HPReal(op(mp.mpf(self.value), to_mpf(mp, other)), bits)

    def __add__(self, other):
        return self._binary(other, lambda a, b: a + b)

    def __sub__(self, other):
        return self._binary(other, lambda a, b: a - b)

    def __mul__(self, other):
        return self._binary(other, lambda a, b: a * b)

    def __truediv__(self, other):
        return self._binary(other, lambda a, b: a / b)

    def __neg__(self):
        return HPReal(-self.value, self.precision_bits)

    def __abs__(self):
        return HPReal(abs(self.value), self.precision_bits)

    def __lt__(self, other):
        return self.value < to_mpf(self._mp, other)

    def __gt__(self, other):
        return self.value > to_mpf(self._mp, other)

    def __float__(self):
        return float(self.value)

    def exp(self):
        return HPReal(self._mp.exp(self.value), self.precision_bits)

    def ln(self):
        if self.value <= 0:
            raise DomainError("ln of a non-positive value")
        return HPReal(self._mp.log(self.value), self.precision_bits)

    def sqrt(self):
        if self.value < 0:
            raise DomainError("sqrt of a negative value")
        return HPReal(self._mp.sqrt(self.value), self.precision_bits)

    def sinh(self):
        return HPReal(self._mp.sinh(self.value), self.precision_bits)

    def pow(self, exponent):
        if self.value < 0:
            raise DomainError("power of a negative value")
        return self._binary(exponent, lambda a, b: a ** b)

    def is_zero(self):
        return not self.value

    @property
    def decimal_digits(self):
        return int(self.precision_bits * math.log10(2))

    def decimal_exponent(self):
        """floor(log10|v|); the value must be nonzero."""
        _, _, exponent = to_digits_exp(self.value._mpf_, 8)
        return exponent

    def to_decimal_string(self, digits=None):
        digits = digits or self.decimal_digits
        return to_str(self.value._mpf_, digits, min_fixed=0, max_fixed=0)

    def __str__(self):
        return self.to_decimal_string()


@dataclass(frozen=True)
class BigNat:
    value: object

    def __post_init__(self):
        if self.value < 0:
            raise DomainError("BigNat must be non-negative")

    def __mul__(self, other):
        return BigNat(self.value * (other.value if isinstance(other, BigNat) else other))

    def __int__(self):
        return int(self.value)

    def __eq__(self, other):
        return self.value == (other.value if isinstance(other, BigNat) else other)

    def __hash__(self):
        return hash(int(self.value))

    def bit_length(self):
        return self.value.bit_length()


def _product(lo, hi):
    if hi - lo <= _LEAF_SIZE:
        p = MPZ(1)
        for k in range(lo, hi):
            p *= k
        return p
    mid = (lo + hi) // 2
    return _product(lo, mid) * _product(mid, hi)


def _check_n(n):
    if isinstance(n, bool) or not isinstance(n, int):
        raise DomainError(f"n must be a positive integer, got {n!r}")
    if not 1 <= n <= MAX_FACTORIAL_N:
        error_logger.error(f"factorial argument out of range: {n}")
        raise DomainError(f"n must satisfy 1 <= n <= {MAX_FACTORIAL_N}, got {n}")


@lru_cache(maxsize=16)
def _factorial(n):
    value = _product(2, n + 1)
    mpcore_logger.info(f"Computed {n}! exactly ({value.bit_length()} bits)")
    return BigNat(value)


def factorial_exact(n):
    _check_n(n)
    return _factorial(n)


def ln_big(v, ctx):
    """ln(v) for a huge integer from its top bits: ln(m) + e*ln 2 with v ~ m*2^e."""
    value = v.value if isinstance(v, BigNat) else MPZ(v)
    if value < 1:
        error_logger.error("ln_big called with zero")
        raise DomainError("ln of zero is undefined")
    work = ctx.work
    keep = work.prec
    length = BigNat(value).bit_length()
    shift = max(length - keep, 0)
    if shift:
        # round to nearest on the dropped bits
        mantissa = ((value >> (shift - 1)) + 1) >> 1
    else:
        mantissa = value
    result = work.log(work.mpf(int(mantissa))) + shift * work.ln2
    return ctx.round(result)


@lru_cache(maxsize=256)
def _ln_factorial(n, bits, guard_bits):
    ctx = PrecisionContext(bits=bits, guard_bits=guard_bits, validation=Validation.NONE)
    return ln_big(factorial_exact(n), ctx)


def ln_factorial_sum(n, ctx):
    """Independent oracle: sum of ln k for k = 2..n at bits + guard_bits."""
    _check_n(n)
    work = ctx.work
    return ctx.round(work.fsum(work.log(k) for k in range(2, n + 1)))


def ulps_apart(a, b, bits):
    mp = mp_context(bits + DOUBLING_STEP)
    a = mp.mpf(a.value if isinstance(a, HPReal) else a)
    b = mp.mpf(b.value if isinstance(b, HPReal) else b)
    scale = max(abs(a), abs(b))
    if not scale:
        return mp.mpf(0)
    _, exponent = mp.frexp(scale)
    return abs(a - b) / mp.ldexp(1, exponent - bits)


def ln_factorial_exact(n, ctx, cross_check=False, max_ulps=4):
    _check_n(n)
    result = _ln_factorial(n, ctx.bits, ctx.guard_bits)
    if cross_check:
        oracle = ln_factorial_sum(n, ctx)
        apart = ulps_apart(result, oracle, ctx.bits)
        if apart > max_ulps:
            error_logger.error(f"ln({n}!) product tree and log sum disagree by {float(apart):.1f} ulps at {ctx.bits} bits")
            raise InsufficientPrecisionError(f"ln({n}!) oracle cross-check failed ({float(apart):.1f} ulps)")
    return result


def ln_factorial_digits(n):
    """Integer digits of ln n! (a float estimate is enough for sizing precision)."""
    return max(1, int(math.log10(max(math.lgamma(n + 1), 1.0))) + 1)


def validated(compute, ctx, key=None, rel_tol=None, what='value'):
    """Run compute(ctx), and under precision doubling again at bits + 64; both must agree to rel_tol."""
    first = compute(ctx)
    if ctx.validation is Validation.NONE:
        return first
    second = compute(ctx.with_bits(ctx.bits + DOUBLING_STEP))
    key = key or (lambda r: r)
    a, b = key(first), key(second)
    tol = ctx.rel_tol if rel_tol is None else rel_tol
    mp = mp_context(b.precision_bits)
    va, vb = mp.mpf(a.value), mp.mpf(b.value)
    if va == vb:
        return first
    if not vb or abs(va - vb) > tol * abs(vb):
        error_logger.error(f"Precision doubling failed for {what}: {a.to_decimal_string(20)} at {ctx.bits} bits "
                           f"vs {b.to_decimal_string(20)} at {ctx.bits + DOUBLING_STEP} bits")
        raise InsufficientPrecisionError(
            f"{what} not certified at {ctx.bits} bits (doubling check disagrees beyond {tol:g})")
    return first
