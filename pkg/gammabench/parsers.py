import logging
import math
import re
from fractions import Fraction

from .approx import MethodId
from .errors import UsageError
from .mpcore import MAX_FACTORIAL_N
from .validators import is_strictly_increasing, is_valid_method_id, is_valid_n

parser_logger = logging.getLogger('parsers')

_POWER = re.compile(r'^(\d+)\s*\^\s*(\d+)$')
_SCIENTIFIC = re.compile(r'^(\d+)[eE]\+?(\d+)$')
_RATIONAL = re.compile(r'^\s*(-?\d+)(?:\s*/\s*(\d+))?\s*$')
# decimal digits of the largest admissible n
_MAX_N_DIGITS = len(str(MAX_FACTORIAL_N))


def _out_of_range(text):
    parser_logger.info(f"n out of range: '{text}'")
    return UsageError(f"n out of range [1, 10^7]: {text!r}")


def _bounded_int(digits, text):
    digits = digits.lstrip('0') or '0'
    if len(digits) > _MAX_N_DIGITS:
        raise _out_of_range(text)
    return int(digits)


def parse_n(text):
    """Read a positive integer written as 1000, 1_000, 1e3 or 10^3."""
    cleaned = str(text).strip().replace('_', '')
    power = _POWER.match(cleaned)
    scientific = _SCIENTIFIC.match(cleaned)
    if power:
        base, exponent = (_bounded_int(g, text) for g in power.groups())
        if base > 1 and exponent * math.log10(base) > _MAX_N_DIGITS:
            raise _out_of_range(text)
        n = base ** exponent
    elif scientific:
        mantissa, exponent = (_bounded_int(g, text) for g in scientific.groups())
        if mantissa and exponent > _MAX_N_DIGITS:
            raise _out_of_range(text)
        n = mantissa * 10 ** exponent
    elif cleaned.isdecimal():
        n = _bounded_int(cleaned, text)
    else:
        parser_logger.info(f"Malformed n: '{text}'")
        raise UsageError(f"not an integer n: {text!r}")
    if not is_valid_n(n):
        raise _out_of_range(text)
    return n


def parse_n_list(text, increasing=False):
    items = [item for item in re.split(r'[,\s]+', str(text).strip()) if item]
    if not items:
        raise UsageError("empty list of n")
    ns = [parse_n(item) for item in items]
    if increasing and not is_strictly_increasing(ns):
        parser_logger.info(f"n list not strictly increasing: '{text}'")
        raise UsageError(f"n values must be strictly increasing: {text!r}")
    return ns


def parse_method(text):
    if not is_valid_method_id(text):
        parser_logger.info(f"Unknown method id: '{text}'")
        raise UsageError(f"unknown method id: {text!r}")
    cleaned = re.sub(r'[()\s]', '', text).upper()
    return MethodId(cleaned)


def parse_method_list(text):
    items = [item for item in re.split(r'[,\s]+', str(text).strip()) if item]
    if not items:
        raise UsageError("empty list of methods")
    return [parse_method(item) for item in items]


def parse_rational(text):
    match = _RATIONAL.match(str(text))
    if not match:
        raise UsageError(f"not an exact rational: {text!r}")
    numerator, denominator = match.groups()
    try:
        value = (int(numerator), int(denominator or 1))
    except ValueError as e:
        raise UsageError(f"rational too long: {e}") from e
    if value[1] == 0:
        raise UsageError(f"zero denominator: {text!r}")
    return Fraction(*value)


def format_rational(value):
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def format_constants(spec):
    return ', '.join(format_rational(c) for c in spec.constants)
