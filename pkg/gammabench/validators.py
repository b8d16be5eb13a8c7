import re

from .mpcore import MAX_FACTORIAL_N, MIN_BITS

FORMATS = ('markdown', 'csv', 'json')


def is_valid_n(n):
    if isinstance(n, bool) or not isinstance(n, int):
        return False
    return 1 <= n <= MAX_FACTORIAL_N


def is_valid_bits(bits):
    return isinstance(bits, int) and not isinstance(bits, bool) and bits >= MIN_BITS


def is_valid_method_id(text):
    if not text:
        return False
    return bool(re.fullmatch(r'\s*(S|B|G|M|R|N|W|HV|C|SAM|PATH|L(?:\([1-4]\)|[1-4]))\s*', text, re.IGNORECASE))


def is_valid_format(fmt):
    return fmt in FORMATS


def is_strictly_increasing(values):
    return all(a < b for a, b in zip(values, values[1:]))


def is_valid_sig_figs(digits):
    return isinstance(digits, int) and 1 <= digits <= 60
