"""Process-wide limits.

All integers in this package are arbitrary precision.  The digit cap is a
policy guard against runaway growth in recurrences and scans: when an
integer passes the cap the operation aborts with DigitCapExceeded instead
of silently grinding on.
"""

import math

from .errors import DigitCapExceeded

DEFAULT_DIGIT_CAP = 10**6

_digit_cap = DEFAULT_DIGIT_CAP
_bit_cap = int(DEFAULT_DIGIT_CAP * math.log2(10))


def set_digit_cap(digits: int) -> None:
    global _digit_cap, _bit_cap
    if digits < 1:
        raise ValueError("digit cap must be positive")
    _digit_cap = digits
    _bit_cap = int(digits * math.log2(10)) + 1


def get_digit_cap() -> int:
    return _digit_cap


def check_int(x: int) -> int:
    """Pass x through, raising DigitCapExceeded if it is too large."""
    if x.bit_length() > _bit_cap:
        raise DigitCapExceeded(f"integer exceeds {_digit_cap} decimal digits")
    return x
