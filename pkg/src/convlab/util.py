"""Small exact-arithmetic helpers shared by several modules."""

from __future__ import annotations

import json
import os
import tempfile
from fractions import Fraction

LOG_BITS = 64


def log2_fixed(n: int, frac_bits: int = LOG_BITS) -> int:
    """floor-ish of log2(n) * 2^frac_bits for n >= 1, computed in integers.

    The mantissa is squared bit by bit with 32 guard bits; truncation only
    ever moves the result down.
    """
    if n < 1:
        raise ValueError("log2 of a non-positive integer")
    e = n.bit_length() - 1
    guard = frac_bits + 32
    if e >= guard:
        m = n >> (e - guard)
    else:
        m = n << (guard - e)
    two = 2 << guard
    out = e
    for _ in range(frac_bits):
        m = (m * m) >> guard
        out <<= 1
        if m >= two:
            m >>= 1
            out |= 1
    return out


def log_ratio(num: int, den: int, frac_bits: int = LOG_BITS) -> Fraction:
    """log(num)/log(den) rounded down to ``frac_bits`` fractional bits (den >= 2)."""
    ln = log2_fixed(num, frac_bits)
    ld = log2_fixed(den, frac_bits)
    if ld == 0:
        raise ZeroDivisionError("log of 1 in denominator")
    scaled = (ln << frac_bits) // ld
    return Fraction(scaled, 1 << frac_bits)


def frac_str(x: Fraction) -> str:
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def parse_frac(s: str) -> Fraction:
    return Fraction(s)


def write_atomic(path: str, text: str) -> None:
    """Write via a temporary file in the same directory, then rename."""
    d = os.path.dirname(os.path.abspath(path))
    os.makedirs(d, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=d, prefix=".tmp-", suffix=os.path.basename(path))
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))
