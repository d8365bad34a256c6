"""Real algebraic numbers with exact rational isolating intervals.

An ``AlgebraicReal`` is a squarefree integer polynomial together with a
rational interval holding exactly one of its real roots. Every numeric
question (floors, distances to integers) is answered from rational enclosures
obtained by sign tests, so no floating point enters a certified result.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Sequence

from .errors import (
    InvalidInput,
    MultipleRootsInInterval,
    NoRootInInterval,
    PrecisionExhausted,
    ReduciblePolynomial,
)
from .poly import (
    IntPolynomial,
    is_squarefree,
    rational_roots,
    sturm_count,
    sturm_sequence,
)

DEFAULT_START_BITS = 128
DEFAULT_CAP_BITS = 1 << 20


def _frac_str(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def _parse_frac(s) -> Fraction:
    return Fraction(s) if not isinstance(s, Fraction) else s


@dataclass(frozen=True)
class RationalInterval:
    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        object.__setattr__(self, "lo", Fraction(self.lo))
        object.__setattr__(self, "hi", Fraction(self.hi))
        if self.lo > self.hi:
            raise InvalidInput(f"empty interval [{self.lo}, {self.hi}]")

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    @property
    def mid(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def contains(self, x) -> bool:
        return self.lo <= x <= self.hi

    def within(self, other: "RationalInterval") -> bool:
        return other.lo <= self.lo and self.hi <= other.hi

    def scale_shift(self, m, r=0) -> "RationalInterval":
        """Enclosure of m*x + r for x in self."""
        a, b = self.lo * m + r, self.hi * m + r
        return RationalInterval(min(a, b), max(a, b))

    def to_json(self) -> dict:
        return {"lo": _frac_str(self.lo), "hi": _frac_str(self.hi)}

    @classmethod
    def from_json(cls, d: dict) -> "RationalInterval":
        return cls(_parse_frac(d["lo"]), _parse_frac(d["hi"]))


@dataclass(frozen=True)
class AlgebraicReal:
    minpoly: IntPolynomial
    isolator: RationalInterval
    trusted_irreducible: bool = False

    @property
    def degree(self) -> int:
        return self.minpoly.degree

    def is_rational(self) -> bool:
        return self.degree == 1

    def rational_value(self) -> Fraction:
        a0, a1 = self.minpoly.coeffs
        return Fraction(-a0, a1)

    @property
    def _sign_lo(self) -> int:
        return self.minpoly.sign_at(self.isolator.lo)

    def _below_dyadic(self, n: int, k: int, s_lo: int, lo_k: int, hi_k: int) -> bool:
        if n <= lo_k:
            return True
        if n >= hi_k:
            return False
        return self.minpoly.sign_at_dyadic(n, k) == s_lo

    def dyadic_cell(self, k: int) -> int:
        """The integer n with n/2^k < x < (n+1)/2^k (x irrational)."""
        if self.is_rational():
            return math.floor(self.rational_value() * (1 << k))
        iso = self.isolator
        s_lo = self._sign_lo
        # dyadic grid points at or below lo are below x; at or above hi are above x
        lo_k = math.floor(iso.lo * (1 << k))
        hi_k = math.ceil(iso.hi * (1 << k))
        if k <= 64:
            return self._bisect_cell(k, lo_k, hi_k, s_lo)
        j = max(64, (k + 1) // 2)
        nj = self.dyadic_cell(j)
        # Newton step from the midpoint of the level-j cell
        x0 = Fraction(2 * nj + 1, 1 << (j + 1))
        f, df = self.minpoly, self.minpoly.derivative()
        d = df(x0)
        guess = x0 - f(x0) / d if d else x0
        n = math.floor(guess * (1 << k))
        below = lambda m: self._below_dyadic(m, k, s_lo, lo_k, hi_k)
        # gallop from the guess until the cell is bracketed
        step = 1
        if below(n):
            hi = n + 1
            while below(hi):
                n = hi
                hi = n + step
                step *= 2
            lo = n
        else:
            lo = n - 1
            hi = n
            while not below(lo):
                hi = lo
                lo = hi - step
                step *= 2
        while hi - lo > 1:
            mid = (lo + hi) // 2
            if below(mid):
                lo = mid
            else:
                hi = mid
        return lo

    def _bisect_cell(self, k, lo_k, hi_k, s_lo):
        lo, hi = lo_k, hi_k
        while hi - lo > 1:
            mid = (lo + hi) // 2
            if self._below_dyadic(mid, k, s_lo, lo_k, hi_k):
                lo = mid
            else:
                hi = mid
        return lo

    def to_json(self) -> dict:
        return {
            "minpoly": self.minpoly.to_json(),
            "isolator": self.isolator.to_json(),
            "trusted_irreducible": self.trusted_irreducible,
        }

    @classmethod
    def from_json(cls, d: dict) -> "AlgebraicReal":
        return make_algebraic(
            [int(c) for c in d["minpoly"]], RationalInterval.from_json(d["isolator"])
        )

    def __str__(self):
        return f"root of {self.minpoly} in [{self.isolator.lo}, {self.isolator.hi}]"


def make_algebraic(coeffs: Sequence[int], isolator: RationalInterval) -> AlgebraicReal:
    """Validate ``coeffs`` (constant term first) and the isolating interval.

    Squarefreeness and the absence of rational roots are checked; this proves
    irreducibility for degree <= 3 only, and larger degrees are flagged as
    trusted.
    """
    coeffs = list(coeffs)
    if not coeffs or coeffs[-1] == 0:
        raise InvalidInput("leading coefficient must be nonzero")
    if not isinstance(isolator, RationalInterval):
        isolator = RationalInterval(*isolator)
    f = IntPolynomial(tuple(coeffs)).normalized()
    if f.degree < 1:
        raise InvalidInput("constant polynomial has no root")
    if f.degree >= 2:
        if not is_squarefree(f):
            raise ReduciblePolynomial(f"{f} is not squarefree")
        rr = rational_roots(f)
        if rr:
            raise ReduciblePolynomial(f"{f} has rational root {rr[0]}")
    seq = sturm_sequence(f)
    lo, hi = isolator.lo, isolator.hi
    at_lo = f.sign_at(lo) == 0
    n = sturm_count(seq, lo, hi) + (1 if at_lo else 0)
    if n == 0:
        raise NoRootInInterval(f"{f} has no root in [{lo}, {hi}]")
    if n > 1:
        raise MultipleRootsInInterval(f"{f} has {n} roots in [{lo}, {hi}]")
    if f.degree == 1:
        r = Fraction(-f.coeffs[0], f.coeffs[1])
        isolator = RationalInterval(r, r)
    return AlgebraicReal(f, isolator, trusted_irreducible=f.degree >= 4)


def real_root(coeffs: Sequence[int], lo, hi) -> AlgebraicReal:
    return make_algebraic(coeffs, RationalInterval(Fraction(lo), Fraction(hi)))


def refine(x: AlgebraicReal, bits: int) -> RationalInterval:
    """Interval containing x of width <= 2^-bits.

    The interval is the level-``bits`` dyadic cell around x clipped to the
    isolator, so successive calls are nested and fully deterministic.
    """
    if x.is_rational():
        r = x.rational_value()
        return RationalInterval(r, r)
    n = x.dyadic_cell(bits)
    lo = max(x.isolator.lo, Fraction(n, 1 << bits))
    hi = min(x.isolator.hi, Fraction(n + 1, 1 << bits))
    return RationalInterval(lo, hi)


def enclose_affine(x: AlgebraicReal, m: int, r: Fraction, bits: int) -> RationalInterval:
    """Enclosure of m*x + r with width <= 2^-bits (m an integer)."""
    extra = abs(m).bit_length()
    return refine(x, bits + extra).scale_shift(m, r)


def floor_affine(
    x: AlgebraicReal, m: int = 1, r: Fraction = Fraction(0), cap_bits: int = DEFAULT_CAP_BITS
) -> int:
    """floor(m*x + r), refining until the enclosure excludes every integer."""
    if x.is_rational():
        return math.floor(x.rational_value() * m + r)
    bits = 8
    while bits <= cap_bits:
        e = enclose_affine(x, m, Fraction(r), bits)
        fl = math.floor(e.lo)
        # m*x + r is irrational, so it never equals an integer endpoint
        if e.hi <= fl + 1:
            return fl
        bits *= 2
    raise PrecisionExhausted("floor not resolved at precision cap", bits=cap_bits)


def floor_of(x: AlgebraicReal, shift: Fraction = Fraction(0), cap_bits: int = DEFAULT_CAP_BITS) -> int:
    return floor_affine(x, 1, Fraction(shift), cap_bits)


class Verdict(str, Enum):
    LESS = "Less"
    GREATER = "Greater"
    UNDECIDED = "Undecided"


@dataclass(frozen=True)
class PowerThreshold:
    """The real number base^(-exponent) for integer base >= 1 and rational exponent >= 0.

    Comparisons with a nonnegative rational v are done in integers:
    v < base^(-a/b)  <=>  v^b * base^a < 1.
    """

    base: int
    exponent: Fraction

    def exceeds(self, v: Fraction) -> bool:
        """True iff v < threshold."""
        a, b = self.exponent.numerator, self.exponent.denominator
        v = Fraction(v)
        return v.numerator**b * self.base**a < v.denominator**b

    def below(self, v: Fraction) -> bool:
        """True iff v > threshold."""
        a, b = self.exponent.numerator, self.exponent.denominator
        v = Fraction(v)
        return v.numerator**b * self.base**a > v.denominator**b


@dataclass(frozen=True)
class CertifiedDistance:
    enclosure: RationalInterval
    verdict: Verdict
    precision_bits: int

    def to_json(self) -> dict:
        return {
            "enclosure": self.enclosure.to_json(),
            "verdict": self.verdict.value,
            "precision_bits": self.precision_bits,
        }


def distance_enclosure(m: int, x: AlgebraicReal, bits: int, shift: Fraction = Fraction(0)) -> RationalInterval:
    """Enclosure of ||m*x + shift|| from an enclosure of width <= 2^-bits.

    The nearest integer is re-derived from the enclosure midpoint on each call.
    """
    e = enclose_affine(x, m, shift, bits)
    n = math.floor(e.mid + Fraction(1, 2))
    lo_d, hi_d = e.lo - n, e.hi - n
    if lo_d <= 0 <= hi_d:
        lo = Fraction(0)
        hi = max(-lo_d, hi_d)
    else:
        lo = min(abs(lo_d), abs(hi_d))
        hi = max(abs(lo_d), abs(hi_d))
    # distances above 1/2 are folded back by the choice of n; clip for safety
    hi = min(hi, Fraction(1, 2))
    lo = min(lo, hi)
    return RationalInterval(lo, hi)


def _compare(threshold, enc: RationalInterval) -> Verdict:
    if isinstance(threshold, PowerThreshold):
        if threshold.exceeds(enc.hi):
            return Verdict.LESS
        if threshold.below(enc.lo):
            return Verdict.GREATER
        return Verdict.UNDECIDED
    t = Fraction(threshold)
    if enc.hi < t:
        return Verdict.LESS
    if enc.lo > t:
        return Verdict.GREATER
    return Verdict.UNDECIDED


def nearest_distance(
    m: int,
    x: AlgebraicReal,
    threshold,
    bits_cap: int = DEFAULT_CAP_BITS,
    start_bits: int = DEFAULT_START_BITS,
    shift: Fraction = Fraction(0),
) -> CertifiedDistance:
    """Certified enclosure of ||m*x|| and its position relative to ``threshold``.

    ``threshold`` is a rational or a PowerThreshold. Precision doubles from
    ``start_bits`` until the verdict is certified or ``bits_cap`` is passed.
    """
    if m == 0:
        raise InvalidInput("m must be nonzero")
    bits = start_bits
    enc = None
    used = bits
    while bits <= bits_cap:
        enc = distance_enclosure(m, x, bits, shift)
        used = bits
        v = _compare(threshold, enc)
        if v is not Verdict.UNDECIDED:
            return CertifiedDistance(enc, v, used)
        bits *= 2
    if enc is None:
        enc = distance_enclosure(m, x, bits_cap, shift)
        used = bits_cap
    return CertifiedDistance(enc, Verdict.UNDECIDED, used)


def trace_power_sums(f: IntPolynomial, count: int) -> list:
    """u_0..u_count with u_n the sum of n-th powers of the roots of monic f."""
    if not f.is_monic():
        raise InvalidInput("trace_power_sums needs a monic polynomial")
    d = f.degree
    c = [0] + [-f.coeffs[d - i] for i in range(1, d + 1)]
    u = [d]
    for n in range(1, count + 1):
        acc = sum(c[i] * u[n - i] for i in range(1, min(n - 1, d) + 1))
        if n <= d:
            acc += n * c[n]
        u.append(acc)
    return u
