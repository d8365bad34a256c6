"""S-parts, bounded greatest prime factors and S-smooth number search."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from .errors import GammaSearchExhausted, InvalidInput
from .util import log2_fixed

MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)
MR_LIMIT = 3317044064679887385961981


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, valid below MR_LIMIT."""
    if n < 2:
        return False
    if n >= MR_LIMIT:
        raise InvalidInput(f"{n} is beyond the deterministic primality range")
    for p in MR_WITNESSES:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in MR_WITNESSES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def primes_below(n: int) -> list:
    if n < 3:
        return []
    sieve = bytearray([1]) * n
    sieve[0:2] = b"\x00\x00"
    for i in range(2, math.isqrt(n - 1) + 1):
        if sieve[i]:
            sieve[i * i :: i] = bytearray(len(range(i * i, n, i)))
    return [i for i in range(n) if sieve[i]]


def first_primes(k: int) -> list:
    n = 16
    while True:
        ps = primes_below(n)
        if len(ps) >= k:
            return ps[:k]
        n *= 2


@dataclass(frozen=True)
class PrimeSet:
    primes: tuple

    def __post_init__(self):
        ps = tuple(sorted(set(int(p) for p in self.primes)))
        for p in ps:
            if not is_prime(p):
                raise InvalidInput(f"{p} is not prime")
        object.__setattr__(self, "primes", ps)

    @classmethod
    def parse(cls, text: str) -> "PrimeSet":
        text = text.strip()
        return cls(tuple(int(x) for x in text.split(",") if x.strip()) if text else ())

    def __iter__(self):
        return iter(self.primes)

    def __len__(self):
        return len(self.primes)

    def __contains__(self, p):
        return p in self.primes

    def isdisjoint(self, other: "PrimeSet") -> bool:
        return not set(self.primes) & set(other.primes)

    @property
    def product(self) -> int:
        return math.prod(self.primes)

    def __str__(self):
        return ",".join(map(str, self.primes))


@dataclass(frozen=True)
class SPartResult:
    s_part: int
    cofactor: int
    exponents: tuple = ()


def s_part(N: int, S: PrimeSet | Iterable[int]) -> SPartResult:
    """[N]_S and |N| / [N]_S, with [0]_S = 0."""
    primes = S.primes if isinstance(S, PrimeSet) else tuple(S)
    if N == 0:
        return SPartResult(0, 0, tuple(0 for _ in primes))
    n = abs(N)
    part = 1
    exps = []
    for p in primes:
        e = 0
        if p == 2:
            e = (n & -n).bit_length() - 1
            n >>= e
        else:
            # strip p^(2^j) blocks first so huge exponents cost O(log e) divisions
            pw = [p]
            while pw[-1] * pw[-1] <= n and n % (pw[-1] * pw[-1]) == 0:
                pw.append(pw[-1] * pw[-1])
            for j in range(len(pw) - 1, -1, -1):
                while n % pw[j] == 0:
                    n //= pw[j]
                    e += 1 << j
        exps.append(e)
        if e:
            part *= p**e
    return SPartResult(part, n, tuple(exps))


def is_smooth(N: int, S: PrimeSet | Iterable[int]) -> bool:
    return N >= 1 and s_part(N, S).cofactor == 1


@dataclass(frozen=True)
class GPFResult:
    """``resolved`` True: ``value`` is the greatest prime factor; else the unresolved cofactor."""

    resolved: bool
    value: int


def gpf_bounded(N: int, B: int) -> GPFResult:
    if N < 2 or B < 2:
        raise InvalidInput("need N >= 2 and B >= 2")
    n = N
    largest = 1
    for p in primes_below(B + 1):
        if n % p == 0:
            largest = p
            while n % p == 0:
                n //= p
        if p * p > n:
            break
    if n == 1:
        return GPFResult(True, largest)
    if n <= B * B:
        return GPFResult(True, n)
    return GPFResult(False, n)


# --- smooth enumeration ---------------------------------------------------------------------


class SmoothEnumerator:
    """S-smooth integers in increasing order starting from 1.

    A k-way merge with one channel per prime p, each channel reading p * h[i]
    from the values already produced; equal channel heads advance together so
    every value appears once.
    """

    def __init__(self, S: PrimeSet):
        if not len(S):
            raise InvalidInput("S must be nonempty")
        self.primes = S.primes
        self._h = []
        self._pos = [0] * len(self.primes)
        self._heads = list(self.primes)

    def __iter__(self):
        return self

    def __next__(self) -> int:
        h = self._h
        if not h:
            h.append(1)
            return 1
        heads, pos, primes = self._heads, self._pos, self.primes
        v = min(heads)
        h.append(v)
        for i, x in enumerate(heads):
            if x == v:
                pos[i] += 1
                heads[i] = primes[i] * h[pos[i]]
        return v


@dataclass(frozen=True)
class SmoothNext:
    """gamma = least S-smooth integer > m, with its exponent vector over S."""

    m: int
    gamma: int
    exponents: tuple

    @property
    def gap(self) -> int:
        return self.gamma - self.m

    @property
    def f(self) -> Fraction:
        return Fraction(self.gamma - self.m, self.m)


MERGE_LIMIT_BITS = 64
DEFAULT_CANDIDATE_CAP = 10**7
_LOG_BITS = 160


def smooth_next(m: int, S: PrimeSet, candidate_cap: int = DEFAULT_CANDIDATE_CAP) -> SmoothNext:
    if m < 1:
        raise InvalidInput("m must be positive")
    if not len(S):
        raise InvalidInput("S must be nonempty")
    if m.bit_length() <= MERGE_LIMIT_BITS:
        for x in SmoothEnumerator(S):
            if x > m:
                return SmoothNext(m, x, s_part(x, S).exponents)
    return _smooth_next_lattice(m, S, candidate_cap)


def _min_exponent(p: int, r: int) -> int:
    """Least a >= 0 with p^a >= r."""
    if r <= 1:
        return 0
    if p == 2:
        return (r - 1).bit_length()
    a = max(0, int((r.bit_length() - 1) / math.log2(p)) - 1)
    while p**a < r:
        a += 1
    return a


def _smooth_next_lattice(m: int, S: PrimeSet, cap: int) -> SmoothNext:
    """Exponent-lattice search ranked by fixed-point logarithms.

    For every exponent vector of the primes other than the smallest p0, the
    least power of p0 pushing the product past m is estimated from log2 values
    carried with ``_LOG_BITS`` fractional bits. Every vector whose estimated
    excess is within the accumulated rounding error of the best (or of a full
    p0 step, where the estimate may overshoot by one power) is re-derived and
    compared exactly.
    """
    W = _LOG_BITS
    one = 1 << W
    p0, rest = S.primes[0], S.primes[1:]
    lm = log2_fixed(m, W)
    lp0 = log2_fixed(p0, W) + 1
    lrest = [log2_fixed(p, W) for p in rest]
    emax = [(m.bit_length() + 1) * one // lp + 1 for lp in lrest]
    # each fixed-point log is within 1 ulp of the truth; products with an
    # exponent e accumulate at most e ulps
    slack = 4 * (sum(emax) + m.bit_length() + 8)

    def ranked(acc):
        need = lm - acc
        a = 0 if need < 0 else need // lp0 + 1
        ex = a * lp0 + acc - lm
        if a > 0 and ex > lp0 - 2 * slack:
            ex -= lp0
        return ex

    scored = []
    count = 0

    def walk(idx, acc, vec):
        nonlocal count
        if idx == len(rest):
            count += 1
            if count > cap:
                raise GammaSearchExhausted(f"more than {cap} lattice candidates")
            scored.append((ranked(acc), vec))
            return
        step = lrest[idx]
        for e in range(emax[idx] + 1):
            nxt = acc + e * step
            if nxt > lm + step + slack:
                break
            walk(idx + 1, nxt, vec + (e,))

    if len(rest) == 1:
        step = lrest[0]
        best_ex = None
        for e in range(emax[0] + 1):
            acc = e * step
            if acc > lm + step + slack:
                break
            count += 1
            if count > cap:
                raise GammaSearchExhausted(f"more than {cap} lattice candidates")
            ex = ranked(acc)
            if best_ex is None or ex < best_ex + 2 * slack:
                scored.append((ex, (e,)))
                if best_ex is None or ex < best_ex:
                    best_ex = ex
    else:
        walk(0, 0, ())
    best_ex = min(ex for ex, _ in scored)
    winner = None
    for ex, vec in scored:
        if ex >= best_ex + 2 * slack:
            continue
        other = math.prod(p**e for p, e in zip(rest, vec))
        a = _min_exponent(p0, m // other + 1)
        val = p0**a * other
        if winner is None or val < winner[0]:
            winner = (val, (a,) + vec)
    val, vec = winner
    if not val > m:
        raise ArithmeticError("lattice search produced a value <= m")
    return SmoothNext(m, val, vec)


# --- multiplicative orders ----------------------------------------------------------------


def valuation(n: int, p: int) -> int:
    if n == 0:
        raise InvalidInput("valuation of 0")
    if p == 2:
        return (n & -n).bit_length() - 1
    return s_part(n, (p,)).exponents[0]


def multiplicative_order_prime_power(a: int, p: int, k: int) -> int:
    """ord of a modulo p^k for prime p not dividing a, via lifting."""
    if k < 1:
        raise InvalidInput("k must be >= 1")
    if a % p == 0:
        raise InvalidInput("a must be a unit mod p")
    if p == 2:
        if k == 1:
            return 1
        if a % 4 == 1:
            return 1 << max(0, k - _valuation_or_inf(a - 1, 2, k))
        return 2 << max(0, k - _valuation_or_inf(a * a - 1, 2, k))
    o = 1
    x = a % p
    while x != 1:
        x = x * a % p
        o += 1
    return o * p ** max(0, k - _valuation_or_inf(pow(a, o) - 1, p, k))


def _valuation_or_inf(n: int, p: int, k: int) -> int:
    """v_p(n), or k when n == 0 (any value >= k gives the same order)."""
    return k if n == 0 else valuation(n, p)


def multiplicative_order(a: int, n: int) -> int:
    """Brute-force order of a modulo n (small n only)."""
    if math.gcd(a, n) != 1:
        raise InvalidInput("a must be a unit mod n")
    if n == 1:
        return 1
    o, x = 1, a % n
    while x != 1:
        x = x * a % n
        o += 1
    return o
