"""Base-b digit statistics, Zeckendorf representations and sparse divisors."""

from __future__ import annotations

from dataclasses import dataclass

from .errors import InvalidInput, UnsupportedSparsity


@dataclass(frozen=True)
class DigitStats:
    """Digits are least significant first.

    ``dc_s1`` counts changes d_j != d_{j-1} for 2 <= j <= k and ``dc_all``
    counts them for 1 <= j <= k.
    """

    base: int
    digits: tuple
    L: int
    dc_s1: int
    dc_all: int

    def value(self) -> int:
        n = 0
        for d in reversed(self.digits):
            n = n * self.base + d
        return n

    def to_json(self) -> dict:
        return {
            "base": self.base,
            "digits": list(self.digits),
            "L": self.L,
            "dc_s1": self.dc_s1,
            "dc_all": self.dc_all,
        }


def to_digits(N: int, b: int) -> tuple:
    if N < 1 or b < 2:
        raise InvalidInput("need N >= 1 and b >= 2")
    if b == 2:
        s = bin(N)[:1:-1]
        return tuple(int(c) for c in s)
    if b == 10:
        return tuple(int(c) for c in reversed(str(N)))
    out = []
    while N:
        N, r = divmod(N, b)
        out.append(r)
    return tuple(out)


def digit_stats(N: int, b: int) -> DigitStats:
    ds = to_digits(N, b)
    L = sum(1 for d in ds if d)
    changes = [ds[j] != ds[j - 1] for j in range(1, len(ds))]
    dc_all = sum(changes)
    dc_s1 = sum(changes[1:])
    return DigitStats(b, ds, L, dc_s1, dc_all)


# --- Zeckendorf ---------------------------------------------------------------------


@dataclass(frozen=True)
class ZeckendorfRep:
    """Fibonacci indices (F_0 = 0, F_1 = F_2 = 1), largest first."""

    indices: tuple

    @property
    def count(self) -> int:
        return len(self.indices)

    def value(self) -> int:
        return sum(fib(j) for j in self.indices)

    def to_json(self) -> dict:
        return {"indices": list(self.indices), "count": self.count}


def fib(n: int) -> int:
    a, b = 0, 1
    for _ in range(n):
        a, b = b, a + b
    return a


def zeckendorf(N: int) -> ZeckendorfRep:
    if N < 1:
        raise InvalidInput("N must be positive")
    fibs = [1, 2]  # F_2, F_3, ...
    while fibs[-1] <= N:
        fibs.append(fibs[-1] + fibs[-2])
    out = []
    for i in range(len(fibs) - 1, -1, -1):
        if fibs[i] <= N:
            N -= fibs[i]
            out.append(i + 2)
            if N == 0:
                break
    return ZeckendorfRep(tuple(out))


# --- sparse divisors ---------------------------------------------------------------------


def _powers(b: int, N: int) -> list:
    out = [1]
    while out[-1] * b <= N:
        out.append(out[-1] * b)
    return out


def sparse_candidates(N: int, b: int, kmax: int):
    """Integers <= N with at most ``kmax`` nonzero base-b digits, in decreasing order."""
    if kmax not in (1, 2):
        raise UnsupportedSparsity(f"kmax={kmax} not supported (1 or 2 only)")
    pw = _powers(b, N)
    for j in range(len(pw) - 1, -1, -1):
        for d in range(b - 1, 0, -1):
            top = d * pw[j]
            if top > N:
                continue
            # every two-digit candidate with this top digit exceeds top itself
            if kmax == 2:
                for jj in range(j - 1, -1, -1):
                    for dd in range(b - 1, 0, -1):
                        c = top + dd * pw[jj]
                        if c <= N:
                            yield c
            yield top


def sparse_divisor_max(N: int, b: int, kmax: int):
    """Largest divisor of N with at most ``kmax`` nonzero base-b digits, with its stats."""
    if N < 1 or b < 2:
        raise InvalidInput("need N >= 1 and b >= 2")
    for c in sparse_candidates(N, b, kmax):
        if N % c == 0:
            return c, digit_stats(c, b)
    raise AssertionError("1 always qualifies")


def repdigit_candidates(N: int, b: int):
    """Repdigits d (b^(n+1) - 1)/(b - 1) <= N in decreasing order."""
    reps = [1]
    while reps[-1] * b + 1 <= N:
        reps.append(reps[-1] * b + 1)
    for r in reversed(reps):
        for d in range(b - 1, 0, -1):
            if d * r <= N:
                yield d * r


def lowdc_divisor_max(N: int, b: int, kmax: int = 0):
    """Largest divisor of N whose base-b digits never change (repdigits)."""
    if kmax != 0:
        raise UnsupportedSparsity(f"kmax={kmax} not supported (0 only)")
    if N < 1 or b < 2:
        raise InvalidInput("need N >= 1 and b >= 2")
    for c in repdigit_candidates(N, b):
        if N % c == 0:
            return c, digit_stats(c, b)
    raise AssertionError("1 always qualifies")
