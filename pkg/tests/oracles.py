"""Independent reference computations used by the tests.

Nothing here imports the convlab algorithms it checks; each oracle takes a
different route (determinants, brute force, floating point at high precision).
"""

from __future__ import annotations

import math
from fractions import Fraction

import mpmath


def bareiss_det(M):
    """Exact integer determinant by fraction-free elimination."""
    n = len(M)
    if n == 0:
        return 1
    A = [list(r) for r in M]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if A[k][k] == 0:
            for r in range(k + 1, n):
                if A[r][k] != 0:
                    A[k], A[r] = A[r], A[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                A[i][j] = (A[i][j] * A[k][k] - A[i][k] * A[k][j]) // prev
        prev = A[k][k]
    return sign * A[n - 1][n - 1]


def sylvester_resultant(f, g):
    """Res(f, g) for coefficient lists (constant term first) via the Sylvester matrix."""
    m, n = len(f) - 1, len(g) - 1
    F, G = list(reversed(f)), list(reversed(g))
    size = m + n
    rows = []
    for i in range(n):
        rows.append([0] * i + F + [0] * (size - m - 1 - i))
    for i in range(m):
        rows.append([0] * i + G + [0] * (size - n - 1 - i))
    return bareiss_det(rows)


def mp_roots(coeffs, dps=60):
    with mpmath.workdps(dps):
        return mpmath.polyroots(list(reversed(coeffs)), maxsteps=400, extraprec=4 * dps)


def iroot_floor(n, k):
    """floor(n^(1/k)) by integer Newton iteration."""
    if n < 2:
        return n
    x = 1 << ((n.bit_length() + k - 1) // k)
    while True:
        y = ((k - 1) * x + n // x ** (k - 1)) // k
        if y >= x:
            return x
        x = y


def cbrt2_scaled(bits):
    """floor(2^(1/3) * 2^bits)."""
    return iroot_floor(2 << (3 * bits), 3)


def cf_by_floor_reciprocal(x, K):
    """Partial quotients of an mpmath real by repeated floor and reciprocal."""
    out = []
    for _ in range(K + 1):
        a = int(mpmath.floor(x))
        out.append(a)
        x = 1 / (x - a)
    return out


def convergent_denominators(a):
    q = []
    qm, qc = 0, 1
    for i, ai in enumerate(a):
        if i == 0:
            q.append(1)
            continue
        qm, qc = qc, ai * qc + qm
        q.append(qc)
    return q


def factorize(n):
    """Trial-division factorization as {prime: exponent}."""
    out = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def divisors(n):
    ds = [1]
    for p, e in factorize(n).items():
        ds = [d * p**k for d in ds for k in range(e + 1)]
    return sorted(ds)


def nonzero_digits(n, b):
    c = 0
    while n:
        n, r = divmod(n, b)
        c += r != 0
    return c


def is_repdigit(n, b):
    ds = set()
    while n:
        n, r = divmod(n, b)
        ds.add(r)
    return len(ds) == 1


def brute_sparse_max(n, b, kmax):
    return max(d for d in divisors(n) if nonzero_digits(d, b) <= kmax)


def brute_repdigit_max(n, b):
    return max(d for d in divisors(n) if is_repdigit(d, b))


def s_part_by_factorization(n, S):
    if n == 0:
        return 0
    return math.prod(p**e for p, e in factorize(abs(n)).items() if p in S)


def smooth_sieve(limit, S):
    """Sorted S-smooth integers in [1, limit] by a divide-out sieve."""
    rem = list(range(limit + 1))
    for p in S:
        for k in range(p, limit + 1, p):
            while rem[k] % p == 0:
                rem[k] //= p
    return [k for k in range(1, limit + 1) if rem[k] == 1]


def zeckendorf_brute_ok(n, indices):
    fib = [0, 1]
    while len(fib) < 100:
        fib.append(fib[-1] + fib[-2])
    s = sorted(indices)
    return sum(fib[j] for j in s) == n and all(b - a >= 2 for a, b in zip(s, s[1:]))


def mu_window_float(q, k0, K, dps=50):
    """max_{k0 <= k < K} 1 + log q_{k+1} / log q_k in mpmath."""
    with mpmath.workdps(dps):
        return max(1 + mpmath.log(q[k + 1]) / mpmath.log(q[k]) for k in range(k0, K))


def frac_to_mpf(x: Fraction):
    return mpmath.mpf(x.numerator) / x.denominator


def divisor_lists(limit):
    """divs[n] = all divisors of n for n <= limit, by a multiples sieve."""
    divs = [[] for _ in range(limit + 1)]
    for d in range(1, limit + 1):
        for m in range(d, limit + 1, d):
            divs[m].append(d)
    return divs


def spf_sieve(limit):
    """Smallest prime factor table."""
    spf = list(range(limit + 1))
    for p in range(2, math.isqrt(limit) + 1):
        if spf[p] == p:
            for m in range(p * p, limit + 1, p):
                if spf[m] == m:
                    spf[m] = p
    return spf


def s_part_by_spf(n, S, spf):
    part = 1
    while n > 1:
        p = spf[n]
        n //= p
        if p in S:
            part *= p
    return part


def mat2_trace(period):
    """Trace of prod [[a, 1], [1, 0]] by plain 2x2 multiplication."""
    M = [[1, 0], [0, 1]]
    for a in period:
        A = [[a, 1], [1, 0]]
        M = [[sum(M[i][k] * A[k][j] for k in range(2)) for j in range(2)] for i in range(2)]
    return M[0][0] + M[1][1]
