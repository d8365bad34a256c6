"""Exact univariate polynomials with integer coefficients.

Coefficients are stored constant term first. Arithmetic that leaves Z[x]
(division, gcd) goes through lists of Fractions and comes back as a primitive
integer polynomial.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence


def _trim(coeffs):
    coeffs = list(coeffs)
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    return coeffs


def _sign(x) -> int:
    return (x > 0) - (x < 0)


@dataclass(frozen=True)
class IntPolynomial:
    coeffs: tuple
    primitive: bool = field(default=False, compare=False)

    def __post_init__(self):
        c = tuple(int(a) for a in _trim(self.coeffs))
        if not c:
            c = (0,)
        object.__setattr__(self, "coeffs", c)

    @classmethod
    def from_roots(cls, roots: Iterable[int]) -> "IntPolynomial":
        p = cls((1,))
        for r in roots:
            p = p * cls((-r, 1))
        return p

    @classmethod
    def x_power(cls, n: int) -> "IntPolynomial":
        return cls((0,) * n + (1,))

    @property
    def degree(self) -> int:
        if self.coeffs == (0,):
            return -1
        return len(self.coeffs) - 1

    @property
    def lead(self) -> int:
        return self.coeffs[-1]

    def is_zero(self) -> bool:
        return self.coeffs == (0,)

    def is_monic(self) -> bool:
        return self.lead == 1

    def content(self) -> int:
        g = 0
        for a in self.coeffs:
            g = math.gcd(g, a)
        return g

    def normalized(self) -> "IntPolynomial":
        """Divide out the content and make the leading coefficient positive."""
        if self.is_zero():
            return self
        g = self.content()
        s = -1 if self.lead < 0 else 1
        return IntPolynomial(tuple(s * a // g for a in self.coeffs), primitive=True)

    def __call__(self, x):
        acc = 0
        for a in reversed(self.coeffs):
            acc = acc * x + a
        return acc

    def sign_at(self, x: Fraction) -> int:
        x = Fraction(x)
        n, d = x.numerator, x.denominator
        # d^deg * f(n/d), evaluated in integers
        deg = self.degree
        acc = 0
        dp = 1
        for a in reversed(self.coeffs):
            acc = acc * n + a * dp
            dp *= d
        return _sign(acc) if deg >= 0 else 0

    def sign_at_dyadic(self, n: int, k: int) -> int:
        """Sign of f(n / 2**k) using integer arithmetic only."""
        acc = 0
        shift = 0
        for a in reversed(self.coeffs):
            acc = acc * n + (a << shift)
            shift += k
        return _sign(acc)

    def derivative(self) -> "IntPolynomial":
        if self.degree <= 0:
            return IntPolynomial((0,))
        return IntPolynomial(tuple(i * a for i, a in enumerate(self.coeffs) if i > 0))

    def __add__(self, other):
        other = _as_poly(other)
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (0,) * (n - len(self.coeffs))
        b = other.coeffs + (0,) * (n - len(other.coeffs))
        return IntPolynomial(tuple(x + y for x, y in zip(a, b)))

    def __neg__(self):
        return IntPolynomial(tuple(-a for a in self.coeffs))

    def __sub__(self, other):
        return self + (-_as_poly(other))

    def __mul__(self, other):
        other = _as_poly(other)
        if self.is_zero() or other.is_zero():
            return IntPolynomial((0,))
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return IntPolynomial(tuple(out))

    __rmul__ = __mul__

    def __pow__(self, e: int):
        result = IntPolynomial((1,))
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def compose_scale(self, c: int) -> "IntPolynomial":
        """f(c*x)."""
        return IntPolynomial(tuple(a * c**i for i, a in enumerate(self.coeffs)))

    def reversed(self) -> "IntPolynomial":
        """x^deg f(1/x)."""
        return IntPolynomial(tuple(reversed(self.coeffs)))

    def divmod_exact(self, other: "IntPolynomial"):
        """Quotient and remainder over Q, returned as Fraction lists."""
        q, r = qdivmod([Fraction(a) for a in self.coeffs], [Fraction(a) for a in other.coeffs])
        return q, r

    def divides(self, other: "IntPolynomial") -> bool:
        """True iff self divides other in Q[x]."""
        _, r = other.divmod_exact(self)
        return not r

    def to_json(self) -> list:
        return [str(a) for a in self.coeffs]

    @classmethod
    def from_json(cls, data: Sequence) -> "IntPolynomial":
        return cls(tuple(int(a) for a in data))

    def __str__(self):
        terms = []
        for i in range(len(self.coeffs) - 1, -1, -1):
            a = self.coeffs[i]
            if a == 0:
                continue
            mono = "" if i == 0 else ("x" if i == 1 else f"x^{i}")
            if mono and abs(a) == 1:
                body = mono
            else:
                body = f"{abs(a)}{'*' if mono else ''}{mono}"
            terms.append(("-" if a < 0 else "+", body))
        if not terms:
            return "0"
        s = ("-" if terms[0][0] == "-" else "") + terms[0][1]
        for sign, body in terms[1:]:
            s += f" {sign} {body}"
        return s


def _as_poly(x) -> IntPolynomial:
    if isinstance(x, IntPolynomial):
        return x
    return IntPolynomial((int(x),))


# --- Q[x] helpers on Fraction lists -------------------------------------------


def qdivmod(a: list, b: list):
    a = _trim(a)
    b = _trim(b)
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    if len(a) < len(b):
        return [], a
    a = list(a)
    q = [Fraction(0)] * (len(a) - len(b) + 1)
    lb = b[-1]
    for i in range(len(a) - len(b), -1, -1):
        c = Fraction(a[i + len(b) - 1]) / lb
        q[i] = c
        if c:
            for j, bj in enumerate(b):
                a[i + j] -= c * bj
    return _trim(q), _trim(a[: len(b) - 1])


def from_rational(coeffs: Sequence[Fraction]) -> IntPolynomial:
    """Primitive integer polynomial proportional to a rational one."""
    coeffs = _trim(coeffs)
    if not coeffs:
        return IntPolynomial((0,))
    den = 1
    for c in coeffs:
        den = den * Fraction(c).denominator // math.gcd(den, Fraction(c).denominator)
    return IntPolynomial(tuple(int(Fraction(c) * den) for c in coeffs)).normalized()


def poly_gcd(f: IntPolynomial, g: IntPolynomial) -> IntPolynomial:
    a = [Fraction(c) for c in f.coeffs]
    b = [Fraction(c) for c in g.coeffs]
    a, b = _trim(a), _trim(b)
    while b:
        _, r = qdivmod(a, b)
        # keep sizes in check by making the remainder primitive
        a, b = b, (list(map(Fraction, from_rational(r).coeffs)) if r else [])
    return from_rational(a)


def exact_quotient(f: IntPolynomial, g: IntPolynomial) -> IntPolynomial:
    """f / g, which must divide exactly; result scaled to be primitive."""
    q, r = f.divmod_exact(g)
    if r:
        raise ArithmeticError(f"{g} does not divide {f}")
    return from_rational(q)


def squarefree_part(f: IntPolynomial) -> IntPolynomial:
    g = poly_gcd(f, f.derivative())
    if g.degree <= 0:
        return f.normalized()
    return exact_quotient(f, g)


def is_squarefree(f: IntPolynomial) -> bool:
    return poly_gcd(f, f.derivative()).degree <= 0


# --- resultants ---------------------------------------------------------------


def _prem(a: list, b: list) -> list:
    """Pseudo-remainder lc(b)^(deg a - deg b + 1) * a mod b over Z."""
    a = list(a)
    db = len(b) - 1
    lb = b[-1]
    e = len(a) - len(b) + 1
    while len(a) - 1 >= db and a:
        c = a[-1]
        a = [lb * x for x in a]
        shift = len(a) - 1 - db
        for j, bj in enumerate(b):
            a[shift + j] -= c * bj
        a = _trim(a)
        e -= 1
    if e > 0:
        a = [x * lb**e for x in a]
    return a


def _content(a) -> int:
    g = 0
    for x in a:
        g = math.gcd(g, x)
    return g


def resultant(f: IntPolynomial, g: IntPolynomial) -> int:
    """Res(f, g) by the subresultant pseudo-remainder sequence."""
    if f.is_zero() or g.is_zero():
        return 0
    A, B = list(f.coeffs), list(g.coeffs)
    da, db = len(A) - 1, len(B) - 1
    s = 1
    if da < db:
        A, B = B, A
        da, db = db, da
        if da % 2 and db % 2:
            s = -1
    if db == 0:
        return s * B[0] ** da
    a, b = _content(A), _content(B)
    A = [x // a for x in A]
    B = [x // b for x in B]
    t = a**db * b**da
    g_, h = 1, 1
    while True:
        da, db = len(A) - 1, len(B) - 1
        delta = da - db
        if da % 2 and db % 2:
            s = -s
        R = _prem(A, B)
        if not R:
            return 0
        A = B
        den = g_ * h**delta
        B = [x // den for x in R]
        g_ = A[-1]
        if delta == 0:
            pass
        elif delta == 1:
            h = g_
        else:
            h = g_**delta // h ** (delta - 1)
        if len(B) - 1 == 0:
            dA = len(A) - 1
            if dA == 1:
                h = B[0]
            else:
                h = B[0] ** dA // h ** (dA - 1)
            return s * t * h


def discriminant(f: IntPolynomial) -> int:
    d = f.degree
    r = resultant(f, f.derivative())
    sign = -1 if (d * (d - 1) // 2) % 2 else 1
    return sign * r // f.lead


def interpolate(xs: Sequence[int], ys: Sequence) -> list:
    """Coefficients (Fractions, constant first) of the Lagrange interpolant."""
    n = len(xs)
    out = [Fraction(0)] * n
    for i in range(n):
        basis = [Fraction(1)]
        denom = Fraction(1)
        for j in range(n):
            if j == i:
                continue
            basis = [Fraction(0)] + basis
            for k in range(len(basis) - 1):
                basis[k] -= xs[j] * basis[k + 1]
            denom *= xs[i] - xs[j]
        scale = Fraction(ys[i]) / denom
        for k in range(len(basis)):
            out[k] += scale * basis[k]
    return out


# --- power sums ---------------------------------------------------------------


def power_sums(f: IntPolynomial, count: int) -> list:
    """p_0..p_count, sums of n-th powers of the roots of f (Fractions if f not monic)."""
    d = f.degree
    lead = Fraction(f.lead)
    # c_i with f/lead = x^d - c_1 x^(d-1) - ... - c_d
    c = [None] + [-Fraction(f.coeffs[d - i]) / lead for i in range(1, d + 1)]
    p = [Fraction(d)]
    for n in range(1, count + 1):
        acc = Fraction(0)
        for i in range(1, min(n - 1, d) + 1):
            acc += c[i] * p[n - i]
        if n <= d:
            acc += n * c[n]
        p.append(acc)
    return p


def from_power_sums(sums: Sequence[Fraction], degree: int) -> list:
    """Monic polynomial (Fraction coefficients, constant first) with given power sums."""
    e = [Fraction(1)]
    for k in range(1, degree + 1):
        acc = Fraction(0)
        for i in range(1, k + 1):
            term = e[k - i] * sums[i]
            acc += term if i % 2 else -term
        e.append(acc / k)
    coeffs = [Fraction(0)] * (degree + 1)
    for k in range(degree + 1):
        coeffs[degree - k] = e[k] if k % 2 == 0 else -e[k]
    return coeffs


# --- cyclotomic polynomials -----------------------------------------------------


def euler_phi(m: int) -> int:
    result = m
    n = m
    p = 2
    while p * p <= n:
        if n % p == 0:
            while n % p == 0:
                n //= p
            result -= result // p
        p += 1
    if n > 1:
        result -= result // n
    return result


def _mobius(n: int) -> int:
    result = 1
    p = 2
    while p * p <= n:
        if n % p == 0:
            n //= p
            if n % p == 0:
                return 0
            result = -result
        p += 1
    if n > 1:
        result = -result
    return result


@lru_cache(maxsize=None)
def cyclotomic(m: int) -> IntPolynomial:
    """The m-th cyclotomic polynomial via the Moebius product formula."""
    num = IntPolynomial((1,))
    den = IntPolynomial((1,))
    for e in range(1, m + 1):
        if m % e:
            continue
        mu = _mobius(m // e)
        factor = IntPolynomial.x_power(e) - 1
        if mu == 1:
            num = num * factor
        elif mu == -1:
            den = den * factor
    q, r = num.divmod_exact(den)
    assert not r
    return IntPolynomial(tuple(int(c) for c in q))


def cyclotomic_orders(f: IntPolynomial, max_degree: int | None = None) -> list:
    """All m such that Phi_m divides f."""
    d = f.degree if max_degree is None else max_degree
    if d <= 0:
        return []
    out = []
    for m in range(1, 2 * d * d + 3):
        if euler_phi(m) > d:
            continue
        if cyclotomic(m).divides(f):
            out.append(m)
    return out


# --- real roots -----------------------------------------------------------------


def sturm_sequence(f: IntPolynomial) -> list:
    seq = [f, f.derivative()]
    while not seq[-1].is_zero() and seq[-1].degree > 0:
        _, r = seq[-2].divmod_exact(seq[-1])
        if not r:
            break
        rp = from_rational(r)
        # keep the sign of -remainder: from_rational normalizes to positive lead
        lead_r = r[-1]
        if lead_r > 0:
            rp = -rp
        seq.append(rp)
    return seq


def _sign_changes(signs) -> int:
    signs = [s for s in signs if s]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def sturm_count(seq: list, lo: Fraction, hi: Fraction) -> int:
    """Number of distinct real roots in (lo, hi]."""
    va = _sign_changes(p.sign_at(lo) for p in seq)
    vb = _sign_changes(p.sign_at(hi) for p in seq)
    return va - vb


def cauchy_bound(f: IntPolynomial) -> Fraction:
    """All complex roots have modulus strictly below this bound."""
    lead = abs(f.lead)
    return 1 + Fraction(max(abs(a) for a in f.coeffs[:-1]), lead) if f.degree > 0 else Fraction(1)


def isolate_real_roots(f: IntPolynomial, width: Fraction = Fraction(1)) -> list:
    """Disjoint intervals (lo, hi] each holding exactly one real root of squarefree f."""
    seq = sturm_sequence(f)
    bound = cauchy_bound(f)
    out = []
    stack = [(-bound, bound)]
    while stack:
        lo, hi = stack.pop()
        n = sturm_count(seq, lo, hi)
        if n == 0:
            continue
        if n == 1 and hi - lo <= width:
            out.append((lo, hi))
            continue
        mid = (lo + hi) / 2
        stack.append((mid, hi))
        stack.append((lo, mid))
    out.sort()
    return out


def rational_roots(f: IntPolynomial) -> list:
    """All rational roots of f (f nonzero)."""
    f = f.normalized()
    roots = []
    while f.degree >= 1 and f.coeffs[0] == 0:
        roots.append(Fraction(0))
        f = IntPolynomial(f.coeffs[1:])
    if f.degree < 1:
        return roots
    sq = squarefree_part(f)
    lead = abs(sq.lead)
    divisors = [q for q in range(1, math.isqrt(lead) + 1) if lead % q == 0]
    divisors = sorted(set(divisors + [lead // q for q in divisors]))
    for lo, hi in isolate_real_roots(sq, Fraction(1, 4 * lead * lead)):
        for q in divisors:
            p = math.floor(hi * q)
            cand = Fraction(p, q)
            if lo < cand <= hi and sq.sign_at(cand) == 0:
                roots.append(cand)
                break
    return sorted(set(roots))
