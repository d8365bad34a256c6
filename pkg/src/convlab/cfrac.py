"""Continued fractions of algebraic reals and quadratic surds.

Convergents are indexed from 0 with the usual seeds p_{-1} = 1, q_{-1} = 0,
p_0 = a_0, q_0 = 1.
"""

from __future__ import annotations

import hashlib
import json
import math
import os
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Sequence

from .algebraic import (
    DEFAULT_CAP_BITS,
    AlgebraicReal,
    RationalInterval,
    enclose_affine,
    refine,
)
from .errors import IdentityViolation, InvalidInput, PrecisionExhausted
from .util import dumps, log_ratio, write_atomic

START_BITS = 128


def convergents(a: Sequence[int]):
    """Numerators and denominators for the partial quotients ``a``."""
    p, q = [], []
    pm, qm = 1, 0
    pc, qc = None, None
    for i, ai in enumerate(a):
        if i == 0:
            pc, qc = ai, 1
        else:
            pc, qc, pm, qm = ai * pc + pm, ai * qc + qm, pc, qc
        p.append(pc)
        q.append(qc)
    return p, q


@dataclass(frozen=True)
class ContinuedFractionExpansion:
    a: tuple
    p: tuple
    q: tuple
    source: AlgebraicReal | None = None
    precision_log: tuple = field(default=(), compare=False)

    @classmethod
    def from_partial_quotients(cls, a: Sequence[int], source=None, precision_log=()):
        a = tuple(int(x) for x in a)
        if any(x < 1 for x in a[1:]):
            raise InvalidInput("partial quotients a_k must be >= 1 for k >= 1")
        p, q = convergents(a)
        return cls(a, tuple(p), tuple(q), source, tuple(precision_log))

    @property
    def terms(self) -> int:
        """K, the index of the last partial quotient."""
        return len(self.a) - 1

    def prefix(self, K: int) -> "ContinuedFractionExpansion":
        return ContinuedFractionExpansion(
            self.a[: K + 1], self.p[: K + 1], self.q[: K + 1], self.source, self.precision_log
        )

    def check_invariants(self) -> None:
        """Raise IdentityViolation if any convergent identity fails."""
        a, p, q = self.a, self.p, self.q
        pm, qm = 1, 0
        for k in range(len(a)):
            if k >= 1 and a[k] < 1:
                raise IdentityViolation(f"a_{k} = {a[k]} < 1")
            if k >= 1:
                pm2, qm2 = (p[k - 2], q[k - 2]) if k >= 2 else (1, 0)
                if p[k] != a[k] * p[k - 1] + pm2 or q[k] != a[k] * q[k - 1] + qm2:
                    raise IdentityViolation(f"convergent recurrence fails at k={k}")
            det = p[k] * qm - pm * q[k]
            if det != (-1 if k % 2 == 0 else 1):
                raise IdentityViolation(f"determinant identity fails at k={k}")
            if math.gcd(p[k], q[k]) != 1:
                raise IdentityViolation(f"gcd(p_{k}, q_{k}) != 1")
            if k >= 2 and q[k] <= q[k - 1]:
                raise IdentityViolation(f"q not increasing at k={k}")
            pm, qm = p[k], q[k]

    def to_records(self):
        for k in range(len(self.a)):
            yield {"k": k, "a": str(self.a[k]), "p": str(self.p[k]), "q": str(self.q[k])}


def _common_prefix(lo: Fraction, hi: Fraction, limit: int) -> list:
    """Partial quotients shared by every real number in [lo, hi]."""
    ln, ld = lo.numerator, lo.denominator
    hn, hd = hi.numerator, hi.denominator
    out = []
    while len(out) < limit:
        if ld == 0 or hd == 0:
            break
        al, rl = divmod(ln, ld)
        ah, rh = divmod(hn, hd)
        # an endpoint whose complete quotient is an integer terminates; stop there
        if al != ah or rl == 0 or rh == 0:
            break
        out.append(al)
        ln, ld = ld, rl
        hn, hd = hd, rh
    return out


def expand(
    x: AlgebraicReal,
    K: int,
    cap_bits: int = DEFAULT_CAP_BITS,
    cache_dir: str | None = None,
) -> ContinuedFractionExpansion:
    """First K+1 certified partial quotients of x with their convergents.

    Each attempt refines x itself and keeps only the quotients shared by both
    ends of the enclosure, so every quotient is certified against the original
    number. Precision doubles from 128 bits up to ``cap_bits``.
    """
    if x.degree < 2:
        raise InvalidInput("expand needs an irrational algebraic number")
    if cache_dir:
        cached = load_cached(x, K, cache_dir)
        if cached is not None:
            return cached
    bits = START_BITS
    log = []
    best = []
    while bits <= cap_bits:
        enc = refine(x, bits)
        terms = _common_prefix(enc.lo, enc.hi, K + 1)
        log.append((bits, len(terms)))
        if len(terms) > len(best):
            best = terms
        if len(terms) >= K + 1:
            cfe = ContinuedFractionExpansion.from_partial_quotients(terms, x, log)
            if cache_dir:
                store_cached(cfe, cache_dir)
            return cfe
        bits *= 2
    raise PrecisionExhausted(
        f"only {len(best)} partial quotients certified at {cap_bits} bits",
        index=len(best),
        bits=cap_bits,
    )


# --- disk cache ---------------------------------------------------------------


def cache_key(x: AlgebraicReal) -> str:
    ident = dumps({"minpoly": x.minpoly.to_json(), "isolator": x.isolator.to_json()})
    return hashlib.sha256(ident.encode()).hexdigest()[:32]


def _cache_paths(x: AlgebraicReal, cache_dir: str):
    key = cache_key(x)
    return os.path.join(cache_dir, key + ".json"), os.path.join(cache_dir, key + ".jsonl")


def store_cached(cfe: ContinuedFractionExpansion, cache_dir: str) -> None:
    x = cfe.source
    manifest_path, body_path = _cache_paths(x, cache_dir)
    body = "".join(dumps(r) + "\n" for r in cfe.to_records())
    manifest = {
        "minpoly": x.minpoly.to_json(),
        "isolator": x.isolator.to_json(),
        "terms": cfe.terms,
        "trusted_irreducible": x.trusted_irreducible,
    }
    # body first: a manifest never points at a missing or shorter body
    write_atomic(body_path, body)
    write_atomic(manifest_path, json.dumps(manifest, sort_keys=True, indent=1) + "\n")


def load_cached(x: AlgebraicReal, K: int, cache_dir: str):
    manifest_path, body_path = _cache_paths(x, cache_dir)
    try:
        with open(manifest_path) as fh:
            manifest = json.load(fh)
        if manifest["terms"] < K:
            return None
        if manifest["minpoly"] != x.minpoly.to_json() or manifest["isolator"] != x.isolator.to_json():
            return None
        a = []
        with open(body_path) as fh:
            for line in fh:
                rec = json.loads(line)
                if rec["k"] > K:
                    break
                a.append(int(rec["a"]))
    except (OSError, ValueError, KeyError):
        return None
    if len(a) < K + 1:
        return None
    return ContinuedFractionExpansion.from_partial_quotients(a, x, (("cache", K),))


def default_cache_dir() -> str | None:
    return os.environ.get("CONVLAB_CACHE")


# --- quadratic surds ------------------------------------------------------------


@dataclass(frozen=True)
class QuadraticSurd:
    """(P + sqrt(D)) / Q."""

    P: int
    Q: int
    D: int

    def __post_init__(self):
        if self.D <= 0 or math.isqrt(self.D) ** 2 == self.D:
            raise InvalidInput("D must be a positive non-square")
        if self.Q == 0:
            raise InvalidInput("Q must be nonzero")

    def normalized(self) -> "QuadraticSurd":
        """Equivalent surd with Q | D - P^2."""
        if (self.D - self.P * self.P) % self.Q == 0:
            return self
        q = abs(self.Q)
        return QuadraticSurd(self.P * q, self.Q * q, self.D * q * q)


@dataclass(frozen=True)
class PeriodicCF:
    """Ultimately periodic expansion; a[0:r] is the preperiod, a[r:r+s] the period."""

    r: int
    s: int
    a: tuple
    t: int

    def term(self, k: int) -> int:
        if k < self.r:
            return self.a[k]
        return self.a[self.r + (k - self.r) % self.s]

    def unroll(self, K: int) -> ContinuedFractionExpansion:
        return ContinuedFractionExpansion.from_partial_quotients([self.term(k) for k in range(K + 1)])


def _surd_floor(P: int, Q: int, D: int, sqrt_floor: int) -> int:
    if Q > 0:
        return (P + sqrt_floor) // Q
    return -((P + sqrt_floor) // (-Q)) - 1


def period_trace(period: Sequence[int]) -> int:
    """Trace of the product of the matrices (a 1; 1 0) over the period."""
    m00, m01, m10, m11 = 1, 0, 0, 1
    for a in period:
        m00, m01, m10, m11 = m00 * a + m01, m00, m10 * a + m11, m10
    return m00 + m11


def expand_quadratic(surd: QuadraticSurd) -> PeriodicCF:
    """Exact (P, Q) iteration with cycle detection on the states."""
    s = surd.normalized()
    P, Q, D = s.P, s.Q, s.D
    root = math.isqrt(D)
    seen = {}
    a = []
    while (P, Q) not in seen:
        seen[(P, Q)] = len(a)
        ai = _surd_floor(P, Q, D, root)
        a.append(ai)
        P = ai * Q - P
        Q = (D - P * P) // Q
    r = seen[(P, Q)]
    period = a[r:]
    return PeriodicCF(r, len(period), tuple(a), period_trace(period))


@dataclass(frozen=True)
class TraceReport:
    t: int
    s: int
    checked: tuple  # (k_first, k_last)
    holds: bool


def period_matrix_trace(pcf: PeriodicCF, window: int = 200) -> TraceReport:
    """Trace t and an exact check of q_{k+2s} = t q_{k+s} - (-1)^s q_k for r <= k <= window."""
    t = period_trace(pcf.a[pcf.r:])
    if t != pcf.t:
        raise IdentityViolation("stored trace disagrees with matrix product")
    s = pcf.s
    cfe = pcf.unroll(window + 2 * s)
    q = cfe.q
    sign = -1 if s % 2 else 1
    for k in range(pcf.r, window + 1):
        if q[k + 2 * s] != t * q[k + s] - sign * q[k]:
            raise IdentityViolation(f"trace identity fails at k={k}")
    return TraceReport(t, s, (pcf.r, window), True)


def quadratic_real(surd: QuadraticSurd) -> AlgebraicReal:
    """The surd as an AlgebraicReal (minimal polynomial of (P + sqrt D)/Q)."""
    from .algebraic import make_algebraic

    P, Q, D = surd.P, surd.Q, surd.D
    # Q^2 x^2 - 2PQ x + (P^2 - D)
    coeffs = [P * P - D, -2 * P * Q, Q * Q]
    root = math.isqrt(D)
    lo = Fraction(P + root, Q)
    hi = Fraction(P + root + 1, Q)
    return make_algebraic(coeffs, RationalInterval(min(lo, hi), max(lo, hi)))


# --- irrationality exponent window estimate ---------------------------------------


def mu_lower_estimate(cfe: ContinuedFractionExpansion, k0: int) -> Fraction:
    """max over k0 <= k < K of 1 + log q_{k+1} / log q_k, rounded down to 64 bits.

    A finite-window lower estimate of the tail supremum, not the exponent itself.
    """
    K = cfe.terms
    if K < k0 + 2:
        raise InvalidInput("need K >= k0 + 2")
    best = None
    for k in range(k0, K):
        if cfe.q[k] < 2:
            continue
        v = 1 + log_ratio(cfe.q[k + 1], cfe.q[k])
        if best is None or v > best:
            best = v
    if best is None:
        raise InvalidInput("no q_k >= 2 in window")
    return best


# --- convergent membership ------------------------------------------------------------


class Membership(str, Enum):
    YES = "Yes"
    NO = "No"
    UNDECIDED = "Undecided"


def _scaled_gap(x, p: int, q: int, bits: int) -> RationalInterval:
    """Enclosure of |q*x - p|."""
    if isinstance(x, RationalInterval):
        e = x.scale_shift(q, -p)
    else:
        e = enclose_affine(x, q, Fraction(-p), bits)
    if e.lo <= 0 <= e.hi:
        return RationalInterval(0, max(-e.lo, e.hi))
    return RationalInterval(min(abs(e.lo), abs(e.hi)), max(abs(e.lo), abs(e.hi)))


def is_convergent_legendre(
    p: int, q: int, x, fallback: bool = False, cap_bits: int = DEFAULT_CAP_BITS
) -> Membership:
    """Legendre test for p/q being a convergent of x.

    Yes when |x - p/q| < 1/(2q^2) is certified, No when |x - p/q| >= 1/q^2 is
    certified, otherwise Undecided. With ``fallback`` and an AlgebraicReal x,
    an Undecided answer is settled by comparing against the expansion itself.
    """
    if q < 1:
        raise InvalidInput("q must be >= 1")
    yes_bound = Fraction(1, 2 * q)  # on |q x - p|
    no_bound = Fraction(1, q)
    bits = START_BITS + 2 * q.bit_length()
    verdict = Membership.UNDECIDED
    while True:
        gap = _scaled_gap(x, p, q, bits)
        if gap.hi < yes_bound:
            return Membership.YES
        if gap.lo >= no_bound:
            return Membership.NO
        if isinstance(x, RationalInterval) or (gap.lo >= yes_bound and gap.hi < no_bound):
            break
        if bits > cap_bits:
            break
        bits *= 2
    if fallback and isinstance(x, AlgebraicReal):
        g = math.gcd(p, q)
        pr, qr = p // g, q // g
        K = 8
        while True:
            cfe = expand(x, K, cap_bits)
            if cfe.q[-1] >= qr:
                for pk, qk in zip(cfe.p, cfe.q):
                    if qk == qr and pk == pr:
                        return Membership.YES
                return Membership.NO
            K *= 2
    return verdict
