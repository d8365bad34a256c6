"""Integer linear recurrences in companion form.

A recurrence of order t is u_{n+t} = c_1 u_{n+t-1} + ... + c_t u_n with
initial terms u_1..u_t. Its characteristic polynomial is
x^t - c_1 x^(t-1) - ... - c_t. Degeneracy (some ratio of distinct roots is a
root of unity) is decided algebraically: the ratios are the roots of a
resultant, which is tested against cyclotomic polynomials.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Sequence

from .algebraic import RationalInterval
from .errors import InsufficientTerms, InvalidInput, NotARecurrence
from .poly import (
    IntPolynomial,
    cyclotomic,
    cyclotomic_orders,
    euler_phi,
    exact_quotient,
    from_power_sums,
    from_rational,
    interpolate,
    isolate_real_roots,
    power_sums,
    resultant,
    squarefree_part,
)
from .util import frac_str


@dataclass(frozen=True)
class LinearRecurrence:
    coeffs: tuple
    init: tuple

    def __post_init__(self):
        c = tuple(int(x) for x in self.coeffs)
        u = tuple(int(x) for x in self.init)
        if not c:
            raise InvalidInput("order must be >= 1")
        if len(u) != len(c):
            raise InvalidInput("need exactly `order` initial terms")
        if c[-1] == 0:
            raise InvalidInput("trailing coefficient c_t must be nonzero")
        object.__setattr__(self, "coeffs", c)
        object.__setattr__(self, "init", u)

    @property
    def order(self) -> int:
        return len(self.coeffs)

    @property
    def charpoly(self) -> IntPolynomial:
        return IntPolynomial(tuple(-c for c in reversed(self.coeffs)) + (1,))

    def eval_range(self, n0: int, n1: int) -> list:
        """Exact u_{n0}..u_{n1} (1-based indices)."""
        if not 1 <= n0 <= n1:
            raise InvalidInput("need 1 <= n0 <= n1")
        t = self.order
        window = list(self.init)
        out = []
        n = 1
        c = self.coeffs
        while n <= n1:
            if n >= n0:
                out.append(window[0])
            nxt = sum(c[j] * window[t - 1 - j] for j in range(t))
            window.pop(0)
            window.append(nxt)
            n += 1
        return out

    def term(self, n: int) -> int:
        """u_n by binary powering of the companion matrix."""
        if n < 1:
            raise InvalidInput("indices start at 1")
        t = self.order
        if n <= t:
            return self.init[n - 1]
        # state vector (u_k, ..., u_{k+t-1}); C maps it to (u_{k+1}, ..., u_{k+t})
        C = [[0] * t for _ in range(t)]
        for i in range(t - 1):
            C[i][i + 1] = 1
        for j in range(t):
            C[t - 1][j] = self.coeffs[t - 1 - j]
        P = _mat_pow(C, n - 1)
        return sum(P[0][j] * self.init[j] for j in range(t))

    def to_json(self) -> dict:
        return {"coeffs": [str(c) for c in self.coeffs], "init": [str(u) for u in self.init]}

    @classmethod
    def from_json(cls, d: dict) -> "LinearRecurrence":
        return cls(tuple(int(c) for c in d["coeffs"]), tuple(int(u) for u in d["init"]))


def _mat_mul(A, B):
    n, m, p = len(A), len(B), len(B[0])
    return [[sum(A[i][k] * B[k][j] for k in range(m)) for j in range(p)] for i in range(n)]


def _mat_pow(M, e):
    n = len(M)
    R = [[int(i == j) for j in range(n)] for i in range(n)]
    while e:
        if e & 1:
            R = _mat_mul(R, M)
        M = _mat_mul(M, M)
        e >>= 1
    return R


# --- fitting ----------------------------------------------------------------------


def _solve_overdetermined(rows, rhs):
    """Exact Gaussian elimination; the unique solution, or None if none/not unique."""
    n = len(rows[0])
    aug = [[Fraction(x) for x in r] + [Fraction(b)] for r, b in zip(rows, rhs)]
    piv_row = 0
    pivots = []
    for col in range(n):
        sel = next((r for r in range(piv_row, len(aug)) if aug[r][col] != 0), None)
        if sel is None:
            continue
        aug[piv_row], aug[sel] = aug[sel], aug[piv_row]
        pv = aug[piv_row][col]
        aug[piv_row] = [x / pv for x in aug[piv_row]]
        for r in range(len(aug)):
            if r != piv_row and aug[r][col] != 0:
                f = aug[r][col]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[piv_row])]
        pivots.append(col)
        piv_row += 1
    for r in range(piv_row, len(aug)):
        if aug[r][n] != 0:
            return None
    if len(pivots) < n:
        return None
    sol = [Fraction(0)] * n
    for r, col in enumerate(pivots):
        sol[col] = aug[r][n]
    return sol


def minimize(terms: Sequence[int], max_order: int | None = None) -> LinearRecurrence:
    """Minimal-order integer recurrence consistent with every supplied term."""
    terms = [int(x) for x in terms]
    if len(terms) < 3:
        raise InsufficientTerms("need at least 3 terms")
    if all(x == 0 for x in terms):
        return LinearRecurrence((1,), (0,))
    limit = (len(terms) - 1) // 2
    if max_order is not None:
        if 2 * max_order + 1 > len(terms):
            raise InsufficientTerms(f"order {max_order} needs {2 * max_order + 1} terms")
        limit = max_order
    for t in range(1, limit + 1):
        rows, rhs = [], []
        for n in range(len(terms) - t):
            rows.append([terms[n + t - j] for j in range(1, t + 1)])
            rhs.append(terms[n + t])
        sol = _solve_overdetermined(rows, rhs)
        if sol is None or sol[-1] == 0:
            continue
        if any(c.denominator != 1 for c in sol):
            raise NotARecurrence(f"order-{t} fit has non-integer coefficients")
        return LinearRecurrence(tuple(int(c) for c in sol), tuple(terms[:t]))
    raise NotARecurrence(f"no recurrence of order <= {limit} fits {len(terms)} terms")


def minimal_recurrence(rec: LinearRecurrence) -> LinearRecurrence:
    """The minimal-order recurrence of the sequence generated by ``rec``."""
    t = rec.order
    terms = rec.eval_range(1, 2 * t + 2)
    return minimize(terms, max_order=t) if t >= 1 else rec


# --- degeneracy -------------------------------------------------------------------------


def ratio_polynomial(f: IntPolynomial) -> IntPolynomial:
    """Res_y(f(y), f(x y)), whose roots are all ratios beta_j / beta_i of roots of f.

    Computed by evaluating univariate subresultant resultants at x = 1..d^2+1
    and interpolating.
    """
    d = f.degree
    xs = list(range(1, d * d + 2))
    ys = [resultant(f, f.compose_scale(x0)) for x0 in xs]
    coeffs = interpolate(xs, ys)
    if any(c.denominator != 1 for c in coeffs):
        raise ArithmeticError("ratio resultant is not integral")
    return IntPolynomial(tuple(int(c) for c in coeffs))


def power_polynomial(f: IntPolynomial, L: int) -> IntPolynomial:
    """Res_y(f(y), x - y^L), whose roots are the L-th powers of the roots of f."""
    d = f.degree
    xs = list(range(0, d + 1))
    ys = []
    for x0 in xs:
        g = IntPolynomial((x0,) + (0,) * (L - 1) + (-1,))
        ys.append(resultant(f, g))
    coeffs = interpolate(xs, ys)
    return from_rational(coeffs)


def unity_ratio_lcm(f: IntPolynomial) -> int:
    """lcm of the orders of the roots of unity among ratios of distinct roots of f."""
    if f.coeffs[0] == 0:
        raise InvalidInput("f must have a nonzero constant term")
    g = squarefree_part(f)
    d = g.degree
    if d <= 1:
        return 1
    r = ratio_polynomial(g)
    # strip the d trivial ratios beta_i / beta_i = 1
    r = exact_quotient(r, IntPolynomial((-1, 1)) ** d)
    L = 1
    D = r.degree
    for m in range(1, 2 * D * D + 1):
        if euler_phi(m) > D:
            continue
        if cyclotomic(m).divides(r):
            L = L * m // math.gcd(L, m)
    return L


def _is_cyclotomic_product(f: IntPolynomial) -> bool:
    """True iff every root of squarefree f is a root of unity."""
    g = squarefree_part(f)
    for m in cyclotomic_orders(g):
        g = exact_quotient(g, cyclotomic(m))
    return g.degree == 0


def product_polynomial(f: IntPolynomial) -> IntPolynomial:
    """Monic polynomial with roots beta_i * beta_j over all ordered pairs."""
    d = f.degree
    p = power_sums(f, d * d)
    sums = [x * x for x in p]
    return from_rational(from_power_sums(sums, d * d))


def _sqrt_bounds(a: Fraction, k: int):
    scale = 1 << (2 * k)
    lo = Fraction(math.isqrt(math.floor(a * scale)), 1 << k)
    hi = Fraction(math.isqrt(math.ceil(a * scale)) + 1, 1 << k)
    return lo, hi


def dominant_modulus(f: IntPolynomial, width_bits: int = 32) -> RationalInterval:
    """Certified enclosure of max |root| of f.

    M^2 is the largest real root of the polynomial whose roots are the pairwise
    products of roots of f; it is isolated with Sturm sequences.
    """
    G = squarefree_part(product_polynomial(f))
    roots = isolate_real_roots(G)
    lo, hi = roots[-1]
    target = Fraction(1, 1 << (width_bits + 8))
    s_hi = G.sign_at(hi)
    if s_hi == 0:
        lo = hi
    while hi - lo > target:
        mid = (lo + hi) / 2
        sm = G.sign_at(mid)
        if sm == 0:
            lo = hi = mid
            break
        if sm == s_hi:
            hi = mid
        else:
            lo = mid
    k = width_bits + 8
    m_lo, _ = _sqrt_bounds(lo, k)
    _, m_hi = _sqrt_bounds(hi, k)
    return RationalInterval(m_lo, m_hi)


def graeffe_step(f: IntPolynomial) -> IntPolynomial:
    """Polynomial whose roots are the squares of the roots of f."""
    d = f.degree
    even = IntPolynomial(f.coeffs[0::2])
    odd = IntPolynomial(f.coeffs[1::2])
    g = even * even - IntPolynomial((0, 1)) * odd * odd
    return g if d % 2 == 0 else -g


# --- decomposition and classification -----------------------------------------------------


class BranchTag(str, Enum):
    IDENTICALLY_ZERO = "IdenticallyZero"
    NON_DEGENERATE = "NonDegenerate"


@dataclass(frozen=True)
class Branch:
    """The subsequence n -> u_{nL + residue} for n >= start.

    Term j (1-based) of ``rec`` is u_{(start + j - 1) L + residue}.
    """

    residue: int
    start: int
    L: int
    rec: LinearRecurrence
    tag: BranchTag
    root_polynomial: IntPolynomial
    polynomial_sequence: bool
    admissible: bool

    def value(self, n: int) -> int:
        return self.rec.term(n - self.start + 1)

    def to_json(self) -> dict:
        return {
            "residue": self.residue,
            "start": self.start,
            "rec": self.rec.to_json(),
            "tag": self.tag.value,
            "root_polynomial": self.root_polynomial.to_json(),
            "polynomial_sequence": self.polynomial_sequence,
            "admissible": self.admissible,
        }


def _is_polynomial_poly(f: IntPolynomial) -> bool:
    return f == (IntPolynomial((-1, 1)) ** f.degree)


def decompose(rec: LinearRecurrence, L: int | None = None) -> list:
    minimal = minimal_recurrence(rec)
    f = minimal.charpoly
    if L is None:
        L = unity_ratio_lcm(f)
    t = minimal.order
    fL = squarefree_part(power_polynomial(f, L)) if L > 1 else squarefree_part(f)
    branches = []
    for m in range(L):
        start = 1 if m == 0 else 0
        count = 2 * t + 4
        idx = [(start + j) * L + m for j in range(count)]
        values = rec.eval_range(1, idx[-1])
        w = [values[i - 1] for i in idx]
        sub = minimize(w, max_order=t)
        if all(v == 0 for v in w):
            tag = BranchTag.IDENTICALLY_ZERO
            poly_seq, adm = False, False
        else:
            tag = BranchTag.NON_DEGENERATE
            cp = sub.charpoly
            poly_seq = _is_polynomial_poly(cp)
            adm = not _is_cyclotomic_product(cp)
        branches.append(Branch(m, start, L, sub, tag, fL, poly_seq, adm))
    return branches


def interleave(branches: Sequence[Branch], n1: int) -> list:
    """Reassemble u_1..u_{n1} from the branches of a decomposition."""
    L = branches[0].L
    out = []
    for N in range(1, n1 + 1):
        n, m = divmod(N, L)
        out.append(branches[m].value(n))
    return out


@dataclass(frozen=True)
class RecurrenceClassification:
    degenerate: bool
    L: int
    polynomial_sequence: bool
    admissible: bool
    dominant_modulus: RationalInterval
    minimal: LinearRecurrence
    branch_admissible: tuple = ()

    def to_json(self) -> dict:
        M = self.dominant_modulus
        return {
            "degenerate": self.degenerate,
            "L": self.L,
            "polynomial_sequence": self.polynomial_sequence,
            "admissible": self.admissible,
            "dominant_modulus": {"lo": frac_str(M.lo), "hi": frac_str(M.hi)},
            "minimal": self.minimal.to_json(),
            "branch_admissible": list(self.branch_admissible),
        }


def classify(rec: LinearRecurrence) -> RecurrenceClassification:
    minimal = minimal_recurrence(rec)
    f = minimal.charpoly
    L = unity_ratio_lcm(f)
    poly_seq = _is_polynomial_poly(f)
    admissible = (L == 1) and not _is_cyclotomic_product(f)
    M = dominant_modulus(f)
    if L > 1:
        branch_adm = tuple(b.admissible for b in decompose(rec, L))
    else:
        branch_adm = (admissible,)
    return RecurrenceClassification(L > 1, L, poly_seq, admissible, M, minimal, branch_adm)


# --- convenience constructors ---------------------------------------------------------------


def fibonacci() -> LinearRecurrence:
    return LinearRecurrence((1, 1), (1, 1))


def identity_sequence() -> LinearRecurrence:
    """u_n = n."""
    return LinearRecurrence((2, -1), (1, 2))


def from_charpoly(f: IntPolynomial, init: Sequence[int]) -> LinearRecurrence:
    if not f.is_monic():
        raise InvalidInput("characteristic polynomial must be monic")
    d = f.degree
    return LinearRecurrence(tuple(-f.coeffs[d - i] for i in range(1, d + 1)), tuple(init))
