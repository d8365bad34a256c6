"""Desk-scale experiment scans producing ExperimentRecord rows.

Every scan is deterministic: given the same inputs it yields the same
records in index order, whatever the number of worker processes.
"""

from __future__ import annotations

import csv
import io
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Callable, Sequence

from .algebraic import (
    DEFAULT_CAP_BITS,
    AlgebraicReal,
    PowerThreshold,
    RationalInterval,
    Verdict,
    enclose_affine,
    make_algebraic,
    nearest_distance,
    trace_power_sums,
)
from .cfrac import ContinuedFractionExpansion, expand
from .digits import digit_stats, lowdc_divisor_max, sparse_divisor_max, zeckendorf
from .errors import HypothesisViolation, InvalidInput
from .poly import IntPolynomial, discriminant, isolate_real_roots
from .recurrence import LinearRecurrence, classify, decompose
from .smooth import PrimeSet, s_part
from .util import dumps, frac_str, log2_fixed, log_ratio


class Outcome(str, Enum):
    HOLDS = "Holds"
    VIOLATES = "Violates"
    UNDECIDED = "Undecided"
    SKIPPED = "Skipped"


@dataclass(frozen=True)
class ExperimentRecord:
    experiment: str
    index: int
    verdict: Outcome
    values: dict = field(default_factory=dict)
    ratios: dict = field(default_factory=dict)
    precision: int | None = None
    note: str = ""

    def to_json(self) -> dict:
        d = {
            "experiment": self.experiment,
            "index": self.index,
            "verdict": self.verdict.value,
            "values": {k: str(v) for k, v in self.values.items()},
            "ratios": {k: frac_str(v) if isinstance(v, Fraction) else str(v)
                       for k, v in self.ratios.items()},
            "precision": self.precision,
        }
        if self.note:
            d["note"] = self.note
        return d


def to_jsonl(records: Sequence[ExperimentRecord]) -> str:
    return "".join(dumps(r.to_json()) + "\n" for r in records)


def _log10_str(s: str) -> str:
    """Lossy rendering of an exact decimal or n/d string."""
    try:
        x = Fraction(s)
    except (ValueError, ZeroDivisionError):
        return s
    if x == 0:
        return "0"
    sign = "-" if x < 0 else ""
    x = abs(x)
    if x.denominator == 1 and x.numerator < 10**15:
        return sign + str(x.numerator)
    l2 = (log2_fixed(x.numerator, 32) - log2_fixed(x.denominator, 32)) / (1 << 32)
    return f"{sign}10^{l2 * math.log10(2):.6f}"


def to_csv(records: Sequence[ExperimentRecord]) -> str:
    """Convenience view: big values and ratios become log10 renderings."""
    vkeys = sorted({k for r in records for k in r.values})
    rkeys = sorted({k for r in records for k in r.ratios})
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["experiment", "index", "verdict", "precision"] + vkeys + rkeys)
    for r in records:
        j = r.to_json()
        w.writerow([r.experiment, r.index, r.verdict.value, r.precision]
                   + [_log10_str(j["values"].get(k, "")) if k in j["values"] else "" for k in vkeys]
                   + [j["ratios"].get(k, "") for k in rkeys])
    return buf.getvalue()


def _run_indexed(func: Callable, ctx, indices: Sequence[int], jobs: int) -> list:
    """func(ctx, i) for every i; chunks go to worker processes when jobs > 1."""
    indices = list(indices)
    if jobs <= 1 or len(indices) < 2:
        return [func(ctx, i) for i in indices]
    size = max(1, math.ceil(len(indices) / jobs))
    chunks = [indices[i : i + size] for i in range(0, len(indices), size)]
    with ProcessPoolExecutor(max_workers=jobs) as ex:
        parts = list(ex.map(_run_chunk, [(func, ctx, c) for c in chunks]))
    out = [r for part in parts for r in part]
    out.sort(key=lambda r: r.index)
    return out


def _run_chunk(arg):
    func, ctx, chunk = arg
    return [func(ctx, i) for i in chunk]


def _exponent(num: int, den: int) -> Fraction | None:
    """log num / log den to 64 bits, or None when undefined."""
    if num < 1 or den < 2:
        return None
    return log_ratio(num, den)


def _cfe(xi: AlgebraicReal, K: int, cap_bits: int, cache_dir: str | None) -> ContinuedFractionExpansion:
    return expand(xi, K, cap_bits=cap_bits, cache_dir=cache_dir)


# --- ||u_n xi|| against |u_n|^-(1/(d-1)+eps) ---------------------------------


@dataclass(frozen=True)
class _ApproxCtx:
    xi: AlgebraicReal
    values: tuple
    exponent: Fraction
    cap: int
    gated: tuple  # residues (mod L) to skip
    L: int


def _approx_one(ctx: _ApproxCtx, n: int) -> ExperimentRecord:
    u = ctx.values[n - 1]
    if (n % ctx.L) in ctx.gated:
        return ExperimentRecord("approx", n, Outcome.SKIPPED, {"u": u},
                                note="branch is not admissible")
    if u == 0:
        return ExperimentRecord("approx", n, Outcome.SKIPPED, {"u": 0}, note="u_n = 0")
    thr = PowerThreshold(abs(u), ctx.exponent)
    cd = nearest_distance(u, ctx.xi, thr, bits_cap=ctx.cap)
    outcome = {Verdict.LESS: Outcome.VIOLATES, Verdict.GREATER: Outcome.HOLDS}.get(
        cd.verdict, Outcome.UNDECIDED)
    ratios = {}
    hi = cd.enclosure.hi
    if hi > 0 and abs(u) >= 2:
        e = _exponent(hi.denominator, abs(u))
        f = _exponent(hi.numerator, abs(u)) if hi.numerator > 1 else Fraction(0)
        ratios["exponent_lower"] = e - f
    return ExperimentRecord("approx", n, outcome, {"u": u}, ratios, cd.precision_bits)


def approx_violation_scan(
    xi: AlgebraicReal,
    rec: LinearRecurrence,
    eps: Fraction,
    n_max: int,
    cap_bits: int = 1 << 16,
    jobs: int = 1,
) -> list:
    """Violates means ||u_n xi|| < |u_n|^-(1/(d-1)+eps) was certified."""
    d = xi.degree
    if d < 2:
        raise InvalidInput("xi must have degree >= 2")
    cls = classify(rec)
    if cls.polynomial_sequence or (cls.L == 1 and not cls.admissible):
        return [ExperimentRecord("approx", 0, Outcome.SKIPPED,
                                 note="recurrence is a polynomial sequence or not admissible")]
    gated = ()
    if cls.L > 1:
        gated = tuple(b.residue for b in decompose(rec, cls.L) if not b.admissible)
    exponent = Fraction(1, d - 1) + Fraction(eps)
    ctx = _ApproxCtx(xi, tuple(rec.eval_range(1, n_max)), exponent, cap_bits, gated, cls.L)
    return _run_indexed(_approx_one, ctx, range(1, n_max + 1), jobs)


def violation_set(records: Sequence[ExperimentRecord]) -> list:
    return [r.index for r in records if r.verdict is Outcome.VIOLATES]


# --- sharpness of the exponent 1/(d-1) for cubic units -------------------------------------


def _sqrt_interval(n: int, k: int) -> tuple:
    r = math.isqrt(n << (2 * k))
    return Fraction(r, 1 << k), Fraction(r + 1, 1 << k)


def sharpness_setup(f: IntPolynomial) -> AlgebraicReal:
    """The real root of a monic cubic unit with a complex pair, checked to exceed 1."""
    if f.degree != 3 or not f.is_monic():
        raise HypothesisViolation("need a monic cubic")
    if abs(f.coeffs[0]) != 1:
        raise HypothesisViolation("constant term must be +-1 (a unit)")
    if discriminant(f) >= 0:
        raise HypothesisViolation("discriminant must be negative (complex pair)")
    roots = isolate_real_roots(f)
    if len(roots) != 1:
        raise HypothesisViolation("expected exactly one real root")
    lo, hi = roots[0]
    xi = make_algebraic(f.coeffs, RationalInterval(lo, hi))
    if not enclose_affine(xi, 1, Fraction(0), 16).lo > 1:
        if not enclose_affine(xi, -1, Fraction(0), 16).lo > 1:
            raise HypothesisViolation("real root must have modulus > 1")
    return xi


def sharpness_scan(
    f: IntPolynomial, n_lo: int, n_hi: int, cap_bits: int = 1 << 16, rel_bits: int = 40
) -> list:
    """R_n = |u_n xi - u_{n+1}| * |u_n|^(1/2) as certified enclosures.

    An index is Holds once R_n is enclosed to relative width 2^-rel_bits,
    Undecided if the cap is reached first. A final summary record compares
    the upper half of the range with the lower one (max over the top half
    at most twice the max over the bottom half).
    """
    xi = sharpness_setup(f)
    u = trace_power_sums(f, n_hi + 1)
    records = []
    encl = {}
    for n in range(n_lo, n_hi + 1):
        un, un1 = u[n], u[n + 1]
        bits = 64 + 2 * abs(un).bit_length() // 3 + rel_bits
        res = None
        used = bits
        while bits <= cap_bits:
            e = enclose_affine(xi, un, Fraction(-un1), bits)
            used = bits
            if e.lo > 0 or e.hi < 0:
                dlo, dhi = (e.lo, e.hi) if e.lo > 0 else (-e.hi, -e.lo)
                slo, shi = _sqrt_interval(abs(un), rel_bits + 8)
                rlo, rhi = dlo * slo, dhi * shi
                if (rhi - rlo) * (1 << rel_bits) <= rlo:
                    res = (rlo, rhi)
                    break
            bits *= 2
        if res is None:
            records.append(ExperimentRecord("sharpness", n, Outcome.UNDECIDED, {"u": un}, {}, used))
            continue
        encl[n] = res
        records.append(ExperimentRecord(
            "sharpness", n, Outcome.HOLDS, {"u": un},
            {"R_lo": _round_down(res[0]), "R_hi": _round_up(res[1])}, used))
    mid = (n_lo + n_hi) // 2
    records.append(sharpness_summary(encl, (n_lo, min(n_lo + 40, mid)), (mid, n_hi)))
    return records


def sharpness_summary(encl: dict, low: tuple, high: tuple) -> ExperimentRecord:
    lows = [encl[n] for n in range(low[0], low[1] + 1) if n in encl]
    highs = [encl[n] for n in range(high[0], high[1] + 1) if n in encl]
    if not lows or not highs:
        return ExperimentRecord("sharpness_summary", -1, Outcome.UNDECIDED, note="missing data")
    low_max_lo = max(r[0] for r in lows)
    low_max_hi = max(r[1] for r in lows)
    high_max_hi = max(r[1] for r in highs)
    high_max_lo = max(r[0] for r in highs)
    if high_max_hi <= 2 * low_max_lo:
        v = Outcome.HOLDS
    elif high_max_lo > 2 * low_max_hi:
        v = Outcome.VIOLATES
    else:
        v = Outcome.UNDECIDED
    return ExperimentRecord(
        "sharpness_summary", -1, v, {},
        {"low_max": _round_down(low_max_lo), "high_max": _round_up(high_max_hi)},
        note=f"max R over {list(high)} vs 2 x max R over {list(low)}")


def _round_down(x: Fraction, bits: int = 48) -> Fraction:
    return Fraction(math.floor(x * (1 << bits)), 1 << bits)


def _round_up(x: Fraction, bits: int = 48) -> Fraction:
    return Fraction(math.ceil(x * (1 << bits)), 1 << bits)


# --- common values of u_n and q_k --------------------------------------


def intersect_scan(
    xi: AlgebraicReal,
    rec: LinearRecurrence,
    bound: int,
    n_max: int = 100000,
    cap_bits: int = DEFAULT_CAP_BITS,
    cache_dir: str | None = None,
) -> list:
    """Every (n, k) with u_n = q_k <= bound, tagged with the branch residue."""
    K = 16
    while True:
        cfe = _cfe(xi, K, cap_bits, cache_dir)
        if cfe.q[-1] > bound:
            break
        K *= 2
    qs = [(q, k) for k, q in enumerate(cfe.q) if q <= bound]
    cls = classify(rec)
    poly_branches = set()
    if cls.L > 1:
        poly_branches = {b.residue for b in decompose(rec, cls.L) if b.polynomial_sequence}
    elif cls.polynomial_sequence:
        poly_branches = {0}
    # generate u_n until |u_n| stays above the bound for a full window
    us = []
    window = 2 * rec.order + 16
    above = 0
    vals = rec.eval_range(1, min(n_max, 64))
    n = 0
    while n < n_max:
        if n >= len(vals):
            vals = rec.eval_range(1, min(n_max, 2 * len(vals)))
        v = vals[n]
        n += 1
        if abs(v) <= bound:
            us.append((v, n))
            above = 0
        else:
            above += 1
            if above >= window and not cls.polynomial_sequence:
                break
    us.sort()
    qs.sort()
    out = []
    i = j = 0
    while i < len(us) and j < len(qs):
        if us[i][0] < qs[j][0]:
            i += 1
        elif us[i][0] > qs[j][0]:
            j += 1
        else:
            val = us[i][0]
            i2 = i
            while i2 < len(us) and us[i2][0] == val:
                i2 += 1
            j2 = j
            while j2 < len(qs) and qs[j2][0] == val:
                j2 += 1
            for _, nn in us[i:i2]:
                for _, kk in qs[j:j2]:
                    res = nn % cls.L
                    flagged = res in poly_branches
                    out.append(ExperimentRecord(
                        "intersect", nn, Outcome.HOLDS, {"value": val, "k": kk, "residue": res},
                        note="polynomial branch" if flagged else ""))
            i, j = i2, j2
    out.sort(key=lambda r: (r.index, int(r.values["k"])))
    return out


# --- S-parts of q_{k-1} q_k q_{k+1} ------------------------------------


@dataclass(frozen=True)
class _SpartCtx:
    cfe: ContinuedFractionExpansion
    S: PrimeSet
    exponent: Fraction | None


def _spart_one(ctx: _SpartCtx, k: int) -> ExperimentRecord:
    q, a = ctx.cfe.q, ctx.cfe.a
    Q = q[k - 1] * q[k] * q[k + 1]
    part = s_part(Q, ctx.S).s_part
    dk = math.gcd(q[k - 1], q[k + 1])
    divides = a[k + 1] % dk == 0
    coprime = math.gcd(q[k - 1], q[k]) == 1
    values = {"Q": Q, "S_part": part, "d_k": dk, "a_next": a[k + 1]}
    ratios = {}
    e = _exponent(part, Q)
    if e is not None:
        ratios["exponent"] = e
    if not (divides and coprime):
        return ExperimentRecord("spart", k, Outcome.VIOLATES, values, ratios,
                                note="d_k does not divide a_{k+1} or consecutive q not coprime")
    if ctx.exponent is None:
        return ExperimentRecord("spart", k, Outcome.SKIPPED, values, ratios, note="report only")
    a_, b_ = ctx.exponent.numerator, ctx.exponent.denominator
    holds = part**b_ < Q**a_
    return ExperimentRecord("spart", k, Outcome.HOLDS if holds else Outcome.VIOLATES, values, ratios)


def spart_scan(
    xi: AlgebraicReal | ContinuedFractionExpansion,
    S: PrimeSet,
    mu: Fraction | None,
    eps: Fraction,
    k_max: int,
    cap_bits: int = DEFAULT_CAP_BITS,
    jobs: int = 1,
    cache_dir: str | None = None,
) -> list:
    """[Q_k]_S against Q_k^(mu/(mu+1)+eps) for 2 <= k <= k_max; mu None is report only."""
    if not len(S):
        raise InvalidInput("S must be nonempty")
    cfe = xi if isinstance(xi, ContinuedFractionExpansion) else _cfe(xi, k_max + 1, cap_bits, cache_dir)
    if cfe.terms < k_max + 1:
        raise InvalidInput("expansion too short for k_max")
    exponent = None if mu is None else Fraction(mu) / (Fraction(mu) + 1) + Fraction(eps)
    ctx = _SpartCtx(cfe.prefix(k_max + 1), S, exponent)
    return _run_indexed(_spart_one, ctx, range(2, k_max + 1), jobs)


# --- digit statistics of convergent denominators -----------------------------------------


def digit_growth_scan(
    xi: AlgebraicReal | ContinuedFractionExpansion,
    b: int,
    k_max: int,
    cap_bits: int = DEFAULT_CAP_BITS,
    cache_dir: str | None = None,
) -> list:
    """Per-k digit statistics of q_k, running minima and, for quadratic xi,
    the least C with L(q_k, b) > log k / (log log k + C) - 1 over the window."""
    if k_max < 10:
        raise InvalidInput("k_max must be >= 10")
    cfe = xi if isinstance(xi, ContinuedFractionExpansion) else _cfe(xi, k_max, cap_bits, cache_dir)
    src = cfe.source
    quadratic = src is not None and src.degree == 2
    records = []
    run_min = None
    c_emp = None
    for k in range(1, k_max + 1):
        q = cfe.q[k]
        ds = digit_stats(q, b)
        z = zeckendorf(q)
        run_min = ds.L if run_min is None else min(run_min, ds.L)
        ratios = {"running_min_L": run_min}
        if quadratic and k >= 16:
            c = math.log(k) / (ds.L + 1) - math.log(math.log(k))
            c_emp = c if c_emp is None else max(c_emp, c)
            ratios["empirical_C"] = _round_up(Fraction(c_emp), 32)
        records.append(ExperimentRecord(
            "digits", k, Outcome.HOLDS,
            {"q": q, "L": ds.L, "dc_all": ds.dc_all, "dc_s1": ds.dc_s1, "zeckendorf": z.count},
            ratios))
    return records


def window_min(records: Sequence[ExperimentRecord], key: str, lo: int, hi: int) -> int:
    return min(int(r.values[key]) for r in records if lo <= r.index <= hi)


# --- sparse divisors of q_k -----------------------------------------------


@dataclass(frozen=True)
class _DivCtx:
    cfe: ContinuedFractionExpansion
    b: int
    variant: str
    exponent: Fraction


def _divisor_one(ctx: _DivCtx, k: int) -> ExperimentRecord:
    q = ctx.cfe.q[k]
    if ctx.variant == "sparse1":
        delta, st = sparse_divisor_max(q, ctx.b, 1)
    else:
        delta, st = lowdc_divisor_max(q, ctx.b, 0)
    values = {"q": q, "delta": delta}
    ratios = {}
    e = _exponent(delta, q)
    if e is not None:
        ratios["exponent"] = e
    if q < 2:
        return ExperimentRecord("divisor", k, Outcome.SKIPPED, values, ratios, note="q_k < 2")
    a_, b_ = ctx.exponent.numerator, ctx.exponent.denominator
    holds = delta**b_ < q**a_
    return ExperimentRecord("divisor", k, Outcome.HOLDS if holds else Outcome.VIOLATES, values, ratios)


def divisor_exponent(variant: str, lam: Fraction, eps: Fraction) -> Fraction:
    if variant == "sparse1":
        k = 1
        return Fraction(k - lam, k) + eps
    if variant == "lowdc0":
        k = 0
        return Fraction(k + 2 - lam, k + 2) + eps
    raise InvalidInput(f"unknown variant {variant!r}")


def divisor_bound_scan(
    xi: AlgebraicReal | ContinuedFractionExpansion,
    b: int,
    variant: str,
    lam: Fraction,
    eps: Fraction,
    k_max: int,
    cap_bits: int = DEFAULT_CAP_BITS,
    jobs: int = 1,
    cache_dir: str | None = None,
) -> list:
    exponent = divisor_exponent(variant, Fraction(lam), Fraction(eps))
    cfe = xi if isinstance(xi, ContinuedFractionExpansion) else _cfe(xi, k_max, cap_bits, cache_dir)
    ctx = _DivCtx(cfe.prefix(k_max), b, variant, exponent)
    return _run_indexed(_divisor_one, ctx, range(1, k_max + 1), jobs)


def confined_prefix(records: Sequence[ExperimentRecord]) -> int:
    """1 + the largest violating index (0 when there is none)."""
    v = violation_set(records)
    return max(v) + 1 if v else 0


def sharpness_enclosures(records: Sequence[ExperimentRecord]) -> dict:
    """n -> (R_lo, R_hi) for every certified sharpness record."""
    return {r.index: (Fraction(r.ratios["R_lo"]), Fraction(r.ratios["R_hi"]))
            for r in records if r.experiment == "sharpness" and r.verdict is Outcome.HOLDS}
