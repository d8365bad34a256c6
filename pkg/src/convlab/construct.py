"""Constructions of numbers with structured convergents.

``em_build`` produces theta = sum a_i / t^(3^i) (t the product of T) whose
truncations at the stage indices s(1) < s(2) < ... have S-smooth numerators;
``alternating_build`` produces convergent denominators alternating between
pure powers of 2 and 3.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import (
    ConstructionTooLarge,
    InvalidInput,
    StageSelectionExhausted,
    VerificationFailure,
)
from .smooth import PrimeSet, multiplicative_order_prime_power, s_part, smooth_next

FORMAT_VERSION = 1
LCG_MUL = 6364136223846793005
LCG_INC = 1442695040888963407
MASK64 = (1 << 64) - 1
DEFAULT_STAGE_BITS = 1 << 23
DEFAULT_STAGE_ATTEMPTS = 32
DECIMAL_LIMIT_BITS = 12000


def int_to_json(n: int) -> str:
    """Decimal below DECIMAL_LIMIT_BITS, else 0x-prefixed hex (int->str is quadratic)."""
    if abs(n).bit_length() <= DECIMAL_LIMIT_BITS:
        return str(n)
    return hex(n)


def int_from_json(s: str) -> int:
    s = s.strip()
    neg = s.startswith("-")
    body = s[1:] if neg else s
    v = int(body, 16) if body.lower().startswith("0x") else int(body)
    return -v if neg else v


def free_digits(seed: int, count: int) -> list:
    """a_1..a_count in {1, 2}; the generator advances once per index."""
    state = seed & MASK64
    out = []
    for _ in range(count):
        state = (state * LCG_MUL + LCG_INC) & MASK64
        out.append(1 + (state >> 63))
    return out


@dataclass(frozen=True)
class EMConfig:
    S: PrimeSet
    T: PrimeSet = PrimeSet((5,))
    depth: int = 1
    seed: int = 0
    max_stage_bits: int = DEFAULT_STAGE_BITS
    stage_attempts: int = DEFAULT_STAGE_ATTEMPTS

    def __post_init__(self):
        if len(self.S) < 2:
            raise InvalidInput("S needs at least two primes")
        if not len(self.T):
            raise InvalidInput("T must be nonempty")
        if not self.S.isdisjoint(self.T):
            raise InvalidInput("S and T must be disjoint")
        if self.depth < 1:
            raise InvalidInput("depth must be >= 1")
        if not 0 <= self.seed <= MASK64:
            raise InvalidInput("seed must be an unsigned 64-bit integer")

    @property
    def t(self) -> int:
        return self.T.product

    def to_json(self) -> dict:
        return {
            "s_primes": list(self.S.primes),
            "t_primes": list(self.T.primes),
            "depth": self.depth,
            "seed": str(self.seed),
        }

    @classmethod
    def from_json(cls, d: dict) -> "EMConfig":
        return cls(PrimeSet(tuple(d["s_primes"])), PrimeSet(tuple(d["t_primes"])),
                   int(d["depth"]), int(d["seed"]))


@dataclass(frozen=True)
class EMStage:
    """One stage: sum_{i <= index} a_i / t^(3^index) = u / v with v = t^(3^index)."""

    index: int
    a: int
    u: int
    exponents: tuple
    checks: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "index": self.index,
            "a": int_to_json(self.a),
            "u": int_to_json(self.u),
            "u_exponents": list(self.exponents),
            "v_exponent": str(3**self.index),
            "checks": dict(self.checks),
        }

    @classmethod
    def from_json(cls, d: dict) -> "EMStage":
        return cls(int(d["index"]), int_from_json(d["a"]), int_from_json(d["u"]),
                   tuple(int(e) for e in d["u_exponents"]), dict(d.get("checks", {})))


@dataclass(frozen=True)
class EMWitness:
    config: EMConfig
    stages: tuple
    digits: tuple  # a_1..a_{s(depth)}; stage positions hold the stage digit
    attempts: tuple = ()

    @property
    def indices(self) -> tuple:
        return tuple(st.index for st in self.stages)

    def to_json(self) -> dict:
        stage_idx = set(self.indices)
        return {
            "format_version": FORMAT_VERSION,
            "config": self.config.to_json(),
            "stages": [st.to_json() for st in self.stages],
            "free_digits": [None if i + 1 in stage_idx else d for i, d in enumerate(self.digits)],
            "attempts": [list(a) for a in self.attempts],
        }

    @classmethod
    def from_json(cls, d: dict) -> "EMWitness":
        if d.get("format_version") != FORMAT_VERSION:
            raise InvalidInput(f"unsupported witness format {d.get('format_version')}")
        cfg = EMConfig.from_json(d["config"])
        stages = tuple(EMStage.from_json(s) for s in d["stages"])
        by_index = {st.index: st.a for st in stages}
        digits = tuple(by_index.get(i + 1, x) if x is None else int(x)
                       for i, x in enumerate(d["free_digits"]))
        return cls(cfg, stages, digits, tuple(tuple(a) for a in d.get("attempts", ())))


def _smooth_value(S: PrimeSet, exps) -> int:
    return math.prod(p**e for p, e in zip(S.primes, exps))


def em_build(cfg: EMConfig) -> EMWitness:
    t = cfg.t
    log2t = math.log2(t)
    S = cfg.S
    a1 = 1
    stages = [EMStage(1, a1, a1, s_part(a1, S).exponents)]
    digits = [a1]
    prefix = a1  # numerator of sum_{i <= len(digits)} a_i / t^(3^i) over t^(3^len)
    attempts = []
    while len(stages) < cfg.depth:
        prev = stages[-1].index
        found = False
        for cand in range(prev + 2, prev + 2 + cfg.stage_attempts):
            if 3**cand * log2t > cfg.max_stage_bits:
                raise StageSelectionExhausted(
                    f"stage {len(stages) + 1}: candidate index {cand} needs "
                    f"~{int(3**cand * log2t)} bits, above the cap {cfg.max_stage_bits}"
                )
            seeded = free_digits(cfg.seed, cand - 1)
            while len(digits) < cand - 1:
                i = len(digits) + 1
                digits.append(seeded[i - 1])
                prefix = prefix * t ** (2 * 3 ** (i - 1)) + digits[-1]
            m = prefix * t ** (2 * 3 ** (cand - 1))
            nxt = smooth_next(m, S)
            a = nxt.gamma - m
            ok = _property_ii(a, cand, prev, t)
            attempts.append((cand, ok))
            if ok:
                digits.append(a)
                prefix = nxt.gamma
                stages.append(EMStage(cand, a, nxt.gamma, nxt.exponents))
                found = True
                break
        if not found:
            raise StageSelectionExhausted(
                f"property (ii) failed for {cfg.stage_attempts} consecutive candidate stages"
            )
    w = EMWitness(cfg, tuple(stages), tuple(digits), tuple(attempts))
    report = em_verify(w)
    if not report.passed:
        failed = [f"{c.name}@{c.stage}" for c in report.checks if not c.passed]
        raise VerificationFailure(f"constructed witness fails {failed}")
    checked = []
    for st in w.stages:
        checks = {c.name: c.passed for c in report.checks if c.stage == st.index}
        checked.append(EMStage(st.index, st.a, st.u, st.exponents, checks))
    return EMWitness(cfg, tuple(checked), w.digits, w.attempts)


def _property_ii(a: int, index: int, prev_index: int, t: int) -> bool:
    """a / t^(3^index) < 1 / t^(3^(prev_index + 1))."""
    e = 3**index - 3 ** (prev_index + 1)
    if e <= 0:
        return False
    if a.bit_length() > e * math.log2(t) + 2:
        return False
    return a < t**e


# --- verification ------------------------------------------------------------------------


@dataclass(frozen=True)
class Check:
    name: str
    stage: int
    passed: bool
    detail: str = ""


@dataclass(frozen=True)
class VerificationReport:
    checks: tuple

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def to_json(self) -> dict:
        return {
            "passed": self.passed,
            "checks": [{"name": c.name, "stage": c.stage, "passed": c.passed, "detail": c.detail}
                       for c in self.checks],
        }


_CUTOFF = 256


def _scaled_majorant(terms, E: int, t: int) -> Fraction:
    """Upper bound for sum coef * t^(E - e) over (coef, e) terms with e >= E.

    Terms with e - E beyond _CUTOFF are bounded by coef / t^_CUTOFF each.
    """
    total = Fraction(0)
    for coef, e in terms:
        d = e - E
        if d < 0:
            raise ArithmeticError("majorant term exceeds the scale")
        total += Fraction(coef, t ** min(d, _CUTOFF))
    return total


def _tail_terms(w: EMWitness, k: int):
    """(coef, e) pairs whose sum of coef / t^e bounds theta - u_{s(k)} / v_{s(k)}.

    Non-stage digits are at most 2, known later stages obey property (ii), and
    unconstructed stages are bounded the same way with the least admissible
    indices; geometric remainders are folded into a final doubled term.
    """
    idx = w.indices
    s = idx[k - 1]
    last = idx[-1]
    terms = []
    horizon = last + 3
    for i in range(s + 1, horizon + 1):
        terms.append((2, 3**i))
    # 2 sum_{i > horizon} t^(-3^i) <= 4 t^(-3^(horizon + 1))
    terms.append((4, 3 ** (horizon + 1)))
    for j in range(k, len(idx)):
        terms.append((1, 3 ** (idx[j - 1] + 1)))
    # unconstructed stages: s(j) >= last + 2 (j - depth), bound t^(-3^(s(j-1) + 1))
    terms.append((1, 3 ** (last + 1)))
    terms.append((2, 3 ** (last + 3)))
    return terms


def em_verify(w: EMWitness, cfg: EMConfig | None = None) -> VerificationReport:
    cfg = cfg or w.config
    S, t = cfg.S, cfg.t
    checks = []
    idx = w.indices
    structural = (
        len(idx) >= 1
        and idx[0] == 1
        and all(b > a + 1 for a, b in zip(idx, idx[1:]))
        and len(w.digits) == idx[-1]
    )
    checks.append(Check("stage_indices", 0, structural, f"indices {list(idx)}"))
    if not structural:
        return VerificationReport(tuple(checks))
    stage_set = set(idx)
    seeded = free_digits(cfg.seed, len(w.digits))
    free_ok = all(w.digits[i - 1] == seeded[i - 1] for i in range(1, len(w.digits) + 1)
                  if i not in stage_set)
    checks.append(Check("free_digits", 0, free_ok, "digits at non-stage indices match the seed"))
    checks.append(Check("a1", 1, w.digits[0] == 1, "a_1 = 1"))
    prefix = 0
    pos = 0
    for k, st in enumerate(w.stages, start=1):
        s = st.index
        while pos < s:
            pos += 1
            if pos > 1:
                prefix *= t ** (3**pos - 3 ** (pos - 1))
            prefix += w.digits[pos - 1]
        consistent = st.a == w.digits[s - 1] and st.u == prefix
        checks.append(Check("numerator", s, consistent, "u equals the digit sum over v"))
        smooth = st.u >= 1 and len(st.exponents) == len(S) and _smooth_value(S, st.exponents) == st.u
        if smooth and st.u.bit_length() <= 1 << 12:
            smooth = s_part(st.u, S).cofactor == 1
        checks.append(Check("smoothness", s, smooth, "u is S-smooth"))
        coprime = all(st.u % p != 0 for p in cfg.T.primes)
        checks.append(Check("coprime_T", s, coprime, "u is coprime to T"))
        if k >= 2:
            ok = st.a >= 1 and _property_ii(st.a, s, idx[k - 2], t)
            checks.append(Check("property_ii", s, ok, "a_s / v_s < 1 / t^(3^(s_prev+1))"))
        terms = _tail_terms(w, k)
        tail = _scaled_majorant(terms, 3 ** (s + 1), t)
        checks.append(Check("tail_bound", s, tail < 4, f"scaled tail {float(tail):.6f} < 4"))
        leg = 2 * _scaled_majorant(terms, 2 * 3**s, t)
        checks.append(Check("legendre", s, leg < 1, "tail < 1/(2 v^2)"))
    return VerificationReport(tuple(checks))


# --- alternating powers of 2 and 3 -----------------------------------------------------------


@dataclass(frozen=True)
class AltStep:
    """q_{k+1} = a q_k + q_{k-1} = prime^exponent."""

    prime: int
    exponent: int
    a: int
    a_literal: int
    literal_is_power: bool

    def to_json(self) -> dict:
        return {
            "prime": self.prime,
            "exponent": str(self.exponent),
            "a": int_to_json(self.a),
            "a_literal": int_to_json(self.a_literal),
            "literal_is_power": self.literal_is_power,
        }


@dataclass(frozen=True)
class AlternatingWitness:
    c0: int
    d0: int
    steps: tuple

    def denominators(self) -> list:
        """(prime, exponent) for every q, starting with 2^c0, 3^d0."""
        out = [(2, self.c0), (3, self.d0)]
        out.extend((st.prime, st.exponent) for st in self.steps)
        return out

    def q_values(self) -> list:
        return [p**e for p, e in self.denominators()]

    def to_json(self) -> dict:
        return {
            "format_version": FORMAT_VERSION,
            "c0": self.c0,
            "d0": self.d0,
            "steps": [st.to_json() for st in self.steps],
        }


DEFAULT_ALT_BITS = 1 << 21


def _is_pure_power(n: int, p: int) -> bool:
    if n < 1:
        return False
    r = s_part(n, (p,))
    return r.cofactor == 1


def alternating_build(c0: int, d0: int, steps: int, max_bits: int = DEFAULT_ALT_BITS) -> AlternatingWitness:
    """Denominators 2^c0, 3^d0, then alternating pure powers via least multiplicative orders."""
    if c0 < 0 or d0 < 0 or steps < 1:
        raise InvalidInput("need c0, d0 >= 0 and steps >= 1")
    prev = (2, c0)
    cur = (3, d0)
    out = []
    for _ in range(steps):
        p, e_prev = prev
        r, e_cur = cur
        order = multiplicative_order_prime_power(p, r, e_cur) if e_cur > 0 else 1
        e_new = e_prev + order
        if e_new > max_bits or e_new * math.log2(p) > max_bits:
            raise ConstructionTooLarge(
                f"next denominator {p}^e with e of {e_new.bit_length()} bits "
                f"exceeds the {max_bits}-bit cap"
            )
        q_prev, q_cur = p**e_prev, r**e_cur
        a_literal, rem = divmod(p**order - 1, q_cur)
        if rem:
            raise ArithmeticError("order does not annihilate the modulus")
        a = p**e_prev * a_literal
        q_new = a * q_cur + q_prev
        if q_new != p**e_new:
            raise ArithmeticError("alternating step is not a pure power")
        literal_power = _is_pure_power(a_literal * q_cur + q_prev, p)
        out.append(AltStep(p, e_new, a, a_literal, literal_power))
        prev, cur = cur, (p, e_new)
    return AlternatingWitness(c0, d0, tuple(out))


def verify_alternating(w: AlternatingWitness) -> bool:
    qs = w.denominators()
    vals = [p**e for p, e in qs]
    for k, st in enumerate(w.steps):
        q_prev, q_cur, q_new = vals[k], vals[k + 1], vals[k + 2]
        if st.a < 1 or st.a * q_cur + q_prev != q_new:
            return False
        if not _is_pure_power(q_new, st.prime) or st.prime == qs[k + 1][0]:
            return False
    return True
