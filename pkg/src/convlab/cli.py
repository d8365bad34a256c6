"""Command-line entry point ``convlab``.

Exit codes: 0 success, 2 invalid input, 3 precision exhausted,
4 verification failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import construct, harness
from .algebraic import DEFAULT_CAP_BITS, RationalInterval, make_algebraic
from .cfrac import QuadraticSurd, default_cache_dir, expand, expand_quadratic, period_matrix_trace
from .errors import ConvlabError, InvalidInput, VerificationFailure
from .poly import IntPolynomial
from .recurrence import LinearRecurrence, classify, fibonacci
from .smooth import PrimeSet, first_primes
from .util import dumps, write_atomic


def _ints(text: str) -> tuple:
    try:
        return tuple(int(x) for x in text.split(",") if x.strip())
    except ValueError as e:
        raise InvalidInput(f"bad integer list {text!r}") from e


def _frac(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as e:
        raise InvalidInput(f"bad rational {text!r}") from e


def _xi(args):
    return make_algebraic(_ints(args.minpoly), RationalInterval(_frac(args.iso_lo), _frac(args.iso_hi)))


def _emit(lines, out: str | None) -> None:
    text = "".join(lines)
    if out:
        write_atomic(out, text)
    else:
        sys.stdout.write(text)


def cmd_expand(args) -> int:
    x = _xi(args)
    cache = args.cache or default_cache_dir()
    cfe = expand(x, args.terms, cap_bits=args.precision_cap, cache_dir=cache)
    head = {"minpoly": x.minpoly.to_json(), "isolator": x.isolator.to_json(), "terms": cfe.terms,
            "trusted_irreducible": x.trusted_irreducible}
    _emit([dumps(head) + "\n"] + [dumps(r) + "\n" for r in cfe.to_records()], args.out)
    return 0


def cmd_quad(args) -> int:
    pcf = expand_quadratic(QuadraticSurd(args.p, args.q, args.d))
    rep = period_matrix_trace(pcf, args.check_window)
    out = {"r": pcf.r, "s": pcf.s, "a": [str(a) for a in pcf.a], "t": str(pcf.t),
           "identity_checked": rep.checked, "identity_holds": rep.holds}
    print(dumps(out))
    return 0 if rep.holds else 4


def cmd_classify(args) -> int:
    rec = LinearRecurrence(_ints(args.coeffs), _ints(args.init))
    print(dumps(classify(rec).to_json()))
    return 0


def cmd_scan(args) -> int:
    cache = args.cache or default_cache_dir()
    cap = args.precision_cap
    kind = args.kind
    if kind == "sharpness":
        f = IntPolynomial(_ints(args.minpoly))
        recs = harness.sharpness_scan(f, args.min_n, args.max_n, cap_bits=cap)
    else:
        xi = _xi(args)
        rec = LinearRecurrence(_ints(args.coeffs), _ints(args.init)) if args.coeffs else fibonacci()
        if kind == "approx":
            recs = harness.approx_violation_scan(xi, rec, _frac(args.epsilon), args.max_n, cap, args.jobs)
        elif kind == "intersect":
            recs = harness.intersect_scan(xi, rec, int(args.bound), cap_bits=cap, cache_dir=cache)
        elif kind == "spart":
            S = PrimeSet.parse(args.primes) if args.primes else PrimeSet(tuple(first_primes(25)))
            mu = None if args.mu == "none" else _frac(args.mu)
            recs = harness.spart_scan(xi, S, mu, _frac(args.epsilon), args.max_k, cap, args.jobs, cache)
        elif kind == "digits":
            recs = harness.digit_growth_scan(xi, args.base, args.max_k, cap, cache)
        elif kind == "divisor":
            recs = harness.divisor_bound_scan(xi, args.base, args.variant, _frac(args.lambda_),
                                              _frac(args.epsilon), args.max_k, cap, args.jobs, cache)
        else:  # pragma: no cover - argparse restricts choices
            raise InvalidInput(kind)
    text = harness.to_csv(recs) if args.csv else harness.to_jsonl(recs)
    _emit([text], args.out)
    return 0


def cmd_em_build(args) -> int:
    cfg = construct.EMConfig(PrimeSet.parse(args.s_primes), PrimeSet.parse(args.t_primes),
                             args.depth, args.seed)
    w = construct.em_build(cfg)
    text = json.dumps(w.to_json(), sort_keys=True, indent=1) + "\n"
    _emit([text], args.out)
    return 0


def cmd_em_verify(args) -> int:
    try:
        with open(args.witness) as fh:
            data = json.load(fh)
        w = construct.EMWitness.from_json(data)
    except (OSError, ValueError, KeyError, TypeError) as e:
        raise InvalidInput(f"cannot read witness: {e}") from e
    rep = construct.em_verify(w)
    print(dumps(rep.to_json()))
    if not rep.passed:
        raise VerificationFailure("witness failed verification")
    return 0


def cmd_alt_build(args) -> int:
    w = construct.alternating_build(args.c0, args.d0, args.steps)
    if not construct.verify_alternating(w):
        raise VerificationFailure("alternating witness failed its own check")
    print(json.dumps(w.to_json(), sort_keys=True))
    return 0


def _add_xi(p, required=True):
    p.add_argument("--minpoly", default="-2,0,0,1", help="coefficients, constant term first")
    p.add_argument("--iso-lo", default="1")
    p.add_argument("--iso-hi", default="2")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="convlab", description="Continued fractions, recurrences and convergent experiments.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("expand", help="certified continued fraction of a real algebraic number")
    _add_xi(p)
    p.add_argument("--terms", type=int, required=True)
    p.add_argument("--cache", default=None)
    p.add_argument("--precision-cap", type=int, default=DEFAULT_CAP_BITS)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_expand)

    p = sub.add_parser("quad", help="periodic expansion of (P + sqrt D) / Q")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--check-window", type=int, default=200)
    p.set_defaults(func=cmd_quad)

    p = sub.add_parser("classify", help="degeneracy and admissibility of a recurrence")
    p.add_argument("--coeffs", required=True)
    p.add_argument("--init", required=True)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("scan", help="experiment scans (JSON lines)")
    p.add_argument("kind", choices=["approx", "sharpness", "intersect", "spart", "digits", "divisor"])
    _add_xi(p)
    p.add_argument("--coeffs", default=None, help="recurrence coefficients (default Fibonacci)")
    p.add_argument("--init", default=None)
    p.add_argument("--epsilon", default="1/10")
    p.add_argument("--lambda", dest="lambda_", default="1")
    p.add_argument("--mu", default="2", help="rational, or 'none' for report-only")
    p.add_argument("--base", type=int, default=10)
    p.add_argument("--primes", default=None, help="S as a comma list (default: first 25 primes)")
    p.add_argument("--max-k", type=int, default=300)
    p.add_argument("--max-n", type=int, default=400)
    p.add_argument("--min-n", type=int, default=10)
    p.add_argument("--bound", default=str(10**40))
    p.add_argument("--variant", choices=["sparse1", "lowdc0"], default="sparse1")
    p.add_argument("--out", default=None)
    p.add_argument("--csv", action="store_true")
    p.add_argument("--precision-cap", type=int, default=1 << 16)
    p.add_argument("--seed", type=int, default=0, help="accepted for reproducibility records")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--cache", default=None)
    p.set_defaults(func=cmd_scan)

    em = sub.add_parser("em", help="S-smooth convergent numerator construction")
    emsub = em.add_subparsers(dest="em_command", required=True)
    p = emsub.add_parser("build")
    p.add_argument("--s-primes", default="2,3")
    p.add_argument("--t-primes", default="5")
    p.add_argument("--depth", type=int, default=2)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_em_build)
    p = emsub.add_parser("verify")
    p.add_argument("--witness", required=True)
    p.set_defaults(func=cmd_em_verify)

    alt = sub.add_parser("alt", help="denominators alternating between powers of 2 and 3")
    altsub = alt.add_subparsers(dest="alt_command", required=True)
    p = altsub.add_parser("build")
    p.add_argument("--c0", type=int, default=1)
    p.add_argument("--d0", type=int, default=1)
    p.add_argument("--steps", type=int, required=True)
    p.set_defaults(func=cmd_alt_build)
    return ap


# flags whose values may start with "-" (signed lists and rationals)
_SIGNED_FLAGS = {"--minpoly", "--coeffs", "--init", "--iso-lo", "--iso-hi", "--epsilon",
                 "--lambda", "--mu", "--p", "--q"}


def _join_signed(argv):
    out = []
    it = iter(argv)
    for tok in it:
        if tok in _SIGNED_FLAGS:
            nxt = next(it, None)
            out.append(tok if nxt is None else f"{tok}={nxt}")
        else:
            out.append(tok)
    return out


def main(argv=None) -> int:
    if hasattr(sys, "set_int_max_str_digits"):
        sys.set_int_max_str_digits(0)
    argv = sys.argv[1:] if argv is None else list(argv)
    args = build_parser().parse_args(_join_signed(argv))
    try:
        return args.func(args)
    except ConvlabError as e:
        print(f"convlab: {type(e).__name__}: {e}", file=sys.stderr)
        return e.exit_code
    except (ValueError, ZeroDivisionError) as e:
        print(f"convlab: invalid input: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
