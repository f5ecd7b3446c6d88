"""Command-line interface.

Subcommands:
  check    brute-force permutation test of one polynomial
  certify  run every applicable criterion on a structured form
  search   census over all fields up to a bound, cross-checked row by row
  lucas    generalized Lucas numbers, exact and mod p
  aw       periodicity certificate for binomials in normal form

Exit codes: 0 success; 1 cross-validation inconsistency (census row or
certify disagreement with brute force); 2 usage or parameter error.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from typing import Any, Optional

import numpy as np

from .gf import FieldDesc, divisors, parse_field_spec, subfield, tables
from .poly import Poly, format_poly, parse_poly
from .permcheck import (CriterionResult, CyclotomicForm,
                        cyclotomic_values_from_mu, is_permutation_bruteforce,
                        is_permutation_values, permutes_subgroup_values,
                        uniform_power_criterion)
from .criteria import (BinomialForm, binomial_criterion, multiterm_criterion,
                       neg_inner_values, subfield_neg_criterion,
                       subfield_pos_criterion)
from .lucas import lucas_exact, lucas_mod_p, lucas_period_criterion, \
    period_implies_binomial
from .census import run_census, write_csv, write_jsonl

EXIT_OK = 0
EXIT_INCONSISTENT = 1
EXIT_USAGE = 2


def _parse_scalar(field: FieldDesc, text: str) -> int:
    """A field element given in coefficient grammar (e.g. '5' or 'B3')."""
    p = parse_poly(text, field)
    if p.degree > 0:
        raise ValueError(f"expected a constant, got {text!r}")
    return 0 if p.is_zero() else p.coeffs[0]


def _emit(obj: Any) -> None:
    json.dump(obj, sys.stdout, separators=(", ", ": "))
    sys.stdout.write("\n")


# ---------------------------------------------------------------------------
# check
# ---------------------------------------------------------------------------

def _cmd_check(args: argparse.Namespace) -> int:
    field = parse_field_spec(args.field)
    f = parse_poly(args.poly, field)
    permutes = is_permutation_bruteforce(field, f)
    _emit({"q": field.q, "poly": format_poly(f), "permutes": permutes})
    return EXIT_OK


# ---------------------------------------------------------------------------
# certify
# ---------------------------------------------------------------------------

def _subgroup_result(field: FieldDesc, r: int, d: int,
                     h_mu) -> CriterionResult:
    s = (field.q - 1) // d
    ok = math.gcd(r, s) == 1 and permutes_subgroup_values(field, r, d, h_mu)
    return CriterionResult(criterion="subgroup", q=field.q,
                           params={"r": r, "d": d, "s": s},
                           hypothesis_ok=True, verdict=ok)


def _certify_binomial(field: FieldDesc, args) -> tuple[list, bool]:
    if args.u is None or args.r is None:
        raise ValueError("binomial form needs --u and --r")
    a_code = _parse_scalar(field, args.a) if args.a is not None else 1
    form = BinomialForm.for_field(field, args.u, args.r, a_code)
    tt = tables(field)
    h_mu = tt.add(tt.pow(tt.mu_codes(form.d), form.e),
                  np.full(form.d, a_code, dtype=np.int64))
    brute = form.is_permutation(field)
    results = [_subgroup_result(field, form.r, form.d, h_mu),
               uniform_power_criterion(
                   field, form.r, form.d,
                   Poly(field, [a_code] + [0] * (form.e - 1) + [1])),
               binomial_criterion(field, form),
               multiterm_criterion(field, form.r, form.e, form.d, 1,
                                   Poly(field, [1]), a_code)]
    if (a_code == 1 and form.d % 2 == 1 and math.gcd(form.r, form.s) == 1
            and math.gcd(form.e, form.d) == 1):
        results.append(lucas_period_criterion(field, form.d, form.r, form.e))
    return results, brute


def _certify_cyclotomic(field: FieldDesc, args) -> tuple[list, bool]:
    if args.r is None or args.d is None or args.h is None:
        raise ValueError("cyclotomic form needs --r, --d and --h")
    coeff_handle = (subfield(field, int(args.coeff_field))
                    if args.coeff_field else None)
    h = parse_poly(args.h, field, coeff_handle)
    form = CyclotomicForm.for_field(field, args.r, args.d, h)
    tt = tables(field)
    h_mu = tt.eval_terms_at(form.h.terms(), tt.mu_codes(form.d))
    brute = form.is_permutation(field)
    results = [_subgroup_result(field, form.r, form.d, h_mu),
               uniform_power_criterion(field, form.r, form.d, form.h)]
    for m0 in divisors(field.m):
        q0 = field.p ** m0
        try:
            results.append(subfield_pos_criterion(field, q0, form.d, form.r,
                                                  form.h))
        except ValueError:
            continue  # coefficients outside this subfield
    return results, brute


def _certify_negative(field: FieldDesc, args) -> tuple[list, bool]:
    needed = {"q0": args.q0, "v": args.v, "k": args.k, "ell": args.ell,
              "r": args.r}
    missing = [k for k, v in needed.items() if v is None]
    if missing:
        raise ValueError(f"negative form needs --{', --'.join(missing)}")
    hhat = (parse_poly(args.hhat, field) if args.hhat is not None
            else Poly(field, [1]))
    t = args.t if args.t is not None else 1
    res = subfield_neg_criterion(field, args.q0, t, args.r, args.v,
                                 args.k, args.ell, hhat)
    d, e = res.params["d"], res.params["e"]
    h_mu = neg_inner_values(field, t, args.k, args.ell, hhat, d)
    idx = (np.arange(d, dtype=np.int64) * e) % d
    values = cyclotomic_values_from_mu(field, args.r, d, h_mu[idx])
    brute = is_permutation_values(field, values)
    results = [_subgroup_result(field, args.r, d, h_mu[idx]), res]
    return results, brute


def _certify_multiterm(field: FieldDesc, args) -> tuple[list, bool]:
    needed = {"r": args.r, "e": args.e, "d": args.d}
    missing = [k for k, v in needed.items() if v is None]
    if missing:
        raise ValueError(f"multiterm form needs --{', --'.join(missing)}")
    t = args.t if args.t is not None else 1
    hhat = (parse_poly(args.hhat, field) if args.hhat is not None
            else Poly(field, [1]))
    a_code = _parse_scalar(field, args.a) if args.a is not None else 1
    res = multiterm_criterion(field, args.r, args.e, args.d, t, hhat, a_code)
    tt = tables(field)
    w = tt.add(tt.pow(tt.mu_codes(args.d), args.e),
               np.full(args.d, a_code, dtype=np.int64))
    h_mu = tt.mul(tt.pow(w, t), tt.eval_terms_at(hhat.to_field(field).terms(),
                                                 tt.pow(w, args.d)))
    values = cyclotomic_values_from_mu(field, args.r, args.d, h_mu)
    brute = is_permutation_values(field, values)
    return [_subgroup_result(field, args.r, args.d, h_mu), res], brute


def _cmd_certify(args: argparse.Namespace) -> int:
    field = parse_field_spec(args.field)
    dispatch = {"binomial": _certify_binomial,
                "cyclotomic": _certify_cyclotomic,
                "negative": _certify_negative,
                "multiterm": _certify_multiterm}
    results, brute = dispatch[args.form](field, args)
    consistent = True
    out = []
    for res in results:
        doc = res.to_json_dict()
        if res.hypothesis_ok:
            authoritative = (res.exact_subgroup_verdict
                             if res.criterion == "multiterm" else res.verdict)
            agrees = authoritative == brute
            doc["agrees_with_bruteforce"] = agrees
            consistent = consistent and agrees
        out.append(doc)
    _emit({"q": field.q, "form": args.form, "bruteforce": brute,
           "criteria": out, "consistent": consistent})
    return EXIT_OK if consistent else EXIT_INCONSISTENT


# ---------------------------------------------------------------------------
# search
# ---------------------------------------------------------------------------

def _cmd_search(args: argparse.Namespace) -> int:
    result = run_census(args.max_q, form=args.form, a_sweep=args.a_sweep,
                        threads=args.threads)
    writer = write_csv if args.format == "csv" else write_jsonl
    if args.out and args.out != "-":
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            writer(result.rows, fh)
        _emit(result.summary)
    else:
        writer(result.rows, sys.stdout)
        json.dump(result.summary, sys.stderr, separators=(", ", ": "))
        sys.stderr.write("\n")
    if not result.consistent:
        for violation in result.violations[:20]:
            print(f"violation: {violation}", file=sys.stderr)
        return EXIT_INCONSISTENT
    return EXIT_OK


# ---------------------------------------------------------------------------
# lucas / aw
# ---------------------------------------------------------------------------

def _cmd_lucas(args: argparse.Namespace) -> int:
    field = parse_field_spec(args.field) if args.field else None
    for n in range(args.n + 1):
        doc: dict[str, Any] = {"d": args.d, "n": n,
                               "a_n": lucas_exact(args.d, n)}
        if field is not None:
            doc["a_n_mod_p"] = lucas_mod_p(field, args.d, n).code
        _emit(doc)
    return EXIT_OK


def _cmd_aw(args: argparse.Namespace) -> int:
    field = parse_field_spec(args.q)
    res = lucas_period_criterion(field, args.d, args.r, args.e)
    doc = res.to_json_dict()
    if res.hypothesis_ok:
        doc["implies_binomial_hypothesis"] = period_implies_binomial(
            field, args.d, args.r, args.e)
    _emit(doc)
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="permpoly",
        description="Permutation-polynomial criteria over finite fields")
    sub = parser.add_subparsers(dest="command", required=True)

    p_check = sub.add_parser("check", help="brute-force permutation test")
    p_check.add_argument("--field", required=True,
                         help="field spec 'p^m' or prime-power order")
    p_check.add_argument("--poly", required=True,
                         help="polynomial, e.g. 'x^3+2*x+1' or 'B1*x^2+B3'")
    p_check.set_defaults(func=_cmd_check)

    p_cert = sub.add_parser("certify",
                            help="run every applicable criterion on a form")
    p_cert.add_argument("--field", required=True)
    p_cert.add_argument("--form", required=True,
                        choices=["binomial", "cyclotomic", "negative",
                                 "multiterm"])
    p_cert.add_argument("--u", type=int, help="binomial: upper exponent")
    p_cert.add_argument("--r", type=int, help="outer exponent")
    p_cert.add_argument("--a", help="binomial/multiterm: constant (grammar)")
    p_cert.add_argument("--d", type=int, help="subgroup order divisor of q-1")
    p_cert.add_argument("--h", help="cyclotomic: inner polynomial")
    p_cert.add_argument("--coeff-field", dest="coeff_field",
                        help="cyclotomic: declared coefficient subfield order")
    p_cert.add_argument("--q0", type=int, help="negative: subfield order")
    p_cert.add_argument("--t", type=int, help="negative/multiterm: power t")
    p_cert.add_argument("--v", type=int, help="negative: inner exponent")
    p_cert.add_argument("--k", type=int, help="negative: geometric block size")
    p_cert.add_argument("--ell", type=int,
                        help="negative: second geometric block size")
    p_cert.add_argument("--e", type=int, help="multiterm: twist exponent")
    p_cert.add_argument("--hhat", help="negative/multiterm: outer polynomial")
    p_cert.set_defaults(func=_cmd_certify)

    p_search = sub.add_parser("search", help="cross-validated census")
    p_search.add_argument("--max-q", dest="max_q", type=int, required=True)
    p_search.add_argument("--form", choices=["binomial", "cyclotomic"],
                          default="binomial")
    p_search.add_argument("--a-sweep", dest="a_sweep",
                          choices=["all", "one"], default="all")
    p_search.add_argument("--out", help="output path ('-' = stdout)")
    p_search.add_argument("--format", choices=["csv", "jsonl"], default="csv")
    p_search.add_argument("--threads", type=int, default=1)
    p_search.set_defaults(func=_cmd_search)

    p_lucas = sub.add_parser("lucas", help="generalized Lucas numbers")
    p_lucas.add_argument("--d", type=int, required=True)
    p_lucas.add_argument("--n", type=int, required=True,
                         help="emit a_0..a_n")
    p_lucas.add_argument("--field", help="optional mod-p context 'p^m'")
    p_lucas.set_defaults(func=_cmd_lucas)

    p_aw = sub.add_parser("aw", help="periodicity certificate for binomials")
    p_aw.add_argument("--q", required=True, help="field spec 'p^m' or order")
    p_aw.add_argument("--d", type=int, required=True)
    p_aw.add_argument("--r", type=int, required=True)
    p_aw.add_argument("--e", type=int, required=True)
    p_aw.set_defaults(func=_cmd_aw)

    return parser


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
