#!/usr/bin/env python3
"""Validate the closed-form integer sequence behind the period criterion.

The sequence a_n(d) (d odd, >= 3) is the n-th power sum of the (d-1)/2
algebraic numbers 2*cos(pi*(2t-1)/d).  The package computes it two ways:

  * lucas_exact  -- exact integers from a lacunary binomial sum,
  * lucas_mod_p  -- residues mod p from half-order roots of unity in F_q
                    (defined whenever 2d divides q-1).

This script checks both against an independent high-precision floating
oracle (mpmath power sums of the cosines) and against each other:

  1. |oracle - lucas_exact| < --tol for every odd d <= --max-d and every
     n <= --max-n (the values are integers, so any tolerance below 0.5
     is decisive; deviations are typically ~1e-40 at the default
     precision).
  2. lucas_mod_p(field, d, n) == lucas_exact(d, n) mod p on every field
     in --fields and every admissible d.

Exit status 0 when both checks pass everywhere, 1 otherwise.
"""

from __future__ import annotations

import argparse
import sys

import mpmath

from permpoly import field_from_order, lucas_exact, lucas_mod_p


def cosine_oracle(d: int, n: int) -> mpmath.mpf:
    return mpmath.fsum((2 * mpmath.cos(mpmath.pi * (2 * t - 1) / d)) ** n
                       for t in range(1, (d - 1) // 2 + 1))


def parse_args(argv: list[str] | None = None) -> argparse.Namespace:
    ap = argparse.ArgumentParser(description=__doc__.split("\n", 1)[0])
    ap.add_argument("--max-d", type=int, default=21,
                    help="largest odd d to validate (default 21)")
    ap.add_argument("--max-n", type=int, default=120,
                    help="largest sequence index n (default 120)")
    ap.add_argument("--dps", type=int, default=60,
                    help="mpmath working precision in decimal digits")
    ap.add_argument("--tol", type=float, default=1e-9,
                    help="maximum tolerated |oracle - exact| (default 1e-9)")
    ap.add_argument("--fields", default="11,25,27,49,81,121,125,169,243,625",
                    help="comma-separated prime powers for the mod-p check")
    return ap.parse_args(argv)


def main(argv: list[str] | None = None) -> int:
    args = parse_args(argv)
    failures = 0

    print(f"exact vs cosine oracle (dps={args.dps}, tol={args.tol:g}):")
    for d in range(3, args.max_d + 1, 2):
        worst = 0.0
        with mpmath.workdps(args.dps):
            for n in range(args.max_n + 1):
                exact = lucas_exact(d, n)
                dev = abs(float(cosine_oracle(d, n) - exact))
                worst = max(worst, dev)
                if dev >= args.tol:
                    failures += 1
                    print(f"  MISMATCH d={d} n={n}: exact={exact} "
                          f"deviates by {dev:.3e}", file=sys.stderr)
        head = [lucas_exact(d, n) for n in range(8)]
        print(f"  d={d:>2}: a_0..a_7 = {head}  max deviation {worst:.2e}")

    print("mod-p reduction vs exact:")
    for q_text in args.fields.split(","):
        q = int(q_text)
        field = field_from_order(q)
        M = q - 1
        ds = [d for d in range(3, min(M, args.max_d) + 1, 2)
              if M % (2 * d) == 0]
        checked = 0
        for d in ds:
            for n in range(min(args.max_n, 60) + 1):
                got = lucas_mod_p(field, d, n).code
                want = lucas_exact(d, n) % field.p
                checked += 1
                if got != want:
                    failures += 1
                    print(f"  MISMATCH q={q} d={d} n={n}: "
                          f"mod_p={got} exact%p={want}", file=sys.stderr)
        print(f"  q={q:>4}: admissible d {ds or 'none'}, "
              f"{checked} comparisons")

    if failures:
        print(f"FAILED: {failures} mismatches", file=sys.stderr)
        return 1
    print("all checks passed")
    return 0


if __name__ == "__main__":
    sys.exit(main())
