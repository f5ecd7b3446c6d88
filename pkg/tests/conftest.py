"""Shared fixtures: cached field construction, prime-power enumeration,
seeded RNG helpers, and random-polynomial generators used across the suite."""

from functools import lru_cache
import random

import pytest

from permpoly import FieldDesc, Poly, build_field, divisors, subfield
from permpoly.census import fields_up_to

SEED = 20260814


@lru_cache(maxsize=None)
def get_field(q: int) -> FieldDesc:
    specs = {spec[0]: spec for spec in fields_up_to(q)}
    if q not in specs:
        raise ValueError(f"{q} is not a prime power")
    _, p, m = specs[q]
    return build_field(p, m)


def prime_powers(max_q: int, odd_only: bool = False,
                 min_q: int = 2) -> list[int]:
    return [q for (q, p, _m) in fields_up_to(max_q)
            if q >= min_q and (p != 2 or not odd_only)]


def random_poly(rng: random.Random, field: FieldDesc, max_degree: int,
                subfield_order: int | None = None) -> Poly:
    """Random nonzero polynomial of degree <= max_degree; coefficients
    drawn from the whole field, or from the subfield of the given order."""
    if subfield_order is None:
        codes = list(range(field.q))
    else:
        codes = sorted(int(c) for c in
                       subfield(field, subfield_order).member_codes())
    while True:
        coeffs = [rng.choice(codes) for _ in range(max_degree + 1)]
        if any(coeffs):
            return Poly(field, coeffs)


@pytest.fixture
def rng() -> random.Random:
    return random.Random(SEED)


def subfield_orders(field: FieldDesc) -> list[int]:
    return [field.p ** m0 for m0 in divisors(field.m)]


# -- acceptance-criteria reporting -------------------------------------------
# Each acceptance test registers exactly one PASS/FAIL line; the terminal
# summary prints them all regardless of output capturing.

ACCEPTANCE_LINES: list[tuple[int, str]] = []


def record_acceptance(number: int, name: str, ok: bool, detail: str) -> None:
    status = "PASS" if ok else "FAIL"
    ACCEPTANCE_LINES.append((number, f"ACCEPTANCE {number} {status} — {name}: {detail}"))


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for _, line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
