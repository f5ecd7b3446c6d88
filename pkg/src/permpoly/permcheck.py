"""Permutation testing for maps of the shape x^r * h(x^(q-1)/d) on a finite
field.

The exact reduction: with s*d = q-1, the map f(x) = x^r * h(x^s) permutes
F_q if and only if gcd(r, s) = 1 and the induced map z -> z^r * h(z)^s is a
bijection of the group mu_d of d-th roots of unity.  Everything here works
with element codes and the cached discrete-log tables, so whole-field and
whole-subgroup sweeps are vectorized.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field
from typing import Any, Optional

import numpy as np

from .gf import FieldDesc, tables
from .poly import Poly, format_poly

__all__ = [
    "CriterionResult",
    "CyclotomicForm",
    "is_permutation_bruteforce",
    "is_permutation_values",
    "cyclotomic_values",
    "cyclotomic_values_from_mu",
    "permutes_subgroup",
    "permutes_subgroup_values",
    "subgroup_criterion",
    "uniform_power_criterion",
]


@dataclass
class CriterionResult:
    """Outcome of one criterion applied to one parameterized map.

    hypothesis_ok: whether the criterion's applicability hypothesis holds
        (when False, `verdict` is None and the criterion is simply silent).
    verdict: the criterion's permutation claim when the hypothesis holds.
    witness: structured detail (found exponent, failing root, ...).
    exact_subgroup_verdict: ground truth from the exact subgroup reduction,
        when the caller computed it alongside the criterion.
    discrepancy: True when both verdicts are defined and disagree.
    """

    criterion: str
    q: int
    params: dict[str, Any] = dc_field(default_factory=dict)
    hypothesis_ok: bool = False
    verdict: Optional[bool] = None
    witness: Optional[dict[str, Any]] = None
    exact_subgroup_verdict: Optional[bool] = None
    discrepancy: Optional[bool] = None

    def to_json_dict(self) -> dict[str, Any]:
        return {
            "criterion": self.criterion,
            "q": self.q,
            "params": self.params,
            "hypothesis_ok": self.hypothesis_ok,
            "verdict": self.verdict,
            "witness": self.witness,
            "exact_subgroup_verdict": self.exact_subgroup_verdict,
            "discrepancy": self.discrepancy,
        }


@dataclass(frozen=True)
class CyclotomicForm:
    """The map x^r * h(x^s) with s*d = q-1; h is reduced on mu_d so only its
    residues modulo x^d - 1 matter."""

    r: int
    d: int
    s: int
    h: Poly

    @classmethod
    def for_field(cls, field: FieldDesc, r: int, d: int, h: Poly) -> "CyclotomicForm":
        if r < 1:
            raise ValueError("r must be >= 1")
        if d < 1 or (field.q - 1) % d != 0:
            raise ValueError(f"d={d} must divide q-1={field.q - 1}")
        return cls(r=r, d=d, s=(field.q - 1) // d, h=h.to_field(field))

    def terms(self) -> list[tuple[int, int]]:
        """Terms of x^r * h(x^s) as (exponent, coefficient-code) pairs."""
        return [(self.r + self.s * e, c) for e, c in self.h.terms()]

    def values(self, field: FieldDesc) -> np.ndarray:
        return cyclotomic_values(field, self.r, self.s, self.h)

    def is_permutation(self, field: FieldDesc) -> bool:
        return is_permutation_values(field, self.values(field))

    def params_dict(self) -> dict[str, Any]:
        return {"r": self.r, "d": self.d, "s": self.s, "h": format_poly(self.h)}


# ---------------------------------------------------------------------------
# Brute force
# ---------------------------------------------------------------------------

def is_permutation_values(field: FieldDesc, values: np.ndarray) -> bool:
    """True when the q evaluated codes hit every element exactly once."""
    if len(values) != field.q:
        raise ValueError("need one value per field element")
    return bool(np.bincount(values, minlength=field.q).max() <= 1)


def is_permutation_bruteforce(field: FieldDesc, f: Poly) -> bool:
    """Evaluate f on the whole field and check the image is all of it."""
    return is_permutation_values(field, f.eval_at_all(field))


def cyclotomic_values(field: FieldDesc, r: int, s: int, h: Poly) -> np.ndarray:
    """Codes of x^r * h(x^s) at every field element (index = input code)."""
    hh = h.to_field(field)
    terms = [(r + s * e, c) for e, c in hh.terms()]
    return tables(field).eval_terms_at_all(terms)


# ---------------------------------------------------------------------------
# Exact subgroup reduction
# ---------------------------------------------------------------------------

def cyclotomic_values_from_mu(field: FieldDesc, r: int, d: int,
                              h_values: np.ndarray) -> np.ndarray:
    """Codes of x^r * H(x^(q-1)/d) at every field element, given only H's
    values on mu_d (h_values[i] = H at g^(i*(q-1)/d)).

    For x = g^j the inner argument is g^(j*s) whose mu_d index is j mod d,
    so one pass over discrete logs evaluates the whole field in O(q).
    """
    t = tables(field)
    if d < 1 or t.M % d != 0:
        raise ValueError(f"d={d} must divide q-1={t.M}")
    if r < 1:
        raise ValueError("r must be >= 1")
    if len(h_values) != d:
        raise ValueError("need H's values on all of mu_d")
    j = np.arange(t.M, dtype=np.int64)
    hj = np.asarray(h_values, dtype=np.int64)[j % d]
    w = (r * j + t.log[hj]) % t.M
    out = np.zeros(field.q, dtype=np.int64)
    out[t.exp[j]] = np.where(hj == 0, 0, t.exp[w])
    return out


def permutes_subgroup_values(field: FieldDesc, r: int, d: int,
                             h_values: np.ndarray) -> bool:
    """Does z -> z^r * h(z)^s biject mu_d, given h's values on mu_d?

    `h_values[i]` must be the code of h at g^(i*(q-1)/d) for i = 0..d-1.
    A zero value disqualifies immediately; otherwise the image lies in mu_d
    and bijectivity reduces to distinctness of the discrete logs
    (r*i*s + s*log h) mod (q-1).
    """
    t = tables(field)
    if d < 1 or t.M % d != 0:
        raise ValueError(f"d={d} must divide q-1={t.M}")
    if len(h_values) != d:
        raise ValueError("need h's values on all of mu_d")
    if np.any(h_values == 0):
        return False
    s = t.M // d
    w = (r * s * np.arange(d, dtype=np.int64) + s * t.log[h_values]) % t.M
    return len(np.unique(w)) == d


def permutes_subgroup(field: FieldDesc, r: int, d: int, h: Poly) -> bool:
    """Exact test that z -> z^r * h(z)^s bijects the d-th roots of unity."""
    t = tables(field)
    if d < 1 or t.M % d != 0:
        raise ValueError(f"d={d} must divide q-1={t.M}")
    hh = h.to_field(field)
    h_vals = t.eval_terms_at(hh.terms(), t.mu_codes(d))
    return permutes_subgroup_values(field, r, d, h_vals)


def subgroup_criterion(field: FieldDesc, r: int, d: int, h: Poly) -> bool:
    """Exact permutation test for x^r * h(x^(q-1)/d) via the subgroup
    reduction: gcd(r, (q-1)/d) = 1 and the induced map bijects mu_d."""
    form = CyclotomicForm.for_field(field, r, d, h)
    if math.gcd(form.r, form.s) != 1:
        return False
    return permutes_subgroup(field, form.r, form.d, form.h)


# ---------------------------------------------------------------------------
# Uniform-power criterion
# ---------------------------------------------------------------------------

def uniform_power_criterion(field: FieldDesc, r: int, d: int, h: Poly) -> CriterionResult:
    """When h(z)^s is the same power z^n across all of mu_d, the map is a
    permutation exactly when gcd(r + n, d) = 1 and gcd(r, s) = 1.

    The candidate n in [1, d] is pinned down by a discrete log at the
    subgroup generator and then verified on every element of mu_d; any
    failure (including a root of h on mu_d) reports hypothesis_ok=False.
    """
    form = CyclotomicForm.for_field(field, r, d, h)
    t = tables(field)
    M, s = t.M, form.s
    result = CriterionResult(criterion="uniform_power", q=field.q,
                             params=form.params_dict())
    zs = t.mu_codes(d)
    h_vals = t.eval_terms_at(form.h.terms(), zs)
    zero_hits = np.flatnonzero(h_vals == 0)
    if len(zero_hits):
        i = int(zero_hits[0])
        result.witness = {"reason": "h vanishes on mu_d", "zeta": int(zs[i])}
        return result
    logs = t.log[h_vals]
    # At zeta_0 = g^s (a generator of mu_d): h(zeta_0)^s = zeta_0^n reads
    # s * log h(zeta_0) == n * s (mod s*d), i.e. n == log h(zeta_0) (mod d),
    # which pins the candidate; it still must survive the full verification.
    n = int(logs[1 % d]) % d
    if n == 0:
        n = d
    # Verify the same n works at every point of mu_d.
    lhs = (s * logs) % M
    rhs = (n * s * np.arange(d, dtype=np.int64)) % M
    bad = np.flatnonzero(lhs != rhs)
    if len(bad):
        i = int(bad[0])
        result.witness = {"reason": "power of h is not uniform on mu_d",
                          "zeta": int(zs[i]), "candidate_n": n}
        return result
    result.hypothesis_ok = True
    result.verdict = math.gcd(r + n, d) == 1 and math.gcd(r, s) == 1
    result.witness = {"n": n}
    return result
