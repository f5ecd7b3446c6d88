"""Permutation criteria for structured cyclotomic forms.

Four criteria cover maps whose inner polynomial is built from geometric
blocks with coefficients in a subfield F_{q0} of F_q; the applicability
hypothesis is a congruence on q0 modulo d together with a condition on the
extension degree over F_{q0}:

  * positive family  (q0 ≡ +1 mod d, extension degree divisible by d):
    general inner polynomial, or the explicit geometric power h_k(x^e)^t;
  * negative family  (q0 ≡ -1 mod d, extension degree even):
    inner polynomial h_k^t * hhat(h_ell^d0), or its geometric-power case.

Two more cover binomials x^u + a*x^r (hypothesis: (eta + a/eta)^s = 1 on
mu_2d) and the shifted multi-term form x^r * h(x^(e(q-1)/d) + a) with
h = x^t * hhat(x^d), which carries both the stated gcd verdict and the
authoritative exact subgroup verdict.

All evaluation work happens on element codes via the cached log tables;
inner polynomials are never expanded densely in the hot paths.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Any

import numpy as np

from .gf import FieldDesc, FieldElement, in_subfield, subfield, tables
from .poly import Poly, format_poly, geom, has_root_in_mu
from .permcheck import (CriterionResult, cyclotomic_values_from_mu,
                        is_permutation_values, permutes_subgroup_values)

__all__ = [
    "BinomialForm",
    "subfield_pos_criterion",
    "geometric_pos_criterion",
    "subfield_neg_criterion",
    "subfield_neg_formula",
    "geometric_neg_criterion",
    "binomial_criterion",
    "multiterm_criterion",
    "neg_inner_values",
    "build_neg_inner",
    "geometric_family_values",
    "negative_form_params",
]


# ---------------------------------------------------------------------------
# Shared plumbing
# ---------------------------------------------------------------------------

def _subfield_degree(field: FieldDesc, q0: int) -> int:
    """Degree of F_q over its subfield F_{q0} (validates q0)."""
    handle = subfield(field, q0)
    return field.m // handle.m0


def _coerce_subfield_poly(field: FieldDesc, q0: int, h: Poly, what: str) -> Poly:
    """Attach h to the field, requiring every coefficient to satisfy
    z^q0 = z (membership in the order-q0 subfield)."""
    hh = h.to_field(field)
    codes = np.array(hh.coeffs, dtype=np.int64)
    if len(codes) and not bool(in_subfield(field, codes, q0).all()):
        raise ValueError(f"{what} has a coefficient outside the order-{q0} subfield")
    return hh


def _scalar_array(n: int, code: int) -> np.ndarray:
    return np.full(n, code, dtype=np.int64)


def geometric_family_values(field: FieldDesc, k: int, t: int, e: int,
                            d: int) -> np.ndarray:
    """Values of H(z) = geom(k)(z^e)^t on mu_d (codes, subgroup order)."""
    tt = tables(field)
    zs = tt.mu_codes(d)
    hk = tt.eval_terms_at(geom(k, field).terms(), tt.pow(zs, e))
    return tt.pow(hk, t)


def neg_inner_values(field: FieldDesc, t: int, k: int, ell: int, h_hat: Poly,
                     d: int) -> np.ndarray:
    """Values on mu_d of h = geom(k)^t * hhat(geom(ell)^d0), where
    d0 = d / gcd(d, ell-1); computed factor-by-factor, never densely."""
    tt = tables(field)
    d0 = d // math.gcd(d, ell - 1)
    zs = tt.mu_codes(d)
    hk = tt.eval_terms_at(geom(k, field).terms(), zs)
    hl = tt.eval_terms_at(geom(ell, field).terms(), zs)
    hhat_at = tt.eval_terms_at(h_hat.to_field(field).terms(), tt.pow(hl, d0))
    return tt.mul(tt.pow(hk, t), hhat_at)


def build_neg_inner(field: FieldDesc, t: int, k: int, ell: int, h_hat: Poly,
                    d: int) -> Poly:
    """Dense counterpart of neg_inner_values (small parameters only)."""
    d0 = d // math.gcd(d, ell - 1)
    return (geom(k, field) ** t) * h_hat.to_field(field).compose(
        geom(ell, field) ** d0)


def negative_form_params(field: FieldDesc, v: int,
                         ell: int) -> tuple[int, int, int, int]:
    """Derived (s, d, e, d0) for the negative-family form x^r * h(x^v)."""
    if v < 1:
        raise ValueError("v must be >= 1")
    M = field.q - 1
    s = math.gcd(M, v)
    d = M // s
    e = v // s
    d0 = d // math.gcd(d, ell - 1)
    return s, d, e, d0


# ---------------------------------------------------------------------------
# Positive family: q0 = 1 (mod d), extension degree divisible by d
# ---------------------------------------------------------------------------

def subfield_pos_criterion(field: FieldDesc, q0: int, d: int, r: int,
                           h: Poly) -> CriterionResult:
    """f = x^r * h(x^(q-1)/d) with h over F_{q0}.

    hypothesis: q0 = 1 (mod d) and d divides the extension degree over F_{q0}.
    (The hypothesis forces d | q-1, so the hypothesis check comes first and a
    d that does not divide q-1 is reported as a silent failure, not an error.)
    verdict (exact under the hypothesis): gcd(r, (q-1)/d) = 1 and h has no
    root in mu_d.
    """
    if r < 1:
        raise ValueError("r must be >= 1")
    if d < 1:
        raise ValueError("d must be >= 1")
    hh = _coerce_subfield_poly(field, q0, h, "h")
    m_rel = _subfield_degree(field, q0)
    params: dict[str, Any] = {"q0": q0, "r": r, "d": d, "h": format_poly(hh)}
    M = field.q - 1
    if M % d == 0:
        params["s"] = M // d
    res = CriterionResult(criterion="subfield_pos", q=field.q, params=params)
    cong = (q0 - 1) % d == 0
    deg_ok = m_rel % d == 0
    if not (cong and deg_ok):
        res.witness = {"reason": "subfield congruence fails" if not cong
                       else "extension degree not divisible by d",
                       "m_over_q0": m_rel}
        return res
    res.hypothesis_ok = True
    s = M // d  # the hypothesis guarantees d | q0^m_rel - 1 = q - 1
    root = has_root_in_mu(hh, d, field)
    gcd_ok = math.gcd(r, s) == 1
    res.verdict = gcd_ok and root is None
    if root is not None:
        res.witness = {"root_in_mu": root.code}
    elif not gcd_ok:
        res.witness = {"gcd": [r, s, math.gcd(r, s)]}
    return res


def geometric_pos_criterion(field: FieldDesc, q0: int, d: int, e: int, r: int,
                            k: int, t: int) -> CriterionResult:
    """f = x^r * geom(k)(x^(e(q-1)/d))^t.

    hypothesis: as subfield_pos.  verdict (exact under the hypothesis):
    gcd(k, p*d) = 1 and gcd(r, (q-1)/d) = 1.
    """
    if min(d, e, r, k, t) < 1:
        raise ValueError("d, e, r, k, t must all be >= 1")
    M = field.q - 1
    if M % d != 0:
        raise ValueError(f"d={d} must divide q-1={M}")
    if math.gcd(d, e) != 1:
        raise ValueError(f"need gcd(d, e) = 1, got gcd({d}, {e}) != 1")
    m_rel = _subfield_degree(field, q0)
    s = M // d
    res = CriterionResult(criterion="geom_pos", q=field.q,
                          params={"q0": q0, "d": d, "e": e, "r": r,
                                  "k": k, "t": t, "s": s})
    cong = (q0 - 1) % d == 0
    deg_ok = m_rel % d == 0
    if not (cong and deg_ok):
        res.witness = {"reason": "subfield congruence fails" if not cong
                       else "extension degree not divisible by d",
                       "m_over_q0": m_rel}
        return res
    res.hypothesis_ok = True
    gk = math.gcd(k, field.p * d)
    gr = math.gcd(r, s)
    res.verdict = gk == 1 and gr == 1
    if not res.verdict:
        res.witness = {"gcd_k_pd": gk, "gcd_r_s": gr}
    return res


# ---------------------------------------------------------------------------
# Negative family: q0 = -1 (mod d), even extension degree
# ---------------------------------------------------------------------------

def _negative_impl(field: FieldDesc, q0: int, t: int, r: int, v: int, k: int,
                   ell: int, h_hat: Poly, criterion: str,
                   require_even_degree: bool) -> CriterionResult:
    if t < 0:
        raise ValueError("t must be >= 0")
    if min(r, v, k, ell) < 1:
        raise ValueError("r, v, k, ell must all be >= 1")
    hh = _coerce_subfield_poly(field, q0, h_hat, "hhat")
    m_rel = _subfield_degree(field, q0)
    s, d, e, d0 = negative_form_params(field, v, ell)
    res = CriterionResult(criterion=criterion, q=field.q,
                          params={"q0": q0, "t": t, "r": r, "v": v, "k": k,
                                  "ell": ell, "hhat": format_poly(hh),
                                  "s": s, "d": d, "e": e, "d0": d0})
    cong = (q0 + 1) % d == 0
    parity = m_rel % 2 == 0
    if not cong or (require_even_degree and not parity):
        res.witness = {"reason": "subfield congruence fails" if not cong
                       else "extension degree over the subfield is odd",
                       "m_over_q0": m_rel}
        return res
    res.hypothesis_ok = True
    g1 = math.gcd(r, s)
    g2 = math.gcd(2 * r + (k - 1) * t * v, 2 * d)
    h_vals = neg_inner_values(field, t, k, ell, hh, d)
    zero_at = np.flatnonzero(h_vals == 0)
    res.verdict = g1 == 1 and g2 == 2 and len(zero_at) == 0
    if not res.verdict:
        res.witness = {"gcd_r_s": g1, "gcd_shift_2d": g2}
        if len(zero_at):
            res.witness["root_in_mu"] = int(
                tables(field).mu_codes(d)[zero_at[0]])
    return res


def subfield_neg_criterion(field: FieldDesc, q0: int, t: int, r: int, v: int,
                           k: int, ell: int, h_hat: Poly) -> CriterionResult:
    """f = x^r * h(x^v) with h = geom(k)^t * hhat(geom(ell)^d0) and hhat over
    F_{q0}; s = gcd(q-1, v), d = (q-1)/s, d0 = d/gcd(d, ell-1).

    hypothesis: the extension degree over F_{q0} is even and q0 = -1 (mod d).
    verdict (exact under the hypothesis): gcd(r, s) = 1 and
    gcd(2r + (k-1)*t*v, 2d) = 2 and h has no root in mu_d.
    """
    return _negative_impl(field, q0, t, r, v, k, ell, h_hat,
                          "subfield_neg", require_even_degree=True)


def subfield_neg_formula(field: FieldDesc, q0: int, t: int, r: int, v: int,
                         k: int, ell: int, h_hat: Poly) -> CriterionResult:
    """Instrumentation variant of subfield_neg_criterion that drops the
    even-extension-degree requirement from the hypothesis.  Its verdict is
    NOT trustworthy — it exists to measure where the dropped condition is
    load-bearing (every observed failure should have d = 2)."""
    return _negative_impl(field, q0, t, r, v, k, ell, h_hat,
                          "subfield_neg_formula", require_even_degree=False)


def geometric_neg_criterion(field: FieldDesc, q0: int, t: int, d: int, e: int,
                            r: int, k: int) -> CriterionResult:
    """f = x^r * geom(k)(x^(e(q-1)/d))^t with s = (q-1)/d.

    hypothesis: as subfield_neg.  verdict (exact under the hypothesis):
    gcd(r, s) = 1, gcd(k, p*d) = 1, and gcd(2r + (k-1)*t*e*s, 2d) = 2.
    """
    if min(t, d, e, r, k) < 1:
        raise ValueError("t, d, e, r, k must all be >= 1")
    M = field.q - 1
    if M % d != 0:
        raise ValueError(f"d={d} must divide q-1={M}")
    if math.gcd(d, e) != 1:
        raise ValueError(f"need gcd(d, e) = 1, got gcd({d}, {e}) != 1")
    m_rel = _subfield_degree(field, q0)
    s = M // d
    res = CriterionResult(criterion="geom_neg", q=field.q,
                          params={"q0": q0, "t": t, "d": d, "e": e, "r": r,
                                  "k": k, "s": s})
    cong = (q0 + 1) % d == 0
    parity = m_rel % 2 == 0
    if not (cong and parity):
        res.witness = {"reason": "subfield congruence fails" if not cong
                       else "extension degree over the subfield is odd",
                       "m_over_q0": m_rel}
        return res
    res.hypothesis_ok = True
    g1 = math.gcd(r, s)
    gk = math.gcd(k, field.p * d)
    g2 = math.gcd(2 * r + (k - 1) * t * e * s, 2 * d)
    res.verdict = g1 == 1 and gk == 1 and g2 == 2
    if not res.verdict:
        res.witness = {"gcd_r_s": g1, "gcd_k_pd": gk, "gcd_shift_2d": g2}
    return res


# ---------------------------------------------------------------------------
# Binomials x^u + a*x^r
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class BinomialForm:
    """x^u + a*x^r with u > r > 0 and a != 0; s = gcd(u-r, q-1), d = (q-1)/s,
    e = (u-r)/s are derived, never trusted from callers."""

    u: int
    r: int
    a_code: int
    s: int
    d: int
    e: int

    @classmethod
    def for_field(cls, field: FieldDesc, u: int, r: int,
                  a: FieldElement | int) -> "BinomialForm":
        if not u > r > 0:
            raise ValueError("need u > r > 0")
        a_code = field.element(a).code
        if a_code == 0:
            raise ValueError("a must be nonzero")
        M = field.q - 1
        s = math.gcd(u - r, M)
        d = M // s
        e = (u - r) // s
        return cls(u=u, r=r, a_code=a_code, s=s, d=d, e=e)

    def terms(self) -> list[tuple[int, int]]:
        return [(self.r, self.a_code), (self.u, 1)]

    def values(self, field: FieldDesc) -> np.ndarray:
        """Codes of x^u + a*x^r at every field element (index = code)."""
        tt = tables(field)
        h_on_mu = tt.add(tt.pow(tt.mu_codes(self.d), self.e),
                         _scalar_array(self.d, self.a_code))
        return cyclotomic_values_from_mu(field, self.r, self.d, h_on_mu)

    def is_permutation(self, field: FieldDesc) -> bool:
        return is_permutation_values(field, self.values(field))

    def params_dict(self) -> dict[str, Any]:
        return {"u": self.u, "r": self.r, "a": self.a_code,
                "s": self.s, "d": self.d, "e": self.e}


def binomial_criterion(field: FieldDesc, form: BinomialForm) -> CriterionResult:
    """hypothesis: (eta + a/eta)^s = 1 for every eta in mu_2d (mu_d when q is
    even, where the two sets coincide); a zero value fails.  For odd q the
    scan needs mu_2d inside F_q, i.e. 2d | q-1; otherwise the hypothesis is
    reported unscannable (hypothesis_ok stays False).

    verdict (exact under the hypothesis): (-a)^d != 1 and gcd(r, s) = 1 and
    gcd(2d, u+r) <= 2.
    """
    tt = tables(field)
    res = CriterionResult(criterion="binomial", q=field.q,
                          params=form.params_dict())
    scan_d = form.d if field.p == 2 else 2 * form.d
    if tt.M % scan_d != 0:
        res.witness = {"reason": "hypothesis unscannable: mu_2d is not "
                                 "contained in the field"}
        return res
    eta = tt.mu_codes(scan_d)
    c = tt.add(eta, tt.mul(_scalar_array(scan_d, form.a_code), tt.inv(eta)))
    vals = tt.pow(c, form.s)
    bad = np.flatnonzero(vals != 1)
    if len(bad):
        res.witness = {"eta": int(eta[bad[0]]),
                       "value": int(vals[bad[0]])}
        return res
    res.hypothesis_ok = True
    minus_a = -field.element(form.a_code)
    leg_a = (minus_a ** form.d).code != 1
    leg_r = math.gcd(form.r, form.s) == 1
    leg_u = math.gcd(2 * form.d, form.u + form.r) <= 2
    res.verdict = leg_a and leg_r and leg_u
    if not res.verdict:
        res.witness = {"minus_a_power_in_mu_d": not leg_a,
                       "gcd_r_s": math.gcd(form.r, form.s),
                       "gcd_2d_u_plus_r": math.gcd(2 * form.d,
                                                   form.u + form.r)}
    return res


# ---------------------------------------------------------------------------
# Shifted multi-term form x^r * h(x^(e(q-1)/d) + a), h = x^t * hhat(x^d)
# ---------------------------------------------------------------------------

def multiterm_criterion(field: FieldDesc, r: int, e: int, d: int, t: int,
                        h_hat: Poly, a: FieldElement | int) -> CriterionResult:
    """Dual-verdict criterion.

    hypothesis (scanned over eta in mu_{d*gcd(2,d)}; zero values fail):
    (eta + a/eta)^(t(q-1)/d) = 1 and hhat((eta^2e + a)^d)^((q-1)/d) = 1.
    verdict: the stated gcd formula gcd(2r + e*t*(q-1)/d, d) = 1 and
    gcd(r, (q-1)/d) = 1.  exact_subgroup_verdict: the authoritative answer
    from the exact subgroup reduction, always computed; `discrepancy` flags
    any disagreement between the two when both are defined.
    """
    if min(r, e, d, t) < 1:
        raise ValueError("r, e, d, t must all be >= 1")
    M = field.q - 1
    if M % d != 0:
        raise ValueError(f"d={d} must divide q-1={M}")
    if math.gcd(e, d) != 1:
        raise ValueError(f"need gcd(e, d) = 1, got gcd({e}, {d}) != 1")
    a_code = field.element(a).code
    if a_code == 0:
        raise ValueError("a must be nonzero")
    tt = tables(field)
    s = M // d
    hh = h_hat.to_field(field)
    res = CriterionResult(criterion="multiterm", q=field.q,
                          params={"r": r, "e": e, "d": d, "t": t,
                                  "hhat": format_poly(hh), "a": a_code,
                                  "s": s})
    # Exact subgroup answer for f = x^r * H(x^s), H(z) = h(z^e + a).
    zs = tt.mu_codes(d)
    w = tt.add(tt.pow(zs, e), _scalar_array(d, a_code))
    h_on_mu = tt.mul(tt.pow(w, t), tt.eval_terms_at(hh.terms(), tt.pow(w, d)))
    res.exact_subgroup_verdict = (math.gcd(r, s) == 1 and
                                  permutes_subgroup_values(field, r, d, h_on_mu))
    scan_d = d * (2 if d % 2 == 0 else 1)
    if tt.M % scan_d != 0:
        res.witness = {"reason": "hypothesis unscannable: mu_2d is not "
                                 "contained in the field"}
        return res
    eta = tt.mu_codes(scan_d)
    c1 = tt.add(eta, tt.mul(_scalar_array(scan_d, a_code), tt.inv(eta)))
    v1 = tt.pow(c1, t * s)
    inner = tt.pow(tt.add(tt.pow(eta, 2 * e), _scalar_array(scan_d, a_code)), d)
    v2 = tt.pow(tt.eval_terms_at(hh.terms(), inner), s)
    bad = np.flatnonzero((v1 != 1) | (v2 != 1))
    if len(bad):
        i = int(bad[0])
        res.witness = {"eta": int(eta[i]), "first_leg": int(v1[i]),
                       "second_leg": int(v2[i])}
        res.discrepancy = None
        return res
    res.hypothesis_ok = True
    res.verdict = (math.gcd(2 * r + e * t * s, d) == 1 and
                   math.gcd(r, s) == 1)
    res.discrepancy = res.verdict != res.exact_subgroup_verdict
    return res
