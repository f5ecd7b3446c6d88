"""Certified permutation criteria: frozen examples, soundness mini-sweeps,
form invariants, and the instrumentation channels (dual verdicts, dropped
parity condition)."""

import math

import numpy as np
import pytest

from permpoly import (BinomialForm, Poly, binomial_criterion, build_neg_inner,
                      compose_power, divisors, geom, geometric_family_values,
                      geometric_neg_criterion, geometric_pos_criterion,
                      is_permutation_bruteforce, is_permutation_values,
                      multiterm_criterion, neg_inner_values,
                      negative_form_params, parse_poly, subfield,
                      subfield_neg_criterion, subfield_neg_formula,
                      subfield_pos_criterion, tables)
from permpoly.permcheck import cyclotomic_values_from_mu

from conftest import get_field, random_poly


def brute_cyclotomic(field, r, d, h_mu):
    return is_permutation_values(
        field, cyclotomic_values_from_mu(field, r, d, h_mu))


# ---------------------------------------------------------------------------
# positive subfield criterion
# ---------------------------------------------------------------------------

def test_subfield_pos_frozen_examples():
    f9 = get_field(9)
    res = subfield_pos_criterion(f9, 3, 2, 1, parse_poly("x^2+1", f9))
    assert res.hypothesis_ok and res.verdict is True
    assert is_permutation_bruteforce(f9, parse_poly("x^9+x", f9))

    res = subfield_pos_criterion(f9, 3, 2, 1, parse_poly("x+1", f9))
    assert res.hypothesis_ok and res.verdict is False
    assert f9.element(res.witness["root_in_mu"]) == f9.scalar(2)   # -1

    res = subfield_pos_criterion(f9, 3, 3, 1, parse_poly("x+1", f9))
    assert not res.hypothesis_ok and res.verdict is None
    assert res.witness["reason"] == "subfield congruence fails"


def test_subfield_pos_hypothesis_first_semantics():
    # d = 3 does not divide q-1 = 8, but the call still reports a silent
    # hypothesis failure rather than raising: the hypothesis implies d | q-1.
    f9 = get_field(9)
    res = subfield_pos_criterion(f9, 9, 3, 1, parse_poly("x+1", f9))
    assert not res.hypothesis_ok and res.verdict is None
    assert "s" not in res.params


def test_subfield_pos_rejects_foreign_coefficients():
    f9 = get_field(9)
    g = f9.gen()
    h = Poly(f9, [g.code, 1])                       # g lies outside F_3
    with pytest.raises(ValueError):
        subfield_pos_criterion(f9, 3, 2, 1, h)
    subfield_pos_criterion(f9, 9, 2, 1, h)          # fine over F_9 itself


def test_subfield_pos_gcd_witness():
    f9 = get_field(9)
    res = subfield_pos_criterion(f9, 3, 2, 2, parse_poly("x^2+1", f9))
    assert res.hypothesis_ok and res.verdict is False
    assert res.witness["gcd"] == [2, 4, 2]


# ---------------------------------------------------------------------------
# positive geometric corollary
# ---------------------------------------------------------------------------

def test_geom_pos_frozen_examples():
    f9 = get_field(9)
    res = geometric_pos_criterion(f9, 3, 2, 1, 1, 3, 1)
    assert res.hypothesis_ok and res.verdict is False    # gcd(3, 3*2) = 3
    assert res.witness["gcd_k_pd"] == 3

    res = geometric_pos_criterion(f9, 3, 2, 1, 1, 5, 1)
    assert res.hypothesis_ok and res.verdict is True
    f = parse_poly("x", f9) * compose_power(geom(5, f9), 4)
    assert is_permutation_bruteforce(f9, f)

    with pytest.raises(ValueError):
        geometric_pos_criterion(f9, 3, 2, 2, 1, 5, 1)    # gcd(d, e) = 2


def test_geom_pos_needs_divisible_extension_degree():
    # q0 = 5, F_25: 5 = 1 (mod 4) holds but d = 4 does not divide m_rel = 2
    f25 = get_field(25)
    res = geometric_pos_criterion(f25, 5, 4, 1, 1, 3, 1)
    assert not res.hypothesis_ok
    assert res.witness["reason"] == "extension degree not divisible by d"
    res = geometric_pos_criterion(f25, 5, 2, 1, 1, 3, 1)
    assert res.hypothesis_ok                              # 2 | 2


def test_geom_family_values_match_dense(rng):
    for q in (9, 25):
        field = get_field(q)
        t = tables(field)
        for _ in range(20):
            d = rng.choice(divisors(q - 1))
            e = rng.choice([e for e in range(1, 5) if math.gcd(e, d) == 1])
            k, tt_ = rng.randrange(1, 8), rng.randrange(1, 4)
            vals = geometric_family_values(field, k, tt_, e, d)
            dense = compose_power(geom(k, field), e) ** tt_
            assert np.array_equal(vals,
                                  dense.eval_at_codes(field, t.mu_codes(d)))


# ---------------------------------------------------------------------------
# negative subfield criterion
# ---------------------------------------------------------------------------

def test_subfield_neg_frozen_examples():
    f9 = get_field(9)
    res = subfield_neg_criterion(f9, 3, 0, 1, 2, 1, 3, parse_poly("x^2+1", f9))
    assert res.params["s"] == 2 and res.params["d"] == 4
    assert res.params["d0"] == 2
    assert res.hypothesis_ok and res.verdict is True
    h = build_neg_inner(f9, 0, 1, 3, parse_poly("x^2+1", f9), 4)
    f = parse_poly("x", f9) * compose_power(h, 2)
    assert is_permutation_bruteforce(f9, f)

    f4 = get_field(4)
    res = subfield_neg_criterion(f4, 2, 1, 1, 1, 2, 1, Poly(f4, [1]))
    assert res.hypothesis_ok and res.verdict is False
    assert res.witness["gcd_shift_2d"] == 3
    assert not is_permutation_bruteforce(f4, parse_poly("x^2+x", f4))

    f27 = get_field(27)     # d = 2 divides q0+1 = 4, but m_rel = 3 is odd
    res = subfield_neg_criterion(f27, 3, 1, 1, 13, 1, 1, Poly(f27, [1]))
    assert res.params["d"] == 2 and not res.hypothesis_ok
    assert res.witness["reason"] == "extension degree over the subfield is odd"


def test_negative_form_params():
    f9 = get_field(9)
    assert negative_form_params(f9, 2, 3) == (2, 4, 1, 2)
    assert negative_form_params(f9, 6, 1) == (2, 4, 3, 1)   # gcd(d, 0) = d
    assert negative_form_params(f9, 8, 5) == (8, 1, 1, 1)
    with pytest.raises(ValueError):
        negative_form_params(f9, 0, 1)


def test_neg_inner_values_match_dense(rng):
    f25 = get_field(25)
    t = tables(f25)
    for _ in range(20):
        d = rng.choice(divisors(24))
        tt_, k, ell = rng.randrange(0, 3), rng.randrange(1, 8), rng.randrange(1, 8)
        hhat = random_poly(rng, f25, 4, subfield_order=5)
        vals = neg_inner_values(f25, tt_, k, ell, hhat, d)
        dense = build_neg_inner(f25, tt_, k, ell, hhat, d)
        assert np.array_equal(vals, dense.eval_at_codes(f25, t.mu_codes(d)))


def test_subfield_neg_reduce_mod_cyclo_invariance(rng):
    """The certified truth only depends on h through its values on mu_d:
    replacing h by its reduction mod x^d - 1 leaves the brute-force outcome
    equal to the verdict."""
    from permpoly import reduce_mod_cyclo
    f9 = get_field(9)
    fired = 0
    for _ in range(30):
        v = rng.choice([2, 6])                         # d = 4 either way
        k, ell = rng.randrange(1, 8), rng.randrange(1, 8)
        t_, r = rng.randrange(0, 3), rng.choice([1, 3, 5])
        hhat = random_poly(rng, f9, 3, subfield_order=3)
        res = subfield_neg_criterion(f9, 3, t_, r, v, k, ell, hhat)
        if not res.hypothesis_ok:
            continue
        fired += 1
        d = res.params["d"]
        h = build_neg_inner(f9, t_, k, ell, hhat, d)
        hr = reduce_mod_cyclo(h, d)
        x_r = Poly(f9, [0] * r + [1])
        b1 = is_permutation_bruteforce(f9, x_r * compose_power(h, v))
        b2 = (is_permutation_bruteforce(f9, x_r * compose_power(hr, v))
              if not hr.is_zero() else False)
        assert b1 == b2 == res.verdict
    assert fired >= 25                                  # hypothesis fires here


# ---------------------------------------------------------------------------
# negative geometric corollary
# ---------------------------------------------------------------------------

def test_geom_neg_frozen_examples():
    f9 = get_field(9)
    res = geometric_neg_criterion(f9, 3, 1, 4, 1, 1, 5)
    assert res.hypothesis_ok and res.verdict is True
    f = parse_poly("x", f9) * compose_power(geom(5, f9), 2)
    assert is_permutation_bruteforce(f9, f)

    res = geometric_neg_criterion(f9, 3, 1, 4, 1, 1, 3)
    assert res.hypothesis_ok and res.verdict is False
    assert res.witness["gcd_k_pd"] == 3

    with pytest.raises(ValueError):
        geometric_neg_criterion(f9, 3, 1, 4, 2, 1, 5)        # gcd(d, e) = 2
    with pytest.raises(ValueError):
        geometric_neg_criterion(f9, 3, 1, 3, 1, 1, 5)        # 3 does not divide 8


def test_geom_neg_f49_sweep():
    """q0 = 7, d = 4 over F_49: hypothesis holds (7 = -1 mod 4); every
    verdict matches brute force on a small (k, t, e, r) sweep."""
    f49 = get_field(49)
    fired = 0
    for k in range(1, 8):
        for t_ in (1, 2):
            for e in (1, 3):
                for r in range(1, 6):
                    res = geometric_neg_criterion(f49, 7, t_, 4, e, r, k)
                    assert res.hypothesis_ok
                    fired += 1
                    h_mu = geometric_family_values(f49, k, t_, e, 4)
                    assert res.verdict == brute_cyclotomic(f49, r, 4, h_mu)
    assert fired == 7 * 2 * 2 * 5


# ---------------------------------------------------------------------------
# binomial criterion
# ---------------------------------------------------------------------------

def test_binomial_form_derivation():
    f81 = get_field(81)
    form = BinomialForm.for_field(f81, 17, 1, 1)
    assert (form.s, form.d, form.e) == (16, 5, 1)
    with pytest.raises(ValueError):
        BinomialForm.for_field(f81, 1, 1, 1)          # u > r required
    with pytest.raises(ValueError):
        BinomialForm.for_field(f81, 17, 1, 0)         # a nonzero


def test_binomial_frozen_examples():
    f9 = get_field(9)
    res = binomial_criterion(f9, BinomialForm.for_field(f9, 9, 1, 1))
    assert res.hypothesis_ok and res.verdict is True
    assert is_permutation_bruteforce(f9, parse_poly("x^9+x", f9))

    f7 = get_field(7)
    res = binomial_criterion(f7, BinomialForm.for_field(f7, 3, 1, 1))
    assert not res.hypothesis_ok
    assert res.witness == {"eta": 1, "value": 4}      # 2^2 = 4 != 1


def test_binomial_gcd_rejection_consistent_instance():
    # The d = 1 hypothesis scan passes exactly as in the u = 9 example;
    # u = 10, r = 2 then fails on gcd(r, s) = 2 and brute force agrees.
    f9 = get_field(9)
    form = BinomialForm.for_field(f9, 10, 2, 1)
    assert (form.s, form.d) == (8, 1)
    res = binomial_criterion(f9, form)
    assert res.hypothesis_ok and res.verdict is False
    assert res.witness["gcd_r_s"] == 2
    assert form.is_permutation(f9) is False


def test_binomial_unscannable_convention():
    # u = 9, r = 2 gives s = gcd(7, 8) = 1, d = 8; mu_16 does not fit in F_9,
    # so the hypothesis is reported unscannable rather than guessed.
    f9 = get_field(9)
    res = binomial_criterion(f9, BinomialForm.for_field(f9, 9, 2, 1))
    assert not res.hypothesis_ok and res.verdict is None
    assert "unscannable" in res.witness["reason"]


def test_binomial_even_characteristic_scans_mu_d():
    f4 = get_field(4)
    g = f4.gen()
    res = binomial_criterion(f4, BinomialForm.for_field(f4, 4, 1, g))
    assert res.hypothesis_ok and res.verdict is True
    form = BinomialForm.for_field(f4, 4, 1, g)
    assert form.is_permutation(f4) is True
    # a = 1 in characteristic 2 dies at eta = 1: 1 + 1/1 = 0
    res = binomial_criterion(f4, BinomialForm.for_field(f4, 4, 1, 1))
    assert not res.hypothesis_ok and res.witness["value"] == 0


def test_binomial_minus_a_leg_subsumed_by_scan():
    """If (-a)^d = 1 then -a = w^2 for some w in mu_2d, and the hypothesis
    scan hits eta = w where eta + a/eta = 0; so the minus-a leg can never be
    the one that rejects once the scan has passed.  Verify exhaustively."""
    for q in (5, 7, 9, 16, 25):
        field = get_field(q)
        for u in range(2, q + 1):
            for r in range(1, u):
                for a in range(1, q):
                    res = binomial_criterion(
                        field, BinomialForm.for_field(field, u, r, a))
                    if res.hypothesis_ok and res.verdict is False:
                        assert res.witness["minus_a_power_in_mu_d"] is False


# ---------------------------------------------------------------------------
# multi-term criterion
# ---------------------------------------------------------------------------

def test_multiterm_reduces_to_binomial_case():
    f9 = get_field(9)
    res = multiterm_criterion(f9, 1, 1, 1, 1, Poly(f9, [1]), 1)
    assert res.hypothesis_ok
    assert res.verdict is True and res.exact_subgroup_verdict is True
    assert res.discrepancy is False


def test_multiterm_hypothesis_failure_witness():
    f7 = get_field(7)
    res = multiterm_criterion(f7, 1, 1, 3, 1, Poly(f7, [1]), 1)
    assert not res.hypothesis_ok
    assert res.witness["eta"] == 1 and res.witness["first_leg"] == 4
    assert res.discrepancy is None


def test_multiterm_gcd_failure_both_paths():
    f9 = get_field(9)
    res = multiterm_criterion(f9, 2, 1, 1, 1, Poly(f9, [1]), 1)
    assert res.hypothesis_ok
    assert res.verdict is False and res.exact_subgroup_verdict is False
    assert res.discrepancy is False


def test_multiterm_validation_errors():
    f9 = get_field(9)
    with pytest.raises(ValueError):
        multiterm_criterion(f9, 1, 1, 3, 1, Poly(f9, [1]), 1)   # 3 ∤ 8
    with pytest.raises(ValueError):
        multiterm_criterion(f9, 1, 2, 2, 1, Poly(f9, [1]), 1)   # gcd(e,d)=2
    with pytest.raises(ValueError):
        multiterm_criterion(f9, 1, 1, 1, 0, Poly(f9, [1]), 1)   # t >= 1
    with pytest.raises(ValueError):
        multiterm_criterion(f9, 1, 1, 1, 1, Poly(f9, [1]), 0)   # a != 0


def test_multiterm_exact_verdict_is_authoritative(rng):
    """exact_subgroup_verdict always equals brute force; the gcd formula is
    compared against it through the discrepancy flag."""
    for q in (9, 16, 25, 49, 81):
        field = get_field(q)
        for _ in range(40):
            d = rng.choice(divisors(q - 1))
            es = [e for e in range(1, 5) if math.gcd(e, d) == 1]
            e = rng.choice(es)
            t_ = rng.randrange(1, 4)
            r = rng.randrange(1, 11)
            a = rng.randrange(1, q)
            hhat = random_poly(rng, field, 3)
            res = multiterm_criterion(field, r, e, d, t_, hhat, a)
            tt = tables(field)
            w = tt.add(tt.pow(tt.mu_codes(d), e),
                       np.full(d, field.element(a).code, dtype=np.int64))
            h_mu = tt.mul(tt.pow(w, t_),
                          tt.eval_terms_at(hhat.to_field(field).terms(),
                                           tt.pow(w, d)))
            assert res.exact_subgroup_verdict == brute_cyclotomic(
                field, r, d, h_mu)
            if res.hypothesis_ok:
                assert res.discrepancy == (res.verdict
                                           != res.exact_subgroup_verdict)


# ---------------------------------------------------------------------------
# dropped-parity instrumentation
# ---------------------------------------------------------------------------

def test_parity_dropped_formula_disagrees_only_at_d2():
    """Frozen d = 2 construction: over F_27 with q0 = 27 (odd extension
    degree 1) the parity-dropped formula wrongly certifies x * h_5(x^13);
    the honest criterion stays silent."""
    f27 = get_field(27)
    one = Poly(f27, [1])
    honest = subfield_neg_criterion(f27, 27, 1, 1, 13, 5, 1, one)
    assert not honest.hypothesis_ok                     # m_rel = 1 is odd
    dropped = subfield_neg_formula(f27, 27, 1, 1, 13, 5, 1, one)
    assert dropped.params["d"] == 2
    assert dropped.hypothesis_ok and dropped.verdict is True
    f = parse_poly("x", f27) * compose_power(geom(5, f27), 13)
    assert is_permutation_bruteforce(f27, f) is False   # the formula lies
