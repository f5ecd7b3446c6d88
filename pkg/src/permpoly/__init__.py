"""Permutation-polynomial criteria over finite fields.

The package builds explicit finite fields F_q for prime powers q up to
2**20, evaluates polynomials of the shape x^r * h(x^s) on the order-d
subgroup of the multiplicative group (where s*d = q-1), and implements a
family of permutation criteria that reduce the full-field question to that
subgroup.  Every criterion returns a structured CriterionResult and is
cross-validated against brute force by the census machinery.
"""

from .gf import (ORDER_CAP, FieldDesc, FieldElement, SubfieldHandle,
                 build_field, divisors, factorize, field_from_order,
                 in_subfield, mu, parse_field_spec, subfield, tables)
from .poly import (NEG_INFINITY, Poly, compose_power, format_poly, geom,
                   has_root_in_mu, parse_poly, poly_from_elements,
                   reduce_mod_cyclo)
from .permcheck import (CriterionResult, CyclotomicForm, cyclotomic_values,
                        cyclotomic_values_from_mu, is_permutation_bruteforce,
                        is_permutation_values, permutes_subgroup,
                        permutes_subgroup_values, subgroup_criterion,
                        uniform_power_criterion)
from .criteria import (BinomialForm, binomial_criterion, build_neg_inner,
                       geometric_family_values, geometric_neg_criterion,
                       geometric_pos_criterion, multiterm_criterion,
                       neg_inner_values, negative_form_params,
                       subfield_neg_criterion, subfield_neg_formula,
                       subfield_pos_criterion)
from .lucas import (LucasParams, NormalFormParams, lucas_exact, lucas_mod_p,
                    lucas_period_criterion, period_implies_binomial)
from .census import (CensusResult, CensusRow, DiscrepancyLog, run_census,
                     write_csv, write_jsonl)

__version__ = "0.1.0"

__all__ = [
    "ORDER_CAP", "FieldDesc", "FieldElement", "SubfieldHandle",
    "build_field", "divisors", "factorize", "field_from_order",
    "in_subfield", "mu", "parse_field_spec", "subfield", "tables",
    "NEG_INFINITY", "Poly", "compose_power", "format_poly", "geom",
    "has_root_in_mu", "parse_poly", "poly_from_elements", "reduce_mod_cyclo",
    "CriterionResult", "CyclotomicForm", "cyclotomic_values",
    "cyclotomic_values_from_mu", "is_permutation_bruteforce",
    "is_permutation_values", "permutes_subgroup",
    "permutes_subgroup_values", "subgroup_criterion",
    "uniform_power_criterion",
    "BinomialForm", "binomial_criterion", "build_neg_inner",
    "geometric_family_values", "geometric_neg_criterion",
    "geometric_pos_criterion", "multiterm_criterion", "neg_inner_values",
    "negative_form_params", "subfield_neg_criterion", "subfield_neg_formula",
    "subfield_pos_criterion",
    "LucasParams", "NormalFormParams", "lucas_exact", "lucas_mod_p",
    "lucas_period_criterion", "period_implies_binomial",
    "CensusResult", "CensusRow", "DiscrepancyLog", "run_census",
    "write_csv", "write_jsonl",
    "__version__",
]
