"""Exhaustive small-field census with per-criterion cross-validation.

Every enumerated map gets a brute-force permutation verdict plus the verdict
of each applicable criterion.  The census enforces the self-consistency
invariant: any criterion whose hypothesis held must agree with brute force
(for the dual-verdict multi-term criterion the exact subgroup verdict is the
one held to that standard; its stated gcd formula reports through the
discrepancy log instead).  Violations make the run abort-worthy: they are
collected and the CLI exits nonzero.

Two record families:
  * binomial: x^u + a*x^r over all 0 < r < u <= q-1 and a in F_q^*
    (or just a = 1 with a_sweep="one");
  * cyclotomic: the geometric family x^r * geom(k)(x^(e(q-1)/d))^t over all
    d | q-1, k <= 5, t in {1,2}, e <= 4 coprime to d, r <= 10.

Output order is deterministic: fields ascending by q, then fixed loop order
within a field; thread partitioning is by whole field and results merge in
q order, so the byte stream is independent of the thread count.
"""

from __future__ import annotations

import csv
import json
import math
import threading
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Any, Iterable, Iterator, Optional, TextIO

import numpy as np

from .gf import ORDER_CAP, FieldDesc, build_field, divisors, factorize, tables
from .poly import Poly, compose_power, geom
from .permcheck import (CriterionResult, cyclotomic_values_from_mu,
                        is_permutation_values, permutes_subgroup_values,
                        uniform_power_criterion)
from .criteria import (BinomialForm, binomial_criterion,
                       geometric_family_values, geometric_neg_criterion,
                       geometric_pos_criterion, multiterm_criterion,
                       subfield_neg_criterion, subfield_neg_formula,
                       subfield_pos_criterion)
from .lucas import lucas_period_criterion

__all__ = [
    "CENSUS_COLUMNS",
    "CRITERION_COLUMNS",
    "CensusRow",
    "CensusResult",
    "DiscrepancyLog",
    "fields_up_to",
    "prime_power_split",
    "run_census",
    "write_csv",
    "write_jsonl",
]

#: Fixed CSV schema: identification, form parameters, ground truth, criteria.
CRITERION_COLUMNS = ["subgroup", "uniform", "subfield_pos", "geom_pos",
                     "subfield_neg", "geom_neg", "binomial", "lucas",
                     "multiterm"]
CENSUS_COLUMNS = ["q", "p", "m", "form", "u", "r", "a", "d", "s",
                  "bruteforce"] + CRITERION_COLUMNS

# Cyclotomic-family sweep grid (documented; not externally configurable).
GEOM_K_MAX = 5
GEOM_T_VALUES = (1, 2)
GEOM_E_MAX = 4
GEOM_R_MAX = 10


def prime_power_split(q: int) -> Optional[tuple[int, int]]:
    """(p, m) with q = p^m, or None when q is not a prime power >= 2."""
    if q < 2:
        return None
    fac = factorize(q)
    if len(fac) != 1:
        return None
    return fac[0]


def fields_up_to(max_q: int) -> list[tuple[int, int, int]]:
    """All (q, p, m) with q <= max_q a prime power, ascending q."""
    out = []
    for q in range(2, max_q + 1):
        pm = prime_power_split(q)
        if pm is not None:
            out.append((q, pm[0], pm[1]))
    return out


class DiscrepancyLog:
    """Append-only, thread-safe sink for expected disagreement records."""

    def __init__(self) -> None:
        self._lock = threading.Lock()
        self._records: list[dict[str, Any]] = []

    def add(self, channel: str, payload: dict[str, Any]) -> None:
        with self._lock:
            self._records.append({"channel": channel, **payload})

    def records(self) -> list[dict[str, Any]]:
        with self._lock:
            return list(self._records)

    def count_by_channel(self) -> dict[str, int]:
        counts: dict[str, int] = {}
        for rec in self.records():
            counts[rec["channel"]] = counts.get(rec["channel"], 0) + 1
        return dict(sorted(counts.items()))


@dataclass
class CensusRow:
    cells: list[str]
    json_obj: dict[str, Any]


@dataclass
class CensusResult:
    rows: list[CensusRow]
    violations: list[dict[str, Any]]
    discrepancies: DiscrepancyLog
    summary: dict[str, Any]

    @property
    def consistent(self) -> bool:
        return not self.violations


def _cell(verdict: Optional[bool]) -> str:
    return "" if verdict is None else ("1" if verdict else "0")


def _subfield_orders(field: FieldDesc) -> list[tuple[int, int]]:
    """(q0, m0) for every subfield order q0 = p^m0, m0 | m, ascending."""
    return [(field.p ** m0, m0) for m0 in divisors(field.m)]


def _display(results: list[CriterionResult]) -> Optional[CriterionResult]:
    """The first hypothesis-ok result of a subfield-order sweep, if any."""
    for res in results:
        if res.hypothesis_ok:
            return res
    return None


class _FieldWorker:
    """Generates the census rows for one field, checking the invariant."""

    def __init__(self, field: FieldDesc, log: DiscrepancyLog):
        self.field = field
        self.log = log
        self.violations: list[dict[str, Any]] = []

    def _check(self, res: Optional[CriterionResult], brute: bool) -> None:
        """Abort-invariant: a hypothesis-ok verdict must equal brute force."""
        if res is None or not res.hypothesis_ok:
            return
        authoritative = (res.exact_subgroup_verdict
                         if res.criterion == "multiterm" else res.verdict)
        if authoritative != brute:
            self.violations.append({"criterion": res.criterion,
                                    "q": res.q, "params": res.params,
                                    "verdict": authoritative,
                                    "bruteforce": brute})

    def _row(self, form: str, u: Optional[int], r: int, a: Optional[int],
             d: int, s: int, brute: bool,
             results: dict[str, Optional[CriterionResult]]) -> CensusRow:
        f = self.field
        base = {"q": f.q, "p": f.p, "m": f.m, "form": form,
                "u": u, "r": r, "a": a, "d": d, "s": s}
        cells = [str(f.q), str(f.p), str(f.m), form,
                 "" if u is None else str(u), str(r),
                 "" if a is None else str(a), str(d), str(s),
                 "1" if brute else "0"]
        crit_json: dict[str, Any] = {}
        for name in CRITERION_COLUMNS:
            res = results.get(name)
            if res is None:
                cells.append("")
                crit_json[name] = None
            else:
                cells.append(_cell(res.verdict if res.hypothesis_ok else None))
                crit_json[name] = res.to_json_dict()
        return CensusRow(cells=cells,
                         json_obj={**base, "bruteforce": brute,
                                   "criteria": crit_json})

    # -- binomial family ----------------------------------------------------
    def binomial_rows(self, a_sweep: str) -> Iterator[CensusRow]:
        f = self.field
        q = f.q
        tt = tables(f)
        one = Poly(f, [1])
        a_codes = range(1, q) if a_sweep == "all" else range(1, 2)
        for u in range(2, q):
            for r in range(1, u):
                for a_code in a_codes:
                    form = BinomialForm.for_field(f, u, r, a_code)
                    d, s, e = form.d, form.s, form.e
                    mu = tt.mu_codes(d)
                    h_mu = tt.add(tt.pow(mu, e),
                                  np.full(d, a_code, dtype=np.int64))
                    values = cyclotomic_values_from_mu(f, r, d, h_mu)
                    brute = is_permutation_values(f, values)

                    sub_ok = (math.gcd(r, s) == 1 and
                              permutes_subgroup_values(f, r, d, h_mu))
                    sub_res = CriterionResult(
                        criterion="subgroup", q=q,
                        params={"r": r, "d": d, "s": s},
                        hypothesis_ok=True, verdict=sub_ok)

                    h_poly = Poly(f, [a_code] + [0] * (e - 1) + [1])
                    uni_res = uniform_power_criterion(f, r, d, h_poly)
                    bin_res = binomial_criterion(f, form)
                    lucas_res = None
                    if (a_code == 1 and d % 2 == 1 and
                            math.gcd(r, s) == 1 and math.gcd(e, d) == 1):
                        lucas_res = lucas_period_criterion(f, d, r, e)
                    multi_res = multiterm_criterion(f, r, e, d, 1, one, a_code)
                    if multi_res.discrepancy:
                        self.log.add("multiterm", {
                            "q": q, "params": multi_res.params,
                            "formula_verdict": multi_res.verdict,
                            "exact_verdict": multi_res.exact_subgroup_verdict})

                    for res in (sub_res, uni_res, bin_res, lucas_res, multi_res):
                        self._check(res, brute)

                    yield self._row(
                        "binomial", u, r, a_code, d, s, brute,
                        {"subgroup": sub_res, "uniform": uni_res,
                         "subfield_pos": None, "geom_pos": None,
                         "subfield_neg": None, "geom_neg": None,
                         "binomial": bin_res, "lucas": lucas_res,
                         "multiterm": multi_res})

    # -- geometric cyclotomic family -----------------------------------------
    def cyclotomic_rows(self) -> Iterator[CensusRow]:
        f = self.field
        q = f.q
        M = q - 1
        orders = _subfield_orders(f)
        for d in divisors(M):
            s = M // d
            for k in range(1, GEOM_K_MAX + 1):
                for t in GEOM_T_VALUES:
                    for e in [e for e in range(1, GEOM_E_MAX + 1)
                              if math.gcd(e, d) == 1]:
                        yield from self._geom_family_rows(d, s, k, t, e, orders)

    def _geom_family_rows(self, d: int, s: int, k: int, t: int, e: int,
                          orders: list[int]) -> Iterator[CensusRow]:
        f = self.field
        q = f.q
        form_name = f"geom(k={k},t={t},e={e})"
        h_mu = geometric_family_values(f, k, t, e, d)
        h_dense = compose_power(geom(k, f), e) ** t
        one = Poly(f, [1])
        v = e * s
        for r in range(1, min(GEOM_R_MAX, q - 1) + 1):
            values = cyclotomic_values_from_mu(f, r, d, h_mu)
            brute = is_permutation_values(f, values)

            sub_ok = (math.gcd(r, s) == 1 and
                      permutes_subgroup_values(f, r, d, h_mu))
            sub_res = CriterionResult(criterion="subgroup", q=q,
                                      params={"r": r, "d": d, "s": s},
                                      hypothesis_ok=True, verdict=sub_ok)
            uni_res = uniform_power_criterion(f, r, d, h_dense)

            pos_sub, pos_geom, neg_sub, neg_geom = [], [], [], []
            for q0, m0 in orders:
                pos_sub.append(subfield_pos_criterion(f, q0, d, r, h_dense))
                pos_geom.append(geometric_pos_criterion(f, q0, d, e, r, k, t))
                neg_sub.append(subfield_neg_criterion(f, q0, t, r, v, k, 1, one))
                neg_geom.append(geometric_neg_criterion(f, q0, t, d, e, r, k))
                if (f.m // m0) % 2 == 1:
                    self._hunt_parity_dropped(q0, t, r, v, k, brute)

            for res in (sub_res, uni_res, *pos_sub, *pos_geom,
                        *neg_sub, *neg_geom):
                self._check(res, brute)

            yield self._row(
                form_name, None, r, None, d, s, brute,
                {"subgroup": sub_res, "uniform": uni_res,
                 "subfield_pos": _display(pos_sub),
                 "geom_pos": _display(pos_geom),
                 "subfield_neg": _display(neg_sub),
                 "geom_neg": _display(neg_geom),
                 "binomial": None, "lucas": None, "multiterm": None})

    def _hunt_parity_dropped(self, q0: int, t: int, r: int, v: int, k: int,
                             brute: bool) -> None:
        """Negative-family formula with the even-degree requirement dropped
        (called only for odd extension degree, where the honest criterion is
        silent): log every disagreement with brute force — the expectation
        under study is that all of them have d = 2."""
        f = self.field
        res = subfield_neg_formula(f, q0, t, r, v, k, 1, Poly(f, [1]))
        if res.hypothesis_ok and res.verdict is not None and res.verdict != brute:
            self.log.add("neg_hunt", {
                "q": f.q, "q0": q0, "d": res.params["d"], "params": res.params,
                "formula_verdict": res.verdict, "bruteforce": brute})


def _field_rows(field: FieldDesc, form: str, a_sweep: str,
                log: DiscrepancyLog) -> tuple[list[CensusRow],
                                              list[dict[str, Any]]]:
    worker = _FieldWorker(field, log)
    if form == "binomial":
        rows = list(worker.binomial_rows(a_sweep))
    elif form == "cyclotomic":
        rows = list(worker.cyclotomic_rows())
    else:
        raise ValueError(f"unknown census form {form!r}")
    return rows, worker.violations


def run_census(max_q: int, form: str = "binomial", a_sweep: str = "all",
               threads: int = 1) -> CensusResult:
    """Enumerate all prime-power fields q <= max_q and produce the census."""
    if max_q < 2:
        raise ValueError("max_q must be at least 2 (the smallest field order)")
    if max_q > ORDER_CAP:
        raise ValueError(f"max_q={max_q} exceeds the field-order cap {ORDER_CAP}")
    if a_sweep not in ("all", "one"):
        raise ValueError("a_sweep must be 'all' or 'one'")
    if threads < 1:
        raise ValueError("threads must be >= 1")
    log = DiscrepancyLog()
    specs = fields_up_to(max_q)
    fields = [build_field(p, m) for (_, p, m) in specs]
    if threads == 1:
        chunks = [_field_rows(f, form, a_sweep, log) for f in fields]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            futures = [pool.submit(_field_rows, f, form, a_sweep, log)
                       for f in fields]
            chunks = [fut.result() for fut in futures]

    rows: list[CensusRow] = []
    violations: list[dict[str, Any]] = []
    for chunk_rows, chunk_violations in chunks:
        rows.extend(chunk_rows)
        violations.extend(chunk_violations)

    col_index = {name: CENSUS_COLUMNS.index(name) for name in CRITERION_COLUMNS}
    brute_idx = CENSUS_COLUMNS.index("bruteforce")
    certified = {name: 0 for name in CRITERION_COLUMNS}
    n_perm = 0
    for row in rows:
        if row.cells[brute_idx] == "1":
            n_perm += 1
        for name, idx in col_index.items():
            if row.cells[idx] == "1":
                certified[name] += 1
    summary = {
        "max_q": max_q,
        "form": form,
        "a_sweep": a_sweep,
        "fields": len(fields),
        "records": len(rows),
        "permutations": n_perm,
        "certified": certified,
        "discrepancies": log.count_by_channel(),
        "violations": len(violations),
    }
    return CensusResult(rows=rows, violations=violations, discrepancies=log,
                        summary=summary)


def write_csv(rows: Iterable[CensusRow], fh: TextIO) -> None:
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(CENSUS_COLUMNS)
    for row in rows:
        writer.writerow(row.cells)


def write_jsonl(rows: Iterable[CensusRow], fh: TextIO) -> None:
    for row in rows:
        fh.write(json.dumps(row.json_obj, separators=(",", ":")) + "\n")
