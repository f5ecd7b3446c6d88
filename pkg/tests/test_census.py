"""Census engine: frozen whole-run summaries, the per-row consistency
invariant, output determinism across thread counts, and the serialization
formats."""

import io
import json

import pytest

from permpoly.census import (CENSUS_COLUMNS, CRITERION_COLUMNS, run_census,
                             write_csv, write_jsonl)

GOLDEN_HEADER = ("q,p,m,form,u,r,a,d,s,bruteforce,subgroup,uniform,"
                 "subfield_pos,geom_pos,subfield_neg,geom_neg,binomial,"
                 "lucas,multiterm")

BRUTE_IDX = CENSUS_COLUMNS.index("bruteforce")
SUBGROUP_IDX = CENSUS_COLUMNS.index("subgroup")


@pytest.fixture(scope="module")
def binomial16():
    return run_census(16, form="binomial", a_sweep="all")


@pytest.fixture(scope="module")
def cyclotomic16():
    return run_census(16, form="cyclotomic")


def test_columns_golden():
    assert ",".join(CENSUS_COLUMNS) == GOLDEN_HEADER
    assert CRITERION_COLUMNS == ["subgroup", "uniform", "subfield_pos",
                                 "geom_pos", "subfield_neg", "geom_neg",
                                 "binomial", "lucas", "multiterm"]


def test_binomial_census_frozen_summary(binomial16):
    s = binomial16.summary
    assert s["fields"] == 10                     # 2..16: ten prime powers
    assert s["records"] == 3313
    assert s["permutations"] == 80
    assert s["violations"] == 0 and binomial16.consistent
    assert s["certified"]["subgroup"] == 80      # exact criterion: all of them
    assert s["certified"]["uniform"] == 13
    # u <= q-1 keeps u - r < q - 1, so d = 1 (the x^u row regime where the
    # binomial scan can fire at these sizes) is out of range: no certificates
    assert s["certified"]["binomial"] == 0
    assert s["discrepancies"] == {}


def test_cyclotomic_census_frozen_summary(cyclotomic16):
    s = cyclotomic16.summary
    assert s["records"] == 6550
    assert s["permutations"] == 1549
    assert s["violations"] == 0 and cyclotomic16.consistent
    assert s["certified"] == {"subgroup": 1549, "uniform": 1507,
                              "subfield_pos": 952, "geom_pos": 952,
                              "subfield_neg": 533, "geom_neg": 533,
                              "binomial": 0, "lucas": 0, "multiterm": 0}
    assert s["discrepancies"] == {"neg_hunt": 38}


def test_neg_hunt_disagreements_all_land_at_d2(cyclotomic16):
    recs = [r for r in cyclotomic16.discrepancies.records()
            if r["channel"] == "neg_hunt"]
    assert len(recs) == 38
    assert {r["d"] for r in recs} == {2}
    for r in recs:
        assert r["formula_verdict"] != r["bruteforce"]


def test_subgroup_column_equals_bruteforce_everywhere(binomial16,
                                                      cyclotomic16):
    for result in (binomial16, cyclotomic16):
        for row in result.rows:
            assert row.cells[SUBGROUP_IDX] == row.cells[BRUTE_IDX]


def test_multiterm_exact_equals_bruteforce(binomial16):
    checked = 0
    for row in binomial16.rows:
        crit = row.json_obj["criteria"]["multiterm"]
        assert crit is not None
        assert crit["exact_subgroup_verdict"] == row.json_obj["bruteforce"]
        checked += 1
    assert checked == 3313


def test_csv_and_jsonl_round_trip(binomial16):
    buf = io.StringIO()
    write_csv(binomial16.rows, buf)
    lines = buf.getvalue().splitlines()
    assert lines[0] == GOLDEN_HEADER
    assert len(lines) == 1 + 3313
    first = lines[1].split(",")
    assert len(first) == len(CENSUS_COLUMNS)
    # q = 2 has no u in (1, q), so the stream opens with x^2 + x over F_3
    assert first[:10] == ["3", "3", "1", "binomial", "2", "1", "1", "2",
                          "1", "0"]

    buf = io.StringIO()
    write_jsonl(binomial16.rows[:5], buf)
    docs = [json.loads(line) for line in buf.getvalue().splitlines()]
    assert len(docs) == 5
    for doc in docs:
        assert list(doc)[:10] == ["q", "p", "m", "form", "u", "r", "a",
                                  "d", "s", "bruteforce"]
        assert set(doc["criteria"]) == set(CRITERION_COLUMNS)
        sub = doc["criteria"]["subgroup"]
        assert sub["criterion"] == "subgroup" and sub["hypothesis_ok"]
        assert doc["criteria"]["subfield_pos"] is None   # binomial family


def test_thread_count_does_not_change_output():
    outputs = []
    for threads in (1, 3, 4):
        res = run_census(27, form="binomial", a_sweep="one", threads=threads)
        buf = io.StringIO()
        write_csv(res.rows, buf)
        outputs.append(buf.getvalue())
    assert outputs[0] == outputs[1] == outputs[2]


def test_run_census_validation():
    with pytest.raises(ValueError):
        run_census(1)
    with pytest.raises(ValueError):
        run_census(9, form="trinomial")
    with pytest.raises(ValueError):
        run_census(9, a_sweep="some")
    with pytest.raises(ValueError):
        run_census(9, threads=0)
    with pytest.raises(ValueError):
        run_census((1 << 20) + 1)


def test_a_sweep_one_is_a_restriction(binomial16):
    one = run_census(16, form="binomial", a_sweep="one")
    keyed_all = {tuple(r.cells[:9]): r.cells for r in binomial16.rows}
    assert one.summary["records"] < binomial16.summary["records"]
    for row in one.rows:
        assert row.json_obj["a"] == 1
        assert keyed_all[tuple(row.cells[:9])] == row.cells
