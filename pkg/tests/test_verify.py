import json

import numpy as np
import pytest

from kaprekar import three_digit, two_digit
from kaprekar.orbits import BudgetError
from kaprekar.verify import (
    Check,
    scaling_checks,
    survey,
    verify,
    verify_range,
    verify_three_digit,
    verify_two_digit,
)

TWO_DIGIT_CHECKS = ["cycle_inventory", "cycle_lengths", "periodic_set", "max_step_bound", "step_agreement"]


def test_two_digit_base_14():
    rep = verify_two_digit(14)
    assert rep.overall
    assert [c.name for c in rep.checks] == TWO_DIGIT_CHECKS
    assert rep.notes["index_cycles"] == [[1, 13, 11, 7], [3, 9], [5]]
    assert rep.notes["max_step_exact"] == 2


def test_two_digit_base_59():
    rep = verify_two_digit(59)
    assert rep.overall
    assert rep.notes["index_cycles"] == [[4, 52, 44, 28], [12, 36], [20]]
    assert rep.notes["max_step_exact"] == 4
    assert rep.notes["bound_tight"]


@pytest.mark.parametrize("m", [3, 7, 15, 31, 63])
def test_two_digit_power_of_two(m):
    rep = verify_two_digit(m)
    assert rep.overall
    assert rep.notes["index_cycles"] == []


def test_three_digit_examples():
    rep = verify_three_digit(10)
    assert rep.overall
    assert rep.checks[0].observed == [[0], [495]]
    assert rep.notes["max_step_exact"] == 6

    rep = verify_three_digit(13)
    assert rep.overall
    assert rep.checks[0].observed == [[0], [1008, 1176]]
    assert rep.notes["max_step_exact"] == 7
    assert rep.notes["fixed_digits"] == ["(5,12,7)", "(6,12,6)"]

    rep = verify_three_digit(2)
    assert rep.overall
    assert rep.checks[0].observed == [[0], [3]]


@pytest.mark.parametrize("m", [5000, 65535, 100000])
def test_index_space_two_digit(m):
    rep = verify_two_digit(m, full=False)
    assert rep.overall
    assert [c.name for c in rep.checks] == TWO_DIGIT_CHECKS[:3]


@pytest.mark.parametrize("m", [1025, 4096])
def test_index_space_three_digit(m):
    assert verify_three_digit(m, full=False).overall


def test_budget_refusal():
    with pytest.raises(BudgetError, match="budget"):
        verify_two_digit(65537)
    with pytest.raises(BudgetError, match="budget"):
        verify_three_digit(1025)
    with pytest.raises(BudgetError):
        verify_two_digit(100, budget=9999)


def test_no_closed_form_for_four_digits():
    with pytest.raises(ValueError):
        verify(10, 4)


def test_step_mismatch_reports_smallest_counterexample(monkeypatch):
    real = two_digit.step_table

    def corrupted(m):
        t = real(m).copy()
        t[[40, 17, 90]] += 1
        return t

    monkeypatch.setattr(two_digit, "step_table", corrupted)
    rep = verify_two_digit(14)
    assert not rep.overall
    [bad] = rep.failures
    assert bad.name == "step_agreement"
    assert bad.counterexample["x"] == 17
    assert bad.observed["mismatches"] == 3


def test_inventory_mismatch(monkeypatch):
    monkeypatch.setattr(two_digit, "fixed_sets", lambda m: [(5,)])
    rep = verify_two_digit(14)
    names = {c.name for c in rep.failures}
    assert "cycle_inventory" in names
    assert rep.failures[0].counterexample == 13


def test_three_digit_max_step_mismatch(monkeypatch):
    monkeypatch.setattr(three_digit, "max_step", three_digit.max_step_formula)
    assert verify_three_digit(4).overall
    rep = verify_three_digit(3)
    assert [c.name for c in rep.failures] == ["max_step"]


def test_check_relations():
    assert Check("a", 4, 3, relation="<=").passed
    assert not Check("a", 2, 3, relation="<=").passed
    assert Check("a", [1, [2]], [1, [2]]).passed
    assert not Check("a", [1, 2], [2, 1]).passed


def test_reports_serialise_canonically():
    for rep in (verify_two_digit(59), verify_three_digit(13)):
        text = json.dumps(rep.to_dict(), sort_keys=True)
        assert json.dumps(json.loads(text), sort_keys=True) == text


def test_parallel_range_matches_serial():
    serial = verify_range(range(2, 40), 2)
    parallel = verify_range(range(2, 40), 2, jobs=2)
    assert [r.to_dict() for r in serial] == [r.to_dict() for r in parallel]


def test_scaling_checks_over_range():
    reports = verify_range(range(2, 200), 2)
    checks = scaling_checks({r.m: r.notes["index_cycles"] for r in reports})
    names = [c.name for c in checks]
    assert "scaling 14->59" in names and "periods 14->59" in names
    assert "scaling 14->29" in names
    assert all(c.passed for c in checks)


def test_scaling_checks_detect_corruption():
    cycles = {14: [[1, 13, 11, 7], [3, 9], [5]], 59: [[4, 52, 44, 28], [12, 36]]}
    failed = [c.name for c in scaling_checks(cycles) if not c.passed]
    assert failed == ["scaling 14->59", "periods 14->59"]


def test_survey_two_digit_rows():
    rows = survey(range(2, 17), 2)
    assert [r.m for r in rows] == list(range(2, 17))
    row = rows[12]
    assert row.m == 14
    assert row.minimal_periods == [1, 2, 4]
    assert (row.r, row.max_step_exact, row.bound_tight) == (0, 2, True)
    assert rows[1].minimal_periods == []  # m = 3


def test_survey_single_rows():
    [row] = survey([59], 2)
    assert (row.r, row.max_step_exact, row.max_step_predicted) == (2, 4, 4)
    [row] = survey([10], 3)
    assert row.cycle_sizes == [1] and row.max_step_exact == 6 and row.r is None


def test_survey_budget_failure_is_per_row():
    rows = survey([5, 400, 6], 2, budget=1000)
    assert rows[1].error and "budget" in rows[1].error
    assert rows[0].error is None and rows[2].error is None
    assert "error" not in rows[0].to_dict()


def test_survey_three_digit_range():
    for row in survey(range(2, 51), 3):
        assert row.cycle_count == 1
        assert row.max_step_exact == row.max_step_predicted == three_digit.max_step(row.m)
        assert row.cycle_sizes == [1 if row.m % 2 == 0 else 2]


def test_survey_two_digit_bound():
    for row in survey(range(2, 101), 2):
        assert row.max_step_exact <= row.max_step_predicted
        assert row.bound_tight == (row.max_step_exact == row.max_step_predicted)


def test_repeatable():
    a = [r.to_dict() for r in survey(range(2, 30), 2)]
    b = [r.to_dict() for r in survey(range(2, 30), 2)]
    assert a == b
    assert np.array_equal(two_digit.step_table(30), two_digit.step_table(30))
