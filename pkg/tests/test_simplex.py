from fractions import Fraction

import pytest

from chanmetric.simplex import Row, solve_lp


def test_exact_vertex_optimum():
    rows = [Row.of([1, 2], ">=", 3), Row.of([2, 1], ">=", 3)]
    result = solve_lp([1, 1], rows)
    assert result.status == "optimal"
    assert result.x == (1, 1)
    assert result.value == 2


def test_fractional_optimum_stays_exact():
    result = solve_lp([1, 1], [Row.of([3, 3], ">=", 1)])
    assert result.value == Fraction(1, 3)
    assert all(isinstance(value, Fraction) for value in result.x)


def test_maximise_through_negated_objective():
    rows = [Row.of([1, 1], "<=", 4), Row.of([1, 0], "<=", 3)]
    result = solve_lp([-1, -1], rows)
    assert result.status == "optimal"
    assert result.value == -4


def test_negative_right_hand_side_and_equalities():
    result = solve_lp([1, 0], [Row.of([-1, 0], "=", -2), Row.of([0, 1], "<=", 5)])
    assert result.status == "optimal"
    assert result.x == (2, 0)


def test_infeasible_and_unbounded():
    assert solve_lp([1], [Row.of([1], ">=", 2), Row.of([1], "<=", 1)]).status == "infeasible"
    assert solve_lp([-1], [Row.of([1], ">=", 1)]).status == "unbounded"


def test_redundant_equalities_are_dropped():
    rows = [Row.of([1, 1], "=", 2), Row.of([2, 2], "=", 4)]
    result = solve_lp([1, 2], rows)
    assert result.status == "optimal"
    assert result.x == (2, 0)


def test_row_validation():
    with pytest.raises(ValueError):
        Row.of([1], "<", 1)
    with pytest.raises(ValueError):
        solve_lp([1, 1], [Row.of([1], "<=", 1)])
    assert Row.of([1, 1], "<=", 2).holds((Fraction(1), Fraction(1)))
    assert not Row.of([1, 1], ">=", 3).holds((Fraction(1), Fraction(1)))
