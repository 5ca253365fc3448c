"""The exact simplex engine: feasibility, certificates, warm-started optima."""

import random

import pytest

from taildep.errors import UnboundedObjective
from taildep.lp import ExactSimplex, solve_feasibility
from taildep.rationals import ZERO, rat


def farkas_is_valid(rows, rhs, y):
    n = len(rows[0]) if rows else 0
    for j in range(n):
        if sum((y[i] * rows[i][j] for i in range(len(rows))), ZERO) > 0:
            return False
    return sum((yi * bi for yi, bi in zip(y, rhs)), ZERO) > 0


def witness_is_valid(rows, rhs, x):
    if any(v < 0 for v in x):
        return False
    for row, b in zip(rows, rhs):
        if sum((a * v for a, v in zip(row, x) if v), ZERO) != rat(b):
            return False
    return True


def test_simple_feasible():
    res = solve_feasibility([[1, 1], [1, 0]], [3, 1])
    assert res.feasible
    assert res.x == [1, 2]


def test_simple_infeasible_with_certificate():
    rows = [[1, 1], [1, 1]]
    rhs = [1, 2]
    res = solve_feasibility(rows, rhs)
    assert not res.feasible
    assert farkas_is_valid(rows, [rat(v) for v in rhs], res.farkas)


def test_negative_rhs_handled_by_sign_flip():
    rows = [[-1, 0], [0, 1]]
    rhs = [-2, 1]
    res = solve_feasibility(rows, rhs)
    assert res.feasible
    assert witness_is_valid([[rat(v) for v in r] for r in rows], rhs, res.x)


def test_redundant_rows_are_dropped():
    rows = [[1, 1], [2, 2], [1, 0]]
    rhs = [2, 4, 1]
    res = solve_feasibility(rows, rhs)
    assert res.feasible
    assert witness_is_valid([[rat(v) for v in r] for r in rows], rhs, res.x)


def test_zero_system():
    res = solve_feasibility([[0, 0]], [0])
    assert res.feasible and res.x == [0, 0]
    res2 = solve_feasibility([[0, 0]], [1])
    assert not res2.feasible


def test_empty_system():
    res = solve_feasibility([], [])
    assert res.feasible and res.x == []


def test_randomized_feasible_and_infeasible(rng):
    for trial in range(60):
        m = rng.randint(1, 6)
        n = rng.randint(1, 10)
        rows = [[rat(rng.randint(0, 4)) for _ in range(n)] for _ in range(m)]
        if rng.random() < 0.5:
            # plant a solution
            x0 = [rat(rng.randint(0, 5), rng.randint(1, 3)) for _ in range(n)]
            rhs = [sum((a * v for a, v in zip(row, x0)), ZERO) for row in rows]
            res = solve_feasibility(rows, rhs)
            assert res.feasible
            assert witness_is_valid(rows, rhs, res.x)
        else:
            rhs = [rat(rng.randint(-6, 6)) for _ in range(m)]
            res = solve_feasibility(rows, rhs)
            if res.feasible:
                assert witness_is_valid(rows, rhs, res.x)
            else:
                assert farkas_is_valid(rows, rhs, res.farkas)


def test_optimize_bounded_polytope():
    # x1 + x2 + s = 4, x1 <= 3 (slack t): maximize x1 + 2 x2
    rows = [[1, 1, 1, 0], [1, 0, 0, 1]]
    rhs = [4, 3]
    lp = ExactSimplex(rows, rhs)
    assert lp.feasible
    value, x = lp.maximize([1, 2, 0, 0])
    assert value == 8 and x[1] == 4
    value, x = lp.minimize([1, 2, 0, 0])
    assert value == 0
    # warm-started re-optimization under a different objective
    value, x = lp.maximize([5, 1, 0, 0])
    assert value == 5 * 3 + 1 * 1


def test_unbounded_objective_detected():
    lp = ExactSimplex([[1, -1]], [1])
    assert lp.feasible
    with pytest.raises(UnboundedObjective):
        lp.maximize([1, 1])


def test_degenerate_cycling_guard():
    # Klee-Minty-flavored degenerate system; must terminate exactly.
    rng = random.Random(5)
    for _ in range(20):
        n = 6
        rows = []
        rhs = []
        for i in range(4):
            rows.append([rat(rng.randint(0, 2)) for _ in range(n)])
            rhs.append(ZERO)  # fully degenerate right-hand side
        res = solve_feasibility(rows, rhs)
        assert res.feasible  # x = 0 always works
        assert all(v == 0 or v >= 0 for v in res.x)
