import random

import pytest

from blockseq.lp import Infeasible, LinearProgram, Unbounded, simplex_solve


def test_minimize_single_variable():
    lp = LinearProgram(["x"], [1.0])
    lp.add([1.0], ">=", 1.0)
    value, assignment = simplex_solve(lp)
    assert value == pytest.approx(1.0, abs=1e-9)
    assert assignment["x"] == pytest.approx(1.0, abs=1e-9)


def test_minimize_two_variables():
    lp = LinearProgram(["x", "y"], [1.0, 1.0])
    lp.add([1.0, 1.0], ">=", 2.0)
    lp.add([1.0, 0.0], "<=", 0.5)
    value, assignment = simplex_solve(lp)
    assert value == pytest.approx(2.0, abs=1e-9)
    assert assignment["x"] + assignment["y"] == pytest.approx(2.0, abs=1e-9)
    assert assignment["x"] <= 0.5 + 1e-9


def test_equality_constraint():
    lp = LinearProgram(["x", "y"], [2.0, 3.0])
    lp.add([1.0, 1.0], "=", 4.0)
    value, assignment = simplex_solve(lp)
    assert value == pytest.approx(8.0, abs=1e-9)
    assert assignment["x"] == pytest.approx(4.0, abs=1e-9)


def test_infeasible():
    lp = LinearProgram(["x"], [1.0])
    lp.add([1.0], "<=", -1.0)
    with pytest.raises(Infeasible):
        simplex_solve(lp)
    lp2 = LinearProgram(["x"], [1.0])
    lp2.add([1.0], ">=", 2.0)
    lp2.add([1.0], "<=", 1.0)
    with pytest.raises(Infeasible):
        simplex_solve(lp2)


def test_unbounded():
    lp = LinearProgram(["x"], [-1.0])
    lp.add([-1.0], "<=", 0.0)
    with pytest.raises(Unbounded):
        simplex_solve(lp)


def _random_feasible_lp(rng):
    nvar = rng.randint(2, 5)
    names = [f"x{i}" for i in range(nvar)]
    obj = [rng.uniform(0.1, 3.0) for _ in range(nvar)]
    lp = LinearProgram(names, obj)
    # constraints of the form sum(a_i x_i) >= b with a_i > 0 are always
    # feasible over x >= 0; mix in <= rows with generous rhs
    for _ in range(rng.randint(1, 4)):
        coeffs = [rng.uniform(0.1, 2.0) for _ in range(nvar)]
        lp.add(coeffs, ">=", rng.uniform(0.5, 4.0))
    for _ in range(rng.randint(0, 2)):
        coeffs = [rng.uniform(0.0, 1.0) for _ in range(nvar)]
        lp.add(coeffs, "<=", rng.uniform(50.0, 80.0))
    return lp


def test_row_scaling_invariance():
    rng = random.Random(8)
    for _ in range(25):
        lp = _random_feasible_lp(rng)
        v1, _ = simplex_solve(lp)
        scaled = LinearProgram(lp.names, lp.objective)
        for coeffs, rel, rhs in lp.constraints:
            f = rng.uniform(0.2, 9.0)
            scaled.add([f * c for c in coeffs], rel, f * rhs)
        v2, _ = simplex_solve(scaled)
        assert v1 == pytest.approx(v2, abs=1e-9, rel=1e-9)


def test_against_scipy_reference():
    scipy_opt = pytest.importorskip("scipy.optimize")
    rng = random.Random(15)
    for _ in range(40):
        lp = _random_feasible_lp(rng)
        value, assignment = simplex_solve(lp)
        A_ub, b_ub, A_eq, b_eq = [], [], [], []
        for coeffs, rel, rhs in lp.constraints:
            if rel == "<=":
                A_ub.append(coeffs)
                b_ub.append(rhs)
            elif rel == ">=":
                A_ub.append([-c for c in coeffs])
                b_ub.append(-rhs)
            else:
                A_eq.append(coeffs)
                b_eq.append(rhs)
        ref = scipy_opt.linprog(lp.objective, A_ub=A_ub or None,
                                b_ub=b_ub or None, A_eq=A_eq or None,
                                b_eq=b_eq or None, method="highs")
        assert ref.success
        assert value == pytest.approx(ref.fun, abs=1e-7, rel=1e-7)
        # our assignment satisfies every constraint
        for coeffs, rel, rhs in lp.constraints:
            lhs = sum(c * assignment[nm] for c, nm in zip(coeffs, lp.names))
            if rel == "<=":
                assert lhs <= rhs + 1e-9
            elif rel == ">=":
                assert lhs >= rhs - 1e-9
            else:
                assert lhs == pytest.approx(rhs, abs=1e-9)


def test_linear_program_add_validation():
    from blockseq.lp import LPError
    lp = LinearProgram(["x", "y"], [1.0, 1.0])
    with pytest.raises(LPError):
        lp.add([1.0], ">=", 1.0)
    with pytest.raises(LPError):
        lp.add([1.0, 2.0], ">>", 1.0)
