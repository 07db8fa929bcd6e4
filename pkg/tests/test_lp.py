import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from goodcycles.lp import (
    Feasible,
    Infeasible,
    LinearSystem,
    Row,
    build_lp,
    decide_feasibility,
    phase_one,
    verify_verdict,
)


def test_single_variable_contradiction():
    # x >= 1 (bound) and x <= 0
    sys = LinearSystem(("x",), (1,), (Row((1,), "<=", 0, "x<=0"),))
    v = decide_feasibility(sys)
    assert isinstance(v, Infeasible)
    assert v.farkas == (1, 1)
    assert verify_verdict(sys, v)


def test_redundant_rows_get_zero_multiplier():
    sys = LinearSystem(("x",), (0,), (Row((1,), ">=", 1), Row((1,), "<=", 0)))
    v = decide_feasibility(sys)
    assert isinstance(v, Infeasible)
    assert v.farkas[0] == 0 and v.farkas[1] > 0 and v.farkas[2] > 0


def test_feasible_point_exact():
    sys = LinearSystem(("x", "y"), (0, 1), (Row((1, -1), "=", 0), Row((1, 1), "<=", 3)))
    v = decide_feasibility(sys)
    assert isinstance(v, Feasible)
    assert all(isinstance(p, Fraction) for p in v.point)
    assert verify_verdict(sys, v)


def test_fractional_vertex():
    sys = LinearSystem(("x", "y"), (0, 0), (Row((3, 0), "=", 1), Row((0, 3), ">=", 2), Row((1, 1), "<=", 1)))
    v = decide_feasibility(sys)
    assert isinstance(v, Feasible)
    assert v.point[0] == Fraction(1, 3)
    assert verify_verdict(sys, v)


def test_verifier_rejects_bad_verdicts():
    sys = LinearSystem(("x",), (1,), (Row((1,), "<=", 0),))
    assert not verify_verdict(sys, Feasible((Fraction(0),)))
    assert not verify_verdict(sys, Infeasible((Fraction(-1), Fraction(1))))
    assert not verify_verdict(sys, Infeasible((Fraction(0), Fraction(0))))
    assert not verify_verdict(sys, Infeasible((Fraction(1),)))
    assert not verify_verdict(sys, Feasible((0.5,)))


def test_equality_multiplier_may_be_negative():
    # x = 2 contradicts x <= 1; certificate uses the equality with negative sign
    sys = LinearSystem(("x",), (0,), (Row((1,), "=", 2, "eq"), Row((1,), "<=", 1)))
    v = decide_feasibility(sys)
    assert isinstance(v, Infeasible) and verify_verdict(sys, v)


def test_bad_rows_rejected():
    with pytest.raises(ValueError):
        Row((1,), "<")
    with pytest.raises(ValueError):
        LinearSystem(("x",), (0,), (Row((1, 1), "<="),))


def test_phase_one_direct():
    ok, x = phase_one([[Fraction(1), Fraction(1)]], [Fraction(2)])
    assert ok and sum(x) == 2
    ok, y = phase_one([[Fraction(1)], [Fraction(1)]], [Fraction(1), Fraction(2)])
    assert not ok


def random_system(rng, n, m):
    rows = []
    for k in range(m):
        coeffs = tuple(rng.randint(-3, 3) for _ in range(n))
        rows.append(Row(coeffs, rng.choice([">=", "<=", "="]), rng.randint(-4, 4), f"r{k}"))
    lower = tuple(rng.randint(0, 2) for _ in range(n))
    return LinearSystem(tuple(f"x{j}" for j in range(n)), lower, tuple(rows))


@settings(max_examples=150, deadline=None)
@given(st.integers(0, 10**9), st.integers(1, 4), st.integers(1, 5))
def test_random_systems_verdicts_verify(seed, n, m):
    sys = random_system(random.Random(seed), n, m)
    fast = decide_feasibility(sys)
    slow = decide_feasibility(sys, prescreen=False)
    assert verify_verdict(sys, fast) and verify_verdict(sys, slow)
    assert type(fast) is type(slow)


def test_k33_lp_matches_prescreen_off():
    from goodcycles.config_graph import Configuration, build_configuration_graph, enumerate_good_cycles
    from goodcycles.obg import builtin_graph, equivalence_classes

    g = equivalence_classes(builtin_graph("K33"))[0]
    rng = random.Random(11)
    for _ in range(3):
        tau = {v: rng.sample(g.base.neighbors[v], len(g.base.neighbors[v])) for v in g.base.vertices}
        G = build_configuration_graph(Configuration.from_mapping(g, tau))
        sys = build_lp(G, enumerate_good_cycles(G))
        a, b = decide_feasibility(sys), decide_feasibility(sys, prescreen=False)
        assert type(a) is type(b)
        assert verify_verdict(sys, a) and verify_verdict(sys, b)
