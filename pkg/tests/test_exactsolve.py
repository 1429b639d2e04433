from fractions import Fraction
from itertools import product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pcsplab.exactsolve import (
    Infeasible,
    linear_system,
    lp_feasible_point,
    lp_positive_support,
    solve_linear_diophantine,
)


def test_dioph_simple():
    sys = linear_system(["x", "y"], [((1, 1), 1)])
    sol = solve_linear_diophantine(sys)
    assert sol is not None and sol["x"] + sol["y"] == 1


def test_dioph_parity_infeasible():
    assert solve_linear_diophantine(linear_system(["x"], [((2,), 1)])) is None


def test_dioph_divisibility_infeasible():
    assert solve_linear_diophantine(linear_system(["t"], [((3,), 1)])) is None


def test_dioph_rejects_nonneg():
    with pytest.raises(ValueError):
        solve_linear_diophantine(linear_system(["x"], [((1,), 1)], nonneg=["x"]))


def test_dioph_rational_input_cleared():
    sys = linear_system(["x", "y"], [((Fraction(1, 2), Fraction(1, 2)), Fraction(1, 2))])
    sol = solve_linear_diophantine(sys)
    assert sol["x"] + sol["y"] == 1


def _brute_force_int(sys, B=5):
    names = sys.variables
    for vals in product(range(-B, B + 1), repeat=len(names)):
        a = dict(zip(names, vals))
        if sys.check(a):
            return a
    return None


@settings(max_examples=60, deadline=None)
@given(st.data())
def test_dioph_agrees_with_box_search(data):
    k = data.draw(st.integers(1, 4))
    m = data.draw(st.integers(1, 3))
    names = [f"v{i}" for i in range(k)]
    eqs = []
    for _ in range(m):
        coeffs = tuple(data.draw(st.integers(-3, 3)) for _ in range(k))
        const = data.draw(st.integers(-4, 4))
        eqs.append((coeffs, const))
    sys = linear_system(names, eqs)
    got = solve_linear_diophantine(sys)
    brute = _brute_force_int(sys)
    if brute is not None:
        assert got is not None and sys.check(got)
    if got is None:
        assert brute is None


def test_lp_simplex_pair():
    sys = linear_system(["x", "y"], [((1, 1), 1)], nonneg=["x", "y"])
    pt = lp_feasible_point(sys)
    assert pt is not None and pt["x"] + pt["y"] == 1 and pt["x"] >= 0 and pt["y"] >= 0


def test_lp_negative_forced_infeasible():
    sys = linear_system(["x"], [((1,), -1)], nonneg=["x"])
    assert lp_feasible_point(sys) is None


def test_lp_free_variables():
    sys = linear_system(["x", "y"], [((1, 1), 0), ((1, -1), 3)])
    pt = lp_feasible_point(sys)
    assert pt == {"x": Fraction(3, 2), "y": Fraction(-3, 2)}


def test_support_both_positive():
    sys = linear_system(["x", "y"], [((1, 1), 1)], nonneg=["x", "y"])
    assert lp_positive_support(sys) == {"x", "y"}


def test_support_forced_zero():
    sys = linear_system(["x", "y"], [((1, 1), 1), ((0, 1), 0)], nonneg=["x", "y"])
    assert lp_positive_support(sys) == {"x"}


def test_support_infeasible_raises():
    sys = linear_system(["x"], [((1,), -2)], nonneg=["x"])
    with pytest.raises(Infeasible):
        lp_positive_support(sys)


def test_support_unbounded_direction():
    sys = linear_system(["x", "y"], [((1, -1), 0)], nonneg=["x", "y"])
    assert lp_positive_support(sys) == {"x", "y"}


def _random_vertices_support(sys, trials=1000, seed=7):
    """Union of supports over random feasible points of a tiny system."""
    import random

    rng = random.Random(seed)
    seen = set()
    names = sys.variables
    for _ in range(trials):
        # random nonnegative rational candidates with small denominators
        cand = {v: Fraction(rng.randint(0, 6), rng.randint(1, 4)) for v in names}
        if sys.check(cand):
            seen |= {v for v in names if cand[v] > 0}
    return seen


@settings(max_examples=25, deadline=None)
@given(st.data())
def test_support_is_superset_of_sampled(data):
    k = data.draw(st.integers(1, 4))
    names = [f"v{i}" for i in range(k)]
    coeffs = tuple(data.draw(st.integers(0, 2)) for _ in range(k))
    const = data.draw(st.integers(0, 4))
    sys = linear_system(names, [(coeffs, const)], nonneg=names)
    pt = lp_feasible_point(sys)
    if pt is None:
        return
    support = lp_positive_support(sys)
    sampled = _random_vertices_support(sys, trials=400)
    assert sampled <= support


def test_resubstitution_exactness():
    # 1/3-flavoured system: exact arithmetic must hold with no tolerance
    sys = linear_system(
        ["a", "b", "c"],
        [((1, 1, 1), 1), ((1, -1, 0), 0), ((0, 1, -1), 0)],
        nonneg=["a", "b", "c"],
    )
    pt = lp_feasible_point(sys)
    assert pt == {"a": Fraction(1, 3), "b": Fraction(1, 3), "c": Fraction(1, 3)}
