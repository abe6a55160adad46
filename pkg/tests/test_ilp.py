import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from ciqp.ilp import IlpUndecided, find_integer_point, solve_ilp
from ciqp.lp import LpProblem


def brute_ilp(p):
    lo, hi = p.bounds()
    best = None
    for x in itertools.product(*[range(a, b + 1) for a, b in zip(lo, hi)]):
        if all(sum(a * v for a, v in zip(r, x)) <= bi for r, bi in zip(p.A, p.b)):
            val = sum(Fraction(c) * v for c, v in zip(p.c, x))
            if best is None or (val < best if p.sense == "min" else val > best):
                best = val
    return best


def test_rounds_down():
    out = solve_ilp(LpProblem(((2,), (-1,)), (3, 0), (1,), "max"))
    assert out.status == "optimal" and out.x == (1,) and out.value == 1


def test_infeasible():
    assert solve_ilp(LpProblem(((-1,), (1,)), (-1, 0), (1,))).status == "infeasible"


def test_covering_example():
    p = LpProblem(((-3, -5),), (-7,), (1, 1), lower=(0, 0), upper=(4, 4))
    # all 25 integer points of the box: the cheapest cover has value 2
    assert brute_ilp(p) == 2
    out = solve_ilp(p)
    assert out.status == "optimal" and out.value == 2 and out.x == (1, 1)


def test_unbounded_with_integer_point():
    assert solve_ilp(LpProblem(((-1,),), (0,), (-1,))).status == "unbounded"


def test_unbounded_relaxation_without_integer_points():
    # 2(x1 - x2) = 1 has a line of rational solutions but no integer one
    p = LpProblem(((2, -2), (-2, 2)), (1, -1), (1, 0))
    assert solve_ilp(p).status == "infeasible"
    assert find_integer_point(p) is None


def test_probe_cap_gives_undecided():
    p = LpProblem(((3, -3), (-3, 3)), (1, -1), (1, 0))
    with pytest.raises(IlpUndecided):
        find_integer_point(p, probe_cap=1)


def test_rational_objective():
    p = LpProblem(((1, 1),), (3,), (Fraction(-1, 3), Fraction(-1, 2)), lower=(0, 0), upper=(2, 2))
    out = solve_ilp(p)
    assert out.value == brute_ilp(p) == Fraction(-4, 3)


@st.composite
def bounded_ilps(draw):
    n = draw(st.integers(1, 3))
    m = draw(st.integers(0, 3))
    A = tuple(tuple(draw(st.integers(-5, 5)) for _ in range(n)) for _ in range(m))
    b = tuple(draw(st.integers(-8, 10)) for _ in range(m))
    c = tuple(draw(st.fractions(min_value=-5, max_value=5, max_denominator=4)) for _ in range(n))
    lo = tuple(draw(st.integers(-4, 0)) for _ in range(n))
    hi = tuple(draw(st.integers(0, 4)) for _ in range(n))
    return LpProblem(A, b, c, draw(st.sampled_from(["min", "max"])), lo, hi)


@settings(max_examples=150, deadline=None)
@given(bounded_ilps())
def test_matches_enumeration(p):
    out = solve_ilp(p)
    expected = brute_ilp(p)
    if expected is None:
        assert out.status == "infeasible"
    else:
        assert out.status == "optimal" and out.value == expected
        assert all(isinstance(v, int) for v in out.x)
        assert all(sum(a * v for a, v in zip(r, out.x)) <= bi for r, bi in zip(p.A, p.b))


@settings(max_examples=80, deadline=None)
@given(bounded_ilps(), st.lists(st.integers(-3, 3), min_size=3, max_size=3), st.integers(-4, 6))
def test_extra_constraint_never_improves(p, row, rhs):
    base = solve_ilp(p)
    q = LpProblem(p.A + (tuple(row[: p.num_vars]),), p.b + (rhs,), p.c, p.sense, p.lower, p.upper)
    more = solve_ilp(q)
    if base.status == "infeasible":
        assert more.status == "infeasible"
    elif more.status == "optimal":
        assert more.value >= base.value if p.sense == "min" else more.value <= base.value
