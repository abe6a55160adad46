from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from ciqp.numeric import as_rational, ceil_sqrt, format_rational, parse_rational


@pytest.mark.parametrize("x, expected", [(17, 5), (16, 4), (Fraction(3, 2), 2), (0, 0), (1, 1),
                                         (Fraction(1, 10**9), 1)])
def test_ceil_sqrt_examples(x, expected):
    assert ceil_sqrt(x) == expected


def test_ceil_sqrt_rejects_negative():
    with pytest.raises(ValueError):
        ceil_sqrt(Fraction(-1, 3))


@given(st.fractions(min_value=0, max_denominator=10**6) | st.integers(min_value=0, max_value=10**40))
def test_ceil_sqrt_is_tight(x):
    g = ceil_sqrt(x)
    assert g * g >= x
    if g >= 1:
        assert (g - 1) ** 2 < x


big = st.integers(min_value=-10**30, max_value=10**30)
nonzero = big.filter(lambda v: v != 0)


@given(big, nonzero, big, nonzero)
def test_rational_round_trip(a, b, c, d):
    x, y = Fraction(a, b), Fraction(c, d)
    assert (x + y) - y == x
    assert x.denominator > 0


@pytest.mark.parametrize("text, value", [("-9/2", Fraction(-9, 2)), ("0.1", Fraction(1, 10)),
                                         ("3", Fraction(3)), ("1e-2", Fraction(1, 100)),
                                         (" 4/6 ", Fraction(2, 3))])
def test_parse_rational(text, value):
    assert parse_rational(text) == value


@pytest.mark.parametrize("text", ["", "abc", "1/0", "nan", "inf"])
def test_parse_rational_rejects(text):
    with pytest.raises(ValueError):
        parse_rational(text)


def test_format_rational():
    assert format_rational(-9) == "-9/1"
    assert format_rational(Fraction(-9, 2)) == "-9/2"


def test_floats_are_refused():
    with pytest.raises(TypeError):
        as_rational(0.5)
