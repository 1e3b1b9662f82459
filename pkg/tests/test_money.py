from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from dochire.money import (
    MoneyError,
    format_money,
    format_money_fixed,
    parse_money,
)


def test_parse_decimal_forms():
    assert parse_money("2.5") == Fraction(5, 2)
    assert parse_money("10") == Fraction(10)
    assert parse_money("0.000001") == Fraction(1, 10**6)
    assert parse_money(".5") == Fraction(1, 2)
    assert parse_money("5.") == Fraction(5)
    assert parse_money("-3", allow_negative=True) == Fraction(-3)


def test_parse_rational_form():
    assert parse_money("10/3") == Fraction(10, 3)
    assert parse_money("25/3") == Fraction(25, 3)


@pytest.mark.parametrize(
    "bad",
    ["", "  ", "1.2.3", "1e5", "abc", "1_000", "0.1234567", "1/0", "--1"],
)
def test_parse_rejects_garbage(bad):
    with pytest.raises(MoneyError):
        parse_money(bad)


def test_parse_rejects_negative_by_default():
    with pytest.raises(MoneyError):
        parse_money("-1")


def test_format_decimal_and_rational():
    assert format_money(Fraction(5, 2)) == "2.5"
    assert format_money(Fraction(10)) == "10"
    assert format_money(Fraction(10, 3)) == "10/3"
    assert format_money(Fraction(0)) == "0"
    assert format_money(Fraction(-5, 4)) == "-1.25"


def test_format_fixed_rounds_half_even():
    assert format_money_fixed(Fraction(25, 3)) == "8.333333"
    assert format_money_fixed(Fraction(10, 3)) == "3.333333"
    assert format_money_fixed(Fraction(100)) == "100.000000"
    # Exact ties at the seventh digit go to the even sixth digit.
    assert format_money_fixed(Fraction(5, 10**7)) == "0.000000"
    assert format_money_fixed(Fraction(15, 10**7)) == "0.000002"
    assert format_money_fixed(Fraction(25, 10**7)) == "0.000002"
    assert format_money_fixed(Fraction(2, 3), digits=2) == "0.67"


@given(
    st.fractions(
        min_value=Fraction(0),
        max_value=Fraction(10**9),
    )
)
def test_round_trip_any_fraction(value):
    # Terminating values come back as decimals, the rest as p/q; both must
    # parse back to the identical value.
    assert parse_money(format_money(value)) == value


@given(st.integers(min_value=0, max_value=10**12))
def test_round_trip_six_digit_decimals(micros):
    value = Fraction(micros, 10**6)
    text = format_money(value)
    assert "/" not in text
    assert parse_money(text) == value
