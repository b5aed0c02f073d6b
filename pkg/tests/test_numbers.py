from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from tentlimit.numbers import (
    AmbiguousComparison,
    QuadraticNumber,
    TrackedFloat,
    exact_sorted,
    parse_number,
    to_canonical,
)

fracs = st.fractions(min_value=-10, max_value=10, max_denominator=50)
quads = st.builds(lambda a, b: QuadraticNumber(a, b, 5), fracs, fracs)


def test_canonical_strings():
    assert to_canonical(Fraction(3, 8)) == "3/8"
    assert to_canonical(QuadraticNumber(Fraction(1, 4), Fraction(1, 4), 5)) == "(1+sqrt5)/4"
    assert to_canonical(Fraction(2)) == "2"


@given(quads)
def test_quadratic_roundtrip(x):
    assert parse_number(to_canonical(x)) == x


@given(quads, quads)
def test_field_ops(x, y):
    assert (x + y) - y == x
    if y != 0:
        assert (x * y) / y == x
    assert (x < y) == (float(x) < float(y)) or abs(float(x) - float(y)) < 1e-12


@given(st.lists(quads, max_size=20))
def test_exact_sorted_matches_sorted(xs):
    assert exact_sorted(xs) == sorted(xs)


def test_golden_square():
    phi = QuadraticNumber(Fraction(1, 2), Fraction(1, 2), 5)
    assert phi * phi == phi + 1


def test_tracked_ambiguous():
    a = TrackedFloat(0.5, 1e-3)
    with pytest.raises(AmbiguousComparison):
        _ = a < TrackedFloat(0.5005)
    assert TrackedFloat(0.4, 1e-6) < 0.5
