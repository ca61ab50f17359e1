from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from pisotlab.errors import MixedFields, ParseError
from pisotlab.field import (
    AlgebraicNumber,
    element_from_json,
    element_to_json,
    evaluate,
    floor_of,
    format_element,
    nearest_integer,
    parse_element,
    sign,
    trace_of,
)
from pisotlab.lattice import derivative_at_beta, xi0
from pisotlab.polynomial import parse_polynomial

coeff = st.integers(-50, 50)


def elements(poly):
    return st.builds(
        lambda c, d: AlgebraicNumber(poly, c, d),
        st.lists(coeff, min_size=poly.m, max_size=poly.m),
        st.integers(1, 30),
    )


def as_mp(a):
    return oracles.value(a.poly.k, a.num, a.den)


def test_beta_relation(trib):
    b = AlgebraicNumber.beta(trib)
    assert b**3 == 1 + b + b**2


def test_negative_powers(trib):
    b = AlgebraicNumber.beta(trib)
    assert AlgebraicNumber.beta_power(trib, -5) * b**5 == 1
    assert AlgebraicNumber.one(trib).div_beta().mul_beta() == 1


def test_golden_inverse(golden):
    b = AlgebraicNumber.beta(golden)
    inv = (2 * b - 1).inverse()
    assert inv == AlgebraicNumber(golden, (-1, 2), 5)


def test_xi0_times_derivative(trib, smallest, golden):
    for p in (trib, smallest, golden):
        assert xi0(p) * derivative_at_beta(p) == 1


def test_floor_exact_integer_and_power(silver):
    b = AlgebraicNumber.beta(silver)
    assert floor_of(b**2) == 5
    assert floor_of(AlgebraicNumber.from_int(silver, -3)) == -3
    assert floor_of(AlgebraicNumber.from_fraction(silver, Fraction(-1, 2))) == -1


def test_nearest_integer_refuses_half(golden):
    with pytest.raises(Exception):
        nearest_integer(AlgebraicNumber.from_fraction(golden, Fraction(1, 2)))


def test_trace_of_xi0_vanishes(trib):
    # Tr(beta^j / g'(beta)) = 0 for j < m - 1 (Euler)
    x = xi0(trib)
    assert trace_of(x) == 0
    assert trace_of(x.mul_beta()) == 0
    assert trace_of(x.mul_beta().mul_beta()) == 1


def test_mixed_fields(golden, trib):
    with pytest.raises(MixedFields):
        AlgebraicNumber.one(golden) + AlgebraicNumber.one(trib)


def test_json_and_text_round_trip(trib):
    x = xi0(trib)
    assert element_from_json(trib, element_to_json(x)) == x
    assert parse_element(trib, format_element(x)) == x
    assert parse_element(trib, "(1+9b-4b^2)/22") == x
    assert parse_element(trib, "beta") == AlgebraicNumber.beta(trib)
    assert element_to_json(x) == {"num": ["1", "9", "-4"], "den": "22"}


def test_parse_rejects_garbage(trib):
    with pytest.raises(ParseError):
        parse_element(trib, "1+q")


@settings(max_examples=60, deadline=None)
@given(st.data())
def test_field_axioms(data):
    p = parse_polynomial("x^3-x^2-x-1")
    a, b, c = (data.draw(elements(p)) for _ in range(3))
    assert (a + b) * c == a * c + b * c
    assert a * b == b * a
    assert (a - a).is_zero()
    if not a.is_zero():
        assert a * a.inverse() == 1


@settings(max_examples=60, deadline=None)
@given(st.data())
def test_enclosure_contains_oracle_value(data):
    p = parse_polynomial("x^3-x-1")
    a = data.draw(elements(p))
    iv = evaluate(a, 100)
    with mpmath.workdps(60):
        v = as_mp(a)
        assert iv.lower - Fraction(1, 10**40) <= Fraction(mpmath.nstr(v, 55)) <= iv.upper + Fraction(1, 10**40)
    s = sign(a)
    assert s == (0 if a.is_zero() else (1 if v > 0 else -1))
    assert floor_of(a) == int(mpmath.floor(v))
